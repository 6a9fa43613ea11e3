use std::process::{Command, Output};

fn apery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apery")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// The value column of a text-mode result line.
fn value_of(line: &str) -> String {
    line.split(" = ").nth(1).unwrap().split(' ').next().unwrap().to_string()
}

#[test]
fn dilogarithm_at_golden_ratio() {
    let o = apery(&["eval", "li", "2", "gf"]);
    assert_eq!(code(&o), 0);
    let closed = apery(&["eval", "const", "pi^2/10 - ln_gf^2"]);
    assert_eq!(value_of(&stdout(&o)), value_of(&stdout(&closed)));
    assert!(stdout(&o).starts_with("li 2 gf = 0.75539561953174146938652002875"));
}

#[test]
fn zero_argument() {
    let o = apery(&["eval", "li", "2", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(value_of(&stdout(&o)), format!("0.{}", "0".repeat(30)));
}

#[test]
fn word_matches_depth_two_value() {
    let w = apery(&["eval", "word", "0,gf^-2,gf^-2"]);
    let m = apery(&["eval", "mpl", "2,1", "gf^2,1"]);
    let c = apery(&["eval", "const", "zeta3 + pi^2/10*ln_gf"]);
    let li3 = apery(&["eval", "li", "3", "gf"]);
    assert_eq!(code(&w), 0);
    assert_eq!(value_of(&stdout(&w)), value_of(&stdout(&m)));
    let a: f64 = value_of(&stdout(&w)).parse().unwrap();
    let b: f64 = value_of(&stdout(&c)).parse::<f64>().unwrap() - value_of(&stdout(&li3)).parse::<f64>().unwrap();
    assert!((a - b).abs() < 1e-14);
}

#[test]
fn sums() {
    let o = apery(&["sum", "-u", "1", "-s", "2", "-w", "H2(n-1)"]);
    assert_eq!(code(&o), 0);
    let z = apery(&["eval", "const", "5/108*zeta4"]);
    assert_eq!(value_of(&stdout(&o)), value_of(&stdout(&z)));

    let o = apery(&["sum", "-u", "-1", "-s", "4", "-w", "1"]);
    assert_eq!(code(&o), 0);
    assert!(value_of(&stdout(&o)).starts_with("-0.4901504329100475917249234105"));

    assert_eq!(code(&apery(&["sum", "-u", "5", "-s", "2"])), 3);
    assert_eq!(code(&apery(&["sum", "-u", "1", "-s", "2", "-w", "H(m)"])), 2);
}

#[test]
fn eval_errors() {
    assert_eq!(code(&apery(&["eval", "li", "2", "2"])), 3);
    assert_eq!(code(&apery(&["eval", "nielsen", "1", "2", "1.5"])), 3);
    assert_eq!(code(&apery(&["eval", "bogus", "1"])), 2);
    assert_eq!(code(&apery(&["eval", "li", "two", "0.5"])), 2);
    assert_eq!(code(&apery(&["eval", "mpl", "2,1", "0.5"])), 2);
    assert_eq!(code(&apery(&["--digits", "5", "eval", "li", "2", "0.5"])), 2);
    assert_eq!(code(&apery(&["--digits", "1001", "list"])), 2);
    assert_eq!(code(&apery(&["--frobnicate", "list"])), 2);
}

#[test]
fn verify_single_and_unknown() {
    let o = apery(&["verify", "I3", "--digits", "50"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().next().unwrap().contains("PASS"));
    assert_eq!(code(&apery(&["verify", "BOGUS"])), 2);
    assert_eq!(code(&apery(&["verify"])), 2);
}

#[test]
fn verify_all_exits_zero() {
    let o = apery(&["verify", "--all", "--digits", "30"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("25 identities"));
}

#[test]
fn machine_output_is_line_delimited_json() {
    let o = apery(&["verify", "I8", "--u-grid", "-1/4,-1", "--format", "machine"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["id"], "I8[u=-1/4]");
    assert_eq!(lines[1]["verdict"], "PASS");

    let text = apery(&["eval", "li", "3", "-0.5"]);
    let machine = apery(&["--format", "machine", "eval", "li", "3", "-0.5"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&machine).trim()).unwrap();
    assert_eq!(v["value"].as_str().unwrap(), value_of(&stdout(&text)));
}

#[test]
fn listing() {
    let o = apery(&["list"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 25);
    assert!(s.lines().any(|l| l.starts_with("I25") && l.contains("H^2_{n-1}")));
    let m = apery(&["list", "--format", "machine"]);
    for l in stdout(&m).lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v["id"].is_string() && v["paper_ref"].is_string());
    }
}
