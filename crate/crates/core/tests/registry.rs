use std::collections::BTreeSet;

use apery_core::apery::DkKind;
use apery_core::registry::*;
use apery_core::{make_context, Error};
use num_rational::BigRational;

fn single(rec: &IdentityRecord, digits: u32) -> VerificationReport {
    let mut r = verify(rec, digits, None);
    assert_eq!(r.len(), 1, "{} expected one report", rec.id);
    r.remove(0)
}

#[test]
fn catalogue_shape() {
    let reg = builtin_registry();
    assert_eq!(reg.len(), 25);
    let ids: BTreeSet<&str> = reg.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.len(), 25);
    for (i, r) in reg.iter().enumerate() {
        assert_eq!(r.id, format!("I{}", i + 1));
        assert!(!r.paper_ref.is_empty() && !r.description.is_empty());
    }
    let i14 = lookup("I14").unwrap();
    assert!(i14.paper_ref.contains(r"\Li_{2,1}(\gf^2)=\text{MZIteratedIntegral}"));
    assert!(lookup("i25").is_some());
    assert!(lookup("BOGUS").is_none());
}

#[test]
fn every_record_evaluates_at_low_precision() {
    for r in verify_all(15) {
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.text_line());
    }
}

#[test]
fn pi4_over_360_at_fifty_digits() {
    let r = single(&lookup("I2").unwrap(), 50);
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.difference.to_f64() < 1e-45);
    assert!(r.terms_used > 0);
}

#[test]
fn dk_at_golden_point() {
    let rec = lookup("I8").unwrap();
    let grid = vec![ParamPoint::new(&[("u", int(-1))])];
    let r = verify(&rec, 40, Some(&grid));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].id, "I8[u=-1]");
    assert_eq!(r[0].verdict, Verdict::Pass);
}

#[test]
fn near_boundary_depth_reduction() {
    let rec = lookup("I19").unwrap();
    let grid = vec![ParamPoint::new(&[("x", q(999, 1000))])];
    let r = &verify(&rec, 30, Some(&grid))[0];
    assert!(matches!(r.verdict, Verdict::Pass | Verdict::Uncertain), "{}", r.text_line());
    assert!(r.difference <= r.bound.add(apery_core::precision::pow10_upper(-25)));
}

#[test]
fn override_is_ignored_for_other_parameters() {
    let rec = lookup("I19").unwrap();
    let grid = vec![ParamPoint::new(&[("u", int(-1))])];
    assert_eq!(verify(&rec, 20, Some(&grid)).len(), 4);
}

#[test]
fn corrupted_coefficient_fails() {
    let mut rec = lookup("I4").unwrap();
    if let IdentityBody::Equation { rhs, .. } = &mut rec.body {
        *rhs = q(5, 107) * zeta(4);
    }
    assert_eq!(single(&rec, 30).verdict, Verdict::Fail);
}

/// Shifting any one rational literal of any right-hand side by 10⁻⁶ must be detected.
#[test]
fn mutation_sensitivity() {
    let delta = BigRational::new(1.into(), 1_000_000.into());
    let mut checked = 0;
    for rec in builtin_registry() {
        let IdentityBody::Equation { lhs, rhs, grid } = &rec.body else { continue };
        for i in 0..rhs.rational_literal_count() {
            let mutated = IdentityRecord {
                body: IdentityBody::Equation {
                    lhs: lhs.clone(),
                    rhs: rhs.perturb_literal(i, &delta),
                    grid: grid.iter().take(1).cloned().collect(),
                },
                limit: None,
                ..rec.clone()
            };
            for r in verify(&mutated, 20, None) {
                assert_eq!(r.verdict, Verdict::Fail, "{} literal #{i} survived: {}", rec.id, r.text_line());
            }
            checked += 1;
        }
    }
    assert!(checked > 200, "only {checked} literals");
}

#[test]
fn apery_sides_are_independent() {
    for rec in builtin_registry().iter().take(11) {
        let lhs = rec.lhs().unwrap().families();
        let rhs = rec.rhs().unwrap().families();
        assert_eq!(lhs, BTreeSet::from([FuncFamily::AperySeries]), "{} lhs", rec.id);
        assert!(!rhs.contains(&FuncFamily::AperySeries) && !rhs.contains(&FuncFamily::Mixed), "{} rhs", rec.id);
    }
}

#[test]
fn refinement_is_monotone() {
    let coarse = verify_all(25);
    let fine = verify_all(50);
    assert_eq!(coarse.len(), fine.len());
    for (c, f) in coarse.iter().zip(&fine) {
        assert_eq!(c.id, f.id);
        if c.id.contains("limit") {
            continue;
        }
        assert!(f.difference <= c.difference.add(c.bound).add(f.bound), "{} {} vs {}", c.id, f.abs_difference, c.abs_difference);
        assert_eq!(f.verdict, Verdict::Pass, "{}", f.text_line());
    }
}

#[test]
fn report_serialization() {
    let r = single(&lookup("I18").unwrap(), 20);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(
        keys,
        BTreeSet::from([
            "id",
            "paper_ref",
            "digits",
            "abs_difference",
            "certified_bound",
            "terms_used",
            "elapsed_seconds",
            "verdict"
        ])
    );
    assert_eq!(v["verdict"], "PASS");
    assert!(v["abs_difference"].is_string());
}

#[test]
fn expression_tree_matches_dk_primitive() {
    // the registry's own transcription against the hand-coded closed forms
    let ctx = make_context(30).unwrap();
    let rec = lookup("I9").unwrap();
    let rhs = rec.rhs().unwrap().substitute(&[("u".into(), q(-1, 2))]);
    let prim = call(Func::DkRhs(DkKind::H2), vec![q(-1, 2)]);
    let a = eval_expr(&rhs, &ctx).unwrap();
    let b = eval_expr(&prim, &ctx).unwrap();
    assert!((&a - &b).abs_upper().to_f64() < 1e-27);
}

#[test]
fn low_precision_and_bad_trees() {
    let r = verify(&lookup("I1").unwrap(), 5, None);
    assert_eq!(r[0].verdict, Verdict::Fail);
    assert!(r[0].diagnostic.is_some());
    let ctx = make_context(20).unwrap();
    assert!(matches!(eval_expr(&ConstExpr::Product(vec![]), &ctx), Err(Error::Structure(_))));
    let bad = IdentityRecord {
        body: IdentityBody::Equation { lhs: li(2, int(5)), rhs: int(0), grid: vec![] },
        ..lookup("I18").unwrap()
    };
    let r = single(&bad, 20);
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.diagnostic.unwrap().contains("lhs"));
}

#[test]
fn limit_reports() {
    let reports = verify(&lookup("I22").unwrap(), 30, None);
    let limits: Vec<_> = reports.iter().filter(|r| r.id.contains("limit")).collect();
    assert_eq!(limits.len(), 2);
    assert!(limits.iter().all(|r| r.verdict == Verdict::Pass));
    // approach: the gap shrinks as x moves toward 1
    assert!(limits[1].difference < limits[0].difference);
}
