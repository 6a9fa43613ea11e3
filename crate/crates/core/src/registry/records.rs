use std::fmt;

use super::expr::*;
use crate::apery::DkKind;
use crate::stuffle::FormalSum;

/// One point of a parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint {
    pub bindings: Vec<(String, ConstExpr)>,
}

impl ParamPoint {
    pub fn new(bindings: &[(&str, ConstExpr)]) -> Self {
        ParamPoint { bindings: bindings.iter().map(|(n, v)| (n.to_string(), v.clone())).collect() }
    }

    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.bindings.iter().map(|(n, _)| n.as_str()).collect();
        v.sort();
        v
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bindings.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The checkable content of a record.
#[derive(Clone, Debug)]
pub enum IdentityBody {
    /// lhs = rhs, at every point of `grid` (or once if the grid is empty).
    Equation { lhs: ConstExpr, rhs: ConstExpr, grid: Vec<ParamPoint> },
    /// ζ_{n−1}(a) · ζ_{n−1}(b) = `stated`, checked exactly for all n ≤ `up_to`.
    Stuffle { a: Vec<u32>, b: Vec<u32>, stated: FormalSum, up_to: u64 },
}

/// A one-sided limit `expr → target` as `param → 1⁻`, checked at
/// param = 1 − ε for each ε against the envelope ε(1 + ln²ε).
#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub expr: ConstExpr,
    pub target: ConstExpr,
    pub param: String,
    /// Exponents e with ε = 10^−e.
    pub offsets: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct IdentityRecord {
    pub id: String,
    pub description: String,
    pub paper_ref: String,
    pub body: IdentityBody,
    pub limit: Option<LimitCheck>,
}

impl IdentityRecord {
    fn equation(id: &str, description: &str, paper_ref: &str, lhs: ConstExpr, rhs: ConstExpr) -> Self {
        IdentityRecord {
            id: id.into(),
            description: description.into(),
            paper_ref: paper_ref.into(),
            body: IdentityBody::Equation { lhs, rhs, grid: vec![] },
            limit: None,
        }
    }

    fn on_grid(mut self, points: Vec<ParamPoint>) -> Self {
        if let IdentityBody::Equation { grid, .. } = &mut self.body {
            *grid = points;
        }
        self
    }

    pub fn lhs(&self) -> Option<&ConstExpr> {
        match &self.body {
            IdentityBody::Equation { lhs, .. } => Some(lhs),
            IdentityBody::Stuffle { .. } => None,
        }
    }

    pub fn rhs(&self) -> Option<&ConstExpr> {
        match &self.body {
            IdentityBody::Equation { rhs, .. } => Some(rhs),
            IdentityBody::Stuffle { .. } => None,
        }
    }

    pub fn default_params(&self) -> &[ParamPoint] {
        match &self.body {
            IdentityBody::Equation { grid, .. } => grid,
            IdentityBody::Stuffle { .. } => &[],
        }
    }

    /// Names of the grid parameters, sorted.
    pub fn param_names(&self) -> Vec<String> {
        match self.lhs().zip(self.rhs()) {
            Some((l, r)) => {
                let mut s = l.params();
                s.extend(r.params());
                s.into_iter().collect()
            }
            None => vec![],
        }
    }
}

fn u_grid() -> Vec<ParamPoint> {
    [q(-1, 2), int(-1), int(-2), int(-3)]
        .into_iter()
        .map(|u| ParamPoint::new(&[("u", u)]))
        .collect()
}

fn x_grid() -> Vec<ParamPoint> {
    [q(1, 5), q(1, 2), gf(), q(4, 5)]
        .into_iter()
        .map(|x| ParamPoint::new(&[("x", x)]))
        .collect()
}

fn gf2() -> ConstExpr {
    gf().pow(2)
}

fn l21(x: ConstExpr) -> ConstExpr {
    li_multi(&[2, 1], x)
}

fn l31(x: ConstExpr) -> ConstExpr {
    li_multi(&[3, 1], x)
}

/// y(u) = (1 − √(u/(u−4))) / (1 + √(u/(u−4))).
fn y_of_u(u: ConstExpr) -> ConstExpr {
    let s = sqrt(u.clone() * (u - int(4)).recip());
    (int(1) - s.clone()) * (int(1) + s).recip()
}

/// Right-hand sides of the two Davydychev–Kalmykov sums in y.
fn dk_tree(kind: DkKind, y: ConstExpr) -> ConstExpr {
    let my = -y.clone();
    let ly = ln(y.clone());
    let l1 = ln(int(1) - y.clone());
    let (z2, z3, z4) = (zeta(2), zeta(3), zeta(4));
    let common = call(Func::HM1001, vec![y.clone()]) * int(4) + l31(y.clone().pow(2)) - int(4) * l31(my.clone())
        - int(6) * li(4, my.clone())
        + int(4) * l21(my.clone()) * ly.clone()
        - int(2) * l21(y.clone().pow(2)) * ly.clone()
        + int(4) * li(3, my.clone()) * l1.clone()
        + int(2) * li(3, my.clone()) * ly.clone()
        - int(4) * li(2, my) * ly.clone() * l1.clone();
    match kind {
        DkKind::H => {
            common - int(4) * l31(y.clone()) - int(2) * li(4, y.clone())
                + int(4) * l21(y.clone()) * ly.clone()
                + int(2) * li(3, y.clone()) * ly.clone()
                - li(2, y.clone()) * ly.clone().pow(2)
                - q(1, 3) * ly.clone().pow(3) * l1.clone()
                + q(1, 24) * ly.clone().pow(4)
                + int(2) * z2.clone() * li(2, y)
                - q(1, 2) * z2.clone() * ly.clone().pow(2)
                + int(2) * z2 * ly.clone() * l1.clone()
                + int(6) * z3.clone() * l1
                - int(3) * z3 * ly
                - int(4) * z4
        }
        DkKind::H2 => {
            common - int(8) * l31(y.clone()) + int(2) * li(4, y.clone()) - li(2, y.clone()).pow(2)
                + int(8) * l21(y.clone()) * ly.clone()
                + q(1, 48) * ly.clone().pow(4)
                - int(4) * li(3, y.clone()) * l1.clone()
                + int(2) * li(2, y.clone()) * ly.clone() * l1.clone()
                - q(1, 2) * li(2, y.clone()) * ly.clone().pow(2)
                - q(1, 6) * ly.clone().pow(3) * l1.clone()
                + int(4) * z2.clone() * ly.clone() * l1.clone()
                - z2.clone() * ly.clone().pow(2)
                + int(10) * z3.clone() * l1
                - int(5) * z3 * ly
                + int(4) * z2 * li(2, y)
                - q(19, 2) * z4
        }
        DkKind::Diff => {
            int(4) * l31(y.clone()) - int(4) * li(4, y.clone()) + li(2, y.clone()).pow(2)
                - int(4) * l21(y.clone()) * ly.clone()
                + int(2) * li(3, y.clone()) * ly.clone()
                - q(1, 2) * li(2, y.clone()) * ly.clone().pow(2)
                + int(4) * li(3, y.clone()) * l1.clone()
                - int(2) * li(2, y.clone()) * ly.clone() * l1.clone()
                - q(1, 6) * ly.clone().pow(3) * l1.clone()
                + q(1, 48) * ly.clone().pow(4)
                - int(2) * z2.clone() * li(2, y)
                + q(1, 2) * z2.clone() * ly.clone().pow(2)
                - int(2) * z2 * ly.clone() * l1.clone()
                - int(4) * z3.clone() * l1
                + int(2) * z3 * ly
                + q(11, 2) * z4
        }
    }
}

/// Li3*(x) = ζ(3) − Li3(1−x) + ζ(2) ln(1−x) − ½ ln x ln²(1−x).
fn li3_star(x: ConstExpr) -> ConstExpr {
    let l1 = ln(int(1) - x.clone());
    zeta(3) - li(3, int(1) - x.clone()) + zeta(2) * l1.clone() - q(1, 2) * ln(x) * l1.pow(2)
}

fn landen_rhs(x: ConstExpr, y: ConstExpr) -> ConstExpr {
    let xy = x.clone() * y.clone();
    let den = (int(1) - xy.clone()).recip();
    li3_star(x.clone()) - li3_star((x.clone() - xy.clone()) * den.clone()) + li3_star(xy.clone())
        - li(3, (y.clone() - xy.clone()) * den.clone())
        + li(3, y.clone())
        - li(3, xy.clone())
        - ln(int(1) - xy) * (li(2, x.clone()) + li(2, y.clone()))
        - q(1, 2) * ln((int(1) - x) * den.clone()).pow(2) * ln((int(1) - y) * den)
}

/// ζ(2k) as a function of the grid parameter k.
fn zeta_two_k() -> ConstExpr {
    call(Func::ZetaInt, vec![int(2) * param("k")])
}

/// Every identity the library verifies, in catalogue order.
pub fn builtin_registry() -> Vec<IdentityRecord> {
    let u = || param("u");
    let x = || param("x");
    let l = ln_gf;
    let mut out = vec![
        IdentityRecord::equation(
            "I1",
            "Σ (−1)^{n−1} (10 H_n − 3/n) / (n³ C(2n,n)) = π⁴/30",
            r"=\frac{\pi^4}{30}",
            apery(int(-1), 3, "-10*H(n) + 3*INV_N"),
            q(1, 30) * pi().pow(4),
        ),
        IdentityRecord::equation(
            "I2",
            "Σ (3 H²_{n−1} + 4 H_{n−1}/n) / (n² C(2n,n)) = π⁴/360",
            r"=\frac{\pi^4}{360}",
            apery(int(1), 2, "3*H(n-1)^2 + 4*INV_N*H(n-1)"),
            q(1, 360) * pi().pow(4),
        ),
        IdentityRecord::equation(
            "I3",
            "Σ (−1)^{n−1} (H_{2n} + 4 H_n) / (n³ C(2n,n)) = 2π⁴/75",
            r"=\frac{2\pi^4}{75}",
            apery(int(-1), 3, "-H(2n) - 4*H(n)"),
            q(2, 75) * pi().pow(4),
        ),
        IdentityRecord::equation(
            "I4",
            "Σ H^{(2)}_{n−1} / (n² C(2n,n)) = 5ζ(4)/108",
            r"=\frac5{108}\ze(4)",
            apery(int(1), 2, "H2(n-1)"),
            q(5, 108) * zeta(4),
        ),
        IdentityRecord::equation(
            "I5",
            "2 Σ H_{n−1} / (n³ C(2n,n)) + 3 Σ ζ_{n−1}(1,1) / (n² C(2n,n)) = ζ(4)/18",
            r"=\frac1{18}\ze(4)",
            int(2) * apery(int(1), 3, "H(n-1)") + int(3) * apery(int(1), 2, "Z11(n-1)"),
            q(1, 18) * zeta(4),
        ),
        IdentityRecord::equation(
            "I6",
            "Σ (−1)^n H_n / (n³ C(2n,n)) in Li3(φ), Li4(φ), Li4(φ²), ln φ",
            r"\frac{12}{5}\Li_3(\gf)\ln(\gf)",
            apery(int(-1), 3, "H(n)"),
            q(12, 5) * li(3, gf()) * l() + q(3, 20) * li(4, gf2()) - q(12, 5) * li(4, gf())
                - q(6, 25) * zeta(3) * l()
                + q(13, 20) * l().pow(4)
                - q(7, 50) * pi().pow(2) * l().pow(2)
                + q(1, 50) * pi().pow(4),
        ),
        IdentityRecord::equation(
            "I7",
            "Σ (−1)^n / (n⁴ C(2n,n)) in Li3(φ), Li4(φ), Li4(φ²), ln φ",
            r"\frac{7\pi^4}{90}",
            apery(int(-1), 4, "1"),
            int(8) * li(3, gf()) * l() + q(1, 2) * li(4, gf2()) - int(8) * li(4, gf())
                - q(4, 5) * zeta(3) * l()
                + q(13, 6) * l().pow(4)
                - q(7, 15) * pi().pow(2) * l().pow(2)
                + q(7, 90) * pi().pow(4),
        ),
        IdentityRecord::equation(
            "I8",
            "Σ u^n H_{n−1} / (n³ C(2n,n)) in polylogarithms of y(u)",
            r"4 H_{-1,0,0,1}(-y)",
            apery(u(), 3, "H(n-1)"),
            dk_tree(DkKind::H, y_of_u(u())),
        )
        .on_grid(u_grid()),
        IdentityRecord::equation(
            "I9",
            "Σ u^n H_{2n−1} / (n³ C(2n,n)) in polylogarithms of y(u)",
            r"4 H_{-1,0,0,1}(-y)",
            apery(u(), 3, "H(2n-1)"),
            dk_tree(DkKind::H2, y_of_u(u())),
        )
        .on_grid(u_grid()),
        IdentityRecord::equation(
            "I10",
            "Σ u^n (H_{n−1} − H_{2n−1}) / (n³ C(2n,n)) in polylogarithms of y(u)",
            r"\frac{11}{2} \ze(4)",
            apery(u(), 3, "H(n-1) - H(2n-1)"),
            dk_tree(DkKind::Diff, y_of_u(u())),
        )
        .on_grid(u_grid()),
        IdentityRecord::equation(
            "I11",
            "Σ (−1)^n (H_{n−1} − H_{2n−1}) / (n³ C(2n,n)) at y = φ²",
            r"\frac{11}{2}\ze(4)",
            apery(int(-1), 3, "H(n-1) - H(2n-1)"),
            int(4) * l31(gf2()) - int(4) * li(4, gf2()) + li(2, gf2()).pow(2)
                - int(8) * l21(gf2()) * l()
                + int(8) * li(3, gf2()) * l()
                - int(6) * li(2, gf2()) * l().pow(2)
                - l().pow(4)
                - int(2) * zeta(2) * li(2, gf2())
                - int(2) * zeta(2) * l().pow(2)
                + q(11, 2) * zeta(4),
        ),
        IdentityRecord::equation(
            "I12",
            "Splitting of Σ (−1)^{n−1} (H_{2n} + 4H_n) / (n³ C(2n,n)) into three sums",
            r"-5\sum_{n=1}^\infty \frac{(-1)^n}{n^3\binom{2n}{n}}H_n",
            apery(int(-1), 3, "-H(2n) - 4*H(n)"),
            apery(int(-1), 3, "H(n-1) - H(2n-1)") - int(5) * apery(int(-1), 3, "H(n)")
                + q(1, 2) * apery(int(-1), 4, "1"),
        ),
        IdentityRecord::equation(
            "I13",
            "Σ (−1)^{n−1} (H_{2n} + 4H_n) / (n³ C(2n,n)) before golden-ratio reduction",
            r"-\frac9{2}\Li_4(\gf^2)",
            apery(int(-1), 3, "-H(2n) - 4*H(n)"),
            -(int(8) * li(3, gf()) * l()) - q(9, 2) * li(4, gf2()) + int(8) * li(4, gf()) + int(4) * l31(gf2())
                + li(2, gf2()).pow(2)
                - int(8) * l21(gf2()) * l()
                + int(8) * li(3, gf2()) * l()
                - int(6) * li(2, gf2()) * l().pow(2)
                - int(2) * zeta(2) * li(2, gf2())
                + q(4, 5) * zeta(3) * l()
                - q(19, 6) * l().pow(4)
                + q(2, 15) * pi().pow(2) * l().pow(2),
        ),
        IdentityRecord::equation(
            "I14",
            "Word {0, φ⁻², φ⁻²} = Li_{2,1}(φ²) = ζ(3) + π² ln φ / 10 − Li3(φ)",
            r"\Li_{2,1}(\gf^2)=\text{MZIteratedIntegral}[{0, \gf^{-2}, \gf^{-2}}]",
            call(Func::Word, vec![int(0), gf().pow(-2), gf().pow(-2)]),
            zeta(3) + q(1, 10) * pi().pow(2) * l() - li(3, gf()),
        ),
        IdentityRecord::equation(
            "I15",
            "Word {0, 0, φ⁻², φ⁻²} = Li_{3,1}(φ²) in Li4(φ), Li4(φ²), ζ(3), ln φ",
            r"\Li_{3,1}(\gf^2)=\text{MZIteratedIntegral}[{0, 0,\gf^{-2}, \gf^{-2}}]",
            call(Func::Word, vec![int(0), int(0), gf().pow(-2), gf().pow(-2)]),
            q(1, 90) * pi().pow(4) - q(1, 20) * pi().pow(2) * l().pow(2) + q(3, 8) * l().pow(4)
                + q(9, 8) * li(4, gf2())
                - int(2) * li(4, gf())
                + q(1, 5) * zeta(3) * l(),
        ),
        IdentityRecord::equation(
            "I16",
            "Li2(φ²) = π²/15 − ln²φ",
            r"\Li_2(\gf^2)=&\, \frac{\pi^2}{15}-\ln^2(\gf)",
            li(2, gf2()),
            q(1, 15) * pi().pow(2) - l().pow(2),
        ),
        IdentityRecord::equation(
            "I17",
            "Li3(φ²) = 4ζ(3)/5 − 2 ln³φ / 3 + 2π² ln φ / 15",
            r"\Li_3(\gf^2)=&\, \frac4{5}\ze(3)-\frac2{3}\ln^3(\gf)+\frac2{15}\pi^2\ln(\gf)",
            li(3, gf2()),
            q(4, 5) * zeta(3) - q(2, 3) * l().pow(3) + q(2, 15) * pi().pow(2) * l(),
        ),
        IdentityRecord::equation(
            "I18",
            "Li2(φ) = π²/10 − ln²φ",
            r"\Li_2(\gf)=\frac{\pi^2}{10}-\ln^2(\gf)",
            li(2, gf()),
            q(1, 10) * pi().pow(2) - l().pow(2),
        ),
        IdentityRecord::equation(
            "I19",
            "Li_{2,1}(x) = ζ(3) − Li3(1−x) + ln(1−x) Li2(1−x) + ½ ln x ln²(1−x)",
            r"\Li_{2,1}(x)=\ze(3)-\Li_3(1-x)",
            l21(x()),
            zeta(3) - li(3, int(1) - x()) + ln(int(1) - x()) * li(2, int(1) - x())
                + q(1, 2) * ln(x()) * ln(int(1) - x()).pow(2),
        )
        .on_grid(x_grid()),
        IdentityRecord::equation(
            "I20",
            "Li_{3,1}(x) + Li_{3,1}(1−x) in depth-one polylogarithms, Li_{2,1}(1−x) and ζ(3,1)",
            r"\Li_{3,1}(x)+\Li_{3,1}(1-x)",
            l31(x()) + l31(int(1) - x()),
            ln(x()) * (zeta(3) - li(3, int(1) - x()) + ln(int(1) - x()) * li(2, int(1) - x()))
                + mzv(&[3, 1])
                + ln(int(1) - x()) * l21(int(1) - x())
                + q(1, 4) * ln(x()).pow(2) * ln(int(1) - x()).pow(2),
        )
        .on_grid(x_grid()),
        IdentityRecord::equation(
            "I21",
            "Li_{3,1}(φ) + Li_{3,1}(φ²) = π⁴/360 + π² ln²φ / 5 − ln⁴φ / 3 − 2 ln φ Li3(φ) + 11 ζ(3) ln φ / 5",
            r"\Li_{3,1}(\gf)+\Li_{3,1}(\gf^2)=\frac{\pi^4}{360}",
            l31(gf()) + l31(gf2()),
            q(1, 360) * pi().pow(4) + q(1, 5) * pi().pow(2) * l().pow(2) - q(1, 3) * l().pow(4)
                - int(2) * l() * li(3, gf())
                + q(11, 5) * l() * zeta(3),
        ),
    ];

    let mut landen = IdentityRecord::equation(
        "I22",
        "Two-variable Li_{2,1}(y, x) through Li3* and depth-one polylogarithms",
        r"\Li_3^*(x) = \Li_3(1)- \Li_3(1-x)",
        mpl(&[2, 1], vec![param("y"), x()]),
        landen_rhs(x(), param("y")),
    )
    .on_grid(
        [q(3, 10), q(7, 10)]
            .into_iter()
            .flat_map(|xv| [q(1, 5), q(1, 2)].into_iter().map(move |yv| ParamPoint::new(&[("x", xv.clone()), ("y", yv)])))
            .collect(),
    );
    let y = gf2();
    let xy = x() * y.clone();
    landen.limit = Some(LimitCheck {
        expr: li3_star(x()) - li3_star((x() - xy.clone()) * (int(1) - xy).recip()),
        target: zeta(2) * ln(int(1) - y),
        param: "x".into(),
        offsets: vec![4, 6],
    });
    out.push(landen);

    out.push(
        IdentityRecord::equation(
            "I23",
            "Nielsen S_{a,b}(z) from its integral equals Li_{a+1,1,…,1}(z)",
            r"=\Li_{a+1,1_{b-1}}(z)",
            call(Func::NielsenIntegral, vec![param("a"), param("b"), param("z")]),
            call(Func::Nielsen, vec![param("a"), param("b"), param("z")]),
        )
        .on_grid(
            [(1, 2), (2, 2), (1, 3)]
                .into_iter()
                .flat_map(|(a, b)| {
                    [q(3, 10), gf2()]
                        .into_iter()
                        .map(move |z| ParamPoint::new(&[("a", int(a)), ("b", int(b)), ("z", z)]))
                })
                .collect(),
        ),
    );
    out.push(
        IdentityRecord::equation(
            "I24",
            "ζ(2k) by summation equals −B_{2k}(2πi)^{2k} / (2(2k)!)",
            r"\zeta(2k)=-\frac{B_{2k}}{2(2k)!}",
            zeta_two_k(),
            call(Func::ZetaEven, vec![param("k")]),
        )
        .on_grid((1..=6).map(|k| ParamPoint::new(&[("k", int(k))])).collect()),
    );
    let mut stated = FormalSum::zero();
    stated.add_term(vec![1, 1], 2);
    stated.add_term(vec![2], 1);
    out.push(IdentityRecord {
        id: "I25".into(),
        description: "H²_{n−1} = 2ζ_{n−1}(1,1) + H^{(2)}_{n−1}, exactly".into(),
        paper_ref: r"H^2_{n-1}=2\ze_{n-1}(1,1)+H_{n-1}^{(2)}".into(),
        body: IdentityBody::Stuffle { a: vec![1], b: vec![1], stated, up_to: 200 },
        limit: None,
    });
    out
}

pub fn lookup(id: &str) -> Option<IdentityRecord> {
    builtin_registry().into_iter().find(|r| r.id.eq_ignore_ascii_case(id))
}
