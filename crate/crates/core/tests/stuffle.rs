use apery_core::stuffle::*;

fn all_up_to(w: u32) -> Vec<Vec<u32>> {
    (0..=w).flat_map(compositions_of_weight).collect()
}

fn sym(c: &[u32]) -> FormalSum {
    FormalSum::symbol(c)
}

#[test]
fn commutative_through_weight_five() {
    let comps = all_up_to(5);
    let mut pairs = 0;
    for a in &comps {
        for b in &comps {
            let w: u32 = a.iter().chain(b).sum();
            if w > 5 {
                continue;
            }
            assert_eq!(sym(a).stuffle(&sym(b)), sym(b).stuffle(&sym(a)), "{a:?} * {b:?}");
            pairs += 1;
        }
    }
    assert!(pairs > 100);
}

#[test]
fn associative_through_weight_five() {
    let comps = all_up_to(5);
    for a in &comps {
        for b in &comps {
            for c in &comps {
                let w: u32 = a.iter().chain(b).chain(c).sum();
                if w > 5 {
                    continue;
                }
                let left = sym(a).stuffle(&sym(b)).stuffle(&sym(c));
                let right = sym(a).stuffle(&sym(b).stuffle(&sym(c)));
                assert_eq!(left, right, "({a:?} * {b:?}) * {c:?}");
            }
        }
    }
}

#[test]
fn products_agree_with_exact_partial_sums() {
    for a in all_up_to(3) {
        for b in all_up_to(3) {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            assert!(verify_stuffle_numeric(&a, &b, 30), "{a:?} * {b:?}");
        }
    }
}

#[test]
fn harmonic_square_to_two_hundred() {
    let p = quasi_shuffle(&[1], &[1]).unwrap();
    let mut stated = FormalSum::zero();
    stated.add_term(vec![1, 1], 2);
    stated.add_term(vec![2], 1);
    assert_eq!(p, stated);
    assert!(verify_stuffle_numeric(&[1], &[1], 200));
}

#[test]
fn coefficient_sum_counts_interleavings() {
    // with all coefficients 1 in the symbols, the total mass of (1^r) ⋆ (1^s)
    // is the Delannoy number D(r, s)
    let delannoy = |r: usize, s: usize| -> i64 {
        let mut d = vec![vec![1i64; s + 1]; r + 1];
        for i in 1..=r {
            for j in 1..=s {
                d[i][j] = d[i - 1][j] + d[i][j - 1] + d[i - 1][j - 1];
            }
        }
        d[r][s]
    };
    for r in 1..=4 {
        for s in 1..=4 {
            let p = quasi_shuffle(&vec![1; r], &vec![1; s]).unwrap();
            assert_eq!(p.terms().map(|(_, c)| c).sum::<i64>(), delannoy(r, s));
        }
    }
}
