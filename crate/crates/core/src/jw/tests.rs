use super::*;
use crate::diagram::{compose, partial_close, tensor};
use crate::ring::{LocalRing, RatField};

fn q(n: i64) -> RatFunc {
    qnum::quantum(n).into()
}

fn chi(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).unwrap()
}

fn ratio(a: i64, b: i64) -> RatFunc {
    q(a).div(&q(b)).unwrap()
}

/// Morphism equality up to zero terms.
fn same<R: CoeffRing>(ring: &R, a: &Morphism<R::Elem>, b: &Morphism<R::Elem>) -> bool {
    a.sub(ring, b).unwrap().is_zero()
}

/// jw_n by the two-term recursion, independently of the clasp engine.
fn jw_recursive(n: usize) -> Morphism<RatFunc> {
    let r = RatField;
    let mut cur = Morphism::identity(&r, 1.min(n));
    if n == 0 {
        return Morphism::identity(&r, 0);
    }
    for k in 2..=n {
        let a = tensor(&r, &cur, &Morphism::identity(&r, 1));
        let u = Morphism::generator(&r, k, k - 1).unwrap();
        let aua = compose(&r, &a, &compose(&r, &u, &a).unwrap()).unwrap();
        cur = a.sub(&r, &aua.scale(&r, &ratio(k as i64 - 1, k as i64))).unwrap();
    }
    cur
}

#[test]
fn den_and_ratio_basics() {
    assert_eq!(Den::quantum(6).to_poly(), qnum::quantum(6));
    assert_eq!(Den::factorial(4).to_poly(), qnum::quantum(2).mul(&qnum::quantum(3)).mul(&qnum::quantum(4)));
    let r = PsiRatio::quantum_ratio(&[6], &[3]).unwrap();
    assert_eq!(r.to_ratfunc(), ratio(6, 3));
    assert!(r.den.is_one());
    let neg = PsiRatio::quantum_ratio(&[-2], &[3]).unwrap();
    assert_eq!(neg.to_ratfunc(), ratio(2, 3).neg());
    assert!(PsiRatio::quantum_ratio(&[0], &[3]).unwrap().is_zero());
    assert!(PsiRatio::quantum_ratio(&[1], &[0]).is_err());
}

#[test]
fn jw2_is_id_minus_cup_cap() {
    let r = RatField;
    let want = Morphism::identity(&r, 2)
        .sub(&r, &Morphism::generator(&r, 2, 1).unwrap().scale(&r, &q(2).inv().unwrap()))
        .unwrap();
    assert_eq!(jw(2).sorted_terms(), want.sorted_terms());
    assert!(same(&r, &jw(0), &Morphism::identity(&r, 0)));
    assert!(same(&r, &jw(1), &Morphism::identity(&r, 1)));
}

#[test]
fn jw_matches_recursion() {
    let r = RatField;
    for n in 2..=6 {
        assert!(same(&r, &jw(n), &jw_recursive(n)), "n = {n}");
    }
}

#[test]
fn jw_idempotent_capkill_trace() {
    let r = RatField;
    for n in 1..=6 {
        let p = jw(n);
        assert!(same(&r, &compose(&r, &p, &p).unwrap(), &p), "idempotent n={n}");
        assert!(same(&r, &p.star(), &p));
        for i in 1..n {
            assert!(p.left_generator(&r, i).is_zero(), "cap kill n={n} i={i}");
        }
        let tr = partial_close(&r, &p, 1).unwrap();
        let want = jw(n - 1).scale(&r, &ratio(n as i64 + 1, n as i64));
        assert!(same(&r, &tr, &want), "trace n={n}");
    }
}

#[test]
fn engine_agrees_across_rings() {
    let n = 5;
    let exact = jw_frac(n);
    let pt = FpPoint::new(1_000_003, 12345);
    let op = LinearOp::clasp(n, n, 0);
    let at = apply_op(&pt, &op, &Morphism::identity(&pt, n), 0).unwrap().at_point(&pt).unwrap();
    let e = pt.inv(&pt.eval(&exact.den.to_poly())).unwrap();
    for (d, c) in &exact.num.terms {
        assert_eq!(at.coeff(&pt, d), pt.mul(&pt.eval(c), &e));
    }
}

#[test]
fn td_cutoff_keeps_top_terms() {
    let n = 6;
    let full = jw_frac(n);
    let op = LinearOp::clasp(n, n, 0);
    let cut = apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, n), 4).unwrap();
    let mut f = full.num.clone();
    f.keep_td_at_least(4);
    assert!(same(&IntPolyRing, &f, &cut.num));
}

#[test]
fn offset_clasp_absorbed() {
    let r = RatField;
    let n = 5;
    let big = LinearOp::clasp(n, n, 0);
    let small = LinearOp::clasp(n, 3, 1);
    let op = big.then(&small).unwrap();
    let got = apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, n), 0).unwrap().to_ratfunc();
    assert!(same(&r, &got, &jw(n)));
}

#[test]
fn lambda_values() {
    let c = chi(3, 2);
    // n = 4: 5 = [1,2], S = {0} gives 4[S] = 0 and λ = [1]/[3].
    assert_eq!(lambda_coeff(4, &[0], &c).unwrap(), ratio(1, 3));
    assert_eq!(lambda_coeff(4, &[], &c).unwrap(), RatFunc::one());
    // Individual λ need not be local: 6 = [1,1] under (5,3) gives [4]/[5].
    let c53 = chi(5, 3);
    assert_eq!(lambda_coeff(5, &[0], &c53).unwrap(), ratio(4, 5));
    assert!(!c53.is_local(&lambda_coeff(5, &[0], &c53).unwrap()));
    for n in 0..=40u64 {
        for s in digits::down_admissible_sets(n, &c53) {
            let l = lambda(n, &s.indices, &c53).unwrap();
            assert!(!l.is_zero(), "n={n} S={s}");
            assert_eq!(l.inv().unwrap().inv().unwrap(), l);
        }
    }
}

#[test]
fn x_idempotents_orthogonal() {
    let c = chi(3, 2);
    let r = RatField;
    let n = 4u64;
    let sets = digits::down_admissible_sets(n, &c);
    assert_eq!(sets.len(), 2);
    let xs: Vec<_> = sets
        .iter()
        .map(|s| x_idem(n, &s.indices, &c).unwrap().scale(&r, &lambda_coeff(n, &s.indices, &c).unwrap()))
        .collect();
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            let ab = compose(&r, a, b).unwrap();
            if i == j {
                assert!(same(&r, &ab, a));
            } else {
                assert!(ab.is_zero());
            }
        }
    }
}

#[test]
fn mixed_jw_small() {
    let c = chi(3, 2);
    let lr = LocalRing { chi: c.clone() };
    for n in [1u64, 2, 4, 5, 6, 7] {
        let p = mixed_jw(n, &c).unwrap();
        assert!(same(&lr, &compose(&lr, &p, &p).unwrap(), &p), "n={n}");
        assert!(same(&lr, &p.star(), &p));
    }
    // Below ℓ−1 nothing happens.
    let j = mixed_jw(1, &c).unwrap();
    assert_eq!(j.len(), 1);
}

#[test]
fn mother_sum_matches_definition() {
    let c = chi(3, 2);
    for n in [4u64, 7, 9] {
        let a = mixed_jw_op(n, &c).unwrap();
        let b = mother_sum_op(n, &c).unwrap();
        let id = Morphism::identity(&IntPolyRing, n as usize);
        let fa = apply_op(&IntPolyRing, &a, &id, 0).unwrap().to_ratfunc();
        let fb = apply_op(&IntPolyRing, &b, &id, 0).unwrap().to_ratfunc();
        assert!(same(&RatField, &fa, &fb), "n={n}");
    }
}

#[test]
fn specialized_jw_idempotent() {
    let c = chi(3, 2);
    let f = c.field().unwrap();
    for n in [2u64, 4, 5, 6] {
        let p = specialized_jw(n, &c).unwrap();
        assert!(same(&f, &compose(&f, &p, &p).unwrap(), &p), "n={n}");
    }
}

#[test]
fn ladder_morphisms_compose() {
    let c = chi(3, 2);
    // 4 → 0 caps both strands of jw_2 ⊗ id_2.
    let d = down_morphism(Family::Classical, 4, &[0], &c).unwrap();
    assert_eq!((d.op.source, d.op.target), (4, 0));
    let u = up_morphism(Family::Classical, 0, &[0], &c).unwrap();
    assert_eq!((u.op.source, u.op.target), (0, 4));
    assert!(down_morphism(Family::Mixed, 4, &[1], &c).is_err());
}

#[test]
fn table_respects_cap() {
    let t = JwTable::with_max_n(chi(3, 2), 4);
    assert!(t.jw(3).is_ok());
    assert!(matches!(t.jw(5), Err(Error::ScaleLimit(_))));
    assert_eq!(t.jw(3).unwrap().len(), jw(3).len());
}
