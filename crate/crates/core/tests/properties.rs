use proptest::prelude::*;
use tlmix_core::diagram::{compose_diagrams, enumerate_diagrams};
use tlmix_core::digits::{self, Direction};
use tlmix_core::ring::{xi_poly, IntPolyRing};
use tlmix_core::{cellmod, jantzen, qnum, Error, IntPoly, MixedChar};

fn chars() -> Vec<MixedChar> {
    [(3, 2), (2, 3), (5, 3), (4, 3), (2, 2)].iter().map(|&(l, p)| MixedChar::new(l, p).unwrap()).collect()
}

fn any_char() -> impl Strategy<Value = MixedChar> {
    (0..5usize).prop_map(|k| chars()[k].clone())
}

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-30i64..30, 0..8).prop_map(|c| IntPoly::from_i64s(&c))
}

proptest! {
    #[test]
    fn poly_text_round_trip(f in poly()) {
        let back: IntPoly = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn chebyshev_recursion(n in -40i64..40) {
        let lhs = IntPoly::delta().mul(&qnum::quantum(n));
        prop_assert_eq!(lhs, qnum::quantum(n + 1).add(&qnum::quantum(n - 1)));
        prop_assert_eq!(qnum::quantum(-n), qnum::quantum(n).neg());
    }

    #[test]
    fn digits_rebuild_n(n in 0u64..200_000, chi in any_char()) {
        let e = digits::expand(n, &chi);
        let little: Vec<u64> = e.big_endian().into_iter().rev().collect();
        prop_assert_eq!(digits::from_digits(&little, &chi).unwrap(), n);
        prop_assert!(e.digit(e.top()) > 0);
    }

    #[test]
    fn support_is_the_down_reflections(n in 0u64..5000, chi in any_char()) {
        let supp = digits::support(n, &chi);
        let mut targets: Vec<u64> = digits::down_admissible_sets(n, &chi).iter().map(|s| s.target(&chi)).collect();
        targets.sort_unstable();
        targets.dedup();
        let mut s = supp.clone();
        s.sort_unstable();
        prop_assert_eq!(targets, s);
        prop_assert!(supp.contains(&n));
    }

    #[test]
    fn up_and_down_reflections_invert(m in 0u64..300, chi in any_char()) {
        for s in digits::up_admissible_sets(m, 3000, &chi) {
            let n = digits::reflect_up(m, &s.indices, &chi).unwrap();
            prop_assert!(digits::is_admissible(n, &s.indices, Direction::Down, &chi));
            prop_assert_eq!(digits::reflect_down(n, &s.indices, &chi).unwrap(), m);
            prop_assert!(digits::support(n, &chi).contains(&m));
        }
    }

    #[test]
    fn xi_decreases_in_i(m in 0u64..150, chi in any_char()) {
        for s in digits::up_admissible_sets(m, 1500, &chi) {
            let prof: Vec<u32> = (1..=6).map(|i| jantzen::xi_closed_form(i, &s.indices, &chi).unwrap()).collect();
            prop_assert!(prof.windows(2).all(|w| w[0] >= w[1]), "{:?} {:?}", s.indices, prof);
        }
    }

    #[test]
    fn xi_is_superadditive(f in poly(), g in poly(), i in 1u32..4, chi in any_char()) {
        let fg = f.mul(&g);
        let get = |h: &IntPoly| match xi_poly(i, h, &chi) {
            Ok(v) => Some(v),
            Err(Error::ZeroInput) | Err(Error::XiUnbounded(_)) => None,
            Err(e) => panic!("{e}"),
        };
        if let (Some(a), Some(b), Some(c)) = (get(&f), get(&g), get(&fg)) {
            prop_assert!(c >= a + b);
        }
        if i > 1 {
            if let (Some(lo), Some(hi)) = (get(&f), xi_poly(i - 1, &f, &chi).ok()) {
                prop_assert!(lo <= hi);
            }
        }
    }

    #[test]
    fn composition_is_associative(n in 0usize..6, a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let ds = enumerate_diagrams(n, n).unwrap();
        let (x, y, z) = (&ds[a % ds.len()], &ds[b % ds.len()], &ds[c % ds.len()]);
        let (xy, l1) = compose_diagrams(x, y).unwrap();
        let (left, l2) = compose_diagrams(&xy, z).unwrap();
        let (yz, l3) = compose_diagrams(y, z).unwrap();
        let (right, l4) = compose_diagrams(x, &yz).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(l1 + l2, l3 + l4);
    }

    #[test]
    fn star_reverses_composition(n in 0usize..6, a in 0usize..1000, b in 0usize..1000) {
        let ds = enumerate_diagrams(n, n).unwrap();
        let (x, y) = (&ds[a % ds.len()], &ds[b % ds.len()]);
        let (xy, l) = compose_diagrams(x, y).unwrap();
        let (yx, k) = compose_diagrams(&y.star(), &x.star()).unwrap();
        prop_assert_eq!(xy.star(), yx);
        prop_assert_eq!(l, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gram_matrices_are_symmetric(n in 0usize..8, k in 0usize..4) {
        let m = if 2 * k <= n { n - 2 * k } else { n % 2 };
        let g = cellmod::gram(n, m, &IntPolyRing).unwrap();
        for (i, row) in g.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(x, &g.entries[j][i]);
            }
        }
    }

    #[test]
    fn staircase_heights_settle(m in 0u64..120, chi in any_char()) {
        for s in digits::up_admissible_sets(m, 1200, &chi) {
            let st = jantzen::staircase(m, &s.indices, &chi).unwrap();
            let tail = jantzen::xi_closed_form(s.len() as u32 + 5, &s.indices, &chi).unwrap();
            prop_assert_eq!(st.stable, tail);
        }
    }
}
