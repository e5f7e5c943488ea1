use super::*;
use crate::cellmod::simple_dim;
use crate::jw::lambda;
use crate::linalg;
use crate::oracle::build_matrix_model;
use crate::ring::{xi, xi_poly, LocalRing};

fn chi(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).unwrap()
}

fn test_chars() -> Vec<MixedChar> {
    vec![chi(3, 2), chi(2, 3), chi(5, 3), chi(4, 3)]
}

#[test]
fn grid_containment() {
    let a = IdealGridPoint::new(1, 2).unwrap();
    let b = IdealGridPoint::new(3, 2).unwrap();
    assert!(a.contains(&b));
    assert!(!b.contains(&a));
    assert!(a.contains(&a));
    assert!(!IdealGridPoint::new(2, 1).unwrap().contains(&a));
    assert!(IdealGridPoint::new(0, 1).is_err());
}

#[test]
fn closed_form_examples() {
    let c = chi(3, 2);
    assert_eq!(xi_closed_form(1, &[0, 1, 2, 3, 4, 5], &c).unwrap(), 64);
    assert_eq!(xi_closed_form(1, &[0, 2, 3, 4, 5], &c).unwrap(), 62);
    assert_eq!(xi_closed_form(1, &[2, 3, 4, 5], &c).unwrap(), 60);
    assert_eq!(xi_closed_form(1, &[3], &c).unwrap(), 8);
    assert_eq!(xi_closed_form(2, &[3], &c).unwrap(), 0);
    assert_eq!(xi_closed_form(1, &[0], &c).unwrap(), 2);
    assert_eq!(xi_closed_form(5, &[0], &c).unwrap(), 1);
    let c = chi(5, 3);
    assert_eq!(xi_closed_form(1, &[2], &c).unwrap(), 6);
    assert_eq!(xi_closed_form(2, &[2], &c).unwrap(), 0);
    assert_eq!(xi_closed_form(1, &[0, 1, 2], &c).unwrap(), 9);
    assert_eq!(xi_closed_form(2, &[0, 1, 2], &c).unwrap(), 3);
    assert_eq!(xi_closed_form(3, &[0, 1, 2], &c).unwrap(), 1);
    assert_eq!(xi_closed_form(9, &[0, 1, 2], &c).unwrap(), 1);
    assert_eq!(xi_closed_form(1, &[], &c).unwrap(), 0);
}

#[test]
fn staircases_of_the_two_chains() {
    let c = chi(3, 2);
    let t = xi_table(200, 18, &c).unwrap();
    assert_eq!(t.rows.len(), 17);
    let left: Vec<(u64, Vec<u32>)> = vec![
        (22, vec![2, 1]),
        (46, vec![10, 2, 1]),
        (34, vec![14, 6, 2, 1]),
        (28, vec![16, 8, 4, 2, 1]),
        (76, vec![32, 16, 8, 4, 2, 1]),
        (172, vec![64, 32, 16, 8, 4, 2, 1]),
    ];
    let right: Vec<(u64, Vec<u32>)> = vec![
        (42, vec![8, 0]),
        (90, vec![24, 8, 0]),
        (78, vec![28, 12, 4, 0]),
        (174, vec![60, 28, 12, 4, 0]),
        (178, vec![62, 30, 14, 6, 2, 1]),
    ];
    for (f, h) in left.into_iter().chain(right) {
        let row = t.rows.iter().find(|r| r.factor == f).unwrap();
        assert_eq!(row.heights, h, "factor {f}");
    }
    let s42 = factor_grid_sublattice(200, 18, &[3], &c, 10).unwrap();
    assert_eq!(s42.len(), 8);
    assert!(s42.iter().all(|p| p.i == 1));
    let s22 = factor_grid_sublattice(200, 18, &[0], &c, 10).unwrap();
    assert_eq!(s22.len(), 11);
    assert!(factor_grid_sublattice(200, 18, &[], &c, 10).unwrap().is_empty());
    assert_eq!(xi_table(10000, 18, &c).unwrap().rows.len(), 42);
    assert!(t.to_csv().starts_with("factor,set,xi1"));
}

#[test]
fn staircase_regions_are_down_closed() {
    for c in test_chars() {
        for s in digits::up_admissible_sets(18, 3000, &c) {
            let reg = factor_grid_sublattice(3000, 18, &s.indices, &c, 12).unwrap();
            for p in &reg {
                for q in (1..=p.i).flat_map(|i| (1..=p.j).map(move |j| IdealGridPoint { i, j })) {
                    if xi_closed_form(q.i, &s.indices, &c).unwrap() >= 1 {
                        assert!(reg.contains(&q), "{c} {s} {p} {q}");
                    }
                }
            }
            let h: Vec<u32> = (1..=12).map(|i| xi_closed_form(i, &s.indices, &c).unwrap()).collect();
            assert!(h.windows(2).all(|w| w[0] >= w[1]));
            assert!(h[s.len()..].iter().all(|&x| x == h[s.len()]));
        }
    }
}

#[test]
fn oracle_matches_closed_form_small() {
    for c in test_chars() {
        let mut o = XiOracle::new(&c, 6).unwrap();
        for m in 0..=40u64 {
            for s in digits::up_admissible_sets(m, 400, &c) {
                let got = o.profile(&s.indices).unwrap();
                let want: Vec<u32> = (1..=6).map(|i| xi_closed_form(i, &s.indices, &c).unwrap()).collect();
                assert_eq!(got, want, "{c} m={m} S={s}");
            }
        }
    }
}

#[test]
fn oracle_special_sets() {
    for c in test_chars() {
        let want: Vec<u32> = if c.p == 2 { vec![2, 1, 1, 1] } else { vec![1; 4] };
        assert_eq!(XiOracle::new(&c, 4).unwrap().profile(&[0]).unwrap(), want);
        assert_eq!(xi_oracle(3, &[0], 0, &c).unwrap(), 1);
    }
    assert!(xi_oracle(1, &[5], 0, &chi(3, 2)).is_err());
}

/// The modular route agrees with ring::xi on the exact numerator, and the
/// full γ differs from the numerator by a unit.
#[test]
fn exact_numerator_and_unit_factors() {
    for c in test_chars() {
        for m in 0..=20u64 {
            for s in digits::up_admissible_sets(m, 90, &c) {
                let f = gamma_numerator(&s.indices, &c).unwrap();
                let g = gamma(m, &s.indices, &c).unwrap();
                for i in 1..=4 {
                    let want = xi_closed_form(i, &s.indices, &c).unwrap();
                    assert_eq!(xi_poly(i, &f, &c).unwrap(), want, "{c} m={m} S={s} i={i}");
                    assert_eq!(xi(i, &g, &c).unwrap(), want, "{c} m={m} S={s} i={i}");
                }
            }
        }
    }
}

#[test]
fn gamma_inverts_lambda() {
    for c in test_chars() {
        for m in 0..=30u64 {
            for s in digits::up_admissible_sets(m, 120, &c) {
                let top = s.target(&c);
                let g = gamma_ratio(m, &s.indices, &c).unwrap();
                assert_eq!(Some(g), lambda(top, &s.indices, &c).unwrap().inv(), "{c} m={m} S={s}");
            }
        }
        assert_eq!(gamma(5, &[], &c).unwrap(), LocalFrac::from_poly(IntPoly::one()));
    }
}

#[test]
fn gamma_from_diagrams() {
    for c in [chi(3, 2), chi(2, 3)] {
        for m in 0..=10u64 {
            for s in digits::up_admissible_sets(m, 10, &c) {
                let d = gamma_diagrammatic(m, &s.indices, &c).unwrap();
                assert_eq!(d, gamma_ratio(m, &s.indices, &c).unwrap().to_ratfunc(), "{c} m={m} S={s}");
            }
        }
    }
}

#[test]
fn qidentity() {
    for c in test_chars() {
        for k in 1..=3 {
            let f = qidentity_remainder(k, &c).unwrap();
            assert!(f.mod_u64(c.p).iter().any(|&x| x != 0));
            assert!(!f.rem_monic(&c.m_delta).is_zero());
            assert!(!c.in_max_ideal(&f));
        }
    }
}

/// dim M(I)⊗𝕜 = Σ dim L(m(S)) over factors with γ_S ∈ I.
#[test]
fn form_submodules_follow_staircases() {
    let c = chi(3, 2);
    let f = c.field().unwrap();
    let pts: Vec<IdealGridPoint> =
        [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1), (1, 5), (3, 3)].iter().map(|&(i, j)| IdealGridPoint { i, j }).collect();
    for n in 1..=8usize {
        for m in (n % 2..=n).step_by(2) {
            if m == 0 {
                continue;
            }
            let filt = form_filtration(n, m, &c, &pts).unwrap();
            let factors = cellmod::composition_factors(n as u64, m as u64, &c).unwrap();
            for (pt, basis) in &filt.layers {
                let want: usize = factors
                    .iter()
                    .filter(|(_, s)| xi_closed_form(pt.i, &s.indices, &c).unwrap() >= pt.j)
                    .map(|(t, _)| simple_dim(n, *t as usize, &c).unwrap())
                    .sum();
                assert_eq!(basis.len(), want, "W_{n}({m}) at {pt}");
            }
            let rad = &filt.layers[&IdealGridPoint { i: 1, j: 1 }];
            let g = cellmod::gram(n, m, &f).unwrap();
            assert_eq!(rad.len(), g.basis.len() - linalg::rank(&f, &g.entries));
            for a in &pts {
                for b in &pts {
                    if a.contains(b) {
                        let big = linalg::row_space(&f, &filt.layers[a], g.basis.len());
                        assert!(filt.layers[b].iter().all(|v| big.contains(&f, v)));
                    }
                }
            }
            let model = build_matrix_model(n, m, &c).unwrap();
            for layer in filt.layers.values() {
                let sp = linalg::row_space(&f, layer, g.basis.len());
                for gmat in &model.rep.gens {
                    for v in layer {
                        assert!(sp.contains(&f, &linalg::mat_vec(&f, gmat, v)));
                    }
                }
            }
        }
    }
    let _ = LocalRing { chi: c };
}
