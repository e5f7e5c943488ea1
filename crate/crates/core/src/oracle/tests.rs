use super::*;
use crate::ring::MixedChar;

fn chi(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).unwrap()
}

#[test]
fn small_models() {
    let c = chi(3, 2);
    let w20 = build_matrix_model(2, 0, &c).unwrap();
    assert_eq!(w20.rep.gens, vec![vec![vec![1]]]);
    let w33 = build_matrix_model(3, 3, &c).unwrap();
    assert!(w33.rep.gens.iter().all(|g| g == &vec![vec![0]]));
    let w42 = build_matrix_model(4, 2, &c).unwrap();
    assert_eq!(w42.rep.dim, 3);
    assert!(w42.rep.check_relations(&w42.field));
    assert!(matches!(build_matrix_model(13, 1, &c), Err(Error::ScaleLimit(_))));
}

#[test]
fn words_rebuild_diagrams() {
    let c = chi(5, 3);
    let model = build_matrix_model(6, 0, &c).unwrap();
    for d in crate::diagram::enumerate_diagrams(6, 6).unwrap() {
        let w = diagram_word(&d).unwrap();
        let mut e = Diagram::identity(6);
        for &i in &w {
            assert!(!e.apply_generator_top(i));
        }
        assert_eq!(e, d);
        let a = model.action_matrix(&Morphism::from_diagram(&model.field, d.clone())).unwrap();
        assert_eq!(model.rep.diagram_matrix(&model.field, &d).unwrap(), a);
    }
}

#[test]
fn cell_dimensions_square_to_catalan() {
    for n in 0..=10 {
        let s: u128 = (n % 2..=n).step_by(2).map(|m| cellmod::ballot(n, m).pow(2)).sum();
        assert_eq!(s, catalan(n));
    }
    assert_eq!(catalan(10), 16796);
}

#[test]
fn cyclic_closure() {
    let c = chi(3, 2);
    let model = build_matrix_model(6, 2, &c).unwrap();
    let f = &model.field;
    assert_eq!(cyclic_submodule(f, &model.rep, &vec![0; model.rep.dim]).dim(), 0);
    let e = cyclic_submodule(f, &model.rep, &model.coords(&model.basis.vector(f, 0)).unwrap());
    assert_eq!(e.dim(), model.rep.dim);
}

#[test]
fn lattice_audit_small() {
    for c in [chi(3, 2), chi(2, 3), chi(5, 3)] {
        for n in 0..=8 {
            for m in (n % 2..=n).step_by(2) {
                if m == 0 && c.ell == Some(2) {
                    continue;
                }
                let bad = lattice_audit(n, m, &c).unwrap();
                assert!(bad.is_empty(), "{bad:?}");
            }
        }
    }
}

/// Hom(W(m(S)), W(m)/N) ≠ 0 with N = ⟨td(< m(S))·v_{m(S)}⟩ the span of lower
/// translates; v_{m(S)} survives in the quotient.
#[test]
fn generator_gives_hom_into_quotient() {
    let c = chi(3, 2);
    let f = c.field().unwrap();
    for (n, m) in [(6usize, 0usize), (7, 1), (8, 2), (8, 0)] {
        let model = build_matrix_model(n, m, &c).unwrap();
        for s in crate::digits::up_admissible_sets(m as u64, n as u64, &c) {
            let t = s.target(&c) as usize;
            let v = model.coords(&structure::v_generator(m as u64, &s.indices, n as u64, &c).unwrap()).unwrap();
            let mut nsub = Echelon::new(model.rep.dim);
            for d in crate::diagram::enumerate_diagrams(n, n).unwrap() {
                if d.through_degree() < t {
                    let a = model.rep.diagram_matrix(&f, &d).unwrap();
                    nsub.insert(&f, &linalg::mat_vec(&f, &a, &v));
                }
            }
            let q = model.rep.quotient(&f, &nsub);
            assert!(q.check_relations(&f));
            assert!(hom_dim(t, &q, &f).unwrap() >= 1, "W_{n}({m}) S={s}");
            assert!(model.rep.quotient_coords(&f, &nsub, &v).iter().any(|&x| x != 0));
        }
    }
}

#[test]
fn generic_parameter_is_semisimple() {
    let c = chi(11, 7);
    let f = c.field().unwrap();
    for n in 1..=7usize {
        for m in (n % 2..=n).step_by(2) {
            let src = build_matrix_model(n, m, &c).unwrap();
            for r in (n % 2..=n).step_by(2) {
                let tgt = build_matrix_model(n, r, &c).unwrap();
                assert_eq!(hom_dim(m, &tgt.rep, &f).unwrap(), usize::from(r == m));
                assert_eq!(hom_dim_brute(&f, &src.rep, &tgt.rep).unwrap(), usize::from(r == m));
            }
        }
    }
}

/// The poset for (n, m) restricted to factors ≤ k is the poset for (k, m).
#[test]
fn poset_truncation() {
    let c = chi(3, 2);
    for (n, m, k) in [(9usize, 1usize, 5usize), (10, 2, 6), (10, 4, 8), (9, 3, 7)] {
        let big = poset_of_cyclic_submodules(n, m, &c).unwrap();
        let small = poset_of_cyclic_submodules(k, m, &c).unwrap();
        let keep: Vec<usize> = (0..big.sets.len()).filter(|&i| big.factors[i] <= k as u64).collect();
        assert_eq!(keep.iter().map(|&i| big.factors[i]).collect::<Vec<_>>(), small.factors);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                assert_eq!(big.below[i][j], small.below[a][b]);
            }
        }
    }
    let single = poset_of_cyclic_submodules(6, 6, &c).unwrap();
    assert_eq!(single.sets.len(), 1);
}
