use super::*;
use crate::diagram::{enumerate_diagrams, enumerate_with_td};
use crate::jw::PsiRatio;
use crate::ring::FpPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chi(ell: u64, p: u64) -> MixedChar {
    MixedChar::new(ell, p).unwrap()
}

#[test]
fn basis_sizes_and_indexings() {
    assert_eq!(cell_basis(4, 2).unwrap().len(), 3);
    assert_eq!(cell_basis(3, 1).unwrap().len(), 2);
    assert_eq!(cell_basis(5, 5).unwrap().elements[0].diagram, Diagram::identity(5));
    assert!(matches!(cell_basis(4, 1), Err(Error::ParityMismatch(4, 1))));
    for n in 0..=10 {
        for m in (n % 2..=n).step_by(2) {
            let b = cell_basis(n, m).unwrap();
            assert_eq!(b.len() as u128, ballot(n, m));
            let all = enumerate_with_td(m, n, m).unwrap();
            assert_eq!(all.len(), b.len());
            for e in &b.elements {
                assert_eq!(diagram_to_dyck(&e.diagram), e.dyck);
                assert_eq!(e.tableau.dyck().unwrap(), e.dyck);
                assert_eq!(e.tableau.shape().first().copied().unwrap_or(0), (n + m) / 2);
                assert!(all.contains(&e.diagram));
            }
        }
    }
}

#[test]
fn action_on_small_modules() {
    let r = IntPolyRing;
    let u1 = Morphism::generator(&r, 2, 1).unwrap();
    let top = cell_basis(2, 2).unwrap().vector(&r, 0);
    assert!(act(&r, &u1, &top).unwrap().is_zero());
    let cup = cell_basis(2, 0).unwrap().vector(&r, 0);
    assert_eq!(act(&r, &u1, &cup).unwrap(), cup.scale(&r, &IntPoly::delta()));
    let b = cell_basis(5, 1).unwrap();
    for i in 0..b.len() {
        let x = b.vector(&r, i);
        assert_eq!(act(&r, &Morphism::identity(&r, 5), &x).unwrap(), x);
    }
}

#[test]
fn form_and_gram() {
    let r = IntPolyRing;
    let cup = cell_basis(2, 0).unwrap().vector(&r, 0);
    assert_eq!(bilinear(&r, &cup, &cup).unwrap(), IntPoly::delta());
    assert_eq!(gram(2, 0, &r).unwrap().entries, vec![vec![IntPoly::delta()]]);
    for n in 0..6 {
        assert_eq!(gram(n, n, &r).unwrap().entries, vec![vec![IntPoly::one()]]);
    }
    let g = gram(6, 2, &r).unwrap();
    for (i, row) in g.entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert_eq!(*x, g.entries[j][i]);
            let (a, b) = (g.basis.vector(&r, i), g.basis.vector(&r, j));
            assert_eq!(bilinear(&r, &a, &b).unwrap(), *x);
        }
    }
    // Over ℚ(δ) the form on W_4(2) is nondegenerate; on W_4(0) its
    // determinant is δ²[3], so under (3,2) the rank drops to 1.
    let pt = FpPoint::new(1_000_003, 777);
    let g4 = gram(4, 2, &pt).unwrap();
    assert_eq!(linalg::rank(&pt, &g4.entries), 3);
    assert_eq!(simple_dim(4, 0, &chi(3, 2)).unwrap(), 1);
    assert_eq!(simple_dim(4, 2, &chi(3, 2)).unwrap(), 3);
    assert!(matches!(simple_dim(4, 0, &chi(2, 3)), Err(Error::NotInLambdaZero)));
}

#[test]
fn form_is_contravariant() {
    let pt = FpPoint::new(1_000_003, 4242);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=7 {
        for m in (n % 2..=n).step_by(2) {
            let all = enumerate_diagrams(n, n).unwrap();
            let b = cell_basis(n, m).unwrap();
            let mut a = Morphism::zero(n, n);
            for _ in 0..4 {
                a.add_term(&pt, all[rng.gen_range(0..all.len())].clone(), &rng.gen_range(1..1_000_003));
            }
            let rand_vec = |rng: &mut ChaCha8Rng| {
                let v: Vec<u64> = (0..b.len()).map(|_| rng.gen_range(0..1_000_003)).collect();
                b.from_coords(&pt, &v)
            };
            let (x, y) = (rand_vec(&mut rng), rand_vec(&mut rng));
            let lhs = bilinear(&pt, &act(&pt, &a, &x).unwrap(), &y).unwrap();
            let rhs = bilinear(&pt, &x, &act(&pt, &a.star(), &y).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "n={n} m={m}");
        }
    }
}

#[test]
fn reverse_lexicographic_order() {
    let s = Tableau::new(vec![vec![1, 2, 4, 6], vec![3, 5], vec![7]]).unwrap();
    let t = Tableau::new(vec![vec![1, 2, 3, 5], vec![4, 6], vec![7]]).unwrap();
    assert_eq!(tableau_compare(&s, &t).unwrap(), Some(Ordering::Less));
    assert_eq!(tableau_compare(&t, &s).unwrap(), Some(Ordering::Greater));
    assert_eq!(tableau_compare(&s, &s).unwrap(), Some(Ordering::Equal));
    let u = Tableau::new(vec![vec![1, 2], vec![3]]).unwrap();
    assert!(matches!(tableau_compare(&s, &u), Err(Error::ShapeMismatch)));
    assert!(Tableau::new(vec![vec![2, 1]]).is_err());
    // Two rows: compare path heights at the last place they differ.
    let heights = |d: &[i8]| d.iter().scan(0i32, |h, &x| { *h += x as i32; Some(*h) }).collect::<Vec<_>>();
    for n in 1..=8 {
        for m in (n % 2..=n).step_by(2) {
            let b = cell_basis(n, m).unwrap();
            for x in &b.elements {
                for y in &b.elements {
                    let (hx, hy) = (heights(&x.dyck), heights(&y.dyck));
                    let want = (0..n).rev().find(|&i| hx[i] != hy[i]).map_or(Ordering::Equal, |i| hx[i].cmp(&hy[i]));
                    assert_eq!(tableau_compare(&x.tableau, &y.tableau).unwrap(), Some(want));
                }
            }
        }
    }
}

#[test]
fn identity_ladders_give_diagram_basis() {
    let c = chi(3, 2);
    let ll = light_leaves_basis(6, 2, LeafFamily::Identity, &c).unwrap();
    let LeafVectors::Rational(v) = &ll.vectors else { panic!() };
    for (e, x) in ll.basis.elements.iter().zip(v) {
        assert_eq!(x.sorted_terms(), vec![(&e.diagram, &RatFunc::one())]);
    }
}

#[test]
fn three_strand_example() {
    let c = chi(3, 2);
    let ll = light_leaves_basis(3, 1, LeafFamily::Classical, &c).unwrap();
    let LeafVectors::Rational(v) = &ll.vectors else { panic!() };
    let b = &ll.basis;
    let top = b.elements.iter().position(|e| e.dyck == [1, 1, -1]).unwrap();
    let low = b.elements.iter().position(|e| e.dyck == [1, -1, 1]).unwrap();
    let coords = b.coords(&RatField, &v[top]).unwrap();
    assert_eq!(coords[top], RatFunc::one());
    assert_eq!(coords[low], RatFunc::from(IntPoly::delta()).inv().unwrap().neg());
    assert_eq!(b.coords(&RatField, &v[low]).unwrap()[top], RatFunc::zero());
}

#[test]
fn unitriangular_families() {
    let c = chi(3, 2);
    for n in 1..=6 {
        for m in (n % 2..=n).step_by(2) {
            for fam in [LeafFamily::Classical, LeafFamily::Special] {
                let ll = light_leaves_basis(n, m, fam, &c).unwrap();
                assert!(ll.is_unitriangular().unwrap(), "{fam:?} n={n} m={m}");
            }
        }
    }
    let ll = light_leaves_basis(5, 1, LeafFamily::Mixed, &chi(2, 3)).unwrap();
    assert!(ll.is_unitriangular().unwrap());
}

fn doubled(k: usize) -> LinearOp {
    LinearOp::clasp(k, k, 0).scale(&PsiRatio::quantum_ratio(&[2], &[1]).unwrap())
}

#[test]
fn non_unipotent_family_rejected() {
    let r = light_leaves_basis(4, 0, LeafFamily::Custom(doubled), &chi(3, 2));
    assert!(matches!(r, Err(Error::FamilyNotUnipotent(2))));
    let ok = light_leaves_basis(4, 0, LeafFamily::Custom(|k| LinearOp::clasp(k, k, 0)), &chi(3, 2)).unwrap();
    assert!(ok.is_unitriangular().unwrap());
}

#[test]
fn factor_lists() {
    let c53 = chi(5, 3);
    let f: Vec<u64> = composition_factors(267, 21, &c53).unwrap().into_iter().map(|(r, _)| r).collect();
    let mut sorted = f.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![21, 27, 37, 41, 67, 71, 81, 87, 247, 251, 261, 267]);
    assert_eq!(composition_factors(9, 9, &c53).unwrap().len(), 1);
    assert_eq!(composition_factors(10000, 18, &chi(3, 2)).unwrap().len(), 42);
    assert!(matches!(composition_factors(6, 0, &chi(2, 5)), Err(Error::NotInLambdaZero)));
}

#[test]
fn factor_dimensions_add_up() {
    for c in [chi(3, 2), chi(2, 3), chi(5, 3)] {
        for n in 0..=10 {
            for m in (n % 2..=n).step_by(2) {
                if m == 0 && delta_vanishes(&c) {
                    continue;
                }
                let (ok, total) = factor_dimension_check(n, m, &c).unwrap();
                assert!(ok, "{c} n={n} m={m}: {total} vs {}", ballot(n, m));
            }
        }
    }
}
