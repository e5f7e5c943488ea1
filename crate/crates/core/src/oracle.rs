//! Brute-force matrix models of cell modules over 𝕜, used to audit the
//! closed forms: cyclic submodules, their containment poset, Hom dimensions.

use crate::cellmod::{self, CellBasis};
use crate::diagram::{compose_diagrams, Diagram, Morphism};
use crate::digits::AdmSet;
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::ring::{CoeffRing, Fq, MixedChar};
use crate::structure::{self, SubmoduleLattice};
use rustc_hash::FxHashMap;
use std::collections::VecDeque;

/// Row-major; column c is the image of basis vector c.
pub type Mat = Vec<Vec<u32>>;

pub const DEFAULT_CAP: usize = 12;

fn identity_mat(k: usize) -> Mat {
    (0..k).map(|i| (0..k).map(|j| u32::from(i == j)).collect()).collect()
}

/// A TL_n-module given by the matrices of u_1, …, u_{n−1}.
#[derive(Clone, Debug)]
pub struct Rep {
    pub n: usize,
    pub dim: usize,
    pub gens: Vec<Mat>,
}

/// A reduced word i_1 … i_k with d = u_{i_k} ⋯ u_{i_1}; no loops arise.
pub fn diagram_word(d: &Diagram) -> Result<Vec<usize>> {
    let n = d.n();
    if d.m() != n {
        return Err(Error::BoundaryMismatch(d.m(), n));
    }
    let start = Diagram::identity(n);
    let mut parent: FxHashMap<Diagram, (Diagram, usize)> = FxHashMap::default();
    let mut queue = VecDeque::from([start.clone()]);
    let mut found = *d == start;
    while !found {
        let Some(cur) = queue.pop_front() else { break };
        for i in 1..n {
            let mut next = cur.clone();
            if next.apply_generator_top(i) || next == start || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), (cur.clone(), i));
            if next == *d {
                found = true;
                break;
            }
            queue.push_back(next);
        }
    }
    if !found {
        return Err(Error::Unsupported(format!("no word for {d}")));
    }
    let mut word = Vec::new();
    let mut cur = d.clone();
    while cur != start {
        let (p, i) = parent[&cur].clone();
        word.push(i);
        cur = p;
    }
    word.reverse();
    Ok(word)
}

impl Rep {
    pub fn word_matrix(&self, f: &Fq, word: &[usize]) -> Mat {
        let mut m = identity_mat(self.dim);
        for &i in word {
            m = linalg::mat_mul(f, &self.gens[i - 1], &m);
        }
        m
    }

    pub fn diagram_matrix(&self, f: &Fq, d: &Diagram) -> Result<Mat> {
        Ok(self.word_matrix(f, &diagram_word(d)?))
    }

    pub fn morphism_matrix(&self, f: &Fq, x: &Morphism<u32>) -> Result<Mat> {
        let mut out = vec![vec![0u32; self.dim]; self.dim];
        for (d, c) in x.sorted_terms() {
            let dm = self.diagram_matrix(f, d)?;
            for (o, r) in out.iter_mut().zip(&dm) {
                for (a, b) in o.iter_mut().zip(r) {
                    *a = f.add(*a, f.mul(*c, *b));
                }
            }
        }
        Ok(out)
    }

    /// u_i² = δu_i, u_i u_{i±1} u_i = u_i, u_i u_j = u_j u_i for |i−j| ≥ 2.
    pub fn check_relations(&self, f: &Fq) -> bool {
        let mm = |a: &Mat, b: &Mat| linalg::mat_mul(f, a, b);
        let scaled = |a: &Mat, c: u32| -> Mat { a.iter().map(|r| r.iter().map(|&x| f.mul(x, c)).collect()).collect() };
        let k = self.gens.len();
        for i in 0..k {
            let g = &self.gens[i];
            if mm(g, g) != scaled(g, f.delta()) {
                return false;
            }
            for j in 0..k {
                let h = &self.gens[j];
                if i.abs_diff(j) == 1 && mm(&mm(g, h), g) != *g {
                    return false;
                }
                if i.abs_diff(j) >= 2 && j > i && mm(g, h) != mm(h, g) {
                    return false;
                }
            }
        }
        true
    }

    /// M/N for a submodule N.
    pub fn quotient(&self, f: &Fq, sub: &Echelon<u32>) -> Rep {
        let piv = sub.pivots();
        let free: Vec<usize> = (0..self.dim).filter(|c| !piv.contains(c)).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vec<u32>> = free
                    .iter()
                    .map(|&c| {
                        let img: Vec<u32> = g.iter().map(|r| r[c]).collect();
                        let red = sub.reduced(f, &img);
                        free.iter().map(|&r| red[r]).collect()
                    })
                    .collect();
                linalg::transpose(&cols)
            })
            .collect();
        Rep { n: self.n, dim: free.len(), gens }
    }

    /// Coordinates in M/N of a vector of M.
    pub fn quotient_coords(&self, f: &Fq, sub: &Echelon<u32>, v: &[u32]) -> Vec<u32> {
        let piv = sub.pivots();
        let red = sub.reduced(f, v);
        (0..self.dim).filter(|c| !piv.contains(c)).map(|c| red[c]).collect()
    }
}

/// W_n(m) over 𝕜 on its half-diagram basis.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub m: usize,
    pub field: Fq,
    pub basis: CellBasis,
    pub rep: Rep,
}

pub fn build_matrix_model(n: usize, m: usize, chi: &MixedChar) -> Result<MatrixModel> {
    build_matrix_model_capped(n, m, chi, DEFAULT_CAP)
}

pub fn build_matrix_model_capped(n: usize, m: usize, chi: &MixedChar, cap: usize) -> Result<MatrixModel> {
    if n > cap {
        return Err(Error::ScaleLimit(format!("matrix model for n = {n} above cap {cap}")));
    }
    let field = chi.field()?;
    let basis = cellmod::cell_basis(n, m)?;
    let k = basis.len();
    let mut gens = Vec::new();
    for i in 1..n {
        let u = Diagram::generator(n, i)?;
        let mut g = vec![vec![0u32; k]; k];
        for (c, e) in basis.elements.iter().enumerate() {
            let (d, loops) = compose_diagrams(&u, &e.diagram)?;
            if d.through_degree() < m {
                continue;
            }
            let r = basis.index_of(&d).expect("half-diagram");
            g[r][c] = field.pow(&field.delta(), loops as u32);
        }
        gens.push(g);
    }
    let rep = Rep { n, dim: k, gens };
    if !rep.check_relations(&field) {
        return Err(Error::Unsupported(format!("relations fail on W_{n}({m})")));
    }
    Ok(MatrixModel { m, field, basis, rep })
}

impl MatrixModel {
    pub fn coords(&self, x: &Morphism<u32>) -> Result<Vec<u32>> {
        self.basis.coords(&self.field, x)
    }

    /// The matrix of any a ∈ TL_n, computed by composing diagrams.
    pub fn action_matrix(&self, a: &Morphism<u32>) -> Result<Mat> {
        let k = self.basis.len();
        let mut cols = Vec::with_capacity(k);
        for i in 0..k {
            let x = cellmod::act(&self.field, a, &self.basis.vector(&self.field, i))?;
            cols.push(self.coords(&x)?);
        }
        Ok(linalg::transpose(&cols))
    }
}

/// The smallest generator-stable subspace containing v.
pub fn cyclic_submodule(f: &Fq, rep: &Rep, v: &[u32]) -> Echelon<u32> {
    let mut span = Echelon::new(rep.dim);
    let mut queue = VecDeque::new();
    if span.insert(f, v) {
        queue.push_back(v.to_vec());
    }
    while let Some(w) = queue.pop_front() {
        for g in &rep.gens {
            let x = linalg::mat_vec(f, g, &w);
            if span.insert(f, &x) {
                queue.push_back(x);
            }
        }
    }
    span
}

/// Rows A with {v : A v = 0} the largest submodule inside ker J.
pub fn largest_killed_submodule(f: &Fq, rep: &Rep, j: &Mat) -> Vec<Vec<u32>> {
    let mut span = linalg::row_space(f, j, rep.dim);
    let mut queue: VecDeque<Vec<u32>> = span.basis().cloned().collect();
    while let Some(row) = queue.pop_front() {
        for g in &rep.gens {
            // (row·g) as a new annihilating row.
            let r: Vec<u32> = (0..rep.dim)
                .map(|c| row.iter().zip(g).fold(0, |acc, (&a, gr)| f.add(acc, f.mul(a, gr[c]))))
                .collect();
            if span.insert(f, &r) {
                queue.push_back(r);
            }
        }
    }
    span.basis().cloned().collect()
}

/// dim Hom(W_n(m), M) by the homomorphism criterion.
pub fn hom_dim(m: usize, rep: &Rep, f: &Fq) -> Result<usize> {
    Ok(structure::hom_criterion_space(m, rep, f)?.len())
}

/// dim of {X : X A_i = B_i X} by solving for X directly.
pub fn hom_dim_brute(f: &Fq, a: &Rep, b: &Rep) -> Result<usize> {
    if a.dim * b.dim > 1600 {
        return Err(Error::ScaleLimit("brute-force Hom space".into()));
    }
    // Unknown X[r][c] at index r * a.dim + c.
    let cols = a.dim * b.dim;
    let mut rows = Vec::new();
    for (ga, gb) in a.gens.iter().zip(&b.gens) {
        for r in 0..b.dim {
            for c in 0..a.dim {
                // (X A)[r][c] − (B X)[r][c]
                let mut row = vec![0u32; cols];
                for k in 0..a.dim {
                    row[r * a.dim + k] = f.add(row[r * a.dim + k], ga[k][c]);
                }
                for k in 0..b.dim {
                    row[k * a.dim + c] = f.sub(row[k * a.dim + c], gb[r][k]);
                }
                rows.push(row);
            }
        }
    }
    Ok(cols - linalg::rank(f, &rows))
}

#[derive(Clone, Debug)]
pub struct CyclicPoset {
    pub n: usize,
    pub m: usize,
    pub sets: Vec<AdmSet>,
    pub factors: Vec<u64>,
    pub dims: Vec<usize>,
    /// below[i][j]: ⟨v_j⟩ ⊆ ⟨v_i⟩.
    pub below: Vec<Vec<bool>>,
}

pub fn poset_of_cyclic_submodules(n: usize, m: usize, chi: &MixedChar) -> Result<CyclicPoset> {
    let model = build_matrix_model(n, m, chi)?;
    let f = &model.field;
    let sets = crate::digits::up_admissible_sets(m as u64, n as u64, chi);
    let mut spans = Vec::new();
    let mut factors = Vec::new();
    for s in &sets {
        let v = structure::v_generator(m as u64, &s.indices, n as u64, chi)?;
        spans.push(cyclic_submodule(f, &model.rep, &model.coords(&v)?));
        factors.push(s.target(chi));
    }
    let below = spans.iter().map(|a| spans.iter().map(|b| a.contains_all(f, b)).collect()).collect();
    let dims = spans.iter().map(|s| s.dim()).collect();
    Ok(CyclicPoset { n, m, sets, factors, dims, below })
}

/// Compares the cyclic-submodule poset with the lattice and the dimension of
/// each ⟨v_S⟩ with Σ dim L over the S′ ⊇ S. Returns the disagreements.
pub fn lattice_audit(n: usize, m: usize, chi: &MixedChar) -> Result<Vec<String>> {
    let lat: SubmoduleLattice = structure::submodule_lattice(n as u64, m as u64, chi)?;
    let poset = poset_of_cyclic_submodules(n, m, chi)?;
    let mut bad = Vec::new();
    if lat.factors() != poset.factors {
        bad.push(format!("W_{n}({m}): factor lists differ"));
        return Ok(bad);
    }
    let simple: Vec<usize> =
        poset.factors.iter().map(|&r| cellmod::simple_dim(n, r as usize, chi)).collect::<Result<_>>()?;
    for (i, a) in poset.sets.iter().enumerate() {
        for (j, b) in poset.sets.iter().enumerate() {
            let want = a.indices.iter().all(|x| b.contains(*x));
            if poset.below[i][j] != want {
                bad.push(format!("W_{n}({m}): containment of {b} in {a} is {}", poset.below[i][j]));
            }
        }
        let want: usize = (0..poset.sets.len())
            .filter(|&j| a.indices.iter().all(|x| poset.sets[j].contains(*x)))
            .map(|j| simple[j])
            .sum();
        if poset.dims[i] != want {
            bad.push(format!("W_{n}({m}): dim ⟨v_{}⟩ = {} but the lattice predicts {want}", a, poset.dims[i]));
        }
    }
    let k = poset.sets.len();
    let strict = |i: usize, j: usize| i != j && poset.below[i][j];
    let mut hasse: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| strict(i, j) && !(0..k).any(|t| strict(i, t) && strict(t, j)))
        .collect();
    hasse.sort_unstable();
    let mut covers = lat.covers.clone();
    covers.sort_unstable();
    if hasse != covers {
        bad.push(format!("W_{n}({m}): covering edges differ from the cyclic containment order"));
    }
    if poset.dims.first() != Some(&model_dim(n, m)) {
        bad.push(format!("W_{n}({m}): v for S = ∅ does not generate"));
    }
    Ok(bad)
}

fn model_dim(n: usize, m: usize) -> usize {
    cellmod::ballot(n, m) as usize
}

pub fn catalan(n: usize) -> u128 {
    (0..n).fold(1u128, |c, i| c * 2 * (2 * i as u128 + 1) / (i as u128 + 2))
}

#[cfg(test)]
mod tests;
