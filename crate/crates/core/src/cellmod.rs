//! Cell modules W_n(m) of TL_n: half-diagram bases indexed by two-row
//! tableaux and Dyck sequences, the action, the cellular form, Gram
//! matrices, light-leaves bases and composition factors.
//!
//! A cell vector is a morphism m → n whose terms have through degree m.

use crate::diagram::{compose_diagrams, compose_filtered, Diagram, Morphism, Pairing};
use crate::digits::{self, AdmSet};
use crate::error::{Error, Result};
use crate::jw::{self, apply_op, apply_op_residue, LinearOp};
use crate::linalg;
use crate::ring::{CoeffRing, Fq, IntPolyRing, LocalFrac, LocalRing, MixedChar, RatField};
use crate::{IntPoly, RatFunc};
use rustc_hash::FxHashMap;
use std::cmp::Ordering;
use std::fmt;

/// A standard tableau; rows hold the entries 1..=size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let rows: Vec<Vec<u32>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        let size: usize = rows.iter().map(|r| r.len()).sum();
        let mut seen = vec![false; size + 1];
        for (i, r) in rows.iter().enumerate() {
            if i > 0 && r.len() > rows[i - 1].len() {
                return Err(Error::Parse("rows must weakly decrease in length".into()));
            }
            for (j, &x) in r.iter().enumerate() {
                if x == 0 || x as usize > size || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::Parse(format!("bad entry {x}")));
                }
                let left = j > 0 && r[j - 1] >= x;
                let above = i > 0 && rows[i - 1][j] >= x;
                if left || above {
                    return Err(Error::Parse("tableau is not standard".into()));
                }
            }
        }
        Ok(Tableau { rows })
    }

    /// The two-row tableau whose first row holds the i with s_i = +1.
    pub fn from_dyck(seq: &[i8]) -> Result<Self> {
        let mut rows = vec![Vec::new(), Vec::new()];
        for (i, &s) in seq.iter().enumerate() {
            rows[if s > 0 { 0 } else { 1 }].push(i as u32 + 1);
        }
        Tableau::new(rows)
    }

    /// The ±1 sequence of a tableau with at most two rows.
    pub fn dyck(&self) -> Option<Vec<i8>> {
        if self.rows.len() > 2 {
            return None;
        }
        let mut seq = vec![-1i8; self.size()];
        for &x in self.rows.first().into_iter().flatten() {
            seq[x as usize - 1] = 1;
        }
        Some(seq)
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len()).collect()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Shape of the subtableau on 1..=i.
    pub fn sub_shape(&self, i: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.rows.iter().map(|r| r.iter().filter(|&&x| x as usize <= i).count()).collect();
        while s.last() == Some(&0) {
            s.pop();
        }
        s
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// a ⊴ b in the dominance order on partitions of the same size.
pub fn dominated(a: &[usize], b: &[usize]) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    true
}

/// Reverse lexicographic order: Less means s ◀ t; None if incomparable.
pub fn tableau_compare(s: &Tableau, t: &Tableau) -> Result<Option<Ordering>> {
    if s.shape() != t.shape() {
        return Err(Error::ShapeMismatch);
    }
    for i in (1..=s.size()).rev() {
        let (a, b) = (s.sub_shape(i), t.sub_shape(i));
        if a == b {
            continue;
        }
        return Ok(if dominated(&a, &b) {
            Some(Ordering::Less)
        } else if dominated(&b, &a) {
            Some(Ordering::Greater)
        } else {
            None
        });
    }
    Ok(Some(Ordering::Equal))
}

#[derive(Clone, Debug)]
pub struct CellElement {
    pub dyck: Vec<i8>,
    pub tableau: Tableau,
    pub diagram: Diagram,
}

/// The half-diagram basis of W_n(m).
#[derive(Clone, Debug)]
pub struct CellBasis {
    pub n: usize,
    pub m: usize,
    pub elements: Vec<CellElement>,
    index: FxHashMap<Diagram, usize>,
}

/// C(n, (n−m)/2) − C(n, (n−m)/2 − 1).
pub fn ballot(n: usize, m: usize) -> u128 {
    if m > n || (n - m) % 2 != 0 {
        return 0;
    }
    let k = (n - m) / 2;
    let binom = |n: usize, k: usize| (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    binom(n, k) - if k == 0 { 0 } else { binom(n, k - 1) }
}

fn dyck_sequences(n: usize, m: usize) -> Vec<Vec<i8>> {
    fn go(n: usize, m: usize, h: usize, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        let left = n - cur.len();
        if left == 0 {
            if h == m {
                out.push(cur.clone());
            }
            return;
        }
        if h + 1 <= m + left - 1 {
            cur.push(1);
            go(n, m, h + 1, cur, out);
            cur.pop();
        }
        if h > 0 && h - 1 + left - 1 >= m {
            cur.push(-1);
            go(n, m, h - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut Vec::new(), &mut out);
    out
}

/// The (m,n)-diagram of a Dyck sequence: each −1 closes the latest open +1,
/// and the open ones run to the bottom in order.
pub fn dyck_to_diagram(seq: &[i8], m: usize) -> Result<Diagram> {
    let n = seq.len();
    let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
    let mut open = Vec::new();
    for (i, &s) in seq.iter().enumerate() {
        let pt = m + i;
        if s > 0 {
            open.push(pt);
        } else {
            let j = open.pop().ok_or(Error::Parse("sequence goes negative".into()))?;
            pair[pt] = j as u8;
            pair[j] = pt as u8;
        }
    }
    if open.len() != m {
        return Err(Error::BoundaryMismatch(open.len(), m));
    }
    for (b, &pt) in open.iter().enumerate() {
        pair[b] = pt as u8;
        pair[pt] = b as u8;
    }
    Ok(Diagram::from_raw(m, n, pair))
}

pub fn diagram_to_dyck(d: &Diagram) -> Vec<i8> {
    let m = d.m();
    (0..d.n())
        .map(|i| {
            let j = d.partner(m + i);
            if j >= m && j < m + i {
                -1
            } else {
                1
            }
        })
        .collect()
}

pub fn cell_basis(n: usize, m: usize) -> Result<CellBasis> {
    if (n + m) % 2 != 0 {
        return Err(Error::ParityMismatch(n, m));
    }
    if m > n {
        return Err(Error::OutOfRange(format!("W_{n}({m})")));
    }
    let mut elements = Vec::new();
    let mut index = FxHashMap::default();
    for seq in dyck_sequences(n, m) {
        let diagram = dyck_to_diagram(&seq, m)?;
        index.insert(diagram.clone(), elements.len());
        elements.push(CellElement { tableau: Tableau::from_dyck(&seq)?, dyck: seq, diagram });
    }
    Ok(CellBasis { n, m, elements, index })
}

impl CellBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, d: &Diagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn vector<R: CoeffRing>(&self, ring: &R, i: usize) -> Morphism<R::Elem> {
        Morphism::from_diagram(ring, self.elements[i].diagram.clone())
    }

    /// Coordinates of a cell vector; terms of lower through degree are ignored.
    pub fn coords<R: CoeffRing>(&self, ring: &R, x: &Morphism<R::Elem>) -> Result<Vec<R::Elem>> {
        if x.m != self.m || x.n != self.n {
            return Err(Error::BoundaryMismatch(x.m + x.n, self.m + self.n));
        }
        let mut v = vec![ring.zero(); self.len()];
        for (d, c) in &x.terms {
            if let Some(i) = self.index_of(d) {
                v[i] = c.clone();
            } else if d.through_degree() >= self.m {
                return Err(Error::Parse(format!("{d} is not a half-diagram")));
            }
        }
        Ok(v)
    }

    pub fn from_coords<R: CoeffRing>(&self, ring: &R, v: &[R::Elem]) -> Morphism<R::Elem> {
        let mut x = Morphism::zero(self.m, self.n);
        for (e, c) in self.elements.iter().zip(v) {
            x.add_term(ring, e.diagram.clone(), c);
        }
        x
    }
}

/// u·x in W_n(m) for u ∈ TL_n.
pub fn act<R: CoeffRing>(ring: &R, u: &Morphism<R::Elem>, x: &Morphism<R::Elem>) -> Result<Morphism<R::Elem>> {
    if u.m != x.n {
        return Err(Error::BoundaryMismatch(u.m, x.n));
    }
    compose_filtered(ring, u, x, x.m)
}

/// ⟨x, y⟩: the coefficient of id_m in x*∘y.
pub fn bilinear<R: CoeffRing>(ring: &R, x: &Morphism<R::Elem>, y: &Morphism<R::Elem>) -> Result<R::Elem> {
    if x.m != y.m || x.n != y.n {
        return Err(Error::BoundaryMismatch(x.m + x.n, y.m + y.n));
    }
    let p = compose_filtered(ring, &x.star(), y, x.m)?;
    Ok(p.coeff(ring, &Diagram::identity(x.m)))
}

/// ⟨c_s, c_t⟩ on two half-diagrams: δ^loops when x*∘y keeps all m strands.
pub fn pair_diagrams<R: CoeffRing>(ring: &R, x: &Diagram, y: &Diagram) -> Result<R::Elem> {
    let (d, loops) = compose_diagrams(&x.star(), y)?;
    Ok(if d.through_degree() == x.m() { ring.pow(&ring.delta(), loops as u32) } else { ring.zero() })
}

#[derive(Clone, Debug)]
pub struct GramMatrix<E> {
    pub basis: CellBasis,
    pub entries: Vec<Vec<E>>,
}

pub fn gram<R: CoeffRing>(n: usize, m: usize, ring: &R) -> Result<GramMatrix<R::Elem>> {
    let basis = cell_basis(n, m)?;
    let k = basis.len();
    let mut entries = vec![vec![ring.zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let v = pair_diagrams(ring, &basis.elements[i].diagram, &basis.elements[j].diagram)?;
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
    }
    Ok(GramMatrix { basis, entries })
}

fn delta_vanishes(chi: &MixedChar) -> bool {
    chi.p > 0 && chi.in_max_ideal(&IntPoly::delta())
}

/// dim L_n(m) = rank of the form on W_n(m) over 𝕜.
pub fn simple_dim(n: usize, m: usize, chi: &MixedChar) -> Result<usize> {
    if m == 0 && delta_vanishes(chi) {
        return Err(Error::NotInLambdaZero);
    }
    let f = chi.field()?;
    let g = gram(n, m, &f)?;
    Ok(linalg::rank(&f, &g.entries))
}

/// {(m(S), S) : S up-admissible for m, m(S) ≤ n}.
pub fn composition_factors(n: u64, m: u64, chi: &MixedChar) -> Result<Vec<(u64, AdmSet)>> {
    if (n + m) % 2 != 0 {
        return Err(Error::ParityMismatch(n as usize, m as usize));
    }
    if m > n {
        return Err(Error::OutOfRange(format!("W_{n}({m})")));
    }
    if m == 0 && delta_vanishes(chi) {
        return Err(Error::NotInLambdaZero);
    }
    Ok(digits::up_admissible_sets(m, n, chi).into_iter().map(|s| (s.target(chi), s)).collect())
}

/// Whether the factor dimensions add up to dim W_n(m), and that sum.
pub fn factor_dimension_check(n: usize, m: usize, chi: &MixedChar) -> Result<(bool, usize)> {
    let mut total = 0;
    for (r, _) in composition_factors(n as u64, m as u64, chi)? {
        total += simple_dim(n, r as usize, chi)?;
    }
    Ok((total as u128 == ballot(n, m), total))
}

/// The idempotent family used by the ladder steps.
#[derive(Clone, Copy)]
pub enum LeafFamily {
    Identity,
    Classical,
    Mixed,
    Special,
    /// Any family over ℚ(δ), given as operators k → k.
    Custom(fn(usize) -> LinearOp),
}

impl fmt::Debug for LeafFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeafFamily::Identity => "Identity",
            LeafFamily::Classical => "Classical",
            LeafFamily::Mixed => "Mixed",
            LeafFamily::Special => "Special",
            LeafFamily::Custom(_) => "Custom",
        })
    }
}

impl LeafFamily {
    fn op(&self, k: usize, chi: &MixedChar) -> Result<LinearOp> {
        match self {
            LeafFamily::Identity => Ok(LinearOp::identity(k)),
            LeafFamily::Classical => Ok(LinearOp::clasp(k, k, 0)),
            LeafFamily::Mixed | LeafFamily::Special => jw::mixed_jw_op(k as u64, chi),
            LeafFamily::Custom(f) => {
                let op = f(k);
                if op.source != k || op.target != k {
                    return Err(Error::BoundaryMismatch(op.source, k));
                }
                Ok(op)
            }
        }
    }

    /// G_k ≡ id_k modulo lower through degree.
    fn check_unipotent(&self, k: usize, chi: &MixedChar) -> Result<()> {
        let op = self.op(k, chi)?;
        let top = apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, k), k)?.to_ratfunc();
        if top.sub(&RatField, &Morphism::identity(&RatField, k))?.is_zero() {
            Ok(())
        } else {
            Err(Error::FamilyNotUnipotent(k))
        }
    }
}

/// The ladder of υ_t as operators, in order of application to id_m. Step i
/// (from n down to 1) is (cup or id) ∘ G_{h_i}, tensored with id_{n−i}.
pub fn ladder_ops(seq: &[i8], family: LeafFamily, chi: &MixedChar) -> Result<Vec<LinearOp>> {
    let n = seq.len();
    let mut h = vec![0usize; n + 1];
    for (i, &s) in seq.iter().enumerate() {
        h[i + 1] = if s > 0 { h[i] + 1 } else { h[i].checked_sub(1).ok_or(Error::Parse("not a Dyck path".into()))? };
    }
    let mut ops = Vec::new();
    for i in (1..=n).rev() {
        let rest = n - i;
        let mut op = family.op(h[i], chi)?.pad(0, rest);
        if seq[i - 1] < 0 {
            op = op.then(&LinearOp::diagram(Diagram::rainbow_cup(h[i - 1] - 1, 1, rest)))?;
        }
        ops.push(op);
    }
    Ok(ops)
}

#[derive(Clone, Debug)]
pub enum LeafVectors {
    Rational(Vec<Morphism<RatFunc>>),
    Local(Vec<Morphism<LocalFrac>>),
    Residue(Fq, Vec<Morphism<u32>>),
}

#[derive(Clone, Debug)]
pub struct LightLeaves {
    pub basis: CellBasis,
    pub family: LeafFamily,
    pub chi: MixedChar,
    pub vectors: LeafVectors,
}

fn run_rational(ops: &[LinearOp], m: usize) -> Result<Morphism<RatFunc>> {
    let r = RatField;
    let mut cur = Morphism::identity(&r, m);
    for op in ops {
        let f = apply_op(&r, op, &cur, m)?;
        let inv = RatFunc::from(f.den.to_poly()).inv().ok_or(Error::ZeroInput)?;
        cur = f.num.scale(&r, &inv);
    }
    Ok(cur)
}

fn run_residue(ops: &[LinearOp], m: usize, field: &Fq, chi: &MixedChar) -> Result<Morphism<u32>> {
    let mut cur = Morphism::identity(field, m);
    for op in ops {
        cur = apply_op_residue(op, &cur, m, chi)?;
    }
    Ok(cur)
}

/// {υ^G_t : t} for W_n(m), in the order of `cell_basis`.
pub fn light_leaves_basis(n: usize, m: usize, family: LeafFamily, chi: &MixedChar) -> Result<LightLeaves> {
    let basis = cell_basis(n, m)?;
    if !matches!(family, LeafFamily::Identity) {
        for k in 2..=n {
            family.check_unipotent(k, chi)?;
        }
    }
    let ladders = basis
        .elements
        .iter()
        .map(|e| ladder_ops(&e.dyck, family, chi))
        .collect::<Result<Vec<_>>>()?;
    let vectors = match family {
        LeafFamily::Identity | LeafFamily::Classical | LeafFamily::Custom(_) => {
            LeafVectors::Rational(ladders.iter().map(|l| run_rational(l, m)).collect::<Result<_>>()?)
        }
        LeafFamily::Mixed => LeafVectors::Local(
            ladders
                .iter()
                .map(|l| {
                    run_rational(l, m)?.try_map_coeffs(&LocalRing { chi: chi.clone() }, |c| {
                        LocalFrac::new(c.clone(), chi)
                    })
                })
                .collect::<Result<_>>()?,
        ),
        LeafFamily::Special => {
            let field = chi.field()?;
            let v = ladders.iter().map(|l| run_residue(l, m, &field, chi)).collect::<Result<_>>()?;
            LeafVectors::Residue(field, v)
        }
    };
    Ok(LightLeaves { basis, family, chi: chi.clone(), vectors })
}

fn unitriangular_in<R: CoeffRing>(ring: &R, basis: &CellBasis, vectors: &[Morphism<R::Elem>]) -> Result<bool> {
    for (t, v) in vectors.iter().enumerate() {
        let c = basis.coords(ring, v)?;
        for (u, x) in c.iter().enumerate() {
            let ok = if u == t {
                *x == ring.one()
            } else {
                ring.is_zero(x)
                    || tableau_compare(&basis.elements[u].tableau, &basis.elements[t].tableau)? == Some(Ordering::Less)
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl LightLeaves {
    /// υ_t = c_t + Σ_{u ◀ t} f(t,u) c_u for every t.
    pub fn is_unitriangular(&self) -> Result<bool> {
        match &self.vectors {
            LeafVectors::Rational(v) => unitriangular_in(&RatField, &self.basis, v),
            LeafVectors::Local(v) => unitriangular_in(&LocalRing { chi: self.chi.clone() }, &self.basis, v),
            LeafVectors::Residue(f, v) => unitriangular_in(f, &self.basis, v),
        }
    }
}

#[cfg(test)]
mod tests;
