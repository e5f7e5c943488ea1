//! Truncation between TL_n and TL_m, the generators v_{m(S)} of the
//! submodules of W_n(m), the submodule lattice and its Alperin diagram.

use crate::diagram::{compose_filtered, Diagram, Morphism, Pairing};
use crate::digits::{self, AdmSet, Direction};
use crate::error::{Error, Result};
use crate::jw::{apply_op_residue, down_op, mixed_jw_op, up_op, Family, LinearOp, PsiRatio};
use crate::oracle::{self, Rep};
use crate::ring::{CoeffRing, Fq, MixedChar};
use serde::Serialize;
use std::fmt::Write as _;

fn check_shape(n: usize, m: usize) -> Result<()> {
    if (n + m) % 2 != 0 {
        return Err(Error::ParityMismatch(n, m));
    }
    if m > n {
        return Err(Error::OutOfRange(format!("{m} > {n}")));
    }
    Ok(())
}

/// Cups on the first n−m top points, then m through strands.
pub fn y_diagram(n: usize, m: usize) -> Result<Diagram> {
    check_shape(n, m)?;
    let k = (n - m) / 2;
    let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
    for c in 0..k {
        let (a, b) = (m + 2 * c, m + 2 * c + 1);
        pair[a] = b as u8;
        pair[b] = a as u8;
    }
    for t in 0..m {
        pair[t] = (m + 2 * k + t) as u8;
        pair[m + 2 * k + t] = t as u8;
    }
    Ok(Diagram::from_raw(m, n, pair))
}

/// One through strand, then the cups, then the other m−1 strands.
pub fn z_diagram(n: usize, m: usize) -> Result<Diagram> {
    check_shape(n, m)?;
    if m == 0 {
        return Err(Error::OutOfRange("z_0 is not defined".into()));
    }
    let k = (n - m) / 2;
    let mut pair: Pairing = smallvec::smallvec![0u8; m + n];
    pair[0] = m as u8;
    pair[m] = 0;
    for c in 0..k {
        let (a, b) = (m + 1 + 2 * c, m + 2 + 2 * c);
        pair[a] = b as u8;
        pair[b] = a as u8;
    }
    for t in 1..m {
        pair[t] = (m + 2 * k + t) as u8;
        pair[m + 2 * k + t] = t as u8;
    }
    Ok(Diagram::from_raw(m, n, pair))
}

fn delta_inv_pow<R: CoeffRing>(ring: &R, k: usize) -> Result<R::Elem> {
    ring.inv(&ring.pow(&ring.delta(), k as u32)).ok_or(Error::NotInLambdaZero)
}

/// The elements y_m, z_m ∈ W_n(m) and the idempotent e = y z* (for m = 0,
/// e = δ^{−n/2} y y*).
#[derive(Clone, Debug)]
pub struct Truncator {
    pub n: usize,
    pub m: usize,
    pub y: Diagram,
    pub z: Option<Diagram>,
}

impl Truncator {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let y = y_diagram(n, m)?;
        let z = if m > 0 { Some(z_diagram(n, m)?) } else { None };
        Ok(Truncator { n, m, y, z })
    }

    /// z*, or δ^{−n/2} y* when m = 0.
    fn z_star<R: CoeffRing>(&self, ring: &R) -> Result<Morphism<R::Elem>> {
        match &self.z {
            Some(z) => Ok(Morphism::from_diagram(ring, z.star())),
            None => {
                let c = delta_inv_pow(ring, self.n / 2)?;
                Ok(Morphism::from_diagram(ring, self.y.star()).scale(ring, &c))
            }
        }
    }

    pub fn idempotent<R: CoeffRing>(&self, ring: &R) -> Result<Morphism<R::Elem>> {
        self.embed(ring, &Morphism::identity(ring, self.m))
    }

    /// u ↦ y u z*, from TL_m onto e TL_n e.
    pub fn embed<R: CoeffRing>(&self, ring: &R, u: &Morphism<R::Elem>) -> Result<Morphism<R::Elem>> {
        let y = Morphism::from_diagram(ring, self.y.clone());
        let yu = compose_filtered(ring, &y, u, 0)?;
        compose_filtered(ring, &yu, &self.z_star(ring)?, 0)
    }

    /// e W_n(r) → W_m(r), x ↦ z* x.
    pub fn to_small<R: CoeffRing>(&self, ring: &R, x: &Morphism<R::Elem>) -> Result<Morphism<R::Elem>> {
        compose_filtered(ring, &self.z_star(ring)?, x, x.m)
    }

    /// W_m(r) → e W_n(r), v ↦ y v.
    pub fn to_big<R: CoeffRing>(&self, ring: &R, v: &Morphism<R::Elem>) -> Result<Morphism<R::Elem>> {
        compose_filtered(ring, &Morphism::from_diagram(ring, self.y.clone()), v, v.m)
    }
}

fn run_stages(stages: &[LinearOp], x: Morphism<u32>, min_td: usize, chi: &MixedChar) -> Result<Morphism<u32>> {
    let mut cur = x;
    for op in stages {
        cur = apply_op_residue(op, &cur, min_td, chi)?;
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

fn up_set(m: u64, s: &[u32], n: u64, chi: &MixedChar) -> Result<u64> {
    let set = AdmSet::new(s, Direction::Up, m, chi)?;
    let t = set.target(chi);
    if t > n {
        return Err(Error::OutOfRange(format!("{m}({}) = {t} > {n}", set)));
    }
    if (n + m) % 2 != 0 {
        return Err(Error::ParityMismatch(n as usize, m as usize));
    }
    Ok(t)
}

/// The stages of v_{m(S)} = y_{m(S)} JW̄_{m(S)} Ū_S JW̄_m, in order.
pub fn v_stages(m: u64, s: &[u32], n: u64, chi: &MixedChar) -> Result<Vec<LinearOp>> {
    let t = up_set(m, s, n, chi)?;
    Ok(vec![
        mixed_jw_op(m, chi)?,
        up_op(Family::Special, m, s, chi)?,
        mixed_jw_op(t, chi)?,
        LinearOp::diagram(y_diagram(n as usize, t as usize)?),
    ])
}

/// v_{m(S)} ∈ W_n(m) over 𝕜, with coefficients as field codes.
pub fn v_generator(m: u64, s: &[u32], n: u64, chi: &MixedChar) -> Result<Morphism<u32>> {
    let field = chi.field()?;
    let stages = v_stages(m, s, n, chi)?;
    run_stages(&stages, Morphism::identity(&field, m as usize), m as usize, chi)
}

/// The ladder map m(S₁) → m(S₂) used to pass from S₁ to S₂ = S₁ ⊔ T: an up
/// map if m(S₁) < m(S₂), a down map otherwise. Tries T itself, then single
/// positions.
fn step_op(a: u64, b: u64, t: &[u32], chi: &MixedChar) -> Result<LinearOp> {
    let e = digits::expand(a.max(b), chi);
    let mut cands = vec![t.to_vec()];
    cands.extend((0..=e.top() as u32).map(|j| vec![j]).filter(|j| j.as_slice() != t));
    for j in cands {
        if a < b && digits::is_up_admissible(a, &j, chi) && digits::reflect_up(a, &j, chi)? == b {
            return up_op(Family::Special, a, &j, chi);
        }
        if a > b && digits::is_down_admissible(a, &j, chi) && digits::reflect_down(a, &j, chi)? == b {
            return down_op(Family::Special, a, &j, chi);
        }
    }
    Err(Error::Unsupported(format!("no ladder map from {a} to {b}")))
}

/// The stages of u = y_{m(S₂)} JW̄_{m(S₂)} X JW̄_{m(S₁)} z_{m(S₁)}* ∈ TL_n,
/// where X is Ū_T or D̄_T for T = S₂ ∖ S₁, so that v_{m(S₂)} = u·v_{m(S₁)}.
pub fn factoring_stages(m: u64, s1: &[u32], s2: &[u32], n: u64, chi: &MixedChar) -> Result<Vec<LinearOp>> {
    let extra: Vec<u32> = s2.iter().copied().filter(|x| !s1.contains(x)).collect();
    if extra.is_empty() || !s1.iter().all(|x| s2.contains(x)) {
        return Err(Error::NotNested);
    }
    let (a, b) = (up_set(m, s1, n, chi)?, up_set(m, s2, n, chi)?);
    let tr = Truncator::new(n as usize, a as usize)?;
    let zs = match &tr.z {
        Some(z) => LinearOp::diagram(z.star()),
        None => {
            let k = n as usize / 2;
            LinearOp::diagram(tr.y.star()).scale(&PsiRatio::quantum_ratio(&[], &vec![2; k])?)
        }
    };
    Ok(vec![
        zs,
        mixed_jw_op(a, chi)?,
        step_op(a, b, &extra, chi)?,
        mixed_jw_op(b, chi)?,
        LinearOp::diagram(y_diagram(n as usize, b as usize)?),
    ])
}

/// u·x for a cell vector x ∈ W_n(m) over 𝕜.
pub fn apply_factoring(m: u64, s1: &[u32], s2: &[u32], n: u64, x: &Morphism<u32>, chi: &MixedChar) -> Result<Morphism<u32>> {
    let stages = factoring_stages(m, s1, s2, n, chi)?;
    run_stages(&stages, x.clone(), m as usize, chi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub factor: u64,
    pub set: Vec<u32>,
}

/// Nodes are the up-admissible S with m(S) ≤ n; (i, j) is a cover when
/// S_i ⊂ S_j with no node strictly between, so ⟨v_{m(S_i)}⟩ ⊋ ⟨v_{m(S_j)}⟩.
/// Sizes may jump by more than one when a carry forces positions together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubmoduleLattice {
    pub n: u64,
    pub m: u64,
    pub nodes: Vec<LatticeNode>,
    pub covers: Vec<(usize, usize)>,
    pub head: Option<usize>,
}

fn covers_of(nodes: &[LatticeNode]) -> Vec<(usize, usize)> {
    let sub = |a: &LatticeNode, b: &LatticeNode| a.set.len() < b.set.len() && a.set.iter().all(|x| b.set.contains(x));
    let mut out = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            if sub(a, b) && !nodes.iter().any(|c| sub(a, c) && sub(c, b)) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn submodule_lattice(n: u64, m: u64, chi: &MixedChar) -> Result<SubmoduleLattice> {
    check_shape(n as usize, m as usize)?;
    let nodes: Vec<LatticeNode> = digits::up_admissible_sets(m, n, chi)
        .into_iter()
        .map(|s| LatticeNode { factor: s.target(chi), set: s.indices })
        .collect();
    let covers = covers_of(&nodes);
    let head = nodes.iter().position(|x| x.set.is_empty());
    Ok(SubmoduleLattice { n, m, nodes, covers, head })
}

/// π_k of the lattice: keep the factors ≤ k and the order among them.
pub fn truncate(lat: &SubmoduleLattice, k: u64, chi: &MixedChar) -> Result<SubmoduleLattice> {
    if k > lat.n || (lat.n + k) % 2 != 0 {
        return Err(Error::OutOfRange(format!("cannot truncate from {} to {k}", lat.n)));
    }
    if k == 0 && chi.p > 0 && chi.in_max_ideal(&crate::IntPoly::delta()) {
        return Err(Error::NotInLambdaZero);
    }
    let keep: Vec<usize> = (0..lat.nodes.len()).filter(|&i| lat.nodes[i].factor <= k).collect();
    let nodes: Vec<LatticeNode> = keep.iter().map(|&i| lat.nodes[i].clone()).collect();
    let covers = covers_of(&nodes);
    let head = nodes.iter().position(|x| x.set.is_empty());
    Ok(SubmoduleLattice { n: k, m: lat.m, nodes, covers, head })
}

impl SubmoduleLattice {
    /// Covers as factor pairs, the way the diagram labels them.
    pub fn factor_edges(&self) -> Vec<(u64, u64)> {
        self.covers.iter().map(|&(a, b)| (self.nodes[a].factor, self.nodes[b].factor)).collect()
    }

    pub fn factors(&self) -> Vec<u64> {
        self.nodes.iter().map(|x| x.factor).collect()
    }
}

/// Graphviz text: one rank per |S|, the head at the top.
pub fn alperin_dot(lat: &SubmoduleLattice) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph alperin {{");
    let _ = writeln!(s, "  label=\"W_{}({})\";", lat.n, lat.m);
    let _ = writeln!(s, "  node [shape=plaintext];");
    let _ = writeln!(s, "  edge [dir=none];");
    for (i, x) in lat.nodes.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\", tooltip=\"{}\"];", x.factor, digits::fmt_set(&x.set));
    }
    let top = lat.nodes.iter().map(|x| x.set.len()).max().unwrap_or(0);
    for r in 0..=top {
        let ids: Vec<String> =
            (0..lat.nodes.len()).filter(|&i| lat.nodes[i].set.len() == r).map(|i| format!("n{i};")).collect();
        if !ids.is_empty() {
            let _ = writeln!(s, "  {{ rank=same; {} }}", ids.join(" "));
        }
    }
    for (a, b) in &lat.covers {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

/// {v ∈ M : td(<m)·v = 0, e_m v = v} for a module given by generator
/// matrices over 𝕜. The ideal td(<m) is generated by the diagram e_{m−2}.
pub fn hom_criterion_space(m: usize, rep: &Rep, field: &Fq) -> Result<Vec<Vec<u32>>> {
    let n = rep.n;
    check_shape(n, m)?;
    let tr = Truncator::new(n, m)?;
    let e = tr.idempotent(field)?;
    let e_mat = rep.morphism_matrix(field, &e)?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    if m >= 2 {
        let lower = Truncator::new(n, m - 2)?;
        let j = match &lower.z {
            Some(z) => crate::diagram::compose_diagrams(&lower.y, &z.star())?.0,
            None => crate::diagram::compose_diagrams(&lower.y, &lower.y.star())?.0,
        };
        let jm = rep.diagram_matrix(field, &j)?;
        rows = oracle::largest_killed_submodule(field, rep, &jm);
    }
    for (i, row) in e_mat.iter().enumerate() {
        let mut r = row.clone();
        r[i] = field.sub(r[i], 1);
        rows.push(r);
    }
    Ok(crate::linalg::nullspace(field, &rows, rep.dim))
}
