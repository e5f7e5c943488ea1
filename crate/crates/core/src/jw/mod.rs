//! Jones–Wenzl idempotents: the classical jw_n over ℚ(δ), the mixed JW_n over
//! ℤ[δ]_𝔪, its specialization JW̄_n over 𝕜, and the ladder morphisms built
//! from each family.
//!
//! Every such morphism is kept as a [`LinearOp`]: a sum of programs, each a
//! ratio of quantum numbers times a word in clasps and diagrams. Programs are
//! evaluated on a morphism with numerators in any [`CoeffRing`]; denominators
//! stay symbolic as products of ψ_k, so the same evaluation gives exact
//! rational functions, values at a point, or residues in 𝕜.


pub mod checks;
pub mod dense;

use crate::diagram::{compose_diagrams, DeltaPowers, Diagram, Morphism};
use crate::digits::{self, AdmSet, Direction};
use crate::error::{Error, Result};
use crate::qnum;
use crate::ring::{
    CoeffRing, FpPoint, Fq, IntPoly, IntPolyRing, LocalFrac, MixedChar, RatFunc, ResidueSeries,
};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

/// A product ∏ ψ_k^{e_k}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Den(BTreeMap<u64, u32>);

impl Den {
    pub fn one() -> Self {
        Den::default()
    }

    /// [n] for n ≥ 1.
    pub fn quantum(n: u64) -> Self {
        let mut d = Den::one();
        for k in qnum::psi_factors(n) {
            *d.0.entry(k).or_insert(0) += 1;
        }
        d
    }

    pub fn factorial(n: u64) -> Self {
        (2..=n).fold(Den::one(), |acc, k| acc.mul(&Den::quantum(k)))
    }

    pub fn mul(&self, o: &Den) -> Den {
        let mut r = self.clone();
        for (&k, &e) in &o.0 {
            *r.0.entry(k).or_insert(0) += e;
        }
        r
    }

    pub fn lcm(&self, o: &Den) -> Den {
        let mut r = self.clone();
        for (&k, &e) in &o.0 {
            let slot = r.0.entry(k).or_insert(0);
            *slot = (*slot).max(e);
        }
        r
    }

    pub fn gcd(&self, o: &Den) -> Den {
        let mut r = Den::one();
        for (&k, &e) in &self.0 {
            let f = e.min(o.exponent(k));
            if f > 0 {
                r.0.insert(k, f);
            }
        }
        r
    }

    /// self / o when o divides self.
    pub fn div(&self, o: &Den) -> Option<Den> {
        let mut r = self.clone();
        for (&k, &e) in &o.0 {
            let slot = r.0.get_mut(&k)?;
            if *slot < e {
                return None;
            }
            *slot -= e;
            if *slot == 0 {
                r.0.remove(&k);
            }
        }
        Some(r)
    }

    pub fn exponent(&self, k: u64) -> u32 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.0.iter().map(|(&k, &e)| (k, e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_poly(&self) -> IntPoly {
        let mut r = IntPoly::one();
        for (&k, &e) in &self.0 {
            r = r.mul(&qnum::psi(k).pow(e));
        }
        r
    }

    /// (the part in 𝔪, the unit part).
    pub fn split(&self, chi: &MixedChar) -> (Den, Den) {
        let (mut bad, mut good) = (Den::one(), Den::one());
        for (&k, &e) in &self.0 {
            if chi.in_max_ideal(&qnum::psi(k)) {
                bad.0.insert(k, e);
            } else {
                good.0.insert(k, e);
            }
        }
        (bad, good)
    }
}

impl fmt::Display for Den {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, e)| if *e == 1 { format!("ψ{k}") } else { format!("ψ{k}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// ±∏ψ / ∏ψ, or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiRatio {
    pub sign: i8,
    pub num: Den,
    pub den: Den,
}

impl PsiRatio {
    pub fn one() -> Self {
        PsiRatio { sign: 1, num: Den::one(), den: Den::one() }
    }

    pub fn zero() -> Self {
        PsiRatio { sign: 0, num: Den::one(), den: Den::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// ∏[a] / ∏[b]; [−n] = −[n].
    pub fn quantum_ratio(nums: &[i64], dens: &[i64]) -> Result<Self> {
        let mut r = PsiRatio::one();
        for &b in dens {
            if b == 0 {
                return Err(Error::OutOfRange("quantum number [0] in a denominator".into()));
            }
            if b < 0 {
                r.sign = -r.sign;
            }
            r.den = r.den.mul(&Den::quantum(b.unsigned_abs()));
        }
        for &a in nums {
            if a == 0 {
                return Ok(PsiRatio::zero());
            }
            if a < 0 {
                r.sign = -r.sign;
            }
            r.num = r.num.mul(&Den::quantum(a.unsigned_abs()));
        }
        Ok(r.reduced())
    }

    fn reduced(mut self) -> Self {
        let g = self.num.gcd(&self.den);
        self.num = self.num.div(&g).unwrap();
        self.den = self.den.div(&g).unwrap();
        self
    }

    pub fn mul(&self, o: &PsiRatio) -> PsiRatio {
        if self.is_zero() || o.is_zero() {
            return PsiRatio::zero();
        }
        PsiRatio { sign: self.sign * o.sign, num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.reduced()
    }

    pub fn inv(&self) -> Option<PsiRatio> {
        if self.is_zero() {
            return None;
        }
        Some(PsiRatio { sign: self.sign, num: self.den.clone(), den: self.num.clone() })
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let n = self.num.to_poly();
        RatFunc::from_coprime_monic(if self.sign < 0 { n.neg() } else { n }, self.den.to_poly())
    }
}

impl fmt::Display for PsiRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}{} / {}", if s < 0 { "-" } else { "" }, self.num, self.den),
        }
    }
}

/// One factor of a program, applied on top of the current morphism.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// jw_k on the strands offset..offset+k.
    Clasp { k: usize, offset: usize },
    Diagram(Diagram),
}

impl Step {
    fn star(&self) -> Step {
        match self {
            Step::Clasp { .. } => self.clone(),
            Step::Diagram(d) => Step::Diagram(d.star()),
        }
    }

    fn pad(&self, left: usize, right: usize) -> Step {
        match self {
            Step::Clasp { k, offset } => Step::Clasp { k: *k, offset: offset + left },
            Step::Diagram(d) => Step::Diagram(Diagram::identity(left).tensor(d).tensor(&Diagram::identity(right))),
        }
    }
}

/// coef · (last step ∘ … ∘ first step).
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub coef: PsiRatio,
    pub steps: Vec<Step>,
}

impl Program {
    /// The denominator of the numerator morphism this program evaluates to.
    pub fn den(&self) -> Den {
        self.steps.iter().fold(self.coef.den.clone(), |acc, s| match s {
            Step::Clasp { k, .. } => acc.mul(&Den::factorial(*k as u64)),
            Step::Diagram(_) => acc,
        })
    }
}

/// A morphism source → target written as a sum of programs.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp {
    pub source: usize,
    pub target: usize,
    pub terms: Vec<Program>,
}

impl LinearOp {
    pub fn identity(n: usize) -> Self {
        LinearOp { source: n, target: n, terms: vec![Program { coef: PsiRatio::one(), steps: vec![] }] }
    }

    /// id_offset ⊗ jw_k ⊗ id_rest on n strands.
    pub fn clasp(n: usize, k: usize, offset: usize) -> Self {
        assert!(offset + k <= n);
        let steps = if k >= 2 { vec![Step::Clasp { k, offset }] } else { vec![] };
        LinearOp { source: n, target: n, terms: vec![Program { coef: PsiRatio::one(), steps }] }
    }

    pub fn diagram(d: Diagram) -> Self {
        LinearOp {
            source: d.m(),
            target: d.n(),
            terms: vec![Program { coef: PsiRatio::one(), steps: vec![Step::Diagram(d)] }],
        }
    }

    /// next ∘ self.
    pub fn then(&self, next: &LinearOp) -> Result<LinearOp> {
        if next.source != self.target {
            return Err(Error::BoundaryMismatch(next.source, self.target));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * next.terms.len());
        for a in &self.terms {
            for b in &next.terms {
                let coef = a.coef.mul(&b.coef);
                if coef.is_zero() {
                    continue;
                }
                let mut steps = a.steps.clone();
                steps.extend(b.steps.iter().cloned());
                terms.push(Program { coef, steps });
            }
        }
        Ok(LinearOp { source: self.source, target: next.target, terms })
    }

    pub fn star(&self) -> LinearOp {
        let terms = self
            .terms
            .iter()
            .map(|p| Program { coef: p.coef.clone(), steps: p.steps.iter().rev().map(Step::star).collect() })
            .collect();
        LinearOp { source: self.target, target: self.source, terms }
    }

    /// id_left ⊗ self ⊗ id_right.
    pub fn pad(&self, left: usize, right: usize) -> LinearOp {
        let terms = self
            .terms
            .iter()
            .map(|p| Program { coef: p.coef.clone(), steps: p.steps.iter().map(|s| s.pad(left, right)).collect() })
            .collect();
        LinearOp { source: self.source + left + right, target: self.target + left + right, terms }
    }

    pub fn scale(&self, c: &PsiRatio) -> LinearOp {
        let terms = self
            .terms
            .iter()
            .filter_map(|p| {
                let coef = p.coef.mul(c);
                (!coef.is_zero()).then(|| Program { coef, steps: p.steps.clone() })
            })
            .collect();
        LinearOp { source: self.source, target: self.target, terms }
    }

    pub fn add(&self, o: &LinearOp) -> Result<LinearOp> {
        if self.source != o.source || self.target != o.target {
            return Err(Error::BoundaryMismatch(self.source + self.target, o.source + o.target));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(LinearOp { source: self.source, target: self.target, terms })
    }

    pub fn sub(&self, o: &LinearOp) -> Result<LinearOp> {
        let neg = PsiRatio { sign: -1, num: Den::one(), den: Den::one() };
        self.add(&o.scale(&neg))
    }

    /// Common denominator of all programs.
    pub fn den(&self) -> Den {
        self.terms.iter().fold(Den::one(), |acc, p| acc.lcm(&p.den()))
    }

    pub fn max_clasp(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|p| p.steps.iter())
            .map(|s| if let Step::Clasp { k, .. } = s { *k } else { 0 })
            .max()
            .unwrap_or(0)
    }
}

/// A morphism num / den with a symbolic denominator.
#[derive(Clone, Debug)]
pub struct Frac<E> {
    pub den: Den,
    pub num: Morphism<E>,
}

struct Scalars<E> {
    /// signed[a][l] = (−1)^a [a] δ^l; the sign is fixed up by the caller.
    table: Vec<Vec<E>>,
}

impl<E: Clone> Scalars<E> {
    fn new<R: CoeffRing<Elem = E>>(ring: &R, k: usize) -> Self {
        let mut dp = DeltaPowers::new(ring);
        let table = (0..=k)
            .map(|a| {
                let q = ring.from_poly(&qnum::quantum(a as i64));
                (0..=k).map(|l| ring.mul(&q, dp.get(ring, l))).collect()
            })
            .collect();
        Scalars { table }
    }
}

/// (id ⊗ C_j* ⊗ id) for j = 1..k−1, so the result is [k]!·(jw_k at `offset`)·x.
/// C_j* = Σ_{a=1}^{j+1} (−1)^{j+1−a} [a] u_a⋯u_j.
fn apply_clasp<R: CoeffRing>(
    ring: &R,
    k: usize,
    offset: usize,
    x: Morphism<R::Elem>,
    min_td: usize,
    sc: &Scalars<R::Elem>,
) -> Morphism<R::Elem> {
    let mut cur = x;
    for j in 1..k {
        let mut out = Morphism::zero(cur.m, cur.n);
        for (d, c) in &cur.terms {
            out.add_term(ring, d.clone(), &ring.mul(c, &sc.table[j + 1][0]));
            let mut e = d.clone();
            let mut loops = 0;
            let mut td = d.through_degree();
            for a in (1..=j).rev() {
                let g = offset + a;
                if e.generator_drops_td(g) {
                    td -= 2;
                    if td < min_td {
                        break;
                    }
                }
                if e.apply_generator_top(g) {
                    loops += 1;
                }
                let v = ring.mul(c, &sc.table[a][loops]);
                if (j + 1 - a) % 2 == 1 {
                    out.add_term(ring, e.clone(), &ring.neg(&v));
                } else {
                    out.add_term(ring, e.clone(), &v);
                }
            }
        }
        cur = out;
    }
    cur
}

fn apply_diagram<R: CoeffRing>(
    ring: &R,
    g: &Diagram,
    x: &Morphism<R::Elem>,
    min_td: usize,
    dp: &mut DeltaPowers<R::Elem>,
) -> Result<Morphism<R::Elem>> {
    let mut out = Morphism::zero(x.m, g.n());
    for (d, c) in &x.terms {
        let (e, loops) = compose_diagrams(g, d)?;
        if e.through_degree() < min_td {
            continue;
        }
        if loops == 0 {
            out.add_term(ring, e, c);
        } else {
            out.add_term(ring, e, &ring.mul(c, dp.get(ring, loops)));
        }
    }
    Ok(out)
}

/// The numerator of prog·x, i.e. prog·x = (±num(coef)/den(prog))·result,
/// keeping only terms of through degree ≥ min_td.
pub fn apply_program<R: CoeffRing>(
    ring: &R,
    prog: &Program,
    x: &Morphism<R::Elem>,
    min_td: usize,
) -> Result<Morphism<R::Elem>> {
    let kmax = prog.steps.iter().map(|s| if let Step::Clasp { k, .. } = s { *k } else { 0 }).max().unwrap_or(0);
    let sc = Scalars::new(ring, kmax.max(1));
    let mut dp = DeltaPowers::new(ring);
    let mut cur = x.clone();
    cur.keep_td_at_least(min_td);
    for s in &prog.steps {
        cur = match s {
            Step::Clasp { k, offset } => {
                if offset + k > cur.n {
                    return Err(Error::BadStrandCount { n: cur.n, k: offset + k });
                }
                apply_clasp(ring, *k, *offset, cur, min_td, &sc)
            }
            Step::Diagram(g) => {
                if g.m() != cur.n {
                    return Err(Error::BoundaryMismatch(g.m(), cur.n));
                }
                apply_diagram(ring, g, &cur, min_td, &mut dp)?
            }
        };
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

/// op·x over a common denominator.
pub fn apply_op<R: CoeffRing>(ring: &R, op: &LinearOp, x: &Morphism<R::Elem>, min_td: usize) -> Result<Frac<R::Elem>> {
    if x.n != op.source {
        return Err(Error::BoundaryMismatch(op.source, x.n));
    }
    let e = op.den();
    let mut total = Morphism::zero(x.m, op.target);
    for prog in &op.terms {
        if prog.coef.is_zero() {
            continue;
        }
        let part = apply_program(ring, prog, x, min_td)?;
        if part.is_zero() {
            continue;
        }
        let cof = e.div(&prog.den()).expect("lcm").mul(&prog.coef.num).to_poly();
        let mut cof = ring.from_poly(&cof);
        if prog.coef.sign < 0 {
            cof = ring.neg(&cof);
        }
        for (d, c) in &part.terms {
            total.add_term(ring, d.clone(), &ring.mul(&cof, c));
        }
    }
    Ok(Frac { den: e, num: total })
}

/// Cancels the ψ factors of den that divide num.
fn reduce_poly_ratio(num: &IntPoly, den: &Den) -> RatFunc {
    if num.is_zero() {
        return RatFunc::zero();
    }
    let mut n = num.clone();
    let mut d = Den::one();
    for (k, e) in den.exponents() {
        let psi = qnum::psi(k);
        let mut left = e;
        while left > 0 {
            match n.div_exact(&psi) {
                Some(q) => {
                    n = q;
                    left -= 1;
                }
                None => break,
            }
        }
        if left > 0 {
            d = d.mul(&Den(BTreeMap::from([(k, left)])));
        }
    }
    RatFunc::from_coprime_monic(n, d.to_poly())
}

impl Frac<IntPoly> {
    pub fn to_ratfunc(&self) -> Morphism<RatFunc> {
        let mut r = Morphism::zero(self.num.m, self.num.n);
        for (d, c) in &self.num.terms {
            let v = reduce_poly_ratio(c, &self.den);
            if !v.is_zero() {
                r.terms.insert(d.clone(), v);
            }
        }
        r
    }

    pub fn to_local(&self, chi: &MixedChar) -> Result<Morphism<LocalFrac>> {
        let mut r = Morphism::zero(self.num.m, self.num.n);
        for (d, c) in &self.num.terms {
            let v = reduce_poly_ratio(c, &self.den);
            if v.is_zero() {
                continue;
            }
            let l = LocalFrac::new(v, chi).map_err(|_| Error::CoefficientNotLocal(format!("coefficient of {d}")))?;
            r.terms.insert(d.clone(), l);
        }
        Ok(r)
    }

    pub fn coeff(&self, d: &Diagram) -> RatFunc {
        self.num.terms.get(d).map_or_else(RatFunc::zero, |c| reduce_poly_ratio(c, &self.den))
    }
}

impl Frac<u64> {
    pub fn at_point(&self, ring: &FpPoint) -> Result<Morphism<u64>> {
        let e = ring.eval(&self.den.to_poly());
        let inv = ring.inv(&e).ok_or_else(|| Error::OutOfRange("denominator vanishes at the point".into()))?;
        Ok(self.num.scale(ring, &inv))
    }
}

impl Frac<Box<[u32]>> {
    /// Residues in 𝕜 of the integral coefficients num/den.
    pub fn residues(&self, series: &ResidueSeries) -> Result<Morphism<u32>> {
        let e = series.from_poly(&self.den.to_poly());
        let mut r = Morphism::zero(self.num.m, self.num.n);
        for (d, c) in &self.num.terms {
            let v = series
                .residue_of_ratio(c, &e)
                .ok_or_else(|| Error::CoefficientNotLocal(format!("coefficient of {d}")))?;
            if v != 0 {
                r.terms.insert(d.clone(), v);
            }
        }
        Ok(r)
    }
}

/// Which idempotent family G builds the ladder morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Classical,
    Mixed,
    Special,
}

fn stretch_data(n: u64, s: &[u32], chi: &MixedChar) -> Result<Vec<(u64, u64, u64)>> {
    let pieces = digits::minimal_stretches(s, n, Direction::Down, chi)?;
    let mut cur = n;
    let mut out = Vec::new();
    for piece in pieces.iter().rev() {
        let t = *piece.last().unwrap();
        let x = digits::truncate_below(cur, t as i64, chi)?;
        let e = digits::expand(cur, chi);
        let y: u64 = piece.iter().map(|&i| e.digit(i as usize) * digits::place_value(chi, i as usize).unwrap()).sum();
        out.push((x, y, cur));
        cur -= 2 * y;
    }
    debug_assert_eq!(cur, digits::reflect_down(n, s, chi)?);
    Ok(out)
}

/// G_n as an operator: jw_n for the classical family, JW_n otherwise.
pub fn idempotent_op(family: Family, n: u64, chi: &MixedChar) -> Result<LinearOp> {
    match family {
        Family::Classical => Ok(LinearOp::clasp(n as usize, n as usize, 0)),
        Family::Mixed | Family::Special => mixed_jw_op(n, chi),
    }
}

/// The down morphism n → n[S] of a family, one stretch map per minimal
/// stretch, highest first.
pub fn down_op(family: Family, n: u64, s: &[u32], chi: &MixedChar) -> Result<LinearOp> {
    if !digits::is_down_admissible(n, s, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n, dir: "down" });
    }
    let mut op = LinearOp::identity(n as usize);
    for (x, y, cur) in stretch_data(n, s, chi)? {
        let g = idempotent_op(family, x, chi)?.pad(0, (cur - x) as usize);
        let cap = LinearOp::diagram(Diagram::rainbow_cap((x - y) as usize, y as usize, (cur - x - y) as usize));
        op = op.then(&g)?.then(&cap)?;
    }
    Ok(op)
}

/// The up morphism m → m(S) for S up-admissible for m: the star of the down
/// morphism m(S) → m.
pub fn up_op(family: Family, m: u64, s: &[u32], chi: &MixedChar) -> Result<LinearOp> {
    let top = digits::reflect_up(m, s, chi)?;
    Ok(down_op(family, top, s, chi)?.star())
}

/// x_n^S = u_S jw_{n[S]} d_S.
pub fn x_op(n: u64, s: &[u32], chi: &MixedChar) -> Result<LinearOp> {
    let d = down_op(Family::Classical, n, s, chi)?;
    let mid = LinearOp::clasp(d.target, d.target, 0);
    d.then(&mid)?.then(&d.star())
}

/// λ_n^S = ∏_{s∈S} [a_{n,s−1}[S]+1]/[a_{n,s}[S]+1], reading a_{n,−1} as n.
pub fn lambda(n: u64, s: &[u32], chi: &MixedChar) -> Result<PsiRatio> {
    if !digits::is_down_admissible(n, s, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n, dir: "down" });
    }
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    for &x in s {
        let hi = digits::truncate_below(n, x as i64 - 1, chi)?;
        let lo = digits::truncate_below(n, x as i64, chi)?;
        nums.push(digits::negate_digits(hi, s, chi)? + 1);
        dens.push(digits::negate_digits(lo, s, chi)? + 1);
    }
    PsiRatio::quantum_ratio(&nums, &dens)
}

pub fn lambda_coeff(n: u64, s: &[u32], chi: &MixedChar) -> Result<RatFunc> {
    Ok(lambda(n, s, chi)?.to_ratfunc())
}

/// The terms (S, n[S]) of JW_n, checking that distinct S give distinct n[S]
/// and that together they exhaust supp(n).
pub fn support_terms(n: u64, chi: &MixedChar) -> Result<Vec<(AdmSet, u64)>> {
    let sets = digits::down_admissible_sets(n, chi);
    let mut seen = BTreeMap::new();
    for s in &sets {
        let t = s.target(chi);
        if seen.insert(t, s.clone()).is_some() {
            return Err(Error::Unsupported(format!("two down-admissible sets of {n} reflect to {t}")));
        }
    }
    let supp = digits::support(n, chi);
    if supp.len() != seen.len() || supp.iter().any(|v| !seen.contains_key(v)) {
        return Err(Error::Unsupported(format!("down-admissible reflections of {n} differ from its support")));
    }
    Ok(sets.into_iter().map(|s| (s.clone(), s.target(chi))).collect())
}

/// JW_n = Σ_{m ∈ supp(n)} λ_n^S x_n^S.
pub fn mixed_jw_op(n: u64, chi: &MixedChar) -> Result<LinearOp> {
    let mut op: Option<LinearOp> = None;
    for (s, _) in support_terms(n, chi)? {
        let term = x_op(n, &s.indices, chi)?.scale(&lambda(n, &s.indices, chi)?);
        op = Some(match op {
            None => term,
            Some(o) => o.add(&term)?,
        });
    }
    Ok(op.unwrap_or_else(|| LinearOp::clasp(n as usize, n as usize, 0)))
}

/// The mother-sum expression of JW_n, for n not Eve: a sum over
/// m ∈ supp(mo(n)) of λ_{mo(n)}^{S'} times
/// (u_{S'}⊗id) (jw_{A+y} + [A−y+1]/[A+1] · J cup jw_{A−y} cap J) (d_{S'}⊗id),
/// with y = a_t p^(t) the lowest digit block of n, A = mo(n)[S'] and
/// J = jw_A ⊗ id_y. Without J the second term is not x_n^{S'∪{t}}.
pub fn mother_sum_op(n: u64, chi: &MixedChar) -> Result<LinearOp> {
    let mo = digits::mother(n, chi).ok_or_else(|| Error::Unsupported(format!("{n} is Eve")))?;
    let y = n - mo;
    let yu = y as usize;
    let mut total: Option<LinearOp> = None;
    for (s, a) in support_terms(mo, chi)? {
        let lam = lambda(mo, &s.indices, chi)?;
        let d = down_op(Family::Classical, mo, &s.indices, chi)?.pad(0, yu);
        let au = a as usize;
        let first = LinearOp::clasp(au + yu, au + yu, 0);
        let cap = LinearOp::diagram(Diagram::rainbow_cap(au - yu, yu, 0));
        let cup = LinearOp::diagram(Diagram::rainbow_cup(au - yu, yu, 0));
        let ratio = PsiRatio::quantum_ratio(&[a as i64 - y as i64 + 1], &[a as i64 + 1])?;
        let side = LinearOp::clasp(au + yu, au, 0);
        let second = side
            .then(&cap)?
            .then(&LinearOp::clasp(au - yu, au - yu, 0))?
            .then(&cup)?
            .then(&side)?
            .scale(&ratio);
        let mid = first.add(&second)?;
        let term = d.then(&mid)?.then(&d.star())?.scale(&lam);
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term)?,
        });
    }
    total.ok_or_else(|| Error::Unsupported("empty support".into()))
}

/// jw_n = num/den over ℤ[δ].
pub fn jw_frac(n: usize) -> Frac<IntPoly> {
    let op = LinearOp::clasp(n, n, 0);
    apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, n), 0).expect("shapes match")
}

/// The classical Jones–Wenzl idempotent over ℚ(δ).
pub fn jw(n: usize) -> Morphism<RatFunc> {
    jw_frac(n).to_ratfunc()
}

pub fn x_idem(n: u64, s: &[u32], chi: &MixedChar) -> Result<Morphism<RatFunc>> {
    let op = x_op(n, s, chi)?;
    Ok(apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, n as usize), 0)?.to_ratfunc())
}

/// JW_n with exact coefficients in ℤ[δ]_𝔪.
pub fn mixed_jw(n: u64, chi: &MixedChar) -> Result<Morphism<LocalFrac>> {
    let op = mixed_jw_op(n, chi)?;
    apply_op(&IntPolyRing, &op, &Morphism::identity(&IntPolyRing, n as usize), 0)?.to_local(chi)
}

/// A series ring precise enough to read residues of num/den for den | `den`.
pub fn residue_series_for(den: &Den, chi: &MixedChar) -> Result<ResidueSeries> {
    let field = chi.field()?;
    let mut v = 0usize;
    for (k, e) in den.exponents() {
        let vk = ResidueSeries::poly_valuation(&field, &qnum::psi(k))
            .ok_or_else(|| Error::Unsupported(format!("ψ{k} vanishes mod p")))?;
        v += vk * e as usize;
    }
    Ok(ResidueSeries::new(field, v + 1))
}

/// op·x over 𝕜, for op with coefficients in ℤ[δ]_𝔪 and x over 𝕜.
pub fn apply_op_residue(op: &LinearOp, x: &Morphism<u32>, min_td: usize, chi: &MixedChar) -> Result<Morphism<u32>> {
    let series = residue_series_for(&op.den(), chi)?;
    let lifted = x.map_coeffs(&series, |&c| series.constant(c));
    apply_op(&series, op, &lifted, min_td)?.residues(&series)
}

/// JW̄_n over 𝕜, with coefficients as field codes.
pub fn specialized_jw(n: u64, chi: &MixedChar) -> Result<Morphism<u32>> {
    let op = mixed_jw_op(n, chi)?;
    let field = chi.field()?;
    apply_op_residue(&op, &Morphism::identity(&field, n as usize), 0, chi)
}

/// The six kinds of ladder morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    ClassicalDown,
    ClassicalUp,
    MixedDown,
    MixedUp,
    SpecialDown,
    SpecialUp,
}

impl LadderKind {
    pub fn symbol(self) -> &'static str {
        match self {
            LadderKind::ClassicalDown => "d",
            LadderKind::ClassicalUp => "u",
            LadderKind::MixedDown => "D",
            LadderKind::MixedUp => "U",
            LadderKind::SpecialDown => "D̄",
            LadderKind::SpecialUp => "Ū",
        }
    }
}

#[derive(Clone, Debug)]
pub enum LadderPayload {
    Rational(Morphism<RatFunc>),
    Local(Morphism<LocalFrac>),
    Residue(Morphism<u32>),
}

#[derive(Clone, Debug)]
pub struct LadderMorphism {
    pub kind: LadderKind,
    pub set: AdmSet,
    pub op: LinearOp,
    pub morphism: LadderPayload,
}

fn evaluate(family: Family, op: &LinearOp, chi: &MixedChar) -> Result<LadderPayload> {
    let n = op.source;
    Ok(match family {
        Family::Classical => {
            LadderPayload::Rational(apply_op(&IntPolyRing, op, &Morphism::identity(&IntPolyRing, n), 0)?.to_ratfunc())
        }
        Family::Mixed => {
            LadderPayload::Local(apply_op(&IntPolyRing, op, &Morphism::identity(&IntPolyRing, n), 0)?.to_local(chi)?)
        }
        Family::Special => {
            let field = chi.field()?;
            LadderPayload::Residue(apply_op_residue(op, &Morphism::identity(&field, n), 0, chi)?)
        }
    })
}

/// d_S, D_S or D̄_S from n to n[S].
pub fn down_morphism(family: Family, n: u64, s: &[u32], chi: &MixedChar) -> Result<LadderMorphism> {
    let set = AdmSet::new(s, Direction::Down, n, chi)?;
    let op = down_op(family, n, s, chi)?;
    let kind = match family {
        Family::Classical => LadderKind::ClassicalDown,
        Family::Mixed => LadderKind::MixedDown,
        Family::Special => LadderKind::SpecialDown,
    };
    let morphism = evaluate(family, &op, chi)?;
    Ok(LadderMorphism { kind, set, op, morphism })
}

/// u_S, U_S or Ū_S from m to m(S).
pub fn up_morphism(family: Family, m: u64, s: &[u32], chi: &MixedChar) -> Result<LadderMorphism> {
    let set = AdmSet::new(s, Direction::Up, m, chi)?;
    let op = up_op(family, m, s, chi)?;
    let kind = match family {
        Family::Classical => LadderKind::ClassicalUp,
        Family::Mixed => LadderKind::MixedUp,
        Family::Special => LadderKind::SpecialUp,
    };
    let morphism = evaluate(family, &op, chi)?;
    Ok(LadderMorphism { kind, set, op, morphism })
}

/// Memo tables for the three families at a fixed characteristic.
pub struct JwTable {
    pub chi: MixedChar,
    pub max_n: usize,
    classical: RwLock<HashMap<usize, Morphism<RatFunc>>>,
    mixed: RwLock<HashMap<u64, Morphism<LocalFrac>>>,
    special: RwLock<HashMap<u64, Morphism<u32>>>,
}

/// Default cap on n for full idempotents; |End(16)| = 35357670 diagrams.
pub const DEFAULT_MAX_N: usize = 16;

impl JwTable {
    pub fn new(chi: MixedChar) -> Self {
        JwTable {
            chi,
            max_n: DEFAULT_MAX_N,
            classical: RwLock::new(HashMap::new()),
            mixed: RwLock::new(HashMap::new()),
            special: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_max_n(chi: MixedChar, max_n: usize) -> Self {
        JwTable { max_n, ..JwTable::new(chi) }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::ScaleLimit(format!("n = {n} exceeds the cap {}", self.max_n)));
        }
        Ok(())
    }

    pub fn jw(&self, n: usize) -> Result<Morphism<RatFunc>> {
        self.check(n)?;
        if let Some(m) = self.classical.read().unwrap().get(&n) {
            return Ok(m.clone());
        }
        let m = jw(n);
        self.classical.write().unwrap().insert(n, m.clone());
        Ok(m)
    }

    pub fn mixed(&self, n: u64) -> Result<Morphism<LocalFrac>> {
        self.check(n as usize)?;
        if let Some(m) = self.mixed.read().unwrap().get(&n) {
            return Ok(m.clone());
        }
        let m = mixed_jw(n, &self.chi)?;
        self.mixed.write().unwrap().insert(n, m.clone());
        Ok(m)
    }

    pub fn special(&self, n: u64) -> Result<Morphism<u32>> {
        self.check(n as usize)?;
        if let Some(m) = self.special.read().unwrap().get(&n) {
            return Ok(m.clone());
        }
        let m = specialized_jw(n, &self.chi)?;
        self.special.write().unwrap().insert(n, m.clone());
        Ok(m)
    }
}

/// The field 𝕜 of a characteristic, for callers building vectors over it.
pub fn residue_field(chi: &MixedChar) -> Result<Fq> {
    chi.field()
}

#[cfg(test)]
mod tests;
