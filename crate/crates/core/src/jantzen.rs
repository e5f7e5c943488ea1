//! Two-dimensional Jantzen data over the grid of ideals (p^i, m_δ^j): the
//! values γ_S = ⟨v, v⟩, their valuations ξ_i, staircase regions and the
//! submodules M(I) of a Gram form.

use crate::cellmod::{self, GramMatrix};
use crate::diagram::{Diagram, Morphism};
use crate::digits::{self, fmt_set};
use crate::error::{Error, Result};
use crate::jw::{apply_op, down_op, up_op, Family, LinearOp, PsiRatio};
use crate::linalg::Echelon;
use crate::qnum;
use crate::ring::{prime_power, quotient_ring_solve, IntPoly, IntPolyRing, LocalFrac, MixedChar, QuotientRing, RatFunc};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// The ideal (p^i, m_δ^j) of ℤ[δ], with i, j ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealGridPoint {
    pub i: u32,
    pub j: u32,
}

impl IdealGridPoint {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 || j == 0 {
            return Err(Error::OutOfRange(format!("grid point ({i}, {j})")));
        }
        Ok(IdealGridPoint { i, j })
    }

    /// Ideal containment self ⊇ other.
    pub fn contains(&self, other: &IdealGridPoint) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

impl fmt::Display for IdealGridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p^{}, m^{})", self.i, self.j)
    }
}

fn up_target(m: u64, s: &[u32], chi: &MixedChar) -> Result<u64> {
    digits::reflect_up(m, s, chi)
}

/// ∏_{s∈S} [a_{N,s}[S]+1] / [a_{N,s−1}[S]+1] with N = m(S) and a_{N,−1} = N.
pub fn gamma_ratio(m: u64, s: &[u32], chi: &MixedChar) -> Result<PsiRatio> {
    let top = up_target(m, s, chi)?;
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    for &x in s {
        let a = digits::truncate_below(top, x as i64, chi)?;
        let b = digits::truncate_below(top, x as i64 - 1, chi)?;
        nums.push(digits::negate_digits(a, s, chi)? + 1);
        dens.push(digits::negate_digits(b, s, chi)? + 1);
    }
    PsiRatio::quantum_ratio(&nums, &dens)
}

pub fn gamma(m: u64, s: &[u32], chi: &MixedChar) -> Result<LocalFrac> {
    LocalFrac::new(gamma_ratio(m, s, chi)?.to_ratfunc(), chi)
}

/// The coefficient of id_m in jw_m d_S u_S jw_m over ℚ(δ), where u_S: m → m(S)
/// and d_S is its star.
pub fn gamma_diagrammatic(m: u64, s: &[u32], chi: &MixedChar) -> Result<RatFunc> {
    let top = up_target(m, s, chi)?;
    let mu = m as usize;
    let op = LinearOp::clasp(mu, mu, 0)
        .then(&up_op(Family::Classical, m, s, chi)?)?
        .then(&down_op(Family::Classical, top, s, chi)?)?
        .then(&LinearOp::clasp(mu, mu, 0))?;
    let r = IntPolyRing;
    let out = apply_op(&r, &op, &Morphism::identity(&r, mu), mu)?;
    Ok(out.coeff(&Diagram::identity(mu)))
}

/// S^i: S without its i largest elements.
pub fn drop_largest(s: &[u32], i: usize) -> &[u32] {
    &s[..s.len().saturating_sub(i)]
}

/// ξ_i(γ_S) from the closed form. S is sorted ascending.
pub fn xi_closed_form(i: u32, s: &[u32], chi: &MixedChar) -> Result<u32> {
    if i == 0 {
        return Err(Error::OutOfRange("xi index starts at 1".into()));
    }
    let p = chi.p;
    if p == 0 || chi.ell.is_none() {
        return Err(Error::Unsupported("xi needs a prime p and finite ell".into()));
    }
    let zero = u32::from(s.first() == Some(&0));
    if p == 2 && i as usize > s.len() {
        return Ok(zero);
    }
    let mut sum = 0u64;
    for &x in drop_largest(s, i as usize - 1) {
        if x > 0 {
            sum += p.pow(x) - p.pow(x - 1);
        }
    }
    let v = sum + u64::from(zero);
    let v = if p == 2 { 2 * v } else { v };
    u32::try_from(v).map_err(|_| Error::ScaleLimit(format!("xi value {v}")))
}

/// ξ_1, ..., ξ_imax of γ_S computed from the polynomial
/// ∏_{s∈S} [p^(s+1)] / [p^(s)] reduced modulo p^imax, by its m_δ-adic expansion.
/// Products are cached by set, so running over many sets only multiplies
/// once per new set.
pub struct XiOracle {
    chi: MixedChar,
    imax: u32,
    modulus: u64,
    m: Vec<u64>,
    ratios: HashMap<u32, Vec<u64>>,
    products: HashMap<Vec<u32>, Vec<u64>>,
}

impl XiOracle {
    pub fn new(chi: &MixedChar, imax: u32) -> Result<Self> {
        if chi.p == 0 || chi.ell.is_none() {
            return Err(Error::Unsupported("xi needs a prime p and finite ell".into()));
        }
        let modulus = prime_power(chi.p, imax.max(1))?;
        if modulus >= 1 << 24 {
            return Err(Error::ScaleLimit(format!("p^{imax} too large for the oracle")));
        }
        let m = chi.m_delta.mod_u64(modulus);
        Ok(XiOracle { chi: chi.clone(), imax: imax.max(1), modulus, m, ratios: HashMap::new(), products: HashMap::new() })
    }

    fn quantum_mod(&self, k: u64) -> Vec<u64> {
        let n = self.modulus;
        let (mut a, mut b) = (vec![0u64], vec![1u64]);
        for _ in 1..k {
            let mut c = vec![0u64; b.len() + 1];
            for (t, &x) in b.iter().enumerate() {
                c[t + 1] = x;
            }
            for (t, &x) in a.iter().enumerate() {
                c[t] = (c[t] + n - x) % n;
            }
            (a, b) = (b, c);
        }
        b
    }

    fn ratio(&mut self, s: u32) -> Result<Vec<u64>> {
        if let Some(r) = self.ratios.get(&s) {
            return Ok(r.clone());
        }
        let hi = digits::place_value(&self.chi, s as usize + 1).ok_or_else(|| Error::ScaleLimit(format!("position {s}")))?;
        let lo = digits::place_value(&self.chi, s as usize).unwrap();
        let (q, r) = divrem_monic(&self.quantum_mod(hi), &self.quantum_mod(lo), self.modulus);
        if r.iter().any(|&x| x != 0) {
            return Err(Error::Unsupported(format!("[{lo}] does not divide [{hi}]")));
        }
        self.ratios.insert(s, q.clone());
        Ok(q)
    }

    fn product(&mut self, s: &[u32]) -> Result<Vec<u64>> {
        if s.is_empty() {
            return Ok(vec![1]);
        }
        if let Some(f) = self.products.get(s) {
            return Ok(f.clone());
        }
        let head = self.product(&s[..s.len() - 1])?;
        let r = self.ratio(*s.last().unwrap())?;
        let f = mul_mod(&head, &r, self.modulus);
        self.products.insert(s.to_vec(), f.clone());
        Ok(f)
    }

    /// (ξ_1, ..., ξ_imax).
    pub fn profile(&mut self, s: &[u32]) -> Result<Vec<u32>> {
        let f = self.product(s)?;
        m_adic_profile(f, &self.m, self.chi.p, self.imax, self.modulus)
    }
}

fn mul_mod(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o = (*o + x * y) % n;
        }
    }
    out
}

/// Division by a monic polynomial over ℤ/n with n < 2^24.
fn divrem_monic(a: &[u64], m: &[u64], n: u64) -> (Vec<u64>, Vec<u64>) {
    let k = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= k {
        return (vec![0], r);
    }
    let mut q = vec![0u64; r.len() - k];
    for t in (k..r.len()).rev() {
        let c = r[t] % n;
        q[t - k] = c;
        if c != 0 {
            for (u, &mu) in m[..k].iter().enumerate() {
                let x = &mut r[t - k + u];
                *x = (*x + n - c * mu % n) % n;
            }
        }
        r[t] = 0;
    }
    r.truncate(k);
    (q, r)
}

fn p_val(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(cap)
}

/// f = Σ c_k m^k with deg c_k < deg m; f ∈ (p^i, m^j) iff c_0, ..., c_{j−1}
/// all vanish mod p^i.
fn m_adic_profile(mut f: Vec<u64>, m: &[u64], p: u64, imax: u32, n: u64) -> Result<Vec<u32>> {
    let mut out = vec![None; imax as usize];
    let mut j = 0u32;
    loop {
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        if f.iter().all(|&x| x == 0) {
            break;
        }
        let (q, r) = divrem_monic(&f, m, n);
        let w = r.iter().map(|&x| p_val(x, p, imax)).min().unwrap_or(imax);
        for slot in out.iter_mut().skip(w as usize) {
            slot.get_or_insert(j);
        }
        if w == 0 {
            break;
        }
        j += 1;
        f = q;
    }
    out.into_iter().enumerate().map(|(i, v)| v.ok_or(Error::XiUnbounded(i as u32 + 1))).collect()
}

/// ξ_i(γ_S) by the polynomial route, for S up-admissible for m.
pub fn xi_oracle(i: u32, s: &[u32], m: u64, chi: &MixedChar) -> Result<u32> {
    if i == 0 {
        return Err(Error::OutOfRange("xi index starts at 1".into()));
    }
    if !digits::is_up_admissible(m, s, chi) {
        return Err(Error::NotAdmissible { set: s.to_vec(), n: m, dir: "up" });
    }
    Ok(XiOracle::new(chi, i)?.profile(s)?[i as usize - 1])
}

/// The exact ℤ[δ] numerator ∏_{s∈S} [p^(s+1)] / [p^(s)].
pub fn gamma_numerator(s: &[u32], chi: &MixedChar) -> Result<IntPoly> {
    let mut f = IntPoly::one();
    for &x in s {
        let hi = digits::place_value(chi, x as usize + 1).ok_or_else(|| Error::ScaleLimit(format!("position {x}")))?;
        let lo = digits::place_value(chi, x as usize).unwrap();
        let q = qnum::quantum(hi as i64).div_exact(&qnum::quantum(lo as i64)).expect("[lo] divides [hi]");
        f = f.mul(&q);
    }
    Ok(f)
}

/// F with [p^(k+1)] = [p^(k)]([p]^{p^{k−1}} [ℓ]^{(p−1)p^{k−1}} + pF).
pub fn qidentity_remainder(k: u32, chi: &MixedChar) -> Result<IntPoly> {
    let (p, ell) = (chi.p, chi.ell()?);
    if p == 0 || k == 0 {
        return Err(Error::OutOfRange(format!("k = {k}, p = {p}")));
    }
    let hi = digits::place_value(chi, k as usize + 1).unwrap();
    let lo = digits::place_value(chi, k as usize).unwrap();
    let q = qnum::quantum(hi as i64).div_exact(&qnum::quantum(lo as i64)).expect("exact");
    let e = p.pow(k - 1) as u32;
    let t = qnum::quantum(p as i64).pow(e).mul(&qnum::quantum(ell as i64).pow((p as u32 - 1) * e));
    let diff = q.sub(&t);
    let pz = crate::ring::Zint::from(p as i64);
    let c: Vec<_> = diff.coeffs().iter().map(|x| x.div_exact(&pz)).collect();
    let f = IntPoly::from_zints(c);
    debug_assert_eq!(f.scale(&pz), diff);
    Ok(f)
}

/// The region {(i, j) : 1 ≤ j ≤ ξ_i(γ_S)} for i ≤ imax.
pub fn factor_grid_sublattice(n: u64, m: u64, s: &[u32], chi: &MixedChar, imax: u32) -> Result<BTreeSet<IdealGridPoint>> {
    if up_target(m, s, chi)? > n {
        return Err(Error::OutOfRange(format!("m(S) exceeds {n}")));
    }
    let mut out = BTreeSet::new();
    for i in 1..=imax {
        for j in 1..=xi_closed_form(i, s, chi)? {
            out.insert(IdealGridPoint { i, j });
        }
    }
    Ok(out)
}

/// One factor's column heights ξ_1, ..., ξ_{|S|+1}; the last value repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Staircase {
    pub factor: u64,
    pub set: String,
    pub heights: Vec<u32>,
    pub stable: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiTable {
    pub n: u64,
    pub m: u64,
    pub ell: u64,
    pub p: u64,
    pub rows: Vec<Staircase>,
}

impl XiTable {
    pub fn value(&self, factor: u64, i: u32) -> Option<u32> {
        let r = self.rows.iter().find(|r| r.factor == factor)?;
        Some(r.heights.get(i as usize - 1).copied().unwrap_or(r.stable))
    }

    pub fn to_csv(&self) -> String {
        let width = self.rows.iter().map(|r| r.heights.len()).max().unwrap_or(0);
        let mut s = String::from("factor,set");
        for i in 1..=width {
            s += &format!(",xi{i}");
        }
        s += ",stable\n";
        for r in &self.rows {
            s += &format!("{},\"{}\"", r.factor, r.set);
            for i in 0..width {
                s += &format!(",{}", r.heights.get(i).copied().unwrap_or(r.stable));
            }
            s += &format!(",{}\n", r.stable);
        }
        s
    }
}

pub fn staircase(m: u64, s: &[u32], chi: &MixedChar) -> Result<Staircase> {
    let factor = up_target(m, s, chi)?;
    let stab = s.len() as u32 + 1;
    let heights = (1..=stab).map(|i| xi_closed_form(i, s, chi)).collect::<Result<Vec<_>>>()?;
    Ok(Staircase { factor, set: fmt_set(s), stable: *heights.last().unwrap(), heights })
}

/// Staircases of every composition factor of W_n(m), by increasing factor.
pub fn xi_table(n: u64, m: u64, chi: &MixedChar) -> Result<XiTable> {
    let mut rows = cellmod::composition_factors(n, m, chi)?
        .into_iter()
        .map(|(_, s)| staircase(m, &s.indices, chi))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.factor);
    Ok(XiTable { n, m, ell: chi.ell()?, p: chi.p, rows })
}

/// M(I) ⊗ 𝕜 = image of {x : G x ≡ 0 (mod I)} in W ⊗ 𝕜, as a basis of field-code
/// vectors in the cell basis.
pub fn form_submodule(gram: &GramMatrix<LocalFrac>, point: IdealGridPoint, chi: &MixedChar) -> Result<Vec<Vec<u32>>> {
    let k = gram.entries.len();
    if k > 64 {
        return Err(Error::ScaleLimit(format!("Gram matrix of size {k}")));
    }
    let ring = QuotientRing::new(chi, point.i, point.j)?;
    if k * ring.dim > 1200 {
        return Err(Error::ScaleLimit(format!("{k} x {} over the quotient", ring.dim)));
    }
    let mut a = Vec::with_capacity(k);
    for row in &gram.entries {
        let mut r = Vec::with_capacity(k);
        for e in row {
            let d = ring.inv(&ring.from_poly(e.den())).ok_or(Error::DenominatorInMaximalIdeal)?;
            r.push(ring.mul(&ring.from_poly(e.num()), &d));
        }
        a.push(r);
    }
    let field = chi.field()?;
    let mut span = Echelon::new(k);
    for g in quotient_ring_solve(&a, &ring) {
        let v: Vec<u32> = g.iter().map(|e| field.from_poly(&IntPoly::from_u64s(&ring.residue(e)))).collect();
        span.insert(&field, &v);
    }
    Ok(span.basis().cloned().collect())
}

/// M(I) ⊗ 𝕜 for a set of grid points.
#[derive(Clone, Debug)]
pub struct FormFiltration {
    pub gram: GramMatrix<LocalFrac>,
    pub layers: BTreeMap<IdealGridPoint, Vec<Vec<u32>>>,
}

pub fn form_filtration(n: usize, m: usize, chi: &MixedChar, points: &[IdealGridPoint]) -> Result<FormFiltration> {
    let ring = crate::ring::LocalRing { chi: chi.clone() };
    let gram = cellmod::gram(n, m, &ring)?;
    let mut layers = BTreeMap::new();
    for &pt in points {
        layers.insert(pt, form_submodule(&gram, pt, chi)?);
    }
    Ok(FormFiltration { gram, layers })
}

#[cfg(test)]
mod tests;
