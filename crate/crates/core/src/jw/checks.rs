//! Property checks for the idempotent families. Classical identities are
//! checked exactly on ℤ[δ] numerators. Identities involving JW_n are checked
//! on every cell module W_n(r) at a random point δ0 of 𝔽_P, with one random
//! vector per module; at a semisimple point the cell modules separate
//! morphisms, so a false identity survives with probability about 1/P.
//!
//! Each check returns the list of failed instances.

use super::*;
use crate::diagram::{enumerate_with_td, partial_close};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random semisimple point with one random vector in each W_n(r).
pub struct CellProbe {
    pub n: usize,
    pub point: FpPoint,
    vectors: Vec<(usize, Morphism<u64>)>,
}

const PROBE_PRIME: u64 = (1 << 61) - 1;

impl CellProbe {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let point = loop {
            let pt = FpPoint::new(PROBE_PRIME, rng.gen_range(2..PROBE_PRIME));
            if (1..=2 * n as i64 + 4).all(|j| pt.eval(&qnum::quantum(j)) != 0) {
                break pt;
            }
        };
        let mut vectors = Vec::new();
        for r in (n % 2..=n).step_by(2) {
            let mut v = Morphism::zero(r, n);
            for d in enumerate_with_td(r, n, r).expect("parity") {
                v.add_term(&point, d, &rng.gen_range(0..PROBE_PRIME));
            }
            vectors.push((r, v));
        }
        CellProbe { n, point, vectors }
    }

    /// op·v for each cell vector, modulo lower through degree.
    pub fn apply(&self, op: &LinearOp) -> Result<Vec<Morphism<u64>>> {
        if op.source != self.n {
            return Err(Error::BoundaryMismatch(op.source, self.n));
        }
        self.vectors
            .iter()
            .map(|(r, v)| apply_op(&self.point, op, v, *r)?.at_point(&self.point))
            .collect()
    }

    pub fn agree(&self, a: &LinearOp, b: &LinearOp) -> Result<bool> {
        if a.source != b.source || a.target != b.target {
            return Err(Error::BoundaryMismatch(a.target, b.target));
        }
        let (x, y) = (self.apply(a)?, self.apply(b)?);
        Ok(x.iter().zip(&y).all(|(p, q)| p.sub(&self.point, q).map_or(false, |d| d.is_zero())))
    }

    /// Whether op acts as the identity on W_n(n).
    pub fn top_is_identity(&self, op: &LinearOp) -> Result<bool> {
        let (r, v) = self.vectors.last().unwrap();
        debug_assert_eq!(*r, self.n);
        let x = apply_op(&self.point, op, v, *r)?.at_point(&self.point)?;
        Ok(x.sub(&self.point, v)?.is_zero())
    }
}

fn frac_equal(a: &Frac<IntPoly>, b: &Frac<IntPoly>) -> bool {
    a.to_ratfunc().sub(&RatField, &b.to_ratfunc()).map_or(false, |d| d.is_zero())
}

use crate::ring::RatField;

/// jw_n exactly: identity coefficient, star symmetry, cap-kill on both sides,
/// idempotency and every partial trace.
pub fn classical_exact(n: usize) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let ring = IntPolyRing;
    let f = jw_frac(n);
    let e = f.den.to_poly();
    if f.num.coeff(&ring, &Diagram::identity(n)) != e {
        bad.push(format!("jw_{n}: identity coefficient is not 1"));
    }
    if !f.num.star().sub(&ring, &f.num)?.is_zero() {
        bad.push(format!("jw_{n}: not star-invariant"));
    }
    for i in 1..n {
        if !f.num.left_generator(&ring, i).is_zero() {
            bad.push(format!("jw_{n}: u_{i} on top does not kill"));
        }
        if !f.num.star().left_generator(&ring, i).is_zero() {
            bad.push(format!("jw_{n}: u_{i} below does not kill"));
        }
    }
    let sq = apply_op(&ring, &LinearOp::clasp(n, n, 0), &f.num, 0)?;
    if !sq.num.sub(&ring, &f.num.scale(&ring, &e))?.is_zero() {
        bad.push(format!("jw_{n} is not idempotent"));
    }
    for k in 1..n {
        let tr = Frac { den: f.den.clone(), num: partial_close(&ring, &f.num, k)? };
        let lower = jw_frac(n - k);
        let c = PsiRatio::quantum_ratio(&[n as i64 + 1], &[(n + 1 - k) as i64])?;
        let want = Frac {
            den: lower.den.mul(&c.den),
            num: lower.num.scale(&ring, &c.num.to_poly()),
        };
        if !frac_equal(&tr, &want) {
            bad.push(format!("jw_{n}: partial trace of {k} strands"));
        }
    }
    Ok(bad)
}

/// (id_a ⊗ jw_m ⊗ id_b)·jw_n = jw_n for every placement. The placement below
/// jw_n is the star of this one, given star invariance.
pub fn absorption_exact(n: usize) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let ring = IntPolyRing;
    let f = jw_frac(n);
    for m in 2..=n {
        let scale = Den::factorial(m as u64).to_poly();
        let want = f.num.scale(&ring, &scale);
        for off in 0..=n - m {
            let op = LinearOp::clasp(n, m, off);
            let top = apply_op(&ring, &op, &f.num, 0)?;
            if !top.num.sub(&ring, &want)?.is_zero() {
                bad.push(format!("jw_{m} at offset {off} not absorbed by jw_{n}"));
            }
        }
    }
    Ok(bad)
}

/// JW_n² = JW_n, JW_n* = JW_n and JW_n ≡ id modulo lower through degree.
pub fn mixed_idempotent(n: u64, chi: &MixedChar, probe: &CellProbe) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let op = mixed_jw_op(n, chi)?;
    if !probe.agree(&op.then(&op)?, &op)? {
        bad.push(format!("JW_{n} is not idempotent"));
    }
    if !probe.agree(&op.star(), &op)? {
        bad.push(format!("JW_{n} is not star-invariant"));
    }
    if !probe.top_is_identity(&op)? {
        bad.push(format!("JW_{n} is not the identity on the top cell"));
    }
    Ok(bad)
}

fn is_stretch(s: &[u32]) -> bool {
    !s.is_empty() && s.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Both shortening identities for every down-admissible stretch of m, and
/// both dual identities for every up-admissible stretch S with m(S) ≤ bound.
/// Returns the failures and the number of identities checked.
pub fn shortening(m: u64, bound: u64, chi: &MixedChar, seed: u64) -> Result<(Vec<String>, usize)> {
    let mut bad = Vec::new();
    let mut count = 0;
    let probe = CellProbe::new(m as usize, seed);
    let jw_m = mixed_jw_op(m, chi)?;
    for s in digits::down_admissible_sets(m, chi) {
        if !is_stretch(&s.indices) {
            continue;
        }
        let t = s.target(chi);
        let d = down_op(Family::Mixed, m, &s.indices, chi)?;
        let jw_t = mixed_jw_op(t, chi)?;
        let rhs = jw_m.then(&d)?;
        let a = digits::truncate_below(m, *s.indices.last().unwrap() as i64, chi)?;
        let jw_a = mixed_jw_op(a, chi)?.pad(0, (m - a) as usize);
        let first = rhs.then(&jw_t)?;
        let second = jw_a.then(&d)?.then(&jw_t)?;
        count += 2;
        if !probe.agree(&first, &rhs)? {
            bad.push(format!("JW D JW_{m} ≠ D JW_{m} for S = {s}"));
        }
        if !probe.agree(&second, &rhs)? {
            bad.push(format!("JW D (JW_{a} ⊗ id) ≠ D JW_{m} for S = {s}"));
        }
    }
    for s in digits::up_admissible_sets(m, bound, chi) {
        if !is_stretch(&s.indices) {
            continue;
        }
        let t = s.target(chi);
        if t > bound {
            continue;
        }
        let u = up_op(Family::Mixed, m, &s.indices, chi)?;
        let jw_t = mixed_jw_op(t, chi)?;
        let a = digits::truncate_below(t, *s.indices.last().unwrap() as i64, chi)?;
        let jw_a = mixed_jw_op(a, chi)?.pad(0, (t - a) as usize);
        let rhs = u.then(&jw_t)?;
        let first = jw_m.then(&u)?.then(&jw_t)?;
        let second = jw_m.then(&u)?.then(&jw_a)?;
        count += 2;
        if !probe.agree(&first, &rhs)? {
            bad.push(format!("JW U JW_{m} ≠ JW U for S = {s}"));
        }
        if !probe.agree(&second, &rhs)? {
            bad.push(format!("(JW_{a} ⊗ id) U JW_{m} ≠ JW U for S = {s}"));
        }
    }
    Ok((bad, count))
}

/// The mother-sum expression agrees with the definition of JW_n.
pub fn mother_sum(n: u64, chi: &MixedChar, probe: &CellProbe) -> Result<Vec<String>> {
    if digits::is_eve(n, chi) {
        return Ok(vec![]);
    }
    let a = mixed_jw_op(n, chi)?;
    let b = mother_sum_op(n, chi)?;
    Ok(if probe.agree(&a, &b)? { vec![] } else { vec![format!("mother sum differs from JW_{n}")] })
}

/// λ_n^S x_n^S are orthogonal idempotents summing to JW_n.
pub fn x_orthogonal(n: u64, chi: &MixedChar, probe: &CellProbe) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let terms: Vec<(AdmSet, LinearOp)> = support_terms(n, chi)?
        .into_iter()
        .map(|(s, _)| {
            let op = x_op(n, &s.indices, chi)?.scale(&lambda(n, &s.indices, chi)?);
            Ok((s, op))
        })
        .collect::<Result<_>>()?;
    let zero = LinearOp { source: n as usize, target: n as usize, terms: vec![] };
    for (s, a) in &terms {
        for (t, b) in &terms {
            let ab = a.then(b)?;
            let want = if s == t { a } else { &zero };
            if !probe.agree(&ab, want)? {
                bad.push(format!("λx^{s} · λx^{t} wrong at n = {n}"));
            }
        }
    }
    Ok(bad)
}
