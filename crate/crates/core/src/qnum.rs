//! Quantum numbers [n]_δ, their ψ_k factors, and mixed-characteristic bookkeeping.

use crate::error::{Error, Result};
use crate::ring::{modpoly, IntPoly, ResidueField};
use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

/// Memo tables for [n] (n ≥ 0) and ψ_k (k ≥ 3).
#[derive(Default)]
pub struct QuantumCache {
    quantum: RwLock<Vec<IntPoly>>,
    psi: RwLock<BTreeMap<u64, IntPoly>>,
}

impl QuantumCache {
    pub fn new() -> Self {
        QuantumCache {
            quantum: RwLock::new(vec![IntPoly::zero(), IntPoly::one()]),
            psi: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn quantum(&self, n: i64) -> IntPoly {
        if n < 0 {
            return self.quantum(-n).neg();
        }
        let n = n as usize;
        {
            let t = self.quantum.read().unwrap();
            if let Some(q) = t.get(n) {
                return q.clone();
            }
        }
        let mut t = self.quantum.write().unwrap();
        let d = IntPoly::delta();
        while t.len() <= n {
            let k = t.len();
            let next = d.mul(&t[k - 1]).sub(&t[k - 2]);
            t.push(next);
        }
        t[n].clone()
    }

    pub fn psi(&self, k: u64) -> IntPoly {
        assert!(k >= 3, "psi is defined for k >= 3");
        if let Some(p) = self.psi.read().unwrap().get(&k) {
            return p.clone();
        }
        let mut num = if k % 2 == 0 {
            self.quantum((k / 2) as i64)
        } else {
            self.quantum(k.div_ceil(2) as i64).add(&self.quantum((k / 2) as i64))
        };
        for j in 3..k {
            if k % j == 0 {
                num = num.div_exact(&self.psi(j)).expect("psi factor divides");
            }
        }
        self.psi.write().unwrap().insert(k, num.clone());
        num
    }
}

fn cache() -> &'static QuantumCache {
    static C: OnceLock<QuantumCache> = OnceLock::new();
    C.get_or_init(QuantumCache::new)
}

/// The quantum number [n]_δ; [−n] = −[n].
pub fn quantum(n: i64) -> IntPoly {
    cache().quantum(n)
}

/// ψ_k with [n] = ∏_{k | 2n, k ≥ 3} ψ_k.
pub fn psi(k: u64) -> IntPoly {
    cache().psi(k)
}

/// Indices k ≥ 3 with k | 2n.
pub fn psi_factors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    (3..=2 * n).filter(|k| (2 * n) % k == 0).collect()
}

pub fn is_valid_mixed_char(ell: u64, p: u64) -> bool {
    p == 0 || ell % p != 0 || ell == p
}

pub fn minimal_poly(ell: u64, p: u64, sign: i8) -> Result<IntPoly> {
    if ell < 2 || (p != 0 && !modpoly::is_prime(p)) || !is_valid_mixed_char(ell, p) {
        return Err(Error::InvalidMixedChar(format!("(ell, p) = ({ell}, {p})")));
    }
    if ell % 2 == 0 {
        return Ok(psi(2 * ell));
    }
    let f = psi(ell);
    let g = if sign < 0 { f.negate_var() } else { f };
    Ok(if g.lead().signum() < 0 { g.neg() } else { g })
}

/// Least n ≥ 1 with [n] = 0 in 𝔽_p[δ]/(m̄), or `None` for ℓ = ∞.
pub fn ell_of(p: u64, mbar: &[u64]) -> Result<Option<u64>> {
    let f = ResidueField::new(p, mbar.to_vec())?;
    let bound = f.order() + 1;
    let d = f.delta();
    let (mut prev, mut cur) = (f.zero(), f.one());
    for n in 1..=bound {
        if f.is_zero(&cur) {
            return Ok(Some(n));
        }
        let next = f.sub(&f.mul(&d, &cur), &prev);
        prev = cur;
        cur = next;
    }
    Ok(None)
}
