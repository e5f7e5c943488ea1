//! Machine-word coefficient rings used to run the diagram engine cheaply:
//! evaluation at a point of 𝔽_P, ℤ/N[δ]/(f), and truncated power series at
//! the roots of chosen ψ_k modulo a large prime.

use super::coeff::CoeffRing;
use super::field::Fq;
use super::modpoly as mp;
use super::poly::IntPoly;
use crate::error::{Error, Result};
use crate::qnum;

/// 𝔽_P with δ sent to a fixed value.
#[derive(Clone, Debug)]
pub struct FpPoint {
    pub p: u64,
    pub delta: u64,
}

impl FpPoint {
    pub fn new(p: u64, delta: u64) -> Self {
        assert!(mp::is_prime(p));
        FpPoint { p, delta: delta % p }
    }

    pub fn eval(&self, f: &IntPoly) -> u64 {
        let mut acc = 0u64;
        for c in f.coeffs().iter().rev() {
            acc = mp::addmod(mp::mulmod(acc, self.delta, self.p), c.rem_u64(self.p), self.p);
        }
        acc
    }
}

impl CoeffRing for FpPoint {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_poly(&self, f: &IntPoly) -> u64 {
        self.eval(f)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        mp::submod(*a, *b, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mp::mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        mp::invmod(*a, self.p)
    }
    fn delta(&self) -> u64 {
        self.delta
    }
}

/// ℤ/N[δ]/(f) for monic f; elements are padded to length deg f.
#[derive(Clone, Debug)]
pub struct ModPolyRing {
    pub n: u64,
    pub f: Vec<u64>,
}

impl ModPolyRing {
    pub fn new(n: u64, f: Vec<u64>) -> Self {
        assert!(f.last() == Some(&1), "modulus must be monic");
        assert!(n >= 2 && n < (1 << 62));
        ModPolyRing { n, f }
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    fn wrap(&self, mut v: Vec<u64>) -> Box<[u64]> {
        if v.len() > self.degree() {
            v = mp::rem_monic(&v, &self.f, self.n);
        }
        v.resize(self.degree(), 0);
        v.into_boxed_slice()
    }

    pub fn to_vec(&self, a: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        mp::trim(&mut v);
        v
    }
}

impl CoeffRing for ModPolyRing {
    type Elem = Box<[u64]>;
    fn zero(&self) -> Box<[u64]> {
        self.wrap(Vec::new())
    }
    fn one(&self) -> Box<[u64]> {
        self.wrap(vec![1 % self.n])
    }
    fn from_int(&self, v: i64) -> Box<[u64]> {
        self.wrap(vec![(v as i128).rem_euclid(self.n as i128) as u64])
    }
    fn from_poly(&self, p: &IntPoly) -> Box<[u64]> {
        self.wrap(p.mod_u64(self.n))
    }
    fn add(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        a.iter().zip(b.iter()).map(|(&x, &y)| mp::addmod(x, y, self.n)).collect()
    }
    fn sub(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        a.iter().zip(b.iter()).map(|(&x, &y)| mp::submod(x, y, self.n)).collect()
    }
    fn mul(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        let d = self.degree();
        let nn = self.n as u128;
        let mut acc = vec![0u128; (2 * d).max(1)];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % nn;
            }
        }
        // Reduce top-down by the monic modulus.
        for k in (d..acc.len()).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            acc[k] = 0;
            for (t, &fc) in self.f[..d].iter().enumerate() {
                let sub = c * fc as u128 % nn;
                let slot = &mut acc[k - d + t];
                *slot = (*slot + nn - sub) % nn;
            }
        }
        acc.truncate(d);
        acc.into_iter().map(|v| v as u64).collect()
    }
    fn neg(&self, a: &Box<[u64]>) -> Box<[u64]> {
        a.iter().map(|&x| if x == 0 { 0 } else { self.n - x }).collect()
    }
    fn is_zero(&self, a: &Box<[u64]>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn inv(&self, _a: &Box<[u64]>) -> Option<Box<[u64]>> {
        None
    }
    fn add_assign(&self, a: &mut Box<[u64]>, b: &Box<[u64]>) {
        for (x, &y) in a.iter_mut().zip(b.iter()) {
            *x = mp::addmod(*x, y, self.n);
        }
    }
}

/// ∏ over roots r of the chosen ψ_k modulo P of 𝔽_P[ε]/(ε^e), with δ ↦ r + ε.
/// This is ℤ[δ]/(P, ∏ ψ_k^{e_k}) by the Chinese remainder theorem.
#[derive(Clone, Debug)]
pub struct SeriesRing {
    pub p: u64,
    /// (ψ index, root, precision) per block.
    pub blocks: Vec<(u64, u64, usize)>,
    offs: Vec<usize>,
    len: usize,
}

/// A prime P ≡ 1 mod `modulus_of` below 2^61, found by descending search.
pub fn prime_one_mod(l: u64) -> u64 {
    let mut t = ((1u64 << 61) - 1) / l;
    loop {
        let c = l * t + 1;
        if mp::is_prime(c) {
            return c;
        }
        t -= 1;
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of exact order k in 𝔽_P^×, for k | P − 1.
pub fn root_of_unity(k: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % k, 0);
    let qs = prime_factors(k);
    for a in 2..p {
        let z = mp::powmod(a, (p - 1) / k, p);
        if qs.iter().all(|&q| mp::powmod(z, k / q, p) != 1) {
            return z;
        }
    }
    unreachable!("no root of unity of order {k}")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SeriesRing {
    /// Blocks for ψ_k^{e} for each (k, e) in `exps`, over a prime P ≡ 1 mod lcm(k).
    pub fn new(exps: &[(u64, u32)]) -> Result<Self> {
        let l = exps.iter().fold(1u64, |acc, &(k, _)| acc / gcd(acc, k) * k);
        if l > 1 << 30 {
            return Err(Error::ScaleLimit(format!("lcm of psi indices {l}")));
        }
        let p = prime_one_mod(l);
        Self::with_prime(exps, p)
    }

    pub fn with_prime(exps: &[(u64, u32)], p: u64) -> Result<Self> {
        let mut blocks = Vec::new();
        for &(k, e) in exps {
            if e == 0 {
                continue;
            }
            if (p - 1) % k != 0 {
                return Err(Error::Unsupported(format!("{p} is not 1 mod {k}")));
            }
            let z = root_of_unity(k, p);
            let psi = qnum::psi(k);
            let eval = FpPoint::new(p, 0);
            for a in 1..k.div_ceil(2) {
                if gcd(a, k) != 1 {
                    continue;
                }
                let za = mp::powmod(z, a, p);
                let r = mp::addmod(za, mp::invmod(za, p).unwrap(), p);
                debug_assert_eq!(FpPoint { delta: r, ..eval.clone() }.eval(&psi), 0);
                blocks.push((k, r, e as usize));
            }
        }
        let mut offs = Vec::with_capacity(blocks.len());
        let mut len = 0;
        for b in &blocks {
            offs.push(len);
            len += b.2;
        }
        Ok(SeriesRing { p, blocks, offs, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn block_mul(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let e = a.len();
        let p = self.p as u128;
        for k in 0..e {
            let mut acc: u128 = 0;
            for i in 0..=k {
                acc += a[i] as u128 * b[k - i] as u128;
                if i % 8 == 7 {
                    acc %= p;
                }
            }
            out[k] = (acc % p) as u64;
        }
    }
}

impl CoeffRing for SeriesRing {
    type Elem = Box<[u64]>;
    fn zero(&self) -> Box<[u64]> {
        vec![0; self.len].into_boxed_slice()
    }
    fn one(&self) -> Box<[u64]> {
        let mut v = vec![0; self.len];
        for &o in &self.offs {
            v[o] = 1;
        }
        v.into_boxed_slice()
    }
    fn from_int(&self, v: i64) -> Box<[u64]> {
        let c = (v as i128).rem_euclid(self.p as i128) as u64;
        let mut r = vec![0; self.len];
        for &o in &self.offs {
            r[o] = c;
        }
        r.into_boxed_slice()
    }
    fn from_poly(&self, f: &IntPoly) -> Box<[u64]> {
        // Horner in each block with δ = r + ε.
        let p = self.p;
        let coeffs: Vec<u64> = f.coeffs().iter().map(|c| c.rem_u64(p)).collect();
        let mut out = vec![0u64; self.len];
        for (bi, &(_, r, e)) in self.blocks.iter().enumerate() {
            let o = self.offs[bi];
            let acc = &mut out[o..o + e];
            for &c in coeffs.iter().rev() {
                // acc ← acc·(r + ε) + c
                for t in (0..e).rev() {
                    let shifted = if t > 0 { acc[t - 1] } else { 0 };
                    acc[t] = mp::addmod(mp::mulmod(acc[t], r, p), shifted, p);
                }
                acc[0] = mp::addmod(acc[0], c, p);
            }
        }
        out.into_boxed_slice()
    }
    fn add(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        let p = self.p;
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect()
    }
    fn sub(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        a.iter().zip(b.iter()).map(|(&x, &y)| mp::submod(x, y, self.p)).collect()
    }
    fn mul(&self, a: &Box<[u64]>, b: &Box<[u64]>) -> Box<[u64]> {
        let mut out = vec![0u64; self.len];
        for (bi, &(_, _, e)) in self.blocks.iter().enumerate() {
            let o = self.offs[bi];
            self.block_mul(&a[o..o + e], &b[o..o + e], &mut out[o..o + e]);
        }
        out.into_boxed_slice()
    }
    fn neg(&self, a: &Box<[u64]>) -> Box<[u64]> {
        a.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect()
    }
    fn is_zero(&self, a: &Box<[u64]>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn inv(&self, _a: &Box<[u64]>) -> Option<Box<[u64]>> {
        None
    }
    fn add_assign(&self, a: &mut Box<[u64]>, b: &Box<[u64]>) {
        let p = self.p;
        for (x, &y) in a.iter_mut().zip(b.iter()) {
            let s = *x + y;
            *x = if s >= p { s - p } else { s };
        }
    }
    fn delta(&self) -> Box<[u64]> {
        let mut v = vec![0; self.len];
        for (bi, &(_, r, e)) in self.blocks.iter().enumerate() {
            let o = self.offs[bi];
            v[o] = r;
            if e > 1 {
                v[o + 1] = 1;
            }
        }
        v.into_boxed_slice()
    }
}

/// 𝕜[ε]/(ε^prec) with δ ↦ δ̄ + ε: the m̄-adic completion of 𝔽_p[δ], truncated.
/// Reading off the constant term of an integral quotient is the residue map to 𝕜.
#[derive(Clone, Debug)]
pub struct ResidueSeries {
    pub field: Fq,
    pub prec: usize,
}

impl ResidueSeries {
    pub fn new(field: Fq, prec: usize) -> Self {
        assert!(prec >= 1);
        ResidueSeries { field, prec }
    }

    pub fn constant(&self, c: u32) -> Box<[u32]> {
        let mut v = vec![0; self.prec];
        v[0] = c;
        v.into_boxed_slice()
    }

    pub fn valuation(&self, a: &[u32]) -> Option<usize> {
        a.iter().position(|&x| x != 0)
    }

    /// ε-adic valuation of f(δ̄ + ε), exact for f ≠ 0 mod p.
    pub fn poly_valuation(field: &Fq, f: &IntPoly) -> Option<usize> {
        let deg = f.degree()?;
        let r = ResidueSeries::new(field.clone(), deg + 1);
        let v = r.from_poly(f);
        r.valuation(&v)
    }

    /// The residue of a/b for b of valuation v, given that a has valuation ≥ v.
    pub fn residue_of_ratio(&self, a: &[u32], b: &[u32]) -> Option<u32> {
        let v = self.valuation(b)?;
        if a[..v].iter().any(|&x| x != 0) {
            return None;
        }
        Some(self.field.mul(a[v], self.field.inv(b[v])?))
    }
}

impl CoeffRing for ResidueSeries {
    type Elem = Box<[u32]>;
    fn zero(&self) -> Box<[u32]> {
        vec![0; self.prec].into_boxed_slice()
    }
    fn one(&self) -> Box<[u32]> {
        self.constant(1)
    }
    fn from_int(&self, v: i64) -> Box<[u32]> {
        self.constant(self.field.from_int(v))
    }
    fn from_poly(&self, f: &IntPoly) -> Box<[u32]> {
        let fq = &self.field;
        let r = fq.delta();
        let mut acc = vec![0u32; self.prec];
        for c in f.coeffs().iter().rev() {
            for t in (0..self.prec).rev() {
                let shifted = if t > 0 { acc[t - 1] } else { 0 };
                acc[t] = fq.add(fq.mul(acc[t], r), shifted);
            }
            acc[0] = fq.add(acc[0], c.rem_u64(fq.p()) as u32);
        }
        acc.into_boxed_slice()
    }
    fn add(&self, a: &Box<[u32]>, b: &Box<[u32]>) -> Box<[u32]> {
        a.iter().zip(b.iter()).map(|(&x, &y)| self.field.add(x, y)).collect()
    }
    fn sub(&self, a: &Box<[u32]>, b: &Box<[u32]>) -> Box<[u32]> {
        a.iter().zip(b.iter()).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }
    fn mul(&self, a: &Box<[u32]>, b: &Box<[u32]>) -> Box<[u32]> {
        let fq = &self.field;
        let mut out = vec![0u32; self.prec];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b[..self.prec - i].iter().enumerate() {
                if y != 0 {
                    out[i + j] = fq.add(out[i + j], fq.mul(x, y));
                }
            }
        }
        out.into_boxed_slice()
    }
    fn neg(&self, a: &Box<[u32]>) -> Box<[u32]> {
        a.iter().map(|&x| self.field.neg(x)).collect()
    }
    fn is_zero(&self, a: &Box<[u32]>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn inv(&self, _a: &Box<[u32]>) -> Option<Box<[u32]>> {
        None
    }
    fn delta(&self) -> Box<[u32]> {
        let mut v = vec![0; self.prec];
        v[0] = self.field.delta();
        if self.prec > 1 {
            v[1] = 1;
        }
        v.into_boxed_slice()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_primes() {
        assert!(mp::is_prime(2_305_843_009_213_693_951));
        assert!(!mp::is_prime(2_305_843_009_213_693_953));
        let p = prime_one_mod(24);
        assert_eq!((p - 1) % 24, 0);
        assert!(mp::is_prime(p));
    }

    #[test]
    fn series_detects_multiplicity() {
        let r = SeriesRing::new(&[(3, 2), (12, 1)]).unwrap();
        assert_eq!(r.blocks.len(), 3);
        let p3 = qnum::psi(3);
        let p12 = qnum::psi(12);
        assert!(r.is_zero(&r.from_poly(&p3.pow(2).mul(&p12))));
        assert!(!r.is_zero(&r.from_poly(&p3.mul(&p12))));
        let f = IntPoly::from_i64s(&[3, -1, 4, 1, 5]);
        let g = IntPoly::from_i64s(&[2, 7, 1]);
        assert_eq!(r.mul(&r.from_poly(&f), &r.from_poly(&g)), r.from_poly(&f.mul(&g)));
        assert_eq!(r.from_poly(&IntPoly::delta()), r.delta());
    }

    #[test]
    fn residue_series_valuations() {
        let chi = crate::ring::MixedChar::new(3, 2).unwrap();
        let f = chi.field().unwrap();
        // mod 2 every bad ψ is a power of δ+1.
        assert_eq!(ResidueSeries::poly_valuation(&f, &qnum::psi(3)), Some(1));
        assert_eq!(ResidueSeries::poly_valuation(&f, &qnum::psi(12)), Some(2));
        assert_eq!(ResidueSeries::poly_valuation(&f, &qnum::psi(5)), Some(0));
        let r = ResidueSeries::new(f, 4);
        let a = r.from_poly(&qnum::quantum(6));
        let b = r.from_poly(&qnum::quantum(3));
        // [6]/[3] = δ(δ²−3) and [4]/[2] = δ²−2, at δ̄ = 1 in 𝔽_2.
        assert_eq!(r.residue_of_ratio(&a, &b), Some(0));
        let c = r.from_poly(&qnum::quantum(4));
        assert_eq!(r.residue_of_ratio(&c, &r.from_poly(&qnum::quantum(2))), Some(1));
        assert_eq!(r.residue_of_ratio(&b, &a), None);
    }

    #[test]
    fn modpoly_ring_matches_integer_arithmetic() {
        let m = IntPoly::from_i64s(&[1, 0, 1, 1]);
        let r = ModPolyRing::new(7, m.mod_u64(7));
        let f = IntPoly::from_i64s(&[3, -1, 4, 1, 5]);
        let g = IntPoly::from_i64s(&[2, 7, 1, -3]);
        assert_eq!(r.mul(&r.from_poly(&f), &r.from_poly(&g)), r.from_poly(&f.mul(&g)));
    }
}
