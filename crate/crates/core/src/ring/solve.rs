use super::mixed::{prime_power, MixedChar};
use super::modpoly as mp;
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// The finite ring ℤ/p^i[δ]/(m_δ^j); elements are coefficient vectors of length `dim`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub p: u64,
    pub i: u32,
    pub j: u32,
    pub n: u64,
    pub modulus: Vec<u64>,
    pub mbar: Vec<u64>,
    pub dim: usize,
}

pub type QElem = Vec<u64>;

impl QuotientRing {
    pub fn new(chi: &MixedChar, i: u32, j: u32) -> Result<Self> {
        if chi.p == 0 || chi.ell.is_none() || i == 0 || j == 0 {
            return Err(Error::Unsupported("quotient ring needs p prime, finite ell, i, j >= 1".into()));
        }
        let n = prime_power(chi.p, i)?;
        let m = chi.m_delta.mod_u64(n);
        let mut modulus = vec![1];
        for _ in 0..j {
            modulus = mp::mul(&modulus, &m, n);
        }
        let dim = modulus.len() - 1;
        Ok(QuotientRing { p: chi.p, i, j, n, modulus, mbar: chi.mbar(), dim })
    }

    pub fn reduce(&self, v: &[u64]) -> QElem {
        let v: Vec<u64> = v.iter().map(|x| x % self.n).collect();
        let mut r = mp::rem_monic(&v, &self.modulus, self.n);
        r.resize(self.dim, 0);
        r
    }

    pub fn from_poly(&self, f: &IntPoly) -> QElem {
        self.reduce(&f.mod_u64(self.n))
    }

    pub fn zero(&self) -> QElem {
        vec![0; self.dim]
    }

    pub fn one(&self) -> QElem {
        self.reduce(&[1])
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> QElem {
        self.reduce(&mp::add(a, b, self.n))
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> QElem {
        self.reduce(&mp::sub(a, b, self.n))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> QElem {
        self.reduce(&mp::mul(a, b, self.n))
    }

    /// Reduction to the residue field coefficients mod (p, m̄).
    pub fn residue(&self, a: &[u64]) -> Vec<u64> {
        let v: Vec<u64> = a.iter().map(|x| x % self.p).collect();
        let mut r = mp::rem_monic(&v, &self.mbar, self.p);
        r.resize(self.mbar.len() - 1, 0);
        r
    }

    /// Inverse of a unit by Newton lifting from the residue field.
    pub fn inv(&self, a: &[u64]) -> Option<QElem> {
        let mut r = self.residue(a);
        mp::trim(&mut r);
        let y0 = mp::inverse_mod(&r, &self.mbar, self.p)?;
        let mut y = self.reduce(&y0);
        let one = self.one();
        let two = self.reduce(&[2]);
        for _ in 0..64 {
            let ay = self.mul(a, &y);
            if ay == one {
                return Some(y);
            }
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        None
    }

    pub fn times_delta_pow(&self, a: &[u64], t: usize) -> QElem {
        let mut v = vec![0; t];
        v.extend_from_slice(a);
        self.reduce(&v)
    }

    /// All ring elements; only for tiny rings.
    pub fn elements(&self) -> Vec<QElem> {
        let total = (self.n as u128).pow(self.dim as u32);
        assert!(total <= 1 << 20, "ring too large to enumerate");
        (0..total as u64)
            .map(|mut c| {
                let mut v = Vec::with_capacity(self.dim);
                for _ in 0..self.dim {
                    v.push(c % self.n);
                    c /= self.n;
                }
                v
            })
            .collect()
    }

    fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.i;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }
}

fn inv_unit(a: u64, n: u64) -> u64 {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(n as i128) as u64
}

/// Row span over the chain ring ℤ/p^i with Howell-style closure, for membership tests.
#[derive(Clone, Debug)]
pub struct ChainSpan {
    p: u64,
    i: u32,
    n: u64,
    rows: Vec<(usize, u32, Vec<u64>)>,
}

impl ChainSpan {
    pub fn new(ring: &QuotientRing) -> Self {
        ChainSpan { p: ring.p, i: ring.i, n: ring.n, rows: Vec::new() }
    }

    fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.i;
        }
        let (mut a, mut v) = (a, 0);
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    fn axpy(&self, v: &mut [u64], k: u64, row: &[u64]) {
        for (x, &r) in v.iter_mut().zip(row) {
            *x = mp::submod(*x, mp::mulmod(k, r, self.n), self.n);
        }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (c, w, row) in &self.rows {
            let x = v[*c];
            if x != 0 && self.val(x) >= *w {
                let k = x / self.p.pow(*w);
                self.axpy(&mut v, k, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    pub fn insert(&mut self, v: Vec<u64>) {
        let mut stack = vec![v];
        while let Some(v) = stack.pop() {
            let v = self.reduce(v);
            let Some(c) = v.iter().position(|&x| x != 0) else { continue };
            let w = self.val(v[c]);
            let unit = v[c] / self.p.pow(w);
            let u = inv_unit(unit % self.n, self.n);
            let row: Vec<u64> = v.iter().map(|&x| mp::mulmod(x, u, self.n)).collect();
            if let Some(pos) = self.rows.iter().position(|(pc, _, _)| *pc == c) {
                let old = self.rows.remove(pos);
                stack.push(old.2);
            }
            let idx = self.rows.iter().position(|(pc, _, _)| *pc > c).unwrap_or(self.rows.len());
            if w > 0 {
                let k = self.p.pow(self.i - w);
                stack.push(row.iter().map(|&x| mp::mulmod(x, k, self.n)).collect());
            }
            self.rows.insert(idx, (c, w, row));
        }
    }
}

/// Null space {x ∈ R^cols : A x = 0} over R = ℤ/p^i[δ]/(m^j), as R-module generators.
/// `a` is row-major with entries already reduced.
pub fn quotient_ring_solve(a: &[Vec<QElem>], ring: &QuotientRing) -> Vec<Vec<QElem>> {
    let d = ring.dim;
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let (nr, nc) = (rows * d, cols * d);
    let n = ring.n;
    let mut m = vec![vec![0u64; nc]; nr];
    for (r, row) in a.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            for t in 0..d {
                let col = ring.times_delta_pow(e, t);
                for (s, &x) in col.iter().enumerate() {
                    m[r * d + s][k * d + t] = x;
                }
            }
        }
    }
    let mut cmat: Vec<Vec<u64>> = (0..nc).map(|i| (0..nc).map(|j| u64::from(i == j)).collect()).collect();
    let mut diag = Vec::new();
    let steps = nr.min(nc);
    for t in 0..steps {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(t) {
            for (c, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = ring.val(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r0, c0)) = best else { break };
        m.swap(t, r0);
        for row in m.iter_mut() {
            row.swap(t, c0);
        }
        for row in cmat.iter_mut() {
            row.swap(t, c0);
        }
        let pv = ring.p.pow(v);
        let u = inv_unit((m[t][t] / pv) % n, n);
        for x in m[t].iter_mut() {
            *x = mp::mulmod(*x, u, n);
        }
        for r in t + 1..nr {
            let x = m[r][t];
            if x != 0 {
                let k = x / pv;
                let pivot_row = m[t].clone();
                for (y, &pr) in m[r].iter_mut().zip(&pivot_row) {
                    *y = mp::submod(*y, mp::mulmod(k, pr, n), n);
                }
            }
        }
        for c in t + 1..nc {
            let x = m[t][c];
            if x != 0 {
                let k = x / pv;
                for row in m.iter_mut() {
                    let pt = row[t];
                    row[c] = mp::submod(row[c], mp::mulmod(k, pt, n), n);
                }
                for row in cmat.iter_mut() {
                    let pt = row[t];
                    row[c] = mp::submod(row[c], mp::mulmod(k, pt, n), n);
                }
            }
        }
        diag.push(v);
    }
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for t in 0..nc {
        let scale = match diag.get(t) {
            Some(0) => continue,
            Some(&v) => ring.p.pow(ring.i - v),
            None => 1,
        };
        gens.push((0..nc).map(|r| mp::mulmod(cmat[r][t], scale, n)).collect());
    }
    let mut span = ChainSpan::new(ring);
    let mut out = Vec::new();
    for g in gens {
        if g.iter().all(|&x| x == 0) || span.contains(&g) {
            continue;
        }
        let elems: Vec<QElem> = (0..cols).map(|k| g[k * d..(k + 1) * d].to_vec()).collect();
        for t in 0..d {
            let shifted: Vec<u64> = elems.iter().flat_map(|e| ring.times_delta_pow(e, t)).collect();
            span.insert(shifted);
        }
        out.push(elems);
    }
    out
}

/// R-span of vectors as a coordinate span over ℤ/p^i (for membership tests).
pub fn r_span(gens: &[Vec<QElem>], ring: &QuotientRing) -> ChainSpan {
    let mut span = ChainSpan::new(ring);
    for g in gens {
        for t in 0..ring.dim {
            span.insert(g.iter().flat_map(|e| ring.times_delta_pow(e, t)).collect());
        }
    }
    span
}
