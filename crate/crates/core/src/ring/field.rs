use super::modpoly as mp;
use super::poly::IntPoly;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Element of 𝕜 = 𝔽_p[δ]/(m̄_δ): residues mod p, length deg(m̄).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FieldElem {
    pub coeffs: Vec<u64>,
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", IntPoly::from_u64s(&self.coeffs))
    }
}

/// Polynomial-arithmetic model of 𝕜.
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub p: u64,
    pub mbar: Vec<u64>,
}

impl ResidueField {
    pub fn new(p: u64, mbar: Vec<u64>) -> Result<Self> {
        if !mp::is_prime(p) {
            return Err(Error::InvalidMixedChar(format!("{p} is not prime")));
        }
        let mbar = mp::monic(&mbar, p);
        if !mp::is_irreducible(&mbar, p) {
            return Err(Error::InvalidMixedChar(format!("{} is reducible mod {p}", IntPoly::from_u64s(&mbar))));
        }
        Ok(ResidueField { p, mbar })
    }

    pub fn degree(&self) -> usize {
        self.mbar.len() - 1
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    fn wrap(&self, mut v: Vec<u64>) -> FieldElem {
        v.resize(self.degree(), 0);
        FieldElem { coeffs: v }
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(Vec::new())
    }

    pub fn one(&self) -> FieldElem {
        self.reduce(&[1])
    }

    pub fn delta(&self) -> FieldElem {
        self.reduce(&[0, 1])
    }

    pub fn reduce(&self, v: &[u64]) -> FieldElem {
        let v: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        self.wrap(mp::rem_monic(&v, &self.mbar, self.p))
    }

    pub fn from_poly(&self, f: &IntPoly) -> FieldElem {
        self.reduce(&f.mod_u64(self.p))
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        self.reduce(&[(v as i128).rem_euclid(self.p as i128) as u64])
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.wrap(mp::add(&a.coeffs, &b.coeffs, self.p))
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.wrap(mp::sub(&a.coeffs, &b.coeffs, self.p))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.wrap(mp::rem_monic(&mp::mul(&a.coeffs, &b.coeffs, self.p), &self.mbar, self.p))
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        let mut v = a.coeffs.clone();
        mp::trim(&mut v);
        mp::inverse_mod(&v, &self.mbar, self.p).map(|x| self.wrap(x))
    }

    pub fn encode(&self, a: &FieldElem) -> u32 {
        let mut code = 0u64;
        for &c in a.coeffs.iter().rev() {
            code = code * self.p + c;
        }
        code as u32
    }

    pub fn decode(&self, mut code: u32) -> FieldElem {
        let mut v = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            v.push(code as u64 % self.p);
            code /= self.p as u32;
        }
        FieldElem { coeffs: v }
    }
}

/// Table-driven 𝔽_q with elements encoded as base-p integers.
#[derive(Clone, Debug)]
pub struct Fq {
    pub base: ResidueField,
    pub q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    delta: u32,
}

pub const FQ_MAX: u64 = 1 << 20;

impl Fq {
    pub fn new(base: ResidueField) -> Result<Self> {
        let q = base.order();
        if q > FQ_MAX {
            return Err(Error::ScaleLimit(format!("field of order {q}")));
        }
        let q32 = q as u32;
        let mut log = vec![0u32; q as usize];
        let mut exp = vec![0u32; q as usize];
        let mut found = false;
        'cand: for g in 1..q32 {
            let ge = base.decode(g);
            let mut x = base.one();
            for (i, e) in exp.iter_mut().enumerate().take(q as usize - 1) {
                let c = base.encode(&x);
                if i > 0 && c == 1 {
                    continue 'cand;
                }
                *e = c;
                x = base.mul(&x, &ge);
            }
            found = true;
            break;
        }
        assert!(found || q == 2, "no primitive element");
        if q == 2 {
            exp[0] = 1;
        }
        for i in 0..(q as usize - 1) {
            log[exp[i] as usize] = i as u32;
        }
        let delta = base.encode(&base.delta());
        Ok(Fq { base, q: q32, exp, log, delta })
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.base.p as u32;
        if self.base.degree() == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut r = 0u32;
        let mut w = 1u32;
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            r += s * w;
            w *= p;
            a /= p;
            b /= p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.base.p as u32;
        if self.base.degree() == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut r = 0u32;
        let mut w = 1u32;
        while a > 0 {
            let d = a % p;
            r += ((p - d) % p) * w;
            w *= p;
            a /= p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn from_int(&self, v: i64) -> u32 {
        (v as i128).rem_euclid(self.base.p as i128) as u32
    }

    pub fn from_poly(&self, f: &IntPoly) -> u32 {
        self.base.encode(&self.base.from_poly(f))
    }

    pub fn elem(&self, code: u32) -> FieldElem {
        self.base.decode(code)
    }

    pub fn code(&self, e: &FieldElem) -> u32 {
        self.base.encode(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> Vec<ResidueField> {
        vec![
            ResidueField::new(3, vec![2, 1, 1]).unwrap(),
            ResidueField::new(2, vec![1, 1]).unwrap(),
            ResidueField::new(2, vec![1, 1, 0, 1]).unwrap(),
            ResidueField::new(3, vec![2, 1, 0, 0, 1]).unwrap(),
            ResidueField::new(5, vec![2, 0, 1]).unwrap(),
        ]
    }

    #[test]
    fn tables_match_polynomial_arithmetic() {
        for rf in fields() {
            let f = Fq::new(rf.clone()).unwrap();
            assert!(f.q <= 81);
            for a in 0..f.q {
                for b in 0..f.q {
                    let (ea, eb) = (rf.decode(a), rf.decode(b));
                    assert_eq!(f.add(a, b), rf.encode(&rf.add(&ea, &eb)));
                    assert_eq!(f.mul(a, b), rf.encode(&rf.mul(&ea, &eb)));
                    assert_eq!(f.sub(a, b), rf.encode(&rf.sub(&ea, &eb)));
                }
                if a != 0 {
                    let i = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, i), 1);
                    assert_eq!(rf.encode(&rf.inv(&rf.decode(a)).unwrap()), i);
                }
            }
        }
    }

    #[test]
    fn reducible_rejected() {
        assert!(ResidueField::new(11, vec![10, 1, 1]).is_err());
    }
}
