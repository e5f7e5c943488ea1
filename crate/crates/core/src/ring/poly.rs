use super::zint::Zint;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::fmt;
use std::str::FromStr;

/// Polynomial in δ with integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<Zint>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(v: i64) -> Self {
        Self::from_zints(vec![Zint::from(v)])
    }

    /// The variable δ.
    pub fn delta() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn monomial(coef: Zint, deg: usize) -> Self {
        let mut c = vec![Zint::zero(); deg + 1];
        c[deg] = coef;
        Self::from_zints(c)
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_zints(c.iter().map(|&v| Zint::from(v)).collect())
    }

    pub fn from_zints(mut c: Vec<Zint>) -> Self {
        while c.last().is_some_and(|z| z.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_bigints(c: Vec<BigInt>) -> Self {
        Self::from_zints(c.into_iter().map(Zint::from).collect())
    }

    pub fn coeffs(&self) -> &[Zint] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Zint> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Zint {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Zint {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn neg(&self) -> Self {
        IntPoly { c: self.c.iter().map(|z| z.neg()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), Zint::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            a.add_assign(b);
        }
        self.trim();
    }

    pub fn sub_assign(&mut self, o: &Self) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), Zint::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            a.sub_assign(b);
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|z| z.is_zero()) {
            self.c.pop();
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Zint::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j].mul_add_assign(a, b);
                }
            }
        }
        Self::from_zints(c)
    }

    /// `self += a * b`
    pub fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let need = a.c.len() + b.c.len() - 1;
        if self.c.len() < need {
            self.c.resize(need, Zint::zero());
        }
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    self.c[i + j].mul_add_assign(x, y);
                }
            }
        }
        self.trim();
    }

    pub fn scale(&self, k: &Zint) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPoly { c: self.c.iter().map(|z| z.mul(k)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Division with remainder by a polynomial whose leading coefficient is ±1.
    pub fn divrem_monic(&self, m: &Self) -> (Self, Self) {
        let lead = m.lead();
        assert!(lead.is_one() || lead.neg().is_one(), "divisor must be monic up to sign");
        let dm = m.degree().expect("division by zero polynomial");
        if self.c.len() <= dm {
            return (Self::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![Zint::zero(); r.len() - dm];
        for k in (dm..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let t = if lead.is_one() { r[k].clone() } else { r[k].neg() };
            for (i, mc) in m.c.iter().enumerate() {
                r[k - dm + i].mul_sub_assign(&t, mc);
            }
            q[k - dm] = t;
        }
        r.truncate(dm);
        (Self::from_zints(q), Self::from_zints(r))
    }

    pub fn rem_monic(&self, m: &Self) -> Self {
        self.divrem_monic(m).1
    }

    /// Exact quotient over ℤ, or `None` if `d` does not divide `self` in ℤ[δ].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.c.len() <= dd {
            return None;
        }
        let lead = d.lead();
        let mut r = self.c.clone();
        let mut q = vec![Zint::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            if !lead.divides(&r[k]) {
                return None;
            }
            let t = r[k].div_exact(&lead);
            for (i, dc) in d.c.iter().enumerate() {
                r[k - dd + i].mul_sub_assign(&t, dc);
            }
            q[k - dd] = t;
        }
        if r.iter().any(|z| !z.is_zero()) {
            return None;
        }
        Some(Self::from_zints(q))
    }

    pub fn content(&self) -> Zint {
        let mut g = Zint::zero();
        for z in &self.c {
            g = g.gcd(z);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().signum() < 0 {
            g = g.neg();
        }
        if g.is_one() {
            return self.clone();
        }
        IntPoly { c: self.c.iter().map(|z| z.div_exact(&g)).collect() }
    }

    /// Pseudo-remainder: lead(b)^k · a mod b.
    fn prem(a: &Self, b: &Self) -> Self {
        let db = b.degree().unwrap();
        let lb = b.lead();
        let mut r = a.c.clone();
        while r.len() > db {
            let k = r.len() - 1;
            let t = r[k].clone();
            for z in r.iter_mut() {
                *z = z.mul(&lb);
            }
            for (i, bc) in b.c.iter().enumerate() {
                r[k - db + i].mul_sub_assign(&t, bc);
            }
            r.pop();
            while r.last().is_some_and(|z| z.is_zero()) {
                r.pop();
            }
        }
        Self::from_zints(r)
    }

    /// Gcd over ℚ[δ], returned primitive with positive leading coefficient.
    pub fn gcd_q(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one();
            }
            let r = Self::prem(&a, &b).primitive();
            a = b;
            b = r;
        }
        a
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        let mut acc = BigInt::from(0);
        for z in self.c.iter().rev() {
            acc = acc * &x + z.to_big();
        }
        acc
    }

    /// Value at a/b times b^deg (homogenized numerator).
    pub fn eval_homog(&self, a: i64, b: i64, deg: usize) -> BigInt {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let mut acc = BigInt::from(0);
        for i in 0..=deg {
            let c = self.coeff(i).to_big();
            acc += c * a.pow(i as u32) * b.pow((deg - i) as u32);
        }
        acc
    }

    /// Substitute δ ↦ −δ.
    pub fn negate_var(&self) -> Self {
        IntPoly {
            c: self.c.iter().enumerate().map(|(i, z)| if i % 2 == 1 { z.neg() } else { z.clone() }).collect(),
        }
    }

    /// Coefficients reduced into `[0, n)`.
    pub fn mod_u64(&self, n: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.c.iter().map(|z| z.rem_u64(n)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn from_u64s(v: &[u64]) -> Self {
        Self::from_zints(v.iter().map(|&x| Zint::from(x as i64)).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, z) in self.c.iter().enumerate() {
            if z.is_zero() {
                continue;
            }
            let neg = z.signum() < 0;
            let a = z.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "d")?,
                (_, false) => write!(f, "{a}*d")?,
            }
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Accepts sums of terms `c`, `c*d`, `c*d^k`, `d^k`, with `δ` allowed for `d`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == 'δ' { 'd' } else { c }).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = || Error::Parse(format!("bad polynomial term in {s:?}"));
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut signs = 0;
        for ch in s.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = false;
                    signs = 0;
                }
                signs += 1;
                if signs > 2 || (signs == 2 && terms.is_empty()) {
                    return Err(bad());
                }
                neg ^= ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad());
        }
        terms.push((neg, cur));
        let mut acc = IntPoly::zero();
        for (neg, t) in terms {
            let (coef, deg) = if let Some(pos) = t.find('d') {
                let cpart = &t[..pos];
                let rest = &t[pos + 1..];
                let coef = if cpart.is_empty() {
                    BigInt::from(1)
                } else {
                    let c = cpart.strip_suffix('*').ok_or_else(bad)?;
                    c.parse::<BigInt>().map_err(|_| bad())?
                };
                let deg = if rest.is_empty() {
                    1
                } else {
                    let e = rest.strip_prefix('^').ok_or_else(bad)?;
                    e.parse::<usize>().map_err(|_| bad())?
                };
                (coef, deg)
            } else {
                (t.parse::<BigInt>().map_err(|_| bad())?, 0)
            };
            let coef = if neg { -coef } else { coef };
            acc.add_assign(&IntPoly::monomial(Zint::from(coef), deg));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_round_trip() {
        let p = IntPoly::from_i64s(&[1, 0, -3, 0, 1]);
        assert_eq!(p.to_string(), "1 - 3*d^2 + d^4");
        assert_eq!(p.to_string().parse::<IntPoly>().unwrap(), p);
        let q = IntPoly::from_i64s(&[0, -1, 2]);
        assert_eq!(q.to_string(), "-d + 2*d^2");
        assert_eq!("-d+2*d^2".parse::<IntPoly>().unwrap(), q);
        assert_eq!("0".parse::<IntPoly>().unwrap(), IntPoly::zero());
        assert_eq!("a0 + a1*d + a2*d^2".parse::<IntPoly>().is_err(), true);
        assert_eq!("3 + 4*d + 5*d^2".parse::<IntPoly>().unwrap(), IntPoly::from_i64s(&[3, 4, 5]));
        assert_eq!("1 + -3*d^2".parse::<IntPoly>().unwrap(), IntPoly::from_i64s(&[1, 0, -3]));
        assert!("1 + + + d".parse::<IntPoly>().is_err());
    }

    #[test]
    fn division() {
        let a = IntPoly::from_i64s(&[-1, 0, 1]);
        let b = IntPoly::from_i64s(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(IntPoly::from_i64s(&[-1, 1])));
        assert_eq!(IntPoly::from_i64s(&[1, 0, 1]).div_exact(&b), None);
        let (q, r) = IntPoly::from_i64s(&[1, 0, 1]).divrem_monic(&b);
        assert_eq!(q.mul(&b).add(&r), IntPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(r, IntPoly::constant(2));
    }

    #[test]
    fn gcd_over_q() {
        let f = IntPoly::from_i64s(&[1, 1]);
        let g = IntPoly::from_i64s(&[-2, 1]);
        let h = IntPoly::from_i64s(&[3, 0, 2]);
        let a = f.mul(&g).scale(&Zint::from(6));
        let b = f.mul(&h).scale(&Zint::from(-4));
        assert_eq!(a.gcd_q(&b), f);
    }
}
