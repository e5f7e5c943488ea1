use super::coeff::CoeffRing;
use super::field::{FieldElem, Fq, ResidueField};
use super::modpoly as mp;
use super::poly::IntPoly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::qnum;
use std::fmt;

/// The pair (ℓ, p) with its chosen factor m_δ of [ℓ]. `ell = None` is the
/// semisimple case, where 𝔪 = 0 and every nonzero denominator is a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedChar {
    pub ell: Option<u64>,
    pub p: u64,
    pub m_delta: IntPoly,
    pub sign: i8,
}

impl fmt::Display for MixedChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ell {
            Some(l) => write!(f, "({l},{})", self.p),
            None => write!(f, "(inf,{})", self.p),
        }
    }
}

impl MixedChar {
    pub fn new(ell: u64, p: u64) -> Result<Self> {
        Self::with_sign(ell, p, 1)
    }

    pub fn with_sign(ell: u64, p: u64, sign: i8) -> Result<Self> {
        let m = qnum::minimal_poly(ell, p, sign)?;
        if p > 0 {
            let mbar = m.mod_u64(p);
            if mbar.len() != m.coeffs().len() || !mp::is_irreducible(&mbar, p) {
                return Err(Error::InvalidMixedChar(format!("m_delta = {m} is reducible mod {p}")));
            }
            let l = qnum::ell_of(p, &mbar)?;
            if l != Some(ell) {
                return Err(Error::InvalidMixedChar(format!("[n] vanishes first at {l:?}, not {ell}")));
            }
        }
        Ok(MixedChar { ell: Some(ell), p, m_delta: m, sign: if sign < 0 { -1 } else { 1 } })
    }

    pub fn semisimple() -> Self {
        MixedChar { ell: None, p: 0, m_delta: IntPoly::zero(), sign: 1 }
    }

    pub fn ell(&self) -> Result<u64> {
        self.ell.ok_or_else(|| Error::Unsupported("ell = infinity".into()))
    }

    pub fn mbar(&self) -> Vec<u64> {
        self.m_delta.mod_u64(self.p)
    }

    pub fn residue_field(&self) -> Result<ResidueField> {
        if self.p == 0 || self.ell.is_none() {
            return Err(Error::Unsupported("residue field needs a prime p and finite ell".into()));
        }
        ResidueField::new(self.p, self.mbar())
    }

    pub fn field(&self) -> Result<Fq> {
        Fq::new(self.residue_field()?)
    }

    /// Whether f ∈ 𝔪 = (p, m_δ).
    pub fn in_max_ideal(&self, f: &IntPoly) -> bool {
        if self.ell.is_none() {
            return f.is_zero();
        }
        if self.p == 0 {
            return f.rem_monic(&self.m_delta).is_zero();
        }
        let v = f.mod_u64(self.p);
        mp::rem_monic(&v, &self.mbar(), self.p).is_empty()
    }

    pub fn is_local(&self, r: &RatFunc) -> bool {
        !self.in_max_ideal(r.den())
    }
}

/// Element of ℤ[δ]_𝔪.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalFrac(RatFunc);

impl fmt::Display for LocalFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl LocalFrac {
    pub fn new(r: RatFunc, chi: &MixedChar) -> Result<Self> {
        if chi.is_local(&r) {
            Ok(LocalFrac(r))
        } else {
            Err(Error::DenominatorInMaximalIdeal)
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        LocalFrac(p.into())
    }

    pub fn num(&self) -> &IntPoly {
        self.0.num()
    }

    pub fn den(&self) -> &IntPoly {
        self.0.den()
    }

    pub fn ratfunc(&self) -> &RatFunc {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        LocalFrac(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        LocalFrac(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        LocalFrac(self.0.mul(&o.0))
    }

    pub fn neg(&self) -> Self {
        LocalFrac(self.0.neg())
    }
}

/// ℤ[δ]_𝔪 as a coefficient ring.
#[derive(Clone, Debug)]
pub struct LocalRing {
    pub chi: MixedChar,
}

impl CoeffRing for LocalRing {
    type Elem = LocalFrac;
    fn zero(&self) -> LocalFrac {
        LocalFrac(RatFunc::zero())
    }
    fn one(&self) -> LocalFrac {
        LocalFrac(RatFunc::one())
    }
    fn from_int(&self, v: i64) -> LocalFrac {
        LocalFrac(RatFunc::from_i64(v))
    }
    fn from_poly(&self, p: &IntPoly) -> LocalFrac {
        LocalFrac(p.clone().into())
    }
    fn add(&self, a: &LocalFrac, b: &LocalFrac) -> LocalFrac {
        a.add(b)
    }
    fn sub(&self, a: &LocalFrac, b: &LocalFrac) -> LocalFrac {
        a.sub(b)
    }
    fn mul(&self, a: &LocalFrac, b: &LocalFrac) -> LocalFrac {
        a.mul(b)
    }
    fn neg(&self, a: &LocalFrac) -> LocalFrac {
        a.neg()
    }
    fn is_zero(&self, a: &LocalFrac) -> bool {
        a.0.is_zero()
    }
    fn inv(&self, a: &LocalFrac) -> Option<LocalFrac> {
        if a.0.is_zero() || self.chi.in_max_ideal(a.num()) {
            None
        } else {
            a.0.inv().map(LocalFrac)
        }
    }
}

/// The canonical map ℤ[δ]_𝔪 → 𝕜.
pub fn specialize(x: &LocalFrac, chi: &MixedChar) -> Result<FieldElem> {
    let f = chi.residue_field()?;
    let n = f.from_poly(x.num());
    let d = f.from_poly(x.den());
    let di = f.inv(&d).ok_or(Error::DenominatorInMaximalIdeal)?;
    Ok(f.mul(&n, &di))
}

/// p^i as a machine modulus.
pub fn prime_power(p: u64, i: u32) -> Result<u64> {
    p.checked_pow(i)
        .filter(|&v| v < (1u64 << 62))
        .ok_or_else(|| Error::ScaleLimit(format!("{p}^{i} overflows")))
}

/// ξ_i(f): the largest j with num(f) ∈ (p^i, m_δ^j).
pub fn xi(i: u32, f: &LocalFrac, chi: &MixedChar) -> Result<u32> {
    if f.0.is_zero() {
        return Err(Error::ZeroInput);
    }
    if chi.in_max_ideal(f.den()) {
        return Err(Error::DenominatorInMaximalIdeal);
    }
    xi_poly(i, f.num(), chi)
}

/// ξ_i of an integer polynomial by repeated monic division over ℤ/p^i[δ].
pub fn xi_poly(i: u32, f: &IntPoly, chi: &MixedChar) -> Result<u32> {
    if chi.p == 0 || chi.ell.is_none() {
        return Err(Error::Unsupported("xi needs a prime p and finite ell".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = prime_power(chi.p, i)?;
    let m = chi.m_delta.mod_u64(n);
    let mut g = f.mod_u64(n);
    if g.is_empty() {
        return Err(Error::XiUnbounded(i));
    }
    let mut j = 0;
    loop {
        let (q, r) = mp::divrem_monic(&g, &m, n);
        if !r.is_empty() {
            return Ok(j);
        }
        j += 1;
        g = q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_char_construction() {
        let c = MixedChar::new(5, 3).unwrap();
        assert_eq!(c.m_delta, IntPoly::from_i64s(&[-1, 1, 1]));
        assert!(MixedChar::new(6, 3).is_err());
        assert!(MixedChar::new(5, 11).is_err());
        assert!(MixedChar::new(3, 2).is_ok());
        assert!(MixedChar::new(2, 2).is_ok());
        assert!(MixedChar::new(4, 3).is_ok());
        assert!(MixedChar::new(2, 3).is_ok());
        assert!(MixedChar::with_sign(5, 3, -1).is_ok());
        assert!(MixedChar::new(7, 0).is_ok());
    }

    #[test]
    fn specialization_examples() {
        let c = MixedChar::new(5, 3).unwrap();
        let f = c.residue_field().unwrap();
        assert_eq!(specialize(&LocalFrac::from_poly(IntPoly::one()), &c).unwrap(), f.one());
        assert_eq!(specialize(&LocalFrac::from_poly(IntPoly::delta()), &c).unwrap(), f.delta());
        assert_eq!(specialize(&LocalFrac::from_poly(qnum::quantum(5)), &c).unwrap(), f.zero());
        let bad = RatFunc::new(IntPoly::one(), qnum::quantum(5));
        assert_eq!(LocalFrac::new(bad, &c), Err(Error::DenominatorInMaximalIdeal));
    }

    #[test]
    fn xi_examples() {
        let c53 = MixedChar::new(5, 3).unwrap();
        let c32 = MixedChar::new(3, 2).unwrap();
        for i in 1..5 {
            assert_eq!(xi_poly(i, &IntPoly::one(), &c53).unwrap(), 0);
        }
        assert_eq!(xi_poly(1, &qnum::quantum(5), &c53).unwrap(), 1);
        assert_eq!(xi_poly(1, &qnum::quantum(3), &c32).unwrap(), 2);
        assert_eq!(xi_poly(2, &qnum::quantum(3), &c32).unwrap(), 1);
        assert_eq!(xi_poly(1, &IntPoly::constant(3), &c53), Err(Error::XiUnbounded(1)));
    }
}
