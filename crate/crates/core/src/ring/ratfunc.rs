use super::poly::IntPoly;
use super::zint::Zint;
use std::fmt;

/// Element of ℚ(δ) as a reduced quotient of coprime integer polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl From<IntPoly> for RatFunc {
    fn from(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd_q(&den);
        let (mut n, mut d) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let mut c = n.content().gcd(&d.content());
        if d.lead().signum() < 0 {
            c = c.neg();
        }
        if !c.is_one() {
            n = IntPoly::from_zints(n.coeffs().iter().map(|z| z.div_exact(&c)).collect());
            d = IntPoly::from_zints(d.coeffs().iter().map(|z| z.div_exact(&c)).collect());
        }
        RatFunc { num: n, den: d }
    }

    /// For a monic denominator already known to be coprime to the numerator.
    pub(crate) fn from_coprime_monic(num: IntPoly, den: IntPoly) -> Self {
        debug_assert!(den.is_monic());
        if num.is_zero() {
            return Self::zero();
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_i64(v: i64) -> Self {
        IntPoly::constant(v).into()
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(self.num.scale(&Zint::from(k)), self.den.clone())
    }
}
