use super::field::Fq;
use super::poly::IntPoly;
use super::ratfunc::RatFunc;

use std::fmt::Debug;

/// Scalar ring contract used by the diagram engine. Operations take the ring as
/// context so that quotient rings and finite fields carry their modulus once.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    /// Image of an element of ℤ[δ].
    fn from_poly(&self, p: &IntPoly) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    fn delta(&self) -> Self::Elem {
        self.from_poly(&IntPoly::delta())
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }
}

/// ℤ[δ].
#[derive(Clone, Copy, Debug, Default)]
pub struct IntPolyRing;

impl CoeffRing for IntPolyRing {
    type Elem = IntPoly;
    fn zero(&self) -> IntPoly {
        IntPoly::zero()
    }
    fn one(&self) -> IntPoly {
        IntPoly::one()
    }
    fn from_int(&self, v: i64) -> IntPoly {
        IntPoly::constant(v)
    }
    fn from_poly(&self, p: &IntPoly) -> IntPoly {
        p.clone()
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.add(b)
    }
    fn sub(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.sub(b)
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.mul(b)
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        a.neg()
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &IntPoly) -> Option<IntPoly> {
        if a.degree() == Some(0) && (a.lead().is_one() || a.lead().neg().is_one()) {
            Some(a.clone())
        } else {
            None
        }
    }
    fn add_assign(&self, a: &mut IntPoly, b: &IntPoly) {
        a.add_assign(b);
    }
    fn mul_add_assign(&self, acc: &mut IntPoly, a: &IntPoly, b: &IntPoly) {
        acc.mul_add_assign(a, b);
    }
}

/// ℤ[δ]/(Q) for a monic modulus Q.
#[derive(Clone, Debug)]
pub struct PolyQuotRing {
    modulus: IntPoly,
}

impl PolyQuotRing {
    pub fn new(modulus: IntPoly) -> Self {
        assert!(modulus.is_monic(), "modulus must be monic");
        PolyQuotRing { modulus }
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn reduce(&self, p: &IntPoly) -> IntPoly {
        if p.degree() < self.modulus.degree() {
            p.clone()
        } else {
            p.rem_monic(&self.modulus)
        }
    }
}

impl CoeffRing for PolyQuotRing {
    type Elem = IntPoly;
    fn zero(&self) -> IntPoly {
        IntPoly::zero()
    }
    fn one(&self) -> IntPoly {
        self.reduce(&IntPoly::one())
    }
    fn from_int(&self, v: i64) -> IntPoly {
        self.reduce(&IntPoly::constant(v))
    }
    fn from_poly(&self, p: &IntPoly) -> IntPoly {
        self.reduce(p)
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.add(b)
    }
    fn sub(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.sub(b)
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(&a.mul(b))
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        a.neg()
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_zero()
    }
    fn inv(&self, _a: &IntPoly) -> Option<IntPoly> {
        None
    }
    fn add_assign(&self, a: &mut IntPoly, b: &IntPoly) {
        a.add_assign(b);
    }
}

/// ℚ(δ).
#[derive(Clone, Copy, Debug, Default)]
pub struct RatField;

impl CoeffRing for RatField {
    type Elem = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn from_int(&self, v: i64) -> RatFunc {
        RatFunc::from_i64(v)
    }
    fn from_poly(&self, p: &IntPoly) -> RatFunc {
        p.clone().into()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
}

impl CoeffRing for Fq {
    type Elem = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_int(&self, v: i64) -> u32 {
        Fq::from_int(self, v)
    }
    fn from_poly(&self, p: &IntPoly) -> u32 {
        Fq::from_poly(self, p)
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        Fq::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        Fq::sub(self, *a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        Fq::mul(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        Fq::neg(self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        Fq::inv(self, *a)
    }
    fn delta(&self) -> u32 {
        Fq::delta(self)
    }
}

