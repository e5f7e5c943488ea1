use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Integer that stays in an `i64` until an operation overflows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Zint {
    Small(i64),
    Big(BigInt),
}

impl Default for Zint {
    fn default() -> Self {
        Zint::Small(0)
    }
}

impl fmt::Debug for Zint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Zint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zint::Small(v) => write!(f, "{v}"),
            Zint::Big(b) => write!(f, "{b}"),
        }
    }
}

impl From<i64> for Zint {
    fn from(v: i64) -> Self {
        Zint::Small(v)
    }
}

impl From<i32> for Zint {
    fn from(v: i32) -> Self {
        Zint::Small(v as i64)
    }
}

impl From<BigInt> for Zint {
    fn from(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Zint::Small(v),
            None => Zint::Big(b),
        }
    }
}

impl From<i128> for Zint {
    fn from(v: i128) -> Self {
        match i64::try_from(v) {
            Ok(s) => Zint::Small(s),
            Err(_) => Zint::Big(BigInt::from(v)),
        }
    }
}

impl Zint {
    pub fn zero() -> Self {
        Zint::Small(0)
    }

    pub fn one() -> Self {
        Zint::Small(1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Zint::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Zint::Small(1))
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Zint::Small(v) => BigInt::from(*v),
            Zint::Big(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Zint::Small(v) => Some(*v),
            Zint::Big(_) => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Zint::Small(v) => v.signum() as i32,
            Zint::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Zint {
        match self {
            Zint::Small(v) => match v.checked_abs() {
                Some(a) => Zint::Small(a),
                None => Zint::Big(BigInt::from(*v).abs()),
            },
            Zint::Big(b) => Zint::from(b.abs()),
        }
    }

    pub fn neg(&self) -> Zint {
        match self {
            Zint::Small(v) => match v.checked_neg() {
                Some(n) => Zint::Small(n),
                None => Zint::Big(-BigInt::from(*v)),
            },
            Zint::Big(b) => Zint::from(-b),
        }
    }

    pub fn add(&self, o: &Zint) -> Zint {
        if let (Zint::Small(a), Zint::Small(b)) = (self, o) {
            if let Some(s) = a.checked_add(*b) {
                return Zint::Small(s);
            }
        }
        Zint::from(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Zint) -> Zint {
        if let (Zint::Small(a), Zint::Small(b)) = (self, o) {
            if let Some(s) = a.checked_sub(*b) {
                return Zint::Small(s);
            }
        }
        Zint::from(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Zint) -> Zint {
        if let (Zint::Small(a), Zint::Small(b)) = (self, o) {
            return Zint::from(*a as i128 * *b as i128);
        }
        Zint::from(self.to_big() * o.to_big())
    }

    pub fn add_assign(&mut self, o: &Zint) {
        if let (Zint::Small(a), Zint::Small(b)) = (&*self, o) {
            if let Some(s) = a.checked_add(*b) {
                *self = Zint::Small(s);
                return;
            }
        }
        *self = self.add(o);
    }

    pub fn sub_assign(&mut self, o: &Zint) {
        if let (Zint::Small(a), Zint::Small(b)) = (&*self, o) {
            if let Some(s) = a.checked_sub(*b) {
                *self = Zint::Small(s);
                return;
            }
        }
        *self = self.sub(o);
    }

    /// `self += a * b`
    pub fn mul_add_assign(&mut self, a: &Zint, b: &Zint) {
        if let (Zint::Small(s), Zint::Small(x), Zint::Small(y)) = (&*self, a, b) {
            let r = *s as i128 + *x as i128 * *y as i128;
            *self = Zint::from(r);
            return;
        }
        *self = Zint::from(self.to_big() + a.to_big() * b.to_big());
    }

    /// `self -= a * b`
    pub fn mul_sub_assign(&mut self, a: &Zint, b: &Zint) {
        if let (Zint::Small(s), Zint::Small(x), Zint::Small(y)) = (&*self, a, b) {
            let r = *s as i128 - *x as i128 * *y as i128;
            *self = Zint::from(r);
            return;
        }
        *self = Zint::from(self.to_big() - a.to_big() * b.to_big());
    }

    /// Exact quotient; panics in debug builds if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Zint) -> Zint {
        if let (Zint::Small(a), Zint::Small(b)) = (self, o) {
            if let Some(q) = a.checked_div(*b) {
                debug_assert_eq!(a % b, 0);
                return Zint::Small(q);
            }
        }
        let (q, r) = self.to_big().div_rem(&o.to_big());
        debug_assert!(r.is_zero());
        Zint::from(q)
    }

    pub fn divides(&self, o: &Zint) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        match (self, o) {
            (Zint::Small(a), Zint::Small(b)) => match b.checked_rem(*a) {
                Some(r) => r == 0,
                None => true,
            },
            _ => (o.to_big() % self.to_big()).is_zero(),
        }
    }

    pub fn gcd(&self, o: &Zint) -> Zint {
        match (self, o) {
            (Zint::Small(a), Zint::Small(b)) => {
                let g = (a.unsigned_abs()).gcd(&b.unsigned_abs());
                match i64::try_from(g) {
                    Ok(v) => Zint::Small(v),
                    Err(_) => Zint::Big(BigInt::from(g)),
                }
            }
            _ => Zint::from(self.to_big().gcd(&o.to_big())),
        }
    }

    /// Residue in `[0, n)`.
    pub fn rem_u64(&self, n: u64) -> u64 {
        match self {
            Zint::Small(v) => (*v as i128).rem_euclid(n as i128) as u64,
            Zint::Big(b) => {
                let r = b.mod_floor(&BigInt::from(n));
                r.to_u64().unwrap()
            }
        }
    }

    pub fn pow(&self, e: u32) -> Zint {
        let mut r = Zint::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn big_one() -> BigInt {
        BigInt::one()
    }
}

impl PartialOrd for Zint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Zint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Zint::Small(a), Zint::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}
