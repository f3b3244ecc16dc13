//! Exact ground fields: the rationals and prime fields `F_p`.
//!
//! Every scalar is stored as a [`BigRational`]. Over `F_p` the stored value is
//! always an integer representative in `[0, p)`, so equality of normalized
//! scalars is equality in the field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Input(format!("{p} is not a prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Map a rational into the field. Over `F_p` the denominator must be prime to `p`.
    pub fn reduce(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::Input(format!("denominator of {x} vanishes mod {p}")));
                }
                let inv = mod_inverse(&den, &p);
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    /// Like [`Field::reduce`] but for values already known to be reducible.
    pub fn norm(&self, x: Scalar) -> Scalar {
        match self {
            Field::Rational => x,
            Field::Prime(_) => self.reduce(&x).expect("scalar not representable in F_p"),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.norm(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                BigRational::from_integer(mod_inverse(&a.to_integer(), &p))
            }
        }
    }

    /// `(-1)^e` as a field element.
    pub fn sign(&self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.neg(&self.one())
        }
    }

    /// Parse a scalar written as `"a"` or `"a/b"`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        parse_rational(s).and_then(|x| self.reduce(&x))
    }

    /// Canonical text form. Over `F_p` values print in `[0, p)`.
    pub fn format(&self, x: &Scalar) -> String {
        format_rational(x)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse scalar {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(p)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Small-integer view of a scalar, used in reports and tests.
pub fn to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}
