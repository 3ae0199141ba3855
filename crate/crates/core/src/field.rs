//! Coefficient fields: the rationals and prime fields.
//!
//! Coefficients are always stored as `BigRational`. Over a prime field the
//! stored value is the canonical integer representative in `[0, p)`, so
//! equality of stored values is equality in the field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coef = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Build a field from its characteristic; 0 means the rationals.
    pub fn from_characteristic(p: u64) -> Result<Field> {
        if p == 0 {
            return Ok(Field::Rational);
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidRing(format!("characteristic {p} is not below 2^31")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidRing(format!("characteristic {p} is not prime")));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p as u64,
        }
    }

    /// Bring an arbitrary rational into canonical form for this field.
    pub fn normalize(&self, c: &Coef) -> Coef {
        match self {
            Field::Rational => c.clone(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by the characteristic");
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        self.normalize(&BigRational::from_integer(BigInt::from(v)))
    }

    pub fn one(&self) -> Coef {
        BigRational::one()
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match self {
            Field::Rational => a + b,
            Field::Prime(p) => reduce_int(a.numer() + b.numer(), *p),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        match self {
            Field::Rational => a - b,
            Field::Prime(p) => reduce_int(a.numer() - b.numer(), *p),
        }
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match self {
            Field::Rational => a * b,
            Field::Prime(p) => reduce_int(a.numer() * b.numer(), *p),
        }
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match self {
            Field::Rational => -a,
            Field::Prime(p) => reduce_int(-a.numer(), *p),
        }
    }

    /// Multiplicative inverse. Panics on zero, which callers never pass.
    pub fn inv(&self, a: &Coef) -> Coef {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                BigRational::from_integer(mod_inverse(a.numer(), &p).expect("nonzero residue"))
            }
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }

    /// Canonical printing: lowest terms over Q, representative in `[0, p)` over F_p.
    pub fn format(&self, c: &Coef) -> String {
        if c.is_integer() {
            c.numer().to_string()
        } else {
            format!("{}/{}", c.numer(), c.denom())
        }
    }

    /// True when the value is negative in its printed form (only possible over Q).
    pub fn is_negative(&self, c: &Coef) -> bool {
        matches!(self, Field::Rational) && c.is_negative()
    }
}

fn reduce_int(v: BigInt, p: u32) -> Coef {
    BigRational::from_integer(v.mod_floor(&BigInt::from(p)))
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(p).extended_gcd(p);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(p))
}

/// Residue of a canonical F_p coefficient as a machine word.
pub(crate) fn as_residue(c: &Coef) -> u64 {
    c.numer().to_u64().expect("canonical residue")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
