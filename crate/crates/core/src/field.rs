//! Exact coefficient fields: prime fields `Z/pZ` and the rationals.
//!
//! A [`Field`] is a value describing the domain; elements are plain data
//! (`u64` residues or [`BigRational`]) and all arithmetic goes through the
//! field object. This lets the modulus be chosen at run time while the
//! polynomial, operator and Gröbner code stays generic.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{AlgebraError, Result};

/// Largest modulus accepted by [`PrimeField::new`]; keeps residue products inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Image of an integer under the canonical map `Z -> K`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Characteristic of the field, `0` for the rationals.
    fn characteristic(&self) -> u64;

    /// Short name such as `F_5` or `Q`.
    fn name(&self) -> String;

    /// Canonical decimal rendering: a residue in `[0, p)` or `n` / `n/d`.
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of `num / den`; fails when `den` maps to zero.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem> {
        let d = self.from_bigint(den);
        let d_inv = self.inv(&d)?;
        Ok(self.mul(&self.from_bigint(num), &d_inv))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Parses the rendering produced by [`Field::format`] (also accepts
    /// negative integers and unreduced fractions).
    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        let bad = |msg: &str| AlgebraError::Parse {
            pos: 0,
            msg: format!("{msg}: `{s}`"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
                let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
                self.from_ratio(&n, &d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad("bad integer"))?;
                Ok(self.from_bigint(&n))
            }
        }
    }
}

/// Deterministic trial division; adequate for the desk-scale moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[2, bound]`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// The prime field `Z/pZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Residue of a signed machine integer.
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
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
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(AlgebraError::ZeroInverse(format!("0 in {}", self.name())));
        }
        let ext = (*a as i64).extended_gcd(&(self.p as i64));
        debug_assert_eq!(ext.gcd, 1);
        Ok(ext.x.rem_euclid(self.p as i64) as u64)
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn name(&self) -> String {
        format!("F_{}", self.p)
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rationals, with exact arbitrary-precision elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(AlgebraError::ZeroInverse("0 in Q".into()));
        }
        Ok(a.recip())
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroInverse("0 in Q".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn name(&self) -> String {
        "Q".into()
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Reduces an integral rational into `F_p`; fails if the denominator vanishes mod `p`.
pub fn reduce_rational(fp: &PrimeField, q: &BigRational) -> Result<u64> {
    fp.from_ratio(q.numer(), q.denom())
}

/// Lifts a residue to its symmetric representative in `(-p/2, p/2]` as a rational.
pub fn lift_symmetric(fp: &PrimeField, a: u64) -> BigRational {
    let p = fp.modulus();
    let v = if a > p / 2 { a as i64 - p as i64 } else { a as i64 };
    BigRational::from_integer(BigInt::from(v))
}
