//! Unbounded nonnegative integers and the small amount of elementary number
//! theory the rest of the crate needs.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
///
/// Serializes as a decimal string so that values never pass through a
/// floating point representation.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigNat(BigUint);

impl BigNat {
    pub fn zero() -> Self {
        BigNat(BigUint::zero())
    }

    pub fn one() -> Self {
        BigNat(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.0.is_odd()
    }

    pub fn pow(&self, exp: u32) -> Self {
        BigNat(self.0.pow(exp))
    }

    pub fn checked_sub(&self, rhs: &BigNat) -> Option<BigNat> {
        if rhs.0 > self.0 {
            None
        } else {
            Some(BigNat(&self.0 - &rhs.0))
        }
    }

    /// `self / divisor`, only when the division leaves no remainder.
    pub fn exact_div(&self, divisor: &BigNat) -> Option<BigNat> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.0.div_rem(&divisor.0);
        r.is_zero().then_some(BigNat(q))
    }

    pub fn is_multiple_of(&self, divisor: &BigNat) -> bool {
        !divisor.is_zero() && (&self.0 % &divisor.0).is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }
}

impl From<u64> for BigNat {
    fn from(v: u64) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl From<u32> for BigNat {
    fn from(v: u32) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl From<u128> for BigNat {
    fn from(v: u128) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl From<BigUint> for BigNat {
    fn from(v: BigUint) -> Self {
        BigNat(v)
    }
}

impl PartialEq<u64> for BigNat {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigNat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidArgument(format!(
                "not a decimal integer: {s:?}"
            )));
        }
        BigUint::from_str(s)
            .map(BigNat)
            .map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

impl Serialize for BigNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for BigNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&BigNat> for &BigNat {
            type Output = BigNat;
            fn $method(self, rhs: &BigNat) -> BigNat {
                BigNat($tr::$method(&self.0, &rhs.0))
            }
        }

        impl $tr<BigNat> for BigNat {
            type Output = BigNat;
            fn $method(self, rhs: BigNat) -> BigNat {
                BigNat($tr::$method(self.0, rhs.0))
            }
        }

        impl $tr<&BigNat> for BigNat {
            type Output = BigNat;
            fn $method(self, rhs: &BigNat) -> BigNat {
                BigNat($tr::$method(self.0, &rhs.0))
            }
        }

        impl $assign_tr<&BigNat> for BigNat {
            fn $assign_method(&mut self, rhs: &BigNat) {
                $assign_tr::$assign_method(&mut self.0, &rhs.0);
            }
        }

        impl $assign_tr<BigNat> for BigNat {
            fn $assign_method(&mut self, rhs: BigNat) {
                $assign_tr::$assign_method(&mut self.0, rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Sum for BigNat {
    fn sum<I: Iterator<Item = BigNat>>(iter: I) -> Self {
        iter.fold(BigNat::zero(), |acc, x| acc + x)
    }
}

impl Product for BigNat {
    fn product<I: Iterator<Item = BigNat>>(iter: I) -> Self {
        iter.fold(BigNat::one(), |acc, x| acc * x)
    }
}

pub fn gcd(a: &BigNat, b: &BigNat) -> BigNat {
    BigNat(a.0.gcd(&b.0))
}

/// Least common multiple. `lcm(0, 0)` is rejected.
pub fn lcm(a: &BigNat, b: &BigNat) -> Result<BigNat> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidArgument("lcm(0, 0) is undefined".into()));
    }
    Ok(BigNat(a.0.lcm(&b.0)))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d <= n / d {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing
/// primes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().copied()
    }

    /// The integer this factorization describes.
    pub fn value(&self) -> BigNat {
        self.factors
            .iter()
            .map(|&(p, e)| BigNat::from(p).pow(e))
            .product()
    }
}

/// Factor `n` by trial division up to √n.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive("factorize argument"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(&mut rest, 2);
    push(&mut rest, 3);
    let mut d = 5u64;
    while d <= rest / d {
        push(&mut rest, d);
        push(&mut rest, d + 2);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}
