//! Exact coefficient arithmetic.
//!
//! A [`Ring`] fixes the coefficient kind for a whole computation; every
//! [`Scalar`] produced inside that computation carries the same kind.  Mixing
//! kinds is a programming error and panics inside the arithmetic operators;
//! the public matrix entry points check kinds up front and return
//! [`Error::MixedScalarKinds`](crate::Error::MixedScalarKinds) instead.

mod lin;
mod matrix;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lin::Lin;
pub use matrix::{image_membership, left_kernel, mat_mul, rank, SparseMatrix};

/// The ground ring of a computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
    /// Residues modulo the stored prime.
    ModP(u64),
}

impl Ring {
    pub fn mod_p(p: u64) -> Result<Ring> {
        if p < 2 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidRing(format!("Zp:{p} needs a prime below 2^32")));
        }
        Ok(Ring::ModP(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(BigInt::from(v)),
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Ring::ModP(p) => Scalar::Mod(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    /// `(-1)^e` as a scalar.
    pub fn sign(&self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Parses a scalar literal (`"3"`, `"-2/5"`) into this ring.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar literal {s:?}"));
        match self {
            Ring::Integers => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Scalar::Int(v))
            }
            Ring::Rationals => {
                let v = if let Some((n, d)) = s.split_once('/') {
                    let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                    let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)
                };
                Ok(Scalar::Rat(v))
            }
            Ring::ModP(p) => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                let r = v.mod_floor(&BigInt::from(*p)).to_u64().expect("residue fits");
                Ok(Scalar::Mod(r, *p))
            }
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (Ring::Integers, Scalar::Int(_)) => true,
            (Ring::Rationals, Scalar::Rat(_)) => true,
            (Ring::ModP(p), Scalar::Mod(_, q)) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::ModP(p) => write!(f, "Zp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            _ => match s.strip_prefix("Zp:") {
                Some(p) => {
                    let p = p
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidRing(s.to_string()))?;
                    Ring::mod_p(p)
                }
                None => Err(Error::InvalidRing(s.to_string())),
            },
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Ring, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact coefficient.
///
/// Rationals are kept reduced with positive denominator (maintained by
/// `num_rational`); residues are canonical representatives in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64, u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integers,
            Scalar::Rat(_) => Ring::Rationals,
            Scalar::Mod(_, p) => Ring::ModP(*p),
        }
    }

    pub fn same_kind(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Int(_), Scalar::Int(_)) | (Scalar::Rat(_), Scalar::Rat(_)) => true,
            (Scalar::Mod(_, p), Scalar::Mod(_, q)) => p == q,
            _ => false,
        }
    }

    /// Multiplies by `(-1)^e`.
    pub fn signed(self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self
        } else {
            -self
        }
    }

    /// Multiplicative inverse, if it exists in the ring.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(v) => {
                if v.is_one() || (-v).is_one() {
                    Some(self.clone())
                } else {
                    None
                }
            }
            Scalar::Rat(v) => (!v.is_zero()).then(|| Scalar::Rat(v.recip())),
            Scalar::Mod(v, p) => (*v != 0).then(|| Scalar::Mod(pow_mod(*v, p - 2, *p), *p)),
        }
    }

    /// Exact quotient `self / d` when it exists in the ring.
    pub fn exact_div(&self, d: &Scalar) -> Option<Scalar> {
        match (self, d) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    return None;
                }
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Scalar::Int(q))
            }
            _ => d.inverse().map(|inv| self * &inv),
        }
    }

    pub(crate) fn as_int(&self) -> Option<&BigInt> {
        match self {
            Scalar::Int(v) => Some(v),
            _ => None,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

fn mixed() -> ! {
    panic!("mixed scalar kinds in one computation")
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => Scalar::Mod((a + b) % p, *p),
            _ => mixed(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => *a += b,
            (Scalar::Rat(a), Scalar::Rat(b)) => *a += b,
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => *a = (*a + b) % *p,
            _ => mixed(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => {
                Scalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => mixed(),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a, p) => Scalar::Mod((p - a) % p, p),
        }
    }
}

impl Scalar {
    pub fn abs_int(&self) -> Option<BigInt> {
        self.as_int().map(|v| v.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Ring::Rationals;
        let a = q.parse_scalar("2/-4").unwrap();
        assert_eq!(a, q.parse_scalar("-1/2").unwrap());
        assert_eq!(a.to_string(), "-1/2");
        let Scalar::Rat(v) = &a else { panic!() };
        assert!(v.denom().is_positive());
    }

    #[test]
    fn residues_are_canonical() {
        let r = Ring::mod_p(7).unwrap();
        assert_eq!(r.from_i64(-1), Scalar::Mod(6, 7));
        assert_eq!(r.parse_scalar("-15").unwrap(), Scalar::Mod(6, 7));
        assert_eq!(r.from_i64(3).inverse(), Some(Scalar::Mod(5, 7)));
        assert!(Ring::mod_p(8).is_err());
    }

    #[test]
    fn ring_tags_round_trip() {
        for s in ["Z", "Q", "Zp:5"] {
            assert_eq!(s.parse::<Ring>().unwrap().to_string(), s);
        }
        assert!("R".parse::<Ring>().is_err());
    }

    #[test]
    fn integer_division_is_exact_only() {
        let z = Ring::Integers;
        assert_eq!(z.from_i64(6).exact_div(&z.from_i64(3)), Some(z.from_i64(2)));
        assert_eq!(z.from_i64(3).exact_div(&z.from_i64(2)), None);
    }

    #[test]
    #[should_panic(expected = "mixed scalar kinds")]
    fn mixing_kinds_panics() {
        let _ = Ring::Integers.one() + Ring::Rationals.one();
    }

    fn ring_axioms(r: &Ring, a: i64, b: i64, c: i64) {
        let (a, b, c) = (r.from_i64(a), r.from_i64(b), r.from_i64(c));
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a + &b, &b + &a);
        assert!((&a + &(&r.from_i64(-1) * &a)).is_zero());
    }

    #[test]
    fn ring_axioms_exhaustive_mod_5() {
        let r = Ring::mod_p(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    ring_axioms(&r, a, b, c);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms_integers(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            ring_axioms(&Ring::Integers, a, b, c);
        }

        #[test]
        fn ring_axioms_rationals(a in -50i64..50, b in -50i64..50, c in 1i64..50) {
            let q = Ring::Rationals;
            let x = q.from_i64(a).exact_div(&q.from_i64(c)).unwrap();
            let y = q.from_i64(b).exact_div(&q.from_i64(c + 1)).unwrap();
            prop_assert_eq!(&(&x * &y) * &q.from_i64(c), &x * &(&y * &q.from_i64(c)));
            prop_assert_eq!(&x * &(&y + &q.one()), &(&x * &y) + &x);
        }
    }
}
