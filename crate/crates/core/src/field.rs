//! Exact scalars over the rationals and over prime fields.
//!
//! A [`Scalar`] always carries its [`FieldSpec`] and is kept in canonical form:
//! reduced fractions for `Q`, least nonnegative residues for `F_p`.
//! Binary operators panic when handed scalars from different fields; the
//! polynomial and matrix layers check fields up front and report
//! [`Error::FieldMismatch`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MODULUS_LIMIT: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rationals,
    Prime(u64),
}

/// The coefficient field: `Q` or `F_p` for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    pub const fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    /// The prime field `F_p`; `p` is checked by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0, Kind::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(*self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(*self)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        Scalar::from_i64(*self, v)
    }

    /// Every element of a prime field in ascending residue order.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar> + '_> {
        self.modulus().map(move |p| {
            (0..p).map(move |v| Scalar {
                field: *self,
                value: Value::Residue(v),
            })
        })
    }

    pub(crate) fn check_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rationals => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts the tags `Q` and `Fp` (`F2`, `F5`, `F13`, ...).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::rationals());
        }
        let digits = s
            .strip_prefix('F')
            .ok_or_else(|| Error::Parse(format!("unknown field tag {s:?}; expected Q or Fp")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field tag {s:?}; expected Q or Fp")))?;
        FieldSpec::prime(p)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u64),
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    value: Value,
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        match field.0 {
            Kind::Rationals => Scalar {
                field,
                value: Value::Rational(BigRational::zero()),
            },
            Kind::Prime(_) => Scalar {
                field,
                value: Value::Residue(0),
            },
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Self {
        match field.0 {
            Kind::Rationals => Scalar {
                field,
                value: Value::Rational(BigRational::from_integer(BigInt::from(v))),
            },
            Kind::Prime(p) => Scalar {
                field,
                value: Value::Residue(v.rem_euclid(p as i64) as u64),
            },
        }
    }

    pub fn from_bigint(field: FieldSpec, v: &BigInt) -> Self {
        match field.0 {
            Kind::Rationals => Scalar {
                field,
                value: Value::Rational(BigRational::from_integer(v.clone())),
            },
            Kind::Prime(p) => {
                let r = ((v % p as i64) + p as i64) % p as i64;
                Scalar {
                    field,
                    value: Value::Residue(r.to_u64().expect("residue fits u64")),
                }
            }
        }
    }

    /// `numer / denom`, reduced into the field.
    pub fn from_ratio(field: FieldSpec, numer: &BigInt, denom: &BigInt) -> Result<Self> {
        let d = Scalar::from_bigint(field, denom);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::from_bigint(field, numer).div(&d)
    }

    pub fn from_rational(value: BigRational) -> Self {
        Scalar {
            field: FieldSpec::rationals(),
            value: Value::Rational(value),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_zero(),
            Value::Residue(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_one(),
            Value::Residue(v) => *v == 1,
        }
    }

    /// The residue of an `F_p` element.
    pub fn residue(&self) -> Option<u64> {
        match self.value {
            Value::Residue(v) => Some(v),
            Value::Rational(_) => None,
        }
    }

    /// The value of a `Q` element.
    pub fn rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Residue(_) => None,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let value = match (&self.value, self.field.0) {
            (Value::Rational(q), _) => Value::Rational(q.recip()),
            (Value::Residue(v), Kind::Prime(p)) => Value::Residue(pow_mod(*v, p - 2, p)),
            _ => unreachable!("scalar value does not match its field"),
        };
        Some(Scalar {
            field: self.field,
            value,
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    fn combine(&self, rhs: &Scalar, op: Op) -> Scalar {
        assert_eq!(
            self.field, rhs.field,
            "scalar arithmetic across different fields"
        );
        let value = match (&self.value, &rhs.value, self.field.0) {
            (Value::Rational(a), Value::Rational(b), _) => Value::Rational(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
            }),
            (Value::Residue(a), Value::Residue(b), Kind::Prime(p)) => Value::Residue(match op {
                Op::Add => (a + b) % p,
                Op::Sub => (a + p - b) % p,
                Op::Mul => (a * b) % p,
            }),
            _ => unreachable!("scalar value does not match its field"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Residue(v) => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// Parses an integer or a fraction `a/b` and reduces it into `field`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || {
            Error::Parse(format!(
                "invalid coefficient {s:?}; expected an integer or a/b"
            ))
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if d.is_zero() || (field.is_prime_field() && Scalar::from_bigint(field, &d).is_zero()) {
            return Err(Error::Parse(format!(
                "coefficient {s:?} has a zero denominator in {field}"
            )));
        }
        Scalar::from_ratio(field, &n, &d)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.combine(rhs, $op)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.combine(&rhs, $op)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.combine(rhs, $op)
            }
        }
    };
}

forward_binop!(Add, add, Op::Add);
forward_binop!(Sub, sub, Op::Sub);
forward_binop!(Mul, mul, Op::Mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        &Scalar::zero(self.field) - self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check_rejects_composites() {
        assert!(FieldSpec::prime(7).is_ok());
        assert_eq!(FieldSpec::prime(1), Err(Error::InvalidModulus(1)));
        assert_eq!(FieldSpec::prime(9), Err(Error::InvalidModulus(9)));
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
        assert!(FieldSpec::prime(2_147_483_659).is_err());
    }

    #[test]
    fn field_tags_round_trip() {
        for tag in ["Q", "F2", "F5", "F13"] {
            assert_eq!(tag.parse::<FieldSpec>().unwrap().to_string(), tag);
        }
        assert!("F4".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.from_i64(-1).residue(), Some(6));
        assert_eq!((f7.from_i64(3) * f7.from_i64(5)).residue(), Some(1));
        assert_eq!(f7.from_i64(3).inv().unwrap().residue(), Some(5));
        assert_eq!((f7.from_i64(2) - f7.from_i64(5)).residue(), Some(4));
        assert!(f7.zero().inv().is_none());
    }

    #[test]
    fn rationals_reduce() {
        let q = FieldSpec::rationals();
        let half = Scalar::parse(q, "2/4").unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert_eq!((&half + &half).to_string(), "1");
        assert_eq!(Scalar::parse(q, "-6/3").unwrap().to_string(), "-2");
        assert!(Scalar::parse(q, "1/0").is_err());
    }

    #[test]
    fn parse_into_prime_field() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(Scalar::parse(f5, "-1").unwrap().residue(), Some(4));
        assert_eq!(Scalar::parse(f5, "1/2").unwrap().residue(), Some(3));
        assert!(Scalar::parse(f5, "1/5").is_err());
        assert!(Scalar::parse(f5, "x").is_err());
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixing_fields_panics() {
        let _ = FieldSpec::rationals().one() + FieldSpec::prime(3).unwrap().one();
    }
}
