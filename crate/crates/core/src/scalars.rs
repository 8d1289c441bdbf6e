//! Exact field arithmetic: arbitrary-precision rationals and prime fields.
//!
//! The field is chosen once per computation session. Every [`Scalar`] carries
//! its field so that mixing fields is caught at construction time; the
//! arithmetic operators panic on a mismatch, while [`field_arithmetic`]
//! reports it as an error.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("invalid field spec `{0}`")]
    BadFieldSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The coefficient field of a session: `Q` or `Fp:<prime>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime_field(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Mod { value: r, modulus: *p }
            }
        }
    }

    /// Parses an integer or `a/b` literal into this field.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        self.from_i64(num).try_div(&self.from_i64(den))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| ScalarError::BadFieldSpec(s.to_string()))?;
            return FieldSpec::prime_field(p);
        }
        Err(ScalarError::BadFieldSpec(s.to_string()))
    }
}

/// An exact field element: a reduced fraction, or a residue in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn check_same(&self, rhs: &Scalar) -> Result<(), ScalarError> {
        let (a, b) = (self.field(), rhs.field());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(a, b))
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar add")
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar sub")
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar mul")
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_same(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&rhs.neg())
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_same(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_same(rhs)?;
        self.try_mul(&rhs.inv()?)
    }

    /// True when the element equals the image of the integer `v`.
    pub fn eq_i64(&self, v: i64) -> bool {
        *self == self.field().from_i64(v)
    }
}

/// Inverse mod a prime, by the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{a} not invertible mod {p}");
    s0.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Whether a rational scalar is negative (used for sign-aware printing).
pub fn is_display_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Rat(r) => r.is_negative(),
        Scalar::Mod { .. } => false,
    }
}

/// Binary/unary field operations, dispatched by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Eq,
}

/// Outcome of [`field_arithmetic`]: a scalar or a comparison result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldValue {
    Scalar(Scalar),
    Bool(bool),
}

/// Checked entry point for the field operations; `b` is ignored for the
/// unary ops.
pub fn field_arithmetic(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<FieldValue, ScalarError> {
    let v = match op {
        FieldOp::Add => FieldValue::Scalar(a.try_add(b)?),
        FieldOp::Sub => FieldValue::Scalar(a.try_sub(b)?),
        FieldOp::Mul => FieldValue::Scalar(a.try_mul(b)?),
        FieldOp::Div => FieldValue::Scalar(a.try_div(b)?),
        FieldOp::Neg => FieldValue::Scalar(a.neg()),
        FieldOp::Inv => FieldValue::Scalar(a.inv()?),
        FieldOp::Eq => {
            a.check_same(b)?;
            FieldValue::Bool(a == b)
        }
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldSpec::Rationals.from_fraction(n, d).unwrap()
    }

    #[test]
    fn rational_add() {
        assert_eq!(q(1, 2).add(&q(1, 3)), q(5, 6));
    }

    #[test]
    fn f7_inverse() {
        let f = FieldSpec::prime_field(7).unwrap();
        assert_eq!(f.from_i64(3).inv().unwrap(), f.from_i64(5));
    }

    #[test]
    fn f2_characteristic() {
        let f = FieldSpec::prime_field(2).unwrap();
        assert!(f.from_i64(1).add(&f.from_i64(1)).is_zero());
    }

    #[test]
    fn inverse_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = FieldSpec::prime_field(p).unwrap();
            for a in 1..p {
                let x = f.from_i64(a as i64);
                assert!(x.inv().unwrap().mul(&x).is_one(), "inv({a}) mod {p}");
            }
        }
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(q(1, 1).try_div(&q(0, 1)), Err(ScalarError::DivisionByZero));
        let f = FieldSpec::prime_field(5).unwrap();
        assert_eq!(f.from_i64(0).inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let f = FieldSpec::prime_field(5).unwrap();
        let r = field_arithmetic(&q(1, 1), &f.from_i64(1), FieldOp::Add);
        assert!(matches!(r, Err(ScalarError::FieldMismatch(_, _))));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!(
            "Fp:2".parse::<FieldSpec>().unwrap(),
            FieldSpec::PrimeField(2)
        );
        assert!("Fp:6".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        assert_eq!(q(6, 3).to_string(), "2");
        let f = FieldSpec::prime_field(7).unwrap();
        assert_eq!(f.from_i64(-1).to_string(), "6");
    }
}
