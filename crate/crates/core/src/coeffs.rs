//! Exact scalars over ℚ and prime fields.
//!
//! Every coefficient in the engine is a [`Scalar`] tagged with the field it
//! lives in. Mixing fields is a programming error for the operator impls and
//! a recoverable [`FieldError`] for the `checked_*` methods.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristic {0} is not a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("unknown field `{0}` (expected Q or F<p>)")]
    UnknownField(String),
}

/// The ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    /// Parses `Q` or `F<p>` (e.g. `F7`).
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let t = text.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime(p);
            }
        }
        Err(FieldError::UnknownField(t.to_string()))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Residue {
                    value: r.to_u32().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num/den` in this field; fails when `den` vanishes in the field.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Result<Scalar, FieldError> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(&self.from_bigint(num) * &d.inv()?)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element in canonical form: reduced fraction with positive
/// denominator, or a residue in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Ok(Scalar::Residue {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                })
            }
            _ => Err(FieldError::Mismatch(self.field(), other.field())),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Ok(Scalar::Residue {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    modulus: *p,
                })
            }
            _ => Err(FieldError::Mismatch(self.field(), other.field())),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_mul(&other.inv()?)
    }

    /// Re-normalizes the stored representation. Values built through the
    /// public API are already canonical, so this is the identity on them.
    pub fn canonical(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                let (n, d) = (r.numer().clone(), r.denom().clone());
                Scalar::Rational(BigRational::new(n, d))
            }
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: value % modulus,
                modulus: *modulus,
            },
        }
    }

    /// Small integer value if this scalar is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(*value as i64),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Residue { .. } => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar fields agree")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar fields agree")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldSpec::Rationals
            .from_fraction(&BigInt::from(n), &BigInt::from(d))
            .unwrap()
    }

    fn fp(p: u32, v: i64) -> Scalar {
        FieldSpec::PrimeField(p).from_i64(v)
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2).checked_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(&q(0, 1) + &q(-7, 3), q(-7, 3));
    }

    #[test]
    fn residue_sum_and_product() {
        assert_eq!(&fp(7, 5) + &fp(7, 4), fp(7, 2));
        assert_eq!(&fp(5, 3) * &fp(5, 4), fp(5, 2));
    }

    #[test]
    fn products_and_units() {
        assert_eq!(&q(1, 2) * &q(2, 1), q(1, 1));
        assert_eq!(&q(-3, 4) * &q(1, 1), q(-3, 4));
    }

    #[test]
    fn inverses() {
        assert_eq!(q(2, 3).inv().unwrap(), q(3, 2));
        assert_eq!(fp(7, 3).inv().unwrap(), fp(7, 5));
        assert_eq!(q(1, 1).inv().unwrap(), q(1, 1));
        assert_eq!(q(0, 1).inv(), Err(FieldError::DivisionByZero));
        assert_eq!(fp(7, 0).inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        assert!(matches!(
            q(1, 1).checked_add(&fp(7, 1)),
            Err(FieldError::Mismatch(..))
        ));
        assert!(fp(5, 1).checked_mul(&fp(7, 1)).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, -4), q(-1, 2));
        assert_eq!(fp(7, -1), fp(7, 6));
        let third = FieldSpec::PrimeField(7)
            .from_fraction(&BigInt::from(1), &BigInt::from(3))
            .unwrap();
        assert_eq!(third, fp(7, 5));
        assert!(FieldSpec::PrimeField(7)
            .from_fraction(&BigInt::from(1), &BigInt::from(14))
            .is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("F7").unwrap(), FieldSpec::PrimeField(7));
        assert!(FieldSpec::parse("F8").is_err());
        assert!(FieldSpec::parse("F2147483659").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Scalar> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
        }

        fn residue() -> impl Strategy<Value = Scalar> {
            (0i64..10_007).prop_map(|v| fp(10_007, v))
        }

        fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) {
            assert_eq!(&(a + b) + c, a + &(b + c));
            assert_eq!(&(a * b) * c, a * &(b * c));
            assert_eq!(a + b, b + a);
            assert_eq!(a * b, b * a);
            assert_eq!(a * &(b + c), &(a * b) + &(a * c));
            assert!((a + &(-a)).is_zero());
            if !a.is_zero() {
                assert!((a * &a.inv().unwrap()).is_one());
            }
            assert_eq!(a.canonical().canonical(), a.canonical());
            assert_eq!(&a.canonical(), a);
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn rationals_form_a_field(a in rational(), b in rational(), c in rational()) {
                field_axioms(&a, &b, &c);
            }

            #[test]
            fn residues_form_a_field(a in residue(), b in residue(), c in residue()) {
                field_axioms(&a, &b, &c);
            }
        }
    }
}
