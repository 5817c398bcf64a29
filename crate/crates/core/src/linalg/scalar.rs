use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Prime used by the modular fast path unless the caller picks another.
pub const DEFAULT_PRIME: u64 = 32003;

/// Largest modulus accepted, so that products of residues fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// `GF(p)`, rejecting composites and moduli above [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn default_prime() -> Field {
        Field::Prime(DEFAULT_PRIME)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = LinalgError;

    /// Accepts `rational` (or `q`) and `gf:P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") || s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("gf:")
            .or_else(|| s.strip_prefix("GF:"))
            .ok_or_else(|| LinalgError::Parse(format!("unknown field `{s}`")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| LinalgError::Parse(format!("bad prime in `{s}`")))?;
        Field::prime(p)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut k = 3u64;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// An exact field element: a reduced rational, or a residue modulo a prime.
///
/// Arithmetic between scalars of different fields is a programming error and
/// panics through the operator impls; use the `checked_*` methods when the
/// operands come from untrusted input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Prime {
                value: 0,
                modulus: p,
            },
        }
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Image of a rational number in `field`. Fails in `GF(p)` when `p`
    /// divides the denominator.
    pub fn from_rational(field: Field, q: &BigRational) -> Result<Scalar, LinalgError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let num = reduce_bigint(q.numer(), p);
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(LinalgError::NotRepresentable {
                        value: q.to_string(),
                        modulus: p,
                    });
                }
                Ok(Scalar::Prime {
                    value: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, LinalgError> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, LinalgError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, LinalgError> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime { value: b, .. },
            ) => Scalar::Prime {
                value: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn inverse(&self) -> Result<Scalar, LinalgError> {
        if self.is_zero() {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn same_field(&self, rhs: &Scalar) -> Result<(), LinalgError> {
        if self.field() == rhs.field() {
            Ok(())
        } else {
            Err(LinalgError::MixedField(self.field(), rhs.field()))
        }
    }
}

impl fmt::Display for Scalar {
    /// Rationals always print as `num/den`; residues print as their
    /// representative in `[0, p)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar fields differ")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar fields differ")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar fields differ")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Prime { value, modulus } => Scalar::Prime {
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

/// Parses `n` or `n/d` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, LinalgError> {
    let bad = || LinalgError::Parse(format!("bad fraction `{s}`"));
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `num/den` rendering of a rational.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!("rational".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("gf:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert!("gf:32004".parse::<Field>().is_err());
        assert!("gf:1".parse::<Field>().is_err());
        assert!("reals".parse::<Field>().is_err());
        assert_eq!(Field::Prime(7).to_string(), "gf:7");
    }

    #[test]
    fn rationals_are_canonical() {
        let q = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::Prime(7);
        let a = Scalar::from_i64(f, -1);
        assert_eq!(
            a,
            Scalar::Prime {
                value: 6,
                modulus: 7
            }
        );
        let inv = Scalar::from_i64(f, 3).inverse().unwrap();
        assert!((&inv * &Scalar::from_i64(f, 3)).is_one());
        let half = Scalar::from_rational(f, &parse_rational("1/2").unwrap()).unwrap();
        assert_eq!(
            half,
            Scalar::Prime {
                value: 4,
                modulus: 7
            }
        );
        assert!(Scalar::from_rational(f, &parse_rational("1/7").unwrap()).is_err());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Scalar::one(Field::Rational);
        let b = Scalar::one(Field::Prime(5));
        assert!(matches!(
            a.checked_add(&b),
            Err(LinalgError::MixedField(..))
        ));
        assert!(Scalar::zero(Field::Rational).inverse().is_err());
    }
}
