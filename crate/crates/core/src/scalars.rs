//! Exact arithmetic for the ground field: small prime fields GF(p) and the
//! rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field.
pub const MAX_PRIME: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u32),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Number of elements, or `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(*p as u64),
            FieldSpec::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    /// True when the field has at least `n` elements.
    pub fn has_at_least(&self, n: u64) -> bool {
        self.size().is_none_or(|s| s >= n)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Gf { p: *p, v: 0 },
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Gf {
                p: *p,
                v: value.rem_euclid(*p as i64) as u32,
            },
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(value))),
        }
    }

    /// The element `num / den`; over GF(p) this is `num * den^-1 mod p`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldSpec::Prime(p) => {
                let modulus = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &modulus) + &modulus) % &modulus;
                    r.to_u32().expect("residue fits in u32")
                };
                let n = Scalar::Gf {
                    p: *p,
                    v: reduce(num),
                };
                let d = Scalar::Gf {
                    p: *p,
                    v: reduce(den),
                };
                n.checked_div(&d)
            }
            FieldSpec::Rational => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
        }
    }

    /// Every element of a prime field in the order 0, 1, ..., p-1.
    pub fn enumerate_elements(&self) -> Result<Vec<Scalar>> {
        match self {
            FieldSpec::Prime(p) => Ok((0..*p).map(|v| Scalar::Gf { p: *p, v }).collect()),
            FieldSpec::Rational => Err(Error::InfiniteField),
        }
    }

    /// Small test values: 0, 1, -1, 2, -2, ... without repetition.
    pub fn small_values(&self, count: usize) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::with_capacity(count);
        let mut k: i64 = 0;
        let limit = self.size().map(|s| s as usize).unwrap_or(usize::MAX);
        while out.len() < count.min(limit) {
            for candidate in [k, -k] {
                let s = self.from_i64(candidate);
                if out.len() < count && !out.contains(&s) {
                    out.push(s);
                }
            }
            k += 1;
        }
        out
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf({p})"),
            FieldSpec::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(inner) = t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .parse()
                .map_err(|_| Error::UnknownField(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(Error::UnknownField(s.to_string()))
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

/// A field element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Gf { p: u32, v: u32 },
    Rat(BigRational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    if a.field() != b.field() {
        return Err(Error::MixedFields);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => return a.checked_div(b),
    })
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Gf { p, .. } => FieldSpec::Prime(*p),
            Scalar::Rat(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gf { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gf { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Gf { v, .. } => Some(*v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Gf { p, v } => Scalar::Gf {
                p: *p,
                v: inv_mod(*v, *p),
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(Error::MixedFields);
        }
        Ok(self * &other.inverse()?)
    }

    /// True when the printed form should carry a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Gf { .. } => false,
            Scalar::Rat(r) => r.is_negative(),
        }
    }

    /// Absolute value for printing; identity over GF(p).
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Gf { .. } => self.clone(),
            Scalar::Rat(r) => Scalar::Rat(r.abs()),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Gf { .. } => true,
            Scalar::Rat(r) => r.is_integer(),
        }
    }
}

pub(crate) fn inv_mod(v: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, v as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{v} is not invertible mod {p}");
    t.rem_euclid(p as i64) as u32
}

fn same_prime(a: u32, b: u32) -> u32 {
    assert_eq!(a, b, "arithmetic on elements of different fields");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Gf { p, v }, Scalar::Gf { p: q, v: w }) => {
                let p = same_prime(*p, *q);
                Scalar::Gf {
                    p,
                    v: ((*v as u64 + *w as u64) % p as u64) as u32,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("arithmetic on elements of different fields"),
        }
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
        match (self, rhs) {
            (Scalar::Gf { p, v }, Scalar::Gf { p: q, v: w }) => {
                let p = same_prime(*p, *q);
                Scalar::Gf {
                    p,
                    v: ((*v as u64 * *w as u64) % p as u64) as u32,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("arithmetic on elements of different fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Gf { p, v } => Scalar::Gf {
                p: *p,
                v: (*p - *v) % *p,
            },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gf { v, .. } => write!(f, "{v}"),
            Scalar::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}
