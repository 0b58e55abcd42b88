//! Exact scalar arithmetic: rationals and small prime fields.
//!
//! Every quantity in this crate is computed over one of these two fields;
//! there is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("{0} is not a prime >= 2")]
    NotPrime(u32),
    #[error("division by zero")]
    DivisionByZero,
}

/// The coefficient field: exact rationals, or F_p for a small prime p.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ScalarField {
    Rational,
    Prime(u32),
}

impl ScalarField {
    /// Prime-field constructor; rejects composite or undersized moduli.
    pub fn prime(p: u32) -> Result<Self, ScalarError> {
        if p < 2 || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(ScalarField::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarField::Rational => Scalar::Rat(BigRational::zero()),
            ScalarField::Prime(p) => Scalar::Fp { p: *p, val: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            ScalarField::Rational => Scalar::Rat(BigRational::one()),
            ScalarField::Prime(p) => Scalar::Fp { p: *p, val: 1 },
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            ScalarField::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(x))),
            ScalarField::Prime(p) => {
                let p64 = *p as i64;
                let val = ((x % p64) + p64) % p64;
                Scalar::Fp { p: *p, val: val as u32 }
            }
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rational => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    let n = n as u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// An element of a [`ScalarField`]. Prime-field values are kept reduced to
/// the range `0..p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u32, val: u32 },
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rat(_) => ScalarField::Rational,
            Scalar::Fp { p, .. } => ScalarField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Fp { p, val } => {
                if *val == 0 {
                    None
                } else {
                    Some(Scalar::Fp { p: *p, val: mod_inv(*val as i64, *p as i64) as u32 })
                }
            }
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Rat(_), Scalar::Rat(_)) => {}
            (Scalar::Fp { p: p1, .. }, Scalar::Fp { p: p2, .. }) if p1 == p2 => {}
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }
}

/// Extended Euclid; assumes gcd(a, p) = 1.
fn mod_inv(a: i64, p: i64) -> i64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p, a % p);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "not invertible mod {p}");
    ((t % p) + p) % p
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u64 + *b as u64) % *p as u64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                let p64 = *p as u64;
                Scalar::Fp { p: *p, val: ((*a as u64 + p64 - *b as u64) % p64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u64 * *b as u64) % *p as u64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: if *val == 0 { 0 } else { p - val } },
        }
    }
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
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}
