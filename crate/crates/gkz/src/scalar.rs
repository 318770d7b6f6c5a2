//! Exact ordered-field scalars.
//!
//! Geometry in this crate only ever needs ring operations plus a sign, so
//! the scalar trait is deliberately small. Two implementations exist:
//! plain rationals and [`PerturbedScalar`], a polynomial in a positive
//! infinitesimal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedMul, One, Signed, Zero};

use crate::error::{GkzError, Result};

/// An exact, totally ordered scalar usable as a weight entry.
pub trait OrderedField:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + CheckedMul
{
    fn from_rational(r: BigRational) -> Self;

    /// Multiply by an exact rational. Never changes the infinitesimal degree.
    fn scale(&self, r: &BigRational) -> Self;

    /// The value as a rational if it carries no infinitesimal part.
    fn to_rational(&self) -> Option<BigRational>;

    fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn signum_ord(&self) -> Ordering {
        self.cmp(&Self::zero())
    }
}

impl OrderedField for BigRational {
    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Largest power of the infinitesimal a [`PerturbedScalar`] may carry.
pub const MAX_EPS_DEGREE: usize = 2;

/// `c0 + c1·ε + c2·ε²` with ε a positive infinitesimal.
///
/// Ordering is lexicographic starting from the constant term. Products
/// whose degree would exceed [`MAX_EPS_DEGREE`] are refused: `checked_mul`
/// returns `None` and the `*` operator panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerturbedScalar {
    coeffs: Vec<BigRational>,
}

impl PerturbedScalar {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        let mut s = PerturbedScalar { coeffs };
        s.trim();
        if s.coeffs.len() > MAX_EPS_DEGREE + 1 {
            return Err(GkzError::DegreeOverflow(s.coeffs.len() - 1, MAX_EPS_DEGREE));
        }
        Ok(s)
    }

    pub fn constant(c: BigRational) -> Self {
        let mut s = PerturbedScalar { coeffs: vec![c] };
        s.trim();
        s
    }

    /// `ε^k`.
    pub fn eps_pow(k: usize) -> Result<Self> {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Self::new(c)
    }

    pub fn eps() -> Self {
        Self::eps_pow(1).expect("degree 1 is within bound")
    }

    /// `c + t·ε`.
    pub fn linear(c: BigRational, t: BigRational) -> Self {
        Self::new(vec![c, t]).expect("degree 1 is within bound")
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(BigRational, BigRational) -> BigRational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f(self.coeff(k), other.coeff(k))).collect();
        let mut s = PerturbedScalar { coeffs };
        s.trim();
        s
    }
}

impl fmt::Debug for PerturbedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PerturbedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if k == 1 {
                        write!(f, "eps")?;
                    } else {
                        write!(f, "eps^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl PartialOrd for PerturbedScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerturbedScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.coeffs.len().max(other.coeffs.len());
        for k in 0..len {
            match self.coeff(k).cmp(&other.coeff(k)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Add for PerturbedScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for PerturbedScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for PerturbedScalar {
    type Output = Self;
    fn neg(self) -> Self {
        PerturbedScalar { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for PerturbedScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match self.checked_mul(&rhs) {
            Some(p) => p,
            None => panic!(
                "infinitesimal degree overflow: ({}) * ({}) exceeds degree {}",
                self, rhs, MAX_EPS_DEGREE
            ),
        }
    }
}

impl CheckedMul for PerturbedScalar {
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Some(Self::zero());
        }
        let deg = self.degree() + rhs.degree();
        if deg > MAX_EPS_DEGREE {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut s = PerturbedScalar { coeffs };
        s.trim();
        Some(s)
    }
}

impl Zero for PerturbedScalar {
    fn zero() -> Self {
        PerturbedScalar { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PerturbedScalar {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl OrderedField for PerturbedScalar {
    fn from_rational(r: BigRational) -> Self {
        Self::constant(r)
    }

    fn scale(&self, r: &BigRational) -> Self {
        let mut s = PerturbedScalar { coeffs: self.coeffs.iter().map(|c| c * r).collect() };
        s.trim();
        s
    }

    fn to_rational(&self) -> Option<BigRational> {
        if self.degree() == 0 {
            Some(self.constant_term())
        } else {
            None
        }
    }
}

impl From<BigRational> for PerturbedScalar {
    fn from(r: BigRational) -> Self {
        Self::constant(r)
    }
}

/// Shorthand for building rationals in code and tests.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"`, `"p"` or a decimal-free integer into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Render a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
