//! Exact integer polynomials and matrices.
//!
//! Polynomials are dense with ascending coefficients: `coeffs[i]` is the
//! coefficient of `x^i`. Nothing in this module rounds; every value is an
//! arbitrary-precision integer or a reduced rational.

mod matrix;
mod sturm;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use matrix::IntMatrix;
pub(crate) use matrix::k_subsets;
pub use sturm::{count_positive_real_roots, is_positive, RationalScalar};

/// Dense univariate polynomial with integer coefficients.
///
/// The zero polynomial has an empty coefficient vector; every other value
/// has a nonzero last coefficient.
/// Ordered by the ascending coefficient vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![BigInt::one()])
    }

    /// `x - root`.
    pub fn linear(root: BigInt) -> Self {
        Self::new(vec![-root, BigInt::one()])
    }

    pub fn monomial(coeff: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeffs)
    }

    /// Ascending coefficients.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Descending coefficients, leading term first (`[1, 0, 0, -1, 1]` is `x^4 - x + 1`).
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_descending_big(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().rev().cloned().collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficients from the leading term down to the constant term.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Monic with constant term `(-1)^n`.
    pub fn is_doubly_monic(&self) -> bool {
        match self.degree() {
            Some(n) if self.is_monic() => self.coeffs[0] == sign_power(n),
            _ => false,
        }
    }

    pub fn require_monic(&self) -> Result<usize> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(n) if self.is_monic() => Ok(n),
            Some(_) => Err(Error::NotMonic(self.leading().unwrap().to_string())),
        }
    }

    pub fn require_doubly_monic(&self) -> Result<usize> {
        let n = self.require_monic()?;
        if self.coeffs[0] != sign_power(n) {
            return Err(Error::NotDoublyMonic {
                found: self.coeffs[0].to_string(),
                expected: if n % 2 == 0 { 1 } else { -1 },
            });
        }
        Ok(n)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `f(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let d = divisor.require_monic()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..d].iter().enumerate() {
                rem[i - d + j] -= &c * dc;
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Companion matrix: ones on the superdiagonal, last row `(-c_0, ..., -c_{n-1})`.
    pub fn companion(&self) -> Result<IntMatrix> {
        let n = self.require_monic()?;
        if n == 0 {
            return Err(Error::DegreeOutOfRange { degree: 0, min: 1, max: usize::MAX });
        }
        let mut m = IntMatrix::zero(n);
        for i in 0..n - 1 {
            m.set(i, i + 1, BigInt::one());
        }
        for j in 0..n {
            m.set(n - 1, j, -&self.coeffs[j]);
        }
        Ok(m)
    }

    /// Characteristic polynomial of the `k`-th exterior power of the companion matrix.
    pub fn exterior_power(&self, k: usize) -> Result<IntPoly> {
        let n = self.require_monic()?;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { k, max: n });
        }
        if k == 1 {
            return Ok(self.clone());
        }
        Ok(self.companion()?.exterior_power(k)?.char_poly())
    }

    /// Signed reciprocal `(-1)^n x^n f(1/x)`.
    pub fn signed_reciprocal(&self) -> Result<IntPoly> {
        let n = self.require_doubly_monic()?;
        let sign = sign_power(n);
        Ok(IntPoly::new(self.coeffs.iter().rev().map(|c| c * &sign).collect()))
    }
}

/// `(-1)^n` as a big integer.
pub(crate) fn sign_power(n: usize) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

impl std::ops::Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl std::ops::Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
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
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
