//! Univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::json_rat_vec;

/// Polynomial `Σ cᵢ xⁱ`, coefficients stored from the constant term up with
/// no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundPolynomial {
    #[serde(with = "json_rat_vec")]
    coefficients: Vec<BigRational>,
}

impl BoundPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        BoundPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        BoundPolynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        BoundPolynomial::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn identity() -> Self {
        BoundPolynomial::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        BoundPolynomial::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Coefficient of `xⁱ` (zero beyond the degree).
    pub fn coefficient(&self, i: usize) -> BigRational {
        self.coefficients
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coefficients
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    /// `p(c·x)`.
    pub fn scale_argument(&self, c: &BigRational) -> BoundPolynomial {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.coefficients.len());
        for a in &self.coefficients {
            out.push(a * &pow);
            pow *= c;
        }
        BoundPolynomial::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> BoundPolynomial {
        BoundPolynomial::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> BoundPolynomial {
        (0..e).fold(BoundPolynomial::constant(BigRational::one()), |acc, _| {
            &acc * self
        })
    }

    /// `x(x+1)…` style products: `Π (x + rᵢ)`.
    pub fn from_linear_factors(shifts: &[BigRational]) -> BoundPolynomial {
        shifts
            .iter()
            .fold(BoundPolynomial::constant(BigRational::one()), |acc, r| {
                &acc * &BoundPolynomial::new(vec![r.clone(), BigRational::one()])
            })
    }
}

impl fmt::Display for BoundPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &BoundPolynomial {
    type Output = BoundPolynomial;
    fn add(self, rhs: &BoundPolynomial) -> BoundPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        BoundPolynomial::new(
            (0..n)
                .map(|i| self.coefficient(i) + rhs.coefficient(i))
                .collect(),
        )
    }
}

impl Sub for &BoundPolynomial {
    type Output = BoundPolynomial;
    fn sub(self, rhs: &BoundPolynomial) -> BoundPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &BoundPolynomial {
    type Output = BoundPolynomial;
    fn neg(self) -> BoundPolynomial {
        BoundPolynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Mul for &BoundPolynomial {
    type Output = BoundPolynomial;
    fn mul(self, rhs: &BoundPolynomial) -> BoundPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return BoundPolynomial::zero();
        }
        let mut out =
            vec![BigRational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BoundPolynomial::new(out)
    }
}

impl Pow<u32> for &BoundPolynomial {
    type Output = BoundPolynomial;
    fn pow(self, e: u32) -> BoundPolynomial {
        BoundPolynomial::pow(self, e)
    }
}
