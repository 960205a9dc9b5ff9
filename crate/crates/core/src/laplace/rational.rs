use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::LaplaceError;

/// `numerator / denominator` with a monic denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl TryFrom<RationalRepr> for RationalFunction {
    type Error = LaplaceError;

    fn try_from(r: RationalRepr) -> Result<Self, LaplaceError> {
        RationalFunction::new(Polynomial::new(r.num), Polynomial::new(r.den))
    }
}

impl From<RationalFunction> for RationalRepr {
    fn from(f: RationalFunction) -> Self {
        RationalRepr { num: f.num.into(), den: f.den.into() }
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, LaplaceError> {
        if den.is_zero() {
            return Err(LaplaceError::ZeroDenominator);
        }
        let lead = den.leading();
        Ok(RationalFunction { num: num.scale(1.0 / lead), den: den.scale(1.0 / lead) })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::constant(1.0) }
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_strictly_proper(&self) -> bool {
        match self.num.degree() {
            None => true,
            Some(d) => d < self.den.degree().unwrap_or(0),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.num.eval(p) / self.den.eval(p)
    }

    pub fn scale(&self, k: f64) -> RationalFunction {
        RationalFunction { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFunction {
        RationalFunction { num: &self.num * p, den: self.den.clone() }
    }

    /// Drops numerator coefficients at or above the denominator degree when they are
    /// negligible relative to the numerator; fails if a genuine polynomial part remains.
    pub fn into_strictly_proper(self, tol: f64) -> Result<RationalFunction, LaplaceError> {
        if self.is_strictly_proper() {
            return Ok(self);
        }
        let dd = self.den.degree().unwrap_or(0);
        let scale = self.num.norm_inf();
        let excess = self.num.coeffs()[dd..].iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        if excess <= tol * scale {
            let kept = self.num.coeffs()[..dd.min(self.num.coeffs().len())].to_vec();
            return Ok(RationalFunction { num: Polynomial::new(kept), den: self.den });
        }
        Err(LaplaceError::Improper {
            numerator_degree: self.num.degree().unwrap_or(0),
            denominator_degree: dd,
        })
    }

    /// Largest coefficient gap between `self` and `other` after bringing both to the same
    /// (monic) denominator degree, relative to the largest coefficient involved.
    pub fn relative_coefficient_gap(&self, other: &RationalFunction) -> f64 {
        let scale = self
            .num
            .norm_inf()
            .max(self.den.norm_inf())
            .max(other.num.norm_inf())
            .max(other.den.norm_inf())
            .max(f64::MIN_POSITIVE);
        let gap = |a: &Polynomial, b: &Polynomial| (a - b).norm_inf();
        gap(&self.num, &other.num).max(gap(&self.den, &other.den)) / scale
    }

    /// `self - other` has a numerator that vanishes up to `tol` relative to its terms.
    pub fn cross_equal(&self, other: &RationalFunction, tol: f64) -> bool {
        let left = &self.num * &other.den;
        let right = &other.num * &self.den;
        let scale = left.norm_inf().max(right.norm_inf()).max(f64::MIN_POSITIVE);
        (&left - &right).norm_inf() <= tol * scale
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
