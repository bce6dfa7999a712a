//! Exact computer algebra for linkage identities: sparse rational polynomials,
//! rational functions, quadratic extensions, fraction-free determinants and
//! formal-degree resultants.

#![allow(clippy::should_implement_trait, clippy::wrong_self_convention)]

pub mod det;
pub mod monomial;
pub mod poly;
pub mod ratfunc;
pub mod resultant;
pub mod sqrt_ext;
pub mod units;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use det::{det_bareiss, det_expansion};
pub use monomial::Monomial;
pub use poly::{rat, ratio, MvPoly, Ring};
pub use ratfunc::RatFunc;
pub use resultant::{
    discriminant_coeffs, formal_discriminant, resultant_coeffs, resultant_coeffs_with, sylvester_matrix,
    sylvester_resultant, sylvester_resultant_with, DetMethod,
};
pub use sqrt_ext::{ExtElem, SqrtExt};
pub use units::{UnitCertificate, UnitEquivalence, UnitStatus, UnitVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("at most 16 variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent overflow (limit 127 per variable)")]
    ExponentOverflow,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    NotExact,
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("actual degree {actual} exceeds formal degree {formal}")]
    DegreeExceedsFormal { actual: u32, formal: u32 },
    #[error("matrix is not square")]
    NotSquare,
}

/// A commutative ring with exact division, enough for fraction-free elimination.
pub trait ExactRing: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational(&self, q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError>;
    /// Rough cost measure used to pick small pivots.
    fn size(&self) -> usize {
        1
    }
}

impl ExactRing for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        rat(1)
    }
    fn from_rational(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        if Zero::is_zero(divisor) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self / divisor)
    }
}

impl ExactRing for MvPoly {
    fn zero_like(&self) -> Self {
        MvPoly::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        MvPoly::one(self.ring())
    }
    fn from_rational(&self, q: &BigRational) -> Self {
        MvPoly::constant(self.ring(), q.clone())
    }
    fn is_zero(&self) -> bool {
        MvPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        MvPoly::div_exact(self, divisor)
    }
    fn size(&self) -> usize {
        self.len()
    }
}
