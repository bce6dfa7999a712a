//! Quotients of polynomials, used to substitute rational expressions and then
//! recover a polynomial numerator.
//!
//! No gcd is taken; numerators are extracted by exact division with a known
//! normalizer.

use std::sync::Arc;

use num_rational::BigRational;

use crate::poly::{MvPoly, Ring};
use crate::AlgebraError;

#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: MvPoly,
    pub den: MvPoly,
}

impl RatFunc {
    pub fn new(num: MvPoly, den: MvPoly) -> Result<RatFunc, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MvPoly) -> RatFunc {
        let den = MvPoly::one(p.ring());
        RatFunc { num: p, den }
    }

    pub fn constant(ring: &Arc<Ring>, c: BigRational) -> RatFunc {
        RatFunc::from_poly(MvPoly::constant(ring, c))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den.clone() };
        }
        RatFunc { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, AlgebraError> {
        if o.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Replaces `var` by a rational function.
    pub fn substitute(&self, var: usize, value: &RatFunc) -> RatFunc {
        let a = substitute_poly(&self.num, var, value);
        let b = substitute_poly(&self.den, var, value);
        RatFunc { num: &a.num * &b.den, den: &a.den * &b.num }
    }

    /// Returns `num * normalizer / den`, failing unless that is a polynomial.
    pub fn numerator_with(&self, normalizer: &MvPoly) -> Result<MvPoly, AlgebraError> {
        (&self.num * normalizer).div_exact(&self.den)
    }

    /// Exact polynomial value when the denominator divides the numerator.
    pub fn to_poly(&self) -> Result<MvPoly, AlgebraError> {
        self.num.div_exact(&self.den)
    }
}

/// `p(var = N/D)` written over the single denominator `D^deg`.
pub fn substitute_poly(p: &MvPoly, var: usize, value: &RatFunc) -> RatFunc {
    let coeffs = p.as_univariate(var);
    if coeffs.is_empty() {
        return RatFunc::from_poly(MvPoly::zero(p.ring()));
    }
    let k = coeffs.len() - 1;
    let mut num_pows = vec![MvPoly::one(p.ring())];
    let mut den_pows = vec![MvPoly::one(p.ring())];
    for _ in 0..k {
        num_pows.push(num_pows.last().expect("nonempty") * &value.num);
        den_pows.push(den_pows.last().expect("nonempty") * &value.den);
    }
    let mut num = MvPoly::zero(p.ring());
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        num = &num + &(&(c * &num_pows[j]) * &den_pows[k - j]);
    }
    RatFunc { num, den: den_pows[k].clone() }
}
