//! Multi-quadratic extensions `base[s_1, ..., s_k] / (s_i^2 - radicand_i)`.
//!
//! An element is a vector of base polynomials indexed by subsets (bit masks)
//! of the adjoined symbols, so every stored element is reduced.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::poly::{MvPoly, Ring};
use crate::{AlgebraError, ExactRing};

#[derive(Debug)]
pub struct SqrtExt {
    base: Arc<Ring>,
    names: Vec<String>,
    radicands: Vec<MvPoly>,
    mask_products: Vec<MvPoly>,
}

impl SqrtExt {
    /// Adjoins one square root per `(name, radicand)` pair.
    pub fn new(base: &Arc<Ring>, symbols: Vec<(String, MvPoly)>) -> Arc<SqrtExt> {
        assert!(symbols.len() <= 8, "too many adjoined square roots");
        let k = symbols.len();
        let (names, radicands): (Vec<String>, Vec<MvPoly>) = symbols.into_iter().unzip();
        let mut mask_products = Vec::with_capacity(1 << k);
        for mask in 0usize..(1 << k) {
            let mut p = MvPoly::one(base);
            for (i, r) in radicands.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = &p * r;
                }
            }
            mask_products.push(p);
        }
        Arc::new(SqrtExt { base: base.clone(), names, radicands, mask_products })
    }

    pub fn base(&self) -> &Arc<Ring> {
        &self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn radicand(&self, i: usize) -> &MvPoly {
        &self.radicands[i]
    }

    pub fn degree(&self) -> usize {
        self.names.len()
    }

    fn width(&self) -> usize {
        1 << self.names.len()
    }
}

#[derive(Clone)]
pub struct ExtElem {
    ext: Arc<SqrtExt>,
    comps: Vec<MvPoly>,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.comps == other.comps
    }
}

impl ExtElem {
    pub fn zero(ext: &Arc<SqrtExt>) -> ExtElem {
        ExtElem { ext: ext.clone(), comps: vec![MvPoly::zero(&ext.base); ext.width()] }
    }

    pub fn from_base(ext: &Arc<SqrtExt>, p: MvPoly) -> ExtElem {
        let mut e = ExtElem::zero(ext);
        e.comps[0] = p;
        e
    }

    /// The adjoined square root with index `i`.
    pub fn symbol(ext: &Arc<SqrtExt>, i: usize) -> ExtElem {
        let mut e = ExtElem::zero(ext);
        e.comps[1 << i] = MvPoly::one(&ext.base);
        e
    }

    /// The monomial `prod_{i in mask} s_i` times `p`.
    pub fn with_component(ext: &Arc<SqrtExt>, mask: usize, p: MvPoly) -> ExtElem {
        let mut e = ExtElem::zero(ext);
        e.comps[mask] = p;
        e
    }

    pub fn ext(&self) -> &Arc<SqrtExt> {
        &self.ext
    }

    pub fn components(&self) -> &[MvPoly] {
        &self.comps
    }

    pub fn component(&self, mask: usize) -> &MvPoly {
        &self.comps[mask]
    }

    /// Total number of monomials across components.
    pub fn len(&self) -> usize {
        self.comps.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn in_base(&self) -> Option<&MvPoly> {
        if self.comps[1..].iter().all(|c| c.is_zero()) {
            Some(&self.comps[0])
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> ExtElem {
        ExtElem { ext: self.ext.clone(), comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_base(&self, p: &MvPoly) -> ExtElem {
        ExtElem { ext: self.ext.clone(), comps: self.comps.iter().map(|c| c * p).collect() }
    }

    pub fn pow(&self, mut e: u32) -> ExtElem {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = ExactRing::mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = ExactRing::mul(&base, &base);
            }
        }
        acc
    }

    /// Applies `s_i -> -s_i` for every `i` in `mask`.
    pub fn conjugate(&self, mask: usize) -> ExtElem {
        ExtElem {
            ext: self.ext.clone(),
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(s, c)| if (s & mask).count_ones() % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Distinct conjugates other than `self`, and the norm (their product with
    /// `self`), which lies in the base ring.
    fn orbit(&self) -> (Vec<ExtElem>, MvPoly) {
        let mut orbit: Vec<ExtElem> = vec![self.clone()];
        for g in 1..self.ext.width() {
            let c = self.conjugate(g);
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        let others: Vec<ExtElem> = orbit[1..].to_vec();
        let norm = orbit.iter().skip(1).fold(self.clone(), |acc, c| ExactRing::mul(&acc, c));
        let n = norm.in_base().cloned().expect("orbit product is invariant under all conjugations");
        (others, n)
    }

    pub fn norm(&self) -> MvPoly {
        self.orbit().1
    }

    /// Numeric value given the base variables and the chosen square-root values.
    pub fn eval_f64(&self, point: &[f64], roots: &[f64]) -> f64 {
        let mut total = 0.0;
        for (mask, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut v = eval_poly_f64(c, point);
            for (i, r) in roots.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    v *= r;
                }
            }
            total += v;
        }
        total
    }
}

fn eval_poly_f64(p: &MvPoly, point: &[f64]) -> f64 {
    use num_traits::ToPrimitive;
    let nv = p.ring().nvars();
    p.terms()
        .iter()
        .map(|(m, c)| {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (i, x) in point.iter().enumerate().take(nv) {
                let e = m.exponent(i);
                if e > 0 {
                    v *= x.powi(e as i32);
                }
            }
            v
        })
        .sum()
}

impl ExactRing for ExtElem {
    fn zero_like(&self) -> Self {
        ExtElem::zero(&self.ext)
    }
    fn one_like(&self) -> Self {
        ExtElem::from_base(&self.ext, MvPoly::one(&self.ext.base))
    }
    fn from_rational(&self, q: &BigRational) -> Self {
        ExtElem::from_base(&self.ext, MvPoly::constant(&self.ext.base, q.clone()))
    }
    fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        ExtElem { ext: self.ext.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        ExtElem { ext: self.ext.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = ExtElem::zero(&self.ext);
        for (s, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in o.comps.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut prod = a * b;
                let shared = s & t;
                if shared != 0 {
                    prod = &prod * &self.ext.mask_products[shared];
                }
                out.comps[s ^ t] = &out.comps[s ^ t] + &prod;
            }
        }
        out
    }
    fn neg(&self) -> Self {
        ExtElem { ext: self.ext.clone(), comps: self.comps.iter().map(|c| -c).collect() }
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn div_exact(&self, d: &Self) -> Result<Self, AlgebraError> {
        if let Some(b) = d.in_base() {
            if b.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            let comps = self.comps.iter().map(|c| c.div_exact(b)).collect::<Result<Vec<_>, _>>()?;
            return Ok(ExtElem { ext: self.ext.clone(), comps });
        }
        let (others, norm) = d.orbit();
        if norm.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let scaled = others.iter().fold(self.clone(), |acc, c| ExactRing::mul(&acc, c));
        let comps = scaled.comps.iter().map(|c| c.div_exact(&norm)).collect::<Result<Vec<_>, _>>()?;
        Ok(ExtElem { ext: self.ext.clone(), comps })
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let syms: Vec<&str> = (0..self.ext.names.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.ext.names[i].as_str())
                .collect();
            if syms.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", syms.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
