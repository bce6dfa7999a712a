//! Sparse multivariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::monomial::{mono_map, MonoMap, Monomial, MAX_VARS};
use crate::AlgebraError;

/// An ordered list of variable names. Polynomials only combine when they share a ring.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Ring>, AlgebraError> {
        if names.len() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables(names.len()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(AlgebraError::DuplicateVariable(a.clone()));
            }
        }
        Ok(Arc::new(Ring { names }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Terms are kept sorted by decreasing monomial (lex with variable 0 highest).
#[derive(Clone)]
pub struct MvPoly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, BigRational)>,
}

impl PartialEq for MvPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring) && self.terms == other.terms
    }
}

impl Eq for MvPoly {}

impl MvPoly {
    pub fn zero(ring: &Arc<Ring>) -> MvPoly {
        MvPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> MvPoly {
        MvPoly::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: BigRational) -> MvPoly {
        let mut p = MvPoly::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn int(ring: &Arc<Ring>, c: i64) -> MvPoly {
        MvPoly::constant(ring, rat(c))
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<MvPoly, AlgebraError> {
        let i = ring.index(name)?;
        Ok(MvPoly::var_index(ring, i))
    }

    pub fn var_index(ring: &Arc<Ring>, i: usize) -> MvPoly {
        assert!(i < ring.nvars(), "variable index out of range");
        MvPoly { ring: ring.clone(), terms: vec![(Monomial::var(i, 1).expect("index checked"), BigRational::one())] }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Result<MvPoly, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut acc: MonoMap<BigRational> = mono_map(0);
        for (exps, c) in terms {
            if exps.len() > ring.nvars() {
                return Err(AlgebraError::TooManyVariables(exps.len()));
            }
            let m = Monomial::from_exponents(&exps).ok_or(AlgebraError::ExponentOverflow)?;
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Ok(MvPoly::from_map(ring, acc))
    }

    fn from_map(ring: &Arc<Ring>, acc: MonoMap<BigRational>) -> MvPoly {
        let mut terms: Vec<(Monomial, BigRational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MvPoly { ring: ring.clone(), terms }
    }

    fn from_int_map(ring: &Arc<Ring>, acc: MonoMap<BigInt>) -> MvPoly {
        let mut terms: Vec<(Monomial, BigRational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, BigRational::from_integer(c))).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MvPoly { ring: ring.clone(), terms }
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value when the polynomial has no variables in it.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    fn check_ring(&self, other: &MvPoly) {
        assert!(Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring, "polynomials from different rings");
    }

    fn merge(&self, other: &MvPoly, negate: bool) -> MvPoly {
        self.check_ring(other);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 > b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 > a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let (x, y) = (&a[i].1, &b[j].1);
                let c = if x.is_integer() && y.is_integer() {
                    let (x, y) = (x.numer(), y.numer());
                    BigRational::from_integer(if negate { x - y } else { x + y })
                } else if negate {
                    x - y
                } else {
                    x + y
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        MvPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn try_mul(&self, other: &MvPoly) -> Result<MvPoly, AlgebraError> {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Ok(MvPoly::zero(&self.ring));
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m0, c0) = &small.terms[0];
            let mut terms = Vec::with_capacity(big.len());
            for (m, c) in &big.terms {
                terms.push((m.mul(*m0).ok_or(AlgebraError::ExponentOverflow)?, c * c0));
            }
            return Ok(MvPoly { ring: self.ring.clone(), terms });
        }
        if small.is_integral() && big.is_integral() {
            return Ok(MvPoly::from_int_map(&self.ring, mul_integral(&small.terms, &big.terms)?));
        }
        let mut acc: MonoMap<BigRational> = mono_map(small.len() * big.len() / 2 + 1);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ma.mul(*mb).ok_or(AlgebraError::ExponentOverflow)?;
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Ok(MvPoly::from_map(&self.ring, acc))
    }

    pub fn scale(&self, c: &BigRational) -> MvPoly {
        if c.is_zero() {
            return MvPoly::zero(&self.ring);
        }
        MvPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> MvPoly {
        let mut base = self.clone();
        let mut acc = MvPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.terms.iter().any(|(m, _)| m.exponent(v) > 0)).collect()
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coeff(&self, var: usize, k: u32) -> MvPoly {
        let mut terms: Vec<(Monomial, BigRational)> =
            self.terms.iter().filter(|(m, _)| m.exponent(var) == k).map(|(m, c)| (m.without(var), c.clone())).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MvPoly { ring: self.ring.clone(), terms }
    }

    /// Coefficient of the monomial given by `(var, exponent)` pairs.
    pub fn coefficient_of(&self, pattern: &[(usize, u32)]) -> MvPoly {
        let mut terms: Vec<(Monomial, BigRational)> = self
            .terms
            .iter()
            .filter(|(m, _)| pattern.iter().all(|&(v, e)| m.exponent(v) == e))
            .map(|(m, c)| (pattern.iter().fold(*m, |acc, &(v, _)| acc.without(v)), c.clone()))
            .collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MvPoly { ring: self.ring.clone(), terms }
    }

    /// Coefficients in `var`, lowest power first.
    pub fn as_univariate(&self, var: usize) -> Vec<MvPoly> {
        let d = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return vec![],
        };
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(var) as usize].push((m.without(var), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
                MvPoly { ring: self.ring.clone(), terms: t }
            })
            .collect()
    }

    /// Evaluates at a full rational point, one value per ring variable.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, AlgebraError> {
        if point.len() != self.ring.nvars() {
            return Err(AlgebraError::ArityMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        let nv = self.ring.nvars();
        let mut cache: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]; nv];
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, pw) in cache.iter_mut().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = pw.last().expect("nonempty") * &point[v];
                    pw.push(next);
                }
                t *= &pw[e];
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes rational values for some variables, keeping the ring.
    pub fn eval_partial(&self, values: &[(usize, BigRational)]) -> MvPoly {
        let mut acc: MonoMap<BigRational> = mono_map(0);
        for (m, c) in &self.terms {
            let mut mm = *m;
            let mut cc = c.clone();
            for (v, x) in values {
                let e = m.exponent(*v);
                if e > 0 {
                    cc *= num_traits::pow(x.clone(), e as usize);
                    mm = mm.without(*v);
                }
            }
            if cc.is_zero() {
                continue;
            }
            *acc.entry(mm).or_insert_with(BigRational::zero) += cc;
        }
        MvPoly::from_map(&self.ring, acc)
    }

    /// Replaces `var` by a polynomial of the same ring.
    pub fn substitute(&self, var: usize, value: &MvPoly) -> MvPoly {
        self.check_ring(value);
        let coeffs = self.as_univariate(var);
        let mut acc = MvPoly::zero(&self.ring);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Maps every variable `i` of this ring to `values[i]`, which live in `target`.
    pub fn compose(&self, target: &Arc<Ring>, values: &[MvPoly]) -> Result<MvPoly, AlgebraError> {
        if values.len() != self.ring.nvars() {
            return Err(AlgebraError::ArityMismatch { expected: self.ring.nvars(), got: values.len() });
        }
        let one = MvPoly::one(target);
        compose_generic(self, values, &one)
    }

    /// Re-expresses the polynomial in a ring that contains all of its variables by name.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<MvPoly, AlgebraError> {
        let map: Vec<usize> = self
            .ring
            .names()
            .iter()
            .enumerate()
            .map(
                |(i, n)| {
                    if self.terms.iter().all(|(m, _)| m.exponent(i) == 0) {
                        Ok(usize::MAX)
                    } else {
                        target.index(n)
                    }
                },
            )
            .collect::<Result<_, _>>()?;
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (i, &j) in map.iter().enumerate() {
                if j != usize::MAX {
                    exps[j] = m.exponent(i);
                }
            }
            terms.push((exps, c.clone()));
        }
        MvPoly::from_terms(target, terms)
    }

    /// Exact division; fails unless `divisor` divides `self` with zero remainder.
    pub fn div_exact(&self, divisor: &MvPoly) -> Result<MvPoly, AlgebraError> {
        self.check_ring(divisor);
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(MvPoly::zero(&self.ring));
        }
        if let Some(c) = divisor.as_constant() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = lc.recip();
        if divisor.len() == 1 {
            let mut terms = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let q = m.div(lm).ok_or(AlgebraError::NotExact)?;
                terms.push((q, c * &lc_inv));
            }
            return Ok(MvPoly { ring: self.ring.clone(), terms });
        }
        if self.is_integral() && divisor.is_integral() {
            let a: Vec<(Monomial, BigInt)> = self.terms.iter().map(|(m, c)| (*m, c.numer().clone())).collect();
            let b: Vec<(Monomial, BigInt)> = divisor.terms.iter().map(|(m, c)| (*m, c.numer().clone())).collect();
            let lc_int = lc.numer().clone();
            let exact_int = |c: &BigInt| {
                use num_integer::Integer;
                let (q, r) = c.div_rem(&lc_int);
                if r.is_zero() {
                    Some(q)
                } else {
                    None
                }
            };
            match divide_loop(a, &b, exact_int) {
                Ok(q) => {
                    let terms = q.into_iter().map(|(m, c)| (m, BigRational::from_integer(c))).collect();
                    return Ok(MvPoly { ring: self.ring.clone(), terms });
                }
                Err(AlgebraError::NotExact) => {}
                Err(e) => return Err(e),
            }
        }
        let quot = divide_loop(self.terms.clone(), &divisor.terms, |c: &BigRational| Some(c * &lc_inv))
            .map_err(|e| if e == AlgebraError::DivisionByZero { AlgebraError::NotExact } else { e })?;
        Ok(MvPoly { ring: self.ring.clone(), terms: quot })
    }

    /// Divides out `divisor` as often as it goes; returns the quotient and the count.
    pub fn strip_factor(&self, divisor: &MvPoly, limit: u32) -> (MvPoly, u32) {
        let mut cur = self.clone();
        let mut k = 0;
        while k < limit && !cur.is_zero() {
            match cur.div_exact(divisor) {
                Ok(q) => {
                    cur = q;
                    k += 1;
                }
                Err(_) => break,
            }
        }
        (cur, k)
    }

    /// Rational multiple `n` with `self = n * other`, if any.
    pub fn rational_ratio(&self, other: &MvPoly) -> Option<BigRational> {
        self.check_ring(other);
        if self.len() != other.len() || self.is_zero() {
            return None;
        }
        let n = &self.terms[0].1 / &other.terms[0].1;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            if ma != mb || *ca != cb * &n {
                return None;
            }
        }
        Some(n)
    }

    /// `g` with `g^2 = self`, if `self` is the square of a polynomial with
    /// rational coefficients. The returned root has a positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<MvPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = &self.terms[0];
        let half = Monomial::from_exponents(
            &(0..self.ring.nvars())
                .map(|v| {
                    let e = lm.exponent(v);
                    if e % 2 == 0 {
                        Some(e / 2)
                    } else {
                        None
                    }
                })
                .collect::<Option<Vec<u32>>>()?,
        )?;
        let c = rational_sqrt(lc)?;
        let mut root = MvPoly { ring: self.ring.clone(), terms: vec![(half, c.clone())] };
        let twice_lead = (half, &c * BigRational::from_integer(2.into()));
        for _ in 0..=self.len() {
            let rem = self - &(&root * &root);
            let (rm, rc) = match rem.terms.first() {
                None => return Some(root),
                Some(t) => t.clone(),
            };
            let qm = rm.div(twice_lead.0)?;
            if qm >= root.terms.last().expect("nonempty").0 {
                return None;
            }
            root.terms.push((qm, rc / &twice_lead.1));
        }
        None
    }

    /// Polynomial with integer coprime coefficients and positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, MvPoly) {
        use num_integer::Integer;
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den / c.denom());
            g = g.gcd(&v);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let content = BigRational::new(g, den);
        (content.clone(), self.scale(&content.recip()))
    }
}

/// Leading-term cancellation. The remainder lives in a hash map; a max-heap of
/// monomials (with stale entries skipped) yields its current leading term.
/// `div_lc` returns `None` when a coefficient is not divisible by the leading one.
fn divide_loop<C, F>(
    dividend: Vec<(Monomial, C)>,
    divisor: &[(Monomial, C)],
    div_lc: F,
) -> Result<Vec<(Monomial, C)>, AlgebraError>
where
    C: Clone + Zero + for<'a> std::ops::SubAssign<&'a C> + Neg<Output = C>,
    for<'a> &'a C: Mul<&'a C, Output = C>,
    F: Fn(&C) -> Option<C>,
{
    use std::collections::BinaryHeap;
    let lm = divisor[0].0;
    let mut heap: BinaryHeap<Monomial> = dividend.iter().map(|(m, _)| *m).collect();
    let mut rem: MonoMap<C> = dividend.into_iter().collect();
    let mut quot: Vec<(Monomial, C)> = Vec::new();
    while let Some(m) = heap.pop() {
        let c = match rem.remove(&m) {
            Some(c) if !c.is_zero() => c,
            _ => continue,
        };
        while heap.peek() == Some(&m) {
            heap.pop();
        }
        let qm = m.div(lm).ok_or(AlgebraError::NotExact)?;
        let qc = div_lc(&c).ok_or(AlgebraError::NotExact)?;
        for (dm, dc) in divisor.iter().skip(1) {
            let key = dm.mul(qm).ok_or(AlgebraError::ExponentOverflow)?;
            let delta = dc * &qc;
            match rem.get_mut(&key) {
                Some(v) => *v -= &delta,
                None => {
                    rem.insert(key, -delta);
                    heap.push(key);
                }
            }
        }
        quot.push((qm, qc));
    }
    Ok(quot)
}

/// Product with `i128` accumulation when every partial sum provably fits.
fn mul_small(
    a: &[(Monomial, BigRational)],
    b: &[(Monomial, BigRational)],
) -> Option<Result<MonoMap<BigInt>, AlgebraError>> {
    let small = |t: &[(Monomial, BigRational)]| -> Option<(Vec<(Monomial, i128)>, u64)> {
        let mut bits = 0;
        let v = t
            .iter()
            .map(|(m, c)| {
                bits = bits.max(c.numer().bits());
                c.numer().to_i128().map(|x| (*m, x))
            })
            .collect::<Option<Vec<_>>>()?;
        Some((v, bits))
    };
    let (sa, ba) = small(a)?;
    let (sb, bb) = small(b)?;
    let count_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    if ba + bb + count_bits > 126 {
        return None;
    }
    let mut acc: MonoMap<i128> = mono_map(a.len() * b.len() / 2 + 1);
    for (ma, ca) in &sa {
        for (mb, cb) in &sb {
            let Some(m) = ma.mul(*mb) else {
                return Some(Err(AlgebraError::ExponentOverflow));
            };
            *acc.entry(m).or_insert(0) += ca * cb;
        }
    }
    Some(Ok(acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m, BigInt::from(c))).collect()))
}

fn mul_integral(a: &[(Monomial, BigRational)], b: &[(Monomial, BigRational)]) -> Result<MonoMap<BigInt>, AlgebraError> {
    if let Some(r) = mul_small(a, b) {
        return r;
    }
    let bi: Vec<(Monomial, &BigInt)> = b.iter().map(|(m, c)| (*m, c.numer())).collect();
    let mut acc: MonoMap<BigInt> = mono_map(a.len() * b.len() / 2 + 1);
    for (ma, ca) in a {
        let ca = ca.numer();
        for (mb, cb) in &bi {
            let m = ma.mul(*mb).ok_or(AlgebraError::ExponentOverflow)?;
            let prod = ca * *cb;
            match acc.get_mut(&m) {
                Some(c) => *c += prod,
                None => {
                    acc.insert(m, prod);
                }
            }
        }
    }
    Ok(acc)
}

/// Evaluates `p` with variable `i` replaced by `values[i]` in any exact ring.
pub fn compose_generic<R: crate::ExactRing>(p: &MvPoly, values: &[R], one: &R) -> Result<R, AlgebraError> {
    if values.len() != p.ring.nvars() {
        return Err(AlgebraError::ArityMismatch { expected: p.ring.nvars(), got: values.len() });
    }
    let mut cache: Vec<Vec<R>> = vec![vec![one.clone()]; values.len()];
    let mut total = one.zero_like();
    for (m, c) in &p.terms {
        let mut t = one.from_rational(c);
        for (v, pw) in cache.iter_mut().enumerate() {
            let e = m.exponent(v) as usize;
            if e == 0 {
                continue;
            }
            while pw.len() <= e {
                let next = pw.last().expect("nonempty").mul(&values[v]);
                pw.push(next);
            }
            t = t.mul(&pw[e]);
        }
        total = total.add(&t);
    }
    Ok(total)
}

impl<'a> Add<&'a MvPoly> for &'a MvPoly {
    type Output = MvPoly;
    fn add(self, rhs: &MvPoly) -> MvPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a MvPoly> for &'a MvPoly {
    type Output = MvPoly;
    fn sub(self, rhs: &MvPoly) -> MvPoly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a MvPoly> for &'a MvPoly {
    type Output = MvPoly;
    fn mul(self, rhs: &MvPoly) -> MvPoly {
        self.try_mul(rhs).expect("exponent overflow in polynomial product")
    }
}

impl Neg for &MvPoly {
    type Output = MvPoly;
    fn neg(self) -> MvPoly {
        MvPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<MvPoly> for MvPoly {
            type Output = MvPoly;
            fn $f(self, rhs: MvPoly) -> MvPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MvPoly> for MvPoly {
            type Output = MvPoly;
            fn $f(self, rhs: &MvPoly) -> MvPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<MvPoly> for &'a MvPoly {
            type Output = MvPoly;
            fn $f(self, rhs: MvPoly) -> MvPoly {
                self.$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MvPoly {
    type Output = MvPoly;
    fn neg(self) -> MvPoly {
        -&self
    }
}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (v, name) in self.ring.names().iter().enumerate() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
