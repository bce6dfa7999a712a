//! Packed exponent vectors.
//!
//! A monomial over at most [`MAX_VARS`] variables is stored in a single `u128`,
//! eight bits per variable with variable 0 in the most significant byte. The top
//! bit of every byte is a guard bit, so exponents are limited to
//! [`MAX_EXPONENT`] and overflow/underflow is detected with two masks. Comparing
//! the packed integers gives pure lexicographic order.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

pub const MAX_VARS: usize = 16;
pub const MAX_EXPONENT: u32 = 127;

const GUARD: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    #[inline]
    fn shift(var: usize) -> u32 {
        debug_assert!(var < MAX_VARS);
        (8 * (MAX_VARS - 1 - var)) as u32
    }

    pub fn var(var: usize, exp: u32) -> Option<Monomial> {
        if var >= MAX_VARS || exp > MAX_EXPONENT {
            return None;
        }
        Some(Monomial((exp as u128) << Self::shift(var)))
    }

    pub fn from_exponents(exps: &[u32]) -> Option<Monomial> {
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            m |= Monomial::var(i, e)?.0;
        }
        Some(Monomial(m))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & 0x7f) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exponent(i)).sum()
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Product of two monomials; `None` on exponent overflow.
    #[inline]
    pub fn mul(self, other: Monomial) -> Option<Monomial> {
        let s = self.0.wrapping_add(other.0);
        if s & GUARD != 0 {
            None
        } else {
            Some(Monomial(s))
        }
    }

    /// Quotient `self / other` when `other` divides `self`.
    #[inline]
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        let d = (self.0 | GUARD).wrapping_sub(other.0);
        if d & GUARD != GUARD {
            None
        } else {
            Some(Monomial(d & !GUARD))
        }
    }

    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Drops the exponent of `var`.
    pub fn without(self, var: usize) -> Monomial {
        Monomial(self.0 & !(0xffu128 << Self::shift(var)))
    }

    pub fn with_exponent(self, var: usize, exp: u32) -> Option<Monomial> {
        let base = self.without(var);
        Some(Monomial(base.0 | Monomial::var(var, exp)?.0))
    }
}

/// Hasher for packed monomials: a multiply-xorshift mix of the two halves.
#[derive(Default)]
pub struct MonomialHasher(u64);

impl Hasher for MonomialHasher {
    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 = (self.0.rotate_left(5) ^ u64::from(*b)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
    }

    fn write_u128(&mut self, x: u128) {
        let mut z = self.0 ^ (x as u64) ^ ((x >> 64) as u64).rotate_left(32);
        z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z ^= z >> 31;
        z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 29);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Hash map keyed by monomials.
pub type MonoMap<V> = HashMap<Monomial, V, BuildHasherDefault<MonomialHasher>>;

pub(crate) fn mono_map<V>(capacity: usize) -> MonoMap<V> {
    MonoMap::with_capacity_and_hasher(capacity, Default::default())
}
