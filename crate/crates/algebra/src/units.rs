//! Equality up to units: rational constants times products of `(u ± 1)^(±1)`.
//!
//! Both sides are stripped of every allowed factor by exact division; what
//! remains must agree up to a rational constant. Exponent differences give
//! the certificate.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{MvPoly, Ring};
use crate::sqrt_ext::ExtElem;
use crate::AlgebraError;

/// Allowed unit factors plus the exponent bound.
#[derive(Clone, Debug)]
pub struct UnitEquivalence {
    factors: Vec<(String, MvPoly)>,
    bound: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitStatus {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

/// `p * mu_den = n * q * mu_num`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitCertificate {
    pub n: BigRational,
    pub mu_num: BTreeMap<String, u32>,
    pub mu_den: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitVerdict {
    pub status: UnitStatus,
    pub certificate: Option<UnitCertificate>,
}

impl UnitVerdict {
    pub fn holds(&self) -> bool {
        self.status == UnitStatus::Equivalent
    }
}

impl UnitEquivalence {
    /// Factors `(v - 1)` and `(v + 1)` for every named variable of `ring`.
    pub fn for_vars(ring: &Arc<Ring>, vars: &[&str], bound: u32) -> Result<UnitEquivalence, AlgebraError> {
        let mut factors = Vec::new();
        let one = MvPoly::one(ring);
        for v in vars {
            let x = MvPoly::var(ring, v)?;
            factors.push((format!("({v}-1)"), &x - &one));
            factors.push((format!("({v}+1)"), &x + &one));
        }
        Ok(UnitEquivalence { factors, bound })
    }

    pub fn with_factors(factors: Vec<(String, MvPoly)>, bound: u32) -> UnitEquivalence {
        UnitEquivalence { factors, bound }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn factors(&self) -> &[(String, MvPoly)] {
        &self.factors
    }

    /// Strips every allowed factor; returns the residue and per-factor counts.
    fn strip(&self, comps: &[MvPoly]) -> (Vec<MvPoly>, Vec<u32>) {
        let limit = 4 * self.bound + 64;
        let mut cur: Vec<MvPoly> = comps.to_vec();
        let mut counts = Vec::with_capacity(self.factors.len());
        for (_, f) in &self.factors {
            let mut k = 0;
            while k < limit {
                let next: Result<Vec<MvPoly>, _> =
                    cur.iter().map(|c| if c.is_zero() { Ok(c.clone()) } else { c.div_exact(f) }).collect();
                match next {
                    Ok(n) => {
                        cur = n;
                        k += 1;
                    }
                    Err(_) => break,
                }
            }
            counts.push(k);
        }
        (cur, counts)
    }

    fn decide(&self, p: &[MvPoly], q: &[MvPoly]) -> UnitVerdict {
        let not = UnitVerdict { status: UnitStatus::NotEquivalent, certificate: None };
        if p.len() != q.len() || p.iter().all(|c| c.is_zero()) || q.iter().all(|c| c.is_zero()) {
            return not;
        }
        let (pr, pc) = self.strip(p);
        let (qr, qc) = self.strip(q);
        let mut n: Option<BigRational> = None;
        for (a, b) in pr.iter().zip(&qr) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (false, false) => {}
                _ => return not,
            }
            let r = match a.rational_ratio(b) {
                Some(r) => r,
                None => return not,
            };
            if let Some(prev) = &n {
                if *prev != r {
                    return not;
                }
            } else {
                n = Some(r);
            }
        }
        let n = match n {
            Some(n) if !n.is_zero() => n,
            _ => return not,
        };
        let mut mu_num = BTreeMap::new();
        let mut mu_den = BTreeMap::new();
        let mut within = true;
        for ((name, _), (a, b)) in self.factors.iter().zip(pc.iter().zip(&qc)) {
            let e = *a as i64 - *b as i64;
            if e.unsigned_abs() > self.bound as u64 {
                within = false;
            }
            if e > 0 {
                mu_num.insert(name.clone(), e as u32);
            } else if e < 0 {
                mu_den.insert(name.clone(), (-e) as u32);
            }
        }
        UnitVerdict {
            status: if within { UnitStatus::Equivalent } else { UnitStatus::Inconclusive },
            certificate: Some(UnitCertificate { n, mu_num, mu_den }),
        }
    }

    /// Decides `p ≐ q` for base polynomials.
    pub fn check(&self, p: &MvPoly, q: &MvPoly) -> UnitVerdict {
        self.decide(std::slice::from_ref(p), std::slice::from_ref(q))
    }

    /// Decides `p ≐ q` in a square-root extension (units live in the base ring).
    pub fn check_ext(&self, p: &ExtElem, q: &ExtElem) -> UnitVerdict {
        self.decide(p.components(), q.components())
    }
}

impl UnitCertificate {
    /// Human-readable `n * num / den`.
    pub fn describe(&self) -> String {
        let fmt = |m: &BTreeMap<String, u32>| {
            if m.is_empty() {
                "1".to_string()
            } else {
                m.iter()
                    .map(|(k, e)| if *e == 1 { k.clone() } else { format!("{k}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*")
            }
        };
        format!("n = {}, mu_num = {}, mu_den = {}", self.n, fmt(&self.mu_num), fmt(&self.mu_den))
    }
}
