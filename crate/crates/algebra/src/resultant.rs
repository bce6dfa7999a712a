//! Sylvester resultants and discriminants at declared (formal) degrees.
//!
//! The declared degrees fix the matrix size even when leading coefficients
//! vanish, so `Res` of a formally quadratic pair is always a 4x4 determinant.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::poly::{compose_generic, MvPoly, Ring};
use crate::{det_bareiss, det_expansion, AlgebraError, ExactRing};

/// Sylvester matrix of `p` (degree `dp`) and `q` (degree `dq`), coefficients
/// given lowest power first. The first `dq` rows carry `p`, the next `dp` rows `q`.
pub fn sylvester_matrix<R: ExactRing>(p: &[R], q: &[R], zero: &R) -> Vec<Vec<R>> {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let n = dp + dq;
    let mut m = vec![vec![zero.zero_like(); n]; n];
    for i in 0..dq {
        for (k, c) in p.iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..dp {
        for (k, c) in q.iter().rev().enumerate() {
            m[dq + i][i + k] = c.clone();
        }
    }
    m
}

/// How a Sylvester determinant is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetMethod {
    /// Division-free expansion over column subsets. Sylvester matrices are
    /// sparse and banded, so the intermediate minors stay small.
    #[default]
    Expansion,
    /// Fraction-free Gaussian elimination.
    Bareiss,
}

/// Resultant from coefficient lists (lowest power first); lengths set the formal degrees.
pub fn resultant_coeffs<R: ExactRing>(p: &[R], q: &[R], one: &R) -> Result<R, AlgebraError> {
    resultant_coeffs_with(p, q, one, DetMethod::default())
}

pub fn resultant_coeffs_with<R: ExactRing>(p: &[R], q: &[R], one: &R, method: DetMethod) -> Result<R, AlgebraError> {
    assert!(!p.is_empty() && !q.is_empty(), "coefficient lists must be nonempty");
    let m = sylvester_matrix(p, q, one);
    match method {
        DetMethod::Expansion => det_expansion(&m, one),
        DetMethod::Bareiss => det_bareiss(m, one),
    }
}

fn padded_coeffs(p: &MvPoly, var: usize, d: u32) -> Result<Vec<MvPoly>, AlgebraError> {
    let actual = p.degree_in(var).unwrap_or(0);
    if actual > d {
        return Err(AlgebraError::DegreeExceedsFormal { actual, formal: d });
    }
    let mut c = p.as_univariate(var);
    c.resize(d as usize + 1, MvPoly::zero(p.ring()));
    Ok(c)
}

/// `Res_var(p, q)` with the Sylvester matrix built at formal degrees `(dp, dq)`.
pub fn sylvester_resultant(p: &MvPoly, q: &MvPoly, var: &str, formal: (u32, u32)) -> Result<MvPoly, AlgebraError> {
    sylvester_resultant_with(p, q, var, formal, DetMethod::default())
}

pub fn sylvester_resultant_with(
    p: &MvPoly,
    q: &MvPoly,
    var: &str,
    formal: (u32, u32),
    method: DetMethod,
) -> Result<MvPoly, AlgebraError> {
    let v = p.ring().index(var)?;
    let pc = padded_coeffs(p, v, formal.0)?;
    let qc = padded_coeffs(q, v, formal.1)?;
    resultant_coeffs_with(&pc, &qc, &MvPoly::one(p.ring()), method)
}

/// Universal discriminant of `c_0 + c_1 x + ... + c_d x^d` in the symbols `c0..cd`:
/// `(-1)^(d(d-1)/2) Res(P, P') / c_d`.
fn universal_discriminant(d: u32) -> MvPoly {
    static CACHE: OnceLock<Mutex<HashMap<u32, MvPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache poisoned").get(&d) {
        return p.clone();
    }
    let names: Vec<String> = (0..=d).map(|i| format!("c{i}")).collect();
    let ring: Arc<Ring> = Ring::new(&names).expect("d is small");
    let c: Vec<MvPoly> = (0..=d as usize).map(|i| MvPoly::var_index(&ring, i)).collect();
    let deriv: Vec<MvPoly> = (1..=d as usize).map(|i| c[i].scale(&crate::rat(i as i64))).collect();
    let one = MvPoly::one(&ring);
    let res = resultant_coeffs(&c, &deriv, &one).expect("square by construction");
    let mut disc = res.div_exact(&c[d as usize]).expect("leading coefficient divides the resultant");
    if (d * (d.saturating_sub(1)) / 2) % 2 == 1 {
        disc = -disc;
    }
    cache.lock().expect("cache poisoned").insert(d, disc.clone());
    disc
}

/// Discriminant at formal degree `d`, from coefficients lowest power first.
pub fn discriminant_coeffs<R: ExactRing>(coeffs: &[R], one: &R) -> Result<R, AlgebraError> {
    assert!(coeffs.len() >= 2, "discriminant needs formal degree at least 1");
    let u = universal_discriminant(coeffs.len() as u32 - 1);
    compose_generic(&u, coeffs, one)
}

/// Formal-degree discriminant of `p` in `var`.
pub fn formal_discriminant(p: &MvPoly, var: &str, d: u32) -> Result<MvPoly, AlgebraError> {
    let v = p.ring().index(var)?;
    let c = padded_coeffs(p, v, d)?;
    discriminant_coeffs(&c, &MvPoly::one(p.ring()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{det_expansion, rat};

    fn t_ring() -> (Arc<Ring>, MvPoly, MvPoly) {
        let r = Ring::new(&["T"]).unwrap();
        let t = MvPoly::var(&r, "T").unwrap();
        (r.clone(), t, MvPoly::one(&r))
    }

    #[test]
    fn common_root_gives_zero() {
        let (_, t, one) = t_ring();
        let p = &(&t - &one) * &(&t - &one.scale(&rat(2)));
        let q = &(&t - &one) * &(&t - &one.scale(&rat(3)));
        assert!(sylvester_resultant(&p, &q, "T", (2, 2)).unwrap().is_zero());
    }

    #[test]
    fn square_versus_shifted_square() {
        let (_, t, one) = t_ring();
        let p = t.pow(2);
        let q = &t.pow(2) - &one;
        assert_eq!(sylvester_resultant(&p, &q, "T", (2, 2)).unwrap().as_constant(), Some(rat(1)));
    }

    #[test]
    fn formal_degree_changes_the_value() {
        let (_, t, one) = t_ring();
        let p = &t + &one;
        let q = &t.pow(2).scale(&rat(2)) + &one;
        let formal = sylvester_resultant(&p, &q, "T", (2, 2)).unwrap().as_constant().unwrap();
        let actual = sylvester_resultant(&p, &q, "T", (1, 2)).unwrap().as_constant().unwrap();
        assert_eq!(actual, rat(3));
        assert_eq!(formal, rat(6));
        assert_ne!(formal, actual);
        assert!(matches!(
            sylvester_resultant(&q, &p, "T", (1, 2)),
            Err(AlgebraError::DegreeExceedsFormal { actual: 2, formal: 1 })
        ));
    }

    #[test]
    fn quadratic_discriminant() {
        let r = Ring::new(&["T", "a", "b", "c"]).unwrap();
        let v = |n: &str| MvPoly::var(&r, n).unwrap();
        let p = &(&(&v("a") * &v("T").pow(2)) + &(&v("b") * &v("T"))) + &v("c");
        let d = formal_discriminant(&p, "T", 2).unwrap();
        let expect = &v("b").pow(2) - &(&v("a") * &v("c")).scale(&rat(4));
        assert_eq!(d, expect);
        let (_, t, one) = t_ring();
        let sq = &(&t.pow(2) + &t.scale(&rat(2))) + &one;
        assert!(formal_discriminant(&sq, "T", 2).unwrap().is_zero());
    }

    #[test]
    fn quartic_discriminant_matches_root_product() {
        // (T-1)(T-2)(T-3)(T-5): product of squared root differences.
        let (_, t, one) = t_ring();
        let roots = [1i64, 2, 3, 5];
        let p = roots.iter().fold(one.clone(), |acc, &r| &acc * &(&t - &one.scale(&rat(r))));
        let mut expect = 1i64;
        for i in 0..4 {
            for j in i + 1..4 {
                expect *= (roots[i] - roots[j]).pow(2);
            }
        }
        assert_eq!(formal_discriminant(&p, "T", 4).unwrap().as_constant(), Some(rat(expect)));
    }

    #[test]
    fn both_methods_give_the_same_resultant() {
        let r = Ring::new(&["x", "a", "b"]).unwrap();
        let v = |n: &str| MvPoly::var(&r, n).unwrap();
        let p = &(&v("x").pow(2) * &v("a")) + &(&v("b") - &v("x"));
        let q = &(&v("x").pow(2) * &v("b")) + &v("a").pow(3);
        let e = sylvester_resultant_with(&p, &q, "x", (2, 2), DetMethod::Expansion).unwrap();
        let b = sylvester_resultant_with(&p, &q, "x", (2, 2), DetMethod::Bareiss).unwrap();
        assert_eq!(e, b);
    }

    #[test]
    fn bareiss_and_expansion_agree_on_sylvester() {
        let r = Ring::new(&["x", "a"]).unwrap();
        let x = MvPoly::var(&r, "x").unwrap();
        let a = MvPoly::var(&r, "a").unwrap();
        let one = MvPoly::one(&r);
        let p = &(&x.pow(3) * &a) + &(&x - &one);
        let q = &(&x.pow(2) + &a.pow(2)) - &x.scale(&rat(7));
        let v = r.index("x").unwrap();
        let m = sylvester_matrix(&p.as_univariate(v), &q.as_univariate(v), &one);
        assert_eq!(det_bareiss(m.clone(), &one).unwrap(), det_expansion(&m, &one).unwrap());
    }
}
