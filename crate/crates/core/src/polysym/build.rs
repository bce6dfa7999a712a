//! The curves `f_ij(T_i, t_j) = 0` cut out by a single rod, and their
//! eliminants `F_i(t_1, t_2)`.
//!
//! Joint `p_i` moves on a circle about `q_0` parametrized by `T_i`, joint
//! `q_j` on a circle about `p_0` parametrized by `t_j`. In the Euclidean
//! plane `q_0 = 0`, `p_0 = r`, `p_i = -r T_i` and `q_j = r (1 - t_j)`, so
//! `|T_i| = R_i / r` and `|t_j| = r_j / r`. In the disk models `q_0 = 0`,
//! `p_0 = l` and `p_i = l T_i`, with `q_j` the image of `l t_j` under the
//! isometry taking `0` to `l`.
//!
//! Euclidean symbols stand for squared lengths: `r` is `|p_0 q_0|^2`, `R_i`
//! is `|q_0 p_i|^2`, `r_j` is `|p_0 q_j|^2` and `r_ij` is `|p_i q_j|^2`.
//! Hyperbolic and spherical symbols are the `cosh` or `cos` of the same
//! lengths: `u`, `U_i`, `u_j`, `u_ij`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use flexlab_algebra::{rat, ratfunc::substitute_poly, sylvester_resultant, MvPoly, RatFunc, Ring};

use crate::error::{FlexError, Result};
use crate::geometry::GeometryKind;

/// Variable names of the Euclidean ring, in ring order.
pub const EUCLID_VARS: [&str; 14] =
    ["T1", "T2", "t1", "t2", "r", "R1", "R2", "r1", "r2", "r11", "r12", "r21", "r22", "lam"];

/// Variable names of the hyperbolic and spherical ring, in ring order.
pub const CURVED_VARS: [&str; 14] =
    ["T1", "T2", "t1", "t2", "u", "U1", "U2", "u1", "u2", "u11", "u12", "u21", "u22", "lam"];

pub fn euclid_ring() -> Arc<Ring> {
    static R: OnceLock<Arc<Ring>> = OnceLock::new();
    R.get_or_init(|| Ring::new(&EUCLID_VARS).expect("fixed names")).clone()
}

pub fn curved_ring() -> Arc<Ring> {
    static R: OnceLock<Arc<Ring>> = OnceLock::new();
    R.get_or_init(|| Ring::new(&CURVED_VARS).expect("fixed names")).clone()
}

/// The ring that holds `f_ij` and `F_i` for `kind`.
pub fn ring_for(kind: GeometryKind) -> Arc<Ring> {
    match kind {
        GeometryKind::Euclidean => euclid_ring(),
        _ => curved_ring(),
    }
}

/// Shorthand for a ring variable known to exist.
pub fn sym(ring: &Arc<Ring>, name: &str) -> MvPoly {
    MvPoly::var(ring, name).unwrap_or_else(|_| panic!("variable {name} not in ring"))
}

fn check_indices(i: usize, j: usize) -> Result<()> {
    if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
        return Err(FlexError::Usage(format!("indices must be 1 or 2, got ({i}, {j})")));
    }
    Ok(())
}

/// Euclidean `f`: clear `T t` from `r (1 + T - t)(1 + Tb - tb) - r_ij`
/// after `Tb = R / (r T)` and `tb = r_j / (r t)`.
fn euclid_f_generic() -> MvPoly {
    let ring = Ring::new(&["T", "t", "Tb", "tb", "r", "R", "rj", "rij"]).expect("fixed names");
    let v = |n: &str| sym(&ring, n);
    let one = MvPoly::one(&ring);
    let g = &(&(&v("r") * &(&(&one + &v("T")) - &v("t"))) * &(&(&one + &v("Tb")) - &v("tb"))) - &v("rij");
    let tbar = RatFunc::new(v("R"), &v("r") * &v("T")).expect("nonzero");
    let sbar = RatFunc::new(v("rj"), &v("r") * &v("t")).expect("nonzero");
    let e = RatFunc::from_poly(g).substitute(2, &tbar).substitute(3, &sbar);
    e.numerator_with(&(&v("T") * &v("t"))).expect("the cleared expression is a polynomial")
}

/// Disk-model `f`: clear `4 (u + 1) T t` from `d(p_i, q_j) - u_ij`, where
/// `d` is `cosh` (sign `+1`) or `cos` (sign `-1`) of the distance and
/// `lam = l^2` etc. are then replaced by `sign (u - 1) / (u + 1)`.
fn curved_f_generic(sign: i64) -> MvPoly {
    let ring = Ring::new(&["T", "t", "Tb", "tb", "lam", "Lam", "lamj", "u", "U", "uj", "uij"]).expect("fixed names");
    let v = |n: &str| sym(&ring, n);
    let rf = |p: MvPoly| RatFunc::from_poly(p);
    let one = MvPoly::one(&ring);
    let s = rat(sign);
    // q_j(t) / l and its conjugate at tb.
    let qt = RatFunc::new(&one + &v("t"), &one + &(&v("lam") * &v("t")).scale(&s)).expect("nonzero");
    let qb = RatFunc::new(&one + &v("tb"), &one + &(&v("lam") * &v("tb")).scale(&s)).expect("nonzero");
    let num = rf(v("lam").scale(&rat(2 * sign))).mul(&rf(v("T")).sub(&qt)).mul(&rf(v("Tb")).sub(&qb));
    let den = rf(&one - &v("Lam").scale(&s)).mul(&rf(one.clone()).sub(&rf(v("lam").scale(&s)).mul(&qt).mul(&qb)));
    let d = rf(one.clone()).add(&num.div(&den).expect("nonzero"));
    let expr = d.sub(&rf(v("uij")));
    let tbar = RatFunc::new(v("Lam"), &v("lam") * &v("T")).expect("nonzero");
    let sbar = RatFunc::new(v("lamj"), &v("lam") * &v("t")).expect("nonzero");
    let mut e = expr.substitute(2, &tbar).substitute(3, &sbar);
    for (lam, u) in [(4, "u"), (5, "U"), (6, "uj")] {
        let radius2 = RatFunc::new((&v(u) - &one).scale(&s), &v(u) + &one).expect("nonzero");
        e = e.substitute(lam, &radius2);
    }
    let normalizer = &(&(&v("u") + &one).scale(&rat(4)) * &v("T")) * &v("t");
    e.numerator_with(&normalizer).expect("the cleared expression is a polynomial")
}

fn embed(generic: &MvPoly, kind: GeometryKind, i: usize, j: usize) -> MvPoly {
    let ring = ring_for(kind);
    let names: Vec<String> = match kind {
        GeometryKind::Euclidean => ["T", "t", "Tb", "tb", "r", "R", "rj", "rij"]
            .iter()
            .map(|n| match *n {
                "T" => format!("T{i}"),
                "t" => format!("t{j}"),
                "r" => "r".into(),
                "R" => format!("R{i}"),
                "rj" => format!("r{j}"),
                "rij" => format!("r{i}{j}"),
                _ => String::new(),
            })
            .collect(),
        _ => ["T", "t", "Tb", "tb", "lam", "Lam", "lamj", "u", "U", "uj", "uij"]
            .iter()
            .map(|n| match *n {
                "T" => format!("T{i}"),
                "t" => format!("t{j}"),
                "u" => "u".into(),
                "U" => format!("U{i}"),
                "uj" => format!("u{j}"),
                "uij" => format!("u{i}{j}"),
                _ => String::new(),
            })
            .collect(),
    };
    let values: Vec<MvPoly> =
        names.iter().map(|n| if n.is_empty() { MvPoly::zero(&ring) } else { sym(&ring, n) }).collect();
    generic.compose(&ring, &values).expect("arity matches")
}

fn cache() -> &'static Mutex<HashMap<(GeometryKind, usize, usize), MvPoly>> {
    static C: OnceLock<Mutex<HashMap<(GeometryKind, usize, usize), MvPoly>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: (GeometryKind, usize, usize), make: impl FnOnce() -> Result<MvPoly>) -> Result<MvPoly> {
    if let Some(p) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(p.clone());
    }
    let p = make()?;
    cache().lock().expect("cache poisoned").insert(key, p.clone());
    Ok(p)
}

/// `f_ij(T_i, t_j)`, bidegree (2, 2).
pub fn build_f(kind: GeometryKind, i: usize, j: usize) -> Result<MvPoly> {
    check_indices(i, j)?;
    cached((kind, i, j), || {
        let generic = match kind {
            GeometryKind::Euclidean => euclid_f_generic(),
            GeometryKind::Hyperbolic => curved_f_generic(1),
            GeometryKind::Spherical => curved_f_generic(-1),
        };
        Ok(embed(&generic, kind, i, j))
    })
}

/// The constant that `Res_{T_i}(f_i1, f_i2)` is divided by.
pub fn normalizer(kind: GeometryKind, i: usize) -> MvPoly {
    let ring = ring_for(kind);
    match kind {
        GeometryKind::Euclidean => sym(&ring, &format!("R{i}")),
        _ => {
            let one = MvPoly::one(&ring);
            let u = sym(&ring, "u");
            let ui = sym(&ring, &format!("U{i}"));
            &(&u + &one).pow(4).scale(&rat(16)) * &(&one - &ui.pow(2))
        }
    }
}

/// `Res_{T_i}(f_i1, f_i2)` at formal degrees (2, 2), before normalization.
pub fn raw_resultant(kind: GeometryKind, i: usize) -> Result<MvPoly> {
    check_indices(i, 1)?;
    let f1 = build_f(kind, i, 1)?;
    let f2 = build_f(kind, i, 2)?;
    Ok(sylvester_resultant(&f1, &f2, &format!("T{i}"), (2, 2))?)
}

/// `F_i(t_1, t_2)`: the normalized resultant. A non-exact division is an
/// identity violation.
#[allow(non_snake_case)]
pub fn build_F(kind: GeometryKind, i: usize) -> Result<MvPoly> {
    check_indices(i, 1)?;
    cached((kind, i, 0), || {
        let res = raw_resultant(kind, i)?;
        res.div_exact(&normalizer(kind, i))
            .map_err(|_| FlexError::Identity(format!("normalizer does not divide Res_T{i}(f_{i}1, f_{i}2)")))
    })
}

/// Substitutes a rational function for one variable and clears the given
/// denominator power; used for the specializations of `F_i`.
pub fn specialize(p: &MvPoly, var: &str, value: &RatFunc) -> Result<RatFunc> {
    let v = p.ring().index(var)?;
    Ok(substitute_poly(p, v, value))
}
