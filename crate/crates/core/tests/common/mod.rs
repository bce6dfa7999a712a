//! Exact rational Dixon instances and the eliminant checks run on them.
#![allow(dead_code)]

pub mod corpus;
pub mod oracle;
pub mod props;

use flexlab::polysym::build::{build_F, ring_for};
use flexlab::GeometryKind;
use flexlab_algebra::{ratio, sylvester_resultant, MvPoly};
use num_rational::BigRational;

pub type V3 = [BigRational; 3];

fn q(n: i64, d: i64) -> BigRational {
    ratio(n, d)
}

fn v(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> V3 {
    [q(a.0, a.1), q(b.0, b.1), q(c.0, c.1)]
}

/// `|p q|^2` in the plane, `cosh |p q|` on the hyperboloid, `cos |p q|` on the sphere.
pub fn pairing(kind: GeometryKind, a: &V3, b: &V3) -> BigRational {
    match kind {
        GeometryKind::Euclidean => {
            let (dx, dy) = (&a[0] - &b[0], &a[1] - &b[1]);
            &dx * &dx + &dy * &dy
        }
        GeometryKind::Hyperbolic => &a[0] * &b[0] - &a[1] * &b[1] - &a[2] * &b[2],
        GeometryKind::Spherical => &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2],
    }
}

/// A (3, 3) framework with exact coordinates: plane points `(x, y, 0)`,
/// hyperboloid points `(w, x, y)` and unit vectors.
pub struct ExactInstance {
    pub name: &'static str,
    pub kind: GeometryKind,
    pub p: Vec<V3>,
    pub q: Vec<V3>,
}

/// Rational Dixon-1 and Dixon-2 instances in every geometry.
pub fn dixon_instances() -> Vec<ExactInstance> {
    use GeometryKind::*;
    let e = |x: i64, y: i64| v((x, 1), (y, 1), (0, 1));
    // Points on two orthogonal hyperbolic axes with Pythagorean (cosh, sinh).
    let hx = |c: (i64, i64), s: (i64, i64)| v(c, s, (0, 1));
    let hy = |c: (i64, i64), s: (i64, i64)| v(c, (0, 1), s);
    // Points on the equator and a meridian with Pythagorean (cos, sin).
    let sx = |c: (i64, i64), s: (i64, i64)| v(c, s, (0, 1));
    let sy = |c: (i64, i64), s: (i64, i64)| v(c, (0, 1), s);
    let signs = |a: &V3, k: usize| -> V3 {
        let (s1, s2) = [(1, 1), (1, -1), (-1, 1), (-1, -1)][k];
        [a[0].clone(), &a[1] * q(s1, 1), &a[2] * q(s2, 1)]
    };
    let orbit = |a: V3| (0..3).map(|k| signs(&a, k)).collect::<Vec<_>>();
    vec![
        ExactInstance {
            name: "euclidean dixon1",
            kind: Euclidean,
            p: vec![e(0, 1), e(0, 2), e(0, -3)],
            q: vec![e(1, 0), e(2, 0), e(-5, 0)],
        },
        ExactInstance {
            name: "euclidean dixon2",
            kind: Euclidean,
            p: vec![e(1, 2), e(-1, 2), e(1, -2)],
            q: vec![e(3, 4), e(-3, 4), e(3, -4)],
        },
        ExactInstance {
            name: "hyperbolic dixon1",
            kind: Hyperbolic,
            p: vec![hy((5, 4), (3, 4)), hy((5, 3), (4, 3)), hy((13, 5), (-12, 5))],
            q: vec![hx((17, 8), (15, 8)), hx((25, 7), (24, 7)), hx((41, 9), (-40, 9))],
        },
        ExactInstance {
            name: "hyperbolic dixon2",
            kind: Hyperbolic,
            p: orbit(v((3, 1), (2, 1), (2, 1))),
            q: orbit(v((9, 1), (8, 1), (4, 1))),
        },
        ExactInstance {
            name: "spherical dixon1",
            kind: Spherical,
            p: vec![sy((3, 5), (4, 5)), sy((5, 13), (12, 13)), sy((8, 17), (-15, 17))],
            q: vec![sx((7, 25), (24, 25)), sx((20, 29), (21, 29)), sx((9, 41), (-40, 41))],
        },
        ExactInstance {
            name: "spherical dixon2",
            kind: Spherical,
            p: orbit(v((1, 3), (2, 3), (2, 3))),
            q: orbit(v((2, 7), (3, 7), (6, 7))),
        },
    ]
}

/// The length symbols of the eliminant ring with their values on `inst`.
pub fn length_values(inst: &ExactInstance) -> Vec<(usize, BigRational)> {
    let ring = ring_for(inst.kind);
    let (big, small) = if inst.kind == GeometryKind::Euclidean { ("R", "r") } else { ("U", "u") };
    let pr = |i: usize, j: usize| pairing(inst.kind, &inst.p[i], &inst.q[j]);
    let mut out = vec![(ring.index(small).unwrap(), pr(0, 0))];
    for k in 1..3 {
        out.push((ring.index(&format!("{big}{k}")).unwrap(), pr(k, 0)));
        out.push((ring.index(&format!("{small}{k}")).unwrap(), pr(0, k)));
        for j in 1..3 {
            out.push((ring.index(&format!("{small}{k}{j}")).unwrap(), pr(k, j)));
        }
    }
    out.sort();
    out
}

/// `Res_{t_1}(F_1, F_2)` and `Res_{t_2}(F_1, F_2)` at formal degrees (4, 4),
/// evaluated on the lengths of `inst`.
pub fn eliminant_resultants(inst: &ExactInstance) -> (MvPoly, MvPoly) {
    let vals = length_values(inst);
    let f1 = build_F(inst.kind, 1).unwrap().eval_partial(&vals);
    let f2 = build_F(inst.kind, 2).unwrap().eval_partial(&vals);
    assert!(!f1.is_zero() && !f2.is_zero(), "{}: an eliminant vanishes identically", inst.name);
    (sylvester_resultant(&f1, &f2, "t1", (4, 4)).unwrap(), sylvester_resultant(&f1, &f2, "t2", (4, 4)).unwrap())
}

/// Outcome of the Dixon-1 factorization check in the plane.
#[derive(Debug)]
pub struct SquareFactor {
    /// `R_i - r` divides `F_i` after the substitution.
    pub divides: [bool; 2],
    /// The quotients are `+-` squares of polynomials.
    pub squares: [bool; 2],
    /// The two square roots agree up to a rational constant.
    pub common_root: bool,
}

/// Substitutes the Dixon-1 length pattern `r_ij = R_i + r_j - r` (squared
/// lengths) into `F_1`, `F_2` and tests `F_i = +-(R_i - r) G^2` for one `G`.
pub fn dixon1_square_factor() -> SquareFactor {
    let ring = ring_for(GeometryKind::Euclidean);
    let s = |n: &str| MvPoly::var(&ring, n).unwrap();
    let mut roots = Vec::new();
    let mut out = SquareFactor { divides: [false; 2], squares: [false; 2], common_root: false };
    for i in 1..3 {
        let mut f = build_F(GeometryKind::Euclidean, i).unwrap();
        for k in 1..3 {
            for j in 1..3 {
                let pattern = &(&s(&format!("R{k}")) + &s(&format!("r{j}"))) - &s("r");
                f = f.substitute(ring.index(&format!("r{k}{j}")).unwrap(), &pattern);
            }
        }
        let Ok(quot) = f.div_exact(&(&s(&format!("R{i}")) - &s("r"))) else { continue };
        out.divides[i - 1] = true;
        if let Some(g) = quot.sqrt_exact().or_else(|| (-&quot).sqrt_exact()) {
            out.squares[i - 1] = true;
            roots.push(g);
        }
    }
    if let [g1, g2] = roots.as_slice() {
        out.common_root = g1.rational_ratio(g2).is_some();
    }
    out
}
