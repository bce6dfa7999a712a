use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::detect_cda;
use crate::error::{FlexError, Result};
use crate::framework::{overlap_status, rod_lengths, FlipRecord, Framework};
use crate::geometry::{from_model, GeometryKind, Model, Point};
use crate::DEFAULT_TOL;

fn invalid(msg: impl Into<String>) -> FlexError {
    FlexError::Generation(format!("invalid parameters: {}", msg.into()))
}

fn check_clean(fw: &Framework) -> Result<()> {
    if overlap_status(fw, DEFAULT_TOL).is_clean() {
        Ok(())
    } else {
        Err(invalid("coincident or antipodal joints"))
    }
}

fn distinct(vals: &[f64], what: &str, period: Option<f64>) -> Result<()> {
    for (i, a) in vals.iter().enumerate() {
        if !a.is_finite() || a.abs() <= DEFAULT_TOL {
            return Err(invalid(format!("{what}[{i}] = {a} must be finite and nonzero")));
        }
        for b in &vals[i + 1..] {
            let gap = (a - b).abs();
            let clash = match period {
                Some(p) => gap <= DEFAULT_TOL || (gap - p / 2.0).abs() <= DEFAULT_TOL,
                None => gap <= DEFAULT_TOL,
            };
            if clash {
                return Err(invalid(format!("{what} has coincident (or antipodal) values {a} and {b}")));
            }
        }
    }
    Ok(())
}

/// A Dixon-1 mechanism: `q_j` at coordinate `xs[j]` on one geodesic and `p_i`
/// at `ys[i]` on an orthogonal geodesic, both measured from their meeting
/// point. The geodesics are the coordinate axes in the plane and in the
/// disk; on the sphere they are the equator and the meridian through
/// `(1, 0, 0)` and the north pole.
pub fn generate_dixon1(kind: GeometryKind, xs: &[f64], ys: &[f64]) -> Result<Framework> {
    if xs.is_empty() || ys.is_empty() {
        return Err(invalid("both parts need joints"));
    }
    let sphere = kind == GeometryKind::Spherical;
    let period = sphere.then_some(2.0 * std::f64::consts::PI);
    distinct(xs, "xs", period)?;
    distinct(ys, "ys", period)?;
    if sphere && xs.iter().chain(ys).any(|v| v.abs() >= std::f64::consts::PI) {
        return Err(invalid("spherical coordinates must lie in (-pi, pi)"));
    }
    let make = |x: f64, y: f64| -> Result<Point> {
        match kind {
            GeometryKind::Euclidean => Ok(Point::euclid(x, y)),
            GeometryKind::Hyperbolic => from_model(Model::Lobachevsky, &[x, y]),
            GeometryKind::Spherical => {
                if y == 0.0 {
                    Point::sphere(x.cos(), x.sin(), 0.0)
                } else {
                    Point::sphere(y.cos(), 0.0, y.sin())
                }
            }
        }
    };
    let q = xs.iter().map(|&x| make(x, 0.0)).collect::<Result<Vec<_>>>()?;
    let p = ys.iter().map(|&y| make(0.0, y)).collect::<Result<Vec<_>>>()?;
    let fw = Framework::new(kind, p, q).map_err(|e| invalid(e.to_string()))?;
    check_clean(&fw)?;
    Ok(fw)
}

/// Member `k` (1..=4) of the orbit `{z, conj z, -conj z, -z}` of `anchor`
/// under the reflections in the two coordinate axes (coordinate planes
/// `y = 0` and `x = 0` on the sphere).
pub fn orbit_point(anchor: &Point, k: usize) -> Result<Point> {
    let (sx, sy) = match k {
        1 => (1.0, 1.0),
        2 => (1.0, -1.0),
        3 => (-1.0, 1.0),
        4 => (-1.0, -1.0),
        _ => return Err(invalid(format!("orbit index {k} is not in 1..=4"))),
    };
    let c = anchor.coords();
    let mut v = c.to_vec();
    v[0] *= sx;
    v[1] *= sy;
    Point::new(anchor.kind(), &v)
}

fn selection(sel: &[usize], what: &str) -> Result<()> {
    if !(3..=4).contains(&sel.len()) {
        return Err(invalid(format!("{what} must select 3 or 4 orbit points")));
    }
    for (i, a) in sel.iter().enumerate() {
        if !(1..=4).contains(a) || sel[i + 1..].contains(a) {
            return Err(invalid(format!("{what} must hold distinct indices in 1..=4")));
        }
    }
    Ok(())
}

/// A Dixon-2 mechanism: each part is a selection from the orbit of its
/// anchor under the two axis reflections, see [`orbit_point`]. On the sphere
/// `flips` replaces chosen joints by their antipodes.
pub fn generate_dixon2(
    kind: GeometryKind,
    p_anchor: &Point,
    q_anchor: &Point,
    p_sel: &[usize],
    q_sel: &[usize],
    flips: Option<&FlipRecord>,
) -> Result<Framework> {
    selection(p_sel, "the P selection")?;
    selection(q_sel, "the Q selection")?;
    for (name, a) in [("P", p_anchor), ("Q", q_anchor)] {
        if a.kind() != kind {
            return Err(invalid(format!("the {name} anchor is not a {kind} point")));
        }
        let c = a.coords();
        let degenerate = c[0].abs() <= DEFAULT_TOL
            || c[1].abs() <= DEFAULT_TOL
            || (kind == GeometryKind::Spherical && c[2].abs() <= DEFAULT_TOL);
        if degenerate {
            return Err(invalid(format!("the {name} anchor lies on a symmetry axis")));
        }
    }
    let p = p_sel.iter().map(|&k| orbit_point(p_anchor, k)).collect::<Result<Vec<_>>>()?;
    let q = q_sel.iter().map(|&k| orbit_point(q_anchor, k)).collect::<Result<Vec<_>>>()?;
    let mut fw = Framework::new(kind, p, q).map_err(|e| invalid(e.to_string()))?;
    if let Some(f) = flips {
        if kind != GeometryKind::Spherical {
            return Err(FlexError::Usage("antipodal flips exist on the sphere only".into()));
        }
        fw = f.apply(&fw)?;
    }
    check_clean(&fw)?;
    Ok(fw)
}

/// `u = <p, q>` for `p = cos a A + sin a B` and `q = (0, cos b, sin b)`,
/// with its two partial derivatives.
fn cda_u(c: f64, a: f64, b: f64) -> (f64, f64, f64) {
    let (sa, ca, sb, cb) = (a.sin(), a.cos(), b.sin(), b.cos());
    (c * ca * sb + sa * cb, -c * sa * sb + ca * cb, c * ca * cb - sa * sb)
}

/// Residuals `u_11 - u_21`, `u_21 - u_22`, `u_22 + u_12` and their Jacobian
/// in `(alpha_2, beta_1, beta_2)`.
fn cda_system(c: f64, a1: f64, v: &Vector3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let (a2, b1, b2) = (v[0], v[1], v[2]);
    let (u11, _, u11b) = cda_u(c, a1, b1);
    let (u12, _, u12b) = cda_u(c, a1, b2);
    let (u21, u21a, u21b) = cda_u(c, a2, b1);
    let (u22, u22a, u22b) = cda_u(c, a2, b2);
    let f = Vector3::new(u11 - u21, u21 - u22, u22 + u12);
    let j = Matrix3::new(
        -u21a,
        u11b - u21b,
        0.0, //
        u21a - u22a,
        u21b,
        -u22b, //
        u22a,
        0.0,
        u22b + u12b,
    );
    (f, j)
}

fn newton(c: f64, a1: f64, mut v: Vector3<f64>) -> Option<Vector3<f64>> {
    let norm = |f: &Vector3<f64>| f.amax();
    let (mut f, mut j) = cda_system(c, a1, &v);
    for _ in 0..200 {
        if norm(&f) < 1e-15 {
            return Some(v);
        }
        let dv = j.lu().solve(&(-f))?;
        let mut lambda = 1.0;
        loop {
            let trial = v + dv * lambda;
            let (ft, jt) = cda_system(c, a1, &trial);
            if norm(&ft) < norm(&f) {
                v = trial;
                f = ft;
                j = jt;
                break;
            }
            lambda /= 2.0;
            if lambda < 1e-6 {
                return (norm(&f) < 1e-13).then_some(v);
            }
        }
    }
    (norm(&f) < 1e-13).then_some(v)
}

/// A spherical (3,3) framework with the CDA sign pattern.
///
/// `p_0 = (1, 0, 0)`, `q_0 = (cos theta, 0, sin theta)`, `p_1, p_2` on the
/// great circle orthogonal to `q_0` (with `p_1` at angle `phi1`), and
/// `q_1, q_2` on the great circle `x = 0`. The remaining three angles solve
/// `u_11 = u_21 = u_22 = -u_12` by damped Newton iteration from a start
/// drawn from `seed`; a failed or degenerate solve is reported so the caller
/// can retry with another seed.
pub fn generate_cda(theta: f64, phi1: f64, seed: f64) -> Result<Framework> {
    let (c, s) = (theta.cos(), theta.sin());
    if c.abs() <= 1e-6 {
        return Err(FlexError::Generation("theta = pi/2 makes <p_0, q_0> vanish and the pattern collapses".into()));
    }
    if s.abs() <= 1e-6 {
        return Err(FlexError::Generation("theta = 0 or pi puts q_0 on +-p_0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.to_bits());
    let pi = std::f64::consts::PI;
    let start = Vector3::new(rng.gen_range(-pi..pi), rng.gen_range(-pi..pi), rng.gen_range(-pi..pi));
    let v = newton(c, phi1, start)
        .ok_or_else(|| FlexError::Generation(format!("Newton iteration failed for seed {seed}")))?;
    let a = Vector3::new(-s, 0.0, c);
    let b = Vector3::new(0.0, 1.0, 0.0);
    let pk = |ang: f64| Point::from_lift(GeometryKind::Spherical, &(a * ang.cos() + b * ang.sin()));
    let qk = |ang: f64| Point::sphere(0.0, ang.cos(), ang.sin());
    let p = vec![Point::sphere(1.0, 0.0, 0.0)?, pk(phi1)?, pk(v[0])?];
    let q = vec![Point::sphere(c, 0.0, s)?, qk(v[1])?, qk(v[2])?];
    let fw = Framework::new(GeometryKind::Spherical, p, q)
        .map_err(|e| FlexError::Generation(format!("degenerate solution for seed {seed}: {e}")))?;
    if !overlap_status(&fw, 1e-6).is_clean() {
        return Err(FlexError::Generation(format!("solution for seed {seed} overlaps in the projective plane")));
    }
    let l = rod_lengths(&fw);
    let u = |i, j| l.u(i, j).expect("spherical");
    let resid = [u(0, 1), u(0, 2), u(1, 0), u(2, 0), u(1, 1) - u(2, 1), u(2, 1) - u(2, 2), u(2, 2) + u(1, 2)]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if resid >= 1e-10 {
        return Err(FlexError::Generation(format!("residual {resid} after solving for seed {seed}")));
    }
    if u(1, 1).abs() <= 1e-6 {
        return Err(FlexError::Generation(format!("solution for seed {seed} has a vanishing diagonal product")));
    }
    if detect_cda(&fw, DEFAULT_TOL)?.is_none() {
        return Err(FlexError::Generation(format!("solution for seed {seed} fails the CDA pattern")));
    }
    Ok(fw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;

    #[test]
    fn dixon1_layouts() {
        let fw = generate_dixon1(GeometryKind::Euclidean, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(fw.q()[2], Point::euclid(3.0, 0.0));
        assert_eq!(fw.p()[1], Point::euclid(0.0, 2.0));
        let h = generate_dixon1(GeometryKind::Hyperbolic, &[0.5, 1.0], &[0.3, -0.8]).unwrap();
        let l = rod_lengths(&h);
        assert!((l.u(1, 0).unwrap() - 0.8f64.cosh() * 0.5f64.cosh()).abs() < 1e-12);
        let s = generate_dixon1(GeometryKind::Spherical, &[0.5, 2.0], &[0.3, -0.8]).unwrap();
        let l = rod_lengths(&s);
        assert!((l.u(0, 1).unwrap() - 0.3f64.cos() * 2.0f64.cos()).abs() < 1e-12);
        assert!(generate_dixon1(GeometryKind::Euclidean, &[1.0, 1.0], &[2.0]).is_err());
        assert!(generate_dixon1(GeometryKind::Euclidean, &[0.0, 1.0], &[2.0]).is_err());
        assert!(generate_dixon1(GeometryKind::Spherical, &[0.5, 0.5 - std::f64::consts::PI], &[1.0]).is_err());
    }

    #[test]
    fn dixon2_orbits() {
        let fw = generate_dixon2(
            GeometryKind::Euclidean,
            &Point::euclid(1.0, 2.0),
            &Point::euclid(3.0, 4.0),
            &[1, 3, 2],
            &[1, 3, 2],
            None,
        )
        .unwrap();
        assert_eq!(fw.p()[1], Point::euclid(-1.0, 2.0));
        assert_eq!(fw.p()[2], Point::euclid(1.0, -2.0));
        let z = Point::disk(0.3, 0.4).unwrap();
        let orbit: Vec<Point> = (1..=4).map(|k| orbit_point(&z, k).unwrap()).collect();
        assert_eq!(orbit[1], Point::disk(0.3, -0.4).unwrap());
        assert_eq!(orbit[2], Point::disk(-0.3, 0.4).unwrap());
        assert_eq!(orbit[3], Point::disk(-0.3, -0.4).unwrap());
        let bad = generate_dixon2(
            GeometryKind::Euclidean,
            &Point::euclid(0.0, 2.0),
            &Point::euclid(3.0, 4.0),
            &[1, 2, 3],
            &[1, 2, 3],
            None,
        );
        assert!(matches!(bad, Err(FlexError::Generation(_))));
        let s = |x, y, z| Point::sphere(x, y, z).unwrap();
        let flips = FlipRecord { p: vec![false, true, false], q: vec![false, false, true] };
        let once = generate_dixon2(
            GeometryKind::Spherical,
            &s(0.3, 0.4, 0.8),
            &s(0.6, 0.2, 0.5),
            &[1, 2, 3],
            &[1, 2, 4],
            Some(&flips),
        )
        .unwrap();
        let twice = flips.apply(&once).unwrap();
        let plain = generate_dixon2(
            GeometryKind::Spherical,
            &s(0.3, 0.4, 0.8),
            &s(0.6, 0.2, 0.5),
            &[1, 2, 3],
            &[1, 2, 4],
            None,
        )
        .unwrap();
        assert_eq!(twice, plain);
    }

    #[test]
    fn cda_generation() {
        let mut made = 0;
        for seed in 0..20 {
            if let Ok(fw) = generate_cda(0.7, 0.4, seed as f64) {
                assert_eq!(fw.p()[0], Point::sphere(1.0, 0.0, 0.0).unwrap());
                made += 1;
            }
        }
        assert!(made > 0);
        assert!(matches!(generate_cda(std::f64::consts::FRAC_PI_2, 0.4, 1.0), Err(FlexError::Generation(_))));
    }

    #[test]
    fn cda_perturbation_breaks_the_pattern() {
        let fw = (0..50).find_map(|seed| generate_cda(0.9, 1.1, seed as f64).ok()).unwrap();
        let mut q = fw.q().to_vec();
        q[2] = crate::geometry::nudge(&q[2], &[1e-3, 0.0, 0.0]).unwrap();
        assert!(dist(&q[2], &fw.q()[2]) > 5e-4);
        let moved = Framework::new(GeometryKind::Spherical, fw.p().to_vec(), q).unwrap();
        assert!(detect_cda(&moved, DEFAULT_TOL).unwrap().is_none());
    }
}
