use nalgebra::Vector3;

use crate::classifier::{detect_dixon1, Witness};
use crate::error::{FlexError, Result};
use crate::framework::Framework;
use crate::geometry::{minkowski, Geodesic, GeometryKind, Point};
use crate::DEFAULT_TOL;

/// Arc-length coordinate along one geodesic, measured from its meeting
/// point `o` with the other geodesic in the direction `t`.
struct Axis {
    kind: GeometryKind,
    o: Vector3<f64>,
    t: Vector3<f64>,
}

fn flip_time(v: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(-v[0], v[1], v[2])
}

impl Axis {
    fn coordinate(&self, x: &Point) -> f64 {
        let v = x.lift();
        match self.kind {
            GeometryKind::Euclidean => (v - self.o).dot(&self.t),
            GeometryKind::Hyperbolic => minkowski(&v, &self.t).asinh(),
            GeometryKind::Spherical => v.dot(&self.t).atan2(v.dot(&self.o)),
        }
    }

    fn point(&self, s: f64) -> Result<Point> {
        let v = match self.kind {
            GeometryKind::Euclidean => self.o + self.t * s,
            GeometryKind::Hyperbolic => self.o * s.cosh() + self.t * s.sinh(),
            GeometryKind::Spherical => self.o * s.cos() + self.t * s.sin(),
        };
        Point::from_lift(self.kind, &v)
    }
}

/// The two axes through the meeting point of orthogonal geodesics.
fn axes(kind: GeometryKind, gp: &Geodesic, gq: &Geodesic) -> Result<(Axis, Axis)> {
    let (np, nq) = (gp.normal(), gq.normal());
    match kind {
        GeometryKind::Euclidean => {
            // Lines a x + b y = c are stored as (a, b, -c).
            let det = np[0] * nq[1] - np[1] * nq[0];
            let (cp, cq) = (-np[2], -nq[2]);
            let o = Vector3::new((cp * nq[1] - cq * np[1]) / det, (np[0] * cq - nq[0] * cp) / det, 1.0);
            let dir = |n: &Vector3<f64>| Vector3::new(-n[1], n[0], 0.0);
            Ok((Axis { kind, o, t: dir(&np) }, Axis { kind, o, t: dir(&nq) }))
        }
        GeometryKind::Hyperbolic => {
            let mut o = flip_time(&np).cross(&flip_time(&nq));
            let q = -minkowski(&o, &o);
            if !(q > 0.0) {
                return Err(FlexError::NoIntersection);
            }
            o /= q.sqrt() * o[0].signum();
            let dir = |n: &Vector3<f64>| {
                let t = flip_time(&o).cross(&flip_time(n));
                t / minkowski(&t, &t).sqrt()
            };
            Ok((Axis { kind, o, t: dir(&np) }, Axis { kind, o, t: dir(&nq) }))
        }
        GeometryKind::Spherical => {
            let o = np.cross(&nq).normalize();
            Ok((Axis { kind, o, t: np.cross(&o) }, Axis { kind, o, t: nq.cross(&o) }))
        }
    }
}

/// Coordinates of the joints along their geodesics: `(ys for P, xs for Q)`.
fn dixon1_coordinates(fw: &Framework) -> Result<(Axis, Axis, Vec<f64>, Vec<f64>)> {
    let Some(Witness::Dixon1 { p_geodesic, q_geodesic }) = detect_dixon1(fw, DEFAULT_TOL)? else {
        return Err(FlexError::Precondition("the closed-form motion needs a Dixon-1 framework".into()));
    };
    let (ap, aq) = axes(fw.kind(), &p_geodesic, &q_geodesic)?;
    let ys: Vec<f64> = fw.p().iter().map(|x| ap.coordinate(x)).collect();
    let xs: Vec<f64> = fw.q().iter().map(|x| aq.coordinate(x)).collect();
    if ys.iter().chain(&xs).any(|c| c.abs() <= DEFAULT_TOL) {
        return Err(FlexError::Precondition("a joint sits on the meeting point of the two geodesics".into()));
    }
    Ok((ap, aq, ys, xs))
}

fn min_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::INFINITY, f64::min)
}

/// Open interval of parameters `s` for which [`dixon1_closed_form`] keeps
/// every joint on its side of the meeting point.
pub fn dixon1_interval(fw: &Framework) -> Result<(f64, f64)> {
    let (_, _, ys, xs) = dixon1_coordinates(fw)?;
    Ok(interval(fw.kind(), &ys, &xs))
}

fn interval(kind: GeometryKind, ys: &[f64], xs: &[f64]) -> (f64, f64) {
    match kind {
        GeometryKind::Euclidean => (-min_of(xs.iter().map(|x| x * x)), min_of(ys.iter().map(|y| y * y))),
        GeometryKind::Hyperbolic => {
            (-min_of(xs.iter().map(|x| x.cosh().ln())), min_of(ys.iter().map(|y| y.cosh().ln())))
        }
        GeometryKind::Spherical => {
            let lo = -min_of(ys.iter().map(|y| -y.cos().abs().ln()));
            let hi = min_of(xs.iter().map(|x| -x.cos().abs().ln()));
            (lo, hi)
        }
    }
}

/// The Dixon-1 motion in closed form: along the `Q` geodesic
/// `x^2 + s` (plane), `cosh x e^s` (disk) or `cos x e^s` (sphere); along the
/// `P` geodesic the same with `-s`. Every rod length is preserved and `s = 0`
/// returns the input.
pub fn dixon1_closed_form(fw: &Framework, s: f64) -> Result<Framework> {
    let (ap, aq, ys, xs) = dixon1_coordinates(fw)?;
    let kind = fw.kind();
    let (lo, hi) = interval(kind, &ys, &xs);
    if !(s > lo && s < hi) {
        return Err(FlexError::Domain(format!("s = {s} is outside the admissible interval ({lo}, {hi})")));
    }
    let shift = |c: f64, s: f64| -> f64 {
        let v = match kind {
            GeometryKind::Euclidean => (c * c + s).sqrt(),
            GeometryKind::Hyperbolic => (c.cosh() * s.exp()).acosh(),
            GeometryKind::Spherical => (c.cos() * s.exp()).acos(),
        };
        c.signum() * v
    };
    let p = ys.iter().map(|&y| ap.point(shift(y, -s))).collect::<Result<Vec<_>>>()?;
    let q = xs.iter().map(|&x| aq.point(shift(x, s))).collect::<Result<Vec<_>>>()?;
    Framework::new(kind, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::rod_lengths;
    use crate::kinematics::generate_dixon1;

    #[test]
    fn euclidean_lengths_are_invariant() {
        let fw = generate_dixon1(GeometryKind::Euclidean, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        let moved = dixon1_closed_form(&fw, 0.5).unwrap();
        let (a, b) = (rod_lengths(&fw), rod_lengths(&moved));
        for i in 0..3 {
            for j in 0..3 {
                assert!((a.r(i, j) - b.r(i, j)).abs() < 1e-14);
            }
        }
        assert!((moved.q()[0].x() - 1.5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(dixon1_closed_form(&fw, 1.0 + 1e-9), Err(FlexError::Domain(_))));
        assert!(matches!(dixon1_closed_form(&fw, -1.0 - 1e-9), Err(FlexError::Domain(_))));
        let (lo, hi) = dixon1_interval(&fw).unwrap();
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_at_zero() {
        for kind in GeometryKind::ALL {
            let fw = generate_dixon1(kind, &[0.4, -0.9, 1.3], &[0.5, 1.1, -0.7]).unwrap();
            let same = dixon1_closed_form(&fw, 0.0).unwrap();
            for (a, b) in fw.p().iter().chain(fw.q()).zip(same.p().iter().chain(same.q())) {
                assert!(crate::geometry::dist(a, b) < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn curved_products_are_invariant() {
        let fw = generate_dixon1(GeometryKind::Hyperbolic, &[0.4, 0.9, 1.3], &[0.5, 1.1, 0.7]).unwrap();
        let moved = dixon1_closed_form(&fw, 0.1).unwrap();
        let (a, b) = (rod_lengths(&fw), rod_lengths(&moved));
        for i in 0..3 {
            for j in 0..3 {
                assert!((a.u(i, j).unwrap() - b.u(i, j).unwrap()).abs() < 1e-12);
            }
        }
        let fw = generate_dixon1(GeometryKind::Spherical, &[0.4, 0.9, 2.3], &[0.5, 1.1, -0.7]).unwrap();
        let moved = dixon1_closed_form(&fw, 0.05).unwrap();
        let (a, b) = (rod_lengths(&fw), rod_lengths(&moved));
        for i in 0..3 {
            for j in 0..3 {
                assert!((a.u(i, j).unwrap() - b.u(i, j).unwrap()).abs() < 1e-12);
            }
        }
    }
}
