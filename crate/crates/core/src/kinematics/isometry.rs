//! Orientation-preserving isometries built from a base point and a direction.

use nalgebra::{Matrix3, Vector3};

use crate::error::{FlexError, Result};
use crate::geometry::{dist, GeometryKind, Point, MODEL_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }

    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }

    fn conj(self) -> C {
        C(self.0, -self.1)
    }

    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }

    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }

    fn unit(angle: f64) -> C {
        C(angle.cos(), angle.sin())
    }

    fn arg(self) -> f64 {
        self.1.atan2(self.0)
    }
}

/// Coordinates in which `base` is the origin (`(1, 0, 0)` on the sphere) and
/// `toward` lies in the positive first direction.
#[derive(Clone, Copy, Debug)]
pub struct Chart {
    kind: GeometryKind,
    base: C,
    turn: C,
    frame: Matrix3<f64>,
}

impl Chart {
    pub fn new(base: &Point, toward: &Point) -> Result<Chart> {
        let kind = base.kind();
        if dist(base, toward) <= MODEL_TOL {
            return Err(FlexError::Domain("a chart needs two distinct points".into()));
        }
        let a = C(base.x(), base.y());
        match kind {
            GeometryKind::Euclidean => {
                let d = C(toward.x(), toward.y()).sub(a);
                Ok(Chart { kind, base: a, turn: C::unit(-d.arg()), frame: Matrix3::identity() })
            }
            GeometryKind::Hyperbolic => {
                let w = mobius(a, C(toward.x(), toward.y()));
                Ok(Chart { kind, base: a, turn: C::unit(-w.arg()), frame: Matrix3::identity() })
            }
            GeometryKind::Spherical => {
                let e1 = base.lift();
                let b = toward.lift();
                let e2 = b - e1 * e1.dot(&b);
                if e2.norm() <= MODEL_TOL {
                    return Err(FlexError::Domain("a spherical chart needs non-antipodal points".into()));
                }
                let e2 = e2.normalize();
                let e3 = e1.cross(&e2);
                let frame = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
                Ok(Chart { kind, base: a, turn: C(1.0, 0.0), frame })
            }
        }
    }

    pub fn to_chart(&self, x: &Point) -> Result<Point> {
        match self.kind {
            GeometryKind::Euclidean => {
                let w = C(x.x(), x.y()).sub(self.base).mul(self.turn);
                Ok(Point::euclid(w.0, w.1))
            }
            GeometryKind::Hyperbolic => {
                let w = mobius(self.base, C(x.x(), x.y())).mul(self.turn);
                Point::disk(w.0, w.1)
            }
            GeometryKind::Spherical => Point::from_lift(self.kind, &(self.frame * x.lift())),
        }
    }

    pub fn from_chart(&self, y: &Point) -> Result<Point> {
        match self.kind {
            GeometryKind::Euclidean => {
                let w = C(y.x(), y.y()).mul(self.turn.conj()).add(self.base);
                Ok(Point::euclid(w.0, w.1))
            }
            GeometryKind::Hyperbolic => {
                let w = C(y.x(), y.y()).mul(self.turn.conj());
                let z = w.add(self.base).div(C(1.0, 0.0).add(self.base.conj().mul(w)));
                Point::disk(z.0, z.1)
            }
            GeometryKind::Spherical => Point::from_lift(self.kind, &(self.frame.transpose() * y.lift())),
        }
    }

    /// Rotation by `angle` about the base point.
    pub fn rotate(&self, x: &Point, angle: f64) -> Result<Point> {
        let y = self.to_chart(x)?;
        let r = match self.kind {
            GeometryKind::Euclidean => {
                let w = C(y.x(), y.y()).mul(C::unit(angle));
                Point::euclid(w.0, w.1)
            }
            GeometryKind::Hyperbolic => {
                let w = C(y.x(), y.y()).mul(C::unit(angle));
                Point::disk(w.0, w.1)?
            }
            GeometryKind::Spherical => {
                let (c, s) = (angle.cos(), angle.sin());
                let v = y.lift();
                Point::from_lift(self.kind, &Vector3::new(v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]))?
            }
        };
        self.from_chart(&r)
    }

    /// Angle of `x` around the base point, measured from `toward`.
    pub fn angle_of(&self, x: &Point) -> Result<f64> {
        let y = self.to_chart(x)?;
        Ok(match self.kind {
            GeometryKind::Spherical => y.z().atan2(y.y()),
            _ => y.y().atan2(y.x()),
        })
    }
}

/// `(z - a) / (1 - conj(a) z)`.
fn mobius(a: C, z: C) -> C {
    z.sub(a).div(C(1.0, 0.0).sub(a.conj().mul(z)))
}

/// The isometry taking `(a, b)` to `(a2, b2)`; the two pairs must be equally far apart.
pub fn align(a: &Point, b: &Point, a2: &Point, b2: &Point) -> Result<impl Fn(&Point) -> Result<Point>> {
    let from = Chart::new(a, b)?;
    let to = Chart::new(a2, b2)?;
    Ok(move |x: &Point| to.from_chart(&from.to_chart(x)?))
}
