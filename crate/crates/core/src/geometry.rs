//! Metric kernel of the Euclidean plane, the hyperbolic plane (Poincaré
//! disk) and the unit sphere.
//!
//! Geodesics are stored as linear forms on a three-dimensional model: lines
//! `a x + b y = c` in the plane, planes through the origin for the sphere,
//! and Minkowski normals on the hyperboloid for the hyperbolic plane.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{FlexError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 3] = [GeometryKind::Euclidean, GeometryKind::Hyperbolic, GeometryKind::Spherical];

    /// Number of stored coordinates of a point.
    pub fn dim(self) -> usize {
        match self {
            GeometryKind::Spherical => 3,
            _ => 2,
        }
    }

    /// The coordinate model points are stored in.
    pub fn canonical_model(self) -> Model {
        match self {
            GeometryKind::Euclidean => Model::Cartesian,
            GeometryKind::Hyperbolic => Model::Poincare,
            GeometryKind::Spherical => Model::Ambient,
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            GeometryKind::Euclidean => "euclidean",
            GeometryKind::Hyperbolic => "hyperbolic",
            GeometryKind::Spherical => "spherical",
        })
    }
}

/// Coordinate models accepted by [`convert_point`] and [`from_model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Cartesian,
    Poincare,
    /// `(x, y)` with `X = (cosh y cosh x, cosh y sinh x, sinh y)` on the
    /// hyperboloid; the axis `y = 0` is the positive real diameter of the disk.
    Lobachevsky,
    Ambient,
    Stereographic,
    /// Longitude `x` and latitude `y`.
    Geographic,
}

impl Model {
    pub fn kind(self) -> GeometryKind {
        match self {
            Model::Cartesian => GeometryKind::Euclidean,
            Model::Poincare | Model::Lobachevsky => GeometryKind::Hyperbolic,
            Model::Ambient | Model::Stereographic | Model::Geographic => GeometryKind::Spherical,
        }
    }

    /// Number of coordinates in this model.
    pub fn dim(self) -> usize {
        if self == Model::Ambient {
            3
        } else {
            2
        }
    }
}

/// Tolerance of the model invariants (unit norm, open disk).
pub const MODEL_TOL: f64 = 1e-12;

/// A point in its canonical model. Planar points keep `coords[2] = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    kind: GeometryKind,
    coords: [f64; 3],
}

impl Point {
    pub fn euclid(x: f64, y: f64) -> Point {
        Point { kind: GeometryKind::Euclidean, coords: [x, y, 0.0] }
    }

    /// A point of the open unit disk.
    pub fn disk(x: f64, y: f64) -> Result<Point> {
        let n = x * x + y * y;
        if !(n < 1.0) || !x.is_finite() || !y.is_finite() {
            return Err(FlexError::Domain(format!("({x}, {y}) is not inside the unit disk")));
        }
        Ok(Point { kind: GeometryKind::Hyperbolic, coords: [x, y, 0.0] })
    }

    /// A point of the unit sphere; the input is normalized.
    pub fn sphere(x: f64, y: f64, z: f64) -> Result<Point> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(FlexError::Domain(format!("({x}, {y}, {z}) cannot be normalized")));
        }
        Ok(Point { kind: GeometryKind::Spherical, coords: [x / n, y / n, z / n] })
    }

    /// A point from canonical-model coordinates.
    pub fn new(kind: GeometryKind, coords: &[f64]) -> Result<Point> {
        if coords.len() != kind.dim() {
            return Err(FlexError::Usage(format!(
                "a {kind} point needs {} coordinates, got {}",
                kind.dim(),
                coords.len()
            )));
        }
        match kind {
            GeometryKind::Euclidean => {
                if coords.iter().any(|c| !c.is_finite()) {
                    return Err(FlexError::Domain("coordinates must be finite".into()));
                }
                Ok(Point::euclid(coords[0], coords[1]))
            }
            GeometryKind::Hyperbolic => Point::disk(coords[0], coords[1]),
            GeometryKind::Spherical => Point::sphere(coords[0], coords[1], coords[2]),
        }
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// Canonical coordinates: two for planar points, three on the sphere.
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.kind.dim()]
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn z(&self) -> f64 {
        self.coords[2]
    }

    /// Three-vector used for linear algebra: `(x, y, 1)` in the plane, the
    /// hyperboloid lift in the disk, the point itself on the sphere.
    pub fn lift(&self) -> Vector3<f64> {
        match self.kind {
            GeometryKind::Euclidean => Vector3::new(self.coords[0], self.coords[1], 1.0),
            GeometryKind::Hyperbolic => disk_to_hyperboloid(self.coords[0], self.coords[1]),
            GeometryKind::Spherical => Vector3::new(self.coords[0], self.coords[1], self.coords[2]),
        }
    }

    /// Inverse of [`Point::lift`]; hyperboloid and sphere vectors are renormalized.
    pub fn from_lift(kind: GeometryKind, v: &Vector3<f64>) -> Result<Point> {
        match kind {
            GeometryKind::Euclidean => Ok(Point::euclid(v[0] / v[2], v[1] / v[2])),
            GeometryKind::Hyperbolic => {
                let q = v[0] * v[0] - v[1] * v[1] - v[2] * v[2];
                if !(q > 0.0) {
                    return Err(FlexError::Domain("vector is not timelike".into()));
                }
                let w = v * (v[0].signum() / q.sqrt());
                Point::disk(w[1] / (1.0 + w[0]), w[2] / (1.0 + w[0]))
            }
            GeometryKind::Spherical => Point::sphere(v[0], v[1], v[2]),
        }
    }

    /// Largest violation of the model invariant.
    pub fn invariant_error(&self) -> f64 {
        match self.kind {
            GeometryKind::Euclidean => 0.0,
            GeometryKind::Hyperbolic => (self.coords[0].hypot(self.coords[1]) - 1.0).max(0.0),
            GeometryKind::Spherical => (self.coords.iter().map(|c| c * c).sum::<f64>() - 1.0).abs(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| format!("{c}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Minkowski form `-x0 y0 + x1 y1 + x2 y2`.
pub fn minkowski(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn disk_to_hyperboloid(x: f64, y: f64) -> Vector3<f64> {
    let d = 1.0 - x * x - y * y;
    Vector3::new((1.0 + x * x + y * y) / d, 2.0 * x / d, 2.0 * y / d)
}

fn same_kind(p: &Point, q: &Point) -> Result<GeometryKind> {
    if p.kind != q.kind {
        return Err(FlexError::Usage(format!("points of different geometries: {} and {}", p.kind, q.kind)));
    }
    Ok(p.kind)
}

/// Geodesic distance.
pub fn distance(kind: GeometryKind, p: &Point, q: &Point) -> Result<f64> {
    if p.kind != kind {
        return Err(FlexError::Usage(format!("expected a {kind} point, got {}", p.kind)));
    }
    same_kind(p, q)?;
    Ok(dist(p, q))
}

/// Distance of two points already known to share a geometry.
pub(crate) fn dist(p: &Point, q: &Point) -> f64 {
    let [px, py, pz] = p.coords;
    let [qx, qy, qz] = q.coords;
    match p.kind {
        GeometryKind::Euclidean => (px - qx).hypot(py - qy),
        GeometryKind::Hyperbolic => {
            let d = (px - qx).hypot(py - qy);
            let a = 1.0 - px * px - py * py;
            let b = 1.0 - qx * qx - qy * qy;
            2.0 * (d / (a * b).sqrt()).asinh()
        }
        GeometryKind::Spherical => {
            let a = Vector3::new(px, py, pz);
            let b = Vector3::new(qx, qy, qz);
            a.cross(&b).norm().atan2(a.dot(&b))
        }
    }
}

/// `cosh` (hyperbolic) or `cos` (spherical) of the distance.
pub fn cos_distance(p: &Point, q: &Point) -> Result<f64> {
    let kind = same_kind(p, q)?;
    match kind {
        GeometryKind::Euclidean => Err(FlexError::Usage("the Euclidean plane has no u-values".into())),
        GeometryKind::Hyperbolic => Ok(-minkowski(&p.lift(), &q.lift())),
        GeometryKind::Spherical => Ok(p.lift().dot(&q.lift())),
    }
}

/// Model radius `rho(u)` of a metric circle with `u = cosh r` or `u = cos r`.
pub fn rho(kind: GeometryKind, u: f64) -> Result<f64> {
    match kind {
        GeometryKind::Euclidean => {
            Err(FlexError::Usage("rho is defined for the hyperbolic and spherical planes".into()))
        }
        GeometryKind::Hyperbolic => {
            if !(u >= 1.0) || !u.is_finite() {
                return Err(FlexError::Domain(format!("cosh of a length must be at least 1, got {u}")));
            }
            Ok(((u - 1.0) / (u + 1.0)).sqrt())
        }
        GeometryKind::Spherical => {
            if u == -1.0 {
                return Err(FlexError::PointAtInfinity);
            }
            if !(u > -1.0 && u <= 1.0) {
                return Err(FlexError::Domain(format!("cos of a length must lie in (-1, 1], got {u}")));
            }
            Ok(((1.0 - u) / (1.0 + u)).sqrt())
        }
    }
}

pub fn antipode(p: &Point) -> Result<Point> {
    if p.kind != GeometryKind::Spherical {
        return Err(FlexError::Usage(format!("antipodes exist on the sphere only, got a {} point", p.kind)));
    }
    Ok(Point { kind: GeometryKind::Spherical, coords: [-p.coords[0], -p.coords[1], -p.coords[2]] })
}

/// Coordinates of `p` in `target`.
pub fn convert_point(p: &Point, target: Model) -> Result<Vec<f64>> {
    if target.kind() != p.kind {
        return Err(FlexError::Usage(format!("model {target:?} does not describe {} points", p.kind)));
    }
    let [x, y, z] = p.coords;
    Ok(match target {
        Model::Cartesian | Model::Poincare => vec![x, y],
        Model::Ambient => vec![x, y, z],
        Model::Lobachevsky => {
            let h = p.lift();
            let ly = h[2].asinh();
            let lx = (h[1] / ly.cosh()).asinh();
            vec![lx, ly]
        }
        Model::Geographic => vec![y.atan2(x), z.clamp(-1.0, 1.0).asin()],
        Model::Stereographic => {
            let d = 1.0 - z;
            if d.abs() <= MODEL_TOL {
                return Err(FlexError::PointAtInfinity);
            }
            vec![x / d, y / d]
        }
    })
}

/// The point with coordinates `coords` in `model`.
pub fn from_model(model: Model, coords: &[f64]) -> Result<Point> {
    if coords.len() != model.dim() {
        return Err(FlexError::Usage(format!(
            "model {model:?} needs {} coordinates, got {}",
            model.dim(),
            coords.len()
        )));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(FlexError::Domain("coordinates must be finite".into()));
    }
    match model {
        Model::Cartesian => Ok(Point::euclid(coords[0], coords[1])),
        Model::Poincare => Point::disk(coords[0], coords[1]),
        Model::Ambient => {
            let n2: f64 = coords.iter().map(|c| c * c).sum();
            if (n2.sqrt() - 1.0).abs() > 1e-6 {
                return Err(FlexError::Domain(format!("ambient point has norm {} instead of 1", n2.sqrt())));
            }
            Point::sphere(coords[0], coords[1], coords[2])
        }
        Model::Lobachevsky => {
            let (x, y) = (coords[0], coords[1]);
            let h = Vector3::new(y.cosh() * x.cosh(), y.cosh() * x.sinh(), y.sinh());
            Point::disk(h[1] / (1.0 + h[0]), h[2] / (1.0 + h[0]))
        }
        Model::Geographic => {
            let (x, y) = (coords[0], coords[1]);
            Point::sphere(x.cos() * y.cos(), x.sin() * y.cos(), y.sin())
        }
        Model::Stereographic => {
            let (a, b) = (coords[0], coords[1]);
            let n = a * a + b * b;
            Point::sphere(2.0 * a, 2.0 * b, n - 1.0)
        }
    }
}

// ---------------------------------------------------------------------------
// Geodesics

/// A geodesic as a linear form on the lifted model: points `p` on it satisfy
/// `form(lift(p)) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    kind: GeometryKind,
    /// Plane: `(a, b, -c)` with `a^2 + b^2 = 1`. Disk: Minkowski unit normal.
    /// Sphere: unit normal.
    normal: Vector3<f64>,
}

/// The model-level description of a geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeodesicShape {
    /// `normal . (x, y) = offset` with a unit normal.
    Line { normal: [f64; 2], offset: f64 },
    /// A diameter of the disk with a unit direction.
    Diameter { direction: [f64; 2] },
    /// A circle orthogonal to the unit circle: `|center|^2 - radius^2 = 1`.
    Arc { center: [f64; 2], radius: f64 },
    /// The great circle of a plane with this unit normal.
    GreatCircle { normal: [f64; 3] },
}

impl Geodesic {
    /// The geodesic with a given (not necessarily normalized) form, see [`Geodesic::form`].
    pub fn from_form(kind: GeometryKind, w: Vector3<f64>) -> Result<Geodesic> {
        let normal = match kind {
            GeometryKind::Euclidean => {
                let n = w[0].hypot(w[1]);
                if !(n > 0.0) {
                    return Err(FlexError::Domain("degenerate line".into()));
                }
                w / n
            }
            GeometryKind::Hyperbolic => {
                // form(X) = w . X = B(X, N) with N = (-w0, w1, w2).
                let n = Vector3::new(-w[0], w[1], w[2]);
                let q = minkowski(&n, &n);
                if !(q > 0.0) {
                    return Err(FlexError::Domain("normal is not spacelike".into()));
                }
                n / q.sqrt()
            }
            GeometryKind::Spherical => {
                let n = w.norm();
                if !(n > 0.0) {
                    return Err(FlexError::Domain("degenerate plane".into()));
                }
                w / n
            }
        };
        Ok(Geodesic { kind, normal })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// Normal vector: `(a, b, -c)` for lines, the Minkowski normal in the
    /// disk, the plane normal on the sphere.
    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    /// Euclidean dot product with lifted points vanishes on the geodesic.
    fn form(&self) -> Vector3<f64> {
        match self.kind {
            GeometryKind::Hyperbolic => Vector3::new(-self.normal[0], self.normal[1], self.normal[2]),
            _ => self.normal,
        }
    }

    /// Signed distance from `p` (sinh of it in the disk, sine on the sphere).
    fn signed_offset(&self, p: &Point) -> f64 {
        self.form().dot(&p.lift())
    }

    /// Geodesic distance from `p` to the geodesic.
    pub fn distance_to(&self, p: &Point) -> f64 {
        let s = self.signed_offset(p).abs();
        match self.kind {
            GeometryKind::Euclidean => s,
            GeometryKind::Hyperbolic => s.asinh(),
            GeometryKind::Spherical => s.min(1.0).asin(),
        }
    }

    /// The mirror image of `p` in the geodesic.
    pub fn reflect(&self, p: &Point) -> Result<Point> {
        if p.kind != self.kind {
            return Err(FlexError::Usage("point and geodesic live in different geometries".into()));
        }
        let n = self.normal;
        match self.kind {
            GeometryKind::Euclidean => {
                let s = self.signed_offset(p);
                Ok(Point::euclid(p.x() - 2.0 * s * n[0], p.y() - 2.0 * s * n[1]))
            }
            GeometryKind::Hyperbolic => {
                let x = p.lift();
                Point::from_lift(self.kind, &(x - n * (2.0 * minkowski(&x, &n))))
            }
            GeometryKind::Spherical => {
                let x = p.lift();
                Point::from_lift(self.kind, &(x - n * (2.0 * x.dot(&n))))
            }
        }
    }

    pub fn shape(&self) -> GeodesicShape {
        let n = self.normal;
        match self.kind {
            GeometryKind::Euclidean => GeodesicShape::Line { normal: [n[0], n[1]], offset: -n[2] },
            GeometryKind::Hyperbolic => {
                if n[0].abs() <= MODEL_TOL {
                    let d = n[1].hypot(n[2]);
                    GeodesicShape::Diameter { direction: [-n[2] / d, n[1] / d] }
                } else {
                    GeodesicShape::Arc { center: [n[1] / n[0], n[2] / n[0]], radius: 1.0 / n[0].abs() }
                }
            }
            GeometryKind::Spherical => GeodesicShape::GreatCircle { normal: [n[0], n[1], n[2]] },
        }
    }
}

/// The geodesic through two distinct (and, on the sphere, non-antipodal) points.
pub fn geodesic_through(p: &Point, q: &Point) -> Result<Geodesic> {
    let kind = same_kind(p, q)?;
    if kind == GeometryKind::Spherical && (p.lift() + q.lift()).norm() <= MODEL_TOL {
        return Err(FlexError::Ambiguous("antipodal points lie on infinitely many great circles".into()));
    }
    let w = p.lift().cross(&q.lift());
    if w.norm() <= MODEL_TOL * (1.0 + p.lift().norm() * q.lift().norm()) {
        return Err(FlexError::Ambiguous("coincident points do not determine a geodesic".into()));
    }
    Geodesic::from_form(kind, w)
}

/// The geodesic of points equidistant from two distinct points.
pub fn perpendicular_bisector(p: &Point, q: &Point) -> Result<Geodesic> {
    let kind = same_kind(p, q)?;
    let w = match kind {
        GeometryKind::Euclidean => {
            let n2 = |a: &Point| a.x() * a.x() + a.y() * a.y();
            Vector3::new(2.0 * (q.x() - p.x()), 2.0 * (q.y() - p.y()), n2(p) - n2(q))
        }
        GeometryKind::Hyperbolic => {
            let d = p.lift() - q.lift();
            Vector3::new(-d[0], d[1], d[2])
        }
        GeometryKind::Spherical => p.lift() - q.lift(),
    };
    if dist(p, q) <= MODEL_TOL {
        return Err(FlexError::Ambiguous("coincident points have no bisector".into()));
    }
    Geodesic::from_form(kind, w)
}

/// A geodesic within distance `tol` of every point, if one exists.
///
/// On the sphere any antipodal pair among the points is reported as
/// ambiguous, since such a pair lies on a whole pencil of great circles.
pub fn fit_geodesic(points: &[Point], tol: f64) -> Result<Option<Geodesic>> {
    if points.len() < 2 {
        return Err(FlexError::Usage(format!("fitting a geodesic needs at least 2 points, got {}", points.len())));
    }
    let kind = points[0].kind;
    for p in points {
        same_kind(&points[0], p)?;
    }
    if kind == GeometryKind::Spherical {
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                if (p.lift() + q.lift()).norm() <= tol {
                    return Err(FlexError::Ambiguous(format!("antipodal points {p} and {q}")));
                }
            }
        }
    }
    // Normal equations of the fit; each lifted point is scaled to unit length
    // so that every point weighs the same.
    let mut gram = Matrix3::zeros();
    for p in points {
        let x = p.lift();
        gram += x * x.transpose() / x.norm_squared();
    }
    let eig = gram.symmetric_eigen();
    let k = eig.eigenvalues.imin();
    let w: Vector3<f64> = eig.eigenvectors.column(k).into_owned();
    let spread = points.iter().any(|p| (p.lift() - points[0].lift()).norm() > tol);
    if !spread {
        return Err(FlexError::Ambiguous("all points coincide".into()));
    }
    let g = match Geodesic::from_form(kind, w) {
        Ok(g) => g,
        Err(_) => return Ok(None),
    };
    if points.iter().all(|p| g.distance_to(p) <= tol) {
        Ok(Some(g))
    } else {
        Ok(None)
    }
}

/// Whether two geodesics meet at a right angle (within `tol` of the cosine).
pub fn geodesics_orthogonal(g1: &Geodesic, g2: &Geodesic, tol: f64) -> Result<bool> {
    if g1.kind != g2.kind {
        return Err(FlexError::Usage("geodesics of different geometries".into()));
    }
    let (a, b) = (g1.normal, g2.normal);
    let cos = match g1.kind {
        GeometryKind::Euclidean => {
            let c = a[0] * b[0] + a[1] * b[1];
            if (a[0] * b[1] - a[1] * b[0]).abs() <= MODEL_TOL {
                return Err(FlexError::NoIntersection);
            }
            c
        }
        GeometryKind::Hyperbolic => {
            let c = minkowski(&a, &b);
            if c.abs() >= 1.0 {
                return Err(FlexError::NoIntersection);
            }
            c
        }
        GeometryKind::Spherical => a.dot(&b),
    };
    Ok(cos.abs() <= tol)
}

// ---------------------------------------------------------------------------
// Circles

/// The metric circle of radius `radius` about `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Circle> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(FlexError::Domain(format!("circle radius must be positive and finite, got {radius}")));
        }
        if center.kind == GeometryKind::Spherical && radius >= std::f64::consts::PI {
            return Err(FlexError::Domain(format!("spherical circle radius must be below pi, got {radius}")));
        }
        Ok(Circle { center, radius })
    }

    pub fn kind(&self) -> GeometryKind {
        self.center.kind
    }

    /// Signed deviation of `p` from the circle.
    pub fn deviation(&self, p: &Point) -> f64 {
        dist(&self.center, p) - self.radius
    }
}

/// How two circles meet, decided from intrinsic distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Meeting {
    Disjoint,
    Tangent,
    Crossing,
}

fn classify_meeting(d: f64, r1: f64, r2: f64, far: f64, tol: f64) -> Meeting {
    // Circles meet iff |r1 - r2| <= d <= far, where far = r1 + r2 in the plane.
    let lo = (r1 - r2).abs();
    if (d - lo).abs() <= tol || (d - far).abs() <= tol {
        Meeting::Tangent
    } else if d < lo || d > far {
        Meeting::Disjoint
    } else {
        Meeting::Crossing
    }
}

/// Points of two Euclidean circles given by center and radius.
fn planar_points(c1: [f64; 2], r1: f64, c2: [f64; 2], r2: f64, meeting: Meeting) -> Vec<[f64; 2]> {
    let (dx, dy) = (c2[0] - c1[0], c2[1] - c1[1]);
    let d = dx.hypot(dy);
    if d == 0.0 || meeting == Meeting::Disjoint {
        return vec![];
    }
    let (ex, ey) = (dx / d, dy / d);
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let base = [c1[0] + a * ex, c1[1] + a * ey];
    if meeting == Meeting::Tangent {
        return vec![base];
    }
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    // Positively oriented branch first: to the left of c1 -> c2.
    vec![[base[0] - h * ey, base[1] + h * ex], [base[0] + h * ey, base[1] - h * ex]]
}

/// The Euclidean circle (center, radius) traced by a hyperbolic circle in the disk.
pub fn disk_circle(c: &Circle) -> ([f64; 2], f64) {
    let (x, y) = (c.center.x(), c.center.y());
    let n = x * x + y * y;
    let k = (c.radius.cosh() - 1.0) * (1.0 - n) / 2.0;
    let center = [x / (1.0 + k), y / (1.0 + k)];
    let r2 = n / ((1.0 + k) * (1.0 + k)) - (n - k) / (1.0 + k);
    (center, r2.max(0.0).sqrt())
}

/// Intersection points of two circles: none, one (tangency within `tol`) or
/// two, the positively oriented one first.
pub fn circle_intersection(c1: &Circle, c2: &Circle, tol: f64) -> Result<Vec<Point>> {
    let kind = same_kind(&c1.center, &c2.center)?;
    let d = dist(&c1.center, &c2.center);
    let (r1, r2) = (c1.radius, c2.radius);
    let identical = match kind {
        GeometryKind::Spherical => {
            (d <= tol && (r1 - r2).abs() <= tol)
                || ((d - std::f64::consts::PI).abs() <= tol && (r1 + r2 - std::f64::consts::PI).abs() <= tol)
        }
        _ => d <= tol && (r1 - r2).abs() <= tol,
    };
    if identical {
        return Err(FlexError::InfiniteIntersection);
    }
    let far = match kind {
        GeometryKind::Spherical => (r1 + r2).min(2.0 * std::f64::consts::PI - r1 - r2),
        _ => r1 + r2,
    };
    let meeting = classify_meeting(d, r1, r2, far, tol);
    match kind {
        GeometryKind::Euclidean => {
            Ok(planar_points([c1.center.x(), c1.center.y()], r1, [c2.center.x(), c2.center.y()], r2, meeting)
                .into_iter()
                .map(|p| Point::euclid(p[0], p[1]))
                .collect())
        }
        GeometryKind::Hyperbolic => {
            let (e1, s1) = disk_circle(c1);
            let (e2, s2) = disk_circle(c2);
            planar_points(e1, s1, e2, s2, meeting).into_iter().map(|p| Point::disk(p[0], p[1])).collect()
        }
        GeometryKind::Spherical => {
            if meeting == Meeting::Disjoint {
                return Ok(vec![]);
            }
            let (a, b) = (c1.center.lift(), c2.center.lift());
            let g = a.dot(&b);
            let axis = a.cross(&b);
            let an = axis.norm_squared();
            if an == 0.0 {
                return Ok(vec![]);
            }
            let (u1, u2) = (r1.cos(), r2.cos());
            let alpha = (u1 - u2 * g) / (1.0 - g * g);
            let beta = (u2 - u1 * g) / (1.0 - g * g);
            let base = a * alpha + b * beta;
            if meeting == Meeting::Tangent {
                return Ok(vec![Point::from_lift(kind, &base)?]);
            }
            let gamma = ((1.0 - base.norm_squared()) / an).max(0.0).sqrt();
            Ok(vec![Point::from_lift(kind, &(base + axis * gamma))?, Point::from_lift(kind, &(base - axis * gamma))?])
        }
    }
}

/// Moves `p` by the tangent vector `delta` (model coordinates) and projects
/// back to the model.
pub fn nudge(p: &Point, delta: &[f64]) -> Result<Point> {
    let mut c = p.coords().to_vec();
    for (x, d) in c.iter_mut().zip(delta) {
        *x += d;
    }
    Point::new(p.kind, &c)
}
