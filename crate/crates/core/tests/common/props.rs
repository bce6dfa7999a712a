//! Sampled geometric experiments. Each returns `Err` with a description on a
//! violation, so the same code drives property tests and the acceptance run.

use flexlab::framework::{normalize_antipodal, quotient, Framework};
use flexlab::geometry::{convert_point, distance, Model};
use flexlab::kinematics::isometry::Chart;
use flexlab::{GeometryKind, Point};
use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn random_point(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Point {
    match kind {
        GeometryKind::Euclidean => Point::euclid(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
        GeometryKind::Hyperbolic => {
            let (r, a) = (rng.gen_range(0.0..0.9f64).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            Point::disk(r * a.cos(), r * a.sin()).unwrap()
        }
        GeometryKind::Spherical => loop {
            let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                break Point::sphere(v[0], v[1], v[2]).unwrap();
            }
        },
    }
}

fn d(a: &Point, b: &Point) -> f64 {
    distance(a.kind(), a, b).unwrap()
}

/// Symmetry and the triangle inequality on a random triple.
pub fn metric_axioms(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Check {
    let (a, b, c) = (random_point(rng, kind), random_point(rng, kind), random_point(rng, kind));
    if d(&a, &b) != d(&b, &a) {
        return Err(format!("{kind}: asymmetric distance"));
    }
    if d(&a, &a) != 0.0 && d(&a, &a) > 1e-15 {
        return Err(format!("{kind}: d(a, a) = {}", d(&a, &a)));
    }
    let slack = d(&a, &b) + d(&b, &c) - d(&a, &c);
    if slack < -1e-12 {
        return Err(format!("{kind}: triangle inequality fails by {slack}"));
    }
    Ok(())
}

fn hyperboloid(x: f64, y: f64) -> Vector3<f64> {
    // Lobachevsky coordinates.
    Vector3::new(y.cosh() * x.cosh(), y.cosh() * x.sinh(), y.sinh())
}

fn minkowski_chord(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let v = a - b;
    (-v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).max(0.0).sqrt()
}

/// Distances recomputed from the coordinates of every model of `kind`.
fn model_distances(kind: GeometryKind, a: &Point, b: &Point) -> Vec<(Model, f64)> {
    let c = |m: Model, p: &Point| convert_point(p, m).unwrap();
    match kind {
        GeometryKind::Euclidean => {
            let (x, y) = (c(Model::Cartesian, a), c(Model::Cartesian, b));
            vec![(Model::Cartesian, (x[0] - y[0]).hypot(x[1] - y[1]))]
        }
        GeometryKind::Hyperbolic => {
            let (z, w) = (c(Model::Poincare, a), c(Model::Poincare, b));
            let num = (z[0] - w[0]).hypot(z[1] - w[1]);
            let den = ((1.0 - z[0] * z[0] - z[1] * z[1]) * (1.0 - w[0] * w[0] - w[1] * w[1])).sqrt();
            let (la, lb) = (c(Model::Lobachevsky, a), c(Model::Lobachevsky, b));
            let chord = minkowski_chord(&hyperboloid(la[0], la[1]), &hyperboloid(lb[0], lb[1]));
            vec![(Model::Poincare, 2.0 * (num / den).asinh()), (Model::Lobachevsky, 2.0 * (chord / 2.0).asinh())]
        }
        GeometryKind::Spherical => {
            let (x, y) = (c(Model::Ambient, a), c(Model::Ambient, b));
            let chord = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
            let (g, h) = (c(Model::Geographic, a), c(Model::Geographic, b));
            let hav =
                ((h[1] - g[1]) / 2.0).sin().powi(2) + g[1].cos() * h[1].cos() * ((h[0] - g[0]) / 2.0).sin().powi(2);
            let mut out = vec![
                (Model::Ambient, 2.0 * (chord / 2.0).min(1.0).asin()),
                (Model::Geographic, 2.0 * hav.sqrt().min(1.0).asin()),
            ];
            if let (Ok(z), Ok(w)) = (convert_point(a, Model::Stereographic), convert_point(b, Model::Stereographic)) {
                let num = (z[0] - w[0]).hypot(z[1] - w[1]);
                let den = ((1.0 + z[0] * z[0] + z[1] * z[1]) * (1.0 + w[0] * w[0] + w[1] * w[1])).sqrt();
                out.push((Model::Stereographic, 2.0 * (num / den).min(1.0).asin()));
            }
            out
        }
    }
}

/// Every model formula agrees with the library distance within `1e-10`.
pub fn model_agreement(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Check {
    let (a, b) = (random_point(rng, kind), random_point(rng, kind));
    let reference = d(&a, &b);
    for (m, v) in model_distances(kind, &a, &b) {
        // Near-antipodal spherical pairs lose precision in the chord forms.
        let scale = if kind == GeometryKind::Spherical && reference > 3.0 { 1e3 } else { 1.0 };
        if (v - reference).abs() >= 1e-10 * scale {
            return Err(format!("{kind} {m:?}: {v} vs {reference}"));
        }
    }
    Ok(())
}

fn plane_normal(kind: GeometryKind, a: &Point, b: &Point) -> Vector3<f64> {
    match kind {
        GeometryKind::Euclidean => {
            let v = Vector3::new(b.x() - a.x(), b.y() - a.y(), 0.0);
            v / v.norm()
        }
        _ => a.lift().cross(&b.lift()),
    }
}

/// Cosine of the angle between the geodesics `ac` and `bd`.
fn diagonal_cosine(kind: GeometryKind, a: &Point, b: &Point, c: &Point, e: &Point) -> f64 {
    let (n1, n2) = (plane_normal(kind, a, c), plane_normal(kind, b, e));
    match kind {
        GeometryKind::Euclidean => n1.dot(&n2),
        GeometryKind::Hyperbolic => {
            // The Euclidean normal e of a plane gives the Minkowski normal J e,
            // so Minkowski products of normals are e1^T J e2.
            let j = |u: &Vector3<f64>, v: &Vector3<f64>| -u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            j(&n1, &n2) / (j(&n1, &n1) * j(&n2, &n2)).sqrt()
        }
        GeometryKind::Spherical => n1.dot(&n2) / (n1.norm() * n2.norm()),
    }
}

/// Side criterion whose vanishing is equivalent to orthogonal diagonals.
fn side_criterion(kind: GeometryKind, s: [f64; 4]) -> f64 {
    let [a, b, c, e] = s;
    match kind {
        GeometryKind::Euclidean => (a * a + c * c) - (b * b + e * e),
        GeometryKind::Hyperbolic => a.cosh() * c.cosh() - b.cosh() * e.cosh(),
        GeometryKind::Spherical => a.cos() * c.cos() - b.cos() * e.cos(),
    }
}

fn axis_point(kind: GeometryKind, t: f64, second: bool) -> Point {
    let p = match kind {
        GeometryKind::Euclidean => Point::euclid(t, 0.0),
        GeometryKind::Hyperbolic => Point::disk((t / 2.0).tanh(), 0.0).unwrap(),
        GeometryKind::Spherical => Point::sphere(t.cos(), t.sin(), 0.0).unwrap(),
    };
    if !second {
        return p;
    }
    match kind {
        GeometryKind::Euclidean => Point::euclid(0.0, t),
        GeometryKind::Hyperbolic => Point::disk(0.0, (t / 2.0).tanh()).unwrap(),
        GeometryKind::Spherical => Point::sphere(t.cos(), 0.0, t.sin()).unwrap(),
    }
}

/// A quadrilateral `abcd`: half of the draws have orthogonal diagonals by
/// construction (vertices on two orthogonal axes, then moved by a random
/// isometry); the rest are random. Orthogonality of the diagonals must agree
/// with the vanishing of the side criterion, both at tolerance `1e-9`.
pub fn quadrilateral(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Check {
    let verts: [Point; 4] = if rng.gen_bool(0.5) {
        let bound = if kind == GeometryKind::Euclidean { 3.0 } else { 1.2 };
        let mut t = || {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * rng.gen_range(0.1..bound)
        };
        let raw = [
            axis_point(kind, t(), false),
            axis_point(kind, t(), true),
            axis_point(kind, t(), false),
            axis_point(kind, t(), true),
        ];
        let chart = Chart::new(&random_point(rng, kind), &random_point(rng, kind)).unwrap();
        raw.map(|p| chart.from_chart(&p).unwrap())
    } else {
        [random_point(rng, kind), random_point(rng, kind), random_point(rng, kind), random_point(rng, kind)]
    };
    let [a, b, c, e] = &verts;
    if d(a, c) < 0.05 || d(b, e) < 0.05 {
        return Ok(());
    }
    let orth = diagonal_cosine(kind, a, b, c, e).abs() < 1e-9;
    let crit = side_criterion(kind, [d(a, b), d(b, c), d(c, e), d(e, a)]);
    if orth != (crit.abs() < 1e-9) {
        return Err(format!("{kind}: orthogonal = {orth}, criterion = {crit}"));
    }
    Ok(())
}

fn random_framework(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Framework {
    loop {
        let (m, n) = (rng.gen_range(1..6), rng.gen_range(1..6));
        let mut pts = |k: usize| -> Vec<Point> {
            let mut v: Vec<Point> = Vec::new();
            for _ in 0..k {
                // Reuse earlier joints, or their antipodes, to create coincidences.
                let p = if !v.is_empty() && rng.gen_bool(0.3) {
                    let base = v[rng.gen_range(0..v.len())];
                    if kind == GeometryKind::Spherical && rng.gen_bool(0.5) {
                        flexlab::geometry::antipode(&base).unwrap()
                    } else {
                        base
                    }
                } else {
                    random_point(rng, kind)
                };
                v.push(p);
            }
            v
        };
        let (p, q) = (pts(m), pts(n));
        if let Ok(fw) = Framework::new(kind, p, q) {
            return fw;
        }
    }
}

/// `quotient` is idempotent, never grows a part and leaves no coincidences.
pub fn quotient_idempotent(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Check {
    let fw = random_framework(rng, kind);
    let Ok(once) = quotient(&fw, 1e-9) else { return Ok(()) };
    let twice = quotient(&once, 1e-9).map_err(|e| format!("{kind}: second quotient failed: {e}"))?;
    if twice != once {
        return Err(format!("{kind}: quotient is not idempotent"));
    }
    if once.m() > fw.m() || once.n() > fw.n() {
        return Err(format!("{kind}: quotient grew a part"));
    }
    if !flexlab::framework::overlap_status(&once, 1e-9).is_clean() {
        return Err(format!("{kind}: quotient left an overlap"));
    }
    Ok(())
}

/// The flips of `normalize_antipodal` undo themselves and restore the input.
pub fn normalize_involution(rng: &mut ChaCha8Rng) -> Check {
    let fw = random_framework(rng, GeometryKind::Spherical);
    let nf = normalize_antipodal(&fw).map_err(|e| e.to_string())?;
    let back = nf.flips.apply(&nf.framework).map_err(|e| e.to_string())?;
    if back != fw {
        return Err("flips do not restore the input".into());
    }
    let again = nf.flips.apply(&back).map_err(|e| e.to_string())?;
    if again != nf.framework {
        return Err("flips are not an involution".into());
    }
    let second = normalize_antipodal(&nf.framework).map_err(|e| e.to_string())?;
    if !second.flips.p.iter().chain(&second.flips.q).all(|f| !f) {
        return Err("a normalized framework is flipped again".into());
    }
    Ok(())
}
