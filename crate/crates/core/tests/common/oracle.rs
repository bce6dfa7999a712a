//! Independent references for traced motions.

use flexlab::framework::Framework;
use flexlab::geometry::{distance, GeometryKind, Point};
use flexlab::kinematics::isometry::align;
use flexlab::kinematics::{generate_cda, generate_dixon1, generate_dixon2, trace_flex, FlexPath, TraceOutcome};
use nalgebra::Vector3;

/// Distance between two points of the same geometry.
pub fn d(a: &Point, b: &Point) -> f64 {
    distance(a.kind(), a, b).unwrap()
}

/// Traces `fw` with the default step and tolerance; jamming is a failure.
pub fn trace(fw: &Framework, steps: usize) -> FlexPath {
    match trace_flex(fw, steps, 0.01, 1e-9).unwrap() {
        TraceOutcome::Path(p) => p,
        TraceOutcome::Jammed(j) => panic!("jammed: {j:?}"),
    }
}

/// Reference Dixon-1 configuration at parameter `s`, built from the joint
/// coordinates along the two axes with per-joint signs.
struct Dixon1Reference {
    kind: GeometryKind,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dixon1Reference {
    fn moved(&self, c: f64, s: f64) -> f64 {
        match self.kind {
            GeometryKind::Euclidean => (c * c + s).max(0.0).sqrt(),
            GeometryKind::Hyperbolic => (c.cosh() * s.exp()).max(1.0).acosh(),
            GeometryKind::Spherical => (c.cos() * s.exp()).clamp(-1.0, 1.0).acos(),
        }
    }

    fn on_axis(&self, t: f64, second: bool) -> Point {
        let (a, b) = match self.kind {
            GeometryKind::Euclidean => (t, 0.0),
            GeometryKind::Hyperbolic => ((t / 2.0).tanh(), 0.0),
            GeometryKind::Spherical => (t.cos(), t.sin()),
        };
        match (self.kind, second) {
            (GeometryKind::Euclidean, false) => Point::euclid(a, b),
            (GeometryKind::Euclidean, true) => Point::euclid(b, a),
            (GeometryKind::Hyperbolic, false) => Point::disk(a, b).unwrap(),
            (GeometryKind::Hyperbolic, true) => Point::disk(b, a).unwrap(),
            (_, false) => Point::sphere(a, b, 0.0).unwrap(),
            (_, true) => Point::sphere(a, 0.0, b).unwrap(),
        }
    }

    fn interval(&self) -> (f64, f64) {
        let lo = |v: &[f64], f: &dyn Fn(f64) -> f64| v.iter().map(|&c| f(c)).fold(f64::INFINITY, f64::min);
        match self.kind {
            GeometryKind::Euclidean => (-lo(&self.xs, &|x| x * x), lo(&self.ys, &|y| y * y)),
            GeometryKind::Hyperbolic => (-lo(&self.xs, &|x| x.cosh().ln()), lo(&self.ys, &|y| y.cosh().ln())),
            GeometryKind::Spherical => {
                (-lo(&self.ys, &|y| -y.cos().abs().ln()), lo(&self.xs, &|x| -x.cos().abs().ln()))
            }
        }
    }

    fn signed(&self, c: f64, s: f64, flip: bool, moved_by: f64) -> f64 {
        let side = if flip { -c.signum() } else { c.signum() };
        side * self.moved(c, moved_by * s)
    }

    /// Joints at parameter `s`; set bits of `p_signs` and `q_signs` move a
    /// joint to the other side of the meeting point.
    fn frame(&self, s: f64, p_signs: u32, q_signs: u32) -> (Vec<Point>, Vec<Point>) {
        let bit = |mask: u32, k: usize| mask >> k & 1 == 1;
        let p = self
            .ys
            .iter()
            .enumerate()
            .map(|(k, &y)| self.on_axis(self.signed(y, s, bit(p_signs, k), -1.0), true))
            .collect();
        let q = self
            .xs
            .iter()
            .enumerate()
            .map(|(k, &x)| self.on_axis(self.signed(x, s, bit(q_signs, k), 1.0), false))
            .collect();
        (p, q)
    }

    /// The parameter at which `q_0` and the driver `q_1`, on the sides given
    /// by `q_signs`, are `target` apart. The separation is monotone in `s`.
    fn parameter(&self, target: f64, q_signs: u32) -> Option<f64> {
        let (lo, hi) = self.interval();
        let (f0, f1) = (q_signs & 1 == 1, q_signs >> 1 & 1 == 1);
        let gap = |s: f64| (self.signed(self.xs[1], s, f1, 1.0) - self.signed(self.xs[0], s, f0, 1.0)).abs() - target;
        let (ga, gb) = (gap(lo), gap(hi));
        if ga.signum() == gb.signum() {
            return None;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (gap(mid) > 0.0) == (gb > 0.0) {
                b = mid;
            } else {
                a = mid;
            }
        }
        Some(0.5 * (a + b))
    }

    /// Largest joint distance between `f` and the best congruent reference
    /// frame, the parameter being fixed by the driver joint.
    fn deviation(&self, f: &Framework) -> f64 {
        let target = d(&f.q()[0], &f.q()[1]);
        let (m, n) = (self.ys.len(), self.xs.len());
        let mut best = f64::INFINITY;
        for qs in 0..1u32 << n {
            let Some(s) = self.parameter(target, qs) else { continue };
            for ps in 0..1u32 << m {
                let (p, q) = self.frame(s, ps, qs);
                let Ok(iso) = align(&p[0], &q[0], &f.p()[0], &f.q()[0]) else { continue };
                let worst = p
                    .iter()
                    .zip(f.p())
                    .chain(q.iter().zip(f.q()))
                    .map(|(a, b)| d(&iso(a).unwrap(), b))
                    .fold(0.0f64, f64::max);
                best = best.min(worst);
            }
        }
        best
    }
}

/// Largest reference deviation over a traced Dixon-1 path and the path length.
pub fn dixon1_agreement(kind: GeometryKind, xs: &[f64], ys: &[f64]) -> (f64, usize, f64) {
    let fw = generate_dixon1(kind, xs, ys).unwrap();
    let path = trace(&fw, 200);
    let oracle = Dixon1Reference { kind, xs: xs.to_vec(), ys: ys.to_vec() };
    let dev = path.frames.iter().map(|f| oracle.deviation(f)).fold(0.0f64, f64::max);
    (dev, path.frames.len(), path.max_length_drift)
}

pub fn reflect_across_bisector(kind: GeometryKind, a: &Point, b: &Point, x: &Point) -> Point {
    match kind {
        GeometryKind::Euclidean => {
            let (dx, dy) = (a.x() - b.x(), a.y() - b.y());
            let (mx, my) = (0.5 * (a.x() + b.x()), 0.5 * (a.y() + b.y()));
            let t = 2.0 * ((x.x() - mx) * dx + (x.y() - my) * dy) / (dx * dx + dy * dy);
            Point::euclid(x.x() - t * dx, x.y() - t * dy)
        }
        _ => {
            let form = |u: &Vector3<f64>, v: &Vector3<f64>| {
                if kind == GeometryKind::Hyperbolic {
                    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
                } else {
                    u.dot(v)
                }
            };
            let nrm = a.lift() - b.lift();
            let v = x.lift();
            Point::from_lift(kind, &(v - nrm * (2.0 * form(&v, &nrm) / form(&nrm, &nrm)))).unwrap()
        }
    }
}

/// Worst parallelogram equality error and worst reflection error over a
/// traced Dixon-2 path.
pub fn dixon2_structure(kind: GeometryKind, pa: Point, qa: Point) -> (f64, f64, usize) {
    let fw = generate_dixon2(kind, &pa, &qa, &[1, 2, 3], &[1, 2, 3], None).unwrap();
    let path = trace(&fw, 200);
    let (mut eq, mut refl) = (0.0f64, 0.0f64);
    for f in &path.frames {
        let r = |i: usize, j: usize| d(&f.p()[i], &f.q()[j]);
        for i in 0..3 {
            for j in i + 1..3 {
                eq = eq.max((r(i, i) - r(j, j)).abs()).max((r(i, j) - r(j, i)).abs());
            }
        }
        for k in 1..3 {
            let image = reflect_across_bisector(kind, &f.p()[0], &f.p()[k], &f.q()[0]);
            refl = refl.max(d(&image, &f.q()[k]));
        }
    }
    (eq, refl, path.frames.len())
}

/// Largest change of `<p_0, q_0>` and of the four vanishing products along a CDA trace.
pub fn cda_invariance(theta: f64, phi1: f64) -> (f64, usize) {
    let fw = (0..50).find_map(|seed| generate_cda(theta, phi1, seed as f64).ok()).expect("a CDA instance");
    let path = trace(&fw, 200);
    let dot = |a: &Point, b: &Point| a.lift().dot(&b.lift());
    let u00 = dot(&fw.p()[0], &fw.q()[0]);
    let mut worst = 0.0f64;
    for f in &path.frames {
        let (p, q) = (f.p(), f.q());
        worst = worst.max((dot(&p[0], &q[0]) - u00).abs());
        for k in 1..3 {
            worst = worst.max(dot(&p[0], &q[k]).abs()).max(dot(&q[0], &p[k]).abs());
        }
    }
    (worst, path.frames.len())
}
