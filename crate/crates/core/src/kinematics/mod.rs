//! Numeric motion: rigidity matrices, branch-tracked flex tracing, the
//! closed-form Dixon-1 motion and generators for every mechanism kind.

mod closed_form;
mod export;
mod generate;
pub mod isometry;

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{FlexError, Result};
use crate::framework::{normalize_antipodal, overlap_status, rod_lengths, FlipRecord, Framework};
use crate::geometry::{circle_intersection, dist, Circle, GeometryKind, Point};
use isometry::Chart;

pub use closed_form::{dixon1_closed_form, dixon1_interval};
pub use export::{export_motion, read_motion_frames, MotionFormat};
pub use generate::{generate_cda, generate_dixon1, generate_dixon2, orbit_point};

/// Dimension of the isometry group of each plane.
pub const TRIVIAL_MOTION_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Singular values divided by the largest one, in decreasing order.
    pub relative_singular_values: Vec<f64>,
    /// Set when a relative singular value lies between `tol` and `sqrt(tol)`,
    /// so the rank decision is not clear-cut.
    pub ambiguous_gap: bool,
    pub infinitesimal_dof: usize,
    pub infinitesimally_flexible: bool,
}

/// Jacobian of the rod constraints.
///
/// In the plane the unknowns are joint coordinates and the constraints are
/// squared lengths. In the disk and on the sphere the unknowns are the
/// hyperboloid or ambient vectors, constrained by the bilinear products
/// `B(p_i, q_j)` and by the norms `B(x, x)`.
pub fn rigidity_matrix(fw: &Framework) -> DMatrix<f64> {
    let (m, n) = (fw.m(), fw.n());
    match fw.kind() {
        GeometryKind::Euclidean => {
            let mut j = DMatrix::zeros(m * n, 2 * (m + n));
            for (i, p) in fw.p().iter().enumerate() {
                for (k, q) in fw.q().iter().enumerate() {
                    let row = i * n + k;
                    let d = [2.0 * (p.x() - q.x()), 2.0 * (p.y() - q.y())];
                    for c in 0..2 {
                        j[(row, 2 * i + c)] = d[c];
                        j[(row, 2 * (m + k) + c)] = -d[c];
                    }
                }
            }
            j
        }
        kind => {
            let sig = if kind == GeometryKind::Hyperbolic { [-1.0, 1.0, 1.0] } else { [1.0; 3] };
            let lifts: Vec<_> = fw.p().iter().chain(fw.q()).map(|x| x.lift()).collect();
            let mut j = DMatrix::zeros(m * n + m + n, 3 * (m + n));
            for i in 0..m {
                for k in 0..n {
                    let row = i * n + k;
                    let (a, b) = (&lifts[i], &lifts[m + k]);
                    for c in 0..3 {
                        j[(row, 3 * i + c)] = sig[c] * b[c];
                        j[(row, 3 * (m + k) + c)] = sig[c] * a[c];
                    }
                }
            }
            for (t, x) in lifts.iter().enumerate() {
                for c in 0..3 {
                    j[(m * n + t, 3 * t + c)] = 2.0 * sig[c] * x[c];
                }
            }
            j
        }
    }
}

/// Numerical rank of the rigidity matrix and the infinitesimal degrees of
/// freedom left after removing the isometries.
pub fn rigidity_report(fw: &Framework, tol: f64) -> RigidityReport {
    let j = rigidity_matrix(fw);
    let (rows, cols) = j.shape();
    let mut sv: Vec<f64> = j.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let rel: Vec<f64> = sv.iter().map(|s| if top > 0.0 { s / top } else { 0.0 }).collect();
    let rank = rel.iter().filter(|&&s| s > tol).count();
    let ambiguous_gap = rel.iter().any(|&s| s > tol && s <= tol.sqrt());
    let dof = (cols - rank).saturating_sub(TRIVIAL_MOTION_DIM);
    RigidityReport {
        rows,
        cols,
        rank,
        relative_singular_values: rel,
        ambiguous_gap,
        infinitesimal_dof: dof,
        infinitesimally_flexible: dof > 0,
    }
}

/// How a traced path ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    ClosedLoop,
    JammedForwardAndBackward,
    StepLimit,
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Closure::ClosedLoop => "closed_loop",
            Closure::JammedForwardAndBackward => "jammed_forward_and_backward",
            Closure::StepLimit => "step_limit",
        })
    }
}

/// Frames of a flex, ordered by driver angle. `frames[origin]` is the input.
#[derive(Clone, Debug, PartialEq)]
pub struct FlexPath {
    pub thetas: Vec<f64>,
    pub frames: Vec<Framework>,
    /// Largest rod-length error of each frame.
    pub residuals: Vec<f64>,
    pub origin: usize,
    /// The joints `(p_i, q_j)` held fixed; the driver is the next joint of `Q`.
    pub fixed: (usize, usize),
    pub max_length_drift: f64,
    pub closure: Closure,
}

/// No move was found from the input configuration under any fixed pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Jam {
    pub fixed_pairs_tried: Vec<(usize, usize)>,
    /// Smallest rod residual seen over all attempted first steps.
    pub best_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceOutcome {
    Path(FlexPath),
    Jammed(Jam),
}

/// Most step halvings per accepted frame.
pub const MAX_HALVINGS: u32 = 12;
/// Frames needed before a return to the input counts as a closed loop.
pub const MIN_LOOP_FRAMES: usize = 10;
/// Tangency tolerance of the circle intersections.
const MEET_TOL: f64 = 1e-13;
/// Largest ratio between a joint's displacement and the driver's in one
/// step. Larger moves are jumps to another assembly of the same lengths,
/// not continuations of the current one.
pub const MAX_TRANSMISSION: f64 = 64.0;
/// A path jammed both ways whose driver sweeps less than this fraction of
/// one nominal step in total is residual creep within `tol`, not a motion.
pub const MIN_SPAN_FRACTION: f64 = 0.5;

type Frame = (Vec<Point>, Vec<Point>);

struct Solver {
    r: Vec<Vec<f64>>,
    start: Frame,
    chart: Chart,
    tol: f64,
}

fn intersect(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<Point> {
    match (Circle::new(c1, r1), Circle::new(c2, r2)) {
        (Ok(a), Ok(b)) => circle_intersection(&a, &b, MEET_TOL).unwrap_or_default(),
        _ => vec![],
    }
}

fn coord_dist(a: &Point, b: &Point) -> f64 {
    a.lift().iter().zip(b.lift().iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn nearest(cands: &[Point], target: &Point) -> Option<Point> {
    cands.iter().min_by(|a, b| coord_dist(a, target).total_cmp(&coord_dist(b, target))).copied()
}

impl Solver {
    fn residual(&self, f: &Frame) -> f64 {
        let mut worst = 0.0f64;
        for (i, p) in f.0.iter().enumerate() {
            for (j, q) in f.1.iter().enumerate() {
                worst = worst.max((dist(p, q) - self.r[i][j]).abs());
            }
        }
        worst
    }

    /// The best configuration at driver angle `theta`, judged by distance to
    /// `predicted`, among those meeting every rod within `tol`. Returns the
    /// smallest residual seen when none qualifies.
    fn solve(&self, theta: f64, prev: &Frame, predicted: &Frame) -> std::result::Result<(Frame, f64), f64> {
        let (p, q) = (&self.start.0, &self.start.1);
        let (m, n) = (p.len(), q.len());
        let r = &self.r;
        let q1 = self.chart.rotate(&q[1], theta).map_err(|_| f64::INFINITY)?;
        let (p0, q0) = (p[0], q[0]);
        let reach = MAX_TRANSMISSION * dist(&q1, &prev.1[1]);
        let p1s = intersect(q0, r[1][0], q1, r[1][1]);
        let p2s = intersect(q0, r[2][0], q1, r[2][1]);
        let mut best: Option<(f64, Frame, f64)> = None;
        let mut least = f64::INFINITY;
        for p1 in &p1s {
            let q2s = intersect(p0, r[0][2], *p1, r[1][2]);
            for q2 in &q2s {
                for p2 in &p2s {
                    let mut fp = vec![p0, *p1, *p2];
                    let mut fq = vec![q0, q1, *q2];
                    let mut ok = true;
                    for i in 3..m {
                        match nearest(&intersect(q0, r[i][0], q1, r[i][1]), &predicted.0[i]) {
                            Some(x) => fp.push(x),
                            None => ok = false,
                        }
                    }
                    for j in 3..n {
                        match nearest(&intersect(p0, r[0][j], *p1, r[1][j]), &predicted.1[j]) {
                            Some(x) => fq.push(x),
                            None => ok = false,
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let frame = (fp, fq);
                    if frame_gap(&frame, prev) > reach {
                        continue;
                    }
                    let res = self.residual(&frame);
                    least = least.min(res);
                    if res > self.tol {
                        continue;
                    }
                    let score: f64 = frame
                        .0
                        .iter()
                        .zip(&predicted.0)
                        .chain(frame.1.iter().zip(&predicted.1))
                        .map(|(a, b)| coord_dist(a, b))
                        .sum();
                    if best.as_ref().is_none_or(|b| score < b.0) {
                        best = Some((score, frame, res));
                    }
                }
            }
        }
        best.map(|(_, f, res)| (f, res)).ok_or(least)
    }
}

/// Linear extrapolation of the last two frames to a step of `h` after a step of `h_prev`.
fn predict(prev: &Frame, before: Option<&Frame>, h: f64, h_prev: f64) -> Frame {
    let Some(before) = before else { return prev.clone() };
    let ratio = h / h_prev;
    let ext = |a: &[Point], b: &[Point]| -> Vec<Point> {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let v = x.lift() + (x.lift() - y.lift()) * ratio;
                Point::from_lift(x.kind(), &v).unwrap_or(*x)
            })
            .collect()
    };
    (ext(&prev.0, &before.0), ext(&prev.1, &before.1))
}

fn frame_gap(a: &Frame, b: &Frame) -> f64 {
    a.0.iter().zip(&b.0).chain(a.1.iter().zip(&b.1)).map(|(x, y)| dist(x, y)).fold(0.0, f64::max)
}

struct Direction {
    thetas: Vec<f64>,
    frames: Vec<Frame>,
    residuals: Vec<f64>,
    closed: bool,
    jammed: bool,
    first_step_residual: f64,
}

fn trace_direction(s: &Solver, sign: f64, steps: usize, step: f64) -> Direction {
    let tau = 2.0 * std::f64::consts::PI;
    let mut out = Direction {
        thetas: vec![],
        frames: vec![],
        residuals: vec![],
        closed: false,
        jammed: false,
        first_step_residual: f64::INFINITY,
    };
    let mut theta = 0.0f64;
    let mut h_prev = step;
    while out.frames.len() < steps {
        let prev = out.frames.last().unwrap_or(&s.start).clone();
        let before = match out.frames.len() {
            0 => None,
            1 => Some(&s.start),
            k => Some(&out.frames[k - 2]),
        };
        // Land exactly on whole turns of the driver so closure can be tested.
        let next_turn = ((theta.abs() / tau).floor() + 1.0) * tau;
        let mut h = step.min(next_turn - theta.abs());
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let pred = predict(&prev, before, h, h_prev);
            match s.solve(sign * (theta.abs() + h), &prev, &pred) {
                Ok(found) => {
                    accepted = Some(found);
                    break;
                }
                Err(least) => {
                    if out.frames.is_empty() {
                        out.first_step_residual = out.first_step_residual.min(least);
                    }
                    h /= 2.0;
                }
            }
        }
        let Some((frame, res)) = accepted else {
            out.jammed = true;
            break;
        };
        theta = sign * (theta.abs() + h);
        h_prev = h;
        let at_turn = (theta.abs() - next_turn).abs() <= 1e-12 * next_turn;
        let closes = at_turn && out.frames.len() + 1 >= MIN_LOOP_FRAMES && frame_gap(&frame, &s.start) <= s.tol;
        out.thetas.push(theta);
        out.frames.push(frame);
        out.residuals.push(res);
        if closes {
            out.closed = true;
            break;
        }
    }
    out
}

fn swap_order(len: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).collect();
    v.swap(0, k);
    v
}

/// Traces the flex with `(p_0, q_0)` fixed, driving `q_1` around `p_0` in
/// steps of `step` radians, in both directions.
///
/// Every accepted frame meets all rod lengths within `tol`. If no move is
/// possible from the input, each other fixed pair `(p_i, q_j)` is tried
/// before reporting a jam. Spherical frameworks are traced after antipodal
/// normalization and the flips are undone in the returned frames.
pub fn trace_flex(fw: &Framework, steps: usize, step: f64, tol: f64) -> Result<TraceOutcome> {
    if steps == 0 || !(step > 0.0 && step < std::f64::consts::PI) || !(tol > 0.0) {
        return Err(FlexError::Usage("trace needs steps >= 1, 0 < step < pi and tol > 0".into()));
    }
    if !overlap_status(fw, tol).is_clean() {
        return Err(FlexError::Precondition(
            "tracing needs a non-overlapping framework; apply quotient() first".into(),
        ));
    }
    if fw.m() < 3 || fw.n() < 3 {
        return Err(FlexError::Precondition("tracing needs at least three joints in each part".into()));
    }
    let (work, flips) = if fw.kind() == GeometryKind::Spherical {
        let nf = normalize_antipodal(fw)?;
        (nf.framework, Some(nf.flips))
    } else {
        (fw.clone(), None)
    };
    let mut tried = Vec::new();
    let mut best_residual = f64::INFINITY;
    let pairs = (0..fw.m()).flat_map(|i| (0..fw.n()).map(move |j| (i, j)));
    for (i, j) in pairs {
        tried.push((i, j));
        let (po, qo) = (swap_order(fw.m(), i), swap_order(fw.n(), j));
        let local = work.reindexed(&po, &qo)?;
        match trace_fixed(&local, steps, step, tol)? {
            Ok(core) => return Ok(TraceOutcome::Path(assemble(fw, core, (&po, &qo), flips.as_ref(), (i, j))?)),
            Err(res) => best_residual = best_residual.min(res),
        }
    }
    Ok(TraceOutcome::Jammed(Jam { fixed_pairs_tried: tried, best_residual }))
}

struct CorePath {
    thetas: Vec<f64>,
    frames: Vec<Frame>,
    residuals: Vec<f64>,
    origin: usize,
    closure: Closure,
}

fn trace_fixed(fw: &Framework, steps: usize, step: f64, tol: f64) -> Result<std::result::Result<CorePath, f64>> {
    let start: Frame = (fw.p().to_vec(), fw.q().to_vec());
    let solver =
        Solver { r: rod_lengths(fw).rows().to_vec(), chart: Chart::new(&start.0[0], &start.1[0])?, start, tol };
    let fwd = trace_direction(&solver, 1.0, steps, step);
    let bwd = if fwd.closed { None } else { Some(trace_direction(&solver, -1.0, steps, step)) };
    let bwd_len = bwd.as_ref().map_or(0, |b| b.frames.len());
    if fwd.frames.is_empty() && bwd_len == 0 {
        let res = fwd.first_step_residual.min(bwd.map_or(f64::INFINITY, |b| b.first_step_residual));
        return Ok(Err(res));
    }
    let reach = |d: &Direction| d.thetas.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let span = reach(&fwd) + bwd.as_ref().map_or(0.0, reach);
    if fwd.jammed && bwd.as_ref().is_some_and(|b| b.jammed) && span < MIN_SPAN_FRACTION * step {
        // Residual creep along a second-order flex of a rigid framework.
        let res = fwd.residuals.iter().chain(bwd.iter().flat_map(|b| &b.residuals)).fold(0.0f64, |a, &r| a.max(r));
        return Ok(Err(res));
    }
    let closure = if fwd.closed {
        Closure::ClosedLoop
    } else if fwd.jammed && bwd.as_ref().is_some_and(|b| b.jammed) {
        Closure::JammedForwardAndBackward
    } else {
        Closure::StepLimit
    };
    let mut thetas = Vec::new();
    let mut frames = Vec::new();
    let mut residuals = Vec::new();
    if let Some(b) = bwd {
        thetas.extend(b.thetas.into_iter().rev());
        frames.extend(b.frames.into_iter().rev());
        residuals.extend(b.residuals.into_iter().rev());
    }
    let origin = frames.len();
    thetas.push(0.0);
    residuals.push(solver.residual(&solver.start));
    frames.push(solver.start.clone());
    thetas.extend(fwd.thetas);
    frames.extend(fwd.frames);
    residuals.extend(fwd.residuals);
    Ok(Ok(CorePath { thetas, frames, residuals, origin, closure }))
}

fn invert(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (k, &o) in order.iter().enumerate() {
        inv[o] = k;
    }
    inv
}

fn assemble(
    input: &Framework,
    core: CorePath,
    orders: (&[usize], &[usize]),
    flips: Option<&FlipRecord>,
    fixed: (usize, usize),
) -> Result<FlexPath> {
    let (pi, qi) = (invert(orders.0), invert(orders.1));
    let target = rod_lengths(input);
    let mut frames = Vec::with_capacity(core.frames.len());
    let mut drift = 0.0f64;
    for (p, q) in core.frames {
        let local = Framework::new(input.kind(), p, q)?.reindexed(&pi, &qi)?;
        let frame = match flips {
            Some(f) => f.apply(&local)?,
            None => local,
        };
        let l = rod_lengths(&frame);
        for i in 0..frame.m() {
            for j in 0..frame.n() {
                drift = drift.max((l.r(i, j) - target.r(i, j)).abs());
            }
        }
        frames.push(frame);
    }
    Ok(FlexPath {
        thetas: core.thetas,
        frames,
        residuals: core.residuals,
        origin: core.origin,
        fixed,
        max_length_drift: drift,
        closure: core.closure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn efw(p: &[(f64, f64)], q: &[(f64, f64)]) -> Framework {
        let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point::euclid(x, y)).collect();
        Framework::new(GeometryKind::Euclidean, pts(p), pts(q)).unwrap()
    }

    fn rigid_d2_lengths() -> Framework {
        efw(&[(1.0, 0.0), (0.0, 2.0), (4.0, 0.0)], &[(1.0, 2.0), (0.0, 0.0), (4.0, 2.0)])
    }

    #[test]
    fn rigidity_examples() {
        let d1 = efw(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], &[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
        assert_eq!(rigidity_report(&d1, 1e-9).infinitesimal_dof, 1);
        let generic = efw(&[(0.1, 0.3), (2.2, -0.7), (1.4, 2.9)], &[(-1.3, 1.1), (3.1, 0.4), (0.7, -2.2)]);
        let rep = rigidity_report(&generic, 1e-9);
        assert!(!rep.ambiguous_gap);
        assert_eq!(rep.infinitesimal_dof, 0);
        // All six joints of this framework lie on the conic y (y - 2) = 0.
        let r3 = rigid_d2_lengths();
        for x in r3.p().iter().chain(r3.q()) {
            assert_eq!(x.y() * (x.y() - 2.0), 0.0);
        }
        assert_eq!(rigidity_report(&r3, 1e-9).infinitesimal_dof, 1);
    }

    #[test]
    fn rigid_d2_lengths_is_jammed() {
        match trace_flex(&rigid_d2_lengths(), 50, 0.01, 1e-9).unwrap() {
            TraceOutcome::Jammed(j) => assert_eq!(j.fixed_pairs_tried.len(), 9),
            TraceOutcome::Path(p) => panic!(
                "moved {} frames, drift {} thetas {:?} res {:?}",
                p.frames.len(),
                p.max_length_drift,
                p.thetas,
                p.residuals
            ),
        }
    }

    #[test]
    fn dixon1_traces() {
        let d1 = efw(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], &[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
        let TraceOutcome::Path(path) = trace_flex(&d1, 200, 0.01, 1e-9).unwrap() else { panic!("jammed") };
        assert!(path.max_length_drift < 1e-9);
        assert_eq!(path.fixed, (0, 0));
        for f in &path.frames {
            assert_eq!(f.p()[0], d1.p()[0]);
            assert_eq!(f.q()[0], d1.q()[0]);
        }
        assert!(path.frames.len() >= 200, "{} frames, {}", path.frames.len(), path.closure);
    }

    #[test]
    fn argument_validation() {
        let r3 = rigid_d2_lengths();
        assert!(matches!(trace_flex(&r3, 0, 0.01, 1e-9), Err(FlexError::Usage(_))));
        assert!(matches!(trace_flex(&r3, 10, 4.0, 1e-9), Err(FlexError::Usage(_))));
        let small = efw(&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]);
        assert!(matches!(trace_flex(&small, 10, 0.01, 1e-9), Err(FlexError::Precondition(_))));
    }
}
