//! Two-part frameworks: joints, rod lengths, overlaps, the overlapping-joint
//! quotient and antipodal normalization on the sphere.
//!
//! Joint indices are 0-based; `p_0` and `q_0` form the distinguished pair
//! that stays fixed during a flex.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{FlexError, Result};
use crate::geometry::{antipode, convert_point, cos_distance, dist, from_model, GeometryKind, Model, Point, MODEL_TOL};

/// One of the two parts of a framework.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    P,
    Q,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Part::P => "P",
            Part::Q => "Q",
        })
    }
}

/// A complete bipartite framework: every `p_i` is joined to every `q_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    kind: GeometryKind,
    p: Vec<Point>,
    q: Vec<Point>,
}

impl Framework {
    /// Validates part sizes, geometries, and that no rod has zero length
    /// (or, on the sphere, joins antipodal points).
    pub fn new(kind: GeometryKind, p: Vec<Point>, q: Vec<Point>) -> Result<Framework> {
        if p.is_empty() || q.is_empty() {
            return Err(FlexError::InvalidFramework("both parts need at least one joint".into()));
        }
        for (part, pts) in [(Part::P, &p), (Part::Q, &q)] {
            for (i, x) in pts.iter().enumerate() {
                if x.kind() != kind {
                    return Err(FlexError::InvalidFramework(format!(
                        "{part}[{i}] is a {} point in a {kind} framework",
                        x.kind()
                    )));
                }
            }
        }
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                if dist(a, b) <= MODEL_TOL {
                    return Err(FlexError::InvalidFramework(format!("p_{i} coincides with q_{j}")));
                }
                if kind == GeometryKind::Spherical && (a.lift() + b.lift()).norm() <= MODEL_TOL {
                    return Err(FlexError::InvalidFramework(format!("p_{i} is antipodal to q_{j}")));
                }
            }
        }
        Ok(Framework { kind, p, q })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn p(&self) -> &[Point] {
        &self.p
    }

    pub fn q(&self) -> &[Point] {
        &self.q
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn part(&self, part: Part) -> &[Point] {
        match part {
            Part::P => &self.p,
            Part::Q => &self.q,
        }
    }

    /// The framework with both parts reordered: joint `k` of the result is
    /// joint `p_order[k]` (resp. `q_order[k]`) of `self`.
    pub fn reindexed(&self, p_order: &[usize], q_order: &[usize]) -> Result<Framework> {
        let pick = |pts: &[Point], order: &[usize]| -> Result<Vec<Point>> {
            order
                .iter()
                .map(|&k| pts.get(k).copied().ok_or_else(|| FlexError::Usage(format!("joint index {k} out of range"))))
                .collect()
        };
        Framework::new(self.kind, pick(&self.p, p_order)?, pick(&self.q, q_order)?)
    }

    /// Reads the JSON file format, converting from any model of the geometry.
    pub fn from_json(text: &str) -> Result<Framework> {
        let file: FrameworkFile =
            serde_json::from_str(text).map_err(|e| FlexError::Usage(format!("invalid framework JSON: {e}")))?;
        file.into_framework()
    }

    pub fn from_value(value: &Value) -> Result<Framework> {
        let file =
            FrameworkFile::deserialize(value).map_err(|e| FlexError::Usage(format!("invalid framework JSON: {e}")))?;
        file.into_framework()
    }

    /// The JSON document in the canonical model.
    pub fn to_value(&self) -> Value {
        let coords = |pts: &[Point]| pts.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>();
        json!({
            "geometry": self.kind,
            "model": self.kind.canonical_model(),
            "P": coords(&self.p),
            "Q": coords(&self.q),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("framework values serialize")
    }

    /// Coordinates of every joint in `model`.
    pub fn coords_in(&self, model: Model) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let conv = |pts: &[Point]| pts.iter().map(|x| convert_point(x, model)).collect::<Result<Vec<_>>>();
        Ok((conv(&self.p)?, conv(&self.q)?))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameworkFile {
    geometry: GeometryKind,
    #[serde(default)]
    model: Option<Model>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
}

impl FrameworkFile {
    fn into_framework(self) -> Result<Framework> {
        let model = self.model.unwrap_or(self.geometry.canonical_model());
        if model.kind() != self.geometry {
            return Err(FlexError::Usage(format!(
                "field \"model\": {model:?} does not describe the {} plane",
                self.geometry
            )));
        }
        let read = |name: &str, rows: &[Vec<f64>]| -> Result<Vec<Point>> {
            rows.iter()
                .enumerate()
                .map(|(i, c)| from_model(model, c).map_err(|e| FlexError::Usage(format!("field \"{name}\"[{i}]: {e}"))))
                .collect()
        };
        Framework::new(self.geometry, read("P", &self.p)?, read("Q", &self.q)?)
    }
}

/// Rod lengths `r_ij = |p_i q_j|` with the `u`-view `cosh r_ij` or `cos r_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthMatrix {
    kind: GeometryKind,
    r: Vec<Vec<f64>>,
    u: Option<Vec<Vec<f64>>>,
}

impl LengthMatrix {
    /// Lengths given directly; they must be positive (and below `pi` on the sphere).
    pub fn new(kind: GeometryKind, r: Vec<Vec<f64>>) -> Result<LengthMatrix> {
        check_rectangular(&r)?;
        for (i, row) in r.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let ok = x > 0.0 && x.is_finite() && (kind != GeometryKind::Spherical || x < std::f64::consts::PI);
                if !ok {
                    return Err(FlexError::Domain(format!("rod length r_{i}{j} = {x} is out of range")));
                }
            }
        }
        let u = match kind {
            GeometryKind::Euclidean => None,
            GeometryKind::Hyperbolic => Some(r.iter().map(|row| row.iter().map(|x| x.cosh()).collect()).collect()),
            GeometryKind::Spherical => Some(r.iter().map(|row| row.iter().map(|x| x.cos()).collect()).collect()),
        };
        Ok(LengthMatrix { kind, r, u })
    }

    /// Lengths given through their `u`-values (hyperbolic or spherical).
    pub fn from_u(kind: GeometryKind, u: Vec<Vec<f64>>) -> Result<LengthMatrix> {
        check_rectangular(&u)?;
        let r = match kind {
            GeometryKind::Euclidean => return Err(FlexError::Usage("the Euclidean plane has no u-values".into())),
            GeometryKind::Hyperbolic => {
                if u.iter().flatten().any(|&x| !(x > 1.0) || !x.is_finite()) {
                    return Err(FlexError::Domain("hyperbolic u-values must exceed 1".into()));
                }
                u.iter().map(|row| row.iter().map(|x| x.acosh()).collect()).collect()
            }
            GeometryKind::Spherical => {
                if u.iter().flatten().any(|&x| !(x > -1.0 && x < 1.0)) {
                    return Err(FlexError::Domain("spherical u-values must lie in (-1, 1)".into()));
                }
                u.iter().map(|row| row.iter().map(|x| x.acos()).collect()).collect()
            }
        };
        Ok(LengthMatrix { kind, r, u: Some(u) })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.r.len()
    }

    pub fn n(&self) -> usize {
        self.r[0].len()
    }

    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.r[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.r
    }

    /// `cosh r_ij` or `cos r_ij`; `None` in the Euclidean plane.
    pub fn u(&self, i: usize, j: usize) -> Option<f64> {
        self.u.as_ref().map(|u| u[i][j])
    }

    pub fn u_rows(&self) -> Option<&[Vec<f64>]> {
        self.u.as_deref()
    }

    /// The quantity entering the length criteria: `r^2` in the plane, `u` otherwise.
    pub fn criterion_value(&self, i: usize, j: usize) -> f64 {
        match &self.u {
            Some(u) => u[i][j],
            None => self.r[i][j] * self.r[i][j],
        }
    }
}

fn check_rectangular(rows: &[Vec<f64>]) -> Result<()> {
    if rows.is_empty() || rows[0].is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(FlexError::Usage("a length matrix must be a nonempty rectangle".into()));
    }
    Ok(())
}

pub fn rod_lengths(fw: &Framework) -> LengthMatrix {
    let r = fw.p.iter().map(|a| fw.q.iter().map(|b| dist(a, b)).collect()).collect();
    let u = match fw.kind {
        GeometryKind::Euclidean => None,
        _ => Some(
            fw.p.iter().map(|a| fw.q.iter().map(|b| cos_distance(a, b).expect("same geometry")).collect()).collect(),
        ),
    };
    LengthMatrix { kind: fw.kind, r, u }
}

/// A pair of joints of one part, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct JointPair {
    pub part: Part,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OverlapStatus {
    NonOverlapping,
    P2NonOverlapping,
    Overlapping,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapReport {
    pub within_part_coincidences: Vec<JointPair>,
    pub s2_antipodal_within_part: Vec<JointPair>,
    pub status: OverlapStatus,
}

impl OverlapReport {
    /// Non-overlapping, and on the sphere also free of antipodal pairs.
    pub fn is_clean(&self) -> bool {
        self.status != OverlapStatus::Overlapping && self.s2_antipodal_within_part.is_empty()
    }
}

fn antipodal(a: &Point, b: &Point, tol: f64) -> bool {
    a.kind() == GeometryKind::Spherical && dist(a, b) >= std::f64::consts::PI - tol
}

pub fn overlap_status(fw: &Framework, tol: f64) -> OverlapReport {
    let mut same = Vec::new();
    let mut anti = Vec::new();
    for part in [Part::P, Part::Q] {
        let pts = fw.part(part);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if dist(&pts[i], &pts[j]) < tol {
                    same.push(JointPair { part, i, j });
                } else if antipodal(&pts[i], &pts[j], tol) {
                    anti.push(JointPair { part, i, j });
                }
            }
        }
    }
    let status = if !same.is_empty() {
        OverlapStatus::Overlapping
    } else if fw.kind == GeometryKind::Spherical && anti.is_empty() {
        OverlapStatus::P2NonOverlapping
    } else {
        OverlapStatus::NonOverlapping
    };
    OverlapReport { within_part_coincidences: same, s2_antipodal_within_part: anti, status }
}

/// Classes of the transitive closure of `close`, each sorted, ordered by
/// their smallest member.
fn closure_classes(len: usize, close: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..len).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..len {
        for j in i + 1..len {
            if close(i, j) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; len];
    for i in 0..len {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(i);
    }
    classes
}

/// Collapses every class of overlapping joints to its lowest-indexed member.
///
/// On the sphere antipodal joints of one part are identified as well: an
/// antipodal flip changes no flexibility property, so such a pair behaves
/// like a coincident one.
pub fn quotient(fw: &Framework, tol: f64) -> Result<Framework> {
    let linked = |a: &Point, b: &Point| dist(a, b) < tol || antipodal(a, b, tol);
    for (i, a) in fw.p.iter().enumerate() {
        for (j, b) in fw.q.iter().enumerate() {
            if linked(a, b) {
                return Err(FlexError::InvalidFramework(format!("collapsing would merge p_{i} with q_{j}")));
            }
        }
    }
    let collapse = |pts: &[Point]| -> Vec<Point> {
        closure_classes(pts.len(), |i, j| linked(&pts[i], &pts[j])).iter().map(|c| pts[c[0]]).collect()
    };
    Framework::new(fw.kind, collapse(&fw.p), collapse(&fw.q))
}

/// Which joints were replaced by their antipodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipRecord {
    pub p: Vec<bool>,
    pub q: Vec<bool>,
}

impl FlipRecord {
    pub fn identity(m: usize, n: usize) -> FlipRecord {
        FlipRecord { p: vec![false; m], q: vec![false; n] }
    }

    pub fn is_identity(&self) -> bool {
        !self.p.iter().chain(&self.q).any(|&f| f)
    }

    /// Replaces the recorded joints by their antipodes; applying twice is the identity.
    pub fn apply(&self, fw: &Framework) -> Result<Framework> {
        if fw.kind != GeometryKind::Spherical {
            return Err(FlexError::Usage("antipodal flips exist on the sphere only".into()));
        }
        if self.p.len() != fw.m() || self.q.len() != fw.n() {
            return Err(FlexError::Usage("flip record does not match the framework size".into()));
        }
        let flip = |pts: &[Point], f: &[bool]| -> Result<Vec<Point>> {
            pts.iter().zip(f).map(|(x, &b)| if b { antipode(x) } else { Ok(*x) }).collect()
        };
        Framework::new(fw.kind, flip(&fw.p, &self.p)?, flip(&fw.q, &self.q)?)
    }
}

/// Result of [`normalize_antipodal`]; `residual` lists rods at the fixed
/// pair that remain longer than `pi / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub framework: Framework,
    pub flips: FlipRecord,
    pub residual: Vec<(usize, usize)>,
}

/// Flips joints so that every rod at `p_0` or `q_0` has length at most `pi / 2`.
pub fn normalize_antipodal(fw: &Framework) -> Result<Normalized> {
    if fw.kind != GeometryKind::Spherical {
        return Err(FlexError::Usage("antipodal normalization applies to spherical frameworks".into()));
    }
    let u = |a: &Point, b: &Point| a.lift().dot(&b.lift());
    let mut flips = FlipRecord::identity(fw.m(), fw.n());
    flips.q[0] = u(&fw.p[0], &fw.q[0]) < 0.0;
    let q0 = if flips.q[0] { antipode(&fw.q[0])? } else { fw.q[0] };
    for i in 1..fw.m() {
        flips.p[i] = u(&fw.p[i], &q0) < 0.0;
    }
    for j in 1..fw.n() {
        flips.q[j] = u(&fw.p[0], &fw.q[j]) < 0.0;
    }
    let framework = flips.apply(fw)?;
    let mut residual = Vec::new();
    for i in 0..framework.m() {
        for j in 0..framework.n() {
            if (i == 0 || j == 0) && u(&framework.p[i], &framework.q[j]) < 0.0 {
                residual.push((i, j));
            }
        }
    }
    Ok(Normalized { framework, flips, residual })
}
