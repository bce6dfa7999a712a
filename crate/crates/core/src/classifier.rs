//! Flexibility and mechanism kind of two-part frameworks.
//!
//! Geometric predicates decide; the pure length criteria are reported as
//! diagnostics only, since they are necessary but not sufficient.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{FlexError, Result};
use crate::framework::{
    normalize_antipodal, overlap_status, quotient, rod_lengths, FlipRecord, Framework, LengthMatrix,
};
use crate::geometry::{
    dist, fit_geodesic, geodesics_orthogonal, perpendicular_bisector, Geodesic, GeometryKind, Point,
};

/// Tolerance-relative equality `|x - y| <= tol (1 + |x| + |y|)`.
pub fn approx_eq(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * (1.0 + x.abs() + y.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MechanismKind {
    Rigid,
    Dixon1,
    Dixon2,
    SphericalD1,
    ProjectiveD2,
    #[serde(rename = "CDA")]
    Cda,
    SmallPartFree,
    TwoRowChain,
}

impl MechanismKind {
    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Rigid => "Rigid",
            MechanismKind::Dixon1 => "Dixon1",
            MechanismKind::Dixon2 => "Dixon2",
            MechanismKind::SphericalD1 => "SphericalD1",
            MechanismKind::ProjectiveD2 => "ProjectiveD2",
            MechanismKind::Cda => "CDA",
            MechanismKind::SmallPartFree => "SmallPartFree",
            MechanismKind::TwoRowChain => "TwoRowChain",
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Evidence for a classification.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    /// The geodesics carrying the two parts.
    Dixon1 {
        p_geodesic: Geodesic,
        q_geodesic: Geodesic,
    },
    /// The symmetry axes, the first joint of each part as orbit anchor, and
    /// the antipodal flips applied before the orbit test.
    Dixon2 {
        axes: [Geodesic; 2],
        p_anchor: Point,
        q_anchor: Point,
        flips: FlipRecord,
    },
    /// Renumbering, flips and the common value `c` of the pattern
    /// `u_11 = u_21 = u_22 = -u_12 = c`, `u_0k = u_k0 = 0`.
    Cda {
        p_order: [usize; 3],
        q_order: [usize; 3],
        flips: FlipRecord,
        c: f64,
    },
    /// A 4-cycle `p_i q_j p_k q_l` with one rod as long as the other three.
    JammedCycle {
        p: [usize; 2],
        q: [usize; 2],
    },
}

fn geodesic_value(g: &Geodesic) -> Value {
    let n = g.normal();
    json!({ "normal": [n[0], n[1], n[2]], "shape": g.shape() })
}

impl Witness {
    pub fn to_value(&self) -> Value {
        match self {
            Witness::None => json!({ "type": "none" }),
            Witness::Dixon1 { p_geodesic, q_geodesic } => json!({
                "type": "orthogonal_geodesics",
                "p_geodesic": geodesic_value(p_geodesic),
                "q_geodesic": geodesic_value(q_geodesic),
            }),
            Witness::Dixon2 { axes, p_anchor, q_anchor, flips } => json!({
                "type": "symmetry_axes",
                "axes": [geodesic_value(&axes[0]), geodesic_value(&axes[1])],
                "p_anchor": p_anchor.coords(),
                "q_anchor": q_anchor.coords(),
                "flips": flips,
            }),
            Witness::Cda { p_order, q_order, flips, c } => json!({
                "type": "sign_pattern",
                "p_order": p_order,
                "q_order": q_order,
                "flips": flips,
                "c": c,
            }),
            Witness::JammedCycle { p, q } => json!({ "type": "jammed_cycle", "p": p, "q": q }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub d1_lengths: bool,
    pub d2_lengths: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub flexible: bool,
    pub kind: MechanismKind,
    pub internal_dof_claim: usize,
    pub witness: Witness,
    /// Antipodal normalization applied before detection (sphere only).
    pub normalization: Option<FlipRecord>,
    pub diagnostics: Diagnostics,
}

impl Classification {
    fn new(kind: MechanismKind, dof: usize, witness: Witness) -> Classification {
        Classification {
            flexible: kind != MechanismKind::Rigid,
            kind,
            internal_dof_claim: dof,
            witness,
            normalization: None,
            diagnostics: Diagnostics { d1_lengths: false, d2_lengths: false },
        }
    }

    pub fn to_value(&self) -> Value {
        let mut witness = self.witness.to_value();
        if let Some(f) = &self.normalization {
            witness["normalization"] = json!(f);
        }
        json!({
            "flexible": self.flexible,
            "kind": self.kind.name(),
            "dof": self.internal_dof_claim,
            "witness": witness,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Rejects frameworks with coincident joints, or antipodal joints of one
/// part on the sphere.
fn require_clean(fw: &Framework, tol: f64) -> Result<()> {
    let rep = overlap_status(fw, tol);
    if !rep.is_clean() {
        return Err(FlexError::Precondition(
            "joints overlap (or are antipodal within a part); apply quotient() first".into(),
        ));
    }
    Ok(())
}

/// Both parts on geodesics that meet at a right angle.
pub fn detect_dixon1(fw: &Framework, tol: f64) -> Result<Option<Witness>> {
    require_clean(fw, tol)?;
    if fw.m() < 2 || fw.n() < 2 {
        return Err(FlexError::Precondition("both parts need at least two joints".into()));
    }
    let (Some(gp), Some(gq)) = (fit_geodesic(fw.p(), tol)?, fit_geodesic(fw.q(), tol)?) else {
        return Ok(None);
    };
    match geodesics_orthogonal(&gp, &gq, tol) {
        Ok(true) => Ok(Some(Witness::Dixon1 { p_geodesic: gp, q_geodesic: gq })),
        Ok(false) | Err(FlexError::NoIntersection) => Ok(None),
        Err(e) => Err(e),
    }
}

fn same_point(a: &Point, b: &Point, tol: f64) -> bool {
    let scale = |x: &Point| x.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
    dist(a, b) <= tol * (1.0 + scale(a) + scale(b))
}

/// Whether `pts` lies in the orbit of `pts[0]` under the reflections in
/// `axes`, with no point on an axis.
fn in_orbit(pts: &[Point], axes: &[Geodesic; 2], tol: f64) -> Result<bool> {
    if pts.iter().any(|x| axes.iter().any(|g| g.distance_to(x) <= tol)) {
        return Ok(false);
    }
    let z = pts[0];
    let a = axes[0].reflect(&z)?;
    let b = axes[1].reflect(&z)?;
    let ab = axes[1].reflect(&a)?;
    let orbit = [z, a, b, ab];
    Ok(pts.iter().all(|x| orbit.iter().any(|o| same_point(x, o, tol))))
}

/// Candidate symmetry axes: perpendicular bisectors of same-part joint pairs.
fn bisectors(fw: &Framework) -> Vec<Geodesic> {
    let mut out = Vec::new();
    for pts in [fw.p(), fw.q()] {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if let Ok(g) = perpendicular_bisector(&pts[i], &pts[j]) {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn dixon2_axes(fw: &Framework, tol: f64) -> Result<Option<[Geodesic; 2]>> {
    let cands = bisectors(fw);
    for (k, g1) in cands.iter().enumerate() {
        for g2 in &cands[k + 1..] {
            if !matches!(geodesics_orthogonal(g1, g2, tol), Ok(true)) {
                continue;
            }
            let axes = [*g1, *g2];
            if in_orbit(fw.p(), &axes, tol)? && in_orbit(fw.q(), &axes, tol)? {
                return Ok(Some(axes));
            }
        }
    }
    Ok(None)
}

/// Each part inside the orbit of one joint under reflections in two
/// orthogonal geodesics. On the sphere individual joints may first be
/// replaced by their antipodes.
pub fn detect_dixon2(fw: &Framework, tol: f64) -> Result<Option<Witness>> {
    if fw.m() > 4 || fw.n() > 4 {
        return Ok(None);
    }
    if fw.m() < 3 || fw.n() < 3 {
        return Err(FlexError::Precondition("both parts need three or four joints".into()));
    }
    require_clean(fw, tol)?;
    let witness = |axes: [Geodesic; 2], f: &Framework, flips: FlipRecord| Witness::Dixon2 {
        axes,
        p_anchor: f.p()[0],
        q_anchor: f.q()[0],
        flips,
    };
    if fw.kind() != GeometryKind::Spherical {
        return Ok(dixon2_axes(fw, tol)?.map(|a| witness(a, fw, FlipRecord::identity(fw.m(), fw.n()))));
    }
    // Flipping a whole part maps the orbit of z to the orbit of -z, so the
    // first joint of each part stays unflipped.
    let (m, n) = (fw.m(), fw.n());
    for mask in 0u32..1 << (m + n - 2) {
        let mut flips = FlipRecord::identity(m, n);
        for i in 1..m {
            flips.p[i] = mask >> (i - 1) & 1 == 1;
        }
        for j in 1..n {
            flips.q[j] = mask >> (m - 1 + j - 1) & 1 == 1;
        }
        let f = flips.apply(fw)?;
        if let Some(axes) = dixon2_axes(&f, tol)? {
            return Ok(Some(witness(axes, &f, flips)));
        }
    }
    Ok(None)
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The spherical (3,3) pattern `<p_0,q_k> = <q_0,p_k> = 0` and
/// `<p_1,q_1> = <q_1,p_2> = <p_2,q_2> = -<q_2,p_1>` up to renumbering and
/// antipodal flips.
pub fn detect_cda(fw: &Framework, tol: f64) -> Result<Option<Witness>> {
    if fw.kind() != GeometryKind::Spherical || fw.m() != 3 || fw.n() != 3 {
        return Err(FlexError::Precondition("the CDA pattern applies to spherical (3,3) frameworks".into()));
    }
    require_clean(fw, tol)?;
    let l = rod_lengths(fw);
    let u = l.u_rows().expect("spherical u-values");
    let zero = |x: f64| approx_eq(x, 0.0, tol);
    for po in PERMS3 {
        for qo in PERMS3 {
            let v = |i: usize, j: usize| u[po[i]][qo[j]];
            if !(zero(v(0, 1)) && zero(v(0, 2)) && zero(v(1, 0)) && zero(v(2, 0))) || zero(v(0, 0)) {
                continue;
            }
            for signs in 0u32..16 {
                let s = [1.0, if signs & 1 == 1 { -1.0 } else { 1.0 }, if signs & 2 == 2 { -1.0 } else { 1.0 }];
                let t = [1.0, if signs & 4 == 4 { -1.0 } else { 1.0 }, if signs & 8 == 8 { -1.0 } else { 1.0 }];
                let w = |i: usize, j: usize| s[i] * t[j] * v(i, j);
                let c = w(1, 1);
                if zero(c) || !approx_eq(w(2, 1), c, tol) || !approx_eq(w(2, 2), c, tol) || !approx_eq(-w(1, 2), c, tol)
                {
                    continue;
                }
                let mut flips = FlipRecord::identity(3, 3);
                for k in 1..3 {
                    flips.p[po[k]] = s[k] < 0.0;
                    flips.q[qo[k]] = t[k] < 0.0;
                }
                return Ok(Some(Witness::Cda { p_order: po, q_order: qo, flips, c }));
            }
        }
    }
    Ok(None)
}

/// Dixon-1 length condition on every 4-cycle: `r_ij^2 + r_kl^2 = r_il^2 + r_kj^2`
/// in the plane, `u_ij u_kl = u_il u_kj` otherwise.
pub fn check_d1_lengths(l: &LengthMatrix, tol: f64) -> Result<bool> {
    if l.m() < 2 || l.n() < 2 {
        return Err(FlexError::Precondition("the length criterion needs two joints per part".into()));
    }
    let x = |i, j| l.criterion_value(i, j);
    for i in 0..l.m() {
        for k in i + 1..l.m() {
            for j in 0..l.n() {
                for m in j + 1..l.n() {
                    let holds = if l.kind() == GeometryKind::Euclidean {
                        approx_eq(x(i, j) + x(k, m), x(i, m) + x(k, j), tol)
                    } else {
                        approx_eq(x(i, j) * x(k, m), x(i, m) * x(k, j), tol)
                    };
                    if !holds {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Renumbering (and, on the sphere, flips) realizing the Dixon-2 length
/// pattern. Values are `r^2` in the plane and `u` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct D2Labeling {
    pub p_order: [usize; 3],
    pub q_order: [usize; 3],
    pub flips: Option<FlipRecord>,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// `x_00 = x_11 = x_22 = a`, `x_01 = x_10 = b`, `x_02 = x_20 = c`,
/// `x_12 = x_21 = d` with `a + c = b + d`, where `x` is `r^2` or `u`.
pub fn check_d2_lengths33(l: &LengthMatrix, tol: f64) -> Result<Option<D2Labeling>> {
    if l.m() != 3 || l.n() != 3 {
        return Err(FlexError::Precondition("the Dixon-2 length pattern is defined for (3,3) frameworks".into()));
    }
    let sphere = l.kind() == GeometryKind::Spherical;
    let sign_patterns = if sphere { 64 } else { 1 };
    let eq = |x: f64, y: f64| approx_eq(x, y, tol);
    for po in PERMS3 {
        for qo in PERMS3 {
            for signs in 0u32..sign_patterns {
                let sg = |bit: usize| if signs >> bit & 1 == 1 { -1.0 } else { 1.0 };
                let x = |i: usize, j: usize| sg(i) * sg(3 + j) * l.criterion_value(po[i], qo[j]);
                let (a, b, c, d) = (x(0, 0), x(0, 1), x(0, 2), x(1, 2));
                let holds = eq(x(1, 1), a)
                    && eq(x(2, 2), a)
                    && eq(x(1, 0), b)
                    && eq(x(2, 0), c)
                    && eq(x(2, 1), d)
                    && eq(a + c, b + d);
                if holds {
                    let flips = sphere.then(|| {
                        let mut f = FlipRecord::identity(3, 3);
                        for k in 0..3 {
                            f.p[po[k]] = sg(k) < 0.0;
                            f.q[qo[k]] = sg(3 + k) < 0.0;
                        }
                        f
                    });
                    return Ok(Some(D2Labeling { p_order: po, q_order: qo, flips, a, b, c, d }));
                }
            }
        }
    }
    Ok(None)
}

/// Flexibility when a part has at most two joints.
///
/// A part with one joint leaves the other part's joints free on their
/// circles. With two joints the framework flexes unless some 4-cycle
/// `p_i q_j p_k q_l` has one rod as long as the other three together.
pub fn two_part_flexibility(fw: &Framework, tol: f64) -> Result<Classification> {
    let (m, n) = (fw.m(), fw.n());
    if m.min(n) >= 3 {
        return Err(FlexError::Precondition("two_part_flexibility needs a part with at most two joints".into()));
    }
    if m == 1 || n == 1 {
        let dof = m.max(n) - 1;
        let kind = if dof == 0 { MechanismKind::Rigid } else { MechanismKind::SmallPartFree };
        return Ok(Classification::new(kind, dof, Witness::None));
    }
    let l = rod_lengths(fw);
    for i in 0..m {
        for k in i + 1..m {
            for j in 0..n {
                for jj in j + 1..n {
                    let rods = [l.r(i, j), l.r(k, j), l.r(k, jj), l.r(i, jj)];
                    let total: f64 = rods.iter().sum();
                    if rods.iter().any(|&r| approx_eq(r, total - r, tol)) {
                        return Ok(Classification::new(
                            MechanismKind::Rigid,
                            0,
                            Witness::JammedCycle { p: [i, k], q: [j, jj] },
                        ));
                    }
                }
            }
        }
    }
    Ok(Classification::new(MechanismKind::TwoRowChain, 1, Witness::None))
}

/// Full decision: quotient, small parts, antipodal normalization, then the
/// geometric detectors in the order Dixon-1, Dixon-2, CDA.
pub fn classify(fw: &Framework, tol: f64) -> Result<Classification> {
    let qf = quotient(fw, tol)?;
    if qf.m().min(qf.n()) <= 2 {
        let mut c = two_part_flexibility(&qf, tol)?;
        if qf.m() >= 2 && qf.n() >= 2 {
            c.diagnostics.d1_lengths = check_d1_lengths(&rod_lengths(&qf), tol)?;
        }
        return Ok(c);
    }
    let sphere = fw.kind() == GeometryKind::Spherical;
    let (work, normalization) = if sphere {
        let nf = normalize_antipodal(&qf)?;
        (nf.framework, Some(nf.flips))
    } else {
        (qf, None)
    };
    let lengths = rod_lengths(&work);
    let diagnostics = Diagnostics {
        d1_lengths: check_d1_lengths(&lengths, tol)?,
        d2_lengths: work.m() == 3 && work.n() == 3 && check_d2_lengths33(&lengths, tol)?.is_some(),
    };
    let small = work.m() <= 4 && work.n() <= 4;
    let mut found = None;
    if let Some(w) = detect_dixon1(&work, tol)? {
        found = Some((if sphere { MechanismKind::SphericalD1 } else { MechanismKind::Dixon1 }, w));
    } else if let Some(w) = if small { detect_dixon2(&work, tol)? } else { None } {
        found = Some((if sphere { MechanismKind::ProjectiveD2 } else { MechanismKind::Dixon2 }, w));
    } else if sphere && work.m() == 3 && work.n() == 3 {
        found = detect_cda(&work, tol)?.map(|w| (MechanismKind::Cda, w));
    }
    let (kind, witness, dof) = match found {
        Some((k, w)) => (k, w, 1),
        None => (MechanismKind::Rigid, Witness::None, 0),
    };
    let mut c = Classification::new(kind, dof, witness);
    c.normalization = normalization;
    c.diagnostics = diagnostics;
    Ok(c)
}
