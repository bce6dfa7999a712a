//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p flexlab --test acceptance -- --nocapture` to see
//! the lines.

mod common;

use std::time::{Duration, Instant};

use common::corpus::{expected_kind, generator_geometries, perturb, random_instance};
use common::oracle::{cda_invariance, dixon1_agreement, dixon2_structure};
use common::props::{self, Check};
use flexlab::classifier::{check_d2_lengths33, classify, MechanismKind};
use flexlab::framework::{rod_lengths, Framework};
use flexlab::kinematics::rigidity_report;
use flexlab::polysym::verify::{verify_resultant_identities_with, Fault};
use flexlab::polysym::{verify_coefficient_identities, verify_counts, verify_discriminant_identities, Report, Status};
use flexlab::{Exec, GeometryKind, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const IDENTITY_TARGET: Duration = Duration::from_secs(10);
const CORPUS_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(5);
const ORACLE_DEVIATION: f64 = 1e-7;
const MIN_FRAMES: usize = 200;
const SAMPLES: usize = 1000;

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

impl Line {
    fn new(id: &'static str, pass: bool, detail: impl Into<String>) -> Line {
        let line = Line { id, pass, detail: detail.into() };
        println!("{} {:<4} {}", if line.pass { "PASS" } else { "FAIL" }, line.id, line.detail);
        line
    }
}

/// Merges per-geometry reports and summarizes them; inconclusive counts as failed.
fn identity_line(id: &'static str, what: &str, reports: Vec<Report>) -> Line {
    let (mut ok, mut bad) = (0, Vec::new());
    for r in &reports {
        ok += r.count(Status::Ok);
        bad.extend(r.checks.iter().filter(|c| !c.is_ok()).map(|c| format!("[{}] {c}", r.suite)));
    }
    let detail =
        if bad.is_empty() { format!("{what}: {ok} identities ok") } else { format!("{what}: {}", bad.join("; ")) };
    Line::new(id, bad.is_empty(), detail)
}

fn report_or_fail(what: &str, r: Result<Report, flexlab::FlexError>) -> Report {
    r.unwrap_or_else(|e| {
        let mut rep = Report::new(what);
        rep.push(flexlab::polysym::IdentityCheck::failed(what, e.to_string()));
        rep
    })
}

fn symbolic(lines: &mut Vec<Line>) {
    use GeometryKind::*;
    let start = Instant::now();
    let counts = |k| report_or_fail("counts", verify_counts(k));
    lines.push(identity_line("1a", "E2 F_i degree 4, 126 monomials, exact division", vec![counts(Euclidean)]));
    lines.push(identity_line(
        "1b",
        "H2/S2 f_ij 72 monomials, F_i 445 monomials, exact division",
        vec![counts(Hyperbolic), counts(Spherical)],
    ));
    lines.push(identity_line(
        "1c",
        "discriminant factorizations",
        GeometryKind::ALL.iter().map(|&k| report_or_fail("discriminants", verify_discriminant_identities(k))).collect(),
    ));
    lines.push(identity_line(
        "1d",
        "coefficient identities",
        GeometryKind::ALL.iter().map(|&k| report_or_fail("coefficients", verify_coefficient_identities(k))).collect(),
    ));
    lines.push(identity_line(
        "1e",
        "grand resultant factorizations",
        GeometryKind::ALL
            .iter()
            .map(|&k| {
                report_or_fail(
                    "resultant",
                    verify_resultant_identities_with(k, Fault::None, Exec::Parallel.effective()),
                )
            })
            .collect(),
    ));
    let took = start.elapsed();
    // The runtime is a target of the identity suite, not part of its pass condition.
    println!(
        "{} 1t   identity suite runtime {:.1} s against a target of {} s",
        if took < IDENTITY_TARGET { "MET " } else { "MISS" },
        took.as_secs_f64(),
        IDENTITY_TARGET.as_secs()
    );
}

fn corpus(lines: &mut Vec<Line>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut wrong = Vec::new();
    let mut total = 0;
    for (gen, kind) in generator_geometries() {
        for _ in 0..50 {
            let fw = random_instance(&mut rng, gen, kind);
            total += 1;
            match classify(&fw, TOL) {
                Ok(c) if c.kind == expected_kind(gen, kind) && c.flexible => {}
                other => wrong.push(format!("{gen:?} {kind}: {:?}", other.map(|c| c.kind))),
            }
        }
    }
    let gens = generator_geometries();
    let mut rigid = 0;
    for _ in 0..100 {
        let (gen, kind) = gens[rng.gen_range(0..gens.len())];
        let base = random_instance(&mut rng, gen, kind);
        let fw = perturb(&mut rng, &base, 1e-3);
        match classify(&fw, TOL) {
            Ok(c) if c.kind == MechanismKind::Rigid => rigid += 1,
            other => wrong.push(format!("perturbed {gen:?} {kind}: {:?}", other.map(|c| c.kind))),
        }
    }
    let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point::euclid(x, y)).collect();
    let fw = Framework::new(
        GeometryKind::Euclidean,
        pts(&[(1.0, 0.0), (0.0, 2.0), (4.0, 0.0)]),
        pts(&[(1.0, 2.0), (0.0, 0.0), (4.0, 2.0)]),
    )
    .unwrap();
    let lengths = check_d2_lengths33(&rod_lengths(&fw), TOL).map(|w| w.is_some()).unwrap_or(false);
    let kind = classify(&fw, TOL).map(|c| c.kind);
    let dof = rigidity_report(&fw, TOL).infinitesimal_dof;
    let triple = lengths && matches!(kind, Ok(MechanismKind::Rigid)) && dof == 1;
    let took = start.elapsed();
    let pass = wrong.is_empty() && triple && took < CORPUS_LIMIT;
    lines.push(Line::new(
        "2",
        pass,
        format!(
            "{} of {total} mechanisms, {rigid} of 100 perturbed rigid, rigid D2-length case (lengths {lengths}, {kind:?}, dof {dof}), {:.3} s (limit {} s){}",
            total - wrong.iter().filter(|w| !w.starts_with("perturbed")).count(),
            took.as_secs_f64(),
            CORPUS_LIMIT.as_secs(),
            if wrong.is_empty() { String::new() } else { format!("; misclassified: {}", wrong.join("; ")) }
        ),
    ));
}

fn kinematics(lines: &mut Vec<Line>) {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    let d1: [(GeometryKind, [f64; 3], [f64; 3]); 3] = [
        (GeometryKind::Euclidean, [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
        (GeometryKind::Hyperbolic, [0.3, 0.6, 0.9], [0.4, 0.8, 1.2]),
        (GeometryKind::Spherical, [0.3, 0.6, 0.9], [0.4, 0.8, 1.1]),
    ];
    for (kind, xs, ys) in d1 {
        let (dev, frames, drift) = dixon1_agreement(kind, &xs, &ys);
        pass &= dev < ORACLE_DEVIATION && frames >= MIN_FRAMES && drift < TOL;
        parts.push(format!("{kind} D1 dev {dev:.1e} over {frames} frames drift {drift:.1e}"));
    }
    let d2 = [
        (GeometryKind::Euclidean, Point::euclid(1.0, 2.0), Point::euclid(3.0, 4.0)),
        (GeometryKind::Hyperbolic, Point::disk(0.3, 0.2).unwrap(), Point::disk(0.25, 0.5).unwrap()),
    ];
    for (kind, pa, qa) in d2 {
        let (eq, _, frames) = dixon2_structure(kind, pa, qa);
        pass &= eq < TOL && frames > 1;
        parts.push(format!("{kind} D2 equalities {eq:.1e}"));
    }
    let (worst, frames) = cda_invariance(1.0, 0.7);
    pass &= worst < TOL && frames > 1;
    parts.push(format!("CDA <p0,q0> {worst:.1e}"));
    let took = start.elapsed();
    pass &= took < ORACLE_LIMIT;
    parts.push(format!("{:.3} s (limit {} s)", took.as_secs_f64(), ORACLE_LIMIT.as_secs()));
    lines.push(Line::new("3", pass, parts.join(", ")));
}

fn necessary_conditions(lines: &mut Vec<Line>) {
    let mut bad = Vec::new();
    let instances = common::dixon_instances();
    for inst in &instances {
        let (a, b) = common::eliminant_resultants(inst);
        if !a.is_zero() || !b.is_zero() {
            bad.push(inst.name);
        }
    }
    let f = common::dixon1_square_factor();
    let factor = f.divides == [true, true] && f.squares == [true, true] && f.common_root;
    lines.push(Line::new(
        "4",
        bad.is_empty() && factor,
        format!(
            "both resultants vanish on {} of {} rational Dixon instances{}; Dixon-1 square factor {f:?}",
            instances.len() - bad.len(),
            instances.len(),
            if bad.is_empty() { String::new() } else { format!(" (nonzero: {})", bad.join(", ")) }
        ),
    ));
}

fn sampled(
    id: &'static str,
    what: &str,
    kinds: &[GeometryKind],
    seed: u64,
    f: impl Fn(&mut ChaCha8Rng, GeometryKind) -> Check,
) -> Line {
    let mut violations = Vec::new();
    for (k, &kind) in kinds.iter().enumerate() {
        for i in 0..SAMPLES {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 32) ^ i as u64);
            if let Err(e) = f(&mut rng, kind) {
                violations.push(format!("{kind} sample {i}: {e}"));
            }
        }
    }
    let detail = format!(
        "{what}: {} violations in {} samples{}",
        violations.len(),
        SAMPLES * kinds.len(),
        violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
    );
    Line::new(id, violations.is_empty(), detail)
}

fn properties(lines: &mut Vec<Line>) {
    let all = GeometryKind::ALL;
    lines.push(sampled("5a", "metric axioms", &all, 1, props::metric_axioms));
    lines.push(sampled("5b", "model agreement", &all, 2, props::model_agreement));
    lines.push(sampled("5c", "orthogonal diagonals iff side criterion", &all, 3, props::quadrilateral));
    lines.push(sampled("5d", "quotient idempotence", &all, 4, props::quotient_idempotent));
    lines.push(sampled("5e", "antipodal normalization involution", &[GeometryKind::Spherical], 5, |r, _| {
        props::normalize_involution(r)
    }));
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    symbolic(&mut lines);
    corpus(&mut lines);
    kinematics(&mut lines);
    necessary_conditions(&mut lines);
    properties(&mut lines);
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!("{} criteria lines, {} failed", lines.len(), failed.len());
    assert!(
        failed.is_empty(),
        "failed criteria: {failed:?}; {}",
        lines.iter().map(|l| l.detail.as_str()).collect::<Vec<_>>().join(" | ")
    );
}
