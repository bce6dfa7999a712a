//! Machine checks of the factorization identities satisfied by `f_ij`, `F_i`,
//! their discriminants, the coefficients of `F_1 - lam F_2` and the
//! resultant of `F_1` and `F_2` after the symmetric length substitutions.
//!
//! Euclidean identities are checked exactly. Hyperbolic and spherical ones
//! hold up to units (rational constants times powers of `u ± 1`); the sine
//! or sinh factors are housed in a square-root extension in which
//! `s_x^2 = sigma (x^2 - 1)`, with `sigma = +1` on `H^2` and `-1` on `S^2`.
//! The pair-product rule `s(P+Q) s(P-Q) = (C(P) - C(Q)) / 2`, where `C` is
//! `cosh` or `cos`, turns every product of half-angle factors into a
//! polynomial in the `u` symbols.

use std::sync::Arc;

use flexlab_algebra::{
    discriminant_coeffs, formal_discriminant, rat, resultant_coeffs, ExactRing, ExtElem, MvPoly, Ring, SqrtExt,
    UnitEquivalence,
};
use num_rational::BigRational;

use super::build::{build_F, build_f, ring_for, sym};
use super::report::{Certificate, IdentityCheck, Report};
use crate::error::Result;
use crate::exec::Exec;
use crate::geometry::GeometryKind;

/// Exponent bound of the unit search.
pub const UNIT_BOUND: u32 = 8;

/// A deliberate corruption of an expected value, used to show that a suite
/// can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Adds 1 to the linear coefficient of `d_1^+`.
    DPlusCoefficient,
    /// Lowers one exponent 4 of the expected resultant product to 3.
    ResultantExponent,
}

fn suite_name(kind: GeometryKind, what: &str) -> String {
    format!("{}-{what}", kind_label(kind))
}

pub(crate) fn kind_label(kind: GeometryKind) -> &'static str {
    match kind {
        GeometryKind::Euclidean => "euclidean",
        GeometryKind::Hyperbolic => "hyperbolic",
        GeometryKind::Spherical => "spherical",
    }
}

fn sigma(kind: GeometryKind) -> i64 {
    if kind == GeometryKind::Spherical {
        -1
    } else {
        1
    }
}

/// Maps every variable of `p` by name into `target`.
fn map_names(p: &MvPoly, target: &Arc<Ring>, f: impl Fn(&str) -> MvPoly) -> MvPoly {
    let values: Vec<MvPoly> = p.ring().names().iter().map(|n| f(n)).collect();
    p.compose(target, &values).expect("one value per variable")
}

fn exact(name: &str, lhs: &MvPoly, rhs: &MvPoly) -> IdentityCheck {
    IdentityCheck::exact(name, (lhs - rhs).len())
}

fn curved_units(ring: &Arc<Ring>, vars: &[&str]) -> UnitEquivalence {
    UnitEquivalence::for_vars(ring, vars, UNIT_BOUND).expect("unit variables exist")
}

// ---------------------------------------------------------------------------
// Counts and exact normalization

/// Degrees, monomial counts and exactness of the normalizing division.
pub fn verify_counts(kind: GeometryKind) -> Result<Report> {
    let mut rep = Report::new(suite_name(kind, "counts"));
    let ring = ring_for(kind);
    let f_terms = if kind == GeometryKind::Euclidean { 10 } else { 72 };
    for i in 1..=2 {
        for j in 1..=2 {
            let f = build_f(kind, i, j)?;
            rep.push(
                IdentityCheck::from_bool(format!("f_{i}{j} has {f_terms} monomials"), f.len() == f_terms)
                    .with_note(format!("observed {}", f.len())),
            );
        }
    }
    for i in 1..=2 {
        let name = format!("Res_T{i}(f_{i}1, f_{i}2) divisible by the normalizer");
        let big = match build_F(kind, i) {
            Ok(p) => {
                rep.push(IdentityCheck::exact(name, 0));
                p
            }
            Err(e) => {
                rep.push(IdentityCheck::failed(name, e.to_string()));
                continue;
            }
        };
        if kind == GeometryKind::Euclidean {
            for j in 1..=2 {
                let d = big.degree_in(ring.index(&format!("t{j}"))?).unwrap_or(0);
                rep.push(
                    IdentityCheck::from_bool(format!("deg_t{j} F_{i} = 4"), d == 4).with_note(format!("observed {d}")),
                );
            }
        }
        let expect = if kind == GeometryKind::Euclidean { 126 } else { 445 };
        rep.push(
            IdentityCheck::from_bool(format!("F_{i} has {expect} monomials"), big.len() == expect)
                .with_note(format!("observed {}", big.len())),
        );
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Discriminants

/// `Discr_t_j(f_1j) = d_j^+ d_j^-`, the four-factor form of `Discr_T(d_j^±)`
/// and the factorization of `d_2 - d_1`.
pub fn verify_discriminant_identities(kind: GeometryKind) -> Result<Report> {
    verify_discriminant_identities_with(kind, Fault::None)
}

pub fn verify_discriminant_identities_with(kind: GeometryKind, fault: Fault) -> Result<Report> {
    match kind {
        GeometryKind::Euclidean => euclid_discriminants(fault),
        _ => curved_discriminants(kind, fault),
    }
}

/// Euclidean discriminants in length (not squared) symbols; `a_j = |p_1 q_j|`.
fn euclid_discriminants(fault: Fault) -> Result<Report> {
    let mut rep = Report::new(suite_name(GeometryKind::Euclidean, "discriminants"));
    let ring = Ring::new(&["T1", "t1", "t2", "r", "R1", "r1", "r2", "a1", "a2"])?;
    let v = |n: &str| sym(&ring, n);
    let zero = MvPoly::zero(&ring);
    let (t, r, big_r) = (v("T1"), v("r"), v("R1"));
    let a0p = &big_r + &r;
    let a0m = &big_r - &r;
    // A_j^± = a_j ± r_j.
    let amp = |j: usize, s: i64| &v(&format!("a{j}")) + &v(&format!("r{j}")).scale(&rat(s));
    let d = |j: usize, s: i64| {
        let a = amp(j, s);
        let mut lin = &(&big_r.pow(2) + &r.pow(2)) - &a.pow(2);
        if fault == Fault::DPlusCoefficient && j == 1 && s == 1 {
            lin = &lin + &MvPoly::one(&ring);
        }
        &(&(&r.pow(2) * &t.pow(2)) + &(&lin * &t)) + &big_r.pow(2)
    };
    for j in 1..=2usize {
        let f = map_names(&build_f(GeometryKind::Euclidean, 1, j)?, &ring, |n| match n {
            "T1" => v("T1"),
            "t1" | "t2" => v(n),
            "r" | "R1" | "r1" | "r2" => v(n).pow(2),
            "r11" => v("a1").pow(2),
            "r12" => v("a2").pow(2),
            _ => zero.clone(),
        });
        let disc = formal_discriminant(&f, &format!("t{j}"), 2)?;
        rep.push(exact(&format!("Discr_t{j}(f_1{j}) = d_{j}^+ d_{j}^-"), &disc, &(&d(j, 1) * &d(j, -1))));
        for (s, sign) in [(1, "+"), (-1, "-")] {
            let delta = formal_discriminant(&d(j, s), "T1", 2)?;
            let a = amp(j, s);
            let expect = &(&(&(&a + &a0p) * &(&a - &a0p)) * &(&a + &a0m)) * &(&a - &a0m);
            rep.push(exact(
                &format!("Discr_T(d_{j}^{sign}) = (A+A0+)(A-A0+)(A+A0-)(A-A0-) with A = A_{j}^{sign}"),
                &delta,
                &expect,
            ));
        }
    }
    for (s1, n1) in [(1, "+"), (-1, "-")] {
        for (s2, n2) in [(1, "+"), (-1, "-")] {
            let (a1, a2) = (amp(1, s1), amp(2, s2));
            let lhs = &d(1, s1) - &d(2, s2);
            let rhs = &(&(&a2 + &a1) * &(&a2 - &a1)) * &t;
            rep.push(exact(&format!("d_1^{n1} - d_2^{n2} = (A_2^{n2} + A_1^{n1})(A_2^{n2} - A_1^{n1}) T"), &lhs, &rhs));
        }
    }
    Ok(rep)
}

/// The base ring of the curved discriminant identities; `v_j = u_1j`.
fn curved_disc_ring() -> Arc<Ring> {
    Ring::new(&["T1", "t1", "t2", "u", "U1", "u1", "u2", "v1", "v2"]).expect("fixed names")
}

/// Square roots `s_x` with `s_x^2 = sigma (x^2 - 1)` for the named variables.
fn sine_ext(ring: &Arc<Ring>, vars: &[&str], sigma: i64) -> Arc<SqrtExt> {
    let one = MvPoly::one(ring);
    SqrtExt::new(
        ring,
        vars.iter().map(|x| (format!("s_{x}"), (&sym(ring, x).pow(2) - &one).scale(&rat(sigma)))).collect(),
    )
}

/// `C(x + y)` from the addition formula, with `x`, `y` given by their
/// `C`-values and extension symbols; `sign` picks `x + y` or `x - y`.
fn c_sum(ext: &Arc<SqrtExt>, cx: &MvPoly, sx: usize, cy: &MvPoly, sy: usize, sign: i64, sigma: i64) -> ExtElem {
    let base = ExtElem::from_base(ext, cx * cy);
    let prod = ExactRing::mul(&ExtElem::symbol(ext, sx), &ExtElem::symbol(ext, sy)).scale(&rat(sign * sigma));
    ExactRing::add(&base, &prod)
}

/// `d_j^±` in an extension holding `s_{u_j}` (index `sj`) and `s_{u_1j}` (index `svj`).
#[allow(clippy::too_many_arguments)]
fn curved_d(ext: &Arc<SqrtExt>, j: usize, sj: usize, svj: usize, s: i64, sigma: i64, fault: Fault) -> ExtElem {
    let ring = ext.base().clone();
    let v = |n: &str| sym(&ring, n);
    let one = MvPoly::one(&ring);
    let (t, u, u1) = (v("T1"), v("u"), v("U1"));
    let ca = c_sum(ext, &v(&format!("u{j}")), sj, &v(&format!("v{j}")), svj, s, sigma);
    let mut lin = ExactRing::sub(&ca, &ExtElem::from_base(ext, &u * &u1)).scale(&rat(2));
    if fault == Fault::DPlusCoefficient && j == 1 && s == 1 {
        lin = ExactRing::add(&lin, &ExtElem::from_base(ext, one.clone()));
    }
    let quad = &(&(&u - &one) * &(&u1 + &one)) * &t.pow(2);
    let cst = &(&u + &one) * &(&u1 - &one);
    let mut out = lin.mul_base(&t);
    out = ExactRing::add(&out, &ExtElem::from_base(ext, quad));
    ExactRing::add(&out, &ExtElem::from_base(ext, cst))
}

fn curved_discriminants(kind: GeometryKind, fault: Fault) -> Result<Report> {
    let sg = sigma(kind);
    let mut rep = Report::new(suite_name(kind, "discriminants"));
    let ring = curved_disc_ring();
    let v = |n: &str| sym(&ring, n);
    let zero = MvPoly::zero(&ring);
    let units = curved_units(&ring, &["u", "U1", "u1", "u2", "v1", "v2"]);
    let signs = [(1i64, "+"), (-1i64, "-")];
    for j in 1..=2usize {
        let uj = format!("u{j}");
        let vj = format!("v{j}");
        let f = map_names(&build_f(kind, 1, j)?, &ring, |n| match n {
            "T1" | "t1" | "t2" | "u" | "U1" | "u1" | "u2" => v(n),
            "u11" => v("v1"),
            "u12" => v("v2"),
            _ => zero.clone(),
        });
        let disc = formal_discriminant(&f, &format!("t{j}"), 2)?;
        // d_j^± live in an extension by s_{u_j}, s_{u_1j}.
        let ext = sine_ext(&ring, &[&uj, &vj], sg);
        let dp = curved_d(&ext, j, 0, 1, 1, sg, fault);
        let dm = curved_d(&ext, j, 0, 1, -1, sg, fault);
        let prod = ExactRing::mul(&dp, &dm);
        let lhs = ExtElem::from_base(&ext, disc);
        rep.push(IdentityCheck::from_verdict(
            format!("Discr_t{j}(f_1{j}) ≐ d_{j}^+ d_{j}^-"),
            &units.check_ext(&lhs, &prod),
        ));
        // Delta: s(A + A0+) s(A - A0+) s(A + A0-) s(A - A0-) reduces to
        // (C(A) - C(A0+)) (C(A) - C(A0-)) / 4.
        let ext4 = sine_ext(&ring, &["u", "U1", &uj, &vj], sg);
        let c0p = c_sum(&ext4, &v("U1"), 1, &v("u"), 0, 1, sg);
        let c0m = c_sum(&ext4, &v("U1"), 1, &v("u"), 0, -1, sg);
        for (s, name) in signs {
            let d = curved_d(&ext4, j, 2, 3, s, sg, fault);
            let coeffs: Vec<ExtElem> = (0..=2u32)
                .map(|k| {
                    let comps: Vec<MvPoly> =
                        d.components().iter().map(|c| c.coeff(ring.index("T1").expect("T1"), k)).collect();
                    assemble(&ext4, comps)
                })
                .collect();
            let delta = discriminant_coeffs(&coeffs, &ExtElem::from_base(&ext4, MvPoly::one(&ring)))?;
            let ca = c_sum(&ext4, &v(&uj), 2, &v(&vj), 3, s, sg);
            let expect = ExactRing::mul(&ExactRing::sub(&ca, &c0p), &ExactRing::sub(&ca, &c0m));
            rep.push(IdentityCheck::from_verdict(
                format!("Discr_T(d_{j}^{name}) ≐ s(A+A0+)s(A-A0+)s(A+A0-)s(A-A0-) with A = A_{j}^{name}"),
                &units.check_ext(&delta, &expect),
            ));
        }
    }
    // d_2 - d_1 in an extension by s_{u_1}, s_{v_1}, s_{u_2}, s_{v_2}.
    let ext = sine_ext(&ring, &["u1", "v1", "u2", "v2"], sg);
    let t = ExtElem::from_base(&ext, v("T1"));
    for (s1, n1) in signs {
        for (s2, n2) in signs {
            let d1 = curved_d(&ext, 1, 0, 1, s1, sg, fault);
            let d2 = curved_d(&ext, 2, 2, 3, s2, sg, fault);
            let lhs = ExactRing::sub(&d2, &d1);
            let ca1 = c_sum(&ext, &v("u1"), 0, &v("v1"), 1, s1, sg);
            let ca2 = c_sum(&ext, &v("u2"), 2, &v("v2"), 3, s2, sg);
            let rhs = ExactRing::mul(&ExactRing::sub(&ca2, &ca1), &t);
            rep.push(IdentityCheck::from_verdict(
                format!("d_2^{n2} - d_1^{n1} ≐ s(A_2^{n2} + A_1^{n1}) s(A_2^{n2} - A_1^{n1}) T"),
                &units.check_ext(&lhs, &rhs),
            ));
        }
    }
    Ok(rep)
}

fn assemble(ext: &Arc<SqrtExt>, comps: Vec<MvPoly>) -> ExtElem {
    comps
        .into_iter()
        .enumerate()
        .fold(ExtElem::zero(ext), |acc, (mask, c)| ExactRing::add(&acc, &ExtElem::with_component(ext, mask, c)))
}

// ---------------------------------------------------------------------------
// Coefficients of F_1 - lam F_2

/// The coefficients `c_kl` of `t_1^k t_2^l` in `F_1 - lam F_2`.
pub fn coefficient_grid(kind: GeometryKind) -> Result<Vec<Vec<MvPoly>>> {
    let ring = ring_for(kind);
    let g = &build_F(kind, 1)? - &(&sym(&ring, "lam") * &build_F(kind, 2)?);
    let (t1, t2) = (ring.index("t1")?, ring.index("t2")?);
    Ok((0..=4u32).map(|k| (0..=4u32).map(|l| g.coefficient_of(&[(t1, k), (t2, l)])).collect()).collect())
}

/// Vanishing coefficients, affine dependence on `lam`, the displayed
/// `c_04`, `c_20`, `c_02` and the `(4-k, 4-l)` symmetry.
pub fn verify_coefficient_identities(kind: GeometryKind) -> Result<Report> {
    let mut rep = Report::new(suite_name(kind, "coefficients"));
    let c = coefficient_grid(kind)?;
    let ring = ring_for(kind);
    let v = |n: &str| sym(&ring, n);
    let one = MvPoly::one(&ring);
    for (k, l) in [(0, 0), (0, 1), (4, 3), (4, 4)] {
        rep.push(IdentityCheck::exact(format!("c_{k}{l} = 0"), c[k][l].len()));
    }
    let lam = ring.index("lam")?;
    let affine = c.iter().flatten().all(|p| p.degree_in(lam).unwrap_or(0) <= 1);
    rep.push(IdentityCheck::from_bool("deg_lam c_kl <= 1 for all k, l", affine));
    let lamv = v("lam");
    if kind == GeometryKind::Euclidean {
        // Squared-length symbols.
        let c04 = &v("r1").pow(2) * &(&(&(&v("R1") - &v("r")) - &(&lamv * &v("R2"))) + &(&lamv * &v("r")));
        let c20 = &v("r2").pow(2) * &(&(&(&v("r1") * &(&lamv - &one)) - &(&lamv * &v("r21"))) + &v("r11"));
        let c02 = &v("r1").pow(2) * &(&(&(&v("r2") * &(&lamv - &one)) - &(&lamv * &v("r22"))) + &v("r12"));
        rep.push(exact("c_04 = r_1^4 (R_1^2 - r^2 - lam R_2^2 + lam r^2)", &c[0][4], &c04));
        rep.push(exact("c_20 = r_2^4 (r_1^2 (lam - 1) - lam r_21^2 + r_11^2)", &c[2][0], &c20));
        rep.push(exact("c_02 = r_1^4 (r_2^2 (lam - 1) - lam r_22^2 + r_12^2)", &c[0][2], &c02));
        // c_{4-k,4-l} = r_1^{2k-4} r_2^{2l-4} r^{8-2k-2l} c_kl, cross-multiplied.
        let ratios = [(v("r1"), one.clone()), (v("r2"), one.clone()), (v("r"), one.clone())];
        rep.push(symmetry_check("c_{4-k,4-l} = r_1^(2k-4) r_2^(2l-4) r^(8-2k-2l) c_kl", &c, &ratios));
    } else {
        let units = curved_units(&ring, &["u", "U1", "U2", "u1", "u2", "u11", "u12", "u21", "u22"]);
        let sq = |n: &str| v(n).pow(2);
        let c04 = &(&(&sq("U1") - &sq("u")) - &(&lamv * &sq("U2"))) + &(&lamv * &sq("u"));
        let c20 = &(&(&sq("u1") * &(&lamv - &one)) - &(&lamv * &sq("u21"))) + &sq("u11");
        let c02 = &(&(&sq("u2") * &(&lamv - &one)) - &(&lamv * &sq("u22"))) + &sq("u12");
        rep.push(IdentityCheck::from_verdict("c_04 ≐ U_1^2 - u^2 - lam U_2^2 + lam u^2", &units.check(&c[0][4], &c04)));
        rep.push(IdentityCheck::from_verdict(
            "c_20 ≐ u_1^2 (lam - 1) - lam u_21^2 + u_11^2",
            &units.check(&c[2][0], &c20),
        ));
        rep.push(IdentityCheck::from_verdict(
            "c_02 ≐ u_2^2 (lam - 1) - lam u_22^2 + u_12^2",
            &units.check(&c[0][2], &c02),
        ));
        // rho^2 = (x - 1)/(x + 1) replaces the squared lengths of the Euclidean rule.
        let rho2 = |n: &str| (&v(n) - &one, &v(n) + &one);
        let ratios = [rho2("u1"), rho2("u2"), rho2("u")];
        rep.push(symmetry_check(
            "c_{4-k,4-l} = rho(u_1)^(2k-4) rho(u_2)^(2l-4) rho(u)^(8-2k-2l) c_kl, rho(x)^2 = (x-1)/(x+1)",
            &c,
            &ratios,
        ));
    }
    Ok(rep)
}

/// Checks `c[4-k][4-l] = q_1^(k-2) q_2^(l-2) q_0^(4-k-l) c[k][l]` for all
/// `k, l`, where `q_x = num_x / den_x`, after clearing denominators.
fn symmetry_check(name: &str, c: &[Vec<MvPoly>], ratios: &[(MvPoly, MvPoly); 3]) -> IdentityCheck {
    let mut bad = Vec::new();
    let mut terms = 0;
    for k in 0..=4i32 {
        for l in 0..=4i32 {
            let exps = [k - 2, l - 2, 4 - k - l];
            let mut lhs = c[(4 - k) as usize][(4 - l) as usize].clone();
            let mut rhs = c[k as usize][l as usize].clone();
            for ((num, den), e) in ratios.iter().zip(exps) {
                if e >= 0 {
                    lhs = &lhs * &den.pow(e as u32);
                    rhs = &rhs * &num.pow(e as u32);
                } else {
                    lhs = &lhs * &num.pow((-e) as u32);
                    rhs = &rhs * &den.pow((-e) as u32);
                }
            }
            let d = (&lhs - &rhs).len();
            if d > 0 {
                bad.push(format!("({k},{l})"));
                terms += d;
            }
        }
    }
    let check = IdentityCheck::exact(name, terms);
    if bad.is_empty() {
        check.with_note("all 25 index pairs")
    } else {
        check.with_note(format!("violated at {}", bad.join(" ")))
    }
}

// ---------------------------------------------------------------------------
// Resultant of F_1 and F_2 after the symmetric length substitution

/// Euclidean `Res_t1(F_1(t_1, -c/a), F_2(t_1, -c/a))`, hyperbolic and
/// spherical `Res_t1(l F_1(t_1, ±l_2/l), l F_2(t_1, ±l_2/l))`.
pub fn verify_resultant_identities(kind: GeometryKind) -> Result<Report> {
    verify_resultant_identities_with(kind, Fault::None, Exec::default())
}

/// As [`verify_resultant_identities`], with an optional injected fault and
/// the schedule of the grid evaluations.
pub fn verify_resultant_identities_with(kind: GeometryKind, fault: Fault, exec: Exec) -> Result<Report> {
    match kind {
        GeometryKind::Euclidean => euclid_resultant(fault),
        _ => curved_resultant(kind, fault, exec),
    }
}

/// Divides `p` by each `(factor, multiplicity)` in turn; `None` if some
/// division is not exact.
fn trial_divide<R: ExactRing>(p: &R, factors: &[(R, u32)]) -> Option<R> {
    let mut cur = p.clone();
    for (f, e) in factors {
        for _ in 0..*e {
            cur = cur.div_exact(f).ok()?;
        }
    }
    Some(cur)
}

/// The polynomials `G_i = den^4 F_i(t_1, num/den)`, given the coefficients
/// `F_i = sum_k c_k t_2^k`, with `c_k` already mapped into the target ring.
fn homogenize<R: ExactRing>(coeffs: &[R], num: &R, den: &R) -> R {
    let mut total = num.zero_like();
    for (k, c) in coeffs.iter().enumerate() {
        let mut term = c.clone();
        for _ in 0..k {
            term = term.mul(num);
        }
        for _ in k..4 {
            term = term.mul(den);
        }
        total = total.add(&term);
    }
    total
}

fn euclid_resultant(fault: Fault) -> Result<Report> {
    let mut rep = Report::new(suite_name(GeometryKind::Euclidean, "resultant"));
    let ring = Ring::new(&["t1", "t2", "a", "b", "c", "d"])?;
    let v = |n: &str| sym(&ring, n);
    let zero = MvPoly::zero(&ring);
    // r = r_11 = r_22 = a, R_1 = r_1 = b, R_2 = r_2 = c, r_12 = r_21 = d.
    let subst = |n: &str| match n {
        "t1" | "t2" => v(n),
        "r" | "r11" | "r22" => v("a").pow(2),
        "R1" | "r1" => v("b").pow(2),
        "R2" | "r2" => v("c").pow(2),
        "r12" | "r21" => v("d").pow(2),
        _ => zero.clone(),
    };
    let (t1, t2) = (ring.index("t1")?, ring.index("t2")?);
    let mut g = Vec::new();
    for i in 1..=2 {
        let f = map_names(&build_F(GeometryKind::Euclidean, i)?, &ring, subst);
        let mut ck = f.as_univariate(t2);
        ck.resize(5, zero.clone());
        g.push(homogenize(&ck, &-v("c"), &v("a")).as_univariate(t1));
    }
    for gi in g.iter_mut() {
        gi.resize(5, zero.clone());
    }
    let res = resultant_coeffs(&g[0], &g[1], &MvPoly::one(&ring))?;
    let (a, b, c, d) = (v("a"), v("b"), v("c"), v("d"));
    let sq = |x: &MvPoly| x.pow(2);
    let q1 = &(&(&sq(&a) + &sq(&b)) - &sq(&c)) - &sq(&d);
    let q2 = &(&(&sq(&a) + &sq(&d)) - &sq(&b)) - &sq(&c);
    let q3 = &(&(&sq(&a) + &sq(&c)) - &sq(&b)) - &sq(&d);
    let last = if fault == Fault::ResultantExponent { 3 } else { 4 };
    let factors = [(b.clone(), 8), (c.clone(), 16), (&a + &c, 8), (q1, 4), (q2, 4), (q3, last)];
    // Res(G_1, G_2) = a^32 Res(F_1(t_1,-c/a), F_2(t_1,-c/a)); the cofactor left
    // after the displayed factors is n a^k, and a^(32-k) is the power of `a`
    // that clears the denominators of the resultant.
    let name = "a^8 Res_t1(F_1(t_1,-c/a), F_2(t_1,-c/a)) = 16 b^8 c^16 (a+c)^8 (a^2+b^2-c^2-d^2)^4 (a^2+d^2-b^2-c^2)^4 (a^2+c^2-b^2-d^2)^4";
    let check = match trial_divide(&res, &factors) {
        None => IdentityCheck::failed(name, "an expected factor does not divide the resultant"),
        Some(rest) if rest.len() == 1 && rest.support_vars().iter().all(|&x| x == ring.index("a").expect("a")) => {
            let (m, n) = rest.terms()[0].clone();
            let k = m.exponent(ring.index("a")?);
            let ok = n == rat(16) && k == 24;
            IdentityCheck::exact(name, usize::from(!ok))
                .with_certificate(Certificate::scalar(&n))
                .with_note(format!("Res(G_1, G_2) = {n} a^{k} times the product"))
        }
        Some(rest) => IdentityCheck::exact(name, rest.len()).with_note("cofactor is not a monomial in a"),
    };
    rep.push(check);
    Ok(rep)
}

/// `sum_k c_k num^k den^(deg - k)` where `c_k` are the coefficients of `p` in `var`.
fn clear_substitute(p: &MvPoly, var: usize, num: &MvPoly, den: &MvPoly, deg: u32) -> MvPoly {
    let mut total = MvPoly::zero(p.ring());
    for (k, c) in p.as_univariate(var).iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        total = &total + &(&(c * &num.pow(k as u32)) * &den.pow(deg - k as u32));
    }
    total
}

/// The curved identity in the coordinates `l = rho(u)`, `l_2 = rho(u_2)`.
///
/// With `u = N/D` (`N = 1 + sigma l^2`, `D = 1 - sigma l^2`) and likewise for
/// `u_2`, the polynomials `G_i = l^4 D^a D_2^b F_i(t_1, ±l_2/l)` equal
/// `l^3 D^a D_2^b (l F_i)`, so `Res(G_1, G_2) = (l^6 D^2a D_2^2b)^4 Res(lF_1, lF_2)`.
/// The claimed identity becomes `Res(G_1, G_2) = n l^24 D^(8a-32) D_2^(8b-24) E`,
/// with `E` the displayed product after clearing its denominators
/// `D^32 D_2^24`; negative powers are moved to the left-hand side. Both sides
/// are polynomials in `l, l_2, u_1, u_12`; they are compared exactly at every
/// point of a grid in `(u_1, u_12)` that exceeds their degrees, which proves
/// the polynomial identity.
struct Prepared {
    fixed: MvPoly,
    varying: Vec<(MvPoly, u32)>,
    lhs_multiplier: MvPoly,
    at: [usize; 2],
}

struct CurvedResultant {
    ring: Arc<Ring>,
    /// `t_1`-coefficients of `G_1 / c_1` and `G_2 / c_2` for each sign of `t_2`.
    g: [[Vec<MvPoly>; 2]; 2],
    /// `(c_1 c_2)^4` times the powers of `D` and `D_2` moved to the left-hand side.
    lhs_multiplier: MvPoly,
    /// Sign-independent factors of the cleared right-hand side with multiplicities.
    rhs_factors: Vec<(MvPoly, u32)>,
    eps: i64,
}

/// Grid origin in `(u_1, u_12)`.
const GRID_ORIGIN: (i64, i64) = (2, 3);

impl CurvedResultant {
    fn new(kind: GeometryKind, fault: Fault) -> Result<CurvedResultant> {
        let sg = sigma(kind);
        let ring = Ring::new(&["t1", "t2", "l", "l2", "u", "u1", "u2", "u12"])?;
        let v = |n: &str| sym(&ring, n);
        let one = MvPoly::one(&ring);
        let zero = MvPoly::zero(&ring);
        // u_11 = u_22 = u, U_1 = u_1, U_2 = u_2, u_12 = u_21.
        let subst = |n: &str| match n {
            "t1" | "t2" | "u" | "u1" | "u2" | "u12" => v(n),
            "u11" | "u22" => v("u"),
            "U1" => v("u1"),
            "U2" => v("u2"),
            "u21" => v("u12"),
            _ => zero.clone(),
        };
        let (l, l2) = (v("l"), v("l2"));
        let nd = |x: &MvPoly| {
            let x2 = x.pow(2).scale(&rat(sg));
            (&one + &x2, &one - &x2)
        };
        let (n, d) = nd(&l);
        let (n2, d2) = nd(&l2);
        let (iu, iu2, it1, it2) = (ring.index("u")?, ring.index("u2")?, ring.index("t1")?, ring.index("t2")?);
        let big_f: Vec<MvPoly> =
            (1..=2).map(|i| Ok(map_names(&build_F(kind, i)?, &ring, subst))).collect::<Result<Vec<_>>>()?;
        let a = big_f.iter().map(|f| f.degree_in(iu).unwrap_or(0)).max().unwrap_or(0);
        let b = big_f.iter().map(|f| f.degree_in(iu2).unwrap_or(0)).max().unwrap_or(0);
        let cleared: Vec<MvPoly> =
            big_f.iter().map(|f| clear_substitute(&clear_substitute(f, iu, &n, &d, a), iu2, &n2, &d2, b)).collect();
        // Content factors of G_i common to both signs.
        let candidates =
            [l.clone(), l2.clone(), &one - &l, &one + &l, &one - &l2, &one + &l2, &one + &l.pow(2), &one + &l2.pow(2)];
        let mut g: [[Vec<MvPoly>; 2]; 2] = Default::default();
        let mut content = one.clone();
        for (slot, sign) in [1i64, -1].into_iter().enumerate() {
            for (i, f) in cleared.iter().enumerate() {
                let gi = clear_substitute(f, it2, &l2.scale(&rat(sign)), &l, 4);
                let mut coeffs = gi.as_univariate(it1);
                coeffs.resize(5, zero.clone());
                for c in &candidates {
                    let e = coeffs.iter().filter(|x| !x.is_zero()).map(|x| x.strip_factor(c, 64).1).min().unwrap_or(0);
                    if e == 0 {
                        continue;
                    }
                    let ce = c.pow(e);
                    for x in coeffs.iter_mut() {
                        *x = x.div_exact(&ce)?;
                    }
                    if slot == 0 {
                        content = &content * &ce;
                    }
                }
                g[slot][i] = coeffs;
            }
        }
        let (u1, u12) = (v("u1"), v("u12"));
        // Pi(u ± u_1 ± u_2 ± u_12) D D_2 with u = N/D, u_2 = N_2/D_2.
        let pi = |s1: i64, s2: i64, s3: i64| {
            let mid = &u1.scale(&rat(s1)) + &u12.scale(&rat(s3));
            &(&(&n * &d2) + &(&n2 * &d).scale(&rat(s2))) + &(&mid * &(&d * &d2))
        };
        let (ed, ed2) = (8 * a as i64 - 32, 8 * b as i64 - 24);
        let side_pow = |x: &MvPoly, e: i64, lhs: bool| {
            if e != 0 && (e < 0) == lhs {
                x.pow(e.unsigned_abs() as u32)
            } else {
                one.clone()
            }
        };
        let last = if fault == Fault::ResultantExponent { 3 } else { 4 };
        let mut rhs_factors = vec![
            (l.clone(), 24),
            (&side_pow(&d, ed, false) * &side_pow(&d2, ed2, false), 1),
            (&n + &d, 16),
            (&u1 - &one, 4),
            (&u1 + &one, 4),
            (&n2 - &d2, 8),
            (pi(1, 1, 1), 4),
            (pi(1, -1, -1), 4),
            (pi(-1, 1, -1), 4),
            (pi(-1, -1, 1), last),
        ];
        rhs_factors.retain(|(f, _)| f.as_constant() != Some(rat(1)));
        let lhs_multiplier = &(&side_pow(&d, ed, true) * &side_pow(&d2, ed2, true)) * &content.pow(4);
        Ok(CurvedResultant { ring, g, lhs_multiplier, rhs_factors, eps: sg })
    }

    /// `(l ± l_2)^8 (l l_2 ± eps)^8` for the signs `(a, b)`.
    fn sign_factors(&self, a: i64, b: i64) -> Vec<(MvPoly, u32)> {
        let (l, l2) = (sym(&self.ring, "l"), sym(&self.ring, "l2"));
        let eps = MvPoly::int(&self.ring, b * self.eps);
        vec![(&l + &l2.scale(&rat(a)), 8), (&(&l * &l2) + &eps, 8)]
    }

    /// Upper bound on the total degree in `vars` of both sides.
    fn degree_bound(&self, vars: &[usize], slot: usize, signs: &[(MvPoly, u32)]) -> u32 {
        let deg = |p: &MvPoly| {
            p.terms().iter().map(|(m, _)| vars.iter().map(|&v| m.exponent(v)).sum::<u32>()).max().unwrap_or(0)
        };
        let row = |c: &[MvPoly]| c.iter().map(deg).max().unwrap_or(0);
        let lhs = 4 * row(&self.g[slot][0]) + 4 * row(&self.g[slot][1]) + deg(&self.lhs_multiplier);
        let rhs: u32 = self.rhs_factors.iter().chain(signs).map(|(f, e)| e * deg(f)).sum();
        lhs.max(rhs)
    }

    /// Splits the right-hand side for the signs into a part free of
    /// `u_1, u_12` and the rest, moving the left-hand multiplier into the
    /// first part when it divides it.
    fn prepare(&self, signs: &[(MvPoly, u32)]) -> Result<Prepared> {
        let (iu1, iu12) = (self.ring.index("u1")?, self.ring.index("u12")?);
        let mut fixed = MvPoly::one(&self.ring);
        let mut varying = Vec::new();
        for (f, e) in self.rhs_factors.iter().chain(signs) {
            if f.degree_in(iu1).is_some_and(|d| d > 0) || f.degree_in(iu12).is_some_and(|d| d > 0) {
                varying.push((f.clone(), *e));
            } else {
                fixed = &fixed * &f.pow(*e);
            }
        }
        let (fixed, lhs_multiplier) = match fixed.div_exact(&self.lhs_multiplier) {
            Ok(q) => (q, MvPoly::one(&self.ring)),
            Err(_) => (fixed, self.lhs_multiplier.clone()),
        };
        Ok(Prepared { fixed, varying, lhs_multiplier, at: [iu1, iu12] })
    }

    /// Both sides at `u_1 = x`, `u_12 = y`, up to a common factor.
    fn sides(&self, slot: usize, prep: &Prepared, x: i64, y: i64) -> Result<(MvPoly, MvPoly)> {
        let at = [(prep.at[0], rat(x)), (prep.at[1], rat(y))];
        let specialized = |c: &[MvPoly]| c.iter().map(|p| p.eval_partial(&at)).collect::<Vec<_>>();
        let res =
            resultant_coeffs(&specialized(&self.g[slot][0]), &specialized(&self.g[slot][1]), &MvPoly::one(&self.ring))?;
        let lhs = if prep.lhs_multiplier.is_constant() {
            res.scale(&prep.lhs_multiplier.as_constant().expect("constant"))
        } else {
            &res * &prep.lhs_multiplier.eval_partial(&at)
        };
        let mut grouped: std::collections::BTreeMap<u32, MvPoly> = std::collections::BTreeMap::new();
        for (f, e) in &prep.varying {
            let v = f.eval_partial(&at);
            let slot = grouped.entry(*e).or_insert_with(|| MvPoly::one(&self.ring));
            *slot = &*slot * &v;
        }
        let mut rhs = prep.fixed.clone();
        for (e, f) in grouped {
            rhs = &f.pow(e) * &rhs;
        }
        Ok((lhs, rhs))
    }

    /// The sign pairing `(a, b)` and the constant `n` with `lhs = n rhs` at the grid origin.
    fn pairing(&self, slot: usize) -> Result<Option<(i64, i64, BigRational)>> {
        let (x, y) = GRID_ORIGIN;
        for a in [1i64, -1] {
            for b in [1i64, -1] {
                let prep = self.prepare(&self.sign_factors(a, b))?;
                let (lhs, rhs) = self.sides(slot, &prep, x, y)?;
                if let Some(n) = lhs.rational_ratio(&rhs) {
                    return Ok(Some((a, b, n)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `G` for `t_2 = -l_2/l` is `G` for `t_2 = l_2/l` under `l_2 -> -l_2`.
    fn sign_automorphism_holds(&self) -> Result<bool> {
        let il2 = self.ring.index("l2")?;
        let minus = -sym(&self.ring, "l2");
        Ok((0..2).all(|i| self.g[0][i].iter().zip(&self.g[1][i]).all(|(p, q)| p.substitute(il2, &minus) == *q)))
    }
}

/// Points `(x0 + i, y0 + j)` with `i <= bx`, `j <= by` and `i + j <= total`.
///
/// A polynomial with `deg_x <= bx`, `deg_y <= by` and total degree `<= total`
/// that vanishes there is zero: on the line `x = x0` it has degree at most
/// `min(by, total)` in `y` and as many plus one zeros, so `x - x0` divides it,
/// and the quotient satisfies the same hypotheses with `bx - 1` and
/// `total - 1` on the remaining lines.
fn staircase((x0, y0): (i64, i64), bx: u32, by: u32, total: u32) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    for i in 0..=bx.min(total) {
        for j in 0..=by.min(total - i) {
            pts.push((x0 + i as i64, y0 + j as i64));
        }
    }
    pts
}

fn sign_str(x: i64) -> &'static str {
    if x > 0 {
        "+"
    } else {
        "-"
    }
}

fn curved_resultant(kind: GeometryKind, fault: Fault, exec: Exec) -> Result<Report> {
    let mut rep = Report::new(suite_name(kind, "resultant"));
    let cr = CurvedResultant::new(kind, fault)?;
    let eps = cr.eps;
    let (iu1, iu12) = (cr.ring.index("u1")?, cr.ring.index("u12")?);
    let name_of = |pm: &str| {
        format!(
            "Res_t1(l F_1(t_1,{pm}l_2/l), l F_2(t_1,{pm}l_2/l)) = n (l±l_2)^8 (l l_2±eps)^8 (u+1)^16 (u_1^2-1)^4 (u_2-1)^8 prod(u±u_1±u_2±u_12)^4, eps = {eps}"
        )
    };
    // The "+" sign is proved on the grid.
    let Some((a, b, n)) = cr.pairing(0)? else {
        rep.push(IdentityCheck::failed(name_of("+"), "no sign pairing matches at the grid origin"));
        rep.push(IdentityCheck::failed(name_of("-"), "depends on the \"+\" identity"));
        return Ok(rep);
    };
    let signs = cr.sign_factors(a, b);
    let bx = cr.degree_bound(&[iu1], 0, &signs);
    let by = cr.degree_bound(&[iu12], 0, &signs);
    let total = cr.degree_bound(&[iu1, iu12], 0, &signs);
    let grid = staircase(GRID_ORIGIN, bx, by, total);
    let prep = cr.prepare(&signs)?;
    let bad = exec.find_first(&grid, |&(x, y)| match cr.sides(0, &prep, x, y) {
        Ok((lhs, rhs)) => lhs != rhs.scale(&n),
        Err(_) => true,
    });
    let plus = match bad {
        None => IdentityCheck::exact(name_of("+"), 0),
        Some(i) => IdentityCheck::exact(name_of("+"), 1)
            .with_note(format!("differs at (u_1, u_12) = ({}, {})", grid[i].0, grid[i].1)),
    };
    let plus_ok = plus.is_ok();
    rep.push(plus.with_certificate(Certificate::scalar(&n)).with_note(format!(
        "pairs with (l {} l_2)^8 (l l_2 {} eps)^8; exact at {} points of (u_1, u_12), degrees <= ({bx}, {by}), total <= {total}",
        sign_str(a),
        sign_str(b),
        grid.len()
    )));
    // The "-" sign follows from l_2 -> -l_2, which swaps the two G and maps the
    // pairing (a, b) to (-a, -b); the pairing is also checked directly.
    let auto = cr.sign_automorphism_holds()?;
    let direct = cr.pairing(1)?;
    let minus = match direct {
        Some((a2, b2, n2)) if auto && plus_ok && (a2, b2) == (-a, -b) && n2 == n => {
            IdentityCheck::exact(name_of("-"), 0).with_certificate(Certificate::scalar(&n2)).with_note(format!(
                "pairs with (l {} l_2)^8 (l l_2 {} eps)^8; image of the \"+\" identity under l_2 -> -l_2",
                sign_str(a2),
                sign_str(b2)
            ))
        }
        _ => IdentityCheck::failed(
            name_of("-"),
            format!(
                "automorphism {auto}, \"+\" identity {plus_ok}, direct pairing {:?}",
                direct.map(|(a, b, _)| (a, b))
            ),
        ),
    };
    rep.push(minus);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Whole suites

/// Every identity suite of one geometry, run through `exec`; the report
/// order does not depend on the schedule.
pub fn verify_kind(kind: GeometryKind, exec: Exec) -> Report {
    let suites = vec!["counts", "discriminants", "coefficients", "resultant"];
    let parts = exec.map(suites, |what| {
        let out = match what {
            "counts" => verify_counts(kind),
            "discriminants" => verify_discriminant_identities(kind),
            "coefficients" => verify_coefficient_identities(kind),
            _ => verify_resultant_identities_with(kind, Fault::None, exec),
        };
        out.unwrap_or_else(|err| {
            let mut r = Report::new(suite_name(kind, what));
            r.push(IdentityCheck::failed(format!("{what} suite"), err.to_string()));
            r
        })
    });
    let mut rep = Report::new(kind_label(kind));
    for p in parts {
        rep.extend(p);
    }
    rep
}
