//! Traced motions checked against independently computed references.

mod common;

use common::oracle::{cda_invariance, dixon1_agreement, dixon2_structure, trace};
use flexlab::framework::rod_lengths;
use flexlab::geometry::{GeometryKind, Point};
use flexlab::kinematics::generate_dixon1;

#[test]
fn dixon1_traces_match_the_reference_motion() {
    let cases: [(GeometryKind, [f64; 3], [f64; 3]); 3] = [
        (GeometryKind::Euclidean, [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
        (GeometryKind::Hyperbolic, [0.3, 0.6, 0.9], [0.4, 0.8, 1.2]),
        (GeometryKind::Spherical, [0.3, 0.6, 0.9], [0.4, 0.8, 1.1]),
    ];
    for (kind, xs, ys) in cases {
        let (dev, frames, drift) = dixon1_agreement(kind, &xs, &ys);
        assert!(frames >= 200, "{kind}: {frames} frames");
        assert!(drift < 1e-9, "{kind}: drift {drift}");
        assert!(dev < 1e-7, "{kind}: deviation {dev}");
    }
}

#[test]
fn dixon2_traces_keep_their_symmetry() {
    let cases = [
        (GeometryKind::Euclidean, Point::euclid(1.0, 2.0), Point::euclid(3.0, 4.0)),
        (GeometryKind::Hyperbolic, Point::disk(0.3, 0.2).unwrap(), Point::disk(0.25, 0.5).unwrap()),
    ];
    for (kind, pa, qa) in cases {
        let (eq, refl, frames) = dixon2_structure(kind, pa, qa);
        assert!(frames > 10, "{kind}: {frames} frames");
        assert!(eq < 1e-9, "{kind}: length equality error {eq}");
        assert!(refl < 1e-7, "{kind}: reflection error {refl}");
    }
}

#[test]
fn cda_traces_keep_the_diagonal_product() {
    let (worst, frames) = cda_invariance(1.0, 0.7);
    assert!(frames > 10, "{frames} frames");
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn traced_frames_keep_rod_lengths() {
    let fw = generate_dixon1(GeometryKind::Hyperbolic, &[0.3, 0.6, 0.9], &[0.4, 0.8, 1.2]).unwrap();
    let path = trace(&fw, 50);
    let l0 = rod_lengths(&fw);
    for f in &path.frames {
        let l = rod_lengths(f);
        for i in 0..3 {
            for j in 0..3 {
                assert!((l.r(i, j) - l0.r(i, j)).abs() < 1e-9);
            }
        }
    }
}
