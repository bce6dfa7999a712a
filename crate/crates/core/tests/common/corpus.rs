//! Randomized mechanism instances and perturbations of them.

use flexlab::classifier::MechanismKind;
use flexlab::framework::{FlipRecord, Framework};
use flexlab::kinematics::{generate_cda, generate_dixon1, generate_dixon2};
use flexlab::{GeometryKind, Point};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Dixon1,
    Dixon2,
    Cda,
}

/// Every generator with the geometries it supports.
pub fn generator_geometries() -> Vec<(Generator, GeometryKind)> {
    let mut v = Vec::new();
    for kind in GeometryKind::ALL {
        v.push((Generator::Dixon1, kind));
        v.push((Generator::Dixon2, kind));
    }
    v.push((Generator::Cda, GeometryKind::Spherical));
    v
}

pub fn expected_kind(gen: Generator, kind: GeometryKind) -> MechanismKind {
    match (gen, kind) {
        (Generator::Dixon1, GeometryKind::Spherical) => MechanismKind::SphericalD1,
        (Generator::Dixon1, _) => MechanismKind::Dixon1,
        (Generator::Dixon2, GeometryKind::Spherical) => MechanismKind::ProjectiveD2,
        (Generator::Dixon2, _) => MechanismKind::Dixon2,
        (Generator::Cda, _) => MechanismKind::Cda,
    }
}

/// `count` coordinates with magnitudes in `[0.15, bound]`, pairwise at least 0.1 apart.
fn coordinates(rng: &mut ChaCha8Rng, count: usize, bound: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..count)
            .map(|_| {
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                s * rng.gen_range(0.15..bound)
            })
            .collect();
        let spread = v.iter().enumerate().all(|(i, a)| v[i + 1..].iter().all(|b| (a - b).abs() >= 0.1));
        if spread {
            return v;
        }
    }
}

fn anchor(rng: &mut ChaCha8Rng, kind: GeometryKind) -> Point {
    let c = coordinates(rng, 3, 1.0);
    match kind {
        GeometryKind::Euclidean => Point::euclid(2.0 * c[0], 2.0 * c[1]),
        GeometryKind::Hyperbolic => Point::disk(0.6 * c[0], 0.6 * c[1]).unwrap(),
        GeometryKind::Spherical => Point::sphere(c[0], c[1], c[2]).unwrap(),
    }
}

fn selection(rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut s = vec![1, 2, 3, 4];
    s.shuffle(rng);
    s.truncate(rng.gen_range(3..=4));
    s
}

/// A random instance of `gen` in `kind`; invalid draws are redrawn.
pub fn random_instance(rng: &mut ChaCha8Rng, gen: Generator, kind: GeometryKind) -> Framework {
    loop {
        let made = match gen {
            Generator::Dixon1 => {
                let (m, n) = (rng.gen_range(3..=4), rng.gen_range(3..=4));
                let bound = if kind == GeometryKind::Spherical { 2.8 } else { 1.8 };
                generate_dixon1(kind, &coordinates(rng, n, bound), &coordinates(rng, m, bound))
            }
            Generator::Dixon2 => {
                let (pa, qa) = (anchor(rng, kind), anchor(rng, kind));
                let (ps, qs) = (selection(rng), selection(rng));
                let flips = (kind == GeometryKind::Spherical).then(|| FlipRecord {
                    p: (0..ps.len()).map(|_| rng.gen_bool(0.5)).collect(),
                    q: (0..qs.len()).map(|_| rng.gen_bool(0.5)).collect(),
                });
                generate_dixon2(kind, &pa, &qa, &ps, &qs, flips.as_ref())
            }
            Generator::Cda => generate_cda(rng.gen_range(0.2..1.3), rng.gen_range(-3.0..3.0), rng.gen_range(0.0..1e6)),
        };
        if let Ok(fw) = made {
            return fw;
        }
    }
}

/// Moves one joint by `size` in a random direction.
pub fn perturb(rng: &mut ChaCha8Rng, fw: &Framework, size: f64) -> Framework {
    let (mut p, mut q) = (fw.p().to_vec(), fw.q().to_vec());
    let k = rng.gen_range(0..fw.m() + fw.n());
    let target = if k < fw.m() { &mut p[k] } else { &mut q[k - fw.m()] };
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    let b = rng.gen_range(-1.0..1.0f64);
    let c = target.coords().to_vec();
    *target = match fw.kind() {
        GeometryKind::Euclidean => Point::euclid(c[0] + size * a.cos(), c[1] + size * a.sin()),
        GeometryKind::Hyperbolic => Point::disk(c[0] + size * a.cos(), c[1] + size * a.sin()).unwrap(),
        GeometryKind::Spherical => {
            let r = (1.0 - b * b).sqrt();
            Point::sphere(c[0] + size * r * a.cos(), c[1] + size * r * a.sin(), c[2] + size * b).unwrap()
        }
    };
    Framework::new(fw.kind(), p, q).unwrap()
}
