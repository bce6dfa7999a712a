use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::Vector3;
use serde_json::{json, Value};

use super::FlexPath;
use crate::error::{FlexError, Result};
use crate::framework::Framework;
use crate::geometry::{minkowski, GeometryKind, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotionFormat {
    Json,
    Svg,
}

impl FromStr for MotionFormat {
    type Err = FlexError;

    fn from_str(s: &str) -> Result<MotionFormat> {
        match s {
            "json" => Ok(MotionFormat::Json),
            "svg" => Ok(MotionFormat::Svg),
            other => Err(FlexError::Usage(format!("unknown motion format {other:?}; expected json or svg"))),
        }
    }
}

/// Serializes a traced motion as JSON frames or an animated SVG.
pub fn export_motion(path: &FlexPath, format: MotionFormat) -> Result<Vec<u8>> {
    if path.frames.is_empty() {
        return Err(FlexError::Usage("cannot export an empty motion".into()));
    }
    Ok(match format {
        MotionFormat::Json => {
            let v = motion_json(path);
            let mut s = serde_json::to_string_pretty(&v).expect("motion values serialize");
            s.push('\n');
            s.into_bytes()
        }
        MotionFormat::Svg => motion_svg(path).into_bytes(),
    })
}

fn motion_json(path: &FlexPath) -> Value {
    let kind = path.frames[0].kind();
    let frames: Vec<Value> = path
        .frames
        .iter()
        .zip(&path.thetas)
        .zip(&path.residuals)
        .map(|((f, t), r)| {
            let v = f.to_value();
            json!({ "theta": t, "P": v["P"], "Q": v["Q"], "residual": r })
        })
        .collect();
    json!({
        "geometry": kind,
        "model": kind.canonical_model(),
        "fixed": [path.fixed.0, path.fixed.1],
        "origin": path.origin,
        "max_length_drift": path.max_length_drift,
        "closure": path.closure.to_string(),
        "frames": frames,
    })
}

/// Reads the frames of a motion JSON document back as frameworks.
pub fn read_motion_frames(text: &str) -> Result<Vec<Framework>> {
    let v: Value = serde_json::from_str(text).map_err(|e| FlexError::Usage(format!("invalid motion JSON: {e}")))?;
    let frames = v["frames"].as_array().ok_or_else(|| FlexError::Usage("motion JSON lacks \"frames\"".into()))?;
    frames
        .iter()
        .map(|f| {
            Framework::from_value(&json!({ "geometry": v["geometry"], "model": v["model"], "P": f["P"], "Q": f["Q"] }))
        })
        .collect()
}

/// Samples of the geodesic segment from `a` to `b`, projected to the drawing plane.
fn segment(a: &Point, b: &Point, samples: usize) -> Vec<[f64; 2]> {
    let kind = a.kind();
    if kind == GeometryKind::Euclidean {
        return vec![[a.x(), a.y()], [b.x(), b.y()]];
    }
    let (la, lb) = (a.lift(), b.lift());
    (0..=samples)
        .map(|k| {
            let t = k as f64 / samples as f64;
            let v: Vector3<f64> = la * (1.0 - t) + lb * t;
            match kind {
                GeometryKind::Hyperbolic => {
                    let w = v / (-minkowski(&v, &v)).sqrt();
                    [w[1] / (1.0 + w[0]), w[2] / (1.0 + w[0])]
                }
                _ => {
                    let w = v.normalize();
                    [w[0], w[1]]
                }
            }
        })
        .collect()
}

fn fmt_pt(p: [f64; 2]) -> String {
    format!("{:.5},{:.5}", p[0], -p[1])
}

fn animate(out: &mut String, attr: &str, values: &[String], dur: f64) {
    if values.len() > 1 && values.iter().any(|v| v != &values[0]) {
        let _ = write!(
            out,
            "<animate attributeName=\"{attr}\" values=\"{}\" dur=\"{dur:.2}s\" repeatCount=\"indefinite\"/>",
            values.join(";")
        );
    }
}

fn motion_svg(path: &FlexPath) -> String {
    let kind = path.frames[0].kind();
    let (m, n) = (path.frames[0].m(), path.frames[0].n());
    let dur = (path.frames.len() as f64 * 0.05).max(0.05);
    let (min, max) = match kind {
        GeometryKind::Euclidean => {
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for f in &path.frames {
                for x in f.p().iter().chain(f.q()) {
                    lo = [lo[0].min(x.x()), lo[1].min(x.y())];
                    hi = [hi[0].max(x.x()), hi[1].max(x.y())];
                }
            }
            let pad = 0.1 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
            ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad])
        }
        _ => ([-1.1, -1.1], [1.1, 1.1]),
    };
    let (w, h) = (max[0] - min[0], max[1] - min[1]);
    let unit = w.max(h) / 200.0;
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.5} {:.5} {:.5} {:.5}\" width=\"600\" height=\"{:.0}\">",
        min[0],
        -max[1],
        w,
        h,
        600.0 * h / w
    );
    let _ = writeln!(
        out,
        "<style>.rod{{fill:none;stroke:#555;stroke-width:{:.5}}} .p{{fill:#c0392b}} .q{{fill:#2471a3}} .fixed{{stroke:#000;stroke-width:{:.5}}} .boundary{{fill:none;stroke:#999;stroke-width:{:.5}}}</style>",
        unit,
        unit * 0.8,
        unit
    );
    match kind {
        GeometryKind::Hyperbolic => {
            let _ = writeln!(out, "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\"/>");
        }
        GeometryKind::Spherical => {
            let _ = writeln!(out, "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" style=\"fill:#f4f6f7\"/>");
        }
        GeometryKind::Euclidean => {}
    }
    let _ = writeln!(out, "<g id=\"rods\">");
    for i in 0..m {
        for j in 0..n {
            let values: Vec<String> = path
                .frames
                .iter()
                .map(|f| segment(&f.p()[i], &f.q()[j], 16).into_iter().map(fmt_pt).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = write!(out, "<polyline class=\"rod\" id=\"rod-{i}-{j}\" points=\"{}\">", values[0]);
            animate(&mut out, "points", &values, dur);
            let _ = writeln!(out, "</polyline>");
        }
    }
    let _ = writeln!(out, "</g>");
    for (label, count) in [("p", m), ("q", n)] {
        for k in 0..count {
            let pts: Vec<Point> = path.frames.iter().map(|f| if label == "p" { f.p()[k] } else { f.q()[k] }).collect();
            let fixed = (label == "p" && k == path.fixed.0) || (label == "q" && k == path.fixed.1);
            let class = if fixed { format!("{label} fixed") } else { label.to_string() };
            let _ =
                write!(out, "<g id=\"{label}{k}\" class=\"joint\"><circle class=\"{class}\" r=\"{:.5}\"", 3.0 * unit);
            let proj: Vec<[f64; 2]> = pts.iter().map(|x| [x.x(), x.y()]).collect();
            let _ = write!(out, " cx=\"{:.5}\" cy=\"{:.5}\"", proj[0][0], -proj[0][1]);
            let hidden: Vec<String> = pts
                .iter()
                .map(|x| if kind == GeometryKind::Spherical && x.z() < 0.0 { "0.35" } else { "1" }.to_string())
                .collect();
            let _ = write!(out, " opacity=\"{}\">", hidden[0]);
            let cx: Vec<String> = proj.iter().map(|p| format!("{:.5}", p[0])).collect();
            let cy: Vec<String> = proj.iter().map(|p| format!("{:.5}", -p[1])).collect();
            animate(&mut out, "cx", &cx, dur);
            animate(&mut out, "cy", &cy, dur);
            animate(&mut out, "opacity", &hidden, dur);
            let _ = writeln!(out, "</circle></g>");
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{generate_dixon1, trace_flex, Closure, TraceOutcome};

    fn single(fw: Framework) -> FlexPath {
        FlexPath {
            thetas: vec![0.0],
            residuals: vec![0.0],
            frames: vec![fw],
            origin: 0,
            fixed: (0, 0),
            max_length_drift: 0.0,
            closure: Closure::JammedForwardAndBackward,
        }
    }

    #[test]
    fn static_svg_for_one_frame() {
        let fw = generate_dixon1(GeometryKind::Hyperbolic, &[0.3, 0.6, 0.9], &[0.4, 0.8]).unwrap();
        let svg = String::from_utf8(export_motion(&single(fw), MotionFormat::Svg).unwrap()).unwrap();
        assert!(!svg.contains("<animate"));
        assert_eq!(svg.matches("class=\"rod\"").count(), 6);
        assert!(svg.contains("class=\"boundary\""));
    }

    #[test]
    fn json_round_trip() {
        let fw = generate_dixon1(GeometryKind::Euclidean, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        let TraceOutcome::Path(path) = trace_flex(&fw, 20, 0.01, 1e-9).unwrap() else { panic!("jammed") };
        let bytes = export_motion(&path, MotionFormat::Json).unwrap();
        let frames = read_motion_frames(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert_eq!(frames.len(), path.frames.len());
        for (a, b) in frames.iter().zip(&path.frames) {
            for (x, y) in a.p().iter().chain(a.q()).zip(b.p().iter().chain(b.q())) {
                assert!(crate::geometry::dist(x, y) < 1e-15);
            }
        }
        let svg = String::from_utf8(export_motion(&path, MotionFormat::Svg).unwrap()).unwrap();
        assert_eq!(svg.matches("class=\"rod\"").count(), 9);
        assert!(svg.contains("<animate"));
    }

    #[test]
    fn empty_paths_are_rejected() {
        let fw = generate_dixon1(GeometryKind::Euclidean, &[1.0], &[1.0]).unwrap();
        let mut p = single(fw);
        p.frames.clear();
        assert!(export_motion(&p, MotionFormat::Json).is_err());
        assert!("png".parse::<MotionFormat>().is_err());
    }
}
