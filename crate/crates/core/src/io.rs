//! Polygon files, fixed-precision JSON and SVG rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::geometry::{ConvexPolygon, Point2};

/// Reads `{"vertices": [[x, y], ...]}`; clockwise input is reversed.
pub fn load_polygon(path: &Path) -> Result<ConvexPolygon> {
    let text = fs::read_to_string(path)?;
    parse_polygon(&text)
}

pub fn parse_polygon(text: &str) -> Result<ConvexPolygon> {
    Ok(serde_json::from_str(text)?)
}

pub fn save_polygon(path: &Path, p: &ConvexPolygon) -> Result<()> {
    fs::write(path, to_json(p)?)?;
    Ok(())
}

/// Pretty JSON with every float written to 17 significant digits, so equal
/// values always produce identical bytes.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// `x` with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_f64(n.as_f64().expect("f64")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            // short numeric arrays (points) stay on one line
            if a.len() <= 2 && a.iter().all(Value::is_number) {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String(k.clone()));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// SVG of the polygon outline, optionally marking one point.
pub fn polygon_svg(p: &ConvexPolygon, marker: Option<Point2>) -> String {
    let vs = p.vertices();
    let (mut lo, mut hi) = (vs[0], vs[0]);
    for v in vs {
        lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let size = 400.0;
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let margin = 0.05 * span;
    let s = size / (span + 2.0 * margin);
    // flip y so the picture is upright
    let map = |q: Point2| ((q.x - lo.x + margin) * s, (hi.y - q.y + margin) * s);
    let w = (hi.x - lo.x + 2.0 * margin) * s;
    let h = (hi.y - lo.y + 2.0 * margin) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let pts: Vec<String> = vs
        .iter()
        .map(|&v| {
            let (x, y) = map(v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
    if let Some(m) = marker {
        let (x, y) = map(m);
        let _ = writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="4" fill="red"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
