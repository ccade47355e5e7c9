//! SVG drawings of rasters and their decompositions.

use std::fmt::Write;

use pcx_core::{Decomposition, Error, GridCompactum};

/// Longest side of the drawing, in pixels.
pub const CANVAS: f64 = 1024.0;

/// Fill used for cells when no decomposition is given.
const INK: &str = "#111111";

/// Decimal with at most three fractional digits and no trailing zeros.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Color of a class: a fixed mix of its id, kept away from white.
pub fn class_color(id: usize) -> String {
    let mut z = (id as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    let c = |shift: u32| 24 + ((z >> shift) & 0xff) * 184 / 255;
    format!("#{:02x}{:02x}{:02x}", c(0), c(8), c(16))
}

/// One rect per cell, row-major, scaled so the larger side spans the canvas.
/// With a decomposition each class gets [`class_color`] of its id.
pub fn render_svg(k: &GridCompactum, d: Option<&Decomposition>) -> Result<String, Error> {
    if let Some(d) = d {
        if d.level != k.level {
            return Err(Error::LevelMismatch);
        }
        if !d.covers(k) {
            return Err(Error::PartitionMismatch);
        }
    }
    let frame = k.frame();
    let (w, h) = if k.is_empty() {
        (1, 1)
    } else {
        (frame.width(), frame.height())
    };
    let s = CANVAS / w.max(h) as f64;
    let (pw, ph) = (w as f64 * s, h as f64 * s);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(pw),
        num(ph),
        num(pw),
        num(ph)
    );
    let _ = writeln!(
        out,
        "<title>{} at level {}</title>",
        escape(&k.source),
        k.level
    );
    let _ = writeln!(
        out,
        "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>"
    );
    out.push_str("<g id=\"cells\" shape-rendering=\"crispEdges\">\n");
    let side = num(s);
    for c in k.cells() {
        let x = (c.i - frame.i0) as f64 * s;
        // Grid rows grow upwards, SVG rows downwards.
        let y = (frame.j1 - 1 - c.j) as f64 * s;
        let fill = match d {
            Some(d) => class_color(d.class_of(c).expect("covered")),
            None => INK.to_string(),
        };
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{side}\" height=\"{side}\" fill=\"{fill}\"/>",
            num(x),
            num(y)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
