//! SVG drawing of rank-2 diagrams.

use std::fmt::Write;

use num_traits::{One, Zero};

use mirror_core::scattering::{ScatteringDiagram, Wall};
use mirror_core::series::WallFunction;
use mirror_core::{Error, LatticeVector, Result};

use crate::formats::Coeff;

const SIZE: f64 = 480.0;
const REACH: f64 = 200.0;

/// Wall function label showing at most three terms.
pub fn label(f: &WallFunction<Coeff>) -> String {
    let mut parts = vec!["1".to_string()];
    let mut rest = 0;
    for (j, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if parts.len() < 3 {
            let e = f.direction().scale(j as i64 + 1);
            let mono = format!("z^({})", e.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            parts.push(if c.is_one() { mono } else { format!("{c}{mono}") });
        } else {
            rest += 1;
        }
    }
    let mut s = parts.join(" + ");
    if rest > 0 {
        s.push_str(" + ...");
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn end(v: &LatticeVector) -> (f64, f64) {
    let (x, y) = (v[0] as f64, v[1] as f64);
    let n = (x * x + y * y).sqrt();
    (SIZE / 2.0 + REACH * x / n, SIZE / 2.0 - REACH * y / n)
}

fn draw_wall(out: &mut String, w: &Wall<Coeff>) {
    let c = SIZE / 2.0;
    let color = if w.is_initial() { "#1f4e79" } else { "#b03a2e" };
    let mut ends: Vec<LatticeVector> = w.support().rays().to_vec();
    for l in w.support().lineality() {
        ends.push(l.clone());
        ends.push(-l);
    }
    for e in &ends {
        let (x, y) = end(e);
        let _ = writeln!(
            out,
            r#"  <line x1="{c:.2}" y1="{c:.2}" x2="{x:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"/>"#
        );
    }
    let (x, y) = end(&ends[0]);
    let _ = writeln!(
        out,
        r#"  <text x="{x:.2}" y="{y:.2}" font-family="monospace" font-size="11" fill="{color}">{}</text>"#,
        escape(&label(w.function()))
    );
}

/// Byte-stable SVG with one segment per wall ray and its function as a label.
pub fn render(d: &ScatteringDiagram<Coeff>) -> Result<String> {
    if d.seed().rank() != 2 {
        return Err(Error::UnsupportedRank(d.seed().rank()));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
    for w in d.walls() {
        draw_wall(&mut out, w);
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mirror_core::lattice::Seed;
    use mirror_core::scattering::complete;

    #[test]
    fn a2_svg() {
        let d = complete::<Coeff>(&Seed::a2(), 4).unwrap();
        let s = render(&d).unwrap();
        assert_eq!(s.matches("<line").count(), 5);
        assert!(s.contains("1 + z^(1,1)"));
        assert_eq!(s, render(&d).unwrap());
    }
}
