use std::fmt::Write;

use num_traits::ToPrimitive;

use super::PiecewiseLinear;
use crate::exactnum::Rational;

/// Plot of a copolygon over `[lo, hi]`, ρ horizontal and the value vertical.
pub fn render_svg(f: &PiecewiseLinear, lo: &Rational, hi: &Rational) -> String {
    let (w, h, m) = (480.0, 320.0, 32.0);
    let mut xs: Vec<Rational> = vec![lo.clone()];
    xs.extend(
        f.breakpoints()
            .iter()
            .map(|(x, _)| x.clone())
            .filter(|x| x > lo && x < hi),
    );
    xs.push(hi.clone());
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|x| (x.to_f64().unwrap(), f.value(x).to_f64().unwrap()))
        .collect();
    let (x0, x1) = (pts[0].0, pts[pts.len() - 1].0);
    let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let yspan = if ymax > ymin { ymax - ymin } else { 1.0 };
    let xspan = if x1 > x0 { x1 - x0 } else { 1.0 };
    let sx = |x: f64| m + (x - x0) / xspan * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - ymin) / yspan * (h - 2.0 * m);

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r##"<line x1="{m}" y1="{}" x2="{}" y2="{}" stroke="#888"/>"##, h - m, w - m, h - m).unwrap();
    writeln!(s, r##"<line x1="{m}" y1="{m}" x2="{m}" y2="{}" stroke="#888"/>"##, h - m).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="12">ρ</text>"#, w - m + 4.0, h - m + 4.0).unwrap();
    writeln!(s, r#"<text x="4" y="{}" font-size="12">VP</text>"#, m - 8.0).unwrap();
    let path: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
        .collect();
    writeln!(s, r#"<polyline fill="none" stroke="black" stroke-width="2" points="{}"/>"#, path.join(" ")).unwrap();
    for (x, y) in f.breakpoints() {
        if x >= lo && x <= hi {
            let (px, py) = (sx(x.to_f64().unwrap()), sy(y.to_f64().unwrap()));
            writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3"/>"#).unwrap();
            writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="10">({x}, {y})</text>"#, px + 4.0, py - 4.0).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
