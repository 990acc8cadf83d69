//! SVG rendering of a rank-2 apartment: affine hyperplanes in
//! simple-root coordinates, with marked points.

use anyhow::{bail, Result};
use num_traits::ToPrimitive;
use padic_orbits::building::{ApartmentPoint, RootDatum};
use padic_orbits::linalg::Rat;

/// Express each root in the simple-root basis (rank 2 only).
fn simple_root_coordinates(rd: &RootDatum) -> Result<Vec<(f64, f64)>> {
    if rd.rank() != 2 {
        bail!("the apartment picture is only drawn for rank-2 algebras");
    }
    let s = rd.simple_roots();
    let (a, b) = (rd.root(s[0]), rd.root(s[1]));
    // solve root = c1·a + c2·b in the coordinate space
    let mut out = Vec::new();
    for r in rd.roots() {
        let (mut c1, mut c2) = (None, None);
        // two independent coordinates of (a, b) suffice
        let n = r.coeffs().len();
        'search: for i in 0..n {
            for j in 0..n {
                let det = a.coeffs()[i] * b.coeffs()[j] - a.coeffs()[j] * b.coeffs()[i];
                if det != 0 {
                    let d = det as f64;
                    c1 = Some(
                        (r.coeffs()[i] * b.coeffs()[j] - r.coeffs()[j] * b.coeffs()[i]) as f64 / d,
                    );
                    c2 = Some(
                        (a.coeffs()[i] * r.coeffs()[j] - a.coeffs()[j] * r.coeffs()[i]) as f64 / d,
                    );
                    break 'search;
                }
            }
        }
        out.push((c1.expect("independent simple roots"), c2.expect("rank 2")));
    }
    Ok(out)
}

/// Draw hyperplanes `α(x) = m` for `|m| ≤ range` in the plane with axes
/// `(α1(x), α2(x))`, plus the marked points.
pub fn render_apartment(rd: &RootDatum, points: &[ApartmentPoint]) -> Result<String> {
    let coords = simple_root_coordinates(rd)?;
    let range = 2i64;
    let scale = 80.0;
    let half = (range as f64 + 0.5) * scale;
    let size = 2.0 * half;
    let to_px = |u: f64, v: f64| (half + u * scale, half - v * scale);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // every root gives the family of lines c1·u + c2·v = m
    for (c1, c2) in &coords {
        for m in -2 * range..=2 * range {
            let m = m as f64;
            // intersect with the viewing box in (u, v) coordinates
            let bound = range as f64 + 0.5;
            let mut pts = Vec::new();
            if c2.abs() > 1e-9 {
                for u in [-bound, bound] {
                    let v = (m - c1 * u) / c2;
                    if v.abs() <= bound + 1e-9 {
                        pts.push((u, v));
                    }
                }
            }
            if c1.abs() > 1e-9 {
                for v in [-bound, bound] {
                    let u = (m - c2 * v) / c1;
                    if u.abs() <= bound + 1e-9 {
                        pts.push((u, v));
                    }
                }
            }
            pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
            if pts.len() >= 2 {
                let (x1, y1) = to_px(pts[0].0, pts[0].1);
                let (x2, y2) = to_px(pts[1].0, pts[1].1);
                let style = if m == 0.0 {
                    "stroke=\"#555\" stroke-width=\"1.2\""
                } else {
                    "stroke=\"#bbb\" stroke-width=\"0.6\""
                };
                out.push_str(&format!(
                    "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" {style}/>\n"
                ));
            }
        }
    }
    for pt in points {
        let s = rd.simple_roots();
        let u = eval_f64(&rd.root(s[0]).eval(pt));
        let v = eval_f64(&rd.root(s[1]).eval(pt));
        let (x, y) = to_px(u, v);
        out.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"#1f4e9c\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn eval_f64(r: &Rat) -> f64 {
    let num = r.numer().to_f64().unwrap_or(0.0);
    let den = r.denom().to_f64().unwrap_or(1.0);
    num / den
}
