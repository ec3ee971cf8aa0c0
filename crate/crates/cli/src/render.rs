//! Deterministic SVG drawings of the real part of an arrangement.

use std::fmt::Write as _;

use conic_zariski::geometry::{choose_base_point_nth, parametrize, Conic, CurveParam, ProjLine, ProjPoint};
use conic_zariski::numeric::Tolerances;
use num_complex::Complex64;

const SIZE: f64 = 600.0;
const SAMPLES: usize = 512;
const REAL_TOL: f64 = 1e-9;
/// Samples farther out than this are treated as leaving the picture.
const FAR: f64 = 1e3;

/// Elements to draw; complex ones are skipped and reported back.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub conics: Vec<(String, Conic)>,
    pub lines: Vec<(String, ProjLine)>,
    pub points: Vec<(String, ProjPoint)>,
}

pub struct Rendered {
    pub svg: String,
    pub omitted: Vec<String>,
}

fn conic_is_real(c: &Conic) -> bool {
    let k = c.mid_coeffs();
    let scale = k.iter().map(|z| z.norm()).fold(0.0, f64::max);
    k.iter().all(|z| z.im.abs() <= REAL_TOL * scale)
}

fn real_affine(p: &ProjPoint) -> Option<(f64, f64)> {
    if !p.is_real(REAL_TOL) {
        return None;
    }
    let [x, y, z] = p.normalized().mid();
    let s = x.norm().max(y.norm()).max(z.norm());
    if z.norm() <= 1e-12 * s {
        return None;
    }
    Some(((x / z).re, (y / z).re))
}

/// Sampled affine polylines of a real conic, split where it leaves the
/// picture. `None` if the conic has no real points.
fn sample_conic(c: &Conic, tol: &Tolerances) -> Option<Vec<Vec<(f64, f64)>>> {
    let base = (0..16)
        .filter_map(|k| choose_base_point_nth(c, &[], -1.0, k, tol).ok())
        .find(|p| p.is_real(REAL_TOL))?;
    let param = parametrize(c, &base, tol).ok()?;
    let coeffs: Vec<Vec<Complex64>> = param
        .coords()
        .iter()
        .map(|p| p.coeffs().iter().map(|a| a.mid()).collect())
        .collect();
    let mut runs = vec![Vec::new()];
    for k in 0..=SAMPLES {
        let phi = std::f64::consts::PI * k as f64 / SAMPLES as f64;
        let (t, w) = (phi.cos(), phi.sin());
        let v: Vec<Complex64> = coeffs
            .iter()
            .map(|a| a.iter().enumerate().map(|(i, c)| c * t.powi(i as i32) * w.powi(2 - i as i32)).sum())
            .collect();
        let s = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pt = (v[2].norm() > 1e-9 * s).then(|| ((v[0] / v[2]).re, (v[1] / v[2]).re));
        match pt {
            Some(p) if p.0.abs() < FAR && p.1.abs() < FAR => runs.last_mut().unwrap().push(p),
            _ => {
                if !runs.last().unwrap().is_empty() {
                    runs.push(Vec::new());
                }
            }
        }
    }
    runs.retain(|r| r.len() > 1);
    Some(runs)
}

#[derive(Clone, Copy, Debug)]
struct Viewport {
    x0: f64,
    y0: f64,
    span: f64,
}

impl Viewport {
    fn fit(pts: &[(f64, f64)]) -> Self {
        if pts.is_empty() {
            return Viewport { x0: -2.0, y0: -2.0, span: 4.0 };
        }
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-6) * 1.2;
        let cx = (lo.0 + hi.0) / 2.0;
        let cy = (lo.1 + hi.1) / 2.0;
        Viewport {
            x0: cx - span / 2.0,
            y0: cy - span / 2.0,
            span,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.x0) / self.span * SIZE, SIZE - (y - self.y0) / self.span * SIZE)
    }

    fn inside(&self, (x, y): (f64, f64)) -> bool {
        let e = 1e-9 * self.span;
        x >= self.x0 - e && x <= self.x0 + self.span + e && y >= self.y0 - e && y <= self.y0 + self.span + e
    }

    /// The segment of `a x + b y + c = 0` inside the viewport.
    fn clip(&self, a: f64, b: f64, c: f64) -> Option<((f64, f64), (f64, f64))> {
        let (x1, y1) = (self.x0 + self.span, self.y0 + self.span);
        let mut hits: Vec<(f64, f64)> = Vec::new();
        if b.abs() > 1e-15 {
            for x in [self.x0, x1] {
                hits.push((x, -(a * x + c) / b));
            }
        }
        if a.abs() > 1e-15 {
            for y in [self.y0, y1] {
                hits.push((-(b * y + c) / a, y));
            }
        }
        hits.retain(|&p| self.inside(p));
        let first = *hits.first()?;
        let second = hits
            .iter()
            .copied()
            .max_by(|p, q| dist(first, *p).partial_cmp(&dist(first, *q)).unwrap())?;
        (dist(first, second) > 1e-9 * self.span).then_some((first, second))
    }
}

fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const COLORS: [&str; 6] = ["#1f4e9c", "#b5301f", "#2d7a34", "#8a4f9e", "#c07a12", "#3d7f86"];

pub fn render_svg(scene: &Scene, tol: &Tolerances) -> Rendered {
    let mut omitted = Vec::new();
    let mut curves = Vec::new();
    for (label, c) in &scene.conics {
        match conic_is_real(c).then(|| sample_conic(c, tol)).flatten() {
            Some(runs) => curves.push((label, runs)),
            None => omitted.push(format!("conic {label} has no real points to draw")),
        }
    }
    let mut points = Vec::new();
    for (label, p) in &scene.points {
        match real_affine(p) {
            Some(q) => points.push((label, q)),
            None => omitted.push(format!("point {label} is not a finite real point")),
        }
    }
    let mut lines = Vec::new();
    for (label, l) in &scene.lines {
        if !l.is_real(REAL_TOL) {
            omitted.push(format!("line {label} is not real"));
            continue;
        }
        let [a, b, c] = l.normalized().mid();
        lines.push((label, (a.re, b.re, c.re)));
    }

    let mut extent: Vec<(f64, f64)> = curves.iter().flat_map(|c| c.1.iter().flatten().copied()).collect();
    extent.extend(points.iter().map(|p| p.1));
    let vp = Viewport::fit(&extent);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    for (k, (label, runs)) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let _ = writeln!(s, r#"<g id="{}" fill="none" stroke="{color}" stroke-width="2">"#, escape(label));
        for run in runs {
            let mut d = String::new();
            for (i, &p) in run.iter().enumerate() {
                let (x, y) = vp.map(p);
                let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
            }
            let _ = writeln!(s, r#"<path d="{d}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    for (label, (a, b, c)) in &lines {
        if let Some((p, q)) = vp.clip(*a, *b, *c) {
            let (p, q) = (vp.map(p), vp.map(q));
            let _ = writeln!(
                s,
                r##"<line id="{}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#555555" stroke-width="1"/>"##,
                escape(label),
                p.0,
                p.1,
                q.0,
                q.1
            );
            let _ = writeln!(
                s,
                r##"<text x="{:.3}" y="{:.3}" font-size="12" fill="#555555">{}</text>"##,
                p.0 + 4.0,
                p.1 - 4.0,
                escape(label)
            );
        }
    }
    for (label, q) in &points {
        let (x, y) = vp.map(*q);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="12">{}</text>"#,
            x + 5.0,
            y - 5.0,
            escape(label)
        );
    }
    let _ = writeln!(s, "</svg>");
    Rendered { svg: s, omitted }
}
