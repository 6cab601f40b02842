//! Poincare disk pictures through the Cayley map `z -> (z - i)/(z + i)`.

use std::fmt::Write;

use farey_core::{Decoration, ExtRat, WindowTriangulation};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn cayley(z: Complex64) -> Complex64 {
    (z - I) / (z + I)
}

/// Image of a boundary point on the unit circle; infinity goes to 1.
pub fn boundary_point(x: &ExtRat) -> Complex64 {
    if x.is_infinite() {
        Complex64::new(1.0, 0.0)
    } else {
        cayley(Complex64::new(x.to_f64(), 0.0))
    }
}

/// A geodesic in the disk: a circle orthogonal to the unit circle, or a
/// diameter when the endpoints are antipodal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskGeodesic {
    Arc { from: Complex64, to: Complex64, center: Complex64, radius: f64, sweep: bool },
    Line { from: Complex64, to: Complex64 },
}

pub fn geodesic(p: Complex64, q: Complex64) -> DiskGeodesic {
    let denom = 1.0 + (p * q.conj()).re;
    if denom.abs() < 1e-12 {
        return DiskGeodesic::Line { from: p, to: q };
    }
    let center = (p + q) / denom;
    let radius = (center - p).norm();
    let mid = center - center / center.norm() * radius;
    // Orientation of p -> mid -> q with y flipped, as SVG sees it.
    let (a, b) = (mid - p, q - mid);
    let cross = a.re * (-b.im) - (-a.im) * b.re;
    DiskGeodesic::Arc {
        from: p,
        to: q,
        center,
        radius,
        sweep: cross > 0.0,
    }
}

/// The disk image of the horocycle at `base` with the given size.
pub fn horocycle_circle(base: &ExtRat, size: f64) -> (Complex64, f64) {
    if base.is_infinite() {
        return (Complex64::new(size / (size + 1.0), 0.0), 1.0 / (size + 1.0));
    }
    let x = base.to_f64();
    let pts = [
        cayley(Complex64::new(x, 0.0)),
        cayley(Complex64::new(x, size)),
        cayley(Complex64::new(x + size / 2.0, size / 2.0)),
    ];
    circumcircle(pts)
}

fn circumcircle([a, b, c]: [Complex64; 3]) -> (Complex64, f64) {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let center = Complex64::new(ux, uy);
    (center, (a - center).norm())
}

struct Frame {
    half: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, z: Complex64) -> f64 {
        self.half + self.scale * z.re
    }

    fn y(&self, z: Complex64) -> f64 {
        self.half - self.scale * z.im
    }
}

pub fn svg(t: &WindowTriangulation, dec: Option<&Decoration>, size: u32) -> String {
    let half = size as f64 / 2.0;
    let f = Frame {
        half,
        scale: half - 10.0,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<circle cx="{half:.3}" cy="{half:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        f.scale
    );
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="0.5">"#);
    for e in t.edges() {
        let (a, b) = e.endpoints();
        match geodesic(boundary_point(a), boundary_point(b)) {
            DiskGeodesic::Line { from, to } => {
                let _ = writeln!(
                    s,
                    r#"<path d="M {:.3} {:.3} L {:.3} {:.3}"/>"#,
                    f.x(from),
                    f.y(from),
                    f.x(to),
                    f.y(to)
                );
            }
            DiskGeodesic::Arc {
                from, to, radius, sweep, ..
            } => {
                let _ = writeln!(
                    s,
                    r#"<path d="M {:.3} {:.3} A {:.3} {:.3} 0 0 {} {:.3} {:.3}"/>"#,
                    f.x(from),
                    f.y(from),
                    radius * f.scale,
                    radius * f.scale,
                    sweep as u8,
                    f.x(to),
                    f.y(to)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");
    if let Some(dec) = dec {
        let _ = writeln!(s, r#"<g fill="none" stroke="steelblue" stroke-width="0.5">"#);
        for (v, size) in dec.iter() {
            let (c, r) = horocycle_circle(v, size.to_f64());
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
                f.x(c),
                f.y(c),
                r * f.scale
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
