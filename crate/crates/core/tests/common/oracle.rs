//! Numerical hyperbolic geometry on Euclidean circles, independent of the
//! closed forms in the library.

use num_complex::Complex64 as C;

/// A horocycle drawn in the upper half-plane.
#[derive(Clone, Copy, Debug)]
pub enum Horo {
    /// Tangent at `base` with Euclidean diameter `diam`.
    Circle { base: f64, diam: f64 },
    /// The line `Im z = height`.
    Line { height: f64 },
}

/// A real Möbius map `(a z + b) / (c z + d)` with `ad - bc > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Mob {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mob {
    pub fn apply(&self, z: C) -> C {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Image of a real point, `None` for the point sent to infinity.
    pub fn apply_real(&self, x: f64) -> Option<f64> {
        let den = self.c * x + self.d;
        if den.abs() < 1e-300 {
            None
        } else {
            Some((self.a * x + self.b) / den)
        }
    }
}

fn circle_through(p: C, q: C, r: C) -> (C, f64) {
    let (ax, ay, bx, by, cx, cy) = (p.re, p.im, q.re, q.im, r.re, r.im);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let centre = C::new(ux, uy);
    (centre, (p - centre).norm())
}

fn sample(h: &Horo) -> [C; 3] {
    match *h {
        Horo::Circle { base, diam } => {
            let c = C::new(base, diam / 2.0);
            [0.3f64, 1.7, 2.9].map(|t| c + C::from_polar(diam / 2.0, t))
        }
        Horo::Line { height } => [-1.0, 0.5, 2.0].map(|x| C::new(x, height)),
    }
}

/// Pushes a horocycle through `g` by mapping three of its points.
pub fn push(g: &Mob, h: &Horo) -> Horo {
    let pts = sample(h).map(|z| g.apply(z));
    let spread = (pts[0].im - pts[1].im).abs() + (pts[1].im - pts[2].im).abs();
    if spread < 1e-12 * pts[0].im.abs().max(1.0) {
        return Horo::Line { height: pts[0].im };
    }
    let (centre, radius) = circle_through(pts[0], pts[1], pts[2]);
    Horo::Circle {
        base: centre.re,
        diam: 2.0 * radius,
    }
}

/// Lambda length by moving the first horocycle to a horizontal line and
/// reading the signed distance along the vertical geodesic.
pub fn lambda_by_reduction(h1: &Horo, h2: &Horo) -> f64 {
    let (h1, h2) = match *h1 {
        Horo::Line { .. } => (*h1, *h2),
        Horo::Circle { base, .. } => {
            let g = Mob { a: 0.0, b: -1.0, c: 1.0, d: -base };
            (push(&g, h1), push(&g, h2))
        }
    };
    let (Horo::Line { height }, Horo::Circle { diam, .. }) = (h1, h2) else {
        panic!("reduction failed");
    };
    // delta = ln(height / diam), lambda = e^{delta / 2}
    (height / diam).sqrt()
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        // Roundoff makes tolerances below ~eps * |whole| unreachable.
        if depth == 0 || delta.abs() <= 15.0 * tol.max(4.0 * f64::EPSILON * whole.abs()) {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + rec(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Angle on the horocycle circle `base + i r + r e^{i t}` where it meets
/// the geodesic from `base` to `end`.
fn meeting_angle(base: f64, diam: f64, end: f64) -> f64 {
    let r = diam / 2.0;
    let h = C::new(base, r);
    let g = C::new((base + end) / 2.0, 0.0);
    let rho = (end - base).abs() / 2.0;
    // Two circles through `base`; the other common point is the reflection
    // of `base` across the line of centres.
    let dir = (g - h) / (g - h).norm();
    let v = C::new(base, 0.0) - h;
    let along = dir * (v.re * dir.re + v.im * dir.im);
    let other = h + along * 2.0 - v;
    debug_assert!(((other - g).norm() - rho).abs() < 1e-6 * rho.max(1.0));
    let t = (other - h).arg();
    if t < -std::f64::consts::FRAC_PI_2 {
        t + 2.0 * std::f64::consts::PI
    } else {
        t
    }
}

/// Hyperbolic length of the horocyclic arc at `base` between the geodesics
/// to `b` and `c`, integrated along the circle.
pub fn horocyclic_arc_by_quadrature(base: f64, diam: f64, b: f64, c: f64) -> f64 {
    let (tb, tc) = (meeting_angle(base, diam, b), meeting_angle(base, diam, c));
    let (lo, hi) = if tb < tc { (tb, tc) } else { (tc, tb) };
    // |dz| / Im z on z = base + i r + r e^{it}
    integrate(&|t: f64| 1.0 / (1.0 + t.sin()), lo, hi, 1e-13)
}

/// Hyperbolic length of the geodesic `(x, y)` inside the horoball: entry and
/// exit angles by intersecting the two Euclidean circles, then `dphi / sin phi`.
pub fn length_in_horoball_by_quadrature(x: f64, y: f64, h: &Horo) -> f64 {
    let centre = (x + y) / 2.0;
    let rad = (y - x).abs() / 2.0;
    let (p, q) = match *h {
        Horo::Line { height } => {
            if height >= rad {
                return 0.0;
            }
            let a = (height / rad).asin();
            (a, std::f64::consts::PI - a)
        }
        Horo::Circle { base, diam } => {
            let o = C::new(base, diam / 2.0);
            let r = diam / 2.0;
            let d = (o - C::new(centre, 0.0)).norm();
            if d >= rad + r || d <= (rad - r).abs() {
                return 0.0;
            }
            let u = (o - C::new(centre, 0.0)) / d;
            let along = (d * d + rad * rad - r * r) / (2.0 * d);
            let off = (rad * rad - along * along).max(0.0).sqrt();
            let perp = u * C::i();
            let ang = |z: C| (z - C::new(centre, 0.0)).arg();
            let a = ang(C::new(centre, 0.0) + u * along + perp * off);
            let b = ang(C::new(centre, 0.0) + u * along - perp * off);
            (a.min(b), a.max(b))
        }
    };
    integrate(&|t: f64| 1.0 / t.sin(), p, q, 1e-12)
}
