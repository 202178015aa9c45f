//! Boundary loci of the characteristic equations, winding-number membership
//! tests, bifurcation values and real-axis stability intervals.
//!
//! A parameter `p` is classified with the argument principle: the
//! characteristic function behaves like `z^d` at infinity (`d = 2` for the
//! two-term model, `d = N` for the one-term model), so the number of roots
//! outside the unit disk is `d - winding(locus, p)`. Stability is therefore
//! `winding == d`, which also settles self-intersecting loci.

mod bifurcation;
pub mod regions;

pub use bifurcation::{
    bifurcation_values, one_term_real_interval, real_interval, BifurcationReport, RealInterval,
    Regime, REGIME_TOL,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::special::FractionalOrderPair;

/// Model family whose boundary locus is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    TwoTerm { orders: FractionalOrderPair, a: f64 },
    OneTerm { alpha: f64, big_n: usize },
}

impl Family {
    pub fn two_term(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(invalid(format!("a must be finite, got {a}")));
        }
        Ok(Family::TwoTerm { orders: FractionalOrderPair::new(alpha, beta)?, a })
    }

    pub fn one_term(alpha: f64, big_n: usize) -> Result<Self> {
        let n = big_n as f64;
        if big_n < 1 || !(alpha > n - 1.0 && alpha <= n) {
            return Err(invalid(format!("need N >= 1 and N - 1 < alpha <= N, got alpha = {alpha}, N = {big_n}")));
        }
        Ok(Family::OneTerm { alpha, big_n })
    }

    pub fn locus(&self, theta: f64) -> Complex64 {
        match *self {
            Family::TwoTerm { orders, a } => gamma_locus(orders, a, theta),
            Family::OneTerm { alpha, big_n } => capital_gamma_locus(alpha, big_n, theta),
        }
    }

    /// Winding number that signals stability.
    pub fn stable_winding(&self) -> i64 {
        match *self {
            Family::TwoTerm { .. } => 2,
            Family::OneTerm { big_n, .. } => big_n as i64,
        }
    }
}

// Evaluates on [0, pi] and mirrors, so conjugate symmetry and the closing
// identity locus(2 pi) = locus(0) hold exactly.
fn mirrored(theta: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    if theta > PI {
        f(TAU - theta).conj()
    } else {
        f(theta)
    }
}

/// Two-term boundary locus
/// `(2 sin(t/2))^alpha e^{i(alpha pi/2 + t(2 - alpha/2))}
///  + a (2 sin(t/2))^beta e^{i(beta pi/2 + t(1 - beta/2))} + 1`.
pub fn gamma_locus(orders: FractionalOrderPair, a: f64, theta: f64) -> Complex64 {
    let FractionalOrderPair { alpha, beta } = orders;
    mirrored(theta, |t| {
        let s = 2.0 * (t / 2.0).sin();
        let first = Complex64::from_polar(s.powf(alpha), alpha * PI / 2.0 + t * (2.0 - alpha / 2.0));
        let second = Complex64::from_polar(a * s.powf(beta), beta * PI / 2.0 + t * (1.0 - beta / 2.0));
        first + second + 1.0
    })
}

/// One-term boundary locus
/// `(2 sin(t/2))^alpha e^{i(alpha pi/2 + t(N - alpha/2))} + 1`.
pub fn capital_gamma_locus(alpha: f64, big_n: usize, theta: f64) -> Complex64 {
    let n = big_n as f64;
    mirrored(theta, |t| {
        let s = 2.0 * (t / 2.0).sin();
        Complex64::from_polar(s.powf(alpha), alpha * PI / 2.0 + t * (n - alpha / 2.0)) + 1.0
    })
}

/// Closed polyline sampled from a locus on `[0, 2 pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub thetas: Vec<f64>,
    pub points: Vec<Complex64>,
    /// `None` for curves built from raw points, which disables adaptive
    /// subdivision in [`winding_number`].
    pub family: Option<Family>,
}

impl BoundaryCurve {
    pub fn from_points(thetas: Vec<f64>, points: Vec<Complex64>) -> Result<Self> {
        if thetas.len() != points.len() || points.len() < 3 {
            return Err(invalid("curve needs matching thetas and at least 3 points"));
        }
        Ok(Self { thetas, points, family: None })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(re_min, re_max, im_min, im_max)`
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            b.0 = b.0.min(p.re);
            b.1 = b.1.max(p.re);
            b.2 = b.2.min(p.im);
            b.3 = b.3.max(p.im);
        }
        b
    }

    /// Distance from `z` to the polyline.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.points
            .windows(2)
            .map(|s| segment_distance(s[0], s[1], z))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(p: Complex64, q: Complex64, z: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * t - z).norm()
}

const MAX_REFINE_DEPTH: u32 = 60;

/// Uniform grid of `resolution` intervals, bisected wherever neighbouring
/// points lie more than `diameter / resolution` apart.
pub fn sample_boundary(family: &Family, resolution: usize) -> Result<BoundaryCurve> {
    if resolution < 1024 {
        return Err(invalid(format!("resolution must be at least 1024, got {resolution}")));
    }
    let uniform: Vec<f64> = (0..=resolution).map(|i| TAU * i as f64 / resolution as f64).collect();
    let coarse: Vec<Complex64> = uniform.iter().map(|&t| family.locus(t)).collect();
    let (x0, x1, y0, y1) = BoundaryCurve { thetas: vec![], points: coarse.clone(), family: None }
        .bounding_box();
    let h = (x1 - x0).hypot(y1 - y0) / resolution as f64;

    let mut thetas = Vec::with_capacity(resolution + 64);
    let mut points = Vec::with_capacity(resolution + 64);
    thetas.push(uniform[0]);
    points.push(coarse[0]);
    for i in 0..resolution {
        refine(family, (uniform[i], coarse[i]), (uniform[i + 1], coarse[i + 1]), h, 0, &mut thetas, &mut points);
    }
    Ok(BoundaryCurve { thetas, points, family: Some(*family) })
}

fn refine(
    family: &Family,
    lo: (f64, Complex64),
    hi: (f64, Complex64),
    h: f64,
    depth: u32,
    thetas: &mut Vec<f64>,
    points: &mut Vec<Complex64>,
) {
    let tm = 0.5 * (lo.0 + hi.0);
    if (hi.1 - lo.1).norm() > h && depth < MAX_REFINE_DEPTH && tm > lo.0 && tm < hi.0 {
        let mid = (tm, family.locus(tm));
        refine(family, lo, mid, h, depth + 1, thetas, points);
        refine(family, mid, hi, h, depth + 1, thetas, points);
    } else {
        thetas.push(hi.0);
        points.push(hi.1);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub winding: i64,
    pub min_distance: f64,
}

const MAX_SUBDIVIDE_DEPTH: u32 = 40;

/// Signed turning of `curve - point`, rounded to the nearest integer, with
/// the distance from `point` to the curve.
///
/// Angle increments above `pi/2` between neighbouring samples are split by
/// evaluating the locus at the midpoint parameter.
pub fn winding_number(curve: &BoundaryCurve, point: Complex64) -> Winding {
    let mut total = 0.0;
    for i in 0..curve.points.len().saturating_sub(1) {
        let lo = (curve.thetas[i], curve.points[i]);
        let hi = (curve.thetas[i + 1], curve.points[i + 1]);
        total += turning(curve.family.as_ref(), lo, hi, point, 0);
    }
    Winding {
        winding: (total / TAU).round() as i64,
        min_distance: curve.distance_to(point),
    }
}

fn turning(
    family: Option<&Family>,
    lo: (f64, Complex64),
    hi: (f64, Complex64),
    z: Complex64,
    depth: u32,
) -> f64 {
    let inc = ((hi.1 - z) * (lo.1 - z).conj()).arg();
    match family {
        Some(f) if inc.abs() > PI / 2.0 && depth < MAX_SUBDIVIDE_DEPTH => {
            let tm = 0.5 * (lo.0 + hi.0);
            let mid = (tm, f.locus(tm));
            turning(family, lo, mid, z, depth + 1) + turning(family, mid, hi, z, depth + 1)
        }
        _ => inc,
    }
}

/// [`winding_number`], failing when the point is within `eps` of the curve.
pub fn winding_number_checked(curve: &BoundaryCurve, point: Complex64, eps: f64) -> Result<Winding> {
    let w = winding_number(curve, point);
    if w.min_distance < eps {
        return Err(Error::OnBoundary { distance: w.min_distance, eps });
    }
    Ok(w)
}

/// Winding number of the closed polyline by signed upward/downward edge
/// crossings. Exact for the polyline and much cheaper than the angle sum;
/// used for grid rasters.
pub fn polygon_winding(points: &[Complex64], z: Complex64) -> i64 {
    let mut wn = 0i64;
    for s in points.windows(2) {
        let (p, q) = (s[0], s[1]);
        let side = (q.re - p.re) * (z.im - p.im) - (z.re - p.re) * (q.im - p.im);
        if p.im <= z.im {
            if q.im > z.im && side > 0.0 {
                wn += 1;
            }
        } else if q.im <= z.im && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictClass {
    Stable,
    Unstable,
    Boundary,
}

impl VerdictClass {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictClass::Stable => "Stable",
            VerdictClass::Unstable => "Unstable",
            VerdictClass::Boundary => "Boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub kind: VerdictClass,
    pub winding: i64,
    pub min_distance_to_curve: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub resolution: usize,
    pub eps_boundary: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self { resolution: 4096, eps_boundary: 1e-3 }
    }
}

/// Classifies `param` against an already sampled curve.
pub fn classify_with_curve(curve: &BoundaryCurve, param: Complex64, eps_boundary: f64) -> StabilityVerdict {
    let w = winding_number(curve, param);
    let target = curve.family.map(|f| f.stable_winding()).unwrap_or(1);
    let kind = if w.min_distance < eps_boundary {
        VerdictClass::Boundary
    } else if w.winding == target {
        VerdictClass::Stable
    } else {
        VerdictClass::Unstable
    };
    StabilityVerdict { kind, winding: w.winding, min_distance_to_curve: w.min_distance }
}

pub fn classify_point(family: &Family, param: Complex64, cfg: &StabilityConfig) -> Result<StabilityVerdict> {
    if !(param.re.is_finite() && param.im.is_finite()) {
        return Err(invalid("parameter must be finite"));
    }
    let curve = sample_boundary(family, cfg.resolution)?;
    Ok(classify_with_curve(&curve, param, cfg.eps_boundary))
}
