use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::gamma_locus;
use crate::error::{domain, invalid, Error, Result};
use crate::special::FractionalOrderPair;

/// Distance within which `a` is reported as sitting on a bifurcation value.
pub const REGIME_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    PreA1,
    AtA1,
    Between,
    AtA2,
    PostA2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationReport {
    pub orders: FractionalOrderPair,
    /// `gamma(0) = gamma(pi)` here: the two unstable lobes touch.
    pub a1: f64,
    /// The stable region shrinks to the point `gamma(pi)` and vanishes.
    pub a2: f64,
}

impl BifurcationReport {
    pub fn regime_of(&self, a: f64) -> Regime {
        self.regime_with_tol(a, REGIME_TOL)
    }

    pub fn regime_with_tol(&self, a: f64, tol: f64) -> Regime {
        if (a - self.a1).abs() <= tol {
            Regime::AtA1
        } else if (a - self.a2).abs() <= tol {
            Regime::AtA2
        } else if a < self.a1 {
            Regime::PreA1
        } else if a < self.a2 {
            Regime::Between
        } else {
            Regime::PostA2
        }
    }
}

/// `a1 = 2^(alpha - beta)`, `a2 = a1 (alpha - 4) / (beta - 2)`.
pub fn bifurcation_values(orders: FractionalOrderPair) -> BifurcationReport {
    let FractionalOrderPair { alpha, beta } = orders;
    let a1 = 2f64.powf(alpha - beta);
    BifurcationReport { orders, a1, a2: a1 * (alpha - 4.0) / (beta - 2.0) }
}

/// Stable interval of a real parameter `b`, or `Empty` past `a2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RealInterval {
    Interval {
        left: f64,
        right: f64,
        /// Root of the imaginary part of the locus that produced `left`.
        theta_star: f64,
        /// Number of sign changes seen while bracketing.
        sign_changes: usize,
    },
    Empty,
}

impl RealInterval {
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            RealInterval::Interval { left, right, .. } => Some((left, right)),
            RealInterval::Empty => None,
        }
    }
}

const SCAN_SAMPLES: usize = 512;

/// Left end from the lowest real crossing of the locus on `(0, pi)`, right
/// end from `gamma(0) = 1` below `a1` and `gamma(pi)` from `a1` on.
pub fn real_interval(orders: FractionalOrderPair, a: f64) -> Result<RealInterval> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    let report = bifurcation_values(orders);
    if a >= report.a2 {
        return Ok(RealInterval::Empty);
    }
    let g = |t: f64| gamma_locus(orders, a, t);
    let thetas: Vec<f64> = (1..SCAN_SAMPLES).map(|j| PI * j as f64 / SCAN_SAMPLES as f64).collect();
    let mut best: Option<(f64, f64)> = None;
    let mut sign_changes = 0;
    for w in thetas.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (g(lo).im, g(hi).im);
        if flo == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        sign_changes += 1;
        let slo = flo.signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = g(mid).im;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = if g(lo).im.abs() <= g(hi).im.abs() { lo } else { hi };
        let re = g(root).re;
        if best.is_none_or(|(_, r)| re < r) {
            best = Some((root, re));
        }
    }
    let Some((theta_star, left)) = best else {
        return Err(Error::RootNotFound { a });
    };
    let FractionalOrderPair { alpha, beta } = orders;
    let right = if a < report.a1 { 1.0 } else { 1.0 + 2f64.powf(alpha) - a * 2f64.powf(beta) };
    Ok(RealInterval::Interval { left, right, theta_star, sign_changes })
}

/// `(1 - 2^alpha, 1)` for the first-order one-term model.
pub fn one_term_real_interval(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok((1.0 - 2f64.powf(alpha), 1.0))
}
