//! Equilibria of the fractional logistic map `f(x) = mu x (1 - x)` and the
//! empirical bound `a*` below which linearized predictions hold.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{envelope_decaying, simulate_two_term_with, Forcing, SimOptions, TwoTermSystem};
use crate::error::{domain, invalid, Result};
use crate::special::FractionalOrderPair;
use crate::stability::{
    bifurcation_values, classify_point, real_interval, Family, StabilityConfig, StabilityVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticAnalysis {
    pub mu: f64,
    pub x1_star: f64,
    pub x2_star: f64,
    /// `f'(x1*) = mu`
    pub b1: f64,
    /// `f'(x2*) = 2 - mu`
    pub b2: f64,
}

pub fn equilibria(mu: f64) -> Result<LogisticAnalysis> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(domain(format!("nontrivial equilibrium undefined for mu = {mu}")));
    }
    Ok(LogisticAnalysis { mu, x1_star: 0.0, x2_star: 1.0 - 1.0 / mu, b1: mu, b2: 2.0 - mu })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equilibrium {
    /// `x1* = 0`
    Trivial,
    /// `x2* = 1 - 1/mu`
    NonTrivial,
}

/// Linearized verdict for an equilibrium: `b = mu` for `x1*`, `b = 2 - mu` for `x2*`.
pub fn classify_equilibrium(
    orders: FractionalOrderPair,
    a: f64,
    mu: f64,
    which: Equilibrium,
    cfg: &StabilityConfig,
) -> Result<StabilityVerdict> {
    if !(a > 0.0) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    let b = match which {
        Equilibrium::Trivial => mu,
        Equilibrium::NonTrivial => 2.0 - mu,
    };
    let fam = Family::TwoTerm { orders, a };
    classify_point(&fam, Complex64::new(b, 0.0), cfg)
}

/// Linearly stable `mu` range of an equilibrium, `None` past `a2`.
pub fn stable_mu_interval(
    orders: FractionalOrderPair,
    a: f64,
    which: Equilibrium,
) -> Result<Option<(f64, f64)>> {
    let Some((l, r)) = real_interval(orders, a)?.bounds() else {
        return Ok(None);
    };
    Ok(Some(match which {
        Equilibrium::Trivial => (l, r),
        Equilibrium::NonTrivial => (2.0 - r, 2.0 - l),
    }))
}

/// Whether `values` settle on `target`: finite throughout and either the tail
/// stays within `tol` of it or the distance envelope is still shrinking.
pub fn converges_to(values: &[Complex64], target: f64, tol: f64, tail_fraction: f64) -> bool {
    if values.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
        return false;
    }
    let err: Vec<f64> = values.iter().map(|x| (x - target).norm()).collect();
    let start = (err.len() as f64 * (1.0 - tail_fraction)) as usize;
    err[start..].iter().all(|&e| e < tol) || envelope_decaying(&err, tail_fraction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ProbeStrategy {
    /// Pass when the midpoint probe converges and neither probe just outside
    /// the interval does. Probes just inside the ends are diagnostics only.
    #[default]
    MidpointAndOutside,
    /// Pass only when every inside probe converges and no outside probe does.
    AllProbes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AStarConfig {
    pub a_start: f64,
    pub a_step: f64,
    /// Last `a` to test; defaults to the largest grid value below `a2`.
    pub a_stop: Option<f64>,
    pub n_steps: usize,
    /// Initial conditions `x(0) = x2* + offset`, `x(1) = x2* - offset`.
    pub init_offset: f64,
    /// Distance of the end probes from the interval ends.
    pub probe_offset: f64,
    pub tol: f64,
    pub tail_fraction: f64,
    pub strategy: ProbeStrategy,
}

impl Default for AStarConfig {
    fn default() -> Self {
        Self {
            a_start: 0.1,
            a_step: 0.1,
            a_stop: None,
            n_steps: 2000,
            init_offset: 0.1,
            probe_offset: 0.1,
            tol: 1e-3,
            tail_fraction: 0.2,
            strategy: ProbeStrategy::MidpointAndOutside,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeRole {
    Midpoint,
    InsideLeft,
    InsideRight,
    OutsideLeft,
    OutsideRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub role: ProbeRole,
    pub mu: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AStarRow {
    pub a: f64,
    pub mu_interval: (f64, f64),
    pub probes: Vec<Probe>,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AStarEstimate {
    pub orders: FractionalOrderPair,
    /// Largest passing `a`, to grid resolution.
    pub a_star: Option<f64>,
    pub grid_step: f64,
    pub mu_grid: String,
    pub rows: Vec<AStarRow>,
}

/// Simulates the logistic map from `x2* +- offset` and checks convergence to `x2*`.
pub fn probe_converges(
    orders: FractionalOrderPair,
    a: f64,
    mu: f64,
    cfg: &AStarConfig,
) -> Result<bool> {
    let eq = equilibria(mu)?;
    let sys = TwoTermSystem::new(orders, a, Forcing::Logistic(mu))?;
    let x0 = Complex64::new(eq.x2_star + cfg.init_offset, 0.0);
    let x1 = Complex64::new(eq.x2_star - cfg.init_offset, 0.0);
    let opts = SimOptions { halt_magnitude: Some(1e6), ..Default::default() };
    let t = simulate_two_term_with(&sys, x0, x1, cfg.n_steps, &opts)?;
    if t.halted() {
        return Ok(false);
    }
    Ok(converges_to(&t.values, eq.x2_star, cfg.tol, cfg.tail_fraction))
}

fn scan_row(orders: FractionalOrderPair, a: f64, cfg: &AStarConfig) -> Result<Option<AStarRow>> {
    let Some((ml, mr)) = stable_mu_interval(orders, a, Equilibrium::NonTrivial)? else {
        return Ok(None);
    };
    let d = cfg.probe_offset;
    let mut specs = vec![(ProbeRole::Midpoint, 0.5 * (ml + mr))];
    if ml + d < mr {
        specs.push((ProbeRole::InsideLeft, ml + d));
    }
    if mr - d > ml {
        specs.push((ProbeRole::InsideRight, mr - d));
    }
    specs.push((ProbeRole::OutsideLeft, ml - d));
    specs.push((ProbeRole::OutsideRight, mr + d));

    let mut probes = Vec::with_capacity(specs.len());
    for (role, mu) in specs {
        // mu = 0 has no nontrivial equilibrium; nothing can converge there
        let converged = mu != 0.0 && probe_converges(orders, a, mu, cfg)?;
        probes.push(Probe { role, mu, converged });
    }
    let outside_ok = probes
        .iter()
        .filter(|p| matches!(p.role, ProbeRole::OutsideLeft | ProbeRole::OutsideRight))
        .all(|p| !p.converged);
    let inside_ok = match cfg.strategy {
        ProbeStrategy::MidpointAndOutside => probes[0].converged,
        ProbeStrategy::AllProbes => probes
            .iter()
            .filter(|p| matches!(p.role, ProbeRole::Midpoint | ProbeRole::InsideLeft | ProbeRole::InsideRight))
            .all(|p| p.converged),
    };
    Ok(Some(AStarRow { a, mu_interval: (ml, mr), probes, passes: inside_ok && outside_ok }))
}

/// Scans `a` upward and reports the largest value at which simulation agrees
/// with the linearized stable `mu` range of `x2*`. Rows run in parallel.
pub fn estimate_a_star(orders: FractionalOrderPair, cfg: &AStarConfig) -> Result<AStarEstimate> {
    if !(cfg.a_step > 0.0 && cfg.a_step <= 0.1) {
        return Err(invalid(format!("a_step must lie in (0, 0.1], got {}", cfg.a_step)));
    }
    if !(cfg.a_start > 0.0) || cfg.n_steps < 20 {
        return Err(invalid("a_start must be positive and n_steps at least 20"));
    }
    let a2 = bifurcation_values(orders).a2;
    let stop = cfg.a_stop.unwrap_or(a2);
    let grid: Vec<f64> = (0..)
        .map(|k| snap(cfg.a_start + k as f64 * cfg.a_step, cfg.a_step))
        .take_while(|&a| a <= stop && a < a2)
        .collect();
    let rows: Vec<Option<AStarRow>> =
        grid.par_iter().map(|&a| scan_row(orders, a, cfg)).collect::<Result<_>>()?;
    let rows: Vec<AStarRow> = rows.into_iter().flatten().collect();
    let a_star = rows.iter().filter(|r| r.passes).map(|r| r.a).fold(None, |m: Option<f64>, a| {
        Some(m.map_or(a, |m| m.max(a)))
    });
    Ok(AStarEstimate {
        orders,
        a_star,
        grid_step: cfg.a_step,
        mu_grid: format!(
            "per a: midpoint of the x2* interval, ends -+{d}, outside ends +-{d}",
            d = cfg.probe_offset
        ),
        rows,
    })
}

// Removes accumulated float drift so grid values print cleanly.
fn snap(a: f64, step: f64) -> f64 {
    let digits = (-step.log10()).ceil().max(0.0) as i32 + 3;
    let scale = 10f64.powi(digits);
    (a * scale).round() / scale
}
