//! Time-domain simulation of the two-term and one-term models and
//! classification of the resulting trajectories.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::{binom_phi_table, FractionalOrderPair, WeightTable};

/// Right-hand side `f` of the two-term model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Forcing {
    /// `f(x) = b x`
    Linear(Complex64),
    /// `f(x) = mu x (1 - x)`
    Logistic(f64),
}

impl Forcing {
    #[inline]
    pub fn apply(&self, x: Complex64) -> Complex64 {
        match *self {
            Forcing::Linear(b) => b * x,
            Forcing::Logistic(mu) => mu * x * (1.0 - x),
        }
    }

    fn is_real(&self) -> bool {
        match *self {
            Forcing::Linear(b) => b.im == 0.0,
            Forcing::Logistic(_) => true,
        }
    }
}

/// `Delta^alpha x(t) + a Delta^beta x(t + alpha - beta - 1) = f(x(t + alpha - 2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTermSystem {
    pub orders: FractionalOrderPair,
    pub a: f64,
    pub forcing: Forcing,
}

impl TwoTermSystem {
    pub fn new(orders: FractionalOrderPair, a: f64, forcing: Forcing) -> Result<Self> {
        if !a.is_finite() {
            return Err(invalid(format!("a must be finite, got {a}")));
        }
        let finite = match forcing {
            Forcing::Linear(b) => b.re.is_finite() && b.im.is_finite(),
            Forcing::Logistic(mu) => mu.is_finite(),
        };
        if !finite {
            return Err(invalid("forcing parameter must be finite"));
        }
        Ok(Self { orders, a, forcing })
    }
}

/// `Delta^alpha x(t) = (c - 1) x(t + alpha - N)` with `N - 1 < alpha <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneTermSystem {
    pub alpha: f64,
    pub big_n: usize,
    pub c: Complex64,
}

impl OneTermSystem {
    pub fn new(alpha: f64, big_n: usize, c: Complex64) -> Result<Self> {
        if big_n < 1 {
            return Err(invalid("N must be at least 1"));
        }
        let n = big_n as f64;
        if !(alpha > n - 1.0 && alpha <= n) {
            return Err(invalid(format!("alpha must lie in ({}, {}], got {alpha}", n - 1.0, n)));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(invalid("c must be finite"));
        }
        Ok(Self { alpha, big_n, c })
    }
}

/// How the memory sum treats the two initial samples.
///
/// `Uniform` applies the same weight `W(n - s)` to every stored sample,
/// including `s = 0, 1`; this is the explicit recurrence as usually stated
/// and equals the Caputo sums started two steps early on a zero-extended
/// history. `Caputo` starts the fractional sums at `s = 0`, which is the form
/// that coincides with the one-term model when `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightScheme {
    #[default]
    Uniform,
    Caputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SimOptions {
    pub scheme: WeightScheme,
    /// Stop early once `|x(n)|` exceeds this. The trajectory is then shorter
    /// than `n_steps + 1`.
    pub halt_magnitude: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub initial: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub scalar_kind: ScalarKind,
    pub n_steps: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when the run stopped before `n_steps`.
    pub fn halted(&self) -> bool {
        self.values.len() < self.n_steps + 1
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|x| x.norm()).collect()
    }

    /// Real parts, if the run was real-valued.
    pub fn real_values(&self) -> Option<Vec<f64>> {
        match self.scalar_kind {
            ScalarKind::Real => Some(self.values.iter().map(|x| x.re).collect()),
            ScalarKind::Complex => None,
        }
    }
}

fn halt(opts: &SimOptions, x: Complex64) -> bool {
    match opts.halt_magnitude {
        Some(h) => !(x.norm() <= h),
        None => false,
    }
}

pub fn simulate_two_term(
    sys: &TwoTermSystem,
    x0: Complex64,
    x1: Complex64,
    n_steps: usize,
) -> Result<Trajectory> {
    simulate_two_term_with(sys, x0, x1, n_steps, &SimOptions::default())
}

/// Iterates
/// `x(n) = (alpha - a) x(n-1) + c2 x(n-2) + f(x(n-2)) + sum_{s=0}^{n-3} W(n-s) x(s)`
/// with `c2 = (alpha - alpha^2 + 2 a beta - 2) / 2`.
pub fn simulate_two_term_with(
    sys: &TwoTermSystem,
    x0: Complex64,
    x1: Complex64,
    n_steps: usize,
    opts: &SimOptions,
) -> Result<Trajectory> {
    if n_steps < 1 {
        return Err(invalid("n_steps must be at least 1"));
    }
    let FractionalOrderPair { alpha, beta } = sys.orders;
    let a = sys.a;
    let mut weights = WeightTable::new(sys.orders, a);
    weights.extend_to(n_steps);
    let w = weights.as_slice();
    let c1 = alpha - a;
    let c2 = (alpha - alpha * alpha + 2.0 * a * beta - 2.0) / 2.0;

    // boundary terms that the uniform weights add for s = 0, 1
    let caputo = match opts.scheme {
        WeightScheme::Uniform => None,
        WeightScheme::Caputo => Some((
            binom_phi_table(2.0 - alpha, n_steps + 1),
            binom_phi_table(1.0 - beta, n_steps + 1),
        )),
    };

    let mut x = Vec::with_capacity(n_steps + 1);
    x.push(x0);
    x.push(x1);
    for m in 2..=n_steps {
        let mut acc = c1 * x[m - 1] + c2 * x[m - 2] + sys.forcing.apply(x[m - 2]);
        let mut mem = Complex64::new(0.0, 0.0);
        for (xs, wk) in x[..m - 2].iter().zip(w[3..=m].iter().rev()) {
            mem += xs * wk;
        }
        acc += mem;
        if let Some((pa, pb)) = &caputo {
            acc -= pa[m - 1] * (2.0 * x0 - x1) - pa[m] * x0 - a * pb[m - 1] * x0;
        }
        x.push(acc);
        if halt(opts, acc) {
            break;
        }
    }

    let real = x0.im == 0.0 && x1.im == 0.0 && sys.forcing.is_real();
    Ok(Trajectory {
        initial: vec![x0, x1],
        values: x,
        scalar_kind: if real { ScalarKind::Real } else { ScalarKind::Complex },
        n_steps,
    })
}

/// Real-valued wrapper. Rejects complex forcing.
pub fn simulate_two_term_real(
    sys: &TwoTermSystem,
    x0: f64,
    x1: f64,
    n_steps: usize,
) -> Result<Vec<f64>> {
    if !sys.forcing.is_real() {
        return Err(invalid("real simulation requested with complex forcing"));
    }
    let t = simulate_two_term(sys, x0.into(), x1.into(), n_steps)?;
    Ok(t.values.iter().map(|v| v.re).collect())
}

pub fn simulate_one_term(
    sys: &OneTermSystem,
    initial: &[Complex64],
    n_steps: usize,
) -> Result<Trajectory> {
    simulate_one_term_with(sys, initial, n_steps, &SimOptions::default())
}

/// Iterates the one-term model in difference form:
/// `D(n) = (c - 1) x(n) - sum_{s<n} phi_{N-alpha}(n-s) D(s)` with `D = Delta^N x`,
/// then recovers `x(n+N)` from `D(n)` and `x(n..n+N-1)`.
pub fn simulate_one_term_with(
    sys: &OneTermSystem,
    initial: &[Complex64],
    n_steps: usize,
    opts: &SimOptions,
) -> Result<Trajectory> {
    let big_n = sys.big_n;
    if initial.len() != big_n {
        return Err(Error::Dimension { expected: big_n, got: initial.len() });
    }
    if n_steps < 1 || n_steps + 1 < big_n {
        return Err(invalid(format!("n_steps must be at least max(1, N - 1), got {n_steps}")));
    }
    let phi = binom_phi_table(big_n as f64 - sys.alpha, n_steps + 1);
    // C(N, k) (-1)^(N - k)
    let mut coef = vec![0.0; big_n + 1];
    let mut binom = 1.0;
    for (k, c) in coef.iter_mut().enumerate() {
        *c = if (big_n - k).is_multiple_of(2) { binom } else { -binom };
        binom = binom * (big_n - k) as f64 / (k + 1) as f64;
    }
    let cm1 = sys.c - 1.0;

    let mut x: Vec<Complex64> = initial.to_vec();
    x.reserve(n_steps + 1 - big_n);
    let mut d: Vec<Complex64> = Vec::with_capacity(n_steps + 1);
    'outer: for m in 0..=(n_steps - (big_n - 1)) {
        if m + big_n > n_steps {
            break;
        }
        let mut dm = cm1 * x[m];
        for (ds, p) in d.iter().zip(phi[1..=m].iter().rev()) {
            dm -= ds * p;
        }
        d.push(dm);
        let mut next = dm;
        for k in 0..big_n {
            next -= coef[k] * x[m + k];
        }
        x.push(next);
        if halt(opts, next) {
            break 'outer;
        }
    }

    let real = initial.iter().all(|v| v.im == 0.0) && sys.c.im == 0.0;
    Ok(Trajectory {
        initial: initial.to_vec(),
        values: x,
        scalar_kind: if real { ScalarKind::Real } else { ScalarKind::Complex },
        n_steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyThresholds {
    pub tol_converge: f64,
    pub bound_escape: f64,
    pub tail_fraction: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self { tol_converge: 1e-4, bound_escape: 1e6, tail_fraction: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VerdictKind {
    ConvergedToZero,
    ConvergedTo(Complex64),
    /// Bounded, not yet below tolerance, but the tail envelope is still
    /// shrinking. Fractional memory makes stable decay algebraic, so this is
    /// the usual signature of a stable run over a finite horizon.
    Decaying,
    Bounded,
    Unbounded,
}

impl VerdictKind {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictKind::ConvergedToZero => "ConvergedToZero",
            VerdictKind::ConvergedTo(_) => "ConvergedTo",
            VerdictKind::Decaying => "Decaying",
            VerdictKind::Bounded => "Bounded",
            VerdictKind::Unbounded => "Unbounded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryVerdict {
    pub kind: VerdictKind,
    pub n_used: usize,
    pub final_magnitude: f64,
}

impl TrajectoryVerdict {
    /// Verdicts consistent with asymptotic stability of the origin.
    pub fn goes_to_zero(&self) -> bool {
        matches!(self.kind, VerdictKind::ConvergedToZero | VerdictKind::Decaying)
    }
}

/// Maxima of four equal windows covering the last `2 * tail_fraction` of the
/// sequence must strictly decrease, with an overall drop of at least 1%.
pub fn envelope_decaying(mags: &[f64], tail_fraction: f64) -> bool {
    let n = mags.len() as f64;
    let start = 1.0 - 2.0 * tail_fraction;
    let step = tail_fraction / 2.0;
    let mut w = [0.0f64; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let lo = (n * (start + step * i as f64)) as usize;
        let hi = ((n * (start + step * (i + 1) as f64)) as usize).min(mags.len());
        if hi <= lo {
            return false;
        }
        *wi = mags[lo..hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    }
    w.windows(2).all(|p| p[1] < p[0]) && w[3] < 0.99 * w[0]
}

pub fn classify_trajectory(
    traj: &Trajectory,
    thresholds: &ClassifyThresholds,
) -> Result<TrajectoryVerdict> {
    classify_values(&traj.values, thresholds)
}

/// Unbounded, then ConvergedToZero, Decaying, ConvergedTo(v), Bounded, in
/// that order of precedence.
pub fn classify_values(values: &[Complex64], th: &ClassifyThresholds) -> Result<TrajectoryVerdict> {
    if !(th.tol_converge > 0.0 && th.bound_escape > 0.0) {
        return Err(invalid("tolerances must be positive"));
    }
    if !(th.tail_fraction > 0.0 && th.tail_fraction <= 0.5) {
        return Err(invalid(format!("tail_fraction must lie in (0, 0.5], got {}", th.tail_fraction)));
    }
    if let Some(i) = values.iter().position(|x| !(x.norm() <= th.bound_escape)) {
        return Ok(TrajectoryVerdict {
            kind: VerdictKind::Unbounded,
            n_used: i,
            final_magnitude: values[i].norm(),
        });
    }
    if values.len() < 20 {
        return Err(invalid(format!("need at least 20 samples, got {}", values.len())));
    }
    let n = values.len();
    let mags: Vec<f64> = values.iter().map(|x| x.norm()).collect();
    let tail_start = (n as f64 * (1.0 - th.tail_fraction)) as usize;
    let tail = &values[tail_start..];
    let last = values[n - 1];
    let verdict = |kind| Ok(TrajectoryVerdict { kind, n_used: n, final_magnitude: last.norm() });

    if mags[tail_start..].iter().all(|&m| m < th.tol_converge) {
        return verdict(VerdictKind::ConvergedToZero);
    }
    if envelope_decaying(&mags, th.tail_fraction) {
        return verdict(VerdictKind::Decaying);
    }
    if last.norm() >= th.tol_converge && tail.iter().all(|x| (x - last).norm() < th.tol_converge) {
        return verdict(VerdictKind::ConvergedTo(last));
    }
    verdict(VerdictKind::Bounded)
}
