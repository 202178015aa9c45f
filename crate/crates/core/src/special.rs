//! Gamma-function ratios, the binomial family `phi_mu(n)` and the memory
//! weights of the two-term recurrence.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, invalid, Result};

/// Orders `(alpha, beta)` of the two-term model, `0 < beta <= 1 < alpha <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalOrderPair {
    pub alpha: f64,
    pub beta: f64,
}

impl FractionalOrderPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(invalid(format!("alpha must lie in (1, 2], got {alpha}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(invalid(format!("beta must lie in (0, 1], got {beta}")));
        }
        Ok(Self { alpha, beta })
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function on the real line. Returns `NaN` at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x == x.floor() && x <= 171.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Reciprocal gamma, taken as 0 at the poles `0, -1, -2, ...`.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

// Stirling remainder ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2], valid for x >= 10.
fn stirling_correction(x: f64) -> f64 {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let r = 1.0 / x;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

const SHIFT_TO: f64 = 10.0;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ln_gamma needs a positive argument, got {x}")));
    }
    let mut x = x;
    let mut prod = 1.0;
    while x < SHIFT_TO {
        prod *= x;
        x += 1.0;
    }
    Ok((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_correction(x) - prod.ln())
}

/// `Gamma(x) / Gamma(y)` for positive arguments.
///
/// Both arguments are shifted above 10 by explicit products, then the log
/// ratio is taken from the Stirling series written as a difference, so the
/// large leading terms cancel analytically instead of numerically.
pub fn gamma_ratio(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(domain(format!("gamma_ratio needs positive arguments, got ({x}, {y})")));
    }
    Ok(shifted_ratio(y, x - y))
}

/// `Gamma(y + d) / Gamma(y)` with the offset `d` passed separately, so that
/// rounding `y + d` does not leak into the result for large `y`.
pub fn gamma_ratio_offset(y: f64, d: f64) -> Result<f64> {
    if !(y > 0.0 && y + d > 0.0) || !y.is_finite() || !d.is_finite() {
        return Err(domain(format!("gamma_ratio_offset needs y > 0 and y + d > 0, got ({y}, {d})")));
    }
    Ok(shifted_ratio(y, d))
}

fn shifted_ratio(y: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 1.0;
    }
    let (mut y, mut d) = (y, d);
    let mut x = y + d;
    let mut scale = 1.0;
    while x < SHIFT_TO {
        scale /= x;
        x += 1.0;
        d += 1.0;
    }
    while y < SHIFT_TO {
        scale *= y;
        y += 1.0;
        d -= 1.0;
    }
    let log_ratio = (y - 0.5) * (d / y).ln_1p() + d * (x.ln() - 1.0) + stirling_correction(x)
        - stirling_correction(y);
    scale * log_ratio.exp()
}

/// Direct evaluation of `phi_mu(n) = Gamma(n + mu) / (Gamma(mu) Gamma(n + 1))`,
/// zero for `n < 0`.
pub fn binom_phi(mu: f64, n: i64) -> Result<f64> {
    if n < 0 {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(mu) {
        return Err(domain(format!("binom_phi: Gamma({mu}) is a pole")));
    }
    let nf = n as f64;
    if nf + mu > 0.0 {
        Ok(gamma_ratio_offset(nf + 1.0, mu - 1.0)? / gamma(mu))
    } else {
        Ok(gamma(nf + mu) / (gamma(mu) * gamma(nf + 1.0)))
    }
}

/// Sequential `phi_mu(0), phi_mu(1), ...` via `phi(n) = phi(n-1) (n + mu - 1) / n`.
///
/// Defined for every real `mu`; `phi_0` is the Kronecker delta.
#[derive(Debug, Clone)]
pub struct BinomPhi {
    mu: f64,
    n: u64,
    value: f64,
}

impl BinomPhi {
    pub fn new(mu: f64) -> Self {
        Self { mu, n: 0, value: 1.0 }
    }
}

impl Iterator for BinomPhi {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.value;
        self.n += 1;
        let n = self.n as f64;
        self.value *= (n + self.mu - 1.0) / n;
        Some(out)
    }
}

/// First `len` values of `phi_mu`.
pub fn binom_phi_table(mu: f64, len: usize) -> Vec<f64> {
    BinomPhi::new(mu).take(len).collect()
}

/// Memory weight `W(k)` of the two-term recurrence, from gamma ratios.
pub fn two_term_weight(orders: FractionalOrderPair, a: f64, k: i64) -> Result<f64> {
    if k < 3 {
        return Err(domain(format!("two_term_weight needs k >= 3, got {k}")));
    }
    let FractionalOrderPair { alpha, beta } = orders;
    let k = k as f64;
    let ra = rgamma(2.0 - alpha);
    let mut w = 0.0;
    if ra != 0.0 {
        w += ra
            * (-gamma_ratio_offset(k - 1.0, 1.0 - alpha)? + 2.0 * gamma_ratio_offset(k, 1.0 - alpha)?
                - gamma_ratio_offset(k + 1.0, 1.0 - alpha)?);
    }
    let rb = rgamma(1.0 - beta);
    if rb != 0.0 && a != 0.0 {
        w -= a * rb * (-gamma_ratio_offset(k - 1.0, -beta)? + gamma_ratio_offset(k, -beta)?);
    }
    Ok(w)
}

/// Incrementally grown table of memory weights.
///
/// Uses `W(k) = -phi_{-alpha}(k) - a phi_{-beta}(k - 1)`, which is the gamma
/// form rewritten through `phi_mu(k) - phi_mu(k - 1) = phi_{mu - 1}(k)`. Each
/// new entry costs one multiply per family and no cancellation occurs.
#[derive(Debug, Clone)]
pub struct WeightTable {
    a: f64,
    phi_alpha: BinomPhi,
    phi_beta: BinomPhi,
    prev_beta: f64,
    weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(orders: FractionalOrderPair, a: f64) -> Self {
        let mut table = Self {
            a,
            phi_alpha: BinomPhi::new(-orders.alpha),
            phi_beta: BinomPhi::new(-orders.beta),
            prev_beta: 0.0,
            weights: Vec::new(),
        };
        table.extend_to(3);
        table
    }

    /// Make sure `W(0..=k_max)` is available.
    pub fn extend_to(&mut self, k_max: usize) {
        while self.weights.len() <= k_max {
            let k = self.weights.len();
            let pa = self.phi_alpha.next().unwrap_or(0.0);
            let pb = self.phi_beta.next().unwrap_or(0.0);
            let w = if k < 3 { 0.0 } else { -pa - self.a * self.prev_beta };
            self.prev_beta = pb;
            self.weights.push(w);
        }
    }

    /// `W(k)`; zero for `k < 3` where the recurrence has no memory term.
    pub fn get(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_ratio_small_cases() {
        assert!(rel(gamma_ratio(5.0, 3.0).unwrap(), 12.0) < 1e-14);
        assert!(rel(gamma_ratio(3.5, 1.5).unwrap(), 3.75) < 1e-14);
        assert_eq!(gamma_ratio(7.25, 7.25).unwrap(), 1.0);
        assert!(gamma_ratio(0.0, 1.0).is_err());
        assert!(gamma_ratio(1.0, -2.0).is_err());
    }

    #[test]
    fn gamma_ratio_large_arguments() {
        // 30-digit references
        assert!(rel(gamma_ratio(10000.5, 10000.0).unwrap(), 99.998_750_007_812_988_275) < 1e-14);
        // reference evaluated at the binary value of 1e6 - 0.3
        assert!(rel(gamma_ratio(1e6, 1e6 - 0.3).unwrap(), 63.095_722_184_940_700_379) < 1e-12);
    }

    #[test]
    fn gamma_ratio_shift_identity() {
        for x in [0.5, 1.5, 10.0, 100.0, 1e4] {
            assert!(rel(gamma_ratio(x + 1.0, x).unwrap(), x) <= 1e-13, "x = {x}");
        }
    }

    #[test]
    fn gamma_matches_factorials_and_reflection() {
        assert!(rel(gamma(5.0), 24.0) < 1e-14);
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-14);
        assert!(gamma(-2.0).is_nan());
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn binom_phi_examples() {
        assert_eq!(binom_phi(0.5, 0).unwrap(), 1.0);
        assert!(rel(binom_phi(0.5, 1).unwrap(), 0.5) < 1e-14);
        assert_eq!(binom_phi(0.3, -3).unwrap(), 0.0);
        assert_eq!(binom_phi(-2.0, -1).unwrap(), 0.0);
        assert_eq!(binom_phi(0.0, 0).unwrap(), 1.0);
        assert!(binom_phi(0.0, 1).is_err());
        assert!(binom_phi(-1.0, 4).is_err());
        assert!(rel(binom_phi(0.55, 1000).unwrap(), 0.027_635_765_890_082_229_554) < 1e-13);
    }

    #[test]
    fn binom_phi_negative_order() {
        // phi_{-1.9}(3) = (-1.9)(-0.9)(0.1)/6
        assert!(rel(binom_phi(-1.9, 3).unwrap(), 0.0285) < 1e-13);
        assert!(rel(binom_phi(-0.2, 2).unwrap(), -0.08) < 1e-13);
    }

    #[test]
    fn iterator_kronecker_at_zero_order() {
        let v = binom_phi_table(0.0, 5);
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn binom_phi_unit_order_is_one() {
        for n in 0..200 {
            assert_eq!(binom_phi(1.0, n).unwrap(), 1.0);
        }
    }

    #[test]
    fn integer_order_weights_vanish() {
        let o = FractionalOrderPair::new(2.0, 1.0).unwrap();
        for k in 3..50 {
            assert_eq!(two_term_weight(o, 1.7, k).unwrap(), 0.0);
        }
        let t = WeightTable::new(o, 1.7);
        let mut t = t;
        t.extend_to(50);
        assert!(t.as_slice().iter().all(|&w| w == 0.0));
    }

    #[test]
    fn weight_golden_values() {
        // 30-digit references from an arbitrary-precision evaluation
        let o = FractionalOrderPair::new(1.9, 0.2).unwrap();
        let cases = [
            (3, 0.1315),
            (4, 0.088_162_5),
            (10, 0.024_633_103_883_546_875_238),
            (100, 0.001_385_782_128_837_609_555),
            (1000, 0.000_086_415_788_804_436_602_51),
        ];
        let mut table = WeightTable::new(o, 2.0);
        table.extend_to(1000);
        for (k, want) in cases {
            assert!(rel(table.get(k), want) < 1e-12, "table k = {k}");
            let direct = two_term_weight(o, 2.0, k as i64).unwrap();
            assert!(rel(direct, want) < 1e-8, "direct k = {k}: {direct}");
        }
        let o = FractionalOrderPair::new(1.2, 0.8).unwrap();
        assert!(rel(two_term_weight(o, 0.5, 3).unwrap(), 0.008) < 1e-12);
        let o = FractionalOrderPair::new(1.5, 0.5).unwrap();
        let w = two_term_weight(o, 1.0, 50).unwrap();
        assert!(rel(w, 0.000_803_931_690_779_583_449_48) < 1e-10);
    }

    #[test]
    fn weight_k_below_three_rejected() {
        let o = FractionalOrderPair::new(1.5, 0.5).unwrap();
        assert!(two_term_weight(o, 1.0, 2).is_err());
    }

    #[test]
    fn order_pair_validation() {
        assert!(FractionalOrderPair::new(1.0, 0.5).is_err());
        assert!(FractionalOrderPair::new(2.1, 0.5).is_err());
        assert!(FractionalOrderPair::new(1.5, 0.0).is_err());
        assert!(FractionalOrderPair::new(1.5, f64::NAN).is_err());
        assert!(FractionalOrderPair::new(2.0, 1.0).is_ok());
    }
}
