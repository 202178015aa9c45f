use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use fracstab::dynamics::{simulate_one_term, simulate_two_term};
use fracstab::logistic::{estimate_a_star, stable_mu_interval};
use fracstab::stability::{bifurcation_values, classify_point, real_interval};
use fracstab::{
    classify_trajectory, AStarConfig, ClassifyThresholds, Complex64, Equilibrium, Family, Forcing,
    FractionalOrderPair, OneTermSystem, StabilityConfig, TwoTermSystem, VerdictClass, VerdictKind,
};
use rayon::prelude::*;

use crate::commands::create;
use crate::config::Settings;
use crate::reference::*;

struct Case {
    name: String,
    expected: String,
    got: String,
    pass: bool,
}

fn case(name: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, pass: bool) -> Case {
    Case { name: name.into(), expected: expected.into(), got: got.into(), pass }
}

fn verdict(stable: bool) -> &'static str {
    if stable {
        "Stable"
    } else {
        "Unstable"
    }
}

fn bifurcation_cases() -> Result<Vec<Case>> {
    let mut out = Vec::new();
    for (al, be, a1, a2) in BIFURCATIONS {
        let r = bifurcation_values(FractionalOrderPair::new(al, be)?);
        let ok = (r.a1 - a1).abs() <= 1e-5 && (r.a2 - a2).abs() <= 1e-5;
        out.push(case(format!("bifurcations ({al}, {be})"), format!("{a1} {a2}"), format!("{:.6} {:.6}", r.a1, r.a2), ok));
    }
    Ok(out)
}

fn interval_cases() -> Result<Vec<Case>> {
    let mut out = Vec::new();
    for (al, be, a, l, r) in INTERVALS {
        let got = real_interval(FractionalOrderPair::new(al, be)?, a)?.bounds();
        let (expected, ok) = match got {
            _ if l.is_nan() => ("empty".to_string(), got.is_none()),
            Some((gl, gr)) => (format!("({l}, {r})"), (gl - l).abs() <= 1e-5 && (gr - r).abs() <= 1e-6),
            None => (format!("({l}, {r})"), false),
        };
        let got = got.map(|(gl, gr)| format!("({gl:.6}, {gr:.6})")).unwrap_or_else(|| "empty".into());
        out.push(case(format!("interval ({al}, {be}, a={a})"), expected, got, ok));
    }
    let o = FractionalOrderPair::new(1.2, 0.8)?;
    for (a, nontrivial, l, r) in LOGISTIC_INTERVALS {
        let which = if nontrivial { Equilibrium::NonTrivial } else { Equilibrium::Trivial };
        let got = stable_mu_interval(o, a, which)?;
        let ok = got.is_some_and(|(gl, gr)| (gl - l).abs() <= 1e-5 && (gr - r).abs() <= 1e-5);
        let got = got.map(|(gl, gr)| format!("({gl:.6}, {gr:.6})")).unwrap_or_else(|| "empty".into());
        let name = format!("logistic mu-interval a={a} {}", if nontrivial { "x2*" } else { "x1*" });
        out.push(case(name, format!("({l}, {r})"), got, ok));
    }
    Ok(out)
}

fn linear_cases(th: &ClassifyThresholds) -> Result<Vec<Case>> {
    let o = FractionalOrderPair::new(1.9, 0.2)?;
    LINEAR_CASES
        .par_iter()
        .map(|&(a, re, im, stable)| {
            let b = Complex64::new(re, im);
            let v = classify_point(&Family::TwoTerm { orders: o, a }, b, &StabilityConfig::default())?;
            let sys = TwoTermSystem::new(o, a, Forcing::Linear(b))?;
            let t = simulate_two_term(&sys, Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0), 500)?;
            let sim = classify_trajectory(&t, th)?;
            Ok(vec![
                case(
                    format!("linear winding a={a} b={b}"),
                    verdict(stable),
                    format!("{} (winding {})", v.kind.label(), v.winding),
                    (v.kind == VerdictClass::Stable) == stable,
                ),
                case(
                    format!("linear simulation a={a} b={b}"),
                    if stable { "ConvergedToZero|Decaying" } else { "not decaying" },
                    sim.kind.label(),
                    sim.goes_to_zero() == stable,
                ),
            ])
        })
        .collect::<fracstab::Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
        .map_err(Into::into)
}

fn one_term_cases(th: &ClassifyThresholds) -> Result<Vec<Case>> {
    ONE_TERM
        .par_iter()
        .map(|&(alpha, n, (re, im), stable)| {
            let c = Complex64::new(re, im);
            let v = classify_point(&Family::one_term(alpha, n)?, c, &StabilityConfig::default())?;
            let init: Vec<Complex64> = match n {
                1 => vec![Complex64::new(0.4, 0.0)],
                3 => [0.01, 0.02, 0.03].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                _ => (1..=n).map(|k| Complex64::new(0.1 * k as f64, 0.0)).collect(),
            };
            let t = simulate_one_term(&OneTermSystem::new(alpha, n, c)?, &init, 500)?;
            let sim = classify_trajectory(&t, th)?;
            let sim_ok = if stable { sim.goes_to_zero() } else { sim.kind == VerdictKind::Unbounded };
            Ok(vec![
                case(
                    format!("one-term winding alpha={alpha} N={n} c={c}"),
                    verdict(stable),
                    format!("{} (winding {})", v.kind.label(), v.winding),
                    (v.kind == VerdictClass::Stable) == stable,
                ),
                case(
                    format!("one-term simulation alpha={alpha} N={n} c={c}"),
                    if stable { "ConvergedToZero|Decaying" } else { "Unbounded" },
                    sim.kind.label(),
                    sim_ok,
                ),
            ])
        })
        .collect::<fracstab::Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
        .map_err(Into::into)
}

fn a_star_cases(steps: Option<usize>) -> Result<Vec<Case>> {
    let cfg = AStarConfig { n_steps: steps.unwrap_or(2000), ..Default::default() };
    A_STAR_BOUNDS
        .par_iter()
        .map(|&(al, be, want)| {
            let est = estimate_a_star(FractionalOrderPair::new(al, be)?, &cfg)?;
            let ok = est.a_star.is_some_and(|a| (a - want).abs() <= 0.1 + 1e-9);
            let got = est.a_star.map(|a| a.to_string()).unwrap_or_else(|| "none".into());
            Ok(case(format!("a* ({al}, {be})"), format!("{want} +- 0.1"), got, ok))
        })
        .collect::<fracstab::Result<Vec<_>>>()
        .map_err(Into::into)
}

/// Runs every reference case, writes `report.csv` into `dir` and returns
/// whether all of them passed.
pub fn run(s: &Settings, dir: &Path) -> Result<bool> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let th = s.thresholds;
    let cases: Vec<Case> = s.pool()?.install(|| -> Result<Vec<Case>> {
        let mut all = bifurcation_cases()?;
        all.extend(interval_cases()?);
        all.extend(linear_cases(&th)?);
        all.extend(a_star_cases(s.steps)?);
        all.extend(one_term_cases(&th)?);
        Ok(all)
    })?;

    let path = dir.join("report.csv");
    let mut w = create(&path)?;
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        for (k, v) in s.meta("reproduce") {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "case,expected,got,pass")?;
        for c in &cases {
            writeln!(w, "\"{}\",\"{}\",\"{}\",{}", c.name, c.expected, c.got, c.pass)?;
        }
        w.flush()
    };
    write(&mut w).with_context(|| format!("writing {}", path.display()))?;

    let passed = cases.iter().filter(|c| c.pass).count();
    for c in &cases {
        println!("{} {}: expected {}, got {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.expected, c.got);
    }
    println!("{passed}/{} cases passed; report in {}", cases.len(), path.display());
    Ok(passed == cases.len())
}
