use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use fracstab::dynamics::{simulate_one_term_with, simulate_two_term_with};
use fracstab::export::{boundary_svg, write_boundary_csv, write_trajectory_csv, SvgFill};
use fracstab::logistic::{
    classify_equilibrium, converges_to, equilibria, estimate_a_star, stable_mu_interval, ProbeStrategy,
};
use fracstab::stability::regions::{winding_grid, GridSpec};
use fracstab::stability::{
    bifurcation_values, classify_with_curve, one_term_real_interval, real_interval, sample_boundary,
};
use fracstab::{
    classify_trajectory, AStarConfig, Complex64, Equilibrium, Family, Forcing, OneTermSystem, RealInterval,
    Trajectory, TwoTermSystem,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{invalid, Format, Settings};
use crate::reference::A_STAR_BOUNDS;

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Runs `write` against `--out` or stdout.
fn emit(s: &Settings, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match &s.out {
        Some(p) => {
            let mut w = create(p)?;
            write(&mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut w = io::stdout().lock();
            write(&mut w).context("writing to stdout")
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn params_json(meta: &[(String, String)]) -> Value {
    let mut m = Map::new();
    for (k, v) in meta {
        let val = match (v.parse::<i64>(), v.parse::<f64>()) {
            (Ok(i), _) => Value::from(i),
            (_, Ok(x)) => Value::from(x),
            _ => Value::from(v.clone()),
        };
        m.insert(k.clone(), val);
    }
    Value::Object(m)
}

fn print_json(v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    writeln!(io::stdout().lock(), "{text}").context("writing to stdout")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn boundary(s: &Settings) -> Result<()> {
    let fam = s.family()?;
    let curve = sample_boundary(&fam, s.resolution)?;
    let meta = s.meta("boundary");
    let svg = || {
        let grid;
        let windings;
        let fill = if s.fill {
            grid = GridSpec::around(&curve, 400, 400, 0.05);
            windings = winding_grid(&curve, &grid);
            Some(SvgFill { grid: &grid, windings: &windings, target: fam.stable_winding() })
        } else {
            None
        };
        boundary_svg(&curve, fill, &meta)
    };
    match s.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(s, |w| write_boundary_csv(w, &curve, &meta))?,
        Format::Svg => {
            let text = svg();
            emit(s, |w| w.write_all(text.as_bytes()))?
        }
        Format::Json => {
            let pts: Vec<Value> = curve
                .thetas
                .iter()
                .zip(&curve.points)
                .map(|(t, p)| json!([t, p.re, p.im]))
                .collect();
            let v = json!({ "params": params_json(&meta), "points": pts });
            emit(s, |w| writeln!(w, "{v}"))?
        }
    }
    if let Some(path) = &s.svg {
        write_text(path, &svg())?;
    }
    Ok(())
}

pub fn classify(s: &Settings) -> Result<()> {
    let fam = s.family()?;
    let param = match fam {
        Family::TwoTerm { .. } => Settings::need(s.b, "b")?,
        Family::OneTerm { .. } => Settings::need(s.c, "c")?,
    };
    if !(param.re.is_finite() && param.im.is_finite()) {
        return Err(invalid("parameter must be finite"));
    }
    let curve = sample_boundary(&fam, s.resolution)?;
    let v = classify_with_curve(&curve, param, s.eps_boundary);
    print_json(&json!({
        "verdict": v.kind.label(),
        "winding": v.winding,
        "min_distance": v.min_distance_to_curve,
        "params": params_json(&s.meta("classify")),
    }))
}

fn run_simulation(s: &Settings, steps: usize) -> Result<Trajectory> {
    let opts = s.sim_options();
    if s.one_term {
        let n = s.big_n()?;
        let sys = OneTermSystem::new(s.alpha()?, n, Settings::need(s.c, "c")?)?;
        let init: Vec<f64> = match &s.init {
            Some(v) => v.clone(),
            None => (1..=n).map(|k| 0.1 * k as f64).collect(),
        };
        if init.len() != n {
            return Err(invalid(format!("--init needs {n} values, got {}", init.len())));
        }
        let init: Vec<Complex64> = init.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Ok(simulate_one_term_with(&sys, &init, steps, &opts)?)
    } else {
        let sys = TwoTermSystem::new(s.orders()?, Settings::need(s.a, "a")?, Forcing::Linear(Settings::need(s.b, "b")?))?;
        let (x0, x1) = two_initial(s, (0.1, 0.2))?;
        Ok(simulate_two_term_with(&sys, x0, x1, steps, &opts)?)
    }
}

fn two_initial(s: &Settings, default: (f64, f64)) -> Result<(Complex64, Complex64)> {
    let (x0, x1) = match &s.init {
        Some(v) if v.len() == 2 => (v[0], v[1]),
        Some(v) => return Err(invalid(format!("--init needs 2 values, got {}", v.len()))),
        None => (s.x0.unwrap_or(default.0), s.x1.unwrap_or(default.1)),
    };
    Ok((Complex64::new(x0, 0.0), Complex64::new(x1, 0.0)))
}

pub fn simulate(s: &Settings) -> Result<()> {
    let steps = s.steps.unwrap_or(500);
    let traj = run_simulation(s, steps)?;
    let v = classify_trajectory(&traj, &s.thresholds)?;
    let mut meta = s.meta("simulate");
    meta.push(("verdict".into(), v.kind.label().into()));
    if let fracstab::VerdictKind::ConvergedTo(z) = v.kind {
        meta.push(("limit".into(), z.to_string()));
    }
    match s.format.unwrap_or(Format::Csv) {
        Format::Json => {
            if s.out.is_some() {
                emit(s, |w| write_trajectory_csv(w, &traj, &meta))?;
            }
            print_json(&json!({
                "verdict": v.kind.label(),
                "final_magnitude": v.final_magnitude,
                "n_used": v.n_used,
                "params": params_json(&meta),
            }))
        }
        Format::Csv => {
            emit(s, |w| write_trajectory_csv(w, &traj, &meta))?;
            if s.out.is_some() {
                println!("verdict: {}", v.kind.label());
            }
            Ok(())
        }
        Format::Svg => Err(invalid("simulate writes csv or json")),
    }
}

pub fn bifurcations(s: &Settings) -> Result<()> {
    let r = bifurcation_values(s.orders()?);
    let meta = s.meta("bifurcations");
    let regime = s.a.map(|a| format!("{:?}", r.regime_of(a)));
    match s.format.unwrap_or(Format::Json) {
        Format::Csv => emit(s, |w| {
            for (k, v) in &meta {
                writeln!(w, "# {k}={v}")?;
            }
            writeln!(w, "a1,a2")?;
            writeln!(w, "{},{}", r.a1, r.a2)
        }),
        _ => print_json(&json!({ "a1": r.a1, "a2": r.a2, "regime": regime, "params": params_json(&meta) })),
    }
}

pub fn interval(s: &Settings) -> Result<()> {
    let meta = s.meta("interval");
    let v = if s.one_term {
        if s.big_n()? != 1 {
            return Err(invalid("real intervals of the one-term model are available for N = 1 only"));
        }
        let (l, r) = one_term_real_interval(s.alpha()?)?;
        json!({ "left": l, "right": r })
    } else {
        match real_interval(s.orders()?, Settings::need(s.a, "a")?)? {
            RealInterval::Interval { left, right, theta_star, sign_changes } => {
                json!({ "left": left, "right": right, "theta_star": theta_star, "sign_changes": sign_changes })
            }
            RealInterval::Empty => json!({ "empty": true }),
        }
    };
    let mut v = v;
    v["params"] = params_json(&meta);
    print_json(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    MidpointAndOutside,
    AllProbes,
}

#[derive(Debug, Clone, Args)]
pub struct LogisticArgs {
    /// Estimate the stability bound a* for the given orders.
    #[arg(long)]
    pub a_star: bool,
    /// Estimate a* for every reference order pair and compare.
    #[arg(long, conflicts_with = "a_star")]
    pub table: bool,
    #[arg(long, default_value_t = 0.1)]
    pub a_start: f64,
    #[arg(long, default_value_t = 0.1)]
    pub a_step: f64,
    #[arg(long)]
    pub a_stop: Option<f64>,
    #[arg(long, value_enum, default_value_t = Strategy::MidpointAndOutside)]
    pub strategy: Strategy,
}

impl LogisticArgs {
    fn a_star_config(&self, s: &Settings) -> AStarConfig {
        AStarConfig {
            a_start: self.a_start,
            a_step: self.a_step,
            a_stop: self.a_stop,
            n_steps: s.steps.unwrap_or(2000),
            strategy: match self.strategy {
                Strategy::MidpointAndOutside => ProbeStrategy::MidpointAndOutside,
                Strategy::AllProbes => ProbeStrategy::AllProbes,
            },
            ..Default::default()
        }
    }
}

pub fn logistic(s: &Settings, args: &LogisticArgs) -> Result<()> {
    let mut meta = s.meta("logistic");
    if args.table {
        let cfg = args.a_star_config(s);
        meta.push(("strategy".into(), format!("{:?}", args.strategy)));
        let rows: Vec<_> = s.pool()?.install(|| {
            A_STAR_BOUNDS
                .par_iter()
                .map(|&(al, be, want)| {
                    let o = fracstab::FractionalOrderPair::new(al, be)?;
                    Ok((al, be, want, estimate_a_star(o, &cfg)?.a_star))
                })
                .collect::<fracstab::Result<Vec<_>>>()
        })?;
        return emit(s, |w| {
            for (k, v) in &meta {
                writeln!(w, "# {k}={v}")?;
            }
            writeln!(w, "alpha,beta,a_star_reference,a_star_computed,agree")?;
            for (al, be, want, got) in rows {
                let agree = got.is_some_and(|g| (g - want).abs() <= 0.1 + 1e-9);
                let got = got.map(|g| g.to_string()).unwrap_or_default();
                writeln!(w, "{al},{be},{want},{got},{agree}")?;
            }
            Ok(())
        });
    }

    let orders = s.orders()?;
    if args.a_star {
        let cfg = args.a_star_config(s);
        let est = s.pool()?.install(|| estimate_a_star(orders, &cfg))?;
        return match s.format.unwrap_or(Format::Csv) {
            Format::Json => {
                let mut v = serde_json::to_value(&est)?;
                v["params"] = params_json(&meta);
                print_json(&v)
            }
            _ => emit(s, |w| {
                for (k, v) in &meta {
                    writeln!(w, "# {k}={v}")?;
                }
                writeln!(w, "# a_star={}", est.a_star.map(|a| a.to_string()).unwrap_or_else(|| "none".into()))?;
                writeln!(w, "# mu_grid={}", est.mu_grid)?;
                writeln!(w, "a,mu_left,mu_right,passes,probes")?;
                for r in &est.rows {
                    let probes: Vec<String> =
                        r.probes.iter().map(|p| format!("{:?}:{}:{}", p.role, p.mu, p.converged as u8)).collect();
                    writeln!(w, "{},{},{},{},{}", r.a, r.mu_interval.0, r.mu_interval.1, r.passes, probes.join(" "))?;
                }
                Ok(())
            }),
        };
    }

    let a = Settings::need(s.a, "a")?;
    let mu = Settings::need(s.mu, "mu")?;
    let eq = equilibria(mu)?;
    let cfg = s.stability();
    let x1 = classify_equilibrium(orders, a, mu, Equilibrium::Trivial, &cfg)?;
    let x2 = classify_equilibrium(orders, a, mu, Equilibrium::NonTrivial, &cfg)?;
    let i1 = stable_mu_interval(orders, a, Equilibrium::Trivial)?;
    let i2 = stable_mu_interval(orders, a, Equilibrium::NonTrivial)?;

    let steps = s.steps.unwrap_or(1000);
    let (x0, x1_init) = two_initial(s, (eq.x2_star + 0.1, eq.x2_star - 0.1))?;
    let sys = TwoTermSystem::new(orders, a, Forcing::Logistic(mu))?;
    let traj = simulate_two_term_with(&sys, x0, x1_init, steps, &s.sim_options())?;
    let v = classify_trajectory(&traj, &s.thresholds)?;
    let to_x2 = converges_to(&traj.values, eq.x2_star, 1e-3, s.thresholds.tail_fraction);
    meta.push(("verdict".into(), v.kind.label().into()));
    if s.out.is_some() {
        emit(s, |w| write_trajectory_csv(w, &traj, &meta))?;
    }
    let last = traj.values.last().copied().unwrap_or_default();
    print_json(&json!({
        "x1_star": { "value": eq.x1_star, "slope": eq.b1, "linear_verdict": x1.kind.label(), "stable_mu": i1 },
        "x2_star": { "value": eq.x2_star, "slope": eq.b2, "linear_verdict": x2.kind.label(), "stable_mu": i2 },
        "verdict": v.kind.label(),
        "converges_to_x2_star": to_x2,
        "final_value": complex_json(last),
        "params": params_json(&meta),
    }))
}

#[derive(Debug, Clone, Args)]
pub struct AtlasArgs {
    #[arg(long, default_value_t = 0.01)]
    pub a_min: f64,
    /// Defaults to the second bifurcation value.
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub a_step: f64,
}

/// Stable band of the real `b` axis as `a` sweeps a grid.
pub fn atlas(s: &Settings, args: &AtlasArgs) -> Result<()> {
    let orders = s.orders()?;
    let report = bifurcation_values(orders);
    let a_max = args.a_max.unwrap_or(report.a2);
    if !(args.a_step > 0.0 && args.a_min > 0.0 && a_max >= args.a_min) {
        return Err(invalid("need 0 < a-min <= a-max and a-step > 0"));
    }
    let n = ((a_max - args.a_min) / args.a_step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|k| args.a_min + k as f64 * args.a_step).collect();
    let rows = s.pool()?.install(|| {
        grid.par_iter()
            .map(|&a| real_interval(orders, a).map(|iv| (a, iv)))
            .collect::<fracstab::Result<Vec<_>>>()
    })?;
    let mut meta = s.meta("atlas");
    meta.push(("a1".into(), report.a1.to_string()));
    meta.push(("a2".into(), report.a2.to_string()));
    emit(s, |w| {
        for (k, v) in &meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "a,left,right,regime")?;
        for (a, iv) in rows {
            let regime = format!("{:?}", report.regime_of(a));
            match iv.bounds() {
                Some((l, r)) => writeln!(w, "{a},{l},{r},{regime}")?,
                None => writeln!(w, "{a},,,{regime}")?,
            }
        }
        Ok(())
    })
}
