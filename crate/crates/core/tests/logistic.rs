mod support;

use fracstab::logistic::{estimate_a_star, stable_mu_interval, AStarConfig, Equilibrium, ProbeRole};
use fracstab::stability::real_interval;
use fracstab::FractionalOrderPair;
use support::A_STAR_BOUNDS;

fn o(alpha: f64, beta: f64) -> FractionalOrderPair {
    FractionalOrderPair::new(alpha, beta).unwrap()
}

#[test]
fn trivial_point_interval_is_the_real_interval() {
    for (al, be, _) in A_STAR_BOUNDS {
        for a in [0.3, 1.0, 1.7, 2.5, 3.2, 4.0] {
            let iv = real_interval(o(al, be), a).unwrap().bounds();
            assert_eq!(stable_mu_interval(o(al, be), a, Equilibrium::Trivial).unwrap(), iv);
        }
    }
}

// Small a is excluded: near the transcritical point mu = 1 the fixed point
// x2* is smaller than the 0.1 initial offset and the midpoint run can leave
// its basin.
#[test]
fn midpoint_converges_well_below_the_bound() {
    for (al, be, a_star) in A_STAR_BOUNDS {
        let cfg = AStarConfig { a_start: 1.0, a_stop: Some(a_star - 0.2 + 1e-9), ..Default::default() };
        let est = estimate_a_star(o(al, be), &cfg).unwrap();
        assert!(!est.rows.is_empty());
        for row in &est.rows {
            let mid = row.probes.iter().find(|p| p.role == ProbeRole::Midpoint).unwrap();
            assert!(mid.converged, "({al}, {be}) a = {}: midpoint mu = {}", row.a, mid.mu);
        }
    }
}

#[test]
fn some_inside_probe_fails_well_above_the_bound() {
    for (al, be, a_star) in A_STAR_BOUNDS {
        let cfg = AStarConfig { a_start: a_star + 0.2 + 1e-9, ..Default::default() };
        let est = estimate_a_star(o(al, be), &cfg).unwrap();
        assert!(!est.rows.is_empty());
        for row in &est.rows {
            let inside_fail = row
                .probes
                .iter()
                .filter(|p| matches!(p.role, ProbeRole::Midpoint | ProbeRole::InsideLeft | ProbeRole::InsideRight))
                .any(|p| !p.converged);
            assert!(inside_fail, "({al}, {be}) a = {}", row.a);
        }
    }
}

#[test]
fn estimate_reports_grid_resolution() {
    let est = estimate_a_star(o(1.1, 0.9), &AStarConfig::default()).unwrap();
    let a = est.a_star.unwrap();
    assert_eq!(est.grid_step, 0.1);
    assert!(((a * 10.0).round() - a * 10.0).abs() < 1e-9);
    assert!(est.rows.iter().all(|r| r.a < fracstab::stability::bifurcation_values(est.orders).a2));
}
