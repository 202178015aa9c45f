use fracstab::stability::regions::{region_map, winding_grid, GridSpec};
use fracstab::stability::{bifurcation_values, sample_boundary};
use fracstab::{Family, FractionalOrderPair};

fn bounded(a: f64) -> Vec<i64> {
    let cv = sample_boundary(&Family::two_term(1.9, 0.2, a).unwrap(), 4096).unwrap();
    let g = GridSpec::around(&cv, 600, 600, 0.02);
    let mut w: Vec<i64> = region_map(&cv, &g).bounded(1).iter().map(|r| r.winding).collect();
    w.sort();
    w
}

#[test]
fn before_first_bifurcation() {
    let w = bounded(2.0);
    assert_eq!(w.iter().filter(|&&k| k == 2).count(), 1);
    assert_eq!(w.iter().filter(|&&k| k != 2).count(), 3);
}

#[test]
fn between_bifurcations() {
    let w = bounded(3.5);
    assert_eq!(w.iter().filter(|&&k| k == 2).count(), 1);
    assert_eq!(w.iter().filter(|&&k| k != 2).count(), 1);
}

#[test]
fn no_stable_cells_past_second_bifurcation() {
    let a2 = bifurcation_values(FractionalOrderPair::new(1.9, 0.2).unwrap()).a2;
    for f in [1.01, 1.5, 3.0] {
        let cv = sample_boundary(&Family::two_term(1.9, 0.2, a2 * f).unwrap(), 4096).unwrap();
        let g = GridSpec::around(&cv, 300, 300, 0.02);
        assert!(winding_grid(&cv, &g).iter().all(|&w| w != 2), "a = {}", a2 * f);
    }
}

#[test]
fn higher_order_one_term_has_no_stable_cells() {
    for (alpha, n) in [(2.5, 3usize), (5.3, 6)] {
        let cv = sample_boundary(&Family::one_term(alpha, n).unwrap(), 4096).unwrap();
        let g = GridSpec::around(&cv, 200, 200, 0.0);
        assert!(winding_grid(&cv, &g).iter().all(|&w| w != n as i64));
    }
}
