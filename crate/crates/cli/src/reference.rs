//! Reference values recomputed by `reproduce`.

/// `(a, b, stable)` at alpha = 1.9, beta = 0.2 with x(0) = 0.1, x(1) = 0.2.
pub const LINEAR_CASES: [(f64, f64, f64, bool); 10] = [
    (2.0, 1.891, -0.624, true),
    (2.0, 1.661, 0.9917, false),
    (2.0, 2.168, -0.7312, false),
    (2.0, 2.0, 0.0, false),
    (3.24901, 0.7, 0.0, true),
    (3.24901, 1.489, 1.224, false),
    (3.24901, 0.3925, -0.1999, false),
    (3.5, 0.6, 0.0, true),
    (3.5, 0.9, 0.0, false),
    (3.79051, -0.08687, -0.9862, false),
];

/// `(alpha, beta, a*)`
pub const A_STAR_BOUNDS: [(f64, f64, f64); 6] =
    [(1.8, 0.5, 2.3), (1.2, 0.8, 2.2), (1.4, 0.7, 2.2), (1.6, 0.3, 2.2), (1.5, 0.5, 1.9), (1.1, 0.9, 2.4)];

/// `(alpha, beta, a1, a2)`
pub const BIFURCATIONS: [(f64, f64, f64, f64); 3] =
    [(1.9, 0.2, 3.24901, 3.79051), (1.8, 0.5, 2.46229, 3.61136), (1.2, 0.8, 1.31951, 3.07885)];

/// `(alpha, beta, a, left, right)`; NaN marks an empty interval.
pub const INTERVALS: [(f64, f64, f64, f64, f64); 3] =
    [(1.8, 0.5, 1.0, 0.210772, 1.0), (1.8, 0.5, 3.0, -0.464274, 0.239562), (1.8, 0.5, 4.0, f64::NAN, f64::NAN)];

/// `(a, nontrivial, left, right)` at alpha = 1.2, beta = 0.8.
pub const LOGISTIC_INTERVALS: [(f64, bool, f64, f64); 3] =
    [(0.5, false, -0.284222, 1.0), (2.3, false, -1.57005, -0.707136), (0.5, true, 1.0, 2.284222)];

/// `(alpha, N, c, stable)` for the one-term model.
pub const ONE_TERM: [(f64, usize, (f64, f64), bool); 12] = [
    (0.55, 1, (0.982, 0.4906), true),
    (0.55, 1, (0.1346, -1.101), false),
    (1.1, 2, (0.2415, -0.06215), true),
    (1.1, 2, (0.1346, -0.8733), false),
    (2.5, 3, (0.3839, 4.832), false),
    (2.5, 3, (0.6667, -0.6024), false),
    (2.5, 3, (-4.02, -3.168), false),
    (2.5, 3, (-2.168, 1.798), false),
    (5.3, 6, (1.948, 0.06482), false),
    (5.3, 6, (-4.692, 2.35), false),
    (5.3, 6, (-7.879, -23.47), false),
    (5.3, 6, (1.517, -0.3911), false),
];
