#![allow(dead_code)]

use fracstab::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(a, b, stable)` at alpha = 1.9, beta = 0.2, x(0) = 0.1, x(1) = 0.2.
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

pub const N3_C: [(f64, f64); 4] = [(0.3839, 4.832), (0.6667, -0.6024), (-4.02, -3.168), (-2.168, 1.798)];
pub const N6_C: [(f64, f64); 4] = [(1.948, 0.06482), (-4.692, 2.35), (-7.879, -23.47), (1.517, -0.3911)];

/// Characteristic function and derivative, written out independently of the
/// library: `z^2 w^alpha + a z w^beta + 1 - b` or `z^N w^alpha + 1 - c` with
/// `w = 1 - 1/z` on the principal branch.
#[derive(Clone, Copy)]
pub enum Char {
    Two { alpha: f64, beta: f64, a: f64 },
    One { alpha: f64, n: i32 },
}

impl Char {
    fn eval(&self, z: Complex64, p: Complex64) -> (Complex64, Complex64) {
        let w = 1.0 - 1.0 / z;
        match *self {
            Char::Two { alpha, beta, a } => {
                let wa = w.powf(alpha);
                let wb = w.powf(beta);
                let q = z * z * wa + a * z * wb + 1.0 - p;
                let dq = 2.0 * z * wa + alpha * wa / w + a * (wb + beta * wb / (w * z));
                (q, dq)
            }
            Char::One { alpha, n } => {
                let wa = w.powf(alpha);
                let zn = z.powi(n);
                let q = zn * wa + 1.0 - p;
                let dq = n as f64 * zn / z * wa + alpha * zn * wa / (w * z * z);
                (q, dq)
            }
        }
    }

    /// Roots found by Newton from rings of starts around the unit circle and
    /// small rings around the branch point `z = 1`, where small-`beta` roots
    /// crowd.
    pub fn roots_near_circle(&self, p: Complex64) -> Vec<Complex64> {
        let mut starts = Vec::new();
        for r in [0.7, 0.9, 1.0005, 1.01, 1.1, 1.4] {
            for k in 0..96 {
                starts.push(Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / 96.0));
            }
        }
        for r in [1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
            for k in 0..32 {
                starts.push(1.0 + Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / 32.0));
            }
        }
        let mut roots: Vec<Complex64> = Vec::new();
        for start in starts {
            let mut z = start;
            for _ in 0..100 {
                let (q, dq) = self.eval(z, p);
                let step = q / dq;
                z -= step;
                if !(z.re.is_finite() && z.im.is_finite()) || z.norm() < 1e-3 {
                    break;
                }
                if step.norm() < 1e-14 * z.norm() {
                    break;
                }
            }
            if !(z.re.is_finite() && z.im.is_finite()) || z.norm() <= 1.0 + 1e-12 && (z - 1.0).norm() < 1e-9 {
                continue;
            }
            let (q, _) = self.eval(z, p);
            if q.norm() < 1e-10 && !roots.iter().any(|r| (r - z).norm() < 1e-7) {
                roots.push(z);
            }
        }
        roots
    }
}
