#![allow(dead_code)]

use fdcran::{db_to_linear, SystemParams};

pub fn fig2(c: f64) -> SystemParams {
    SystemParams {
        alpha: 0.4,
        beta_du: 0.4,
        beta_ud: 0.04,
        gamma_du: 0.0,
        gamma_ud: 4.0,
        p_u_max: 100.0,
        p_d_max: 100.0,
        c_u: c,
        c_d: c,
    }
}

pub fn fig3(gamma_ud: f64) -> SystemParams {
    SystemParams {
        gamma_ud,
        ..fig2(10.0)
    }
}

/// Additive-recurrence sequence in [0, 1)^d, one irrational step per axis.
pub struct Weyl {
    state: Vec<f64>,
    steps: Vec<f64>,
}

impl Weyl {
    pub fn new(dims: usize) -> Self {
        let primes = [2.0_f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
        let steps: Vec<f64> = primes[..dims].iter().map(|p| p.sqrt().fract()).collect();
        Weyl {
            state: vec![0.5; dims],
            steps,
        }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        for (s, step) in self.state.iter_mut().zip(&self.steps) {
            *s = (*s + step).fract();
        }
        self.state.clone()
    }
}

fn lerp(lo: f64, hi: f64, t: f64) -> f64 {
    lo + (hi - lo) * t
}

/// Parameter points covering the Fig. 2 and Fig. 3 regimes and their
/// neighbourhood.
pub fn parameter_suite(count: usize) -> Vec<SystemParams> {
    let mut seq = Weyl::new(8);
    (0..count)
        .map(|_| {
            let u = seq.next_point();
            SystemParams {
                alpha: lerp(0.0, 0.45, u[0]),
                beta_du: lerp(0.0, 0.5, u[1]),
                beta_ud: lerp(0.0, 0.2, u[2]),
                gamma_du: 0.0,
                gamma_ud: lerp(0.0, 8.0, u[3]),
                p_u_max: db_to_linear(lerp(0.0, 30.0, u[4])),
                p_d_max: db_to_linear(lerp(0.0, 30.0, u[5])),
                c_u: lerp(0.5, 12.0, u[6]),
                c_d: lerp(0.5, 12.0, u[7]),
            }
        })
        .collect()
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    (f(x), x)
}

/// Max over `f in [0, 1]` of `min(f r_u, (1 - f) r_d)`: a `1e-4` grid
/// followed by golden-section refinement inside the best cell.
pub fn numeric_time_share(r_u: f64, r_d: f64) -> f64 {
    let obj = |f: f64| (f * r_u).min((1.0 - f) * r_d);
    let steps = 10_000;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for i in 0..=steps {
        let f = i as f64 / steps as f64;
        let v = obj(f);
        if v > best {
            best = v;
            arg = f;
        }
    }
    let h = 1.0 / steps as f64;
    let (refined, _) = golden_max(obj, (arg - h).max(0.0), (arg + h).min(1.0), 1e-13);
    best.max(refined)
}

/// Pseudo-random rate pairs spanning three orders of magnitude.
pub fn rate_pairs(count: usize) -> Vec<(f64, f64)> {
    let mut seq = Weyl::new(2);
    (0..count)
        .map(|_| {
            let u = seq.next_point();
            (
                10f64.powf(lerp(-1.0, 1.2, u[0])),
                10f64.powf(lerp(-1.0, 1.2, u[1])),
            )
        })
        .collect()
}
