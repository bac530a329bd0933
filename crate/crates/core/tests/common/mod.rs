#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svkit_core::meshpart::{build_mesh, Mesh1D};
use svkit_core::polyfield::PiecewisePoly;

/// `(P_n(s), P_n'(s))` by the three-term recurrence.
pub fn legendre(n: usize, s: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, s);
    let (mut d0, mut d1) = (0.0, 1.0);
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 1..n {
        let m = m as f64;
        let p2 = ((2.0 * m + 1.0) * s * p1 - m * p0) / (m + 1.0);
        let d2 = d0 + (2.0 * m + 1.0) * p1;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
    }
    (p1, d1)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss(m: usize) -> Vec<(f64, f64)> {
    (0..m)
        .map(|j| {
            let mut s = -(PI * (j as f64 + 0.75) / (m as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(m, s);
                let step = p / dp;
                s -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(m, s);
            (s, 2.0 / ((1.0 - s * s) * dp * dp))
        })
        .collect()
}

/// `∫_a^b f` with an `m`-point Gauss rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * gauss(m).iter().map(|&(s, w)| w * f(mid + half * s)).sum::<f64>()
}

pub fn modal_value(c: &[f64], s: f64) -> f64 {
    c.iter().enumerate().map(|(m, c)| c * legendre(m, s).0).sum()
}

pub fn modal_slope(c: &[f64], s: f64) -> f64 {
    c.iter().enumerate().map(|(m, c)| c * legendre(m, s).1).sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_poly(rng: &mut ChaCha8Rng, mesh: &Arc<Mesh1D>, k: usize) -> PiecewisePoly {
    let coeffs = (0..mesh.len() * (k + 1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PiecewisePoly::from_coeffs(mesh, k, coeffs).unwrap()
}

pub fn jittered_mesh(n: usize, seed: u64) -> Arc<Mesh1D> {
    Arc::new(build_mesh(n, 0.3, seed).unwrap())
}
