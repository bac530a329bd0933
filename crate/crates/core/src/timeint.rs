//! Classical fourth-order Runge-Kutta.

use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is in the build graph
use num_traits::Float;

use crate::polyfield::PiecewisePoly;
use crate::{Error, Result};

/// Vector-space operations RK4 needs from a state.
pub trait State: Clone {
    /// `self += a * x`.
    fn axpy(&mut self, a: f64, x: &Self);
    fn is_finite(&self) -> bool;
}

impl State for PiecewisePoly {
    fn axpy(&mut self, a: f64, x: &Self) {
        PiecewisePoly::axpy(self, a, x);
    }

    fn is_finite(&self) -> bool {
        PiecewisePoly::is_finite(self)
    }
}

impl State for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl State for Vec<f64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        for (y, v) in self.iter_mut().zip(x) {
            *y += a * v;
        }
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// One RK4 step from `(u, t)` with step `dt`.
pub fn rk4_step<S, F>(u: &S, t: f64, dt: f64, rhs: &mut F) -> Result<S>
where
    S: State,
    F: FnMut(&S, f64) -> Result<S>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig("time step must be positive"));
    }
    let half = 0.5 * dt;
    let k1 = rhs(u, t)?;
    let mut stage = u.clone();
    stage.axpy(half, &k1);
    let k2 = rhs(&stage, t + half)?;
    let mut stage = u.clone();
    stage.axpy(half, &k2);
    let k3 = rhs(&stage, t + half)?;
    let mut stage = u.clone();
    stage.axpy(dt, &k3);
    let k4 = rhs(&stage, t + dt)?;
    let mut next = u.clone();
    next.axpy(dt / 6.0, &k1);
    next.axpy(dt / 3.0, &k2);
    next.axpy(dt / 3.0, &k3);
    next.axpy(dt / 6.0, &k4);
    if !next.is_finite() {
        return Err(Error::NonFinite { step: 0, time: t + dt });
    }
    Ok(next)
}

/// `ceil(span / dt)`, treating spans within `1e-9` steps of a whole number as exact.
pub fn step_count(span: f64, dt: f64) -> usize {
    let ratio = span / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Integrates from `t0` to `t_final` with steps of `dt`, shortening only the last.
pub fn integrate_to<S, F>(u0: S, t0: f64, t_final: f64, dt: f64, rhs: F) -> Result<S>
where
    S: State,
    F: FnMut(&S, f64) -> Result<S>,
{
    integrate_observed(u0, t0, t_final, dt, rhs, |_, _, _| {})
}

/// As [`integrate_to`], calling `observe(step, t, &u)` after every step.
pub fn integrate_observed<S, F, O>(
    u0: S,
    t0: f64,
    t_final: f64,
    dt: f64,
    mut rhs: F,
    mut observe: O,
) -> Result<S>
where
    S: State,
    F: FnMut(&S, f64) -> Result<S>,
    O: FnMut(usize, f64, &S),
{
    if !(t_final > t0) {
        return Err(Error::InvalidConfig("final time must exceed start time"));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig("time step must be positive"));
    }
    let steps = step_count(t_final - t0, dt);
    let mut u = u0;
    let mut t = t0;
    for step in 1..=steps {
        let h = if step == steps { t_final - t } else { dt };
        u = rk4_step(&u, t, h, &mut rhs).map_err(|e| match e {
            Error::NonFinite { time, .. } => Error::NonFinite { step, time },
            other => other,
        })?;
        t = if step == steps { t_final } else { t0 + step as f64 * dt };
        observe(step, t, &u);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_scalar_step() {
        let (lambda, dt, u) = (-1.3, 0.1, 2.0);
        let got = rk4_step(&u, 0.0, dt, &mut |v: &f64, _| Ok(lambda * v)).unwrap();
        let z = lambda * dt;
        let expect = u * (1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0);
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn zero_rhs_is_identity() {
        let u = alloc::vec![1.0, -2.5, 3.25];
        let out = integrate_to(u.clone(), 0.0, 1.7, 0.01, |v: &Vec<f64>, _| Ok(alloc::vec![0.0; v.len()]))
            .unwrap();
        assert_eq!(out, u);
    }

    #[test]
    fn step_counts() {
        assert_eq!(step_count(10.0 * 0.1, 0.1), 10);
        assert_eq!(step_count(10.5 * 0.1, 0.1), 11);
        let mut sizes = Vec::new();
        let mut last_t = 0.0;
        integrate_observed(0.0, 0.0, 1.05, 0.1, |_: &f64, _| Ok(0.0), |_, t, _| {
            sizes.push(t - last_t);
            last_t = t;
        })
        .unwrap();
        assert_eq!(sizes.len(), 11);
        assert!((sizes[10] - 0.05).abs() < 1e-12);
        assert_eq!(last_t, 1.05);
    }

    #[test]
    fn non_finite_reports_step() {
        let err = integrate_to(1.0, 0.0, 1.0, 0.1, |v: &f64, t| {
            Ok(if t > 0.45 { f64::NAN } else { *v })
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { step: 5, .. }), "{err:?}");
    }

    #[test]
    fn rejects_bad_times() {
        assert!(integrate_to(1.0, 1.0, 1.0, 0.1, |v: &f64, _| Ok(*v)).is_err());
        assert!(integrate_to(1.0, 0.0, 1.0, 0.0, |v: &f64, _| Ok(*v)).is_err());
    }
}
