//! Legendre polynomials and the Gauss / Radau rules on `[-1, 1]`.
//!
//! Every [`QuadratureRule`] carries the full partition `-1 = s_0 < … < s_{k+1} = 1`
//! of the reference element. Endpoints that are not quadrature nodes keep a
//! zero weight so that the same point list can drive both the control-volume
//! partition and the quadrature sum.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // redundant when std is in the build graph
use num_traits::Float;

use crate::{check_order, Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_CAP: usize = 100;

/// `L_k(s)` and `L_k'(s)`, normalized so that `L_k(1) = 1`.
pub fn legendre_eval(k: usize, s: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, s);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for n in 1..k {
        let nf = n as f64;
        let p_next = ((2.0 * nf + 1.0) * s * p - nf * p_prev) / (nf + 1.0);
        // L'_{n+1} = L'_{n-1} + (2n+1) L_n holds at the endpoints as well.
        let d_next = d_prev + (2.0 * nf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Fills `out[m] = L_m(s)` for `m < out.len()`.
pub fn legendre_values(s: f64, out: &mut [f64]) {
    let Some((first, rest)) = out.split_first_mut() else {
        return;
    };
    *first = 1.0;
    if rest.is_empty() {
        return;
    }
    out[1] = s;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0) * s * out[n] - nf * out[n - 1]) / (nf + 1.0);
    }
}

/// Fills values and first derivatives of `L_0 … L_{len-1}` at `s`.
pub fn legendre_values_and_derivatives(s: f64, values: &mut [f64], derivs: &mut [f64]) {
    debug_assert_eq!(values.len(), derivs.len());
    legendre_values(s, values);
    for m in 0..derivs.len() {
        derivs[m] = match m {
            0 => 0.0,
            1 => 1.0,
            _ => derivs[m - 2] + (2 * m - 1) as f64 * values[m - 1],
        };
    }
}

/// `∫_{-1}^{s} L_m(t) dt`.
pub fn legendre_integral(m: usize, s: f64) -> f64 {
    if m == 0 {
        return s + 1.0;
    }
    let (next, _) = legendre_eval(m + 1, s);
    let (prev, _) = legendre_eval(m - 1, s);
    (next - prev) / (2 * m + 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Gauss,
    RadauRight,
    RadauLeft,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [RuleKind::Gauss, RuleKind::RadauRight, RuleKind::RadauLeft];

    pub(crate) fn index(self) -> usize {
        match self {
            RuleKind::Gauss => 0,
            RuleKind::RadauRight => 1,
            RuleKind::RadauLeft => 2,
        }
    }

    /// The polynomial whose zeros are the interior (and one-sided) nodes.
    fn target(self, k: usize, s: f64) -> (f64, f64) {
        match self {
            RuleKind::Gauss => legendre_eval(k, s),
            RuleKind::RadauRight | RuleKind::RadauLeft => {
                let (a, da) = legendre_eval(k + 1, s);
                let (b, db) = legendre_eval(k, s);
                if self == RuleKind::RadauRight {
                    (a - b, da - db)
                } else {
                    (a + b, da + db)
                }
            }
        }
    }

    /// Residual of the defining polynomial at `s`.
    pub fn residual(self, k: usize, s: f64) -> f64 {
        self.target(k, s).0
    }
}

/// A reference-element rule with its full `k+2` point partition.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    k: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// `s_0 … s_{k+1}`, strictly increasing, endpoints included.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `A_0 … A_{k+1}`; zero on endpoints that are not nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Q[f] = Σ A_j f(s_j)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(&s, &w)| w * f(s))
            .sum()
    }

    /// `R[f] = ∫ f - Q[f]` given the exact integral over `[-1, 1]`.
    pub fn remainder(&self, exact: f64, f: impl Fn(f64) -> f64) -> f64 {
        exact - self.apply(f)
    }
}

/// Builds the Gauss, right-Radau or left-Radau rule of order `k`.
pub fn make_rule(kind: RuleKind, k: usize) -> Result<QuadratureRule> {
    check_order(k)?;
    let kf = k as f64;
    let (guesses, fixed): (Vec<f64>, Option<f64>) = match kind {
        RuleKind::Gauss => (
            (1..=k)
                .map(|j| -(PI * (j as f64 - 0.25) / (kf + 0.5)).cos())
                .collect(),
            None,
        ),
        RuleKind::RadauRight => (
            (1..=k)
                .rev()
                .map(|j| (2.0 * PI * j as f64 / (2.0 * kf + 1.0)).cos())
                .collect(),
            Some(1.0),
        ),
        RuleKind::RadauLeft => (
            (1..=k)
                .map(|j| -(2.0 * PI * j as f64 / (2.0 * kf + 1.0)).cos())
                .collect(),
            Some(-1.0),
        ),
    };
    let mut roots: Vec<f64> = fixed.into_iter().collect();
    for guess in guesses {
        let root = newton_deflated(|s| kind.target(k, s), guess, &roots)?;
        roots.push(root);
    }
    roots.sort_by(f64::total_cmp);

    // Interior nodes are those strictly inside; the endpoints are appended.
    let mut points = Vec::with_capacity(k + 2);
    points.push(-1.0);
    points.extend(roots.iter().copied().filter(|s| s.abs() < 1.0));
    points.push(1.0);
    if points.len() != k + 2 || points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateNodes);
    }

    let active: Vec<usize> = match kind {
        RuleKind::Gauss => (1..=k).collect(),
        RuleKind::RadauRight => (1..=k + 1).collect(),
        RuleKind::RadauLeft => (0..=k).collect(),
    };
    let nodes: Vec<f64> = active.iter().map(|&j| points[j]).collect();
    let (panel_x, panel_w) = gauss_legendre(k + 2)?;
    let mut weights = alloc::vec![0.0; k + 2];
    for (slot, &j) in active.iter().enumerate() {
        weights[j] = panel_x
            .iter()
            .zip(&panel_w)
            .map(|(&s, &w)| w * lagrange_cardinal(&nodes, slot, s))
            .sum();
    }
    Ok(QuadratureRule {
        kind,
        k,
        points,
        weights,
    })
}

fn lagrange_cardinal(nodes: &[f64], j: usize, s: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != j)
        .map(|(_, &y)| (s - y) / (nodes[j] - y))
        .product()
}

/// Newton iteration on `p`, deflated against roots already found.
fn newton_deflated(p: impl Fn(f64) -> (f64, f64), guess: f64, found: &[f64]) -> Result<f64> {
    let mut s = guess;
    for _ in 0..NEWTON_CAP {
        let (value, deriv) = p(s);
        let shift: f64 = found.iter().map(|r| 1.0 / (s - r)).sum();
        let denom = deriv - value * shift;
        if denom == 0.0 {
            break;
        }
        let step = value / denom;
        s -= step;
        if step.abs() < NEWTON_TOL {
            return Ok(s);
        }
    }
    Err(Error::NonConvergence {
        iterations: NEWTON_CAP,
    })
}

/// Standard `m`-point Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidConfig("gauss rule needs at least one point"));
    }
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for j in 1..=m {
        let guess = -(PI * (j as f64 - 0.25) / (mf + 0.5)).cos();
        let x = newton_deflated(|s| legendre_eval(m, s), guess, &[])?;
        let (_, d) = legendre_eval(m, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * d * d));
    }
    Ok((nodes, weights))
}

/// `m`-point Gauss-Legendre approximation of `∫_a^b f`.
pub fn integrate_panel(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidConfig("integration interval must satisfy a < b"));
    }
    let (nodes, weights) = gauss_legendre(m)?;
    Ok(GaussPanel { nodes, weights }.integrate(f, a, b))
}

/// Cached Gauss-Legendre rule for repeated panel integration.
#[derive(Debug, Clone)]
pub struct GaussPanel {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussPanel {
    pub fn new(m: usize) -> Result<Self> {
        let (nodes, weights) = gauss_legendre(m)?;
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f(mid + half * s))
            .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn legendre_trivial_values() {
        assert_eq!(legendre_eval(0, 0.37), (1.0, 0.0));
        assert_eq!(legendre_eval(2, 1.0).0, 1.0);
        assert_eq!(legendre_eval(2, 0.0).0, -0.5);
        // L_3'(1) = k(k+1)/2
        assert!(close(legendre_eval(3, 1.0).1, 6.0, 1e-14));
    }

    #[test]
    fn legendre_batch_matches_scalar() {
        let mut v = [0.0; 8];
        let mut d = [0.0; 8];
        legendre_values_and_derivatives(-0.3, &mut v, &mut d);
        for m in 0..8 {
            let (pv, pd) = legendre_eval(m, -0.3);
            assert!(close(v[m], pv, 1e-15) && close(d[m], pd, 1e-14));
        }
    }

    #[test]
    fn legendre_antiderivative() {
        // ∫_{-1}^{0} s ds = -1/2 and ∫_{-1}^{1} L_m = 0 for m > 0
        assert!(close(legendre_integral(1, 0.0), -0.5, 1e-15));
        for m in 1..6 {
            assert!(legendre_integral(m, 1.0).abs() < 1e-15);
        }
        assert_eq!(legendre_integral(0, 1.0), 2.0);
    }

    #[test]
    fn gauss_order_one() {
        let r = make_rule(RuleKind::Gauss, 1).unwrap();
        assert_eq!(r.points(), &[-1.0, 0.0, 1.0]);
        assert!(close(r.weights()[1], 2.0, 1e-15));
        assert_eq!((r.weights()[0], r.weights()[2]), (0.0, 0.0));
    }

    #[test]
    fn radau_order_one() {
        let r = make_rule(RuleKind::RadauRight, 1).unwrap();
        let expect_p = [-1.0, -1.0 / 3.0, 1.0];
        let expect_w = [0.0, 1.5, 0.5];
        for j in 0..3 {
            assert!(close(r.points()[j], expect_p[j], 1e-15));
            assert!(close(r.weights()[j], expect_w[j], 1e-14));
        }
        let l = make_rule(RuleKind::RadauLeft, 1).unwrap();
        let expect_p = [-1.0, 1.0 / 3.0, 1.0];
        let expect_w = [0.5, 1.5, 0.0];
        for j in 0..3 {
            assert!(close(l.points()[j], expect_p[j], 1e-15));
            assert!(close(l.weights()[j], expect_w[j], 1e-14));
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(matches!(
            make_rule(RuleKind::Gauss, 0),
            Err(Error::InvalidConfig(_))
        ));
        assert!(make_rule(RuleKind::RadauLeft, 13).is_err());
    }

    #[test]
    fn all_orders_satisfy_invariants() {
        for k in 1..=12 {
            for kind in RuleKind::ALL {
                let r = make_rule(kind, k).unwrap();
                let p = r.points();
                let w = r.weights();
                assert_eq!(p.len(), k + 2);
                assert!(p.windows(2).all(|s| s[0] < s[1]));
                assert!(close(w.iter().sum::<f64>(), 2.0, 1e-13), "{kind:?} {k}");
                for j in 1..=k {
                    assert!(kind.residual(k, p[j]).abs() < 1e-13, "{kind:?} {k} {j}");
                    assert!(w[j] > 0.0);
                }
                match kind {
                    RuleKind::Gauss => assert!(w[0] == 0.0 && w[k + 1] == 0.0),
                    RuleKind::RadauRight => assert!(w[0] == 0.0 && w[k + 1] > 0.0),
                    RuleKind::RadauLeft => assert!(w[k + 1] == 0.0 && w[0] > 0.0),
                }
            }
        }
    }

    #[test]
    fn panel_examples() {
        assert!(close(integrate_panel(|s| s * s, -1.0, 1.0, 2).unwrap(), 2.0 / 3.0, 1e-15));
        assert!(close(integrate_panel(|_| 1.0, 0.0, 2.0 * PI, 1).unwrap(), 2.0 * PI, 1e-15));
        let quartic = integrate_panel(|s| s.powi(4), -1.0, 1.0, 2).unwrap();
        assert!(close(quartic, 2.0 / 9.0, 1e-15));
        assert!((quartic - 0.4).abs() > 0.1);
        assert!(integrate_panel(|s| s, 1.0, 1.0, 3).is_err());
    }
}
