//! Error functionals for convergence and superconvergence studies.
//!
//! Node-based functionals use the root-mean-square form
//! `sqrt((1/N) Σ_i Σ_j (…)²)`: the inner sum over the nodes of an element is
//! not normalized, only the element count is.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // redundant when std is in the build graph
use num_traits::Float;

use crate::meshpart::{FluxCoefficient, Partition, SvVariant};
use crate::polyfield::{
    broken_error, broken_l2, interpolate, interpolation_nodes, InterpKind, Norm, PiecewisePoly,
};
use crate::quadrule::GaussPanel;
use crate::{Error, Result};

/// Errors at or below this are treated as roundoff by [`convergence_orders`].
pub const ROUNDOFF_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Lsv,
    Rsv,
    Dg,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Lsv => "lsv",
            Scheme::Rsv => "rsv",
            Scheme::Dg => "dg",
        }
    }

    pub fn variant(self) -> Option<SvVariant> {
        match self {
            Scheme::Lsv => Some(SvVariant::Lsv),
            Scheme::Rsv => Some(SvVariant::Rsv),
            Scheme::Dg => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact solution at the evaluation time, with its space derivative.
#[derive(Clone, Copy)]
pub struct ExactField<'a> {
    pub value: &'a dyn Fn(f64) -> f64,
    pub derivative: &'a dyn Fn(f64) -> f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxErrors {
    /// `‖α u_h - α I_h u‖_0`.
    pub e_f: f64,
    /// Cell averages of `α(u - u_h)`.
    pub e_f_c: f64,
    /// `α(u - u_h)` at the interpolation nodes.
    pub e_f_r: f64,
    /// `α(u - û_h)` at the interfaces.
    pub e_f_n: f64,
    /// `α ∂_x(u - u_h)` at the derivative points.
    pub e_f_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolutionErrors {
    /// `‖u_h - I_h u‖_0`.
    pub e_u: f64,
    pub e_u_c: f64,
    pub e_u_r: f64,
    pub e_u_n: f64,
    /// `(u - u_h)` at the derivative points.
    pub e_u_l_val: f64,
    /// `∂_x(u - u_h)` at the derivative points.
    pub e_u_l_der: f64,
}

/// Differences between an SV and a DG solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComparisonErrors {
    pub e_0: f64,
    pub e_f_c: f64,
    pub e_u_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub scheme: Scheme,
    pub k: usize,
    pub n: usize,
    pub t_final: f64,
    pub l2_error: f64,
    pub linf_error: f64,
    pub flux: Option<FluxErrors>,
    pub solution: Option<SolutionErrors>,
    pub comparison: Option<ComparisonErrors>,
}

impl ErrorReport {
    /// `(metric name, value)` pairs in a fixed order.
    pub fn metrics(&self) -> Vec<(&'static str, f64)> {
        let mut out = alloc::vec![("l2", self.l2_error), ("linf", self.linf_error)];
        if let Some(f) = &self.flux {
            out.extend([
                ("e_f", f.e_f),
                ("e_f_c", f.e_f_c),
                ("e_f_r", f.e_f_r),
                ("e_f_n", f.e_f_n),
                ("e_f_l", f.e_f_l),
            ]);
        }
        if let Some(s) = &self.solution {
            out.extend([
                ("e_u", s.e_u),
                ("e_u_c", s.e_u_c),
                ("e_u_r", s.e_u_r),
                ("e_u_n", s.e_u_n),
                ("e_u_l_val", s.e_u_l_val),
                ("e_u_l_der", s.e_u_l_der),
            ]);
        }
        if let Some(c) = &self.comparison {
            out.extend([("ebar_0", c.e_0), ("ebar_f_c", c.e_f_c), ("ebar_u_c", c.e_u_c)]);
        }
        out
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics().into_iter().find(|(m, _)| *m == name).map(|(_, v)| v)
    }
}

/// Roots of `d/dx Π_j (x - y_j)`, one inside each gap of `y`.
pub fn z_points(y: &[f64]) -> Vec<f64> {
    let omega_prime = |x: f64| -> f64 {
        (0..y.len())
            .map(|j| {
                y.iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .map(|(_, &yl)| x - yl)
                    .product::<f64>()
            })
            .sum()
    };
    y.windows(2)
        .map(|gap| {
            let (mut a, mut b) = (gap[0], gap[1]);
            let mut fa = omega_prime(a);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if b - a < 1e-13 || mid == a || mid == b {
                    break;
                }
                let fm = omega_prime(mid);
                if fm == 0.0 {
                    return mid;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

fn rms(sum_of_squares: f64, elements: usize) -> f64 {
    (sum_of_squares / elements as f64).sqrt()
}

/// Upwind trace `û_h` at interface `i`.
fn upwind_trace(u: &PiecewisePoly, coeff: &FluxCoefficient, i: usize) -> f64 {
    if coeff.upwinds_from_left(i) {
        u.right_trace(i)
    } else {
        u.left_trace((i + 1) % u.mesh().len())
    }
}

fn check_space(u_h: &PiecewisePoly, partition: &Partition, coeff: &FluxCoefficient) -> Result<()> {
    let n = u_h.mesh().len();
    if u_h.degree() != partition.order()
        || partition.mesh().len() != n
        || coeff.interface_count() != n
    {
        return Err(Error::Mismatch("solution, partition and coefficient differ"));
    }
    Ok(())
}

/// Shared pointwise pass for the flux and solution functionals.
struct Pointwise {
    /// Σ over elements of squared cell averages.
    cell: f64,
    nodes: f64,
    interfaces: f64,
    z_values: f64,
    z_derivs: f64,
}

fn pointwise(
    u_h: &PiecewisePoly,
    exact: ExactField<'_>,
    coeff: &FluxCoefficient,
    partition: &Partition,
    weight: impl Fn(f64) -> f64,
) -> Pointwise {
    let mesh = u_h.mesh();
    let panel = GaussPanel::new(u_h.degree() + 3).expect("panel size is positive");
    let mut acc = Pointwise {
        cell: 0.0,
        nodes: 0.0,
        interfaces: 0.0,
        z_values: 0.0,
        z_derivs: 0.0,
    };
    for i in 0..mesh.len() {
        let average = 0.5
            * panel
                .nodes
                .iter()
                .zip(&panel.weights)
                .map(|(&s, &w)| {
                    let x = mesh.to_physical(i, s);
                    w * weight(x) * ((exact.value)(x) - u_h.value_at(i, s))
                })
                .sum::<f64>();
        acc.cell += average * average;

        let y = interpolation_nodes(partition, InterpKind::Auto, coeff, i);
        for &s in &y {
            let x = mesh.to_physical(i, s);
            let d = weight(x) * ((exact.value)(x) - u_h.value_at(i, s));
            acc.nodes += d * d;
        }
        for s in z_points(&y) {
            let x = mesh.to_physical(i, s);
            let wx = weight(x);
            let dv = wx * ((exact.value)(x) - u_h.value_at(i, s));
            let dd = wx * ((exact.derivative)(x) - u_h.derivative_at(i, s));
            acc.z_values += dv * dv;
            acc.z_derivs += dd * dd;
        }

        let xr = mesh.right(i);
        let d = weight(xr) * ((exact.value)(xr) - upwind_trace(u_h, coeff, i));
        acc.interfaces += d * d;
    }
    acc
}

/// `e_f`, `e_{f,c}`, `e_{f,r}`, `e_{f,n}`, `e_{f,l}` for the flux `α u_h`.
pub fn flux_superconv_errors(
    u_h: &PiecewisePoly,
    exact: ExactField<'_>,
    coeff: &FluxCoefficient,
    partition: &Partition,
) -> Result<FluxErrors> {
    check_space(u_h, partition, coeff)?;
    let n = u_h.mesh().len();
    let interp = interpolate(exact.value, partition, InterpKind::Auto, coeff)?;
    let e_f = broken_l2(u_h.mesh(), u_h.degree() + 3, |i, s, x| {
        coeff.eval(x) * (u_h.value_at(i, s) - interp.value_at(i, s))
    });
    let p = pointwise(u_h, exact, coeff, partition, |x| coeff.eval(x));
    Ok(FluxErrors {
        e_f,
        e_f_c: rms(p.cell, n),
        e_f_r: rms(p.nodes, n),
        e_f_n: rms(p.interfaces, n),
        e_f_l: rms(p.z_derivs, n),
    })
}

/// `e_u`, `e_{u,c}`, `e_{u,r}`, `e_{u,n}` and both variants of `e_{u,l}`.
pub fn solution_superconv_errors(
    u_h: &PiecewisePoly,
    exact: ExactField<'_>,
    partition: &Partition,
    coeff: &FluxCoefficient,
) -> Result<SolutionErrors> {
    check_space(u_h, partition, coeff)?;
    let n = u_h.mesh().len();
    let interp = interpolate(exact.value, partition, InterpKind::Auto, coeff)?;
    let e_u = broken_l2(u_h.mesh(), u_h.degree() + 3, |i, s, _| {
        u_h.value_at(i, s) - interp.value_at(i, s)
    });
    let p = pointwise(u_h, exact, coeff, partition, |_| 1.0);
    Ok(SolutionErrors {
        e_u,
        e_u_c: rms(p.cell, n),
        e_u_r: rms(p.nodes, n),
        e_u_n: rms(p.interfaces, n),
        e_u_l_val: rms(p.z_values, n),
        e_u_l_der: rms(p.z_derivs, n),
    })
}

/// Observed orders `log(e_1/e_2) / log(n_2/n_1)` between consecutive levels.
pub fn convergence_orders(errors: &[(usize, f64)]) -> Result<Vec<f64>> {
    if let Some(&(_, value)) = errors.iter().find(|(_, e)| !(*e > ROUNDOFF_FLOOR)) {
        return Err(Error::DegenerateError { value });
    }
    errors
        .windows(2)
        .map(|w| {
            let ((n1, e1), (n2, e2)) = (w[0], w[1]);
            if n2 <= n1 {
                return Err(Error::InvalidConfig("element counts must increase"));
            }
            Ok((e1 / e2).ln() / (n2 as f64 / n1 as f64).ln())
        })
        .collect()
}

/// `‖u_sv - u_dg‖_0` and the RMS cell-average differences of `α(u_sv - u_dg)`
/// and `u_sv - u_dg`.
pub fn compare_sv_dg(
    u_sv: &PiecewisePoly,
    u_dg: &PiecewisePoly,
    coeff: &FluxCoefficient,
) -> Result<ComparisonErrors> {
    let diff = u_sv.difference(u_dg)?;
    let mesh = diff.mesh();
    let n = mesh.len();
    let e_0 = broken_error(&diff, |_| 0.0, Norm::L2);
    let panel = GaussPanel::new(diff.degree() + 3)?;
    let mut flux = 0.0;
    let mut plain = 0.0;
    for i in 0..n {
        let avg: f64 = 0.5
            * panel
                .nodes
                .iter()
                .zip(&panel.weights)
                .map(|(&s, &w)| w * coeff.eval(mesh.to_physical(i, s)) * diff.value_at(i, s))
                .sum::<f64>();
        flux += avg * avg;
        let c0 = diff.element(i)[0];
        plain += c0 * c0;
    }
    Ok(ComparisonErrors {
        e_0,
        e_f_c: rms(flux, n),
        e_u_c: rms(plain, n),
    })
}
