//! Broken polynomials in a Legendre modal basis.
//!
//! On element `i` a [`PiecewisePoly`] is `Σ_m c_{i,m} L_m(ŝ)` with `ŝ` the
//! reference coordinate of the element. Modal storage keeps the element mass
//! matrix diagonal and makes the cell average equal to `c_{i,0}`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is in the build graph
use num_traits::Float;

use crate::linalg::Lu;
use crate::meshpart::{FluxCoefficient, Mesh1D, Partition};
use crate::quadrule::{legendre_integral, legendre_values, legendre_values_and_derivatives, GaussPanel};
use crate::{Error, Result, MAX_ORDER};

/// Tolerance for snapping a coordinate onto the domain ends.
const DOMAIN_TOL: f64 = 1e-12;

/// Samples per element for the discrete maximum norm.
pub const LINF_SAMPLES: usize = 21;

/// Which trace to take when a point is a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Limit from the element on the left.
    Left,
    /// Limit from the element on the right.
    Right,
    /// Point strictly inside an element.
    Interior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    mesh: Arc<Mesh1D>,
    k: usize,
    coeffs: Vec<f64>,
}

impl PiecewisePoly {
    pub fn zeros(mesh: &Arc<Mesh1D>, k: usize) -> Self {
        Self {
            mesh: Arc::clone(mesh),
            k,
            coeffs: vec![0.0; mesh.len() * (k + 1)],
        }
    }

    pub fn constant(mesh: &Arc<Mesh1D>, k: usize, value: f64) -> Self {
        let mut u = Self::zeros(mesh, k);
        for i in 0..mesh.len() {
            u.coeffs[i * (k + 1)] = value;
        }
        u
    }

    /// Wraps an `N × (k+1)` row-major coefficient array.
    pub fn from_coeffs(mesh: &Arc<Mesh1D>, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if k > MAX_ORDER {
            return Err(Error::InvalidConfig("polynomial order must lie in 0..=12"));
        }
        if coeffs.len() != mesh.len() * (k + 1) {
            return Err(Error::Mismatch("coefficient array shape"));
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            k,
            coeffs,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh1D> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn element(&self, i: usize) -> &[f64] {
        let n = self.k + 1;
        &self.coeffs[i * n..(i + 1) * n]
    }

    pub fn element_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.k + 1;
        &mut self.coeffs[i * n..(i + 1) * n]
    }

    pub fn same_space(&self, other: &PiecewisePoly) -> bool {
        self.k == other.k && (Arc::ptr_eq(&self.mesh, &other.mesh) || self.mesh == other.mesh)
    }

    /// Value on element `i` at reference coordinate `s`.
    pub fn value_at(&self, i: usize, s: f64) -> f64 {
        let mut basis = [0.0; MAX_ORDER + 1];
        let basis = &mut basis[..=self.k];
        legendre_values(s, basis);
        dot(self.element(i), basis)
    }

    /// Physical derivative on element `i` at reference coordinate `s`.
    pub fn derivative_at(&self, i: usize, s: f64) -> f64 {
        let mut v = [0.0; MAX_ORDER + 1];
        let mut d = [0.0; MAX_ORDER + 1];
        legendre_values_and_derivatives(s, &mut v[..=self.k], &mut d[..=self.k]);
        2.0 / self.mesh.size(i) * dot(self.element(i), &d[..=self.k])
    }

    /// `u⁻` at the right end of element `i`.
    pub fn right_trace(&self, i: usize) -> f64 {
        self.element(i).iter().sum()
    }

    /// `u⁺` at the left end of element `i`.
    pub fn left_trace(&self, i: usize) -> f64 {
        self.element(i)
            .iter()
            .enumerate()
            .map(|(m, c)| if m % 2 == 0 { *c } else { -*c })
            .sum()
    }

    /// `∫` of element `i` between reference coordinates `a` and `b`.
    pub fn integral_on(&self, i: usize, a: f64, b: f64) -> f64 {
        let sum: f64 = self
            .element(i)
            .iter()
            .enumerate()
            .map(|(m, c)| c * (legendre_integral(m, b) - legendre_integral(m, a)))
            .sum();
        0.5 * self.mesh.size(i) * sum
    }

    /// `Σ_i h_i c_{i,0}`, the integral over the whole domain.
    pub fn mass(&self) -> f64 {
        self.mesh
            .sizes()
            .enumerate()
            .map(|(i, h)| h * self.coeffs[i * (self.k + 1)])
            .sum()
    }

    /// Value at `x` with the requested trace at breakpoints.
    pub fn eval(&self, x: f64, side: Side) -> Result<f64> {
        let (i, s) = self.resolve(x, side)?;
        Ok(self.value_at(i, s))
    }

    /// Physical derivative at `x`; traces as in [`Self::eval`].
    pub fn eval_derivative(&self, x: f64, side: Side) -> Result<f64> {
        let (i, s) = self.resolve(x, side)?;
        Ok(self.derivative_at(i, s))
    }

    fn resolve(&self, x: f64, side: Side) -> Result<(usize, f64)> {
        let mesh = &*self.mesh;
        let n = mesh.len();
        let (start, end) = (mesh.start(), mesh.end());
        if !(x >= start - DOMAIN_TOL && x <= end + DOMAIN_TOL) {
            return Err(Error::OutOfDomain { x });
        }
        let x = x.clamp(start, end);
        match mesh.breakpoints().binary_search_by(|b| b.total_cmp(&x)) {
            Ok(j) => match side {
                Side::Left => Ok(((j + n - 1) % n, 1.0)),
                Side::Right => Ok((j % n, -1.0)),
                Side::Interior => Err(Error::AmbiguousTrace { x }),
            },
            Err(_) => {
                let i = mesh.locate(x);
                Ok((i, mesh.to_reference(i, x)))
            }
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &PiecewisePoly) {
        debug_assert!(self.same_space(other));
        for (y, x) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *y += a * x;
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= a);
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `self - other`.
    pub fn difference(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        if !self.same_space(other) {
            return Err(Error::Mismatch("polynomials live on different spaces"));
        }
        let mut d = self.clone();
        d.axpy(-1.0, other);
        Ok(d)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cell averages `c_{i,0}`.
pub fn cell_averages(u: &PiecewisePoly) -> Vec<f64> {
    (0..u.mesh.len()).map(|i| u.element(i)[0]).collect()
}

/// Lagrange interpolation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpKind {
    /// Nodes `x_{i,1} … x_{i,k+1}`.
    Minus,
    /// Nodes `x_{i,0} … x_{i,k}`.
    Plus,
    /// Both element ends and `x_{i,1} … x_{i,k-1}`.
    PlusMinus,
    /// Per-element choice from the upwind direction at both ends.
    Auto,
}

/// Node set of the automatic interpolant on element `i`.
///
/// Every interface trace the upwind flux reads is an interpolation node: a
/// zero left value falls to `PlusMinus` because the flux there takes `u⁺`,
/// while a zero right value keeps `Minus` since `u⁺` comes from the neighbour.
pub fn auto_kind(coeff: &FluxCoefficient, i: usize) -> InterpKind {
    let (l, r) = (coeff.left_value(i), coeff.right_value(i));
    if l > 0.0 && r >= 0.0 {
        InterpKind::Minus
    } else if l <= 0.0 && r < 0.0 {
        InterpKind::Plus
    } else {
        InterpKind::PlusMinus
    }
}

/// Indices into `x_{i,0} … x_{i,k+1}` used by an interpolation kind.
pub fn node_indices(kind: InterpKind, k: usize) -> Vec<usize> {
    match kind {
        InterpKind::Minus => (1..=k + 1).collect(),
        InterpKind::Plus => (0..=k).collect(),
        InterpKind::PlusMinus => core::iter::once(0)
            .chain(1..k)
            .chain(core::iter::once(k + 1))
            .collect(),
        InterpKind::Auto => panic!("automatic interpolation has no fixed node set"),
    }
}

fn resolve_kind(kind: InterpKind, coeff: &FluxCoefficient, i: usize) -> InterpKind {
    match kind {
        InterpKind::Auto => auto_kind(coeff, i),
        other => other,
    }
}

/// Reference-coordinate interpolation nodes `y_{i,·}` used on element `i`.
pub fn interpolation_nodes(
    partition: &Partition,
    kind: InterpKind,
    coeff: &FluxCoefficient,
    i: usize,
) -> Vec<f64> {
    let resolved = resolve_kind(kind, coeff, i);
    let s = partition.reference_points(i);
    node_indices(resolved, partition.order())
        .into_iter()
        .map(|j| s[j])
        .collect()
}

/// Modal coefficients from values at `k+1` reference nodes.
pub struct NodalToModal {
    lu: Lu,
}

impl NodalToModal {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        for a in 0..n {
            for b in a + 1..n {
                if (nodes[a] - nodes[b]).abs() < 1e-13 {
                    return Err(Error::DegenerateNodes);
                }
            }
        }
        let mut vandermonde = vec![0.0; n * n];
        for (row, &s) in nodes.iter().enumerate() {
            legendre_values(s, &mut vandermonde[row * n..(row + 1) * n]);
        }
        Ok(Self {
            lu: Lu::new(n, vandermonde)?,
        })
    }

    /// Overwrites nodal values with modal coefficients.
    pub fn apply(&self, values: &mut [f64]) {
        self.lu.solve_in_place(values);
    }
}

/// Lagrange interpolant of `f` on the partition's nodes.
pub fn interpolate(
    f: impl Fn(f64) -> f64,
    partition: &Partition,
    kind: InterpKind,
    coeff: &FluxCoefficient,
) -> Result<PiecewisePoly> {
    let mesh = partition.mesh();
    let k = partition.order();
    // one factorization per (rule kind, node set)
    let mut cache: [Option<NodalToModal>; 9] = Default::default();
    let mut u = PiecewisePoly::zeros(mesh, k);
    for i in 0..mesh.len() {
        let resolved = resolve_kind(kind, coeff, i);
        let slot = partition.element(i).kind.index() * 3
            + match resolved {
                InterpKind::Minus => 0,
                InterpKind::Plus => 1,
                _ => 2,
            };
        if cache[slot].is_none() {
            cache[slot] = Some(NodalToModal::new(&interpolation_nodes(partition, resolved, coeff, i))?);
        }
        let points = &partition.element(i).points;
        let c = u.element_mut(i);
        for (slot_value, j) in c.iter_mut().zip(node_indices(resolved, k)) {
            *slot_value = f(points[j]);
        }
        cache[slot].as_ref().unwrap().apply(c);
    }
    Ok(u)
}

/// Piecewise-constant image of `w` under `T`, one value per control volume.
#[derive(Debug, Clone, PartialEq)]
pub struct TTransformResult {
    k: usize,
    values: Vec<f64>,
}

impl TTransformResult {
    /// `w*_{i,0} … w*_{i,k}`.
    pub fn element(&self, i: usize) -> &[f64] {
        &self.values[i * (self.k + 1)..(i + 1) * (self.k + 1)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Applies `T`: `w*_{i,0} = w⁺_{i-1/2} + A_{i,0} w_x(x_{i,0})`,
/// `w*_{i,j} = w*_{i,j-1} + A_{i,j} w_x(x_{i,j})`.
pub fn t_transform(w: &PiecewisePoly, partition: &Partition) -> Result<TTransformResult> {
    let k = partition.order();
    if w.degree() != k || w.mesh().len() != partition.mesh().len() {
        return Err(Error::Mismatch("polynomial and partition differ"));
    }
    let mut values = Vec::with_capacity(w.mesh().len() * (k + 1));
    for i in 0..w.mesh().len() {
        let s = partition.reference_points(i);
        let weights = &partition.element(i).weights;
        let mut acc = w.left_trace(i);
        for j in 0..=k {
            acc += weights[j] * w.derivative_at(i, s[j]);
            values.push(acc);
        }
    }
    Ok(TTransformResult { k, values })
}

/// `Σ_i (v, Tv)_i`, the square of the triple norm.
pub fn triple_norm_squared(v: &PiecewisePoly, partition: &Partition) -> Result<f64> {
    let tv = t_transform(v, partition)?;
    Ok((0..v.mesh().len())
        .map(|i| {
            let s = partition.reference_points(i);
            tv.element(i)
                .iter()
                .enumerate()
                .map(|(j, w)| w * v.integral_on(i, s[j], s[j + 1]))
                .sum::<f64>()
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    Linf,
}

/// Broken L2 norm of `g(i, s, x)` using `points` Gauss nodes per element.
pub fn broken_l2(mesh: &Mesh1D, points: usize, g: impl Fn(usize, f64, f64) -> f64) -> f64 {
    let panel = GaussPanel::new(points).expect("panel size is positive");
    let sum: f64 = (0..mesh.len())
        .map(|i| {
            let half = 0.5 * mesh.size(i);
            half * panel
                .nodes
                .iter()
                .zip(&panel.weights)
                .map(|(&s, &w)| {
                    let v = g(i, s, mesh.to_physical(i, s));
                    w * v * v
                })
                .sum::<f64>()
        })
        .sum();
    sum.sqrt()
}

/// Maximum of `|g(i, s, x)|` over equispaced samples including both element ends.
pub fn broken_linf(mesh: &Mesh1D, g: impl Fn(usize, f64, f64) -> f64) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..mesh.len() {
        for p in 0..LINF_SAMPLES {
            let s = -1.0 + 2.0 * p as f64 / (LINF_SAMPLES - 1) as f64;
            max = max.max(g(i, s, mesh.to_physical(i, s)).abs());
        }
    }
    max
}

pub fn broken_norm(u: &PiecewisePoly, p: Norm) -> f64 {
    broken_error(u, |_| 0.0, p)
}

/// `‖u - f‖` in the broken norm `p`.
pub fn broken_error(u: &PiecewisePoly, f: impl Fn(f64) -> f64, p: Norm) -> f64 {
    let g = |i: usize, s: f64, x: f64| u.value_at(i, s) - f(x);
    match p {
        Norm::L2 => broken_l2(u.mesh(), u.degree() + 3, g),
        Norm::Linf => broken_linf(u.mesh(), g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshpart::{build_mesh, build_partition, SvVariant, TieBreak};
    use crate::quadrule::RuleKind;
    use core::f64::consts::{PI, TAU};

    fn mesh(n: usize) -> Arc<Mesh1D> {
        Arc::new(build_mesh(n, 0.0, 0).unwrap())
    }

    #[test]
    fn eval_constant_any_side() {
        let m = mesh(4);
        let u = PiecewisePoly::constant(&m, 3, 5.0);
        assert_eq!(u.eval(1.0, Side::Interior).unwrap(), 5.0);
        assert_eq!(u.eval(PI, Side::Left).unwrap(), 5.0);
        assert_eq!(u.eval(0.0, Side::Left).unwrap(), 5.0);
        assert_eq!(u.eval(TAU, Side::Right).unwrap(), 5.0);
    }

    #[test]
    fn eval_linear_mode() {
        let m = mesh(2);
        let mut u = PiecewisePoly::zeros(&m, 2);
        u.element_mut(0)[1] = 1.0;
        assert!((u.eval(PI, Side::Left).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(u.eval(PI, Side::Right).unwrap(), 0.0);
        let d = u.eval_derivative(PI / 2.0, Side::Interior).unwrap();
        assert!((d - 2.0 / PI).abs() < 1e-15);
        // periodic wrap: left trace at 0 is the last element
        assert_eq!(u.eval(0.0, Side::Left).unwrap(), 0.0);
        assert!((u.eval(TAU, Side::Right).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let m = mesh(2);
        let u = PiecewisePoly::zeros(&m, 1);
        assert!(matches!(u.eval(-0.1, Side::Right), Err(Error::OutOfDomain { .. })));
        assert!(matches!(u.eval(7.0, Side::Left), Err(Error::OutOfDomain { .. })));
        assert!(matches!(u.eval(PI, Side::Interior), Err(Error::AmbiguousTrace { .. })));
        assert!(u.eval(TAU + 1e-13, Side::Left).is_ok());
    }

    #[test]
    fn norms_of_simple_fields() {
        let m = mesh(4);
        let one = PiecewisePoly::constant(&m, 2, 1.0);
        assert!((broken_norm(&one, Norm::L2) - TAU.sqrt()).abs() < 1e-14);
        let neg = PiecewisePoly::constant(&m, 2, -3.0);
        assert_eq!(broken_norm(&neg, Norm::Linf), 3.0);
        let unit = Arc::new(Mesh1D::from_breakpoints(vec![-1.0, 1.0]).unwrap());
        let l1 = PiecewisePoly::from_coeffs(&unit, 1, vec![0.0, 1.0]).unwrap();
        assert!((broken_norm(&l1, Norm::L2) - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn averages() {
        let m = mesh(3);
        assert_eq!(cell_averages(&PiecewisePoly::constant(&m, 2, 4.0)), [4.0; 3]);
        let mut u = PiecewisePoly::zeros(&m, 2);
        for i in 0..3 {
            u.element_mut(i)[1] = 1.0;
        }
        assert_eq!(cell_averages(&u), [0.0; 3]);
        for i in 0..3 {
            u.element_mut(i)[0] = (i + 1) as f64;
        }
        assert_eq!(cell_averages(&u), [1.0, 2.0, 3.0]);
        // average from direct integration matches c_{i,0}
        let h = m.size(1);
        assert!((u.integral_on(1, -1.0, 1.0) / h - 2.0).abs() < 1e-15);
    }

    #[test]
    fn auto_kinds_for_sin() {
        let m = mesh(8);
        let c = FluxCoefficient::new(|x: f64| x.sin(), &m);
        assert_eq!(auto_kind(&c, 1), InterpKind::Minus);
        assert_eq!(auto_kind(&c, 5), InterpKind::Plus);
        assert_eq!(auto_kind(&c, 0), InterpKind::PlusMinus);
        // [π, 5π/4]: α = 0 on the left, negative on the right
        assert_eq!(auto_kind(&c, 4), InterpKind::Plus);
        // [3π/4, π]: positive on the left, zero on the right
        assert_eq!(auto_kind(&c, 3), InterpKind::Minus);
        assert_eq!(auto_kind(&c, 7), InterpKind::PlusMinus);
    }

    #[test]
    fn node_sets() {
        assert_eq!(node_indices(InterpKind::Minus, 2), [1, 2, 3]);
        assert_eq!(node_indices(InterpKind::Plus, 2), [0, 1, 2]);
        assert_eq!(node_indices(InterpKind::PlusMinus, 1), [0, 2]);
        assert_eq!(node_indices(InterpKind::PlusMinus, 3), [0, 1, 2, 4]);
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let m = Arc::new(build_mesh(6, 0.25, 3).unwrap());
        let c = FluxCoefficient::new(|x: f64| x.sin(), &m);
        for k in 1..=5 {
            let p = build_partition(&m, k, SvVariant::Rsv, &c, TieBreak::RadauRight).unwrap();
            let f = |x: f64| (0..=k).map(|d| (0.3 * x - 1.0).powi(d as i32)).sum::<f64>();
            for kind in [InterpKind::Minus, InterpKind::Plus, InterpKind::PlusMinus, InterpKind::Auto] {
                let u = interpolate(f, &p, kind, &c).unwrap();
                let err = broken_error(&u, f, Norm::Linf);
                assert!(err < 1e-12 * 10.0, "k={k} {kind:?} err={err}");
            }
        }
    }

    #[test]
    fn t_transform_of_constant() {
        let m = mesh(5);
        let c = FluxCoefficient::new(|x: f64| x.cos(), &m);
        let p = build_partition(&m, 3, SvVariant::Rsv, &c, TieBreak::RadauLeft).unwrap();
        let w = PiecewisePoly::constant(&m, 3, 2.5);
        let t = t_transform(&w, &p).unwrap();
        assert!(t.values().iter().all(|&v| v == 2.5));
    }

    #[test]
    fn gauss_endpoint_identities() {
        let m = mesh(4);
        let c = FluxCoefficient::constant(1.0, &m);
        let p = build_partition(&m, 3, SvVariant::Lsv, &c, TieBreak::RadauRight).unwrap();
        assert_eq!(p.element(0).kind, RuleKind::Gauss);
        let coeffs = (0..16).map(|j| ((j * 7 % 5) as f64 - 2.0) * 0.3).collect();
        let w = PiecewisePoly::from_coeffs(&m, 3, coeffs).unwrap();
        let t = t_transform(&w, &p).unwrap();
        for i in 0..4 {
            assert!((t.element(i)[0] - w.left_trace(i)).abs() < 1e-13);
            assert!((t.element(i)[3] - w.right_trace(i)).abs() < 1e-13);
        }
    }
}
