//! Element meshes, control-volume partitions and the flux coefficient `α`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quadrule::{make_rule, QuadratureRule, RuleKind};
use crate::{check_order, Error, Result};

/// Interface values of `α` this close to zero are treated as exactly zero.
pub const ALPHA_ZERO_SNAP: f64 = 1e-14;

/// Largest allowed ratio between the longest and shortest element.
pub const MAX_ELEMENT_RATIO: f64 = 10.0;

/// Periodic 1D mesh given by its breakpoints `x_{1/2} < … < x_{N+1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    breakpoints: Vec<f64>,
}

impl Mesh1D {
    /// Validates an arbitrary breakpoint list (strictly increasing, shape-regular).
    pub fn from_breakpoints(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidConfig("a mesh needs at least one element"));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidConfig("breakpoints must be strictly increasing"));
        }
        let sizes = breakpoints.windows(2).map(|w| w[1] - w[0]);
        let (lo, hi) = sizes.fold((f64::INFINITY, 0.0_f64), |(lo, hi), h| (lo.min(h), hi.max(h)));
        if hi / lo > MAX_ELEMENT_RATIO {
            return Err(Error::InvalidConfig("element size ratio exceeds 10"));
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        self.breakpoints[self.len()]
    }

    pub fn left(&self, i: usize) -> f64 {
        self.breakpoints[i]
    }

    pub fn right(&self, i: usize) -> f64 {
        self.breakpoints[i + 1]
    }

    pub fn size(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.breakpoints[i] + self.breakpoints[i + 1])
    }

    pub fn sizes(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_size(&self) -> f64 {
        self.sizes().fold(0.0, f64::max)
    }

    /// Physical coordinate of reference point `s` in element `i`.
    pub fn to_physical(&self, i: usize, s: f64) -> f64 {
        0.5 * self.size(i) * s + self.center(i)
    }

    pub fn to_reference(&self, i: usize, x: f64) -> f64 {
        2.0 * (x - self.center(i)) / self.size(i)
    }

    /// Element whose closed interval contains `x`, preferring the right
    /// neighbour at interior breakpoints.
    pub(crate) fn locate(&self, x: f64) -> usize {
        let n = self.len();
        match self.breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(j) => j.min(n - 1),
            Err(j) => j.saturating_sub(1).min(n - 1),
        }
    }
}

/// Uniform mesh of `[0, 2π]` with interior breakpoints jittered by at most
/// `perturbation * 2π/n`, reproducible from `seed`.
pub fn build_mesh(n: usize, perturbation: f64, seed: u64) -> Result<Mesh1D> {
    if n < 2 {
        return Err(Error::InvalidConfig("mesh needs at least two elements"));
    }
    if !(0.0..0.4).contains(&perturbation) {
        return Err(Error::InvalidConfig("perturbation must lie in [0, 0.4)"));
    }
    let h = TAU / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut breakpoints: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
    breakpoints[n] = TAU;
    if perturbation > 0.0 {
        for x in &mut breakpoints[1..n] {
            *x += perturbation * h * rng.gen_range(-1.0..=1.0);
        }
    }
    Mesh1D::from_breakpoints(breakpoints)
}

/// Sign class of an element from the coefficient at its two ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaClass {
    /// `α > 0` at both ends.
    Positive,
    /// `α < 0` at both ends.
    Negative,
    /// Everything else, including a zero end value.
    Mixed,
}

#[derive(Clone)]
pub struct FluxCoefficient {
    alpha: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    interface_values: Vec<f64>,
}

impl fmt::Debug for FluxCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FluxCoefficient")
            .field("interface_values", &self.interface_values)
            .finish_non_exhaustive()
    }
}

fn snap(v: f64) -> f64 {
    if v.abs() <= ALPHA_ZERO_SNAP {
        0.0
    } else {
        v
    }
}

impl FluxCoefficient {
    /// Caches `α(x_{i+1/2})` for every interface of the periodic mesh.
    /// Interface `i` is the right end of element `i`; the last one doubles as
    /// `x_{1/2}`.
    pub fn new(alpha: impl Fn(f64) -> f64 + Send + Sync + 'static, mesh: &Mesh1D) -> Self {
        let alpha: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(alpha);
        let interface_values = (0..mesh.len()).map(|i| snap(alpha(mesh.right(i)))).collect();
        Self {
            alpha,
            interface_values,
        }
    }

    pub fn constant(value: f64, mesh: &Mesh1D) -> Self {
        Self::new(move |_| value, mesh)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.alpha)(x)
    }

    pub fn function(&self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        Arc::clone(&self.alpha)
    }

    pub fn interface_count(&self) -> usize {
        self.interface_values.len()
    }

    /// Snapped `α(x_{i+1/2})`.
    pub fn interface_value(&self, i: usize) -> f64 {
        self.interface_values[i]
    }

    pub fn interface_values(&self) -> &[f64] {
        &self.interface_values
    }

    /// `α` at the left end of element `i` (periodic).
    pub fn left_value(&self, i: usize) -> f64 {
        let n = self.interface_values.len();
        self.interface_values[(i + n - 1) % n]
    }

    /// `α` at the right end of element `i`.
    pub fn right_value(&self, i: usize) -> f64 {
        self.interface_values[i]
    }

    /// True when the upwind flux at interface `i` takes the left trace.
    pub fn upwinds_from_left(&self, i: usize) -> bool {
        self.interface_values[i] > 0.0
    }

    pub fn omega_class(&self, i: usize) -> OmegaClass {
        let (l, r) = (self.left_value(i), self.right_value(i));
        if l > 0.0 && r > 0.0 {
            OmegaClass::Positive
        } else if l < 0.0 && r < 0.0 {
            OmegaClass::Negative
        } else {
            OmegaClass::Mixed
        }
    }
}

/// Sign classes of all elements.
pub fn classify_elements(mesh: &Mesh1D, coeff: &FluxCoefficient) -> Vec<OmegaClass> {
    debug_assert_eq!(mesh.len(), coeff.interface_count());
    (0..mesh.len()).map(|i| coeff.omega_class(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SvVariant {
    /// Gauss-Legendre partition points everywhere.
    Lsv,
    /// Radau partition points chosen by the upwind direction.
    Rsv,
}

/// Radau family used by RSV on elements outside `Ω₁ ∪ Ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    RadauRight,
    RadauLeft,
    /// Follow the sign of `α` at the nonzero end; right Radau when `α`
    /// changes sign or vanishes at both ends.
    #[default]
    Sign,
}

impl From<TieBreak> for RuleKind {
    fn from(t: TieBreak) -> Self {
        match t {
            TieBreak::RadauRight => RuleKind::RadauRight,
            TieBreak::RadauLeft => RuleKind::RadauLeft,
            TieBreak::Sign => RuleKind::RadauRight,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementPartition {
    pub kind: RuleKind,
    pub omega: OmegaClass,
    /// `x_{i,0} … x_{i,k+1}`.
    pub points: Vec<f64>,
    /// `A_{i,j} = (h_i / 2) A_j`.
    pub weights: Vec<f64>,
}

/// Per-element control-volume partition.
#[derive(Debug, Clone)]
pub struct Partition {
    mesh: Arc<Mesh1D>,
    k: usize,
    variant: SvVariant,
    rules: [QuadratureRule; 3],
    elements: Vec<ElementPartition>,
}

pub fn build_partition(
    mesh: &Arc<Mesh1D>,
    k: usize,
    variant: SvVariant,
    coeff: &FluxCoefficient,
    tie_break: TieBreak,
) -> Result<Partition> {
    check_order(k)?;
    if coeff.interface_count() != mesh.len() {
        return Err(Error::Mismatch("coefficient cached on a different mesh"));
    }
    let rules = [
        make_rule(RuleKind::Gauss, k)?,
        make_rule(RuleKind::RadauRight, k)?,
        make_rule(RuleKind::RadauLeft, k)?,
    ];
    let elements = (0..mesh.len())
        .map(|i| {
            let omega = coeff.omega_class(i);
            let kind = match (variant, omega) {
                (SvVariant::Lsv, _) => RuleKind::Gauss,
                (SvVariant::Rsv, OmegaClass::Positive) => RuleKind::RadauRight,
                (SvVariant::Rsv, OmegaClass::Negative) => RuleKind::RadauLeft,
                (SvVariant::Rsv, OmegaClass::Mixed) => match tie_break {
                    TieBreak::Sign => {
                        let (l, r) = (coeff.left_value(i), coeff.right_value(i));
                        if l <= 0.0 && r <= 0.0 && l + r < 0.0 {
                            RuleKind::RadauLeft
                        } else {
                            RuleKind::RadauRight
                        }
                    }
                    fixed => fixed.into(),
                },
            };
            let rule = &rules[kind.index()];
            let half = 0.5 * mesh.size(i);
            let mut points: Vec<f64> = rule.points().iter().map(|&s| mesh.to_physical(i, s)).collect();
            // endpoints exactly equal to the breakpoints
            points[0] = mesh.left(i);
            points[k + 1] = mesh.right(i);
            let weights = rule.weights().iter().map(|&a| half * a).collect();
            ElementPartition {
                kind,
                omega,
                points,
                weights,
            }
        })
        .collect();
    Ok(Partition {
        mesh: Arc::clone(mesh),
        k,
        variant,
        rules,
        elements,
    })
}

impl Partition {
    pub fn mesh(&self) -> &Arc<Mesh1D> {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn variant(&self) -> SvVariant {
        self.variant
    }

    pub fn rule(&self, kind: RuleKind) -> &QuadratureRule {
        &self.rules[kind.index()]
    }

    pub fn element(&self, i: usize) -> &ElementPartition {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[ElementPartition] {
        &self.elements
    }

    /// Reference points `s_0 … s_{k+1}` used by element `i`.
    pub fn reference_points(&self, i: usize) -> &[f64] {
        self.rule(self.elements[i].kind).points()
    }
}
