//! Semi-discrete spectral volume operator.
//!
//! For every control volume `[x_{i,j}, x_{i,j+1}]` the returned time
//! derivative `p` satisfies
//!
//! ```text
//! ∫ p dx = ∫ g dx - (F_{i,j+1} - F_{i,j})
//! ```
//!
//! where `F = α u_h` at the interior faces of an element and the upwind flux
//! at element interfaces. The `k+1` control-volume integrals determine `p` on
//! the element through the [`ControlVolumeMatrix`].

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{condition_number, Lu};
use crate::meshpart::{FluxCoefficient, Partition, SvVariant, TieBreak};
use crate::polyfield::PiecewisePoly;
use crate::quadrule::{legendre_integral, legendre_values, GaussPanel, QuadratureRule, RuleKind};
use crate::{check_order, Error, Result};

/// Upper bound on the condition number of a control-volume matrix.
pub const MAX_CV_CONDITION: f64 = 1e8;

/// Source term `g(x, t)`.
pub type Source<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeConfig {
    pub k: usize,
    pub variant: SvVariant,
    pub tie_break: TieBreak,
    /// Gauss points per control volume for `∫ g`.
    pub source_quad_points: usize,
}

impl SchemeConfig {
    pub fn new(k: usize, variant: SvVariant) -> Self {
        Self {
            k,
            variant,
            tie_break: TieBreak::default(),
            source_quad_points: k + 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.k)?;
        if self.source_quad_points < self.k + 1 {
            return Err(Error::InvalidConfig("source quadrature needs at least k+1 points"));
        }
        Ok(())
    }
}

/// `M_{j,m} = ∫_{s_j}^{s_{j+1}} L_m(s) ds` for one reference partition.
#[derive(Debug, Clone)]
pub struct ControlVolumeMatrix {
    kind: RuleKind,
    k: usize,
    entries: Vec<f64>,
    lu: Lu,
}

impl ControlVolumeMatrix {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Row-major `(k+1) × (k+1)` entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, j: usize, m: usize) -> f64 {
        self.entries[j * (self.k + 1) + m]
    }

    /// Modal coefficients on the reference element from control-volume integrals.
    pub fn solve_in_place(&self, integrals: &mut [f64]) {
        self.lu.solve_in_place(integrals);
    }
}

pub fn cv_matrix(rule: &QuadratureRule) -> Result<ControlVolumeMatrix> {
    let k = rule.order();
    let s = rule.points();
    let n = k + 1;
    let mut entries = vec![0.0; n * n];
    for j in 0..n {
        for m in 0..n {
            entries[j * n + m] = legendre_integral(m, s[j + 1]) - legendre_integral(m, s[j]);
        }
    }
    if condition_number(n, &entries)? >= MAX_CV_CONDITION {
        return Err(Error::SingularMatrix);
    }
    let lu = Lu::new(n, entries.clone())?;
    Ok(ControlVolumeMatrix {
        kind: rule.kind(),
        k,
        entries,
        lu,
    })
}

/// Upwind flux `α û` with `û = u⁻` for `α > 0` and `u⁺` otherwise.
pub fn upwind_flux(alpha: f64, minus: f64, plus: f64) -> f64 {
    if alpha > 0.0 {
        alpha * minus
    } else {
        alpha * plus
    }
}

/// Upwind flux at interface `i`, the right end of element `i` (periodic).
pub fn upwind_interface_flux(u: &PiecewisePoly, coeff: &FluxCoefficient, i: usize) -> f64 {
    let n = u.mesh().len();
    upwind_flux(
        coeff.interface_value(i),
        u.right_trace(i),
        u.left_trace((i + 1) % n),
    )
}

/// Precomputed SV operator for one mesh, partition and coefficient.
pub struct SvOperator {
    config: SchemeConfig,
    partition: Partition,
    coeff: FluxCoefficient,
    matrices: [Option<ControlVolumeMatrix>; 3],
    /// `L_m(s_j)` per rule kind, `(k+2) × (k+1)`.
    basis: [Vec<f64>; 3],
    /// `α(x_{i,j})`, `N × (k+2)`.
    alpha_at_points: Vec<f64>,
    /// Physical source nodes and weights, `N × (k+1) × q`.
    source_nodes: Vec<f64>,
    source_weights: Vec<f64>,
}

impl SvOperator {
    pub fn new(config: SchemeConfig, partition: Partition, coeff: FluxCoefficient) -> Result<Self> {
        config.validate()?;
        let k = config.k;
        if partition.order() != k || partition.variant() != config.variant {
            return Err(Error::Mismatch("partition does not match scheme configuration"));
        }
        let mesh = partition.mesh().clone();
        if coeff.interface_count() != mesh.len() {
            return Err(Error::Mismatch("coefficient cached on a different mesh"));
        }
        let mut matrices: [Option<ControlVolumeMatrix>; 3] = Default::default();
        let mut basis: [Vec<f64>; 3] = Default::default();
        for kind in RuleKind::ALL {
            let rule = partition.rule(kind);
            matrices[kind.index()] = Some(cv_matrix(rule)?);
            let mut table = vec![0.0; (k + 2) * (k + 1)];
            for (j, &s) in rule.points().iter().enumerate() {
                legendre_values(s, &mut table[j * (k + 1)..(j + 1) * (k + 1)]);
            }
            basis[kind.index()] = table;
        }
        let alpha_at_points = partition
            .elements()
            .iter()
            .flat_map(|e| e.points.iter().map(|&x| coeff.eval(x)))
            .collect();
        let panel = GaussPanel::new(config.source_quad_points)?;
        let q = panel.len();
        let mut source_nodes = Vec::with_capacity(mesh.len() * (k + 1) * q);
        let mut source_weights = Vec::with_capacity(mesh.len() * (k + 1) * q);
        for e in partition.elements() {
            for w in e.points.windows(2) {
                let (half, mid) = (0.5 * (w[1] - w[0]), 0.5 * (w[1] + w[0]));
                for (&s, &wt) in panel.nodes.iter().zip(&panel.weights) {
                    source_nodes.push(mid + half * s);
                    source_weights.push(half * wt);
                }
            }
        }
        Ok(Self {
            config,
            partition,
            coeff,
            matrices,
            basis,
            alpha_at_points,
            source_nodes,
            source_weights,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn coefficient(&self) -> &FluxCoefficient {
        &self.coeff
    }

    pub fn matrix(&self, kind: RuleKind) -> &ControlVolumeMatrix {
        self.matrices[kind.index()].as_ref().unwrap()
    }

    pub fn rhs(&self, u: &PiecewisePoly, t: f64, g: Option<Source<'_>>) -> Result<PiecewisePoly> {
        let mut out = PiecewisePoly::zeros(u.mesh(), u.degree());
        self.rhs_into(u, t, g, &mut out)?;
        Ok(out)
    }

    pub fn rhs_into(
        &self,
        u: &PiecewisePoly,
        t: f64,
        g: Option<Source<'_>>,
        out: &mut PiecewisePoly,
    ) -> Result<()> {
        let k = self.config.k;
        let mesh = self.partition.mesh();
        let n = mesh.len();
        if u.degree() != k || u.mesh().len() != n || !out.same_space(u) {
            return Err(Error::Mismatch("state does not match operator"));
        }
        let fluxes: Vec<f64> = (0..n).map(|i| upwind_interface_flux(u, &self.coeff, i)).collect();
        let q = self.config.source_quad_points;
        let mut face = [0.0; crate::MAX_ORDER + 2];
        for i in 0..n {
            let kind = self.partition.element(i).kind;
            let basis = &self.basis[kind.index()];
            let coeffs = u.element(i);
            face[0] = fluxes[(i + n - 1) % n];
            face[k + 1] = fluxes[i];
            for j in 1..=k {
                let value: f64 = coeffs
                    .iter()
                    .zip(&basis[j * (k + 1)..(j + 1) * (k + 1)])
                    .map(|(c, b)| c * b)
                    .sum();
                face[j] = self.alpha_at_points[i * (k + 2) + j] * value;
            }
            let scale = 2.0 / mesh.size(i);
            let target = out.element_mut(i);
            for j in 0..=k {
                let mut b = face[j] - face[j + 1];
                if let Some(g) = g {
                    let base = (i * (k + 1) + j) * q;
                    b += (base..base + q)
                        .map(|p| self.source_weights[p] * g(self.source_nodes[p], t))
                        .sum::<f64>();
                }
                target[j] = scale * b;
            }
            self.matrix(kind).solve_in_place(target);
        }
        Ok(())
    }
}

/// One-shot evaluation of the SV right-hand side.
pub fn sv_rhs(
    u: &PiecewisePoly,
    t: f64,
    config: SchemeConfig,
    partition: &Partition,
    coeff: &FluxCoefficient,
    g: Option<Source<'_>>,
) -> Result<PiecewisePoly> {
    SvOperator::new(config, partition.clone(), coeff.clone())?.rhs(u, t, g)
}
