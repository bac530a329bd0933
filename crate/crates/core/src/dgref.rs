//! Upwind discontinuous Galerkin operator on the same broken space.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::meshpart::{FluxCoefficient, Mesh1D};
use crate::polyfield::PiecewisePoly;
use crate::quadrule::{legendre_values_and_derivatives, GaussPanel};
use crate::svcore::{upwind_interface_flux, Source};
use crate::{check_order, Error, Result};

/// Modal DG operator with `(k+3)`-point Gauss volume and source integrals.
pub struct DgOperator {
    mesh: Arc<Mesh1D>,
    k: usize,
    coeff: FluxCoefficient,
    panel: GaussPanel,
    /// `L_m(s_q)` and `L_m'(s_q)`, `q × (k+1)`.
    values: Vec<f64>,
    derivs: Vec<f64>,
    /// `α(x_{i,q})`, `N × q`.
    alpha_at_nodes: Vec<f64>,
}

impl DgOperator {
    pub fn new(mesh: &Arc<Mesh1D>, k: usize, coeff: FluxCoefficient) -> Result<Self> {
        check_order(k)?;
        if coeff.interface_count() != mesh.len() {
            return Err(Error::Mismatch("coefficient cached on a different mesh"));
        }
        let panel = GaussPanel::new(k + 3)?;
        let q = panel.len();
        let mut values = vec![0.0; q * (k + 1)];
        let mut derivs = vec![0.0; q * (k + 1)];
        for (p, &s) in panel.nodes.iter().enumerate() {
            let r = p * (k + 1)..(p + 1) * (k + 1);
            legendre_values_and_derivatives(s, &mut values[r.clone()], &mut derivs[r]);
        }
        let alpha_at_nodes = (0..mesh.len())
            .flat_map(|i| panel.nodes.iter().map(move |&s| (i, s)))
            .map(|(i, s)| coeff.eval(mesh.to_physical(i, s)))
            .collect();
        Ok(Self {
            mesh: Arc::clone(mesh),
            k,
            coeff,
            panel,
            values,
            derivs,
            alpha_at_nodes,
        })
    }

    pub fn rhs(&self, u: &PiecewisePoly, t: f64, g: Option<Source<'_>>) -> Result<PiecewisePoly> {
        let mut out = PiecewisePoly::zeros(u.mesh(), u.degree());
        self.rhs_into(u, t, g, &mut out)?;
        Ok(out)
    }

    /// `(p, L_m)_i = (αu, ∂_x L_m)_i - αû L_m(1) + αû L_m(-1) + (g, L_m)_i`.
    pub fn rhs_into(
        &self,
        u: &PiecewisePoly,
        t: f64,
        g: Option<Source<'_>>,
        out: &mut PiecewisePoly,
    ) -> Result<()> {
        let k = self.k;
        let n = self.mesh.len();
        if u.degree() != k || u.mesh().len() != n || !out.same_space(u) {
            return Err(Error::Mismatch("state does not match operator"));
        }
        let fluxes: Vec<f64> = (0..n).map(|i| upwind_interface_flux(u, &self.coeff, i)).collect();
        let q = self.panel.len();
        for i in 0..n {
            let h = self.mesh.size(i);
            let coeffs = u.element(i);
            let (left, right) = (fluxes[(i + n - 1) % n], fluxes[i]);
            let mut acc = [0.0; crate::MAX_ORDER + 1];
            let acc = &mut acc[..=k];
            for p in 0..q {
                let row = p * (k + 1)..(p + 1) * (k + 1);
                let value: f64 = coeffs.iter().zip(&self.values[row.clone()]).map(|(c, b)| c * b).sum();
                let w = self.panel.weights[p];
                let volume = w * self.alpha_at_nodes[i * q + p] * value;
                let source = match g {
                    Some(g) => 0.5 * h * w * g(self.mesh.to_physical(i, self.panel.nodes[p]), t),
                    None => 0.0,
                };
                for m in 0..=k {
                    acc[m] += volume * self.derivs[row.start + m] + source * self.values[row.start + m];
                }
            }
            let target = out.element_mut(i);
            for m in 0..=k {
                let left_sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let weak = acc[m] - right + left_sign * left;
                target[m] = (2 * m + 1) as f64 / h * weak;
            }
        }
        Ok(())
    }
}

/// One-shot evaluation of the DG right-hand side.
pub fn dg_rhs(
    u: &PiecewisePoly,
    t: f64,
    coeff: &FluxCoefficient,
    g: Option<Source<'_>>,
) -> Result<PiecewisePoly> {
    DgOperator::new(u.mesh(), u.degree(), coeff.clone())?.rhs(u, t, g)
}
