//! Convergence studies: one RK4 run per `(scheme, k, n)` level.

use std::sync::Arc;

use rayon::prelude::*;
use svkit_core::dgref::DgOperator;
use svkit_core::meshpart::{build_mesh, build_partition, FluxCoefficient, Partition, SvVariant, TieBreak};
use svkit_core::metrics::{
    compare_sv_dg, convergence_orders, flux_superconv_errors, solution_superconv_errors, ErrorReport, ExactField,
    Scheme,
};
use svkit_core::polyfield::{broken_error, interpolate, InterpKind, Norm, PiecewisePoly};
use svkit_core::svcore::{SchemeConfig, SvOperator};
use svkit_core::timeint::integrate_to;

use crate::cases::{CaseId, CaseSpec, InitialCondition};
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub case: CaseId,
    pub schemes: Vec<Scheme>,
    pub ks: Vec<usize>,
    pub ns: Vec<usize>,
    /// Final time; the case default when `None`.
    pub t_final: Option<f64>,
    /// Time step is `dt_factor / n`.
    pub dt_factor: f64,
    pub tie_break: TieBreak,
    /// Relative jitter of interior breakpoints.
    pub perturbation: f64,
    pub seed: u64,
    pub initial: InitialCondition,
    /// Also run upwind DG from the same initial data and report the differences.
    pub compare_dg: bool,
    pub format: Format,
    pub out: Option<std::path::PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            case: CaseId::Example1,
            schemes: vec![Scheme::Rsv],
            ks: vec![1],
            ns: vec![16, 32, 64, 128],
            t_final: None,
            dt_factor: 0.01,
            tie_break: TieBreak::default(),
            perturbation: 0.0,
            seed: 0,
            initial: InitialCondition::default(),
            compare_dg: false,
            format: Format::default(),
            out: None,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, value: String, reason: &str| HarnessError::InvalidValue {
            key: key.into(),
            value,
            reason: reason.into(),
        };
        if self.schemes.is_empty() || self.ks.is_empty() || self.ns.is_empty() {
            return Err(bad("scheme/k/n", String::new(), "lists must be nonempty"));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 4) {
            return Err(bad("n", n.to_string(), "every level needs at least 4 elements"));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("n", format!("{:?}", self.ns), "levels must be strictly increasing"));
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k == 0 || k > svkit_core::MAX_ORDER) {
            return Err(bad("k", k.to_string(), "order must lie in 1..=12"));
        }
        if !(self.dt_factor > 0.0 && self.dt_factor.is_finite()) {
            return Err(bad("dt-factor", self.dt_factor.to_string(), "must be positive"));
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(bad("t-final", t.to_string(), "must be positive"));
            }
        }
        if !(0.0..0.4).contains(&self.perturbation) {
            return Err(bad("perturb", self.perturbation.to_string(), "must lie in [0, 0.4)"));
        }
        Ok(())
    }

    pub fn case_spec(&self) -> CaseSpec {
        let case = CaseSpec::example(self.case).with_initial(self.initial);
        match self.t_final {
            Some(t) => case.with_t_final(t),
            None => case,
        }
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            dt_factor: self.dt_factor,
            tie_break: self.tie_break,
            perturbation: self.perturbation,
            seed: self.seed,
        }
    }
}

/// Discretization parameters shared by every level of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub dt_factor: f64,
    pub tie_break: TieBreak,
    pub perturbation: f64,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        StudyConfig::default().settings()
    }
}

/// Everything one level produced.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub scheme: Scheme,
    pub coeff: FluxCoefficient,
    /// Partition of the scheme; DG uses the RSV partition for its nodal metrics.
    pub partition: Partition,
    pub initial: PiecewisePoly,
    pub solution: PiecewisePoly,
    pub t_final: f64,
}

/// Mesh, coefficient, partition and `I_h u₀` for one level.
pub fn discretize(
    case: &CaseSpec,
    scheme: Scheme,
    k: usize,
    n: usize,
    settings: &RunSettings,
) -> svkit_core::Result<(FluxCoefficient, Partition, PiecewisePoly)> {
    let mesh = Arc::new(build_mesh(n, settings.perturbation, settings.seed)?);
    let coeff = FluxCoefficient::new(case.alpha_fn(), &mesh);
    let variant = scheme.variant().unwrap_or(SvVariant::Rsv);
    let partition = build_partition(&mesh, k, variant, &coeff, settings.tie_break)?;
    let initial = interpolate(|x| case.initial(x), &partition, InterpKind::Auto, &coeff)?;
    Ok((coeff, partition, initial))
}

/// Advances `initial` to `case.t_final` with RK4 and `dt = dt_factor / n`.
pub fn advance(
    case: &CaseSpec,
    scheme: Scheme,
    partition: &Partition,
    coeff: &FluxCoefficient,
    initial: PiecewisePoly,
    settings: &RunSettings,
) -> svkit_core::Result<PiecewisePoly> {
    let k = partition.order();
    let dt = settings.dt_factor / partition.mesh().len() as f64;
    let g = case.source().map(|g| g as &(dyn Fn(f64, f64) -> f64 + Sync));
    match scheme.variant() {
        Some(variant) => {
            let mut config = SchemeConfig::new(k, variant);
            config.tie_break = settings.tie_break;
            let op = SvOperator::new(config, partition.clone(), coeff.clone())?;
            integrate_to(initial, 0.0, case.t_final, dt, |u: &PiecewisePoly, t| op.rhs(u, t, g))
        }
        None => {
            let op = DgOperator::new(partition.mesh(), k, coeff.clone())?;
            integrate_to(initial, 0.0, case.t_final, dt, |u: &PiecewisePoly, t| op.rhs(u, t, g))
        }
    }
}

pub fn simulate(case: &CaseSpec, scheme: Scheme, k: usize, n: usize, settings: &RunSettings) -> Result<Simulation> {
    let tag = |source| HarnessError::Run { scheme, k, n, source };
    let (coeff, partition, initial) = discretize(case, scheme, k, n, settings).map_err(tag)?;
    let solution = advance(case, scheme, &partition, &coeff, initial.clone(), settings).map_err(tag)?;
    Ok(Simulation {
        scheme,
        coeff,
        partition,
        initial,
        solution,
        t_final: case.t_final,
    })
}

/// Errors of a finished run against the exact solution at its final time.
pub fn error_report(case: &CaseSpec, sim: &Simulation) -> svkit_core::Result<ErrorReport> {
    let t = sim.t_final;
    let value = |x: f64| case.exact(x, t);
    let derivative = |x: f64| case.exact_x(x, t);
    let exact = ExactField {
        value: &value,
        derivative: &derivative,
    };
    let u = &sim.solution;
    Ok(ErrorReport {
        scheme: sim.scheme,
        k: u.degree(),
        n: u.mesh().len(),
        t_final: t,
        l2_error: broken_error(u, value, Norm::L2),
        linf_error: broken_error(u, value, Norm::Linf),
        flux: Some(flux_superconv_errors(u, exact, &sim.coeff, &sim.partition)?),
        solution: Some(solution_superconv_errors(u, exact, &sim.partition, &sim.coeff)?),
        comparison: None,
    })
}

/// One level of a study, optionally compared with DG from the same initial data.
pub fn run_level(
    case: &CaseSpec,
    scheme: Scheme,
    k: usize,
    n: usize,
    settings: &RunSettings,
    compare_dg: bool,
) -> Result<ErrorReport> {
    let tag = |source| HarnessError::Run { scheme, k, n, source };
    let sim = simulate(case, scheme, k, n, settings)?;
    let mut report = error_report(case, &sim).map_err(tag)?;
    if compare_dg && scheme != Scheme::Dg {
        let dg = advance(case, Scheme::Dg, &sim.partition, &sim.coeff, sim.initial.clone(), settings)
            .map_err(|source| HarnessError::Run {
                scheme: Scheme::Dg,
                k,
                n,
                source,
            })?;
        report.comparison = Some(compare_sv_dg(&sim.solution, &dg, &sim.coeff).map_err(tag)?);
    }
    Ok(report)
}

/// Reports of a study in `(scheme, k, n)` order.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub reports: Vec<ErrorReport>,
}

impl StudyResult {
    /// `(n, value)` of one metric for one `(scheme, k)` series.
    pub fn series(&self, scheme: Scheme, k: usize, metric: &str) -> Vec<(usize, f64)> {
        self.reports
            .iter()
            .filter(|r| r.scheme == scheme && r.k == k)
            .filter_map(|r| r.metric(metric).map(|v| (r.n, v)))
            .collect()
    }

    /// Observed orders between consecutive levels; `None` where undefined.
    pub fn orders(&self, scheme: Scheme, k: usize, metric: &str) -> Vec<Option<f64>> {
        series_orders(&self.series(scheme, k, metric))
    }

    /// Order between the two finest levels of a series.
    pub fn finest_order(&self, scheme: Scheme, k: usize, metric: &str) -> Option<f64> {
        self.orders(scheme, k, metric).last().copied().flatten()
    }

    pub fn report(&self, scheme: Scheme, k: usize, n: usize) -> Option<&ErrorReport> {
        self.reports.iter().find(|r| r.scheme == scheme && r.k == k && r.n == n)
    }
}

/// Orders aligned with the series: the first entry is always `None`.
pub fn series_orders(series: &[(usize, f64)]) -> Vec<Option<f64>> {
    let mut out = vec![None; series.len()];
    for (j, pair) in series.windows(2).enumerate() {
        out[j + 1] = convergence_orders(pair).ok().map(|o| o[0]);
    }
    out
}

pub fn run_study(config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let case = config.case_spec();
    let settings = config.settings();
    let levels: Vec<(Scheme, usize, usize)> = config
        .schemes
        .iter()
        .flat_map(|&s| config.ks.iter().flat_map(move |&k| config.ns.iter().map(move |&n| (s, k, n))))
        .collect();
    let reports = levels
        .par_iter()
        .map(|&(scheme, k, n)| run_level(&case, scheme, k, n, &settings, config.compare_dg))
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyResult { reports })
}
