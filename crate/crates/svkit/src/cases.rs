//! Manufactured-solution test cases on the periodic interval `[0, 2π]`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{HarnessError, Result};

type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `α = sin x`, `u = e^{sin(x-t)}`.
    Example1,
    /// `α = sin² x`, `u = e^{sin(x-t)}`.
    Example2,
    Custom,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::Example1 => "example1",
            CaseId::Example2 => "example2",
            CaseId::Custom => "custom",
        })
    }
}

impl FromStr for CaseId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "example1" | "ex1" => Ok(CaseId::Example1),
            "2" | "example2" | "ex2" => Ok(CaseId::Example2),
            _ => Err(HarnessError::UnknownCase(s.to_string())),
        }
    }
}

/// Initial data for the built-in examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InitialCondition {
    /// The exact solution at `t = 0`.
    #[default]
    Exact,
    /// `u₀ = sin x`.
    Sine,
}

impl FromStr for InitialCondition {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(InitialCondition::Exact),
            "sin" | "sine" => Ok(InitialCondition::Sine),
            other => Err(HarnessError::InvalidValue {
                key: "initial".into(),
                value: other.into(),
                reason: "expected `exact` or `sin`".into(),
            }),
        }
    }
}

/// A linear advection problem `u_t + (α u)_x = g` with a known solution.
#[derive(Clone)]
pub struct CaseSpec {
    pub id: CaseId,
    pub t_final: f64,
    alpha: SpaceFn,
    alpha_prime: SpaceFn,
    u: SpaceTimeFn,
    u_t: SpaceTimeFn,
    u_x: SpaceTimeFn,
    u0: SpaceFn,
    source: Option<SpaceTimeFn>,
}

impl fmt::Debug for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CaseSpec")
            .field("id", &self.id)
            .field("t_final", &self.t_final)
            .field("forced", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

fn travelling_wave() -> (SpaceTimeFn, SpaceTimeFn, SpaceTimeFn) {
    let u: SpaceTimeFn = Arc::new(|x, t| (x - t).sin().exp());
    let u_t: SpaceTimeFn = Arc::new(|x, t| -(x - t).cos() * (x - t).sin().exp());
    let u_x: SpaceTimeFn = Arc::new(|x, t| (x - t).cos() * (x - t).sin().exp());
    (u, u_t, u_x)
}

/// Built-in case by name: `1`/`example1` or `2`/`example2`.
pub fn manufactured_case(id: &str) -> Result<CaseSpec> {
    Ok(CaseSpec::example(id.parse()?))
}

impl CaseSpec {
    pub fn example(id: CaseId) -> Self {
        let (u, u_t, u_x) = travelling_wave();
        let (alpha, alpha_prime): (SpaceFn, SpaceFn) = match id {
            CaseId::Example1 => (Arc::new(f64::sin), Arc::new(f64::cos)),
            CaseId::Example2 => (
                Arc::new(|x: f64| x.sin() * x.sin()),
                Arc::new(|x: f64| 2.0 * x.sin() * x.cos()),
            ),
            CaseId::Custom => panic!("custom cases are built with CaseSpec::custom"),
        };
        Self::assemble(id, alpha, alpha_prime, u, u_t, u_x, FRAC_PI_2)
    }

    /// A case from closed forms; the source is derived as `u_t + α' u + α u_x`.
    pub fn custom(
        alpha: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        u_t: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        u_x: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        t_final: f64,
    ) -> Self {
        Self::assemble(
            CaseId::Custom,
            Arc::new(alpha),
            Arc::new(alpha_prime),
            Arc::new(u),
            Arc::new(u_t),
            Arc::new(u_x),
            t_final,
        )
    }

    fn assemble(
        id: CaseId,
        alpha: SpaceFn,
        alpha_prime: SpaceFn,
        u: SpaceTimeFn,
        u_t: SpaceTimeFn,
        u_x: SpaceTimeFn,
        t_final: f64,
    ) -> Self {
        let source: SpaceTimeFn = {
            let (a, ap, u, ut, ux) = (
                alpha.clone(),
                alpha_prime.clone(),
                u.clone(),
                u_t.clone(),
                u_x.clone(),
            );
            Arc::new(move |x, t| ut(x, t) + ap(x) * u(x, t) + a(x) * ux(x, t))
        };
        let u0: SpaceFn = {
            let u = u.clone();
            Arc::new(move |x| u(x, 0.0))
        };
        Self {
            id,
            t_final,
            alpha,
            alpha_prime,
            u,
            u_t,
            u_x,
            u0,
            source: Some(source),
        }
    }

    /// Replaces the source term; `None` solves the homogeneous equation.
    pub fn with_source(mut self, g: Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>) -> Self {
        self.source = g;
        self
    }

    pub fn with_initial(mut self, initial: InitialCondition) -> Self {
        self.u0 = match initial {
            InitialCondition::Exact => {
                let u = self.u.clone();
                Arc::new(move |x| u(x, 0.0))
            }
            InitialCondition::Sine => Arc::new(f64::sin),
        };
        self
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn alpha(&self, x: f64) -> f64 {
        (self.alpha)(x)
    }

    pub fn alpha_fn(&self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let a = self.alpha.clone();
        move |x| a(x)
    }

    pub fn alpha_prime(&self, x: f64) -> f64 {
        (self.alpha_prime)(x)
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        (self.u)(x, t)
    }

    pub fn exact_t(&self, x: f64, t: f64) -> f64 {
        (self.u_t)(x, t)
    }

    pub fn exact_x(&self, x: f64, t: f64) -> f64 {
        (self.u_x)(x, t)
    }

    pub fn initial(&self, x: f64) -> f64 {
        (self.u0)(x)
    }

    pub fn source(&self) -> Option<&(dyn Fn(f64, f64) -> f64 + Send + Sync)> {
        self.source.as_deref()
    }

    /// `u_t + α' u + α u_x - g` at one point; zero when the source is consistent.
    pub fn residual(&self, x: f64, t: f64) -> f64 {
        let g = self.source().map_or(0.0, |g| g(x, t));
        self.exact_t(x, t) + self.alpha_prime(x) * self.exact(x, t) + self.alpha(x) * self.exact_x(x, t) - g
    }
}
