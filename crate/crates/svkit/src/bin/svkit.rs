use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Parser;
use svkit::config::parse_pairs;
use svkit::study::{run_study, StudyConfig};
use svkit::table::emit_table;

/// Convergence studies for the LSV, RSV and upwind DG schemes on
/// `u_t + (α(x) u)_x = g`, periodic on [0, 2π].
#[derive(Debug, Parser)]
#[command(name = "svkit", version)]
struct Cli {
    /// Key=value file with the same keys as the long flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Test case: 1 (α = sin x) or 2 (α = sin² x).
    #[arg(long)]
    example: Option<String>,
    /// lsv, rsv or dg; comma-separated for several.
    #[arg(long)]
    scheme: Option<String>,
    /// Polynomial degree(s), comma-separated.
    #[arg(long)]
    k: Option<String>,
    /// Element counts, comma-separated and increasing.
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "t-final")]
    t_final: Option<String>,
    /// Time step is C / n.
    #[arg(long = "dt-factor", value_name = "C")]
    dt_factor: Option<String>,
    /// Radau family on mixed-sign elements: sign, right or left.
    #[arg(long = "tie-break")]
    tie_break: Option<String>,
    /// Relative jitter of interior breakpoints, in [0, 0.4).
    #[arg(long)]
    perturb: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// exact (u₀ = u(x, 0)) or sin.
    #[arg(long)]
    initial: Option<String>,
    /// Also run upwind DG and report the SV-DG differences.
    #[arg(long = "compare-dg")]
    compare_dg: bool,
    /// csv or md.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn flag_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs: Vec<(&'static str, String)> = [
            ("example", &self.example),
            ("scheme", &self.scheme),
            ("k", &self.k),
            ("n", &self.n),
            ("t-final", &self.t_final),
            ("dt-factor", &self.dt_factor),
            ("tie-break", &self.tie_break),
            ("perturb", &self.perturb),
            ("seed", &self.seed),
            ("initial", &self.initial),
            ("format", &self.format),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect();
        if self.compare_dg {
            pairs.push(("compare-dg", "true".into()));
        }
        if let Some(out) = &self.out {
            pairs.push(("out", out.display().to_string()));
        }
        pairs
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let mut config = StudyConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for (k, v) in parse_pairs(&text).with_context(|| format!("parsing {}", path.display()))? {
            config.set(&k, &v)?;
        }
    }
    for (k, v) in cli.flag_pairs() {
        config.set(k, &v)?;
    }
    let result = run_study(&config)?;
    emit_table(&result, config.format, config.out.as_deref())
        .with_context(|| match &config.out {
            Some(p) => format!("writing {}", p.display()),
            None => "writing to standard output".to_string(),
        })?;
    Ok(())
}
