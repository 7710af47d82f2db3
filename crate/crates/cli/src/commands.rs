use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use confball::basis::{check_h2, check_h3, Basis};
use confball::estimators::Sample;
use confball::experiments::{coverage_curve, normalized_differences, Summary};
use confball::{build_ball, ConfidenceBall, WeightScheme};
use serde::Serialize;

use crate::config::{
    parse_dims_text, BallSettings, RawCollection, RawConfig, RawOracle, RawWeights, SimulationSettings,
};
use crate::CliError;

/// Trials of the random search behind each sup-norm check.
pub const H2_TRIALS: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "confball",
    version,
    about = "Adaptive confidence balls for densities on [0, 1]"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the confidence ball for a sample read from a file.
    Ball(Common),
    /// Normalized differences n (||s_m - ŝ_m||^2 - p_W) / sqrt(d_m) over fresh samples.
    SimulatePw(Common),
    /// Coverage of the resampling quantiles over a grid of levels.
    Coverage(Common),
    /// Check the sup-norm and growth conditions of a collection.
    CheckAssumptions(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    /// JSON document.
    Doc,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML config file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Report failed checks without a nonzero exit code.
    #[arg(long)]
    pub warn_only: bool,
    /// Sample file: one value in [0, 1] per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// histogram, fourier or piecewise-polynomial[:R]
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated model dimensions, or sobolev:<gamma>.
    #[arg(long)]
    pub dims: Option<String>,
    /// efron or rademacher
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub m2: Option<f64>,
    #[arg(long)]
    pub m_inf: Option<f64>,
    #[arg(long)]
    pub kappa_scale: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dm: Option<usize>,
    #[arg(long)]
    pub nb: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',')]
    pub alpha_grid: Option<Vec<f64>>,
    /// uniform, histogram or cosine
    #[arg(long)]
    pub oracle: Option<String>,
    /// Comma-separated oracle parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub oracle_params: Option<Vec<f64>>,
}

impl Common {
    fn overrides(&self) -> Result<RawConfig, CliError> {
        let dims = self.dims.as_deref().map(parse_dims_text).transpose()?;
        Ok(RawConfig {
            collection: (self.family.is_some() || dims.is_some()).then(|| RawCollection {
                family: self.family.clone(),
                dims,
            }),
            weights: self.weights.clone().map(|kind| RawWeights { kind: Some(kind) }),
            beta: self.beta,
            eta: self.eta,
            m2: self.m2,
            m_inf: self.m_inf,
            kappa_scale: self.kappa_scale,
            n: self.n,
            dm: self.dm,
            nb: self.nb,
            reps: self.reps,
            alpha_grid: self.alpha_grid.clone(),
            oracle: (self.oracle.is_some() || self.oracle_params.is_some()).then(|| RawOracle {
                kind: self.oracle.clone(),
                params: self.oracle_params.clone(),
            }),
            input: self.input.clone(),
            seed: self.seed,
        })
    }

    fn raw_config(&self) -> Result<RawConfig, CliError> {
        let base = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        Ok(base.merge(self.overrides()?))
    }
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    /// Set when a check failed and `--warn-only` was not given.
    pub failure: Option<String>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Ball(c) | Command::SimulatePw(c) | Command::Coverage(c) | Command::CheckAssumptions(c) => c,
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let common = command.common();
    let raw = common.raw_config()?;
    match command {
        Command::Ball(_) => ball(&raw, common.format),
        Command::SimulatePw(_) => simulate_pw(&raw, common.format),
        Command::Coverage(_) => coverage(&raw, common.format),
        Command::CheckAssumptions(_) => check_assumptions(&raw, common.format, common.warn_only),
    }
}

/// Reads one value per line; blank lines are skipped.
pub fn read_sample(path: &Path) -> Result<Sample, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read input {}: {e}", path.display())))?;
    parse_sample(&text, &path.display().to_string())
}

pub fn parse_sample(text: &str, name: &str) -> Result<Sample, CliError> {
    let bad = |line: usize, reason: String| CliError::Input {
        path: name.to_string(),
        line,
        reason,
    };
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let x: f64 = t.parse().map_err(|_| bad(i + 1, format!("not a number: `{t}`")))?;
        if !(0.0..=1.0).contains(&x) {
            return Err(bad(i + 1, format!("value {t} outside [0, 1]")));
        }
        points.push(x);
    }
    Sample::new(points).map_err(|e| CliError::Usage(format!("{name}: {e}")))
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn ball(raw: &RawConfig, format: Format) -> Result<Outcome, CliError> {
    let settings = BallSettings::resolve(raw)?;
    let input = settings
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("ball needs an input file (--input or `input` in the config)".into()))?;
    let sample = read_sample(input)?;
    let collection = settings.collection.build(sample.n())?;
    let scheme = WeightScheme::new(settings.weights, sample.n())?;
    let ball = build_ball(&sample, &collection, &scheme, &settings.bounds)?;
    let mut warnings = Vec::new();
    if !ball.h3_holds {
        warnings.push(format!(
            "top model {} is too large for n = {} at beta = {}; the coverage guarantee does not apply",
            ball.top_model_id, ball.n, ball.beta
        ));
    }
    if ball.degenerate {
        warnings.push("selected radius came from a negative radicand clamped to 0".into());
    }
    let text = match format {
        Format::Doc => render(&ball),
        Format::Csv => ball_table(&ball),
    };
    Ok(Outcome {
        text,
        warnings,
        failure: None,
    })
}

/// Per-model radius table.
pub fn ball_table(ball: &ConfidenceBall) -> String {
    let mut out = String::from("model_id,dim,pw,pb,v,k,epsilon,rho_hat_sq,rho_hat,degenerate,selected\n");
    for r in &ball.report.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.model_id,
            r.dim,
            r.pw,
            r.pb,
            r.v,
            r.k,
            r.epsilon,
            r.rho_hat_sq,
            r.rho_hat,
            r.degenerate,
            r.model_id == ball.selected_model_id
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct PwRow {
    kind: &'static str,
    index: Option<usize>,
    normalized_mc: f64,
    normalized_closed: f64,
}

fn simulate_pw(raw: &RawConfig, format: Format) -> Result<Outcome, CliError> {
    let s = SimulationSettings::resolve(raw, (50, 10, 100, 1000))?;
    let diffs = normalized_differences(&s.oracle, &s.model, s.weights, s.n, s.nb, s.reps, s.seed)?;
    let mut rows: Vec<PwRow> = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| PwRow {
            kind: "data",
            index: Some(i),
            normalized_mc: d.monte_carlo,
            normalized_closed: d.closed_form,
        })
        .collect();
    let mc = Summary::of(&diffs.iter().map(|d| d.monte_carlo).collect::<Vec<_>>());
    let closed = Summary::of(&diffs.iter().map(|d| d.closed_form).collect::<Vec<_>>());
    for (kind, a, b) in [
        ("mean", mc.mean, closed.mean),
        ("sd", mc.sd, closed.sd),
        ("min", mc.min, closed.min),
        ("max", mc.max, closed.max),
    ] {
        rows.push(PwRow {
            kind,
            index: None,
            normalized_mc: a,
            normalized_closed: b,
        });
    }
    let text = match format {
        Format::Doc => render(&rows),
        Format::Csv => {
            let mut out = String::from("kind,index,normalized_mc,normalized_closed\n");
            for r in &rows {
                let index = r.index.map(|i| i.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{},{}", r.kind, index, r.normalized_mc, r.normalized_closed).unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        text,
        warnings: Vec::new(),
        failure: None,
    })
}

#[derive(Serialize)]
struct CoverageRow {
    alpha: f64,
    coverage: f64,
    reference: f64,
}

fn coverage(raw: &RawConfig, format: Format) -> Result<Outcome, CliError> {
    let s = SimulationSettings::resolve(raw, (100, 50, 10_000, 100))?;
    if s.nb < 100 {
        return Err(CliError::Usage(format!("coverage needs nb >= 100, got {}", s.nb)));
    }
    let points = coverage_curve(&s.oracle, &s.model, s.weights, s.n, s.nb, s.reps, &s.alpha_grid, s.seed)?;
    let rows: Vec<CoverageRow> = points
        .iter()
        .map(|p| CoverageRow {
            alpha: p.alpha,
            coverage: p.coverage,
            reference: p.alpha,
        })
        .collect();
    let text = match format {
        Format::Doc => render(&rows),
        Format::Csv => {
            let mut out = String::from("alpha,coverage,reference\n");
            for r in &rows {
                writeln!(out, "{},{},{}", r.alpha, r.coverage, r.reference).unwrap();
            }
            out
        }
    };
    Ok(Outcome {
        text,
        warnings: Vec::new(),
        failure: None,
    })
}

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    subject: String,
    value: f64,
    bound: f64,
    holds: bool,
}

fn check_assumptions(raw: &RawConfig, format: Format, warn_only: bool) -> Result<Outcome, CliError> {
    let s = BallSettings::resolve(raw)?;
    let collection = s.collection.build(s.n)?;
    let mut rows: Vec<CheckRow> = collection
        .models()
        .iter()
        .map(|m| {
            let r = check_h2(m, H2_TRIALS, s.seed);
            CheckRow {
                check: "sup-norm",
                subject: m.id(),
                value: r.empirical_ratio,
                bound: r.c1,
                holds: r.holds,
            }
        })
        .collect();
    let h3 = check_h3(&collection, s.n, s.bounds.beta)?;
    rows.push(CheckRow {
        check: "growth",
        subject: format!("{} (d = {})", collection.top().id(), collection.top().dim()),
        value: h3.lhs,
        bound: h3.c_m,
        holds: h3.holds,
    });
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.holds)
        .map(|r| format!("{} check failed for {}", r.check, r.subject))
        .collect();
    let text = match format {
        Format::Doc => render(&rows),
        Format::Csv => {
            let mut out = String::from("check,subject,value,bound,holds\n");
            for r in &rows {
                writeln!(out, "{},{},{},{},{}", r.check, r.subject, r.value, r.bound, r.holds).unwrap();
            }
            out
        }
    };
    let (warnings, failure) = match (failed.is_empty(), warn_only) {
        (true, _) => (Vec::new(), None),
        (false, true) => (failed, None),
        (false, false) => (Vec::new(), Some(failed.join("; "))),
    };
    Ok(Outcome {
        text,
        warnings,
        failure,
    })
}
