use clap::Args;
use serde::{Deserialize, Serialize};

use lampwalk::coupling::{
    exit_profile, non_normal_demo, tail_exact, tail_profile, CouplingConfig, FcCoupling, RunOptions,
};
use lampwalk::group::{SymZ, ZProjection};
use lampwalk::presets;
use lampwalk::stats::{geometric_cdf, ks_discrete};
use lampwalk::walk::{fmt_prob, Estimate, StepDistribution};

use super::{defaults, float, need, Command};
use crate::error::CliError;
use crate::output::{Report, Table};
use crate::words::{parse_word, Named};

/// Coupling-time tail `P(τ > n)` for two walks started `γ` apart.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Couple {
    /// ll-z2 or ll-z2-literal
    #[arg(long)]
    pub preset: Option<String>,
    /// Starting difference as a word, e.g. `sigma0`
    #[arg(long)]
    pub gamma: Option<String>,
    /// Level with `γ ∈ F^x`
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    /// Convolution power used by the coupling
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add the exactly computed tail next to the estimate
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub exact: Option<bool>,
    /// Number of fully traced runs written as JSON lines
    #[arg(long)]
    pub dump: Option<usize>,
}

/// Builds the coupling of a preset with its subgroup `F`.
fn with_coupling<T>(
    preset: &str,
    gamma: &str,
    x: i64,
    r: usize,
    check_normality: bool,
    run: impl FnOnce(CouplingSetup) -> Result<T, CliError>,
) -> Result<T, CliError> {
    match preset {
        "ll-z2" => run(CouplingSetup::Lamplighter(build(&presets::ll_z2_step(), presets::ll_z2_f(), gamma, x, r, check_normality)?)),
        "ll-z2-literal" => run(CouplingSetup::Lamplighter(build(
            &presets::ll_z2_literal_step(),
            presets::ll_z2_f(),
            gamma,
            x,
            r,
            check_normality,
        )?)),
        "symz-demo" => run(CouplingSetup::SymZ(build(&presets::symz_demo_step(), presets::symz_demo_f(), gamma, x, r, check_normality)?)),
        other => Err(CliError::Config(format!("preset `{other}` has no coupling data"))),
    }
}

pub enum CouplingSetup {
    Lamplighter(CouplingConfig<presets::LlZ2>),
    SymZ(CouplingConfig<SymZ>),
}

fn build<G: ZProjection + Named + Clone + Send + Sync>(
    d: &StepDistribution<G>,
    f: Vec<G::Elem>,
    gamma: &str,
    x: i64,
    r: usize,
    check_normality: bool,
) -> Result<CouplingConfig<G>, CliError> {
    let g = parse_word(&d.group, gamma)?;
    Ok(CouplingConfig::build(d, r, f, g, x, check_normality, 1 << 20)?)
}

macro_rules! on_setup {
    ($setup:expr, $cfg:ident => $body:expr) => {
        match $setup {
            CouplingSetup::Lamplighter($cfg) => $body,
            CouplingSetup::SymZ($cfg) => $body,
        }
    };
}

fn dump_records<G>(cfg: &CouplingConfig<G>, runs: usize, horizon: usize, seed: u64) -> Result<String, CliError>
where
    G: ZProjection + Clone + Sync,
{
    let mut out = String::new();
    for t in 0..runs as u64 {
        let rec = cfg.run(seed, t, RunOptions::full(horizon), None)?;
        out.push_str(&serde_json::to_string(&rec).map_err(|e| CliError::Io(e.into()))?);
        out.push('\n');
    }
    Ok(out)
}

impl Command for Couple {
    const NAME: &'static str = "couple";

    fn fill_defaults(&mut self) {
        defaults!(self;
            preset = "ll-z2",
            gamma = "sigma0",
            x = 0i64,
            r = 2usize,
            trials = 100_000usize,
            ns = (2..=7).map(|k| 4usize.pow(k)).collect::<Vec<_>>(),
            seed = 1u64,
            exact = false,
            dump = 0usize,
        );
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (gamma, x, r) = (need(&self.gamma, "gamma")?, need(&self.x, "x")?, need(&self.r, "r")?);
        let (trials, ns, seed) = (need(&self.trials, "trials")?, need(&self.ns, "ns")?, need(&self.seed, "seed")?);
        let (exact, dump) = (need(&self.exact, "exact")?, need(&self.dump, "dump")?);
        if ns.is_empty() || trials == 0 {
            return Err(CliError::Config("need at least one n and one trial".into()));
        }
        with_coupling(&preset, &gamma, x, r, true, |setup| {
            on_setup!(setup, cfg => {
                let pts = tail_profile(&cfg, &ns, trials, seed)?;
                let ex = if exact { Some(tail_exact(&cfg, &ns)) } else { None };
                let mut cols = vec!["n", "p_hat", "stderr", "sqrt_n_times_p"];
                if exact {
                    cols.push("p_exact");
                }
                let mut table = Table::new(&cols);
                for (i, p) in pts.iter().enumerate() {
                    let mut row = vec![p.n.to_string(), float(p.p_hat), float(p.stderr), float(p.sqrt_n_times_p)];
                    if let Some(e) = &ex {
                        row.push(float(e[i]));
                    }
                    table.push(row);
                }
                let sup = pts.iter().map(|p| p.sqrt_n_times_p).fold(0.0, f64::max);
                let mut report = Report {
                    summary: vec![
                        format!("eps = {}, R = {}", fmt_prob(cfg.eps), cfg.r),
                        format!("sup sqrt(n) P(tau > n) = {sup:.4} over {} values of n", ns.len()),
                    ],
                    tables: vec![table],
                    ..Default::default()
                };
                if dump > 0 {
                    let horizon = ns.iter().copied().max().unwrap_or(0);
                    report.dumps.push(("records.jsonl", dump_records(&cfg, dump, horizon, seed)?));
                }
                Ok(report)
            })
        })
    }
}

/// Probability that the pair has not coupled when the projection leaves `[−r, r]`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CoupleExit {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Exit radii
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<i64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Command for CoupleExit {
    const NAME: &'static str = "couple-exit";

    fn fill_defaults(&mut self) {
        defaults!(self;
            preset = "ll-z2",
            gamma = "sigma0",
            x = 0i64,
            r = 2usize,
            radii = vec![4i64, 8, 16, 32, 64],
            trials = 10_000usize,
            seed = 1u64,
        );
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (gamma, x, r) = (need(&self.gamma, "gamma")?, need(&self.x, "x")?, need(&self.r, "r")?);
        let (radii, trials, seed) = (need(&self.radii, "radii")?, need(&self.trials, "trials")?, need(&self.seed, "seed")?);
        if radii.iter().any(|&r| r < 1) {
            return Err(CliError::Config("exit radii must be positive".into()));
        }
        let pts = with_coupling(&preset, &gamma, x, r, true, |setup| {
            on_setup!(setup, cfg => Ok(exit_profile(&cfg, &radii, trials, seed)?))
        })?;
        let mut table = Table::new(&["r", "p_hat", "stderr", "r_times_p"]);
        for p in &pts {
            table.push(vec![p.r.to_string(), float(p.p_hat), float(p.stderr), float(p.r_times_p)]);
        }
        let sup = pts.iter().map(|p| p.r_times_p).fold(0.0, f64::max);
        Ok(Report {
            summary: vec![format!("sup r P(uncoupled at exit) = {sup:.4}")],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// One-step coupling through a finite conjugacy class on `delta-d8`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CoupleFc {
    /// delta-d8
    #[arg(long)]
    pub preset: Option<String>,
    /// Starting point of the first walk, as a word
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub class_cap: Option<usize>,
    /// Largest n in the tail table
    #[arg(long)]
    pub n_max: Option<usize>,
}

impl Command for CoupleFc {
    const NAME: &'static str = "couple-fc";

    fn fill_defaults(&mut self) {
        defaults!(self;
            preset = "delta-d8",
            start = "e",
            trials = 10_000usize,
            seed = 1u64,
            horizon = 100_000usize,
            class_cap = 10_000usize,
            n_max = 50usize,
        );
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        if preset != "delta-d8" {
            return Err(CliError::Config(format!("preset `{preset}` has no finite-class coupling")));
        }
        let (trials, seed, horizon) = (need(&self.trials, "trials")?, need(&self.seed, "seed")?, need(&self.horizon, "horizon")?);
        let (class_cap, n_max) = (need(&self.class_cap, "class-cap")?, need(&self.n_max, "n-max")?);
        let (mu, gamma) = presets::delta_d8_fc();
        let x = parse_word(&mu.group, &need(&self.start, "start")?)?;
        let c = FcCoupling::build(&mu, gamma, 1, class_cap, 1 << 20)?;
        let eps = *c.eps.numer() as f64 / *c.eps.denom() as f64;
        let mut taus = Vec::with_capacity(trials);
        for t in 0..trials as u64 {
            let rec = c.run(&x, horizon, seed, t, false)?;
            taus.push(rec.tau.map_or(u64::MAX, |v| v as u64));
        }
        let censored = taus.iter().filter(|&&t| t == u64::MAX).count();
        let ks = ks_discrete(&taus, |k| geometric_cdf(eps, k));
        let mut table = Table::new(&["n", "p_hat", "stderr", "geometric"]);
        for n in 0..=n_max as u64 {
            let hits: Vec<f64> = taus.iter().map(|&t| if t > n { 1.0 } else { 0.0 }).collect();
            let est = Estimate::from_samples(&hits);
            table.push(vec![n.to_string(), float(est.mean), float(est.stderr), float((1.0 - eps).powi(n as i32))]);
        }
        Ok(Report {
            summary: vec![
                format!("class size {}, eps = {}", c.class.len(), fmt_prob(c.eps)),
                format!("KS against geometric(eps): D = {:.4}, p = {:.4}; {censored} runs uncoupled by the horizon", ks.statistic, ks.p_value),
            ],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Runs the coupling with a subgroup that is not normal and reports where
/// the tracked difference escapes.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct NonNormalDemo {
    /// symz-demo
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
}

impl Command for NonNormalDemo {
    const NAME: &'static str = "non-normal-demo";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "symz-demo", gamma = "s", seed = 1u64, runs = 20usize, horizon = 1000usize);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let gamma = need(&self.gamma, "gamma")?;
        let (seed, runs, horizon) = (need(&self.seed, "seed")?, need(&self.runs, "runs")?, need(&self.horizon, "horizon")?);
        let reports = with_coupling(&preset, &gamma, 0, 2, false, |setup| {
            on_setup!(setup, cfg => Ok((0..runs as u64).map(|k| non_normal_demo(&cfg, seed + k, horizon)).collect::<Vec<_>>()))
        })?;
        let mut table = Table::new(&["seed", "horizon", "violation_step", "difference", "tau"]);
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        for r in &reports {
            table.push(vec![
                r.seed.to_string(),
                r.horizon.to_string(),
                opt(r.violation_step),
                r.difference.clone().unwrap_or_default(),
                opt(r.tau),
            ]);
        }
        let first = reports.iter().find(|r| r.violation_step.is_some());
        Ok(Report {
            summary: vec![format!(
                "{} of {} runs left the tracked subgroup",
                reports.iter().filter(|r| r.violation_step.is_some()).count(),
                reports.len()
            )],
            tables: vec![table],
            violation: first.map(|r| {
                format!(
                    "seed {}: difference {} at step {}",
                    r.seed,
                    r.difference.as_deref().unwrap_or("?"),
                    r.violation_step.unwrap_or(0)
                )
            }),
            ..Default::default()
        })
    }
}
