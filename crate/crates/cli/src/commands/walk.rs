use clap::Args;
use serde::{Deserialize, Serialize};

use lampwalk::group::ZProjection;
use lampwalk::presets;
use lampwalk::walk::{fmt_prob, lamplighter_speed, sn_delta_member, speed_estimate, Estimate, StepDistribution};

use super::{big, defaults, float, need, rational, with_any_step, Command};
use crate::error::CliError;
use crate::output::{Report, Table};
use crate::words::{parse_word, Named};

/// Monte Carlo `E d(e, Z_n)` with an explicitly chosen metric.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct WalkSpeed {
    /// ll-z2, ll-z2-literal, ll-z2-srw, plateau-z2, symz, symz-demo, z-srw
    #[arg(long)]
    pub preset: Option<String>,
    /// `word` (word metric, lamplighters and Z) or `projection` (|phi|); required
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn projection_speed<G>(d: &StepDistribution<G>, n: usize, trials: usize, seed: u64) -> Estimate
where
    G: ZProjection + Sync,
{
    speed_estimate(d, n, trials, seed, |g| d.group.phi(g).unsigned_abs() as f64)
}

impl Command for WalkSpeed {
    const NAME: &'static str = "walk-speed";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "ll-z2-srw", ns = vec![1024, 2048, 4096, 8192, 16384], trials = 2000usize, seed = 1u64);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let metric = need(&self.metric, "metric")?;
        let (ns, trials, seed) = (need(&self.ns, "ns")?, need(&self.trials, "trials")?, need(&self.seed, "seed")?);
        if !matches!(metric.as_str(), "word" | "projection") {
            return Err(CliError::Config(format!("metric must be `word` or `projection`, got `{metric}`")));
        }
        let word = metric == "word";
        let mut table = Table::new(&["n", "mean", "stderr", "trials", "metric"]);
        for &n in &ns {
            let est = match (preset.as_str(), word) {
                ("ll-z2", true) => lamplighter_speed(&presets::ll_z2_step(), n, trials, seed),
                ("ll-z2-literal", true) => lamplighter_speed(&presets::ll_z2_literal_step(), n, trials, seed),
                ("ll-z2-srw", true) => lamplighter_speed(&presets::ll_z2_srw_step(), n, trials, seed),
                ("plateau-z2", true) => lamplighter_speed(&presets::plateau_z2(), n, trials, seed),
                ("z-srw", _) => projection_speed(&presets::z_srw_step(), n, trials, seed),
                (p, true) => {
                    return Err(CliError::Config(format!("no exact word metric is implemented for preset `{p}`")))
                }
                (p, false) => super::with_z_step!(p, d => Ok::<_, CliError>(projection_speed(&d, n, trials, seed)))?,
            };
            table.push(vec![n.to_string(), float(est.mean), float(est.stderr), est.trials.to_string(), metric.clone()]);
        }
        Ok(Report {
            summary: vec![format!("{} speeds for {preset} with the {metric} metric", ns.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Exact convolution power `μ^(n)`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Convolve {
    /// Any step-law preset, including da-q2 and delta-d8
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest support size before giving up
    #[arg(long)]
    pub cap: Option<usize>,
}

impl Command for Convolve {
    const NAME: &'static str = "convolve";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "ll-z2", n = 4usize, cap = 1usize << 20);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (n, cap) = (need(&self.n, "n")?, need(&self.cap, "cap")?);
        let rows = with_any_step!(preset.as_str(), d => {
            let m = d.convolve_exact(n, cap)?;
            Ok::<_, CliError>(m.sorted_by_key(&d.group))
        })?;
        let mut table = Table::new(&["element", "mass", "mass_float"]);
        for (k, p) in &rows {
            table.push(vec![k.clone(), fmt_prob(*p), float(*p.numer() as f64 / *p.denom() as f64)]);
        }
        Ok(Report {
            summary: vec![format!("{preset}: support of the {n}-fold convolution has {} atoms", rows.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// `½‖μ^(n) − μ^(n + shift)‖₁`, exact.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Tv {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long)]
    pub shift: Option<usize>,
    #[arg(long)]
    pub cap: Option<usize>,
}

impl Command for Tv {
    const NAME: &'static str = "tv";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "plateau-z2", ns = (0..=10).collect::<Vec<usize>>(), shift = 1usize, cap = 1usize << 22);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (ns, shift, cap) = (need(&self.ns, "ns")?, need(&self.shift, "shift")?, need(&self.cap, "cap")?);
        let top = ns.iter().max().copied().unwrap_or(0) + shift;
        let tvs = with_any_step!(preset.as_str(), d => {
            let powers = d.powers(top, cap)?;
            Ok::<_, CliError>(ns.iter().map(|&n| powers[n].tv(&powers[n + shift])).collect::<Vec<_>>())
        })?;
        let mut table = Table::new(&["n", "m", "tv", "tv_float"]);
        for (n, tv) in ns.iter().zip(&tvs) {
            let [exact, f] = big(tv);
            table.push(vec![n.to_string(), (n + shift).to_string(), exact, f]);
        }
        Ok(Report {
            summary: vec![format!("{preset}: {} total-variation distances", tvs.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Membership of an element in `S_n(δ) = {g : ½‖μ^(n) − gμ^(n)‖₁ < δ}`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SnDelta {
    #[arg(long)]
    pub preset: Option<String>,
    /// Word in the preset's generators, e.g. `s t`
    #[arg(long)]
    pub element: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub cap: Option<usize>,
}

fn sn_rows<G: Named>(
    d: &StepDistribution<G>,
    element: &str,
    ns: &[usize],
    delta: &num_rational::BigRational,
    cap: usize,
) -> Result<Vec<(usize, String, num_rational::BigRational, bool)>, CliError> {
    let g = parse_word(&d.group, element)?;
    let key = d.group.key(&g);
    ns.iter()
        .map(|&n| {
            let (member, tv) = sn_delta_member(&g, n, delta, d, cap)?;
            Ok((n, key.clone(), tv, member))
        })
        .collect()
}

impl Command for SnDelta {
    const NAME: &'static str = "sn-delta";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "ll-z2", element = "s", ns = vec![1usize, 2, 4, 8, 16], delta = "1/2", cap = 1usize << 22);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let element = need(&self.element, "element")?;
        let delta = rational(&need(&self.delta, "delta")?, "delta")?;
        let (ns, cap) = (need(&self.ns, "ns")?, need(&self.cap, "cap")?);
        let rows = with_any_step!(preset.as_str(), d => sn_rows(&d, &element, &ns, &delta, cap))?;
        let mut table = Table::new(&["n", "element", "tv", "tv_float", "member"]);
        for (n, key, tv, member) in &rows {
            let [exact, f] = big(tv);
            table.push(vec![n.to_string(), key.clone(), exact, f, member.to_string()]);
        }
        let members = rows.iter().filter(|r| r.3).count();
        Ok(Report {
            summary: vec![format!("{preset}: `{element}` lies in S_n(δ) for {members} of {} values of n", rows.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}
