use clap::Args;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use lampwalk::group::{Group, Integers};
use lampwalk::harmonic::{
    cocycle_mean, da_build, da_energy, da_energy_closed_form, da_harmonic, da_rule_energy_limit, da_template, eta_check,
    growth_profile, harmonicity_residual, symz_field, symz_graph, symz_step, theta_step, voltage_solve, zwz_cocycle,
    zwz_cocycle_identity, RootTreatment, VoltageMethod, VoltageParams, ZwZ, DEFAULT_TOL,
};
use lampwalk::walk::{fmt_big, trial_rng, Measure, Prob, Sampler, StepDistribution};

use super::{big, defaults, float, need, rational, rotation_group, Command};
use crate::error::CliError;
use crate::output::{Report, Table};

/// Exact harmonicity residual of the Sym(Z)⋊Z field.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct HarmonicVerify {
    /// symz
    #[arg(long)]
    pub preset: Option<String>,
    /// Residuals are checked at every |x| ≤ window
    #[arg(long)]
    pub window: Option<i64>,
}

impl Command for HarmonicVerify {
    const NAME: &'static str = "harmonic-verify";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "symz", window = 1000i64);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        if preset != "symz" {
            return Err(CliError::Config(format!("harmonic-verify supports `symz`, got `{preset}`")));
        }
        let window = need(&self.window, "window")?;
        if window < 1 {
            return Err(CliError::Config("window must be positive".into()));
        }
        let g = symz_graph(window + 1)?;
        let r = harmonicity_residual(&g, &symz_field(&g), &symz_step())?;
        let mut rows: Vec<(i64, String)> = r.per_vertex.iter().map(|(v, s)| (*g.point(*v), s.to_string())).collect();
        rows.sort();
        let mut table = Table::new(&["x", "residual"]);
        for (x, s) in &rows {
            table.push(vec![x.to_string(), s.clone()]);
        }
        let nonzero = r.per_vertex.iter().filter(|(_, s)| !s.is_zero()).count();
        Ok(Report {
            summary: vec![format!("{} points checked, {nonzero} nonzero residuals, max |residual| = {}", rows.len(), r.max_abs)],
            tables: vec![table],
            violation: (nonzero > 0).then(|| format!("{nonzero} points with nonzero residual")),
            ..Default::default()
        })
    }
}

fn root_treatment(s: &str) -> Result<RootTreatment, CliError> {
    match s {
        "pinned" => Ok(RootTreatment::Pinned),
        "free" => Ok(RootTreatment::Free),
        "linear-ray" => Ok(RootTreatment::LinearRay),
        other => Err(CliError::Config(format!("root must be pinned, free or linear-ray, got `{other}`"))),
    }
}

/// Dirichlet solve on the truncated Schreier graph of the discrete affine group.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DaHarmonic {
    /// Tree branching: the tree is (q+1)-regular
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub ray_len: Option<usize>,
    /// Gradient scale, rational
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// pinned, free or linear-ray
    #[arg(long)]
    pub root: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Command for DaHarmonic {
    const NAME: &'static str = "da-harmonic";

    fn fill_defaults(&mut self) {
        defaults!(self; q = 2usize, depth = 8usize, ray_len = 8usize, a = "1", root = "pinned", tol = 1e-13);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let (q, depth, ray_len) = (need(&self.q, "q")?, need(&self.depth, "depth")?, need(&self.ray_len, "ray-len")?);
        let a = rational(&need(&self.a, "a")?, "a")?;
        let root = root_treatment(&need(&self.root, "root")?)?;
        let tol = need(&self.tol, "tol")?;
        let g = da_build(rotation_group(q)?, depth, ray_len)?;
        let s = da_harmonic(&g, &a, root, tol)?;
        let mut table = Table::new(&["from", "to", "kind", "depth", "template", "solved", "relative", "touches_root"]);
        for e in &s.edges {
            table.push(vec![
                e.from.clone(),
                e.to.clone(),
                format!("{:?}", e.kind).to_lowercase(),
                e.depth.to_string(),
                fmt_big(&e.template),
                float(e.solved),
                float(e.relative),
                e.touches_root.to_string(),
            ]);
        }
        let defects: Vec<String> = s.template_defects.iter().map(|(k, r)| format!("{k}: {}", fmt_big(r))).collect();
        Ok(Report {
            summary: vec![
                format!("{} vertices, {} core edges compared", g.graph.len(), s.edges.len()),
                format!(
                    "max relative gradient deviation {:.3e} off the root edges, {:.3e} overall",
                    s.max_relative(false),
                    s.max_relative(true)
                ),
                format!("CG: {} iterations, residual {:.3e}", s.cg.iterations, s.cg.residual),
                format!("template residuals: [{}]", defects.join(", ")),
                format!(
                    "root ray gradient {} with energy {} per edge",
                    fmt_big(&s.forced_root_gradient),
                    fmt_big(&s.root_ray_energy_per_edge)
                ),
            ],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Partial sums of the level-by-level energy of the gradient template.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DaEnergy {
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
}

impl Command for DaEnergy {
    const NAME: &'static str = "da-energy";

    fn fill_defaults(&mut self) {
        defaults!(self; q = 2usize, a = "1", levels = 13usize);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let (q, levels) = (need(&self.q, "q")?, need(&self.levels, "levels")?);
        if q < 2 || levels == 0 {
            return Err(CliError::Config("need q ≥ 2 and at least one level".into()));
        }
        let a = rational(&need(&self.a, "a")?, "a")?;
        let e = da_energy(q, &a, levels);
        let mut table = Table::new(&["n", "partial", "partial_float", "gap_float"]);
        for (n, p) in e.partial.iter().enumerate() {
            let [exact, f] = big(p);
            table.push(vec![n.to_string(), exact, f, big(&(&e.limit - p))[1].clone()]);
        }
        let closed = da_energy_closed_form(q, &a);
        Ok(Report {
            summary: vec![
                format!("limit {} (closed form {}, agree: {})", fmt_big(&e.limit), fmt_big(&closed), closed == e.limit),
                format!("gradient-rule energy limit {}", fmt_big(&da_rule_energy_limit(q, &a))),
            ],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Green's function of simple random walk on a box in Z^d.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Voltage {
    #[arg(long)]
    pub d: Option<usize>,
    /// Odd box side
    #[arg(long)]
    pub side: Option<usize>,
    /// Value at the origin after shifting
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// direct or monte-carlo
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub walks: Option<usize>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub allow_recurrent: Option<bool>,
    /// axis (first coordinate axis) or full (whole box)
    #[arg(long)]
    pub profile: Option<String>,
}

impl Voltage {
    fn params(&self) -> Result<VoltageParams, CliError> {
        let mut p = VoltageParams::direct(need(&self.d, "d")?, need(&self.side, "side")?, need(&self.a, "a")?);
        p.allow_recurrent = need(&self.allow_recurrent, "allow-recurrent")?;
        p.method = match need(&self.method, "method")?.as_str() {
            "direct" => VoltageMethod::Direct { tol: need(&self.tol, "tol")? },
            "monte-carlo" => VoltageMethod::MonteCarlo {
                walks: need(&self.walks, "walks")?,
                max_len: need(&self.max_len, "max-len")?,
                seed: need(&self.seed, "seed")?,
            },
            other => return Err(CliError::Config(format!("method must be direct or monte-carlo, got `{other}`"))),
        };
        if p.side % 2 == 0 || p.side < 3 {
            return Err(CliError::Config("side must be odd and at least 3".into()));
        }
        Ok(p)
    }
}

impl Command for Voltage {
    const NAME: &'static str = "voltage";

    fn fill_defaults(&mut self) {
        defaults!(self;
            d = 3usize,
            side = 41usize,
            a = -0.5,
            method = "direct",
            tol = DEFAULT_TOL,
            walks = 1_000_000usize,
            max_len = 10_000usize,
            seed = 1u64,
            allow_recurrent = false,
            profile = "axis",
        );
    }

    fn execute(&self) -> Result<Report, CliError> {
        let p = self.params()?;
        let profile = need(&self.profile, "profile")?;
        if !matches!(profile.as_str(), "axis" | "full") {
            return Err(CliError::Config(format!("profile must be axis or full, got `{profile}`")));
        }
        let v = voltage_solve(&p)?;
        let mut table = Table::new(&["x", "raw", "value"]);
        let h = v.half();
        let points: Vec<Vec<i64>> = if profile == "axis" {
            (-h..=h)
                .map(|k| {
                    let mut x = vec![0; v.d];
                    x[0] = k;
                    x
                })
                .collect()
        } else {
            (0..v.raw.len()).map(|i| v.point(i)).collect()
        };
        for x in &points {
            let i = v.index(x).expect("inside the box");
            let label: Vec<String> = x.iter().map(|c| c.to_string()).collect();
            table.push(vec![label.join(" "), float(v.raw[i]), float(v.value(x))]);
        }
        Ok(Report {
            summary: vec![
                if v.origin_stderr > 0.0 {
                    format!("raw value at the origin {:.6} ± {:.2e}", v.raw_origin(), v.origin_stderr)
                } else {
                    format!("raw value at the origin {:.6}", v.raw_origin())
                },
                format!("sup harmonicity residual off the origin {:.3e}", v.residual_sup(false)),
            ],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Mean of the voltage cocycle under the lazy lamplighter step law.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EtaCheck {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub side: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Command for EtaCheck {
    const NAME: &'static str = "eta-check";

    fn fill_defaults(&mut self) {
        defaults!(self; d = 3usize, side = 41usize, a = -0.5, tol = DEFAULT_TOL);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let mut p = VoltageParams::direct(need(&self.d, "d")?, need(&self.side, "side")?, need(&self.a, "a")?);
        p.method = VoltageMethod::Direct { tol: need(&self.tol, "tol")? };
        if p.side % 2 == 0 || p.side < 3 {
            return Err(CliError::Config("side must be odd and at least 3".into()));
        }
        let v = voltage_solve(&p)?;
        let e = eta_check(&v)?;
        let mut table = Table::new(&["d", "side", "a", "norm", "at_origin", "lamp_slice_exact"]);
        table.push(vec![
            p.d.to_string(),
            p.side.to_string(),
            p.a.to_string(),
            float(e.norm),
            float(e.at_origin),
            e.lamp_slice_exact.to_string(),
        ]);
        Ok(Report {
            summary: vec![format!("‖η-mean of b‖ = {:.3e}, lamp slice exact: {}", e.norm, e.lamp_slice_exact)],
            tables: vec![table],
            violation: (!e.lamp_slice_exact).then(|| "lamp slice differs from 2a δ₀".to_string()),
            ..Default::default()
        })
    }
}

/// Cocycle identity of the lamp-reading cocycle on random pairs, and its
/// mean under `θ = ½(μ + ν)`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ZwzCocycle {
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub window: Option<i64>,
}

impl Command for ZwzCocycle {
    const NAME: &'static str = "zwz-cocycle";

    fn fill_defaults(&mut self) {
        defaults!(self; pairs = 1000usize, max_len = 8usize, seed = 1u64, window = 40i64);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let (pairs, max_len) = (need(&self.pairs, "pairs")?, need(&self.max_len, "max-len")?);
        let (seed, window) = (need(&self.seed, "seed")?, need(&self.window, "window")?);
        let w = ZwZ::new(Integers, Integers);
        // Words of uniform length 0..=max_len, uniform letters t^±1, s^±1, s².
        let gens = [w.base_elem(1), w.base_elem(-1), w.lamp_at(0, 1), w.lamp_at(0, -1), w.lamp_at(0, 2)];
        let lens: Vec<usize> = (0..=max_len).collect();
        let idx: Vec<usize> = (0..gens.len()).collect();
        let len_sampler = Sampler::new(&Measure::uniform(&lens), |x| *x);
        let gen_sampler = Sampler::new(&Measure::uniform(&idx), |x| *x);
        let mut rng = trial_rng(seed, 0);
        let mut random_word = || {
            let len = *len_sampler.sample(&mut rng);
            let word: Vec<usize> = (0..len).map(|_| *gen_sampler.sample(&mut rng)).collect();
            w.product(word.iter().map(|&i| &gens[i]))
        };
        let mut table = Table::new(&["pair", "g1", "g2", "defect_norm_sq"]);
        let mut failures = 0;
        for i in 0..pairs {
            let (a, b) = (random_word(), random_word());
            let defect = zwz_cocycle_identity(&a, &b, window)?;
            failures += usize::from(!defect.is_zero());
            table.push(vec![i.to_string(), w.key(&a), w.key(&b), fmt_big(&defect.norm_sq())]);
        }
        let half = Prob::new(1, 2);
        let mu = StepDistribution::new(Integers, vec![(1, half), (-1, half)])?;
        let nu = StepDistribution::new(Integers, vec![(1, half), (-1, half)])?;
        let mean = cocycle_mean(&theta_step(&mu, &nu), |g| zwz_cocycle(g, window))?;
        let violation = if failures > 0 {
            Some(format!("{failures} pairs violate the cocycle identity"))
        } else if !mean.is_zero() {
            Some("the θ-mean of the cocycle is not zero".to_string())
        } else {
            None
        };
        Ok(Report {
            summary: vec![format!("{failures} of {pairs} pairs fail the identity; θ-mean zero: {}", mean.is_zero())],
            tables: vec![table],
            violation,
            ..Default::default()
        })
    }
}

/// `M(n) = max |h|` over balls of the Schreier graph.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Growth {
    /// symz or da-q2
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<usize>>,
    /// Graph size: window for symz, tree depth for da-q2
    #[arg(long)]
    pub size: Option<usize>,
}

impl Command for Growth {
    const NAME: &'static str = "growth";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "symz", radii = vec![1usize, 2, 4, 8, 16], size = 32usize);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (radii, size) = (need(&self.radii, "radii")?, need(&self.size, "size")?);
        let rows = match preset.as_str() {
            "symz" => {
                let g = symz_graph(size as i64)?;
                growth_profile(&g, &symz_field(&g), &radii)?
            }
            "da-q2" => {
                let g = da_build(rotation_group(2)?, size, 2)?;
                let one = BigRational::from_integer(1.into());
                growth_profile(&g.graph, &da_template(&g, &one, RootTreatment::Pinned), &radii)?
            }
            other => return Err(CliError::Config(format!("growth supports symz and da-q2, got `{other}`"))),
        };
        let mut table = Table::new(&["n", "M", "M_over_n", "log_M_over_n"]);
        for r in &rows {
            table.push(vec![r.n.to_string(), float(r.m), float(r.m_over_n), float(r.log_m_over_n)]);
        }
        Ok(Report {
            summary: vec![format!("{preset}: growth at {} radii", rows.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}
