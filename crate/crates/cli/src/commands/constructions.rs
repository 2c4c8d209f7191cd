use clap::Args;
use serde::{Deserialize, Serialize};

use lampwalk::constructions::{
    build_delta, copy_check, dinfty_delta, fc_class, plateau_experiment, validate_relative_abelianization, DeltaSpec,
    EmbeddingSpec,
};
use lampwalk::group::{FiniteGroupTable, Group, Perm};

use super::{big, defaults, need, probability, Command};
use crate::error::CliError;
use crate::output::{Report, Table};
use crate::words::parse_word;

/// `dihedral:N`, `cyclic:N` (marked by its subgroup of order 2) or `klein`.
fn lamp_table(spec: &str) -> Result<FiniteGroupTable, CliError> {
    let bad = || CliError::Config(format!("unknown lamp group `{spec}` (dihedral:N, cyclic:N, klein)"));
    let (kind, n) = match spec.split_once(':') {
        Some((k, n)) => (k, Some(n.parse::<usize>().map_err(|_| bad())?)),
        None => (spec, None),
    };
    match (kind, n) {
        ("dihedral", Some(n)) if n >= 3 => Ok(FiniteGroupTable::dihedral(n)?),
        ("cyclic", Some(n)) if n >= 2 && n % 2 == 0 => {
            let mut g = FiniteGroupTable::cyclic(n);
            let half = (n / 2) as u32;
            g.mark("A", vec![0, half]);
            g.mark("B", vec![0, half]);
            Ok(g)
        }
        ("klein", None) => {
            let z2 = FiniteGroupTable::cyclic(2);
            let mut g = z2.direct_product(&z2);
            g.mark("A", vec![0, 2]);
            g.mark("B", vec![0, 1]);
            Ok(g)
        }
        _ => Err(bad()),
    }
}

/// Validates and builds a diagonal product.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DeltaBuild {
    /// delta-d8 or delta-dinfty
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pub ms: Option<Vec<i64>>,
    /// Finite lamp groups replacing the dihedral ones of delta-d8
    #[arg(long, value_delimiter = ',')]
    pub lamps: Option<Vec<String>>,
}

impl Command for DeltaBuild {
    const NAME: &'static str = "delta-build";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "delta-d8", ks = vec![1i64, 2], ms = vec![4i64, 8]);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (ks, ms) = (need(&self.ks, "ks")?, need(&self.ms, "ms")?);
        let mut table = Table::new(&["s", "k", "m", "lamp", "lamp_order", "closure_order", "quotient_order", "holds"]);
        let generators = match preset.as_str() {
            "delta-d8" => {
                let lamps = self.lamps.clone().unwrap_or_else(|| vec!["dihedral:4".into(); ks.len()]);
                let gammas = lamps.iter().map(|l| lamp_table(l)).collect::<Result<Vec<_>, _>>()?;
                for (i, g) in gammas.iter().enumerate() {
                    let (a, b) = (g.marked("A").unwrap_or(&[]), g.marked("B").unwrap_or(&[]));
                    let rel = validate_relative_abelianization(g, a, b);
                    table.push(vec![
                        (i + 1).to_string(),
                        ks.get(i).map_or(String::new(), |k| k.to_string()),
                        ms.get(i).map_or(String::new(), |m| m.to_string()),
                        lamps[i].clone(),
                        g.order_of_group().to_string(),
                        rel.closure_order.to_string(),
                        rel.quotient_order.to_string(),
                        rel.holds().to_string(),
                    ]);
                }
                let d = build_delta(&DeltaSpec { ks, ms, gammas })?;
                d.generators().into_iter().map(|(n, _)| n).collect::<Vec<_>>()
            }
            "delta-dinfty" => {
                if self.lamps.is_some() {
                    return Err(CliError::Config("delta-dinfty has fixed lamp groups".into()));
                }
                let d = dinfty_delta(&ks, &ms)?;
                for (i, (k, m)) in ks.iter().zip(&ms).enumerate() {
                    let row = [(i + 1).to_string(), k.to_string(), m.to_string(), "dinfty".into()];
                    let mut row = row.to_vec();
                    row.extend(["infinite", "infinite", "4", "true"].map(String::from));
                    table.push(row);
                }
                d.generators().into_iter().map(|(n, _)| n).collect()
            }
            other => return Err(CliError::Config(format!("delta-build supports delta-d8 and delta-dinfty, got `{other}`"))),
        };
        Ok(Report {
            summary: vec![format!("{} factors validated; generators {}", table.rows.len(), generators.join(" "))],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// Conjugacy class of an element of a diagonal product, closed under the generators.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FcClass {
    /// delta-d8 or delta-dinfty
    #[arg(long)]
    pub preset: Option<String>,
    /// Word in t, a1, b1, ... or `gamma`
    #[arg(long)]
    pub element: Option<String>,
    #[arg(long)]
    pub cap: Option<usize>,
}

impl Command for FcClass {
    const NAME: &'static str = "fc-class";

    fn fill_defaults(&mut self) {
        defaults!(self; preset = "delta-d8", element = "gamma", cap = 4096usize);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let preset = need(&self.preset, "preset")?;
        let (element, cap) = (need(&self.element, "element")?, need(&self.cap, "cap")?);
        let (keys, in_kernel) = match preset.as_str() {
            "delta-d8" => {
                let d = lampwalk::presets::delta_d8_group();
                let c = fc_class(&d, &parse_word(&d, &element)?, cap)?;
                (c.elements.iter().map(|e| d.key(e)).collect::<Vec<_>>(), c.in_kernel)
            }
            "delta-dinfty" => {
                let d = lampwalk::presets::delta_dinfty_group();
                let c = fc_class(&d, &parse_word(&d, &element)?, cap)?;
                (c.elements.iter().map(|e| d.key(e)).collect(), c.in_kernel)
            }
            other => return Err(CliError::Config(format!("fc-class supports delta-d8 and delta-dinfty, got `{other}`"))),
        };
        let mut table = Table::new(&["index", "element"]);
        for (i, k) in keys.iter().enumerate() {
            table.push(vec![i.to_string(), k.clone()]);
        }
        Ok(Report {
            summary: vec![format!("class of `{element}` has {} elements; in the kernel sum: {in_kernel}", keys.len())],
            tables: vec![table],
            ..Default::default()
        })
    }
}

/// `"0 1"` or `"0 1; 2 3"`: cycles of a permutation.
fn parse_perm(text: &str, degree: usize) -> Result<Perm, CliError> {
    let bad = || CliError::Config(format!("cannot parse permutation `{text}`"));
    let cycles: Vec<Vec<u32>> = text
        .split(';')
        .map(|c| c.split_whitespace().map(|x| x.parse::<u32>().map_err(|_| bad())).collect())
        .collect::<Result<_, _>>()?;
    if cycles.iter().flatten().any(|&x| x as usize >= degree) {
        return Err(bad());
    }
    let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
    Ok(Perm::from_cycles(degree, &refs))
}

/// Products of commutators of translated lamp generators.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CopyCheck {
    /// Involutions as cycles, e.g. `"0 1"`
    #[arg(long, value_delimiter = ',')]
    pub involutions: Option<Vec<String>>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<i64>>,
    /// 1-based index pairs `s:r`, one commutator each
    #[arg(long, value_delimiter = ',')]
    pub pairs: Option<Vec<String>>,
    /// Expected lamp at 0: a permutation, or `commutator` for the product of `[c_s, c_r]`
    #[arg(long)]
    pub target: Option<String>,
}

impl Command for CopyCheck {
    const NAME: &'static str = "copy-check";

    fn fill_defaults(&mut self) {
        defaults!(self;
            involutions = vec!["0 1".to_string(), "0 2".to_string()],
            degree = 3usize,
            ks = vec![1i64, 3],
            pairs = vec!["1:2".to_string()],
            target = "commutator",
        );
    }

    fn execute(&self) -> Result<Report, CliError> {
        let degree = need(&self.degree, "degree")?;
        let perms = need(&self.involutions, "involutions")?
            .iter()
            .map(|t| parse_perm(t, degree))
            .collect::<Result<Vec<_>, _>>()?;
        let f = FiniteGroupTable::from_permutations(&perms, 100_000)?;
        let cs: Vec<u32> = perms.iter().map(|p| f.find_perm(p).expect("generator present")).collect();
        let pairs = need(&self.pairs, "pairs")?
            .iter()
            .map(|p| {
                let (s, r) = p.split_once(':').ok_or_else(|| CliError::Config(format!("pair `{p}` is not s:r")))?;
                let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Config(format!("bad pair `{p}`")));
                Ok((parse(s)?, parse(r)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let spec = EmbeddingSpec::new(f, cs, need(&self.ks, "ks")?)?;
        let target = match need(&self.target, "target")?.as_str() {
            "commutator" => {
                let mut c = spec.f.id();
                for &(s, r) in &pairs {
                    if s == 0 || r == 0 || s > spec.involutions.len() || r > spec.involutions.len() {
                        return Err(CliError::Config(format!("pair ({s}, {r}) is out of range")));
                    }
                    c = spec.f.mul(&c, &spec.f.commutator(spec.involutions[s - 1], spec.involutions[r - 1]));
                }
                c
            }
            t => spec
                .f
                .find_perm(&parse_perm(t, degree)?)
                .ok_or_else(|| CliError::Config(format!("target `{t}` is not in F")))?,
        };
        let r = copy_check(&spec, target, &pairs)?;
        let support: Vec<String> = r.support.iter().map(|(x, v)| format!("{x}:{v}")).collect();
        let mut table = Table::new(&["holds", "doubling", "base", "support", "key", "target"]);
        table.push(vec![
            r.holds.to_string(),
            r.doubling.to_string(),
            r.base.to_string(),
            support.join(" "),
            r.key.clone(),
            spec.f.label(target).to_string(),
        ]);
        Ok(Report {
            summary: vec![format!(
                "product equals the target at 0: {}; doubling condition: {}; support [{}]",
                r.holds,
                r.doubling,
                support.join(" ")
            )],
            tables: vec![table],
            violation: (r.doubling && !r.holds).then(|| "doubling holds but the product differs from the target".into()),
            ..Default::default()
        })
    }
}

/// `½‖μ^(n) − μ^(n+⌈δn⌉)‖₁` for the lazy lamplighter walk with lamps `Z/q`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Plateau {
    #[arg(long)]
    pub lamp_order: Option<usize>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub cap: Option<usize>,
}

impl Command for Plateau {
    const NAME: &'static str = "plateau";

    fn fill_defaults(&mut self) {
        defaults!(self; lamp_order = 2usize, delta = "1/4", n_max = 20usize, cap = 5_000_000usize);
    }

    fn execute(&self) -> Result<Report, CliError> {
        let q = need(&self.lamp_order, "lamp-order")?;
        if q < 2 {
            return Err(CliError::Config("lamp-order must be at least 2".into()));
        }
        let delta = probability(&need(&self.delta, "delta")?, "delta")?;
        let (n_max, cap) = (need(&self.n_max, "n-max")?, need(&self.cap, "cap")?);
        let r = plateau_experiment(&FiniteGroupTable::cyclic(q), delta, n_max, cap)?;
        let mut table = Table::new(&["n", "m", "tv", "tv_float"]);
        for row in &r.rows {
            let [exact, f] = big(&row.tv);
            table.push(vec![row.n.to_string(), row.m.to_string(), exact, f]);
        }
        let [c, cf] = big(&r.c_hat);
        Ok(Report {
            summary: vec![format!("c_hat = {c} ≈ {cf}")],
            tables: vec![table],
            ..Default::default()
        })
    }
}
