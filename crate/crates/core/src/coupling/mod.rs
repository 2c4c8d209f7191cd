//! Couplings of two `μ^(R)`-walks that merge through a finite subgroup.

mod fc;

pub use fc::{conjugacy_closure, couple_fc, FcCoupling};

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Group, GroupError, ZProjection};
use crate::walk::{trial_rng, Measure, MeasureError, Prob, Sampler, StepDistribution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("element {0} of F is not in the support of the convolution power")]
    NotInSupport(String),
    #[error("F is not a subgroup")]
    NotSubgroup,
    #[error("F is not normalized by {0}")]
    NotNormal(String),
    #[error("starting difference is not in the conjugate of F at its level")]
    GammaOutsideLevel,
    #[error("projection of the step law to Z is not a simple random walk")]
    NotSimpleProjection,
    #[error("coupling mixture identity fails")]
    MixtureMismatch,
    #[error("invariant violated at step {step}: difference {difference} left the tracked set")]
    InvariantViolation { step: usize, difference: String },
    #[error("conjugacy class exceeded {cap} elements; suspected infinite")]
    InfiniteClassSuspected { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// off-level, shared increment
    A,
    /// on-level, shared increment from the residual law
    B,
    /// on-level, matching increment
    C,
    PostCoupled,
}

/// Trace of one coupled pair of walks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingRecord {
    pub seed: u64,
    pub trial: u64,
    pub horizon: usize,
    /// Coupling time; `None` means not coupled by `horizon`.
    pub tau: Option<usize>,
    /// Exit time of `[-r, r]` by the projected walk, when requested.
    pub tau_r: Option<usize>,
    pub steps_run: usize,
    pub on_level_visits: usize,
    /// Per-step tags and difference keys (full mode only).
    pub case_tags: Vec<CaseTag>,
    pub difference_trace: Vec<String>,
}

impl CouplingRecord {
    pub fn coupled_by(&self, n: usize) -> bool {
        self.tau.is_some_and(|t| t <= n)
    }

    /// Coupling happened strictly before exit (or no exit was observed).
    pub fn coupled_before_exit(&self) -> bool {
        match (self.tau, self.tau_r) {
            (Some(t), Some(e)) => t <= e,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub horizon: usize,
    /// Track both positions and per-step tags; verify `φ` synchronization and
    /// the difference identity directly.
    pub full: bool,
    pub stop_at_coupling: bool,
    /// Stop when `|φ(Z_n)| > r`.
    pub exit_radius: Option<i64>,
}

impl RunOptions {
    pub fn lean(horizon: usize) -> Self {
        Self {
            horizon,
            full: false,
            stop_at_coupling: true,
            exit_radius: None,
        }
    }

    pub fn full(horizon: usize) -> Self {
        Self {
            horizon,
            full: true,
            stop_at_coupling: false,
            exit_radius: None,
        }
    }
}

/// Inputs of the coupling through a finite subgroup `F` of the kernel of `φ`.
#[derive(Debug)]
pub struct CouplingConfig<G: Group> {
    pub group: G,
    pub r: usize,
    pub f: Vec<G::Elem>,
    pub eps: Prob,
    pub gamma: G::Elem,
    pub x: i64,
    pub mu_r: Measure<G::Elem>,
    pub residual: Measure<G::Elem>,
    mu_sampler: Sampler<G::Elem>,
    residual_sampler: Sampler<G::Elem>,
    mu_index: HashMap<G::Elem, usize>,
    f_set: HashSet<G::Elem>,
}

/// Checks that `φ` pushes `d` forward to `½δ₁ + ½δ₋₁`.
pub fn projects_to_srw<G: ZProjection>(d: &StepDistribution<G>) -> bool {
    let proj = d.measure().map(|g| d.group.phi(g));
    proj.len() == 2 && proj.mass(&1) == Prob::new(1, 2) && proj.mass(&-1) == Prob::new(1, 2)
}

impl<G: ZProjection + Clone + Sync> CouplingConfig<G> {
    /// Validates the data: `F` is a subgroup inside `supp μ^(R)`, `ε > 0`,
    /// the residual law is non-negative and recombines to `μ^(R)`, `γ` lies
    /// in `F^x`. With `check_normality`, also checks that every `φ = 0` atom
    /// of `μ^(R)` normalizes `F` and that two lifts of `x` give the same `F^x`.
    pub fn build(
        d: &StepDistribution<G>,
        r: usize,
        f: Vec<G::Elem>,
        gamma: G::Elem,
        x: i64,
        check_normality: bool,
        cap: usize,
    ) -> Result<Self, CouplingError> {
        let g = d.group.clone();
        if !projects_to_srw(d) {
            return Err(CouplingError::NotSimpleProjection);
        }
        let fset: HashSet<G::Elem> = f.iter().cloned().collect();
        let closed = fset.contains(&g.identity())
            && f.iter().all(|a| f.iter().all(|b| fset.contains(&g.mul(a, b))));
        if !closed || fset.len() != f.len() {
            return Err(CouplingError::NotSubgroup);
        }
        if f.iter().any(|a| g.phi(a) != 0) {
            return Err(CouplingError::NotSubgroup);
        }
        let mu_r = d.convolve_exact(r, cap)?;
        let mut min_mass: Option<Prob> = None;
        for a in &f {
            let m = mu_r.mass(a);
            if m == Prob::from_integer(0) {
                return Err(CouplingError::NotInSupport(g.key(a)));
            }
            min_mass = Some(min_mass.map_or(m, |c: Prob| c.min(m)));
        }
        let eps = min_mass.expect("F is nonempty") * Prob::from_integer(f.len() as u128);
        let u_f = Measure::uniform(&f);
        let residual = mu_r.residual(&u_f, eps)?;
        let recombined = Measure::mixture(Prob::from_integer(1) - eps, &residual, eps, &u_f)?;
        if !recombined.same_as(&mu_r) {
            return Err(CouplingError::MixtureMismatch);
        }
        if check_normality {
            let mut kernel_atoms: Vec<G::Elem> =
                mu_r.support().filter(|a| g.phi(a) == 0).cloned().collect();
            kernel_atoms.sort_by_key(|a| g.key(a));
            for k in &kernel_atoms {
                if f.iter().any(|a| !fset.contains(&g.conj(a, k))) {
                    return Err(CouplingError::NotNormal(g.key(k)));
                }
            }
            let l1 = g.lift(x);
            if let Some(k) = kernel_atoms.iter().find(|k| !g.is_identity(k)) {
                let l2 = g.mul(&l1, k);
                let s1: HashSet<_> = f.iter().map(|a| g.conj(a, &l1)).collect();
                let s2: HashSet<_> = f.iter().map(|a| g.conj(a, &l2)).collect();
                if s1 != s2 {
                    return Err(CouplingError::NotNormal(g.key(k)));
                }
            }
        }
        let mu_sampler = Sampler::new(&mu_r, |a| g.key(a));
        let residual_sampler = Sampler::new(&residual, |a| g.key(a));
        let mu_index = mu_sampler
            .elems()
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let cfg = Self {
            group: g,
            r,
            f,
            eps,
            gamma,
            x,
            mu_r,
            residual,
            mu_sampler,
            residual_sampler,
            mu_index,
            f_set: fset,
        };
        if !cfg.in_level(&cfg.gamma, x) {
            return Err(CouplingError::GammaOutsideLevel);
        }
        Ok(cfg)
    }

    /// Membership in `F^y = lift(y) F lift(y)⁻¹`.
    pub fn in_level(&self, a: &G::Elem, y: i64) -> bool {
        let l = self.group.lift(y);
        let back = self.group.mul(&self.group.mul(&self.group.inv(&l), a), &l);
        self.f_set.contains(&back)
    }

    /// Atoms of `μ^(R)` in sampling order.
    pub fn atoms(&self) -> &[G::Elem] {
        self.mu_sampler.elems()
    }

    pub fn atom_probabilities(&self) -> Vec<f64> {
        (0..self.atoms().len())
            .map(|i| {
                let w = self.mu_sampler.weight(i);
                *w.numer() as f64 / *w.denom() as f64
            })
            .collect()
    }

    /// Runs one coupled pair. `increments` receives the `μ^(R)`-atom
    /// indices of `X_{n+1}` and `X̃_{n+1}` at every step.
    pub fn run(
        &self,
        seed: u64,
        trial: u64,
        opts: RunOptions,
        mut increments: Option<&mut Vec<(usize, usize)>>,
    ) -> Result<CouplingRecord, CouplingError> {
        let g = &self.group;
        let mut rng = trial_rng(seed, trial);
        let mut rec = CouplingRecord {
            seed,
            trial,
            horizon: opts.horizon,
            tau: None,
            tau_r: None,
            steps_run: 0,
            on_level_visits: 0,
            case_tags: Vec::new(),
            difference_trace: Vec::new(),
        };
        let mut diff = self.gamma.clone();
        let mut phi = 0i64;
        let (mut z, mut zt) = (g.identity(), g.identity());
        if g.is_identity(&diff) {
            rec.tau = Some(0);
        }
        let exited = |phi: i64| opts.exit_radius.is_some_and(|r| phi.abs() > r);
        if exited(phi) {
            rec.tau_r = Some(0);
        }
        if opts.full {
            rec.difference_trace.push(g.key(&diff));
        }
        for n in 0..opts.horizon {
            let coupled = rec.tau.is_some();
            if (coupled && opts.stop_at_coupling) || (rec.tau_r.is_some() && opts.exit_radius.is_some()) {
                break;
            }
            if !coupled && !self.in_level(&diff, self.x - phi) {
                return Err(CouplingError::InvariantViolation {
                    step: n,
                    difference: g.key(&diff),
                });
            }
            let (tag, xs, xt) = if coupled {
                let a = self.mu_sampler.sample(&mut rng).clone();
                (CaseTag::PostCoupled, a.clone(), a)
            } else if phi != self.x {
                let a = self.mu_sampler.sample(&mut rng).clone();
                (CaseTag::A, a.clone(), a)
            } else {
                rec.on_level_visits += 1;
                let u = rng.gen_range(0..*self.eps.denom());
                if u < *self.eps.numer() {
                    let a = self.f[rng.gen_range(0..self.f.len())].clone();
                    let at = g.mul(&diff, &a);
                    (CaseTag::C, a, at)
                } else {
                    let a = self.residual_sampler.sample(&mut rng).clone();
                    (CaseTag::B, a.clone(), a)
                }
            };
            match tag {
                CaseTag::C => {
                    diff = g.identity();
                    rec.tau = Some(n + 1);
                }
                CaseTag::A | CaseTag::B => diff = g.mul(&g.mul(&g.inv(&xs), &diff), &xs),
                CaseTag::PostCoupled => {}
            }
            phi += g.phi(&xs);
            if let Some(buf) = increments.as_deref_mut() {
                buf.push((self.mu_index[&xs], self.mu_index[&xt]));
            }
            if opts.full {
                z = g.mul(&z, &xs);
                zt = g.mul(&zt, &xt);
                let direct = g.mul(&g.mul(&g.inv(&zt), &self.gamma), &z);
                if g.phi(&z) != g.phi(&zt) || direct != diff {
                    return Err(CouplingError::InvariantViolation {
                        step: n + 1,
                        difference: g.key(&direct),
                    });
                }
                rec.case_tags.push(tag);
                rec.difference_trace.push(g.key(&diff));
            }
            rec.steps_run = n + 1;
            if exited(phi) && rec.tau_r.is_none() {
                rec.tau_r = Some(n + 1);
            }
        }
        Ok(rec)
    }
}

/// One tail point: `P̂(τ > n)` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailPoint {
    pub n: usize,
    pub p_hat: f64,
    pub stderr: f64,
    pub sqrt_n_times_p: f64,
}

fn bernoulli_point(n: usize, hits: usize, trials: usize) -> TailPoint {
    let p = hits as f64 / trials as f64;
    TailPoint {
        n,
        p_hat: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        sqrt_n_times_p: (n as f64).sqrt() * p,
    }
}

/// Monte Carlo `P(τ > n)` for each `n` in `ns`.
pub fn tail_profile<G>(cfg: &CouplingConfig<G>, ns: &[usize], trials: usize, seed: u64) -> Result<Vec<TailPoint>, CouplingError>
where
    G: ZProjection + Clone + Sync + Send,
{
    let horizon = ns.iter().copied().max().unwrap_or(0);
    let taus: Vec<Option<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| cfg.run(seed, t, RunOptions::lean(horizon), None).map(|r| r.tau))
        .collect::<Result<_, _>>()?;
    Ok(ns
        .iter()
        .map(|&n| {
            let hits = taus.iter().filter(|t| t.map_or(true, |t| t > n)).count();
            bernoulli_point(n, hits, trials)
        })
        .collect())
}

/// Exact `P(τ > n)` from the law of the projected walk: each visit to level
/// `x` before coupling survives with probability `1 − ε` and then steps with
/// the projection of the residual law.
pub fn tail_exact<G>(cfg: &CouplingConfig<G>, ns: &[usize]) -> Vec<f64>
where
    G: ZProjection + Clone + Sync,
{
    let to_f = |p: Prob| *p.numer() as f64 / *p.denom() as f64;
    let step: Vec<(i64, f64)> = cfg
        .mu_r
        .map(|a| cfg.group.phi(a))
        .iter()
        .map(|(y, p)| (*y, to_f(p)))
        .collect();
    let res: Vec<(i64, f64)> = cfg
        .residual
        .map(|a| cfg.group.phi(a))
        .iter()
        .map(|(y, p)| (*y, to_f(p)))
        .collect();
    let keep = 1.0 - to_f(cfg.eps);
    let horizon = ns.iter().copied().max().unwrap_or(0);
    let mut mass: BTreeMap<i64, f64> = BTreeMap::new();
    if !cfg.group.is_identity(&cfg.gamma) {
        mass.insert(0, 1.0);
    }
    let mut out = Vec::new();
    for n in 0..=horizon {
        if ns.contains(&n) {
            out.push(mass.values().sum());
        }
        let mut next: BTreeMap<i64, f64> = BTreeMap::new();
        for (&p, &w) in &mass {
            let (law, scale) = if p == cfg.x { (&res, keep) } else { (&step, 1.0) };
            for &(y, q) in law {
                *next.entry(p + y).or_insert(0.0) += w * scale * q;
            }
        }
        mass = next;
    }
    out
}

/// One point of the exit profile: `P̂(τ > τ_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitPoint {
    pub r: i64,
    pub p_hat: f64,
    pub stderr: f64,
    pub r_times_p: f64,
}

/// Runs the coupling until it merges or the projected walk leaves `[-r, r]`.
pub fn couple_until_exit<G>(cfg: &CouplingConfig<G>, r: i64, seed: u64, trial: u64) -> Result<CouplingRecord, CouplingError>
where
    G: ZProjection + Clone + Sync,
{
    let opts = RunOptions {
        horizon: usize::MAX,
        full: false,
        stop_at_coupling: true,
        exit_radius: Some(r),
    };
    cfg.run(seed, trial, opts, None)
}

pub fn exit_profile<G>(cfg: &CouplingConfig<G>, rs: &[i64], trials: usize, seed: u64) -> Result<Vec<ExitPoint>, CouplingError>
where
    G: ZProjection + Clone + Sync + Send,
{
    rs.iter()
        .map(|&r| {
            let fails: Vec<bool> = (0..trials as u64)
                .into_par_iter()
                .map(|t| couple_until_exit(cfg, r, seed ^ (r as u64).rotate_left(32), t).map(|rec| !rec.coupled_before_exit()))
                .collect::<Result<_, _>>()?;
            let hits = fails.iter().filter(|&&f| f).count();
            let p = hits as f64 / trials as f64;
            Ok(ExitPoint {
                r,
                p_hat: p,
                stderr: (p * (1.0 - p) / trials as f64).sqrt(),
                r_times_p: r as f64 * p,
            })
        })
        .collect()
}

/// Outcome of running the coupling with a subgroup that is not normal in the kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonNormalReport {
    pub seed: u64,
    pub horizon: usize,
    pub violation_step: Option<usize>,
    pub difference: Option<String>,
    pub tau: Option<usize>,
}

/// Runs the coupling machinery on `cfg` (built without the normality
/// checks) and reports the first step where the difference leaves the
/// tracked conjugate of `F`.
pub fn non_normal_demo<G>(cfg: &CouplingConfig<G>, seed: u64, horizon: usize) -> NonNormalReport
where
    G: ZProjection + Clone + Sync,
{
    match cfg.run(seed, 0, RunOptions::lean(horizon), None) {
        Err(CouplingError::InvariantViolation { step, difference }) => NonNormalReport {
            seed,
            horizon,
            violation_step: Some(step),
            difference: Some(difference),
            tau: None,
        },
        Ok(rec) => NonNormalReport {
            seed,
            horizon,
            violation_step: None,
            difference: None,
            tau: rec.tau,
        },
        Err(e) => panic!("unexpected coupling failure: {e}"),
    }
}
