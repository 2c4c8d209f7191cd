use std::collections::HashSet;

use rand::Rng;

use super::{CaseTag, CouplingError, CouplingRecord};
use crate::group::Group;
use crate::walk::{trial_rng, Measure, Prob, Sampler, StepDistribution};

/// Coupling of the walks `γ x Z_n` and `x Z̃_n` for `γ` of finite order with
/// a finite conjugacy class.
///
/// The difference `(x Z̃_n)⁻¹ γ x Z_n` always lies in one of the conjugates
/// `C_i` of `⟨γ⟩`. At every step, with probability exactly `ε`, `X` is drawn
/// uniformly from that `C_i` and `X̃ = D X`; otherwise both walks share an
/// increment from `(μ^(R) − ε u_{C_i}) / (1 − ε)`. Each walk alone is a
/// `μ^(R)`-walk and the coupling time is geometric with parameter `ε`.
#[derive(Debug)]
pub struct FcCoupling<G: Group> {
    pub group: G,
    pub gamma: G::Elem,
    pub order: usize,
    pub class: Vec<G::Elem>,
    pub subgroups: Vec<Vec<G::Elem>>,
    pub eps: Prob,
    pub r: usize,
    sets: Vec<HashSet<G::Elem>>,
    residuals: Vec<Sampler<G::Elem>>,
}

/// Conjugacy class of `a` by closure under conjugation by `gens`.
pub fn conjugacy_closure<G: Group>(group: &G, a: &G::Elem, gens: &[G::Elem], cap: usize) -> Result<Vec<G::Elem>, CouplingError> {
    let mut seen: HashSet<G::Elem> = HashSet::new();
    seen.insert(a.clone());
    let mut out = vec![a.clone()];
    let mut head = 0;
    while head < out.len() {
        let c = out[head].clone();
        head += 1;
        for g in gens {
            let d = group.conj(&c, g);
            if seen.insert(d.clone()) {
                if out.len() >= cap {
                    return Err(CouplingError::InfiniteClassSuspected { cap });
                }
                out.push(d);
            }
        }
    }
    Ok(out)
}

impl<G: Group + Clone> FcCoupling<G> {
    pub fn build(
        d: &StepDistribution<G>,
        gamma: G::Elem,
        r: usize,
        class_cap: usize,
        conv_cap: usize,
    ) -> Result<Self, CouplingError> {
        let g = d.group.clone();
        let gens = d.support();
        let order = g
            .order(&gamma, class_cap)
            .ok_or(CouplingError::InfiniteClassSuspected { cap: class_cap })?;
        let mut class = conjugacy_closure(&g, &gamma, &gens, class_cap)?;
        class.sort_by_key(|c| g.key(c));
        let mut subgroups: Vec<Vec<G::Elem>> = Vec::new();
        let mut seen_keys: HashSet<Vec<String>> = HashSet::new();
        for c in &class {
            let mut sub: Vec<G::Elem> = (0..order as i64).map(|j| g.pow(c, j)).collect();
            sub.sort_by_key(|x| g.key(x));
            let keys = sub.iter().map(|x| g.key(x)).collect();
            if seen_keys.insert(keys) {
                subgroups.push(sub);
            }
        }
        let mu_r = d.convolve_exact(r, conv_cap)?;
        let mut inf: Option<Prob> = None;
        for sub in &subgroups {
            for a in sub {
                let m = mu_r.mass(a);
                if m == Prob::from_integer(0) {
                    return Err(CouplingError::NotInSupport(g.key(a)));
                }
                inf = Some(inf.map_or(m, |c: Prob| c.min(m)));
            }
        }
        let eps = inf.expect("nonempty") * Prob::from_integer(order as u128);
        let mut residuals = Vec::new();
        if eps < Prob::from_integer(1) {
            for sub in &subgroups {
                let u = Measure::uniform(sub);
                let res = mu_r.residual(&u, eps)?;
                let back = Measure::mixture(Prob::from_integer(1) - eps, &res, eps, &u)?;
                if !back.same_as(&mu_r) {
                    return Err(CouplingError::MixtureMismatch);
                }
                residuals.push(Sampler::new(&res, |a| g.key(a)));
            }
        }
        let sets = subgroups.iter().map(|s| s.iter().cloned().collect()).collect();
        Ok(Self {
            group: g,
            gamma,
            order,
            class,
            subgroups,
            eps,
            r,
            sets,
            residuals,
        })
    }

    /// Runs one pair started from `x`; `horizon` counts `μ^(R)`-steps.
    pub fn run(&self, x: &G::Elem, horizon: usize, seed: u64, trial: u64, full: bool) -> Result<CouplingRecord, CouplingError> {
        let g = &self.group;
        let mut rng = trial_rng(seed, trial);
        let mut diff = g.conj(&self.gamma, &g.inv(x));
        let mut rec = CouplingRecord {
            seed,
            trial,
            horizon,
            tau: None,
            tau_r: None,
            steps_run: 0,
            on_level_visits: 0,
            case_tags: Vec::new(),
            difference_trace: Vec::new(),
        };
        if g.is_identity(&diff) {
            rec.tau = Some(0);
            return Ok(rec);
        }
        if full {
            rec.difference_trace.push(g.key(&diff));
        }
        for n in 0..horizon {
            let i = self
                .sets
                .iter()
                .position(|s| s.contains(&diff))
                .ok_or_else(|| CouplingError::InvariantViolation {
                    step: n,
                    difference: g.key(&diff),
                })?;
            let u = rng.gen_range(0..*self.eps.denom());
            let tag = if u < *self.eps.numer() {
                rec.tau = Some(n + 1);
                diff = g.identity();
                CaseTag::C
            } else {
                let a = self.residuals[i].sample(&mut rng);
                diff = g.mul(&g.mul(&g.inv(a), &diff), a);
                CaseTag::A
            };
            rec.steps_run = n + 1;
            if full {
                rec.case_tags.push(tag);
                rec.difference_trace.push(g.key(&diff));
            }
            if rec.tau.is_some() {
                break;
            }
        }
        Ok(rec)
    }
}

/// Builds the coupling for `γ` and runs one pair from `x`.
pub fn couple_fc<G: Group + Clone>(
    d: &StepDistribution<G>,
    gamma: G::Elem,
    x: &G::Elem,
    horizon: usize,
    seed: u64,
    class_cap: usize,
) -> Result<CouplingRecord, CouplingError> {
    let c = FcCoupling::build(d, gamma, 1, class_cap, 1 << 20)?;
    c.run(x, horizon, seed, 0, true)
}
