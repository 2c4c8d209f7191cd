use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::measure::{Measure, Prob};
use super::step::StepDistribution;
use crate::group::{word_length_lamplighter_line, Group, Integers, Wreath, WreathElement, ZProjection};

/// Identifier of the random number generator, written into every output.
pub const RNG_ID: &str = "ChaCha8Rng/rand_chacha-0.3/seed_from_u64+set_stream(trial)";

/// The generator for trial `trial` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Exact inverse-CDF sampler over a measure with a common denominator.
#[derive(Debug, Clone)]
pub struct Sampler<E> {
    elems: Vec<E>,
    cum: Vec<u128>,
    denom: u128,
}

impl<E: Clone> Sampler<E> {
    /// Atoms are ordered by `key` so that sampling does not depend on hash order.
    /// Panics if the measure has lost mass.
    pub fn new<K: Ord>(m: &Measure<E>, key: impl Fn(&E) -> K) -> Self
    where
        E: Eq + std::hash::Hash + std::fmt::Debug,
    {
        assert!(!m.is_truncated(), "cannot sample a truncated measure");
        let mut atoms: Vec<(E, u128)> = m.raw().map(|(e, n)| (e.clone(), n)).collect();
        atoms.sort_by(|a, b| key(&a.0).cmp(&key(&b.0)));
        let mut acc = 0u128;
        let mut cum = Vec::with_capacity(atoms.len());
        let mut elems = Vec::with_capacity(atoms.len());
        for (e, n) in atoms {
            acc += n;
            cum.push(acc);
            elems.push(e);
        }
        Self {
            elems,
            cum,
            denom: acc,
        }
    }

    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.gen_range(0..self.denom);
        self.cum.partition_point(|&c| c <= u)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> &E {
        &self.elems[self.sample_index(rng)]
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    /// Probability of the atom at `index`.
    pub fn weight(&self, index: usize) -> Prob {
        let lo = if index == 0 { 0 } else { self.cum[index - 1] };
        Prob::new(self.cum[index] - lo, self.denom)
    }
}

impl<G: Group> StepDistribution<G> {
    pub fn sampler(&self) -> Sampler<G::Elem> {
        Sampler::new(self.measure(), |x| self.group.key(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace<E> {
    pub seed: u64,
    pub steps: Vec<E>,
    /// `Z_0 = e, Z_1, ..., Z_n`.
    pub positions: Vec<E>,
    pub projections: Vec<i64>,
}

/// A reproducible sample path `Z_m = X_1 ... X_m`.
pub fn sample_walk<G: ZProjection>(d: &StepDistribution<G>, n: usize, seed: u64) -> WalkTrace<G::Elem> {
    let sampler = d.sampler();
    let mut rng = trial_rng(seed, 0);
    let g = &d.group;
    let mut z = g.identity();
    let mut trace = WalkTrace {
        seed,
        steps: Vec::with_capacity(n),
        positions: vec![z.clone()],
        projections: vec![g.phi(&z)],
    };
    for _ in 0..n {
        let x = sampler.sample(&mut rng).clone();
        z = g.mul(&z, &x);
        trace.projections.push(g.phi(&z));
        trace.positions.push(z.clone());
        trace.steps.push(x);
    }
    trace
}

/// `L(x, n)`: visits of the projected walk to `x` at times `0..=n`.
pub fn local_time<E>(trace: &WalkTrace<E>, x: i64) -> usize {
    trace.projections.iter().filter(|&&p| p == x).count()
}

pub fn local_time_profile<E>(trace: &WalkTrace<E>) -> BTreeMap<i64, usize> {
    let mut counts = BTreeMap::new();
    for &p in &trace.projections {
        *counts.entry(p).or_insert(0) += 1;
    }
    counts
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, trials: 0 };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            stderr: (var / n as f64).sqrt(),
            trials: n,
        }
    }
}

/// Probability that every `x` with `|x| ≤ c1 √n` has `L(x, n) ≥ c2 n^{1/2 − δ}`,
/// for the walk on Z with increments drawn from `steps`.
pub fn local_time_event_probability(
    steps: &StepDistribution<Integers>,
    n: usize,
    c1: f64,
    c2: f64,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Estimate {
    let sampler = steps.sampler();
    let reach = sampler.elems().iter().map(|s| s.unsigned_abs()).max().unwrap_or(0) as usize;
    let half = (c1 * (n as f64).sqrt()).floor() as i64;
    let threshold = c2 * (n as f64).powf(0.5 - delta);
    let span = n * reach;
    let hits: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            if half as usize > span && threshold > 0.0 {
                return 0.0;
            }
            let mut rng = trial_rng(seed, t);
            let mut counts = vec![0u32; 2 * span + 1];
            let mut pos = 0i64;
            counts[span] += 1;
            for _ in 0..n {
                pos += *sampler.sample(&mut rng);
                counts[(pos + span as i64) as usize] += 1;
            }
            let ok = (-half..=half).all(|x| {
                let i = x + span as i64;
                let c = if (0..counts.len() as i64).contains(&i) { counts[i as usize] } else { 0 };
                c as f64 >= threshold
            });
            if ok { 1.0 } else { 0.0 }
        })
        .collect();
    Estimate::from_samples(&hits)
}

/// Monte Carlo `E d(e, Z_n)` for an arbitrary metric on sparse elements.
pub fn speed_estimate<G, M>(d: &StepDistribution<G>, n: usize, trials: usize, seed: u64, metric: M) -> Estimate
where
    G: Group + Sync,
    M: Fn(&G::Elem) -> f64 + Sync,
{
    let sampler = d.sampler();
    let g = &d.group;
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut z = g.identity();
            for _ in 0..n {
                z = g.mul(&z, sampler.sample(&mut rng));
            }
            metric(&z)
        })
        .collect();
    Estimate::from_samples(&samples)
}

/// `E d(e, Z_n)` on `L ≀ Z` in the word metric for `t^{±1} ∪ L \ {e}`,
/// simulated on a dense lamp array.
pub fn lamplighter_speed<L>(d: &StepDistribution<Wreath<L, Integers>>, n: usize, trials: usize, seed: u64) -> Estimate
where
    L: Group + Sync,
{
    let sampler = d.sampler();
    let w = &d.group;
    let reach = sampler
        .elems()
        .iter()
        .map(|s| {
            s.lamps
                .support()
                .map(|x| x.unsigned_abs())
                .chain([s.base.unsigned_abs()])
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0) as usize;
    let span = 2 * n * reach.max(1) + 1;
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut lamps = vec![w.lamp.identity(); 2 * span + 1];
            let mut x = 0i64;
            for _ in 0..n {
                let s = sampler.sample(&mut rng);
                for (site, v) in s.lamps.iter() {
                    let i = (x + site + span as i64) as usize;
                    lamps[i] = w.lamp.mul(&lamps[i], v);
                }
                x += s.base;
            }
            let lit = lamps
                .iter()
                .enumerate()
                .filter(|(_, v)| !w.lamp.is_identity(v))
                .map(|(i, v)| (i as i64 - span as i64, v.clone()));
            let e = WreathElement {
                lamps: w.config(lit),
                base: x,
            };
            word_length_lamplighter_line(&e) as f64
        })
        .collect();
    Estimate::from_samples(&samples)
}
