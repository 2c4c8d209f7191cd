use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::group::Group;

/// Exact probability weights as used in inputs.
pub type Prob = Ratio<u128>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("support exceeded {cap} atoms at step {step}; retained mass {retained}")]
    SupportOverflow {
        cap: usize,
        step: usize,
        retained: BigRational,
    },
    #[error("exact arithmetic exceeded 128-bit range")]
    PrecisionOverflow,
    #[error("weights must be positive and sum to 1 (got {0})")]
    NotNormalized(BigRational),
    #[error("atom would be negative: {0}")]
    Negative(String),
    #[error("measure is not symmetric at {0}")]
    Asymmetric(String),
    #[error("support does not generate: {0} unreachable")]
    NotGenerating(String),
}

/// A finitely supported (sub-)probability measure on group elements with
/// exact rational weights `numer / denom` over a common denominator.
///
/// `lost` counts mass dropped by truncation, over the same denominator.
#[derive(Debug, Clone)]
pub struct Measure<E: Eq + Hash> {
    atoms: FxHashMap<E, u128>,
    denom: u128,
    lost: u128,
}

fn lcm_all(mut ws: impl Iterator<Item = u128>) -> Option<u128> {
    ws.try_fold(1u128, |acc, d| {
        let g = acc.gcd(&d);
        (acc / g).checked_mul(d)
    })
}

impl<E: Clone + Eq + Hash + Debug> Measure<E> {
    pub fn point(e: E) -> Self {
        let mut atoms = FxHashMap::default();
        atoms.insert(e, 1);
        Self {
            atoms,
            denom: 1,
            lost: 0,
        }
    }

    /// Builds a measure from weighted atoms. Repeated atoms add up.
    pub fn from_weights<I>(weights: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (E, Prob)>,
    {
        let ws: Vec<(E, Prob)> = weights.into_iter().collect();
        let denom = lcm_all(ws.iter().map(|(_, p)| *p.denom())).ok_or(MeasureError::PrecisionOverflow)?;
        let mut atoms: FxHashMap<E, u128> = FxHashMap::default();
        for (e, p) in ws {
            if p.is_zero() {
                continue;
            }
            let n = p.numer() * (denom / p.denom());
            *atoms.entry(e).or_insert(0) += n;
        }
        let mut m = Self {
            atoms,
            denom,
            lost: 0,
        };
        m.reduce();
        Ok(m)
    }

    /// Uniform measure on a list of distinct elements.
    pub fn uniform(elems: &[E]) -> Self {
        let n = elems.len() as u128;
        Self::from_weights(elems.iter().map(|e| (e.clone(), Prob::new(1, n))))
            .expect("uniform weights fit")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn denom(&self) -> u128 {
        self.denom
    }

    pub fn mass(&self, e: &E) -> Prob {
        Prob::new(self.atoms.get(e).copied().unwrap_or(0), self.denom)
    }

    pub fn numer(&self, e: &E) -> u128 {
        self.atoms.get(e).copied().unwrap_or(0)
    }

    pub fn total(&self) -> Prob {
        Prob::new(self.atoms.values().sum(), self.denom)
    }

    /// Mass dropped by truncation so far.
    pub fn lost_mass(&self) -> Prob {
        Prob::new(self.lost, self.denom)
    }

    pub fn is_truncated(&self) -> bool {
        self.lost > 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, Prob)> + '_ {
        self.atoms.iter().map(move |(e, &n)| (e, Prob::new(n, self.denom)))
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.atoms.keys()
    }

    /// Raw `(element, numerator)` pairs over [`Measure::denom`].
    pub fn raw(&self) -> impl Iterator<Item = (&E, u128)> {
        self.atoms.iter().map(|(e, &n)| (e, n))
    }

    /// Divides numerators and denominator by their common gcd.
    pub fn reduce(&mut self) {
        let mut g = self.denom.gcd(&self.lost);
        for &n in self.atoms.values() {
            if g == 1 {
                break;
            }
            g = g.gcd(&n);
        }
        if g > 1 {
            self.denom /= g;
            self.lost /= g;
            for n in self.atoms.values_mut() {
                *n /= g;
            }
        }
    }

    /// `self * other`, the law of `XY` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve<G>(&self, other: &Self, group: &G) -> Result<Self, MeasureError>
    where
        G: Group<Elem = E>,
    {
        let denom = self
            .denom
            .checked_mul(other.denom)
            .ok_or(MeasureError::PrecisionOverflow)?;
        let other_total: u128 = other.atoms.values().sum::<u128>() + other.lost;
        let lost = self
            .lost
            .checked_mul(other_total)
            .and_then(|x| {
                let self_total: u128 = self.atoms.values().sum();
                self_total.checked_mul(other.lost).and_then(|y| x.checked_add(y))
            })
            .ok_or(MeasureError::PrecisionOverflow)?;
        let mut atoms: FxHashMap<E, u128> =
            FxHashMap::with_capacity_and_hasher(self.atoms.len() * 2, Default::default());
        for (x, &p) in &self.atoms {
            for (y, &q) in &other.atoms {
                let w = p.checked_mul(q).ok_or(MeasureError::PrecisionOverflow)?;
                let slot = atoms.entry(group.mul(x, y)).or_insert(0);
                *slot = slot.checked_add(w).ok_or(MeasureError::PrecisionOverflow)?;
            }
        }
        let mut m = Self { atoms, denom, lost };
        m.reduce();
        Ok(m)
    }

    /// Keeps the `cap` heaviest atoms (ties broken by a stable key order)
    /// and moves the rest into the lost mass.
    pub fn truncate_to<K: Ord>(&mut self, cap: usize, key: impl Fn(&E) -> K) {
        if self.atoms.len() <= cap {
            return;
        }
        let mut all: Vec<(E, u128)> = self.atoms.drain().collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| key(&a.0).cmp(&key(&b.0))));
        for (_, n) in all.drain(cap..) {
            self.lost += n;
        }
        self.atoms = all.into_iter().collect();
    }

    /// Pushforward under `x -> g x`.
    pub fn translate<G>(&self, g: &E, group: &G) -> Self
    where
        G: Group<Elem = E>,
    {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|(x, &n)| (group.mul(g, x), n))
                .collect(),
            denom: self.denom,
            lost: self.lost,
        }
    }

    /// Pushforward under an arbitrary map.
    pub fn map<F, E2>(&self, f: F) -> Measure<E2>
    where
        F: Fn(&E) -> E2,
        E2: Clone + Eq + Hash + Debug,
    {
        let mut atoms: FxHashMap<E2, u128> = FxHashMap::default();
        for (x, &n) in &self.atoms {
            *atoms.entry(f(x)).or_insert(0) += n;
        }
        Measure {
            atoms,
            denom: self.denom,
            lost: self.lost,
        }
    }

    /// `½ Σ |self - other|`, exact.
    pub fn tv(&self, other: &Self) -> BigRational {
        let (d1, d2) = (BigInt::from(self.denom), BigInt::from(other.denom));
        let mut acc = BigInt::zero();
        for (x, &p) in &self.atoms {
            let q = other.atoms.get(x).copied().unwrap_or(0);
            let diff = BigInt::from(p) * &d2 - BigInt::from(q) * &d1;
            acc += BigInt::from(diff.magnitude().clone());
        }
        for (y, &q) in &other.atoms {
            if !self.atoms.contains_key(y) {
                acc += BigInt::from(q) * &d1;
            }
        }
        BigRational::new(acc, d1 * d2 * 2)
    }

    /// `(self - eps * part) / (1 - eps)`, failing if any atom goes negative.
    pub fn residual(&self, part: &Self, eps: Prob) -> Result<Self, MeasureError> {
        let one = Prob::from_integer(1);
        if eps >= one {
            return Err(MeasureError::Negative("eps must be below 1".into()));
        }
        // self = a / D, part = b / E, eps = u / v.
        // result = (a E v - u b D) / (D E (v - u))
        let (u, v) = (*eps.numer(), *eps.denom());
        let de = self.denom.checked_mul(part.denom).ok_or(MeasureError::PrecisionOverflow)?;
        let denom = de.checked_mul(v - u).ok_or(MeasureError::PrecisionOverflow)?;
        let mut atoms: FxHashMap<E, u128> = FxHashMap::default();
        let ev = part.denom.checked_mul(v).ok_or(MeasureError::PrecisionOverflow)?;
        let ud = u.checked_mul(self.denom).ok_or(MeasureError::PrecisionOverflow)?;
        for (x, &a) in &self.atoms {
            let plus = a.checked_mul(ev).ok_or(MeasureError::PrecisionOverflow)?;
            let b = part.atoms.get(x).copied().unwrap_or(0);
            let minus = b.checked_mul(ud).ok_or(MeasureError::PrecisionOverflow)?;
            let n = plus
                .checked_sub(minus)
                .ok_or_else(|| MeasureError::Negative(format!("{x:?}")))?;
            if n > 0 {
                atoms.insert(x.clone(), n);
            }
        }
        if part.atoms.keys().any(|y| !self.atoms.contains_key(y)) {
            return Err(MeasureError::Negative("part charges an atom outside the support".into()));
        }
        let mut m = Self {
            atoms,
            denom,
            lost: 0,
        };
        m.reduce();
        Ok(m)
    }

    /// `a * m1 + b * m2`.
    pub fn mixture(a: Prob, m1: &Self, b: Prob, m2: &Self) -> Result<Self, MeasureError> {
        let ov = MeasureError::PrecisionOverflow;
        let d1 = m1.denom.checked_mul(*a.denom()).ok_or(ov.clone())?;
        let d2 = m2.denom.checked_mul(*b.denom()).ok_or(ov.clone())?;
        let denom = lcm_all([d1, d2].into_iter()).ok_or(ov.clone())?;
        let (s1, s2) = (denom / d1 * a.numer(), denom / d2 * b.numer());
        let mut atoms: FxHashMap<E, u128> = FxHashMap::default();
        for (m, s) in [(m1, s1), (m2, s2)] {
            for (x, &n) in &m.atoms {
                let w = n.checked_mul(s).ok_or(ov.clone())?;
                *atoms.entry(x.clone()).or_insert(0) += w;
            }
        }
        atoms.retain(|_, n| *n > 0);
        let lost = m1.lost * s1 + m2.lost * s2;
        let mut m = Self { atoms, denom, lost };
        m.reduce();
        Ok(m)
    }

    /// Exact equality as rational measures.
    pub fn same_as(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self.clone(), other.clone());
        a.reduce();
        b.reduce();
        a.denom == b.denom && a.lost == b.lost && a.atoms == b.atoms
    }

    /// Atoms as `(key, weight)` sorted by key, for deterministic output.
    pub fn sorted_by_key<G: Group<Elem = E>>(&self, group: &G) -> Vec<(String, Prob)> {
        let mut out: Vec<(String, Prob)> = self
            .atoms
            .iter()
            .map(|(x, &n)| (group.key(x), Prob::new(n, self.denom)))
            .collect();
        out.sort();
        out
    }

    pub fn to_f64_map(&self) -> HashMap<E, f64> {
        let d = self.denom as f64;
        self.atoms.iter().map(|(x, &n)| (x.clone(), n as f64 / d)).collect()
    }
}

pub fn prob_to_big(p: Prob) -> BigRational {
    BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()))
}

pub fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` in lowest terms.
pub fn fmt_big(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn fmt_prob(p: Prob) -> String {
    format!("{}/{}", p.numer(), p.denom())
}
