use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::measure::{prob_to_big, Measure, MeasureError, Prob};
use crate::group::Group;

/// A finitely supported step law on a group.
///
/// [`StepDistribution::new`] enforces positivity, total mass one and
/// symmetry. [`StepDistribution::new_asymmetric`] skips only the symmetry
/// check; it exists for laws that are symmetric under a different
/// multiplication convention.
#[derive(Debug, Clone)]
pub struct StepDistribution<G: Group> {
    pub group: G,
    measure: Measure<G::Elem>,
    symmetric: bool,
}

impl<G: Group> StepDistribution<G> {
    pub fn new(group: G, atoms: Vec<(G::Elem, Prob)>) -> Result<Self, MeasureError> {
        let d = Self::new_asymmetric(group, atoms)?;
        for (x, p) in d.measure.iter() {
            if d.measure.mass(&d.group.inv(x)) != p {
                return Err(MeasureError::Asymmetric(d.group.key(x)));
            }
        }
        Ok(Self { symmetric: true, ..d })
    }

    pub fn new_asymmetric(group: G, atoms: Vec<(G::Elem, Prob)>) -> Result<Self, MeasureError> {
        let measure = Measure::from_weights(atoms)?;
        let total = measure.total();
        if total != Prob::from_integer(1) {
            return Err(MeasureError::NotNormalized(prob_to_big(total)));
        }
        Ok(Self {
            group,
            measure,
            symmetric: false,
        })
    }

    pub fn measure(&self) -> &Measure<G::Elem> {
        &self.measure
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn support(&self) -> Vec<G::Elem> {
        let mut v: Vec<G::Elem> = self.measure.support().cloned().collect();
        v.sort_by_key(|x| self.group.key(x));
        v
    }

    /// Checks that every witness is reached by a walk with steps in the
    /// support within `radius` steps.
    pub fn check_generates(&self, witnesses: &[G::Elem], radius: usize, cap: usize) -> Result<(), MeasureError> {
        let steps = self.support();
        let mut seen: HashSet<G::Elem> = HashSet::new();
        seen.insert(self.group.identity());
        let mut frontier = vec![self.group.identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = self.group.mul(x, s);
                    if seen.len() < cap && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        match witnesses.iter().find(|w| !seen.contains(*w)) {
            Some(w) => Err(MeasureError::NotGenerating(self.group.key(w))),
            None => Ok(()),
        }
    }

    /// The exact `n`-fold convolution power. Fails with `SupportOverflow` as
    /// soon as the support exceeds `cap` atoms.
    pub fn convolve_exact(&self, n: usize, cap: usize) -> Result<Measure<G::Elem>, MeasureError> {
        let mut m = Measure::point(self.group.identity());
        for step in 1..=n {
            m = m.convolve(&self.measure, &self.group)?;
            if m.len() > cap {
                return Err(MeasureError::SupportOverflow {
                    cap,
                    step,
                    retained: BigRational::from_integer(BigInt::from(1)),
                });
            }
        }
        Ok(m)
    }

    /// Like [`Self::convolve_exact`] but keeps going after the cap by dropping
    /// the lightest atoms; the dropped mass is reported by the result.
    pub fn convolve_truncated(&self, n: usize, cap: usize) -> Result<Measure<G::Elem>, MeasureError> {
        let mut m = Measure::point(self.group.identity());
        for _ in 0..n {
            m = m.convolve(&self.measure, &self.group)?;
            m.truncate_to(cap, |x| self.group.key(x));
        }
        Ok(m)
    }

    /// All convolution powers `0..=n`.
    pub fn powers(&self, n: usize, cap: usize) -> Result<Vec<Measure<G::Elem>>, MeasureError> {
        let mut out = vec![Measure::point(self.group.identity())];
        for step in 1..=n {
            let next = out[step - 1].convolve(&self.measure, &self.group)?;
            if next.len() > cap {
                return Err(MeasureError::SupportOverflow {
                    cap,
                    step,
                    retained: BigRational::from_integer(BigInt::from(1)),
                });
            }
            out.push(next);
        }
        Ok(out)
    }
}

/// `½‖μ^(n) − g μ^(n)‖₁` and whether it is below `delta`.
pub fn sn_delta_member<G: Group>(
    g: &G::Elem,
    n: usize,
    delta: &BigRational,
    d: &StepDistribution<G>,
    cap: usize,
) -> Result<(bool, BigRational), MeasureError> {
    let m = d.convolve_exact(n, cap)?;
    let tv = m.tv(&m.translate(g, &d.group));
    Ok((&tv < delta, tv))
}
