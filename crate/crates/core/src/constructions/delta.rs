use std::collections::{HashMap, HashSet};

use super::ConstructionError;
use crate::coupling::{conjugacy_closure, CouplingError};
use crate::group::{
    ball, relative_abelianization, DeltaElement, DeltaGroup, FiniteGroupTable, Group, InfiniteDihedral, MarkedLamp,
    RelativeAbelianization, WreathElement,
};
use crate::walk::{Prob, StepDistribution};

/// Parameters of a truncated diagonal product with finite lamp groups.
/// Each `Γ_s` carries marked subsets `"A"` and `"B"`.
#[derive(Debug, Clone)]
pub struct DeltaSpec {
    pub ks: Vec<i64>,
    pub ms: Vec<i64>,
    pub gammas: Vec<FiniteGroupTable>,
}

/// The dihedral group of order 8 marked by two reflections, with
/// `k = (1, 2)` and `m = (4, 8)`.
pub fn delta_d8() -> DeltaSpec {
    let g = FiniteGroupTable::dihedral(4).expect("dihedral table");
    DeltaSpec {
        ks: vec![1, 2],
        ms: vec![4, 8],
        gammas: vec![g.clone(), g],
    }
}

/// Checks `Γ / [A,B]^Γ ≅ A × B` through the natural map `(a, b) -> ab`.
pub fn validate_relative_abelianization(gamma: &FiniteGroupTable, a: &[u32], b: &[u32]) -> RelativeAbelianization {
    relative_abelianization(gamma, a, b)
}

pub fn build_delta(spec: &DeltaSpec) -> Result<DeltaGroup<FiniteGroupTable>, ConstructionError> {
    let n = spec.gammas.len();
    if n == 0 || spec.ks.len() != n || spec.ms.len() != n {
        return Err(ConstructionError::Invalid(format!(
            "need equally many k, m and lamp groups (got {}, {}, {n})",
            spec.ks.len(),
            spec.ms.len()
        )));
    }
    let mut factors = Vec::with_capacity(n);
    for (i, gamma) in spec.gammas.iter().enumerate() {
        let s = i + 1;
        let (a, b) = match (gamma.marked("A"), gamma.marked("B")) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(ConstructionError::ValidationFailed {
                    s,
                    reason: "missing marked subgroups A and B".into(),
                })
            }
        };
        let rel = validate_relative_abelianization(gamma, a, b);
        if !rel.holds() {
            return Err(ConstructionError::ValidationFailed {
                s,
                reason: format!(
                    "quotient has order {}, A x B has order {}",
                    rel.quotient_order,
                    a.len() * b.len()
                ),
            });
        }
        let lamp = MarkedLamp::from_table(gamma.clone())
            .map_err(|e| ConstructionError::ValidationFailed { s, reason: e.to_string() })?;
        factors.push((lamp, spec.ks[i], spec.ms[i]));
    }
    Ok(DeltaGroup::new(factors)?)
}

/// The diagonal product with every lamp group equal to `D∞`.
pub fn dinfty_delta(ks: &[i64], ms: &[i64]) -> Result<DeltaGroup<InfiniteDihedral>, ConstructionError> {
    if ks.len() != ms.len() {
        return Err(ConstructionError::Invalid("k and m have different lengths".into()));
    }
    let lamp = MarkedLamp::dinfty();
    Ok(DeltaGroup::new(
        ks.iter().zip(ms).map(|(k, m)| (lamp.clone(), *k, *m)).collect(),
    )?)
}

/// `[a, b]` for the first nontrivial marked elements; it generates the
/// kernel onto `A × B` when both marked subgroups have order 2.
pub fn kernel_generator<L: Group>(lamp: &MarkedLamp<L>) -> L::Elem {
    let g = &lamp.group;
    let (a, b) = (&lamp.a[1], &lamp.b[1]);
    g.product(&[a.clone(), b.clone(), g.inv(a), g.inv(b)])
}

/// A conjugacy class closed under the marked generators.
#[derive(Debug, Clone)]
pub struct FcClass<E> {
    pub elements: Vec<E>,
    /// Whether the element lies in the sum of the kernels of `Γ_s -> A × B`.
    pub in_kernel: bool,
}

impl<E> FcClass<E> {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Closure of `{elem}` under conjugation by the generators.
pub fn fc_class<L: Group + Clone>(
    delta: &DeltaGroup<L>,
    elem: &DeltaElement<L::Elem>,
    cap: usize,
) -> Result<FcClass<DeltaElement<L::Elem>>, ConstructionError> {
    let gens: Vec<_> = delta.generators().into_iter().map(|(_, g)| g).collect();
    let elements = conjugacy_closure(delta, elem, &gens, cap).map_err(|e| match e {
        CouplingError::InfiniteClassSuspected { cap } => ConstructionError::CapExceeded { cap },
        other => ConstructionError::Invalid(other.to_string()),
    })?;
    Ok(FcClass {
        elements,
        in_kernel: delta.in_kernel_sum(elem),
    })
}

/// Breadth-first balls in every factor `G_s`, for the generators that are
/// the components of the diagonal generators.
#[derive(Debug, Clone)]
pub struct FactorMetrics<V> {
    pub radius: usize,
    dist: Vec<HashMap<WreathElement<i64, V>, usize>>,
}

impl<V: Clone + Eq + std::hash::Hash> FactorMetrics<V> {
    pub fn new<L>(delta: &DeltaGroup<L>, radius: usize, memory_cap: usize) -> Result<Self, ConstructionError>
    where
        L: Group<Elem = V> + Clone,
    {
        let gens = delta.generators();
        let mut dist = Vec::with_capacity(delta.depth());
        for s in 0..delta.depth() {
            let mut fg: Vec<WreathElement<i64, V>> = Vec::new();
            for (_, g) in &gens {
                let c = g.components[s].clone();
                if !fg.contains(&c) {
                    fg.push(c);
                }
            }
            let b = ball(delta.factor(s), &fg, radius, memory_cap)?;
            dist.push(b.into_iter().collect());
        }
        Ok(Self { radius, dist })
    }

    /// Word length of each component in its factor.
    pub fn component_lengths(&self, g: &DeltaElement<V>) -> Result<Vec<usize>, ConstructionError> {
        g.components
            .iter()
            .zip(&self.dist)
            .enumerate()
            .map(|(s, (c, d))| {
                d.get(c).copied().ok_or(ConstructionError::MetricUnavailable {
                    s: s + 1,
                    radius: self.radius,
                })
            })
            .collect()
    }

    /// `max_s |g_s|_{G_s}`, a lower bound for the word length in the
    /// diagonal product since each projection is 1-Lipschitz.
    pub fn speed_lower_bound(&self, g: &DeltaElement<V>) -> Result<usize, ConstructionError> {
        Ok(self.component_lengths(g)?.into_iter().max().unwrap_or(0))
    }
}

/// The single-site kernel element `γ` of the first factor, and the step law
/// `½ u(generators) + ½ u(K)` where `K` is the finite group generated by
/// the conjugacy class of `γ`.
pub fn fc_preset_step<L: Group + Clone>(
    delta: &DeltaGroup<L>,
    cap: usize,
) -> Result<(StepDistribution<DeltaGroup<L>>, DeltaElement<L::Elem>), ConstructionError> {
    let gamma = delta.single_site(0, 0, kernel_generator(delta.lamp(0)));
    let class = fc_class(delta, &gamma, cap)?;
    let mut k: Vec<DeltaElement<L::Elem>> = vec![delta.identity()];
    let mut seen: HashSet<DeltaElement<L::Elem>> = k.iter().cloned().collect();
    let mut head = 0;
    while head < k.len() {
        let x = k[head].clone();
        head += 1;
        for c in &class.elements {
            let y = delta.mul(&x, c);
            if seen.insert(y.clone()) {
                if k.len() >= cap {
                    return Err(ConstructionError::CapExceeded { cap });
                }
                k.push(y);
            }
        }
    }
    let gens: Vec<_> = delta.generators().into_iter().map(|(_, g)| g).collect();
    let mut atoms: HashMap<DeltaElement<L::Elem>, Prob> = HashMap::new();
    let pg = Prob::new(1, 2 * gens.len() as u128);
    let pk = Prob::new(1, 2 * k.len() as u128);
    for g in gens {
        *atoms.entry(g).or_insert(Prob::from_integer(0)) += pg;
    }
    for x in k {
        *atoms.entry(x).or_insert(Prob::from_integer(0)) += pk;
    }
    let mut atoms: Vec<_> = atoms.into_iter().collect();
    atoms.sort_by_key(|(g, _)| delta.key(g));
    Ok((StepDistribution::new(delta.clone(), atoms)?, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_abelianization_examples() {
        let d8 = FiniteGroupTable::dihedral(4).unwrap();
        let r = validate_relative_abelianization(&d8, d8.marked("A").unwrap(), d8.marked("B").unwrap());
        assert!(r.holds());
        assert_eq!((r.closure_order, r.quotient_order), (2, 4));

        let z2 = FiniteGroupTable::cyclic(2);
        let ab = z2.direct_product(&z2);
        // (x, y) has index 2x + y
        let r = validate_relative_abelianization(&ab, &[0, 2], &[0, 1]);
        assert!(r.holds());
        assert_eq!(r.closure_order, 1);

        let z4 = FiniteGroupTable::cyclic(4);
        assert!(!validate_relative_abelianization(&z4, &[0, 2], &[0, 2]).holds());
    }

    #[test]
    fn build_rejects_bad_factor() {
        let mut spec = delta_d8();
        let mut z4 = FiniteGroupTable::cyclic(4);
        z4.mark("A", vec![0, 2]);
        z4.mark("B", vec![0, 2]);
        spec.gammas[1] = z4;
        assert!(matches!(build_delta(&spec), Err(ConstructionError::ValidationFailed { s: 2, .. })));
        assert!(build_delta(&delta_d8()).is_ok());
    }

    #[test]
    fn classes_in_d8_spec() {
        let d = build_delta(&delta_d8()).unwrap();
        assert_eq!(fc_class(&d, &d.identity(), 10).unwrap().size(), 1);
        let g = d.single_site(0, 0, kernel_generator(d.lamp(0)));
        let c = fc_class(&d, &g, 1000).unwrap();
        assert_eq!(c.size(), 4);
        assert!(c.in_kernel);
        assert_eq!(
            fc_class(&d, &d.alpha(1), 10_000).unwrap_err(),
            ConstructionError::CapExceeded { cap: 10_000 }
        );
    }

    #[test]
    fn dinfty_class_sizes() {
        let d = dinfty_delta(&[1, 2], &[4, 8]).unwrap();
        let g = d.single_site(0, 0, kernel_generator(d.lamp(0)));
        assert_eq!(fc_class(&d, &g, 1000).unwrap().size(), 8);
        assert!(fc_class(&d, &d.alpha(1), 5000).is_err());
    }

    #[test]
    fn lower_bound_basics() {
        let d = build_delta(&delta_d8()).unwrap();
        let m = FactorMetrics::new(&d, 3, 1 << 20).unwrap();
        assert_eq!(m.speed_lower_bound(&d.identity()).unwrap(), 0);
        for (_, g) in d.generators() {
            assert_eq!(m.speed_lower_bound(&g).unwrap(), 1);
        }
        let far = d.pow(&d.tau(), 4);
        assert!(matches!(m.speed_lower_bound(&far), Err(ConstructionError::MetricUnavailable { s: 2, .. })));
    }

    #[test]
    fn preset_step_has_eps_one_sixteenth() {
        let d = build_delta(&delta_d8()).unwrap();
        let (mu, gamma) = fc_preset_step(&d, 1000).unwrap();
        assert_eq!(mu.measure().len(), 4 + 16);
        assert_eq!(mu.measure().mass(&gamma), Prob::new(1, 32));
    }
}
