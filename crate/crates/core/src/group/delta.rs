use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{
    Cyclic, DihedralElem, FiniteGroupTable, Group, GroupError, InfiniteDihedral, Integers,
    Wreath, WreathElement, ZProjection,
};

type AbImage<E> = Arc<dyn Fn(&E) -> (usize, usize) + Send + Sync>;

/// A lamp group `Γ` marked by two finite subgroups `A(s)`, `B(s)`, together
/// with its relative abelianization `Γ -> A × B`.
///
/// `a` and `b` list the subgroup elements in the order of the fixed
/// identification with the abstract `A` and `B`; index 0 is the identity.
#[derive(Clone)]
pub struct MarkedLamp<L: Group> {
    pub group: L,
    pub a: Vec<L::Elem>,
    pub b: Vec<L::Elem>,
    ab_image: AbImage<L::Elem>,
}

impl<L: Group + fmt::Debug> fmt::Debug for MarkedLamp<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MarkedLamp")
            .field("group", &self.group)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}

/// Outcome of computing `Γ / [A,B]^Γ` and comparing it with `A × B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeAbelianization {
    pub closure_order: usize,
    pub quotient_order: usize,
    /// For each element of `Γ`, its image `(i, j)` in `A × B`, present only
    /// when `(a_i, b_j) -> a_i b_j [A,B]^Γ` is a bijection onto the quotient.
    pub image: Option<Vec<(usize, usize)>>,
}

impl RelativeAbelianization {
    pub fn holds(&self) -> bool {
        self.image.is_some()
    }
}

/// Normal closure of the commutators `[a, b]`, quotient by coset
/// enumeration, and the bijectivity check of `A × B -> Γ/N`.
pub fn relative_abelianization(
    gamma: &FiniteGroupTable,
    a: &[u32],
    b: &[u32],
) -> RelativeAbelianization {
    let comms: Vec<u32> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .map(|(x, y)| gamma.commutator(x, y))
        .collect();
    let normal = gamma.normal_closure(&comms);
    let (label, count) = gamma.coset_labels(&normal);
    let mut back = vec![None; count];
    let mut injective = true;
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let c = label[gamma.mul(&x, &y) as usize];
            if back[c].replace((i, j)).is_some() {
                injective = false;
            }
        }
    }
    let bijective = injective && count == a.len() * b.len();
    let image = bijective.then(|| label.iter().map(|&c| back[c].unwrap()).collect());
    RelativeAbelianization {
        closure_order: normal.len(),
        quotient_order: count,
        image,
    }
}

impl MarkedLamp<FiniteGroupTable> {
    /// Uses the marked subsets `"A"` and `"B"` of the table.
    pub fn from_table(gamma: FiniteGroupTable) -> Result<Self, GroupError> {
        let a = gamma
            .marked("A")
            .ok_or_else(|| GroupError::Invalid("table has no marked subset A".into()))?
            .to_vec();
        let b = gamma
            .marked("B")
            .ok_or_else(|| GroupError::Invalid("table has no marked subset B".into()))?
            .to_vec();
        Self::with_subgroups(gamma, a, b)
    }

    pub fn with_subgroups(gamma: FiniteGroupTable, a: Vec<u32>, b: Vec<u32>) -> Result<Self, GroupError> {
        for (name, set) in [("A", &a), ("B", &b)] {
            if set.first() != Some(&gamma.id()) {
                return Err(GroupError::Invalid(format!("{name} must list the identity first")));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            if gamma.subgroup(set) != sorted {
                return Err(GroupError::Invalid(format!("{name} is not a subgroup")));
            }
        }
        let mut gens = a.clone();
        gens.extend_from_slice(&b);
        if gamma.subgroup(&gens).len() != gamma.order_of_group() {
            return Err(GroupError::Invalid("A and B do not generate the lamp group".into()));
        }
        let rel = relative_abelianization(&gamma, &a, &b);
        let image = rel.image.ok_or_else(|| {
            GroupError::Invalid(format!(
                "relative abelianization has order {} instead of {}",
                rel.quotient_order,
                a.len() * b.len()
            ))
        })?;
        Ok(Self {
            group: gamma,
            a,
            b,
            ab_image: Arc::new(move |x: &u32| image[*x as usize]),
        })
    }
}

impl MarkedLamp<InfiniteDihedral> {
    /// `D∞` marked by `A = {e, a}`, `B = {e, b}`.
    pub fn dinfty() -> Self {
        let d = InfiniteDihedral;
        Self {
            group: d,
            a: vec![d.identity(), d.a()],
            b: vec![d.identity(), d.b()],
            ab_image: Arc::new(move |g: &DihedralElem| {
                let (x, y) = d.abelian_image(g);
                (x as usize, y as usize)
            }),
        }
    }
}

impl<L: Group> MarkedLamp<L> {
    pub fn ab_image(&self, x: &L::Elem) -> (usize, usize) {
        (self.ab_image)(x)
    }

    pub fn in_kernel(&self, x: &L::Elem) -> bool {
        self.ab_image(x) == (0, 0)
    }

    fn index_table(&self, set: &[L::Elem]) -> Result<Vec<u32>, GroupError> {
        let n = set.len();
        let mut t = Vec::with_capacity(n * n);
        for x in set {
            for y in set {
                let p = self.group.mul(x, y);
                let k = set
                    .iter()
                    .position(|z| *z == p)
                    .ok_or_else(|| GroupError::Invalid("marked subset is not closed".into()))?;
                t.push(k as u32);
            }
        }
        Ok(t)
    }
}

/// An element of the truncated diagonal product: one component per factor
/// `Γ_s ≀ Z/m_s`, plus its image in the limit quotient `(A × B) ≀ Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaElement<V> {
    pub components: Vec<WreathElement<i64, V>>,
    pub shadow: WreathElement<i64, u32>,
}

#[derive(Debug, Clone)]
struct Factor<L: Group> {
    marked: MarkedLamp<L>,
    k: i64,
    m: i64,
    wreath: Wreath<L, Cyclic>,
}

/// The diagonal product of `G_s = Γ_s ≀ Z/m_s` for `s = 1..=S_max`, marked
/// by `τ = (e, +1)`, `α_i = (a_i δ_0, 0)`, `β_i = (b_i δ_{k_s}, 0)`.
///
/// Alongside the factors every element carries its image in
/// `(A × B) ≀ Z` under `τ -> (e, +1)`, `α_i -> ((a_i, e) δ_0, 0)`,
/// `β_i -> ((e, b_i) δ_0, 0)`. This quotient is exact, so elements are
/// equal here iff they are equal in every retained factor and in the quotient.
#[derive(Debug, Clone)]
pub struct DeltaGroup<L: Group> {
    factors: Vec<Factor<L>>,
    a_tab: FiniteGroupTable,
    b_tab: FiniteGroupTable,
    shadow: Wreath<FiniteGroupTable, Integers>,
}

impl<L: Group + Clone> DeltaGroup<L> {
    /// `factors` lists `(Γ_s, k_s, m_s)` for `s = 1..=S_max`.
    pub fn new(factors: Vec<(MarkedLamp<L>, i64, i64)>) -> Result<Self, GroupError> {
        let first = factors
            .first()
            .ok_or_else(|| GroupError::Invalid("diagonal product needs at least one factor".into()))?;
        let a_mul = first.0.index_table(&first.0.a)?;
        let b_mul = first.0.index_table(&first.0.b)?;
        let a_tab = FiniteGroupTable::from_table(first.0.a.len(), a_mul.clone())?;
        let b_tab = FiniteGroupTable::from_table(first.0.b.len(), b_mul.clone())?;
        for (name, t) in [("A", &a_tab), ("B", &b_tab)] {
            let abelian = t
                .elements()
                .all(|x| t.elements().all(|y| t.mul(&x, &y) == t.mul(&y, &x)));
            if !abelian {
                return Err(GroupError::Invalid(format!("{name} must be abelian")));
            }
        }
        let mut prev: Option<(i64, i64)> = None;
        for (s, (lamp, k, m)) in factors.iter().enumerate() {
            let s = s + 1;
            if *k < 1 || *m < 2 * k {
                return Err(GroupError::Invalid(format!("factor {s}: need k >= 1 and m >= 2k")));
            }
            if let Some((pk, pm)) = prev {
                if *k <= pk || *m <= pm {
                    return Err(GroupError::Invalid(format!(
                        "factor {s}: k and m must be strictly increasing"
                    )));
                }
            }
            prev = Some((*k, *m));
            if lamp.index_table(&lamp.a)? != a_mul || lamp.index_table(&lamp.b)? != b_mul {
                return Err(GroupError::Invalid(format!(
                    "factor {s}: A(s), B(s) do not match the fixed identification"
                )));
            }
            for (i, x) in lamp.a.iter().enumerate() {
                if lamp.ab_image(x) != (i, 0) {
                    return Err(GroupError::Invalid(format!("factor {s}: A(s) maps wrongly to A x B")));
                }
            }
            for (j, y) in lamp.b.iter().enumerate() {
                if lamp.ab_image(y) != (0, j) {
                    return Err(GroupError::Invalid(format!("factor {s}: B(s) maps wrongly to A x B")));
                }
            }
        }
        let shadow = Wreath::new(a_tab.direct_product(&b_tab), Integers);
        let factors = factors
            .into_iter()
            .map(|(marked, k, m)| Factor {
                wreath: Wreath::new(marked.group.clone(), Cyclic::new(m)),
                marked,
                k,
                m,
            })
            .collect();
        Ok(Self {
            factors,
            a_tab,
            b_tab,
            shadow,
        })
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    pub fn ks(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.k).collect()
    }

    pub fn ms(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.m).collect()
    }

    pub fn lamp(&self, s: usize) -> &MarkedLamp<L> {
        &self.factors[s].marked
    }

    /// The factor `G_s` (zero-based `s`).
    pub fn factor(&self, s: usize) -> &Wreath<L, Cyclic> {
        &self.factors[s].wreath
    }

    pub fn shadow_group(&self) -> &Wreath<FiniteGroupTable, Integers> {
        &self.shadow
    }

    fn ab_index(&self, i: usize, j: usize) -> u32 {
        (i * self.b_tab.order_of_group() + j) as u32
    }

    pub fn tau(&self) -> DeltaElement<L::Elem> {
        DeltaElement {
            components: self.factors.iter().map(|f| f.wreath.base_elem(1)).collect(),
            shadow: self.shadow.base_elem(1),
        }
    }

    /// `α_i`, for `i` indexing the identification of `A`.
    pub fn alpha(&self, i: usize) -> DeltaElement<L::Elem> {
        DeltaElement {
            components: self
                .factors
                .iter()
                .map(|f| f.wreath.lamp_at(0, f.marked.a[i].clone()))
                .collect(),
            shadow: self.shadow.lamp_at(0, self.ab_index(i, 0)),
        }
    }

    pub fn beta(&self, j: usize) -> DeltaElement<L::Elem> {
        DeltaElement {
            components: self
                .factors
                .iter()
                .map(|f| f.wreath.lamp_at(f.k % f.m, f.marked.b[j].clone()))
                .collect(),
            shadow: self.shadow.lamp_at(0, self.ab_index(0, j)),
        }
    }

    /// The symmetric generating set `τ^{±1}`, `α_i`, `β_j` (nontrivial ones), with names.
    pub fn generators(&self) -> Vec<(String, DeltaElement<L::Elem>)> {
        let mut out = vec![
            ("t".to_string(), self.tau()),
            ("T".to_string(), self.inv(&self.tau())),
        ];
        for i in 1..self.a_tab.order_of_group() {
            out.push((format!("a{i}"), self.alpha(i)));
        }
        for j in 1..self.b_tab.order_of_group() {
            out.push((format!("b{j}"), self.beta(j)));
        }
        out
    }

    /// Every component is `(f_s, 0)` with `f_s` valued in `ker(Γ_s -> A × B)`,
    /// and the limit quotient image is trivial.
    pub fn in_kernel_sum(&self, g: &DeltaElement<L::Elem>) -> bool {
        self.shadow.is_identity(&g.shadow)
            && g.components.iter().zip(&self.factors).all(|(c, f)| {
                c.base == 0 && c.lamps.iter().all(|(_, v)| f.marked.in_kernel(v))
            })
    }

    /// Element supported on a single site of one factor.
    pub fn single_site(&self, s: usize, site: i64, v: L::Elem) -> DeltaElement<L::Elem> {
        assert!(self.factors[s].marked.in_kernel(&v), "single-site elements must lie in the kernel");
        let mut e = self.identity();
        let f = &self.factors[s];
        e.components[s] = f.wreath.lamp_at(site.rem_euclid(f.m), v);
        e
    }

    /// Checks that every factor agrees with the limit quotient after reducing
    /// lamps through `Γ_s -> A × B`: the `A`-part at site `y` and the `B`-part
    /// at site `y + k_s`, read mod `m_s`.
    pub fn is_consistent(&self, g: &DeltaElement<L::Elem>) -> bool {
        if g.components.len() != self.factors.len() {
            return false;
        }
        let nb = self.b_tab.order_of_group();
        g.components.iter().zip(&self.factors).all(|(c, f)| {
            if c.base != g.shadow.base.rem_euclid(f.m) {
                return false;
            }
            let mut from_factor: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
            for (site, v) in c.lamps.iter() {
                from_factor.insert(*site, f.marked.ab_image(v));
            }
            let mut from_shadow: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
            for (y, v) in g.shadow.lamps.iter() {
                let (i, j) = (*v as usize / nb, *v as usize % nb);
                let ea = from_shadow.entry(y.rem_euclid(f.m)).or_insert((0, 0));
                ea.0 = self.a_tab.mul(&(ea.0 as u32), &(i as u32)) as usize;
                let eb = from_shadow.entry((y + f.k).rem_euclid(f.m)).or_insert((0, 0));
                eb.1 = self.b_tab.mul(&(eb.1 as u32), &(j as u32)) as usize;
            }
            from_shadow.retain(|_, v| *v != (0, 0));
            from_factor.retain(|_, v| *v != (0, 0));
            from_factor == from_shadow
        })
    }
}

impl<L: Group + Clone> Group for DeltaGroup<L> {
    type Elem = DeltaElement<L::Elem>;

    fn identity(&self) -> Self::Elem {
        DeltaElement {
            components: self.factors.iter().map(|f| f.wreath.identity()).collect(),
            shadow: self.shadow.identity(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        DeltaElement {
            components: self
                .factors
                .iter()
                .zip(a.components.iter().zip(&b.components))
                .map(|(f, (x, y))| f.wreath.mul(x, y))
                .collect(),
            shadow: self.shadow.mul(&a.shadow, &b.shadow),
        }
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        DeltaElement {
            components: self
                .factors
                .iter()
                .zip(&a.components)
                .map(|(f, x)| f.wreath.inv(x))
                .collect(),
            shadow: self.shadow.inv(&a.shadow),
        }
    }

    fn key(&self, a: &Self::Elem) -> String {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .zip(&a.components)
            .map(|(f, x)| f.wreath.key(x))
            .collect();
        parts.push(self.shadow.key(&a.shadow));
        parts.join(" / ")
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.components.len() == self.factors.len()
            && self
                .factors
                .iter()
                .zip(&a.components)
                .all(|(f, x)| f.wreath.contains(x))
            && self.shadow.contains(&a.shadow)
    }
}

impl<L: Group + Clone> ZProjection for DeltaGroup<L> {
    fn phi(&self, a: &Self::Elem) -> i64 {
        a.shadow.base
    }

    fn lift(&self, x: i64) -> Self::Elem {
        self.pow(&self.tau(), x)
    }
}

impl<L: Group + Clone> super::MaybeProjection for DeltaGroup<L> {
    fn maybe_phi(&self, a: &Self::Elem) -> Option<i64> {
        Some(self.phi(a))
    }
}

/// Restriction of a shadow configuration, for diagnostics.
pub fn shadow_support<V>(g: &DeltaElement<V>) -> Vec<i64> {
    g.shadow.lamps.support().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d8_delta() -> DeltaGroup<FiniteGroupTable> {
        let lamp = MarkedLamp::from_table(FiniteGroupTable::dihedral(4).unwrap()).unwrap();
        DeltaGroup::new(vec![(lamp.clone(), 1, 4), (lamp, 2, 8)]).unwrap()
    }

    #[test]
    fn dihedral_eight_relative_abelianization() {
        let g = FiniteGroupTable::dihedral(4).unwrap();
        let rel = relative_abelianization(&g, g.marked("A").unwrap(), g.marked("B").unwrap());
        assert_eq!(rel.closure_order, 2);
        assert_eq!(rel.quotient_order, 4);
        assert!(rel.holds());
    }

    #[test]
    fn cyclic_four_fails_relative_abelianization() {
        let g = FiniteGroupTable::cyclic(4);
        let rel = relative_abelianization(&g, &[0, 2], &[0, 2]);
        assert!(!rel.holds());
        assert_eq!(rel.quotient_order, 4);
    }

    #[test]
    fn tau_closes_cycles_per_factor() {
        let d = d8_delta();
        let t4 = d.pow(&d.tau(), 4);
        assert_eq!(t4.components[0].base, 0);
        assert_eq!(t4.components[1].base, 4);
        assert_eq!(d.phi(&t4), 4);
    }

    #[test]
    fn generators_have_lamp_orders() {
        let d = d8_delta();
        assert_eq!(d.order(&d.alpha(1), 10), Some(2));
        assert_eq!(d.order(&d.beta(1), 10), Some(2));
        assert_eq!(d.generators().len(), 4);
    }

    #[test]
    fn words_stay_consistent() {
        let d = d8_delta();
        let gens: Vec<_> = d.generators().into_iter().map(|g| g.1).collect();
        let mut x = d.identity();
        for i in 0..200usize {
            x = d.mul(&x, &gens[(i * 7 + i / 3) % gens.len()]);
            assert!(d.is_consistent(&x));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let lamp = MarkedLamp::from_table(FiniteGroupTable::dihedral(4).unwrap()).unwrap();
        assert!(DeltaGroup::new(vec![(lamp.clone(), 2, 3)]).is_err());
        assert!(DeltaGroup::new(vec![(lamp.clone(), 2, 8), (lamp, 2, 9)]).is_err());
    }

    #[test]
    fn dinfty_factors() {
        let lamp = MarkedLamp::dinfty();
        let d = DeltaGroup::new(vec![(lamp.clone(), 1, 4), (lamp, 2, 8)]).unwrap();
        let x = d.product(&[d.alpha(1), d.beta(1), d.tau(), d.alpha(1)]);
        assert!(d.is_consistent(&x));
        assert!(d.is_identity(&d.mul(&x, &d.inv(&x))));
    }
}
