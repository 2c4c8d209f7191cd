//! The discrete affine group of a `(q+1)`-regular tree with a fixed end: its
//! Schreier graph on the orbit of a marked vertex and the gradient template
//! of a harmonic function on it.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cg::{conjugate_gradient, CgReport, DEFAULT_MAX_ITER};
use super::graph::{harmonicity_residual_on, ScalarField, SchreierGraph};
use super::HarmonicError;
use crate::group::{FiniteGroupTable, Group};
use crate::walk::{prob_to_big, Prob, StepDistribution};

/// A tree vertex in horocyclic coordinates.
///
/// `level` grows away from the fixed end. `digits[j]` (for `j ≤ level`) says
/// which child of its parent the ancestor at level `j` is; the marked ray
/// through the marked vertex `(0, ∅)` has all digits 0, and only nonzero
/// digits are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub level: i64,
    digits: BTreeMap<i64, u32>,
}

impl TreeVertex {
    pub fn root() -> Self {
        Self {
            level: 0,
            digits: BTreeMap::new(),
        }
    }

    /// The core vertex of the word `x₁ … x_k`: level `k`, digit `x_j` at level `j`.
    pub fn from_word(word: &[u32]) -> Self {
        Self {
            level: word.len() as i64,
            digits: word
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(j, &x)| (j as i64 + 1, x))
                .collect(),
        }
    }

    pub fn digit(&self, level: i64) -> u32 {
        self.digits.get(&level).copied().unwrap_or(0)
    }

    /// The word of a core vertex: one in the subtree below the marked vertex.
    pub fn core_word(&self) -> Option<Vec<u32>> {
        if self.level < 0 || self.digits.keys().next().is_some_and(|&j| j <= 0) {
            return None;
        }
        Some((1..=self.level).map(|j| self.digit(j)).collect())
    }

    /// For a vertex off the core: the height above the core and the core
    /// vertex at the foot of its ray.
    pub fn ray_foot(&self) -> Option<(i64, TreeVertex)> {
        if self.core_word().is_some() {
            return None;
        }
        let m = match self.digits.keys().next() {
            Some(&low) if low <= 0 => 1 - low,
            _ => -self.level,
        };
        Some((m, self.shifted(m)))
    }

    /// Translation along the marked ray by `k` levels.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            level: self.level + k,
            digits: self.digits.iter().map(|(&j, &x)| (j + k, x)).collect(),
        }
    }

    /// Applies an alphabet permutation to the subtrees below the marked vertex.
    pub fn rotated(&self, perm: &[u32]) -> Self {
        if self.level < 1 || self.digits.keys().next().is_some_and(|&j| j <= 0) {
            return self.clone();
        }
        let mut out = self.clone();
        let new = perm[self.digit(1) as usize];
        if new == 0 {
            out.digits.remove(&1);
        } else {
            out.digits.insert(1, new);
        }
        out
    }

    pub fn key(&self) -> String {
        match (self.core_word(), self.ray_foot()) {
            (Some(w), _) => {
                let s: String = w.iter().map(|x| x.to_string()).collect();
                if s.is_empty() { "()".into() } else { s }
            }
            (None, Some((m, foot))) => format!("{}^{m}", foot.key()),
            (None, None) => unreachable!("every vertex is core or on a ray"),
        }
    }
}

/// A letter of a reduced word in `Z * F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DaLetter {
    T(i64),
    F(u32),
}

/// The free product `Z * F`, acting on the tree through the discrete affine
/// group. Elements are reduced words; only the action is used, so distinct
/// words may act identically.
#[derive(Debug, Clone)]
pub struct DaGroup {
    pub f: FiniteGroupTable,
    pub q: usize,
}

impl DaGroup {
    pub fn new(f: FiniteGroupTable) -> Result<Self, HarmonicError> {
        let q = f
            .perm(f.id())
            .map(|p| p.degree())
            .ok_or_else(|| HarmonicError::InvalidParameter("F must be a permutation group".into()))?;
        if q < 2 {
            return Err(HarmonicError::InvalidParameter("alphabet needs q ≥ 2".into()));
        }
        let mut orbit = HashSet::from([0u32]);
        for a in f.elements() {
            orbit.insert(f.perm(a).expect("permutation group").0[0]);
        }
        if orbit.len() != q {
            return Err(HarmonicError::InvalidParameter("F is not transitive on the alphabet".into()));
        }
        Ok(Self { f, q })
    }

    pub fn t(&self, k: i64) -> Vec<DaLetter> {
        if k == 0 { vec![] } else { vec![DaLetter::T(k)] }
    }

    pub fn letter(&self, a: u32) -> Vec<DaLetter> {
        if a == self.f.id() { vec![] } else { vec![DaLetter::F(a)] }
    }

    fn push(&self, w: &mut Vec<DaLetter>, l: DaLetter) {
        let merged = match (w.last(), l) {
            (Some(DaLetter::T(a)), DaLetter::T(b)) => Some(DaLetter::T(a + b)),
            (Some(DaLetter::F(a)), DaLetter::F(b)) => Some(DaLetter::F(self.f.mul(a, &b))),
            _ => None,
        };
        match merged {
            Some(m) => {
                w.pop();
                let trivial = matches!(m, DaLetter::T(0)) || m == DaLetter::F(self.f.id());
                if !trivial {
                    w.push(m);
                }
            }
            None => w.push(l),
        }
    }

    /// Right action `v . w`, letters applied left to right.
    pub fn act(&self, v: &TreeVertex, w: &[DaLetter]) -> TreeVertex {
        let mut x = v.clone();
        for l in w {
            x = match *l {
                DaLetter::T(k) => x.shifted(k),
                DaLetter::F(a) => x.rotated(&self.f.perm(a).expect("permutation group").0),
            };
        }
        x
    }
}

impl Group for DaGroup {
    type Elem = Vec<DaLetter>;

    fn identity(&self) -> Self::Elem {
        Vec::new()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut w = a.clone();
        for &l in b {
            self.push(&mut w, l);
        }
        w
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        a.iter()
            .rev()
            .map(|l| match *l {
                DaLetter::T(k) => DaLetter::T(-k),
                DaLetter::F(x) => DaLetter::F(self.f.inv(&x)),
            })
            .collect()
    }

    fn key(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "e".into();
        }
        a.iter()
            .map(|l| match l {
                DaLetter::T(k) => format!("t{k}"),
                DaLetter::F(x) => format!("f{}", self.f.label(*x)),
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// `¼ t + ¼ t⁻¹ + ½ u_F`, the identity of `F` included.
pub fn da_step(group: &DaGroup) -> StepDistribution<DaGroup> {
    let order = group.f.order_of_group() as u128;
    let mut atoms = vec![(group.t(1), Prob::new(1, 4)), (group.t(-1), Prob::new(1, 4))];
    atoms.extend(group.f.elements().map(|a| (group.letter(a), Prob::new(1, 2 * order))));
    StepDistribution::new(group.clone(), atoms).expect("symmetric step law")
}

/// The truncated Schreier graph together with its step law.
#[derive(Debug, Clone)]
pub struct DaGraph {
    pub group: DaGroup,
    pub step: StepDistribution<DaGroup>,
    pub graph: SchreierGraph<TreeVertex>,
    pub depth: usize,
    pub ray_len: usize,
}

/// Explores the orbit of the marked vertex, keeping core words of length at
/// most `depth` and ray vertices at most `ray_len` above the core, then
/// checks the core-and-rays shape: one vertex per word, a ray over every
/// word not starting with 0 (the empty word included), and `F` fixing every
/// ray vertex.
pub fn da_build(f: FiniteGroupTable, depth: usize, ray_len: usize) -> Result<DaGraph, HarmonicError> {
    if ray_len == 0 {
        return Err(HarmonicError::InvalidParameter("ray_len must be positive".into()));
    }
    let group = DaGroup::new(f)?;
    let step = da_step(&group);
    let gens = step.support();
    let (d, r) = (depth as i64, ray_len as i64);
    let keep = |v: &TreeVertex| match v.core_word() {
        Some(w) => w.len() <= depth,
        None => {
            let (m, foot) = v.ray_foot().expect("off-core vertex lies on a ray");
            m <= r && foot.level <= d
        }
    };
    let graph = SchreierGraph::explore(&group, TreeVertex::root(), &gens, |v, g| group.act(v, g), usize::MAX, keep);

    let q = group.q;
    let mut core = 0usize;
    let mut rays = 0usize;
    for v in graph.points() {
        match v.core_word() {
            Some(_) => core += 1,
            None => {
                rays += 1;
                let (_, foot) = v.ray_foot().expect("ray");
                let w = foot.core_word().expect("foot is core");
                if w.first() == Some(&0) {
                    return Err(HarmonicError::ShapeMismatch(format!("ray above {}", foot.key())));
                }
                for a in group.f.elements() {
                    if group.act(v, &group.letter(a)) != *v {
                        return Err(HarmonicError::ShapeMismatch(format!("F moves ray vertex {}", v.key())));
                    }
                }
            }
        }
    }
    let expected_core: usize = (0..=depth as u32).map(|k| q.pow(k)).sum();
    let expected_rays = q.pow(depth as u32) * ray_len;
    if core != expected_core || rays != expected_rays {
        return Err(HarmonicError::ShapeMismatch(format!(
            "{core} core and {rays} ray vertices, expected {expected_core} and {expected_rays}"
        )));
    }
    if !graph.check_action() {
        return Err(HarmonicError::ShapeMismatch("generators do not act bijectively".into()));
    }
    Ok(DaGraph {
        group,
        step,
        graph,
        depth,
        ray_len,
    })
}

/// What the harmonic extension does on the ray above the marked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootTreatment {
    /// Constant extension; the marked vertex is held at its template value.
    Pinned,
    /// Constant extension on the truncation boundary only; the marked vertex
    /// is solved for like any other.
    Free,
    /// The ray above the marked vertex carries gradient `a` per edge, which
    /// is what harmonicity at the marked vertex forces.
    LinearRay,
}

fn q_pow(q: usize, n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(n as u32))
}

/// Template value at a core word `x₁ … x_k`, with `h(∅) = 0`:
/// `h(0v) − h(v) = a/q^|v|`, `h(iv) − h(0v) = a/(2q^|v|)` for `i ≠ 0`.
fn template_core(q: usize, a: &BigRational, word: &[u32]) -> BigRational {
    let mut h = BigRational::zero();
    let two = BigRational::from_integer(2.into());
    for (i, &x) in word.iter().enumerate().rev() {
        let scale = a / q_pow(q, word.len() - 1 - i);
        h += &scale;
        if x != 0 {
            h += scale / &two;
        }
    }
    h
}

/// The gradient template extended along rays: constant on every ray, except
/// on the ray above the marked vertex under [`RootTreatment::LinearRay`].
pub fn da_template(g: &DaGraph, a: &BigRational, root: RootTreatment) -> ScalarField {
    ScalarField::exact_from(&g.graph, |v| match v.core_word() {
        Some(w) => template_core(g.group.q, a, &w),
        None => {
            let (m, foot) = v.ray_foot().expect("ray");
            let base = template_core(g.group.q, a, &foot.core_word().expect("core"));
            if root == RootTreatment::LinearRay && foot.level == 0 {
                base - a * BigRational::from_integer(m.into())
            } else {
                base
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Edge from `v` to `0v`
    Vertical,
    /// Edge from `iv` to `jv`
    Horizontal,
}

/// Gradient comparison on one core edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDeviation {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    /// Length of the longer endpoint word.
    pub depth: usize,
    pub template: BigRational,
    pub solved: f64,
    pub relative: f64,
    pub touches_root: bool,
}

#[derive(Debug, Clone)]
pub struct DaSolve {
    pub root: RootTreatment,
    pub template: ScalarField,
    pub solved: Vec<f64>,
    pub cg: CgReport,
    /// Core edges of depth at most `depth − 2`.
    pub edges: Vec<EdgeDeviation>,
    /// Template residual at every interior vertex with the constant root ray;
    /// nonzero entries only.
    pub template_defects: Vec<(String, BigRational)>,
    /// Gradient per edge on the ray above the marked vertex that makes the
    /// marked vertex harmonic.
    pub forced_root_gradient: BigRational,
    /// Energy `¼ a²` carried by each edge of that ray; the sum over the
    /// infinite ray diverges.
    pub root_ray_energy_per_edge: BigRational,
}

impl DaSolve {
    pub fn max_relative(&self, include_root: bool) -> f64 {
        self.edges
            .iter()
            .filter(|e| include_root || !e.touches_root)
            .map(|e| e.relative)
            .fold(0.0, f64::max)
    }
}

/// Dirichlet solve of harmonicity on the truncated graph with boundary
/// values from the template; compares gradients on the core.
pub fn da_harmonic(g: &DaGraph, a: &BigRational, root: RootTreatment, tol: f64) -> Result<DaSolve, HarmonicError> {
    let graph = &g.graph;
    let n = graph.len();
    let template = da_template(g, a, root);
    let tvals = template.to_f64();
    let root_idx = graph.index_of(&TreeVertex::root()).expect("root explored");
    let fixed: Vec<bool> = (0..n)
        .map(|v| !graph.is_interior(v) || (root == RootTreatment::Pinned && v == root_idx))
        .collect();
    let weights: Vec<(usize, f64)> = graph
        .weights(&g.step)?
        .into_iter()
        .map(|(i, p)| (i, *p.numer() as f64 / *p.denom() as f64))
        .collect();
    let unknowns: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
    let mut slot = vec![usize::MAX; n];
    for (k, &v) in unknowns.iter().enumerate() {
        slot[v] = k;
    }
    // (I − P) restricted to the unknowns, with the fixed part moved to b
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); unknowns.len()];
    let mut diag = vec![1.0; unknowns.len()];
    let mut b = vec![0.0; unknowns.len()];
    for (k, &v) in unknowns.iter().enumerate() {
        for &(gi, p) in &weights {
            let w = graph.act(v, gi).expect("unknowns are interior");
            if w == v {
                diag[k] -= p;
            } else if fixed[w] {
                b[k] += p * tvals[w];
            } else {
                rows[k].push((slot[w], p));
            }
        }
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        for k in 0..x.len() {
            out[k] = diag[k] * x[k] - rows[k].iter().map(|&(j, p)| p * x[j]).sum::<f64>();
        }
    };
    let (x, cg) = conjugate_gradient(apply, &diag, &b, tol, DEFAULT_MAX_ITER)?;
    let mut solved = tvals.clone();
    for (k, &v) in unknowns.iter().enumerate() {
        solved[v] = x[k];
    }

    let q = g.group.q;
    let mut edges = Vec::new();
    let max_depth = g.depth.saturating_sub(2);
    for (v, p) in graph.points().iter().enumerate() {
        let Some(w) = p.core_word() else { continue };
        if w.len() > max_depth {
            continue;
        }
        let mut down = vec![0u32];
        down.extend(&w);
        let mut push = |to: Vec<u32>, kind| {
            let u = graph.index_of(&TreeVertex::from_word(&to)).expect("core edge in window");
            let grad_t = match (&template, kind) {
                (ScalarField::Exact(t), _) => &t[u] - &t[v],
                _ => unreachable!("template is exact"),
            };
            let grad_s = solved[u] - solved[v];
            let depth = to.len().max(w.len());
            let scale = if grad_t.is_zero() {
                a.abs().to_f64().unwrap_or(1.0) / (2.0 * (q as f64).powi(depth as i32 - 1))
            } else {
                grad_t.abs().to_f64().unwrap_or(1.0)
            };
            let dev = (grad_s - grad_t.to_f64().unwrap_or(f64::NAN)).abs();
            edges.push(EdgeDeviation {
                from: p.key(),
                to: TreeVertex::from_word(&to).key(),
                kind,
                depth,
                relative: if scale == 0.0 { dev } else { dev / scale },
                template: grad_t,
                solved: grad_s,
                touches_root: v == root_idx || u == root_idx,
            });
        };
        if w.len() < max_depth {
            push(down, EdgeKind::Vertical);
        }
        if let Some((&first, rest)) = w.split_first() {
            for j in (first + 1)..q as u32 {
                let mut to = vec![j];
                to.extend(rest);
                push(to, EdgeKind::Horizontal);
            }
        }
    }

    let constant = da_template(g, a, RootTreatment::Free);
    let interior: Vec<usize> = graph.interior().collect();
    let report = harmonicity_residual_on(graph, &constant, &g.step, interior)?;
    let template_defects = report
        .defects(0.0)
        .into_iter()
        .map(|(v, r)| match r {
            super::Scalar::Exact(q) => (graph.point(v).key(), q),
            super::Scalar::Float(_) => unreachable!("exact field"),
        })
        .collect();
    let quarter = prob_to_big(Prob::new(1, 4));
    Ok(DaSolve {
        root,
        template,
        solved,
        cg,
        edges,
        template_defects,
        forced_root_gradient: a.clone(),
        root_ray_energy_per_edge: quarter * a * a,
    })
}

/// Partial sums of `Σ_n (a/qⁿ)² qⁿ/4 + (a/(2q^{n+1}))² (qⁿ/(2q)) (q(q−1)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DaEnergy {
    /// `partial[N]` sums the terms `n = 0..=N`.
    pub partial: Vec<BigRational>,
    /// Geometric-series evaluation: first term times `q/(q−1)`.
    pub limit: BigRational,
}

fn energy_term(q: usize, a: &BigRational, n: usize) -> BigRational {
    let qb = BigRational::from_integer(BigInt::from(q));
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let vertical = (a / q_pow(q, n)).pow(2) * q_pow(q, n) / &four;
    let horizontal = (a / (&two * q_pow(q, n + 1))).pow(2) * (q_pow(q, n) / (&two * &qb)) * (&qb * (&qb - BigRational::one()) / &two);
    vertical + horizontal
}

pub fn da_energy(q: usize, a: &BigRational, levels: usize) -> DaEnergy {
    assert!(q >= 2, "q must be at least 2");
    let mut acc = BigRational::zero();
    let partial = (0..levels)
        .map(|n| {
            acc += energy_term(q, a, n);
            acc.clone()
        })
        .collect();
    let qb = BigRational::from_integer(BigInt::from(q));
    let limit = energy_term(q, a, 0) * &qb / (&qb - BigRational::one());
    DaEnergy { partial, limit }
}

/// `a² q/(q−1) (1/4 + (q−1)/(16q²))`.
pub fn da_energy_closed_form(q: usize, a: &BigRational) -> BigRational {
    let qb = BigRational::from_integer(BigInt::from(q));
    let one = BigRational::one();
    a * a * &qb / (&qb - &one)
        * (BigRational::new(1.into(), 4.into()) + (&qb - &one) / (BigRational::from_integer(16.into()) * &qb * &qb))
}

/// Energy `½ Σ_x Σ_g (h(x.g) − h(x))² μ(g)` of the template restricted to
/// the edges among core words of length at most `levels`, computed on the
/// graph.
pub fn da_rule_energy(g: &DaGraph, a: &BigRational, levels: usize) -> BigRational {
    let template = da_template(g, a, RootTreatment::Free);
    let ScalarField::Exact(t) = template else { unreachable!("template is exact") };
    let weights = g.graph.weights(&g.step).expect("graph generators come from the step law");
    let in_core = |v: usize| g.graph.point(v).core_word().is_some_and(|w| w.len() <= levels);
    let mut e = BigRational::zero();
    for v in (0..g.graph.len()).filter(|&v| in_core(v)) {
        for &(gi, p) in &weights {
            if let Some(w) = g.graph.act(v, gi).filter(|&w| in_core(w)) {
                let d = &t[w] - &t[v];
                e += d.clone() * d * prob_to_big(p);
            }
        }
    }
    e / BigRational::from_integer(2.into())
}

/// Limit of [`da_rule_energy`]: `a² q/(q−1) (1/4 + (q−1)/(8q))`.
pub fn da_rule_energy_limit(q: usize, a: &BigRational) -> BigRational {
    let qb = BigRational::from_integer(BigInt::from(q));
    let one = BigRational::one();
    a * a * &qb / (&qb - &one) * (BigRational::new(1.into(), 4.into()) + (&qb - &one) / (BigRational::from_integer(8.into()) * &qb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Perm;
    use crate::harmonic::harmonicity_residual;

    fn z2() -> FiniteGroupTable {
        FiniteGroupTable::from_permutations(&[Perm::from_cycles(2, &[&[0, 1]])], 16).unwrap()
    }

    fn z3() -> FiniteGroupTable {
        FiniteGroupTable::from_permutations(&[Perm::from_cycles(3, &[&[0, 1, 2]])], 16).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn coordinates() {
        let v = TreeVertex::from_word(&[1, 0, 1]);
        assert_eq!(v.key(), "101");
        assert_eq!(v.shifted(1).core_word(), Some(vec![0, 1, 0, 1]));
        let up = v.shifted(-1);
        assert_eq!(up.core_word(), None);
        assert_eq!(up.ray_foot(), Some((1, v.clone())));
        assert_eq!(up.key(), "101^1");
        assert_eq!(TreeVertex::root().shifted(-3).ray_foot(), Some((3, TreeVertex::root())));
        assert_eq!(v.rotated(&[1, 0]).key(), "001");
        assert_eq!(up.rotated(&[1, 0]), up);
        assert_eq!(TreeVertex::root().rotated(&[1, 0]), TreeVertex::root());
    }

    #[test]
    fn free_product_words() {
        let g = DaGroup::new(z3()).unwrap();
        let c = g.f.marked("gens").unwrap()[0];
        let w = g.mul(&g.t(2), &g.mul(&g.t(-2), &g.letter(c)));
        assert_eq!(w, g.letter(c));
        let x = g.product(&[g.t(1), g.letter(c), g.t(-1)]);
        assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        let v = TreeVertex::from_word(&[2, 1]);
        assert_eq!(g.act(&v, &g.mul(&x, &g.inv(&x))), v);
        assert!(DaGroup::new(FiniteGroupTable::cyclic(3)).is_err());
    }

    #[test]
    fn depth_three_shape() {
        let g = da_build(z2(), 3, 2).unwrap();
        let core = g.graph.points().iter().filter(|v| v.core_word().is_some()).count();
        assert_eq!(core, 15);
        assert_eq!(g.graph.len(), 15 + 8 * 2);
        let g3 = da_build(z3(), 2, 1).unwrap();
        assert_eq!(g3.graph.len(), 13 + 9);
    }

    #[test]
    fn template_follows_gradient_rules() {
        let a = q(1, 1);
        assert_eq!(template_core(2, &a, &[0]), q(1, 1));
        assert_eq!(template_core(2, &a, &[1]), q(3, 2));
        assert_eq!(template_core(2, &a, &[0, 0]), q(3, 2));
        assert_eq!(template_core(2, &a, &[1, 0]), q(7, 4));
        assert_eq!(template_core(2, &a, &[0, 1]), q(2, 1));
    }

    #[test]
    fn template_is_harmonic_off_the_root() {
        let g = da_build(z2(), 5, 3).unwrap();
        let a = q(1, 1);
        let f = da_template(&g, &a, RootTreatment::Free);
        let r = harmonicity_residual(&g.graph, &f, &g.step).unwrap();
        let bad = r.defects(0.0);
        assert_eq!(bad.len(), 1);
        assert_eq!(g.graph.point(bad[0].0).key(), "()");
        assert_eq!(bad[0].1, crate::harmonic::Scalar::Exact(q(1, 4)));
        let lin = da_template(&g, &a, RootTreatment::LinearRay);
        assert!(harmonicity_residual(&g.graph, &lin, &g.step).unwrap().max_abs.is_zero());
    }

    #[test]
    fn zero_gradient_solve() {
        let g = da_build(z2(), 4, 2).unwrap();
        let s = da_harmonic(&g, &BigRational::zero(), RootTreatment::Free, 1e-10).unwrap();
        assert!(s.solved.iter().all(|&x| x == 0.0));
        assert!(s.template_defects.is_empty());
    }

    #[test]
    fn energy_series() {
        let e = da_energy(2, &q(1, 1), 13);
        assert_eq!(e.limit, q(17, 32));
        assert_eq!(e.partial[0], q(17, 64));
        assert!(e.partial.windows(2).all(|w| w[0] < w[1] && w[1] < e.limit));
        for qq in [2, 3, 5] {
            assert_eq!(da_energy(qq, &q(1, 1), 1).limit, da_energy_closed_form(qq, &q(1, 1)));
        }
        assert_eq!(da_energy(2, &BigRational::zero(), 4).limit, BigRational::zero());
    }

    #[test]
    fn rule_energy_on_the_graph() {
        for (f, qq) in [(z2(), 2usize), (z3(), 3)] {
            let g = da_build(f, 5, 1).unwrap();
            let a = q(1, 1);
            let mut expect = BigRational::zero();
            for m in 0..4usize {
                expect += q(1, 4) / q_pow(qq, m) + (q(qq as i64, 1) - q(1, 1)) / (q(8, 1) * q_pow(qq, m + 1));
            }
            assert_eq!(da_rule_energy(&g, &a, 4), expect);
        }
        assert_eq!(da_rule_energy_limit(2, &q(1, 1)), q(5, 8));
    }
}
