use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::HarmonicError;
use crate::group::Group;
use crate::walk::{prob_to_big, Prob, StepDistribution};

/// A finite window of a Schreier graph: points of an orbit with the action
/// of each generator recorded as a partial map on indices.
#[derive(Debug, Clone)]
pub struct SchreierGraph<P> {
    points: Vec<P>,
    index: HashMap<P, usize>,
    gen_keys: Vec<String>,
    /// `actions[g][v]`: index of `v . g`, `None` when it leaves the window.
    actions: Vec<Vec<Option<usize>>>,
    /// BFS distance from the base point.
    dist: Vec<usize>,
}

impl<P: Clone + Eq + Hash + Debug> SchreierGraph<P> {
    /// Explores the orbit of `start` under `gens` by breadth-first search,
    /// keeping the points accepted by `keep` that lie within `radius` steps.
    pub fn explore<G, A, K>(
        group: &G,
        start: P,
        gens: &[G::Elem],
        act: A,
        radius: usize,
        keep: K,
    ) -> Self
    where
        G: Group,
        A: Fn(&P, &G::Elem) -> P,
        K: Fn(&P) -> bool,
    {
        let mut points = vec![start.clone()];
        let mut index = HashMap::from([(start, 0usize)]);
        let mut dist = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if dist[i] == radius {
                continue;
            }
            for g in gens {
                let p = act(&points[i], g);
                if index.contains_key(&p) || !keep(&p) {
                    continue;
                }
                index.insert(p.clone(), points.len());
                dist.push(dist[i] + 1);
                queue.push_back(points.len());
                points.push(p);
            }
        }
        let actions = gens
            .iter()
            .map(|g| {
                points
                    .iter()
                    .map(|p| index.get(&act(p, g)).copied())
                    .collect()
            })
            .collect();
        Self {
            points,
            index,
            gen_keys: gens.iter().map(|g| group.key(g)).collect(),
            actions,
            dist,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &P {
        &self.points[v]
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn generator_keys(&self) -> &[String] {
        &self.gen_keys
    }

    pub fn generator_index(&self, key: &str) -> Option<usize> {
        self.gen_keys.iter().position(|k| k == key)
    }

    /// Image of vertex `v` under generator `g`, if it is in the window.
    pub fn act(&self, v: usize, g: usize) -> Option<usize> {
        self.actions[g][v]
    }

    pub fn distance(&self, v: usize) -> usize {
        self.dist[v]
    }

    /// Vertices whose images under every generator are in the window.
    pub fn is_interior(&self, v: usize) -> bool {
        self.actions.iter().all(|a| a[v].is_some())
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.is_interior(v))
    }

    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| !self.is_interior(v))
    }

    /// Checks that each generator acts injectively and that the generator
    /// set is closed under inverses with inverse actions, where defined.
    pub fn check_action(&self) -> bool {
        for a in &self.actions {
            let mut hit = vec![false; self.len()];
            for w in a.iter().flatten() {
                if std::mem::replace(&mut hit[*w], true) {
                    return false;
                }
            }
        }
        (0..self.actions.len()).all(|g| {
            (0..self.actions.len()).any(|h| {
                (0..self.len()).all(|v| match self.actions[g][v] {
                    Some(w) => self.actions[h][w].map_or(true, |u| u == v),
                    None => true,
                })
            })
        })
    }

    /// Pairs `(generator index, probability)` for the atoms of a step law.
    pub fn weights<G: Group>(&self, d: &StepDistribution<G>) -> Result<Vec<(usize, Prob)>, HarmonicError> {
        d.measure()
            .iter()
            .map(|(g, p)| {
                let key = d.group.key(g);
                self.generator_index(&key)
                    .map(|i| (i, p))
                    .ok_or(HarmonicError::UnknownGenerator(key))
            })
            .collect()
    }

    /// Edge list: `(vertex key, generator key, image key)`.
    pub fn edge_list(&self, key: impl Fn(&P) -> String) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for (v, p) in self.points.iter().enumerate() {
            for (g, a) in self.actions.iter().enumerate() {
                if let Some(w) = a[v] {
                    out.push((key(p), self.gen_keys[g].clone(), key(&self.points[w])));
                }
            }
        }
        out
    }
}

/// Values on the vertices of a graph, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// A single value of a [`ScalarField`].
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => crate::walk::big_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", crate::walk::fmt_big(q)),
            Scalar::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl ScalarField {
    pub fn exact_from<P>(graph: &SchreierGraph<P>, h: impl Fn(&P) -> BigRational) -> Self {
        ScalarField::Exact(graph.points.iter().map(h).collect())
    }

    pub fn float_from<P>(graph: &SchreierGraph<P>, h: impl Fn(&P) -> f64) -> Self {
        ScalarField::Float(graph.points.iter().map(h).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            ScalarField::Exact(v) => v.len(),
            ScalarField::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarField::Exact(_))
    }

    pub fn get(&self, v: usize) -> Scalar {
        match self {
            ScalarField::Exact(x) => Scalar::Exact(x[v].clone()),
            ScalarField::Float(x) => Scalar::Float(x[v]),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ScalarField::Exact(x) => x.iter().map(crate::walk::big_to_f64).collect(),
            ScalarField::Float(x) => x.clone(),
        }
    }
}

/// Per-vertex harmonicity defects over the interior of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `(vertex, Σ_g μ(g) field(v.g) − field(v))` for every interior vertex.
    pub per_vertex: Vec<(usize, Scalar)>,
    pub max_abs: Scalar,
    /// Largest BFS distance among the interior vertices checked.
    pub radius: usize,
}

impl ResidualReport {
    /// Vertices with a nonzero defect (exact) or one above `tol` (float).
    pub fn defects(&self, tol: f64) -> Vec<(usize, Scalar)> {
        self.per_vertex
            .iter()
            .filter(|(_, r)| match r {
                Scalar::Exact(q) => !q.is_zero(),
                Scalar::Float(x) => x.abs() > tol,
            })
            .cloned()
            .collect()
    }
}

/// `Σ_g μ(g) field(v.g) − field(v)` at every interior vertex.
pub fn harmonicity_residual<P, G>(
    graph: &SchreierGraph<P>,
    field: &ScalarField,
    d: &StepDistribution<G>,
) -> Result<ResidualReport, HarmonicError>
where
    P: Clone + Eq + Hash + Debug,
    G: Group,
{
    harmonicity_residual_on(graph, field, d, graph.interior().collect())
}

/// Same as [`harmonicity_residual`] over an explicit vertex list; fails with
/// `BoundaryTouched` if one of them is missing a neighbor.
pub fn harmonicity_residual_on<P, G>(
    graph: &SchreierGraph<P>,
    field: &ScalarField,
    d: &StepDistribution<G>,
    vertices: Vec<usize>,
) -> Result<ResidualReport, HarmonicError>
where
    P: Clone + Eq + Hash + Debug,
    G: Group,
{
    if field.len() != graph.len() {
        return Err(HarmonicError::FieldSize {
            expected: graph.len(),
            got: field.len(),
        });
    }
    let weights = graph.weights(d)?;
    let mut per_vertex = Vec::with_capacity(vertices.len());
    let mut radius = 0;
    for v in vertices {
        let nbrs: Vec<(usize, Prob)> = weights
            .iter()
            .map(|&(g, p)| graph.act(v, g).map(|w| (w, p)))
            .collect::<Option<_>>()
            .ok_or_else(|| HarmonicError::BoundaryTouched(v))?;
        radius = radius.max(graph.distance(v));
        let r = match field {
            ScalarField::Exact(x) => {
                let mut s = -x[v].clone();
                for (w, p) in nbrs {
                    s += &x[w] * prob_to_big(p);
                }
                Scalar::Exact(s)
            }
            ScalarField::Float(x) => {
                let s = nbrs
                    .iter()
                    .map(|&(w, p)| x[w] * (*p.numer() as f64 / *p.denom() as f64))
                    .sum::<f64>();
                Scalar::Float(s - x[v])
            }
        };
        per_vertex.push((v, r));
    }
    let max_abs = match field {
        ScalarField::Exact(_) => Scalar::Exact(
            per_vertex
                .iter()
                .map(|(_, r)| match r {
                    Scalar::Exact(q) => q.abs(),
                    Scalar::Float(_) => unreachable!(),
                })
                .max()
                .unwrap_or_else(BigRational::zero),
        ),
        ScalarField::Float(_) => Scalar::Float(
            per_vertex
                .iter()
                .map(|(_, r)| r.to_f64().abs())
                .fold(0.0, f64::max),
        ),
    };
    Ok(ResidualReport {
        per_vertex,
        max_abs,
        radius,
    })
}

/// One row of a growth table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub m: f64,
    pub m_over_n: f64,
    pub log_m_over_n: f64,
}

/// `M(n) = max |field|` over the BFS ball of radius `n` around the base point.
pub fn growth_profile<P: Clone + Eq + Hash + Debug>(graph: &SchreierGraph<P>, field: &ScalarField, radii: &[usize]) -> Result<Vec<GrowthRow>, HarmonicError> {
    let reach = graph.dist.iter().copied().max().unwrap_or(0);
    let vals = field.to_f64();
    radii
        .iter()
        .map(|&n| {
            if n > reach {
                return Err(HarmonicError::MetricUnavailable { radius: n, reach });
            }
            let m = (0..graph.len())
                .filter(|&v| graph.dist[v] <= n)
                .map(|v| vals[v].abs())
                .fold(0.0, f64::max);
            let nf = n as f64;
            Ok(GrowthRow {
                n,
                m,
                m_over_n: if n == 0 { f64::NAN } else { m / nf },
                log_m_over_n: if n == 0 { f64::NAN } else { m.ln() / nf },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Integers;

    fn z_window(r: usize) -> (SchreierGraph<i64>, StepDistribution<Integers>) {
        let d = StepDistribution::new(Integers, vec![(1, Prob::new(1, 2)), (-1, Prob::new(1, 2))]).unwrap();
        let g = SchreierGraph::explore(&Integers, 0i64, &[1, -1], |x, s| x + s, r, |_| true);
        (g, d)
    }

    #[test]
    fn linear_and_constant_fields_are_harmonic() {
        let (g, d) = z_window(10);
        assert_eq!(g.len(), 21);
        assert_eq!(g.interior().count(), 19);
        for f in [
            ScalarField::exact_from(&g, |_| BigRational::from_integer(7.into())),
            ScalarField::exact_from(&g, |x| BigRational::from_integer((*x).into())),
        ] {
            let r = harmonicity_residual(&g, &f, &d).unwrap();
            assert!(r.max_abs.is_zero());
        }
        let sq = ScalarField::float_from(&g, |x| (x * x) as f64);
        let r = harmonicity_residual(&g, &sq, &d).unwrap();
        assert_eq!(r.max_abs, Scalar::Float(1.0));
    }

    #[test]
    fn boundary_touched_and_unknown_generators() {
        let (g, d) = z_window(3);
        let f = ScalarField::Float(vec![0.0; g.len()]);
        let edge = g.index_of(&3).unwrap();
        assert_eq!(
            harmonicity_residual_on(&g, &f, &d, vec![edge]),
            Err(HarmonicError::BoundaryTouched(edge))
        );
        let lazy = StepDistribution::new(Integers, vec![(0, Prob::new(1, 2)), (1, Prob::new(1, 4)), (-1, Prob::new(1, 4))]).unwrap();
        assert!(matches!(harmonicity_residual(&g, &f, &lazy), Err(HarmonicError::UnknownGenerator(_))));
        assert!(g.check_action());
    }

    #[test]
    fn growth_of_identity_field() {
        let (g, _) = z_window(8);
        let f = ScalarField::float_from(&g, |x| *x as f64);
        let rows = growth_profile(&g, &f, &[1, 4, 8]).unwrap();
        assert!(rows.iter().all(|r| r.m == r.n as f64 && r.m_over_n == 1.0));
        assert!(matches!(growth_profile(&g, &f, &[9]), Err(HarmonicError::MetricUnavailable { .. })));
    }
}
