use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use super::{Group, GroupError};

/// Default cap on the order of a group generated by permutations.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Largest order for which a full multiplication table is materialized.
const MAX_TABLE_ORDER: usize = 8192;

/// Associativity is verified exhaustively at construction up to this order.
const ASSOC_CHECK_ORDER: usize = 512;

/// A permutation of `0..n`, stored as its image list.
///
/// Products compose left to right: `(p * q)[i] = q[p[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut img: Vec<u32> = (0..n as u32).collect();
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                img[x as usize] = cyc[(i + 1) % cyc.len()];
            }
        }
        Perm(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn then(&self, q: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| q.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&x| {
            let x = x as usize;
            x < seen.len() && !std::mem::replace(&mut seen[x], true)
        })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x] as usize;
            }
            let body: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite group given by its full multiplication table.
///
/// Elements are indices `0..order`. Named generator subsets (e.g. `"A"`,
/// `"B"`, involutions) are carried along as marked subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    id: u32,
    labels: Vec<String>,
    perms: Option<Vec<Perm>>,
    marked: BTreeMap<String, Vec<u32>>,
}

impl FiniteGroupTable {
    /// Validates a raw table: closure, two-sided identity, inverses, and
    /// associativity (exhaustive up to order 512).
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::Invalid("table is not order x order".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::Invalid("table is not closed".into()));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        let id = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::Invalid("no two-sided identity".into()))?;
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| at(x, y) == id && at(y, x) == id)
                .ok_or_else(|| GroupError::Invalid(format!("element {x} has no inverse")))?;
            inverse[x] = y as u32;
        }
        if order <= ASSOC_CHECK_ORDER {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::Invalid(format!(
                                "associativity fails on ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            order,
            table,
            inverse,
            id: id as u32,
            labels: (0..order).map(|i| i.to_string()).collect(),
            perms: None,
            marked: BTreeMap::new(),
        })
    }

    /// The permutation group generated by `generators`, as a closed table.
    /// The generators are recorded as the marked subset `"gens"`.
    pub fn from_permutations(generators: &[Perm], cap: usize) -> Result<Self, GroupError> {
        let degree = generators.first().map_or(0, Perm::degree);
        if generators.iter().any(|g| g.degree() != degree || !g.is_valid()) {
            return Err(GroupError::Invalid(
                "generators must be permutations of a common domain".into(),
            ));
        }
        let cap = cap.min(MAX_TABLE_ORDER);
        let ident = Perm::identity(degree);
        let mut index: HashMap<Perm, u32> = HashMap::new();
        let mut elems = vec![ident.clone()];
        index.insert(ident, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elems[i].then(g);
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(GroupError::ClosureOverflow {
                            cap,
                            reached: elems.len() + 1,
                        });
                    }
                    index.insert(p.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0u32; order * order];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * order + b] = index[&pa.then(pb)];
            }
        }
        let inverse = elems.iter().map(|p| index[&p.inverse()]).collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        let labels = elems.iter().map(|p| p.to_string()).collect();
        let mut marked = BTreeMap::new();
        marked.insert("gens".to_string(), gens);
        Ok(Self {
            order,
            table,
            inverse,
            id: 0,
            labels,
            perms: Some(elems),
            marked,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let mut g = Self::from_table(n, table).expect("cyclic table is valid");
        g.marked.insert("gens".into(), vec![(1 % n) as u32]);
        g
    }

    /// Symmetric group on `n` points, generated by `(0 1)` and `(0 1 ... n-1)`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        let cyc: Vec<u32> = (0..n as u32).collect();
        let gens = if n <= 1 {
            vec![Perm::identity(n)]
        } else {
            vec![
                Perm::from_cycles(n, &[&[0, 1]]),
                Perm::from_cycles(n, &[&cyc]),
            ]
        };
        Self::from_permutations(&gens, DEFAULT_CLOSURE_CAP)
    }

    /// Dihedral group of order `2n`, generated by two reflections of the
    /// `n`-gon whose product is a rotation of order `n`. The reflections are
    /// marked as `"A"` and `"B"` (subgroups of order 2).
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let n32 = n as u32;
        // a: i -> -i, b: i -> 1 - i (mod n)
        let a = Perm((0..n32).map(|i| (n32 - i) % n32).collect());
        let b = Perm((0..n32).map(|i| (n32 + 1 - i) % n32).collect());
        let mut g = Self::from_permutations(&[a.clone(), b.clone()], DEFAULT_CLOSURE_CAP)?;
        let ia = g.find_perm(&a).expect("generator present");
        let ib = g.find_perm(&b).expect("generator present");
        g.mark("A", vec![g.id, ia]);
        g.mark("B", vec![g.id, ib]);
        Ok(g)
    }

    /// Direct product; element `(x, y)` has index `x * |other| + y`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            let (a1, a2) = (a / m, a % m);
            for b in 0..order {
                let (b1, b2) = (b / m, b % m);
                let c1 = self.mul(&(a1 as u32), &(b1 as u32)) as usize;
                let c2 = other.mul(&(a2 as u32), &(b2 as u32)) as usize;
                table[a * order + b] = (c1 * m + c2) as u32;
            }
        }
        let inverse = (0..order)
            .map(|a| {
                let (a1, a2) = (a / m, a % m);
                (self.inverse[a1] as usize * m + other.inverse[a2] as usize) as u32
            })
            .collect();
        let labels = (0..order)
            .map(|a| format!("({},{})", self.labels[a / m], other.labels[a % m]))
            .collect();
        Self {
            order,
            table,
            inverse,
            id: (self.id as usize * m + other.id as usize) as u32,
            labels,
            perms: None,
            marked: BTreeMap::new(),
        }
    }

    pub fn order_of_group(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn perm(&self, a: u32) -> Option<&Perm> {
        self.perms.as_ref().map(|p| &p[a as usize])
    }

    pub fn find_perm(&self, p: &Perm) -> Option<u32> {
        self.perms
            .as_ref()?
            .iter()
            .position(|q| q == p)
            .map(|i| i as u32)
    }

    pub fn mark(&mut self, name: &str, elems: Vec<u32>) {
        self.marked.insert(name.to_string(), elems);
    }

    pub fn marked(&self, name: &str) -> Option<&[u32]> {
        self.marked.get(name).map(Vec::as_slice)
    }

    pub fn marked_names(&self) -> impl Iterator<Item = &str> {
        self.marked.keys().map(String::as_str)
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        let ab = self.mul(&a, &b);
        let ai = self.inverse[a as usize];
        let bi = self.inverse[b as usize];
        self.mul(&self.mul(&ab, &ai), &bi)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.id as usize] = true;
        let mut out = vec![self.id];
        let mut queue = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(&x, &g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Normal closure of `set`: the smallest normal subgroup containing it.
    pub fn normal_closure(&self, set: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut seen = vec![false; self.order];
        for &s in set {
            for g in 0..self.order as u32 {
                let c = self.conj(&s, &g);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    gens.push(c);
                }
            }
        }
        self.subgroup(&gens)
    }

    /// Coset index of each element modulo the normal subgroup `normal`.
    pub fn coset_labels(&self, normal: &[u32]) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.order];
        let mut count = 0;
        for x in 0..self.order as u32 {
            if label[x as usize] != usize::MAX {
                continue;
            }
            for &n in normal {
                label[self.mul(&x, &n) as usize] = count;
            }
            count += 1;
        }
        (label, count)
    }

    pub fn conjugacy_class(&self, a: u32) -> Vec<u32> {
        let mut class: Vec<u32> = (0..self.order as u32).map(|g| self.conj(&a, &g)).collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// Simple iff every nontrivial element has the whole group as normal closure.
    pub fn is_simple(&self) -> bool {
        if self.order == 1 {
            return false;
        }
        let mut done = vec![false; self.order];
        for a in 0..self.order as u32 {
            if a == self.id || done[a as usize] {
                continue;
            }
            let class = self.conjugacy_class(a);
            for &c in &class {
                done[c as usize] = true;
            }
            if self.subgroup(&class).len() != self.order {
                return false;
            }
        }
        true
    }
}

impl Group for FiniteGroupTable {
    type Elem = u32;

    fn identity(&self) -> u32 {
        self.id
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.table[*a as usize * self.order + *b as usize]
    }

    #[inline]
    fn inv(&self, a: &u32) -> u32 {
        self.inverse[*a as usize]
    }

    fn key(&self, a: &u32) -> String {
        a.to_string()
    }

    fn contains(&self, a: &u32) -> bool {
        (*a as usize) < self.order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpositions_generate_s3() {
        let g = FiniteGroupTable::from_permutations(
            &[
                Perm::from_cycles(3, &[&[0, 1]]),
                Perm::from_cycles(3, &[&[0, 2]]),
            ],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        assert_eq!(g.order_of_group(), 6);
        assert!(!g.is_simple());
    }

    #[test]
    fn three_cycle_generates_cyclic_of_order_three() {
        let g =
            FiniteGroupTable::from_permutations(&[Perm::from_cycles(3, &[&[0, 1, 2]])], 100)
                .unwrap();
        assert_eq!(g.order_of_group(), 3);
        assert!(g.is_simple());
    }

    #[test]
    fn two_involutions_with_product_of_order_four() {
        let g = FiniteGroupTable::dihedral(4).unwrap();
        assert_eq!(g.order_of_group(), 8);
        let a = g.marked("A").unwrap()[1];
        let b = g.marked("B").unwrap()[1];
        assert_eq!(g.order(&g.mul(&a, &b), 16), Some(4));
        assert_eq!(g.order(&a, 4), Some(2));
    }

    #[test]
    fn closure_cap_is_reported() {
        let err = FiniteGroupTable::symmetric(5)
            .and_then(|_| {
                FiniteGroupTable::from_permutations(
                    &[
                        Perm::from_cycles(5, &[&[0, 1]]),
                        Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]),
                    ],
                    50,
                )
            })
            .unwrap_err();
        assert!(matches!(err, GroupError::ClosureOverflow { cap: 50, .. }));
    }

    #[test]
    fn table_validation_rejects_nonassociative_loops() {
        // a commutative loop of order 5 that is not a group
        let t: Vec<u32> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroupTable::from_table(5, t).is_err());
    }

    #[test]
    fn a5_is_simple_and_s4_is_not() {
        let a5 = FiniteGroupTable::from_permutations(
            &[
                Perm::from_cycles(5, &[&[0, 1, 2]]),
                Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]),
            ],
            1000,
        )
        .unwrap();
        assert_eq!(a5.order_of_group(), 60);
        assert!(a5.is_simple());
        assert!(!FiniteGroupTable::symmetric(4).unwrap().is_simple());
    }

    #[test]
    fn direct_product_is_a_group() {
        let z2 = FiniteGroupTable::cyclic(2);
        let k = z2.direct_product(&z2);
        assert_eq!(k.order_of_group(), 4);
        for x in k.elements() {
            assert_eq!(k.mul(&x, &x), k.id());
        }
    }

    #[test]
    fn perm_display_uses_cycles() {
        assert_eq!(Perm::from_cycles(4, &[&[0, 2, 3]]).to_string(), "(0 2 3)");
        assert_eq!(Perm::identity(3).to_string(), "()");
    }
}
