use std::cmp::Ordering;

use super::{Group, Integers, ZProjection};

/// A finitely supported lamp configuration, stored as `(site, value)` pairs
/// sorted by site with identity values pruned.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampConfig<S, V> {
    entries: Vec<(S, V)>,
}

impl<S, V> Default for LampConfig<S, V> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<S, V> LampConfig<S, V> {
    pub fn iter(&self) -> impl Iterator<Item = (&S, &V)> {
        self.entries.iter().map(|(s, v)| (s, v))
    }

    pub fn support(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: Ord + Clone, V: Clone> LampConfig<S, V> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a configuration from arbitrary pairs. Later duplicates win;
    /// identity values are removed with `is_id`.
    pub fn from_pairs<I, P>(pairs: I, is_id: P) -> Self
    where
        I: IntoIterator<Item = (S, V)>,
        P: Fn(&V) -> bool,
    {
        let mut entries: Vec<(S, V)> = pairs.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(S, V)> = Vec::with_capacity(entries.len());
        for (s, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 = v,
                _ => out.push((s, v)),
            }
        }
        out.retain(|(_, v)| !is_id(v));
        Self { entries: out }
    }

    pub fn get(&self, site: &S) -> Option<&V> {
        self.entries
            .binary_search_by(|(s, _)| s.cmp(site))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    fn is_normal(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

/// An element `(f, x)` of a wreath product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement<S, V> {
    pub lamps: LampConfig<S, V>,
    pub base: S,
}

/// The restricted wreath product `L ≀ B` with multiplication
/// `(f,x)(g,y) = (f · τ_x g, xy)` where `τ_x g(z) = g(z x⁻¹)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wreath<L, B> {
    pub lamp: L,
    pub base: B,
}

type Elem<L, B> = WreathElement<<B as Group>::Elem, <L as Group>::Elem>;

impl<L: Group, B: Group> Wreath<L, B>
where
    B::Elem: Ord,
{
    pub fn new(lamp: L, base: B) -> Self {
        Self { lamp, base }
    }

    pub fn element(&self, lamps: LampConfig<B::Elem, L::Elem>, base: B::Elem) -> Elem<L, B> {
        WreathElement { lamps, base }
    }

    pub fn config<I>(&self, pairs: I) -> LampConfig<B::Elem, L::Elem>
    where
        I: IntoIterator<Item = (B::Elem, L::Elem)>,
    {
        LampConfig::from_pairs(pairs, |v| self.lamp.is_identity(v))
    }

    /// `(v δ_site, e)`.
    pub fn lamp_at(&self, site: B::Elem, v: L::Elem) -> Elem<L, B> {
        WreathElement {
            lamps: self.config([(site, v)]),
            base: self.base.identity(),
        }
    }

    /// `(e, x)`.
    pub fn base_elem(&self, x: B::Elem) -> Elem<L, B> {
        WreathElement {
            lamps: LampConfig::empty(),
            base: x,
        }
    }

    /// Value of `f` at `z`, identity off the support.
    pub fn lamp_value(&self, f: &LampConfig<B::Elem, L::Elem>, z: &B::Elem) -> L::Elem {
        f.get(z).cloned().unwrap_or_else(|| self.lamp.identity())
    }

    /// `τ_x f`, the configuration `z -> f(z x⁻¹)`.
    pub fn translate(
        &self,
        f: &LampConfig<B::Elem, L::Elem>,
        x: &B::Elem,
    ) -> LampConfig<B::Elem, L::Elem> {
        let mut entries: Vec<(B::Elem, L::Elem)> = f
            .entries
            .iter()
            .map(|(w, v)| (self.base.mul(w, x), v.clone()))
            .collect();
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            entries.sort_by(|a, b| a.0.cmp(&b.0));
        }
        LampConfig { entries }
    }

    /// Pointwise product `f · g` in normal form.
    pub fn lamp_product(
        &self,
        f: &LampConfig<B::Elem, L::Elem>,
        g: &LampConfig<B::Elem, L::Elem>,
    ) -> LampConfig<B::Elem, L::Elem> {
        let (a, b) = (&f.entries, &g.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let v = self.lamp.mul(&a[i].1, &b[j].1);
                    if !self.lamp.is_identity(&v) {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LampConfig { entries: out }
    }
}

impl<L: Group, B: Group> Group for Wreath<L, B>
where
    B::Elem: Ord,
{
    type Elem = WreathElement<B::Elem, L::Elem>;

    fn identity(&self) -> Self::Elem {
        self.base_elem(self.base.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let lamps = if b.lamps.is_empty() {
            a.lamps.clone()
        } else {
            self.lamp_product(&a.lamps, &self.translate(&b.lamps, &a.base))
        };
        WreathElement {
            lamps,
            base: self.base.mul(&a.base, &b.base),
        }
    }

    /// `(f,x)⁻¹ = (g, x⁻¹)` with `g(w) = f(w x)⁻¹`.
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let xi = self.base.inv(&a.base);
        let mut entries: Vec<(B::Elem, L::Elem)> = a
            .lamps
            .entries
            .iter()
            .map(|(z, v)| (self.base.mul(z, &xi), self.lamp.inv(v)))
            .collect();
        entries.sort_by(|p, q| p.0.cmp(&q.0));
        WreathElement {
            lamps: LampConfig { entries },
            base: xi,
        }
    }

    fn key(&self, a: &Self::Elem) -> String {
        let lamps: Vec<String> = a
            .lamps
            .entries
            .iter()
            .map(|(s, v)| format!("{}:{}", self.base.key(s), self.lamp.key(v)))
            .collect();
        format!("{}|{}", lamps.join(","), self.base.key(&a.base))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.lamps.is_normal()
            && self.base.contains(&a.base)
            && a.lamps.entries.iter().all(|(s, v)| {
                self.base.contains(s) && self.lamp.contains(v) && !self.lamp.is_identity(v)
            })
    }
}

impl<L: Group> Wreath<L, Integers> {
    /// The cursor generator `t = (e, 1)`.
    pub fn t(&self) -> WreathElement<i64, L::Elem> {
        self.base_elem(1)
    }
}

impl<L: Group> ZProjection for Wreath<L, Integers> {
    fn phi(&self, a: &Self::Elem) -> i64 {
        a.base
    }

    fn lift(&self, x: i64) -> Self::Elem {
        self.base_elem(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Cyclic, FiniteGroupTable, Lattice};

    fn ll() -> Wreath<Cyclic, Integers> {
        Wreath::new(Cyclic::new(2), Integers)
    }

    #[test]
    fn lamplighter_products() {
        let w = ll();
        let s0t = w.mul(&w.lamp_at(0, 1), &w.t());
        assert_eq!(s0t, w.element(w.config([(0, 1)]), 1));
        let sq = w.mul(&s0t, &s0t);
        assert_eq!(sq, w.element(w.config([(0, 1), (1, 1)]), 2));
        assert_eq!(w.key(&sq), "0:1,1:1|2");
        let s = w.lamp_at(0, 1);
        assert_eq!(w.mul(&s, &s), w.identity());
    }

    #[test]
    fn lamplighter_inverse_and_conjugation() {
        let w = ll();
        let s0t = w.element(w.config([(0, 1)]), 1);
        assert_eq!(w.inv(&s0t), w.element(w.config([(-1, 1)]), -1));
        assert_eq!(w.conj(&w.lamp_at(0, 1), &w.t()), w.lamp_at(1, 1));
        assert_eq!(w.inv(&w.identity()), w.identity());
    }

    #[test]
    fn cyclic_base_wraps() {
        let w = Wreath::new(Cyclic::new(2), Cyclic::new(4));
        let t = w.base_elem(1);
        let s = w.lamp_at(0, 1);
        let x = w.product(&[t.clone(), t.clone(), t.clone(), s.clone(), t.clone()]);
        assert_eq!(x, w.element(w.config([(3, 1)]), 0));
        assert!(w.is_identity(&w.pow(&t, 4)));
    }

    #[test]
    fn lattice_base_keys() {
        let lat = Lattice::new(2);
        let w = Wreath::new(Cyclic::new(2), lat);
        let x = w.mul(&w.base_elem(lat.unit(1, -1)), &w.lamp_at(vec![0, 0], 1));
        assert_eq!(w.key(&x), "0;-1:1|0;-1");
    }

    #[test]
    fn nonabelian_lamps() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let w = Wreath::new(s3, Integers);
        let [a, b] = [0, 1].map(|i| w.lamp.marked("gens").unwrap()[i]);
        let x = w.product(&[w.lamp_at(0, a), w.t(), w.lamp_at(-1, b)]);
        assert_eq!(w.mul(&x, &w.inv(&x)), w.identity());
        assert_eq!(w.lamp_value(&x.lamps, &0), w.lamp.mul(&a, &b));
        assert!(w.contains(&x));
    }

    #[test]
    fn contains_rejects_unnormalized() {
        let w = ll();
        let bad = WreathElement {
            lamps: LampConfig {
                entries: vec![(0, 0)],
            },
            base: 0,
        };
        assert!(!w.contains(&bad));
        assert!(w.try_mul(&bad, &w.t()).is_err());
    }
}
