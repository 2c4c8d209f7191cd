use std::collections::BTreeSet;

use super::{Group, ZProjection};

/// An element of `Sym(Z) ⋊ Z`, acting on the integers on the right by
/// `x.g = sigma(x) + t`.
///
/// `sigma` is stored as its moved points `(x, sigma(x))`, sorted by `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymZElement {
    sigma: Vec<(i64, i64)>,
    pub t: i64,
}

impl SymZElement {
    pub fn sigma(&self, x: i64) -> i64 {
        match self.sigma.binary_search_by_key(&x, |p| p.0) {
            Ok(i) => self.sigma[i].1,
            Err(_) => x,
        }
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.sigma(x) + self.t
    }

    /// Points moved by the permutation part.
    pub fn moved(&self) -> impl Iterator<Item = i64> + '_ {
        self.sigma.iter().map(|p| p.0)
    }

    fn from_map(mut pairs: Vec<(i64, i64)>, t: i64) -> Self {
        pairs.retain(|(x, y)| x != y);
        pairs.sort_unstable();
        pairs.dedup();
        Self { sigma: pairs, t }
    }
}

/// `Sym(Z) ⋊ Z` with its translation character as the Z-projection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SymZ;

impl SymZ {
    /// The shift `x -> x + 1`.
    pub fn shift(&self) -> SymZElement {
        SymZElement { sigma: Vec::new(), t: 1 }
    }

    /// The transposition of `0` and `1`.
    pub fn transposition(&self) -> SymZElement {
        self.swap(0, 1)
    }

    pub fn swap(&self, a: i64, b: i64) -> SymZElement {
        SymZElement::from_map(vec![(a, b), (b, a)], 0)
    }

    /// Builds `(sigma, t)` from the images of finitely many points.
    /// Returns `None` unless the pairs define a bijection of their domain.
    pub fn from_images(&self, pairs: &[(i64, i64)], t: i64) -> Option<SymZElement> {
        let dom: BTreeSet<i64> = pairs.iter().map(|p| p.0).collect();
        let img: BTreeSet<i64> = pairs.iter().map(|p| p.1).collect();
        (dom.len() == pairs.len() && dom == img)
            .then(|| SymZElement::from_map(pairs.to_vec(), t))
    }
}

impl Group for SymZ {
    type Elem = SymZElement;

    fn identity(&self) -> SymZElement {
        SymZElement { sigma: Vec::new(), t: 0 }
    }

    /// `x.(gh) = (x.g).h`, so `gh = (y -> sigma_h(sigma_g(y) + t_g) - t_g, t_g + t_h)`.
    fn mul(&self, g: &SymZElement, h: &SymZElement) -> SymZElement {
        let tg = g.t;
        let mut pts: BTreeSet<i64> = g.moved().collect();
        pts.extend(h.moved().map(|y| y - tg));
        let pairs = pts
            .into_iter()
            .map(|x| (x, h.sigma(g.sigma(x) + tg) - tg))
            .collect();
        SymZElement::from_map(pairs, tg + h.t)
    }

    fn inv(&self, g: &SymZElement) -> SymZElement {
        // x.g⁻¹ = sigma⁻¹(x - t); as (sigma', -t): sigma'(x) = sigma⁻¹(x - t) + t
        let pairs = g.sigma.iter().map(|&(x, y)| (y + g.t, x + g.t)).collect();
        SymZElement::from_map(pairs, -g.t)
    }

    fn key(&self, g: &SymZElement) -> String {
        let body: Vec<String> = g.sigma.iter().map(|(x, y)| format!("{x}>{y}")).collect();
        format!("{}|{}", body.join(","), g.t)
    }

    fn contains(&self, g: &SymZElement) -> bool {
        let dom: BTreeSet<i64> = g.sigma.iter().map(|p| p.0).collect();
        let img: BTreeSet<i64> = g.sigma.iter().map(|p| p.1).collect();
        dom.len() == g.sigma.len()
            && dom == img
            && g.sigma.iter().all(|(x, y)| x != y)
            && g.sigma.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

impl ZProjection for SymZ {
    fn phi(&self, g: &SymZElement) -> i64 {
        g.t
    }

    fn lift(&self, x: i64) -> SymZElement {
        SymZElement { sigma: Vec::new(), t: x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_act_on_the_right() {
        let g = SymZ;
        let words = [
            vec![g.shift(), g.transposition()],
            vec![g.transposition(), g.shift(), g.shift(), g.transposition()],
            vec![g.inv(&g.shift()), g.transposition(), g.shift()],
        ];
        for w in &words {
            let p = g.product(w);
            for x in -6..6 {
                let direct = w.iter().fold(x, |y, s| s.apply(y));
                assert_eq!(p.apply(x), direct);
            }
            assert!(g.contains(&p));
            assert!(g.is_identity(&g.mul(&p, &g.inv(&p))));
        }
    }

    #[test]
    fn shift_conjugates_transposition() {
        let g = SymZ;
        // t σ t⁻¹ moves 0 -> 1 -> ... : x.(tσt⁻¹) = σ(x+1) - 1, swapping -1 and 0
        assert_eq!(g.conj(&g.transposition(), &g.shift()), g.swap(-1, 0));
        assert_eq!(g.phi(&g.conj(&g.transposition(), &g.shift())), 0);
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(SymZ.from_images(&[(0, 1), (1, 1)], 0).is_none());
        assert!(SymZ.from_images(&[(0, 1), (1, 2), (2, 0)], 3).is_some());
    }
}
