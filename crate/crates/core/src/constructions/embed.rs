use super::ConstructionError;
use crate::group::{FiniteGroupTable, Group, Integers, Perm, Wreath, WreathElement};

/// Lamp generator data: involutions `c_1..c_s` of `F` placed at sites
/// `k_1 < ... < k_s`.
#[derive(Debug, Clone)]
pub struct EmbeddingSpec {
    pub f: FiniteGroupTable,
    pub involutions: Vec<u32>,
    pub ks: Vec<i64>,
}

impl EmbeddingSpec {
    pub fn new(f: FiniteGroupTable, involutions: Vec<u32>, ks: Vec<i64>) -> Result<Self, ConstructionError> {
        if involutions.len() != ks.len() || ks.is_empty() {
            return Err(ConstructionError::Invalid("need one site per involution".into()));
        }
        for &c in &involutions {
            if f.order(&c, 3) != Some(2) {
                return Err(ConstructionError::Invalid(format!("{} is not an involution", f.label(c))));
            }
        }
        if ks[0] < 1 || ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConstructionError::Invalid("sites must be positive and strictly increasing".into()));
        }
        Ok(Self { f, involutions, ks })
    }

    /// `k_{s+1} > 2 k_s` for every `s`.
    pub fn doubling(&self) -> bool {
        self.ks.windows(2).all(|w| w[1] > 2 * w[0])
    }

    pub fn wreath(&self) -> Wreath<FiniteGroupTable, Integers> {
        Wreath::new(self.f.clone(), Integers)
    }

    /// `(f, 0)` with `f(k_s) = c_s`.
    pub fn generator(&self) -> WreathElement<i64, u32> {
        let w = self.wreath();
        w.element(w.config(self.ks.iter().copied().zip(self.involutions.iter().copied())), 0)
    }

    /// `f^(m) = t^{-m} f t^m`, the copy of `f` translated by `-m`.
    pub fn copy(&self, m: i64) -> WreathElement<i64, u32> {
        let w = self.wreath();
        w.conj(&self.generator(), &w.base_elem(-m))
    }
}

/// `c_1 = (1 2)`, `c_2 = (1 3)` in `Sym(3)` at sites `k = (1, 3)`.
pub fn embed_s3() -> EmbeddingSpec {
    let gens = [Perm::from_cycles(3, &[&[0, 1]]), Perm::from_cycles(3, &[&[0, 2]])];
    let f = FiniteGroupTable::from_permutations(&gens, 64).expect("Sym(3)");
    let cs = gens.iter().map(|p| f.find_perm(p).expect("generator present")).collect();
    EmbeddingSpec::new(f, cs, vec![1, 3]).expect("valid preset")
}

/// `Z/3`, `Sym(3)` and `Sym(6)`: each group embeds in the next through its
/// right regular representation.
pub fn hall_chain() -> Vec<FiniteGroupTable> {
    vec![
        FiniteGroupTable::cyclic(3),
        FiniteGroupTable::symmetric(3).expect("Sym(3)"),
        FiniteGroupTable::symmetric(6).expect("Sym(6)"),
    ]
}

/// Permutations `y -> y x` of the elements of `g`.
pub fn regular_representation(g: &FiniteGroupTable) -> Vec<Perm> {
    g.elements()
        .map(|x| Perm(g.elements().map(|y| g.mul(&y, &x)).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyReport {
    pub holds: bool,
    pub doubling: bool,
    /// Sites where the product is nontrivial, with the lamp labels.
    pub support: Vec<(i64, String)>,
    pub base: i64,
    pub key: String,
}

/// Evaluates `Π_j [f^(k_{s_j}), f^(k_{r_j})]` in `F ≀ Z` and compares it with
/// `(c δ_0, 0)`. Pairs are 1-based indices into the involution list and
/// `[x, y] = x y x⁻¹ y⁻¹`.
pub fn copy_check(spec: &EmbeddingSpec, c: u32, expr: &[(usize, usize)]) -> Result<CopyReport, ConstructionError> {
    let w = spec.wreath();
    let n = spec.ks.len();
    let mut acc = w.identity();
    for &(s, r) in expr {
        if s == 0 || r == 0 || s > n || r > n {
            return Err(ConstructionError::Invalid(format!("pair ({s}, {r}) outside 1..={n}")));
        }
        let x = spec.copy(spec.ks[s - 1]);
        let y = spec.copy(spec.ks[r - 1]);
        let comm = w.product(&[x.clone(), y.clone(), w.inv(&x), w.inv(&y)]);
        acc = w.mul(&acc, &comm);
    }
    let target = if c == spec.f.id() { w.identity() } else { w.lamp_at(0, c) };
    Ok(CopyReport {
        holds: acc == target,
        doubling: spec.doubling(),
        support: acc.lamps.iter().map(|(x, v)| (*x, spec.f.label(*v).to_string())).collect(),
        base: acc.base,
        key: w.key(&acc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_single_commutator() {
        let spec = embed_s3();
        let c = spec.f.commutator(spec.involutions[0], spec.involutions[1]);
        assert_ne!(c, spec.f.id());
        let r = copy_check(&spec, c, &[(1, 2)]).unwrap();
        assert!(r.holds && r.doubling);
        assert_eq!(r.support.len(), 1);
        assert_eq!(r.support[0].0, 0);
        let e = copy_check(&spec, spec.f.id(), &[]).unwrap();
        assert!(e.holds && e.support.is_empty());
    }

    #[test]
    fn doubling_violation_spreads_support() {
        let s3 = embed_s3().f;
        let c3 = s3.find_perm(&Perm::from_cycles(3, &[&[1, 2]])).unwrap();
        let mut cs = embed_s3().involutions;
        cs.push(c3);
        let spec = EmbeddingSpec::new(s3, cs, vec![1, 2, 3]).unwrap();
        assert!(!spec.doubling());
        let c = spec.f.commutator(spec.involutions[1], spec.involutions[0]);
        let r = copy_check(&spec, c, &[(2, 1)]).unwrap();
        assert!(!r.holds);
        assert_eq!(r.support.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn rejects_non_involutions() {
        let z3 = FiniteGroupTable::cyclic(3);
        assert!(EmbeddingSpec::new(z3, vec![1], vec![1]).is_err());
    }

    #[test]
    fn hall_chain_embeds() {
        let chain = hall_chain();
        assert_eq!(chain.iter().map(|g| g.order_of_group()).collect::<Vec<_>>(), vec![3, 6, 720]);
        for pair in chain.windows(2) {
            let (small, big) = (&pair[0], &pair[1]);
            let image: Vec<u32> = regular_representation(small)
                .iter()
                .map(|p| big.find_perm(p).expect("image in the next group"))
                .collect();
            assert_eq!(big.subgroup(&image).len(), small.order_of_group());
        }
    }
}
