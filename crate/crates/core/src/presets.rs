//! Named group and step-law instances used by the experiments.

use crate::constructions::{build_delta, delta_d8, dinfty_delta, embed_s3, fc_preset_step, plateau_step, EmbeddingSpec, Lamplighter};
use crate::group::{Cyclic, DeltaElement, DeltaGroup, FiniteGroupTable, Group, InfiniteDihedral, Integers, SymZ, Wreath};
use crate::walk::{Prob, StepDistribution};

/// One entry of the preset table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub topic: &'static str,
    pub summary: &'static str,
}

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "ll-z2",
        topic: "coupling through a finite normal subgroup",
        summary: "(Z/2)≀Z with ¼t + ¼t⁻¹ + ¼σt + ¼t⁻¹σ, F = {e, σδ₀}, R = 2",
    },
    PresetInfo {
        name: "ll-z2-literal",
        topic: "coupling through a finite normal subgroup",
        summary: "(Z/2)≀Z with ¼(0,±1) + ¼(σδ₀,±1) (not symmetric under this product rule)",
    },
    PresetInfo {
        name: "ll-z2-srw",
        topic: "speed of random walks",
        summary: "(Z/2)≀Z with ⅓t + ⅓t⁻¹ + ⅓σ, the simple random walk for the word metric",
    },
    PresetInfo {
        name: "z-srw",
        topic: "speed of random walks",
        summary: "simple random walk ½(+1) + ½(−1) on Z",
    },
    PresetInfo {
        name: "symz",
        topic: "harmonic functions on Schreier graphs",
        summary: "Sym(Z)⋊Z acting on Z with ¼t + ¼t⁻¹ + ½σ",
    },
    PresetInfo {
        name: "symz-demo",
        topic: "coupling through a finite normal subgroup",
        summary: "Sym(Z)⋊Z with ¼t + ¼t⁻¹ + ¼σt + ¼t⁻¹σ and the non-normal F = ⟨σ⟩",
    },
    PresetInfo {
        name: "da-q2",
        topic: "harmonic functions on Schreier graphs",
        summary: "discrete affine group of the 3-regular tree, F = Z/2, ¼t + ¼t⁻¹ + ½u_F",
    },
    PresetInfo {
        name: "voltage-z3",
        topic: "virtual coboundaries from voltages",
        summary: "(Z/2)≀Z³ with simple random walk on the base, box side 41",
    },
    PresetInfo {
        name: "zwz",
        topic: "virtual coboundaries from voltages",
        summary: "Z≀Z with the lamp-reading cocycle and θ = ½(μ + ν)",
    },
    PresetInfo {
        name: "delta-d8",
        topic: "diagonal products and FC-centers",
        summary: "Γ_s = dihedral of order 8, A = B = Z/2, k = (1,2), m = (4,8)",
    },
    PresetInfo {
        name: "delta-dinfty",
        topic: "diagonal products and FC-centers",
        summary: "Γ_s = D∞, A = B = Z/2, k = (1,2), m = (4,8)",
    },
    PresetInfo {
        name: "embed-s3",
        topic: "lamp generators and commutator copies",
        summary: "F = Sym(3), c₁ = (1 2), c₂ = (1 3), k = (1,3)",
    },
    PresetInfo {
        name: "plateau-z2",
        topic: "lamp generators and commutator copies",
        summary: "(Z/2)≀Z with ¼t + ¼t⁻¹ + ½u_F, δ = 1/4",
    },
];

pub fn preset(name: &str) -> Option<&'static PresetInfo> {
    PRESETS.iter().find(|p| p.name == name)
}

pub type LlZ2 = Wreath<Cyclic, Integers>;

pub fn ll_z2() -> LlZ2 {
    Wreath::new(Cyclic::new(2), Integers)
}

/// `¼t + ¼t⁻¹ + ¼σt + ¼t⁻¹σ`: symmetric, projects to the simple random
/// walk, and `μ^(2)` charges `σδ₀` with mass 1/8.
pub fn ll_z2_step() -> StepDistribution<LlZ2> {
    let w = ll_z2();
    let (t, s) = (w.t(), w.lamp_at(0, 1));
    let ti = w.inv(&t);
    let q = Prob::new(1, 4);
    let atoms = vec![(t.clone(), q), (ti.clone(), q), (w.mul(&s, &t), q), (w.mul(&ti, &s), q)];
    StepDistribution::new(w, atoms).expect("symmetric")
}

/// `¼(0,+1) + ¼(0,−1) + ¼(σδ₀,+1) + ¼(σδ₀,−1)`.
pub fn ll_z2_literal_step() -> StepDistribution<LlZ2> {
    let w = ll_z2();
    let q = Prob::new(1, 4);
    let atoms = vec![
        (w.base_elem(1), q),
        (w.base_elem(-1), q),
        (w.element(w.config([(0, 1)]), 1), q),
        (w.element(w.config([(0, 1)]), -1), q),
    ];
    StepDistribution::new_asymmetric(w, atoms).expect("normalized")
}

/// Simple random walk on the Cayley graph for `{t, t⁻¹, σ}`: `⅓t + ⅓t⁻¹ + ⅓σ`.
pub fn ll_z2_srw_step() -> StepDistribution<LlZ2> {
    let w = ll_z2();
    let q = Prob::new(1, 3);
    let atoms = vec![(w.t(), q), (w.inv(&w.t()), q), (w.lamp_at(0, 1), q)];
    StepDistribution::new(w, atoms).expect("symmetric")
}

pub fn z_srw_step() -> StepDistribution<Integers> {
    StepDistribution::new(Integers, vec![(1, Prob::new(1, 2)), (-1, Prob::new(1, 2))]).expect("symmetric")
}

/// `F = {e, σδ₀}`.
pub fn ll_z2_f() -> Vec<<LlZ2 as Group>::Elem> {
    let w = ll_z2();
    vec![w.identity(), w.lamp_at(0, 1)]
}

/// `¼t + ¼t⁻¹ + ¼σt + ¼t⁻¹σ` on `Sym(Z)⋊Z`, with `σ = (0 1)`.
pub fn symz_demo_step() -> StepDistribution<SymZ> {
    let g = SymZ;
    let (t, s) = (g.shift(), g.transposition());
    let ti = g.inv(&t);
    let q = Prob::new(1, 4);
    let atoms = vec![(t.clone(), q), (ti.clone(), q), (g.mul(&s, &t), q), (g.mul(&ti, &s), q)];
    StepDistribution::new(g, atoms).expect("symmetric")
}

pub fn symz_demo_f() -> Vec<<SymZ as Group>::Elem> {
    vec![SymZ.identity(), SymZ.transposition()]
}

pub fn delta_d8_group() -> DeltaGroup<FiniteGroupTable> {
    build_delta(&delta_d8()).expect("preset validates")
}

/// Step law and starting element for the FC coupling on `delta-d8`.
pub fn delta_d8_fc() -> (StepDistribution<DeltaGroup<FiniteGroupTable>>, DeltaElement<u32>) {
    fc_preset_step(&delta_d8_group(), 10_000).expect("finite class")
}

pub fn delta_dinfty_group() -> DeltaGroup<InfiniteDihedral> {
    dinfty_delta(&[1, 2], &[4, 8]).expect("preset validates")
}

pub fn embed_s3_spec() -> EmbeddingSpec {
    embed_s3()
}

pub fn plateau_z2() -> StepDistribution<Lamplighter> {
    plateau_step(&FiniteGroupTable::cyclic(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CouplingConfig;

    #[test]
    fn ll_z2_two_step_masses() {
        let w = ll_z2();
        let m = ll_z2_step().convolve_exact(2, 100).unwrap();
        assert_eq!(m.mass(&w.lamp_at(0, 1)), Prob::new(1, 8));
        let lit = ll_z2_literal_step();
        assert!(!lit.is_symmetric());
        let m = lit.convolve_exact(2, 100).unwrap();
        assert_eq!(m.mass(&w.lamp_at(0, 1)), Prob::new(1, 8));
        assert_eq!(m.mass(&w.identity()), Prob::new(1, 8));
    }

    #[test]
    fn ll_z2_epsilon() {
        let w = ll_z2();
        let cfg = CouplingConfig::build(&ll_z2_step(), 2, ll_z2_f(), w.lamp_at(0, 1), 0, true, 1000).unwrap();
        assert_eq!(cfg.eps, Prob::new(1, 4));
    }

    #[test]
    fn demo_is_not_normal() {
        let cfg = CouplingConfig::build(&symz_demo_step(), 2, symz_demo_f(), SymZ.transposition(), 0, true, 1000);
        assert!(cfg.is_err());
    }

    #[test]
    fn names_are_unique() {
        for (i, p) in PRESETS.iter().enumerate() {
            assert!(PRESETS[i + 1..].iter().all(|q| q.name != p.name));
        }
        assert!(preset("symz").is_some() && preset("da-q2").is_some() && preset("plateau-z2").is_some());
    }
}
