use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use lampwalk::constructions::FactorMetrics;
use lampwalk::coupling::{CouplingConfig, RunOptions};
use lampwalk::group::{Group, Integers, SymZ, Wreath, ZProjection};
use lampwalk::harmonic::{symz_cocycle_identity, zwz_cocycle_identity};
use lampwalk::presets;
use lampwalk::walk::{local_time, local_time_profile, sample_walk, Measure, Prob};

fn word<G: Group>(g: &G, gens: &[G::Elem], idx: &[usize]) -> G::Elem {
    g.product(idx.iter().map(|&i| &gens[i % gens.len()]))
}

fn ll_gens() -> Vec<<presets::LlZ2 as Group>::Elem> {
    let w = presets::ll_z2();
    vec![w.t(), w.inv(&w.t()), w.lamp_at(0, 1), w.lamp_at(3, 1)]
}

fn zwz_gens() -> Vec<<Wreath<Integers, Integers> as Group>::Elem> {
    let w = Wreath::new(Integers, Integers);
    vec![w.base_elem(1), w.base_elem(-1), w.lamp_at(0, 1), w.lamp_at(0, -2), w.lamp_at(2, 5)]
}

fn symz_gens() -> Vec<<SymZ as Group>::Elem> {
    vec![SymZ.shift(), SymZ.inv(&SymZ.shift()), SymZ.transposition(), SymZ.swap(-2, 4)]
}

fn idx() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..8, 0..10)
}

fn check_group_laws<G: ZProjection>(g: &G, a: &G::Elem, b: &G::Elem, c: &G::Elem) -> Result<(), TestCaseError> {
    prop_assert_eq!(g.mul(&g.mul(a, b), c), g.mul(a, &g.mul(b, c)));
    prop_assert!(g.is_identity(&g.mul(a, &g.inv(a))));
    prop_assert_eq!(g.mul(&g.identity(), a), a.clone());
    prop_assert_eq!(g.phi(&g.mul(a, b)), g.phi(a) + g.phi(b));
    prop_assert_eq!(g.key(a) == g.key(b), a == b);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lamplighter_group_laws(x in idx(), y in idx(), z in idx()) {
        let w = presets::ll_z2();
        let gens = ll_gens();
        check_group_laws(&w, &word(&w, &gens, &x), &word(&w, &gens, &y), &word(&w, &gens, &z))?;
    }

    #[test]
    fn zwz_group_laws(x in idx(), y in idx(), z in idx()) {
        let w = Wreath::new(Integers, Integers);
        let gens = zwz_gens();
        check_group_laws(&w, &word(&w, &gens, &x), &word(&w, &gens, &y), &word(&w, &gens, &z))?;
    }

    #[test]
    fn symz_group_laws(x in idx(), y in idx(), z in idx()) {
        let gens = symz_gens();
        check_group_laws(&SymZ, &word(&SymZ, &gens, &x), &word(&SymZ, &gens, &y), &word(&SymZ, &gens, &z))?;
    }

    #[test]
    fn delta_group_laws(x in idx(), y in idx(), z in idx()) {
        let d = presets::delta_d8_group();
        let gens: Vec<_> = d.generators().into_iter().map(|(_, g)| g).collect();
        let (a, b, c) = (word(&d, &gens, &x), word(&d, &gens, &y), word(&d, &gens, &z));
        check_group_laws(&d, &a, &b, &c)?;
        prop_assert!(d.is_consistent(&d.mul(&a, &b)));
    }

    #[test]
    fn cocycle_identities(x in idx(), y in idx()) {
        let gens = symz_gens();
        let (a, b) = (word(&SymZ, &gens, &x), word(&SymZ, &gens, &y));
        prop_assert!(symz_cocycle_identity(&a, &b, 40).unwrap().is_zero());
        let w = Wreath::new(Integers, Integers);
        let gens = zwz_gens();
        let (a, b) = (word(&w, &gens, &x), word(&w, &gens, &y));
        prop_assert!(zwz_cocycle_identity(&a, &b, 40).unwrap().is_zero());
    }

    #[test]
    fn convolution_is_associative(
        wa in prop::collection::vec(1u128..6, 4),
        wb in prop::collection::vec(1u128..6, 4),
        wc in prop::collection::vec(1u128..6, 4),
    ) {
        let w = presets::ll_z2();
        let gens = ll_gens();
        let m = |ws: &[u128]| {
            let total: u128 = ws.iter().sum();
            Measure::from_weights(gens.iter().cloned().zip(ws.iter().map(|&k| Prob::new(k, total)))).unwrap()
        };
        let (a, b, c) = (m(&wa), m(&wb), m(&wc));
        let left = a.convolve(&b, &w).unwrap().convolve(&c, &w).unwrap();
        let right = a.convolve(&b.convolve(&c, &w).unwrap(), &w).unwrap();
        prop_assert!(left.same_as(&right));
        prop_assert_eq!(left.total(), Prob::one());
    }

    #[test]
    fn total_variation_is_a_metric(
        wa in prop::collection::vec(0u128..5, 4),
        wb in prop::collection::vec(0u128..5, 4),
        wc in prop::collection::vec(0u128..5, 4),
    ) {
        prop_assume!(wa.iter().sum::<u128>() > 0 && wb.iter().sum::<u128>() > 0 && wc.iter().sum::<u128>() > 0);
        let gens = ll_gens();
        let m = |ws: &[u128]| {
            let total: u128 = ws.iter().sum();
            Measure::from_weights(gens.iter().cloned().zip(ws.iter().map(|&k| Prob::new(k, total)))).unwrap()
        };
        let (a, b, c) = (m(&wa), m(&wb), m(&wc));
        prop_assert!(a.tv(&a).is_zero());
        prop_assert_eq!(a.tv(&b), b.tv(&a));
        prop_assert!(a.tv(&c) <= a.tv(&b) + b.tv(&c));
        prop_assert!(a.tv(&b) >= BigRational::zero() && a.tv(&b) <= BigRational::one());
    }

    #[test]
    fn local_times_partition_time(n in 0usize..400, seed in any::<u64>()) {
        let tr = sample_walk(&presets::ll_z2_step(), n, seed);
        let prof = local_time_profile(&tr);
        prop_assert_eq!(prof.values().sum::<usize>(), n + 1);
        for (&x, &c) in &prof {
            prop_assert_eq!(local_time(&tr, x), c);
        }
        prop_assert!(tr.projections.windows(2).all(|p| (p[1] - p[0]).abs() == 1));
    }

    #[test]
    fn walks_are_reproducible(seed in any::<u64>()) {
        let d = presets::ll_z2_step();
        prop_assert_eq!(sample_walk(&d, 50, seed), sample_walk(&d, 50, seed));
    }

    #[test]
    fn coupling_runs_keep_invariants(seed in any::<u64>(), trial in 0u64..1000) {
        let w = presets::ll_z2();
        let cfg = CouplingConfig::build(&presets::ll_z2_step(), 2, presets::ll_z2_f(), w.lamp_at(0, 1), 0, true, 10_000).unwrap();
        let rec = cfg.run(seed, trial, RunOptions::full(300), None).unwrap();
        if let Some(tau) = rec.tau {
            prop_assert!(tau <= rec.steps_run * cfg.r);
            prop_assert!(rec.coupled_by(tau));
        }
    }
}

#[test]
fn coupling_mixture_identity() {
    let w = presets::ll_z2();
    let cfg = CouplingConfig::build(&presets::ll_z2_step(), 2, presets::ll_z2_f(), w.lamp_at(0, 1), 0, true, 10_000).unwrap();
    let u = Measure::uniform(&cfg.f);
    let mix = Measure::mixture(Prob::one() - cfg.eps, &cfg.residual, cfg.eps, &u).unwrap();
    assert!(mix.same_as(&cfg.mu_r));
    assert!((cfg.atom_probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn speed_lower_bound_is_one_lipschitz() {
    let d = presets::delta_d8_group();
    let gens: Vec<_> = d.generators().into_iter().map(|(_, g)| g).collect();
    let metrics = FactorMetrics::new(&d, 7, 1 << 20).unwrap();
    let ball = lampwalk::group::ball(&d, &gens, 5, 1 << 20).unwrap();
    for (g, dist) in &ball {
        let lb = metrics.speed_lower_bound(g).unwrap();
        assert!(lb <= *dist);
        for s in &gens {
            let h = metrics.speed_lower_bound(&d.mul(g, s)).unwrap();
            assert!(lb.abs_diff(h) <= 1);
        }
    }
}
