//! Acceptance suite: one line per criterion, then a single assertion that
//! every criterion passed.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::Rng;

use lampwalk::constructions::{copy_check, embed_s3, fc_class, plateau_experiment, EmbeddingSpec};
use lampwalk::coupling::{tail_exact, tail_profile, CouplingConfig, FcCoupling, RunOptions};
use lampwalk::group::{
    ball, word_length_lamplighter_line, FiniteGroupTable, Group, Integers, Perm, SymZ, SymZElement, WreathElement,
};
use lampwalk::harmonic::*;
use lampwalk::presets;
use lampwalk::stats::{chi_square, geometric_cdf, ks_discrete};
use lampwalk::walk::{fmt_big, lamplighter_speed, speed_estimate, trial_rng, Prob, StepDistribution};

struct Outcome {
    pass: bool,
    detail: String,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c1_symz_harmonic() -> Outcome {
    let start = Instant::now();
    let g = symz_graph(1001).unwrap();
    let r = harmonicity_residual(&g, &symz_field(&g), &symz_step()).unwrap();
    let elapsed = start.elapsed();
    let covered = r.per_vertex.iter().filter(|(v, _)| g.point(*v).abs() <= 1000).count();
    let pass = r.max_abs.is_zero() && covered == 2001 && elapsed.as_secs_f64() < 1.0;
    Outcome {
        pass,
        detail: format!("max residual {} on {covered} points, {:.3}s", r.max_abs, elapsed.as_secs_f64()),
    }
}

fn random_symz_word<R: Rng>(rng: &mut R, max_len: usize) -> SymZElement {
    let gens = [SymZ.shift(), SymZ.inv(&SymZ.shift()), SymZ.transposition()];
    let len = rng.gen_range(0..=max_len);
    SymZ.product((0..len).map(|_| &gens[rng.gen_range(0..3)]).collect::<Vec<_>>())
}

fn c2_symz_cocycle() -> Outcome {
    let bt = symz_cocycle(&SymZ.shift(), 20).unwrap();
    let shift_ok = bt.values.len() == 1 && bt.get(&0) == q(-2, 3) && bt.norm_sq() == q(4, 9);
    let mean_ok = cocycle_mean(&symz_step(), |g| symz_cocycle(g, 20)).unwrap().is_zero();
    let mut rng = trial_rng(2, 0);
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y) = (random_symz_word(&mut rng, 6), random_symz_word(&mut rng, 6));
        if !symz_cocycle_identity(&x, &y, 30).unwrap().is_zero() {
            bad += 1;
        }
    }
    Outcome {
        pass: shift_ok && mean_ok && bad == 0,
        detail: format!(
            "b(t) = {} at 0, |b(t)|² = {}, mean zero: {mean_ok}, identity failures {bad}/1000",
            fmt_big(&bt.get(&0)),
            fmt_big(&bt.norm_sq())
        ),
    }
}

fn c3_da_energy() -> Outcome {
    let one = BigRational::one();
    let e = da_energy(2, &one, 13);
    let limit_ok = e.limit == q(17, 32);
    let gap = &e.limit - &e.partial[12];
    let bound = q(17, 16) / BigRational::from_integer(BigInt::from(4096));
    let monotone = e.partial.windows(2).all(|w| w[0] < w[1]) && e.partial.iter().all(|p| p <= &e.limit);
    let e3 = da_energy(3, &one, 40);
    let q3_ok = da_energy_closed_form(3, &one) == e3.limit;
    let ladder = (1..=3).all(|k| {
        let a = BigRational::from_integer(k.into());
        da_energy(2, &a, 1).limit == &a * &a * q(17, 32)
    });
    let f = FiniteGroupTable::from_permutations(&[Perm::from_cycles(2, &[&[0, 1]])], 4).unwrap();
    let g = da_build(f, 10, 2).unwrap();
    let rule = da_rule_energy(&g, &one, 10);
    Outcome {
        pass: limit_ok && gap.is_positive() && gap <= bound && monotone && q3_ok && ladder,
        detail: format!(
            "limit {} , N=12 gap {:.3e} (bound {:.3e}), q=3 closed form {} ; gradient-rule energy to depth 10 {:.6} (limit {})",
            fmt_big(&e.limit),
            big_to_f(&gap),
            big_to_f(&bound),
            fmt_big(&e3.limit),
            big_to_f(&rule),
            fmt_big(&da_rule_energy_limit(2, &one))
        ),
    }
}

fn big_to_f(x: &BigRational) -> f64 {
    lampwalk::walk::big_to_f64(x)
}

fn c4_da_solve() -> Outcome {
    let f = FiniteGroupTable::from_permutations(&[Perm::from_cycles(2, &[&[0, 1]])], 4).unwrap();
    let g = da_build(f, 8, 8).unwrap();
    let s = da_harmonic(&g, &BigRational::one(), RootTreatment::Pinned, 1e-13).unwrap();
    let off = s.max_relative(false);
    let with_root = s.max_relative(true);
    let defects: Vec<String> = s.template_defects.iter().map(|(k, r)| format!("{k}: {}", fmt_big(r))).collect();
    let free = da_harmonic(&g, &BigRational::one(), RootTreatment::Free, 1e-13).unwrap();
    Outcome {
        pass: off <= 1e-9 && !s.edges.is_empty(),
        detail: format!(
            "{} core edges, max relative deviation off root {off:.2e} (with root {with_root:.2e}); template defects [{}]; root ray gradient {} ; unpinned root deviation {:.2e}",
            s.edges.len(),
            defects.join(", "),
            fmt_big(&s.forced_root_gradient),
            free.max_relative(false)
        ),
    }
}

fn c5_coupling_invariants() -> Outcome {
    let w = presets::ll_z2();
    let d = presets::ll_z2_step();
    let cfg = CouplingConfig::build(&d, 2, presets::ll_z2_f(), w.lamp_at(0, 1), 0, true, 10_000).unwrap();
    let eps_ok = cfg.eps == Prob::new(1, 4) && cfg.r == 2;
    let mut incs = Vec::new();
    let mut steps = 0usize;
    let mut trial = 0u64;
    let mut violation = None;
    while steps < 100_000 {
        match cfg.run(5, trial, RunOptions::full(1000), Some(&mut incs)) {
            Ok(rec) => steps += rec.steps_run,
            Err(e) => {
                violation = Some(e.to_string());
                break;
            }
        }
        trial += 1;
    }
    let probs = cfg.atom_probabilities();
    let mut xs = vec![0u64; probs.len()];
    let mut xt = vec![0u64; probs.len()];
    for (a, b) in &incs {
        xs[*a] += 1;
        xt[*b] += 1;
    }
    let (p1, p2) = (chi_square(&xs, &probs).p_value, chi_square(&xt, &probs).p_value);
    Outcome {
        pass: eps_ok && violation.is_none() && p1 > 0.01 && p2 > 0.01,
        detail: format!(
            "eps {} R {}, {steps} steps in {trial} runs, violations {:?}, chi-square p = {p1:.3} / {p2:.3}",
            lampwalk::walk::fmt_prob(cfg.eps),
            cfg.r,
            violation
        ),
    }
}

/// Largest `√n P̂(τ > n)` observed for `ll-z2`, `γ = σδ₀`, `x = 0`, seed 11,
/// `10⁵` trials, n over `4²..4⁷`. Later runs must not exceed it by more than
/// three standard errors at the maximizing `n`.
const TAIL_BASELINE: f64 = 2.214;

fn c6_coupling_tail() -> Outcome {
    let w = presets::ll_z2();
    let cfg = CouplingConfig::build(&presets::ll_z2_step(), 2, presets::ll_z2_f(), w.lamp_at(0, 1), 0, true, 10_000).unwrap();
    let ns: Vec<usize> = (2..=7).map(|k| 4usize.pow(k)).collect();
    let pts = tail_profile(&cfg, &ns, 100_000, 11).unwrap();
    let exact = tail_exact(&cfg, &ns);
    let top = pts.iter().max_by(|a, b| a.sqrt_n_times_p.total_cmp(&b.sqrt_n_times_p)).unwrap();
    let sup = top.sqrt_n_times_p;
    let slack = 3.0 * (top.n as f64).sqrt() * top.stderr;
    let monotone = pts.windows(2).all(|w| w[1].p_hat <= w[0].p_hat + 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt());
    let rows: Vec<String> = pts
        .iter()
        .zip(&exact)
        .map(|(p, e)| format!("n={} p̂={:.4} exact={:.4}", p.n, p.p_hat, e))
        .collect();
    Outcome {
        pass: sup.is_finite() && sup <= TAIL_BASELINE + slack && monotone,
        detail: format!("sup √n·p̂ = {sup:.3} at n={} (baseline {TAIL_BASELINE} + {slack:.3}); {}", top.n, rows.join(", ")),
    }
}

fn c7_fc_coupling() -> Outcome {
    let (mu, gamma) = presets::delta_d8_fc();
    let c = FcCoupling::build(&mu, gamma, 1, 10_000, 1 << 16).unwrap();
    let eps = *c.eps.numer() as f64 / *c.eps.denom() as f64;
    let x = mu.group.identity();
    let runs = 10_000u64;
    let taus: Vec<u64> = (0..runs)
        .map(|t| c.run(&x, 100_000, 17, t, false).unwrap().tau.expect("coupled") as u64)
        .collect();
    let ks = ks_discrete(&taus, |k| geometric_cdf(eps, k));
    let mut worst: f64 = 0.0;
    for n in 0..=50u64 {
        let p_hat = taus.iter().filter(|&&t| t > n).count() as f64 / runs as f64;
        let p = (1.0 - eps).powi(n as i32);
        let sd = (p * (1.0 - p) / runs as f64).sqrt();
        if sd > 0.0 {
            worst = worst.max((p_hat - p).abs() / sd);
        }
    }
    Outcome {
        pass: ks.p_value > 0.01 && worst <= 3.0,
        detail: format!(
            "class size {}, eps {}, KS p = {:.3}, max |p̂ − (1−ε)ⁿ|/σ over n ≤ 50 = {worst:.2}",
            c.class.len(),
            lampwalk::walk::fmt_prob(c.eps),
            ks.p_value
        ),
    }
}

fn c8_voltage() -> Outcome {
    let v = voltage_solve(&VoltageParams::direct(3, 41, -0.5)).unwrap();
    let res = v.residual_sup(false);
    let eta = eta_check(&v).unwrap();
    let v0 = voltage_solve(&VoltageParams::direct(3, 41, 0.0)).unwrap();
    let control = eta_check(&v0).unwrap();
    let mut mc = VoltageParams::direct(3, 41, -0.5);
    mc.method = VoltageMethod::MonteCarlo {
        walks: 1_000_000,
        max_len: 10_000,
        seed: 7,
    };
    let m = voltage_solve(&mc).unwrap();
    let gap = (m.raw_origin() - v.raw_origin()).abs();
    let agree = gap <= 3.0 * m.origin_stderr;
    let recurrent = matches!(voltage_solve(&VoltageParams::direct(1, 41, -0.5)), Err(HarmonicError::RecurrentRegime(1)));
    Outcome {
        pass: res <= 1e-8 && eta.lamp_slice_exact && eta.norm <= 1e-6 && control.norm >= 0.4 && agree && recurrent,
        detail: format!(
            "residual {res:.2e}, lamp slice exact {}, η norm {:.2e}, control {:.3}, direct {:.5} vs MC {:.5} ± {:.5}, d=1 recurrent {recurrent}",
            eta.lamp_slice_exact,
            eta.norm,
            control.norm,
            v.raw_origin(),
            m.raw_origin(),
            m.origin_stderr
        ),
    }
}

fn plateau_csv() -> (String, BigRational, bool) {
    let r = plateau_experiment(&FiniteGroupTable::cyclic(2), Prob::new(1, 4), 20, 5_000_000).unwrap();
    let mut s = String::from("n,m,tv,tv_float\n");
    for row in &r.rows {
        s.push_str(&format!("{},{},{},{:.12}\n", row.n, row.m, fmt_big(&row.tv), big_to_f(&row.tv)));
    }
    let bounded = r.rows.iter().all(|x| x.tv <= BigRational::one());
    (s, r.c_hat, bounded)
}

fn c9_plateau() -> Outcome {
    let (a, c_hat, bounded) = plateau_csv();
    let (b, _, _) = plateau_csv();
    Outcome {
        pass: a == b && c_hat.is_positive() && bounded,
        detail: format!("identical runs {}, c_hat = {:.6}, all ≤ 1 {bounded}", a == b, big_to_f(&c_hat)),
    }
}

fn c10_fc_center() -> Outcome {
    let d = presets::delta_d8_group();
    let gens: Vec<_> = d.generators().into_iter().map(|(_, g)| g).collect();
    let b4 = ball(&d, &gens, 4, 1 << 20).unwrap();
    let mut mismatches = 0;
    let mut finite = 0;
    for (x, _) in &b4 {
        let terminated = fc_class(&d, x, 4096).is_ok();
        finite += terminated as usize;
        if terminated != d.in_kernel_sum(x) {
            mismatches += 1;
        }
    }
    let gamma = d.single_site(0, 0, lampwalk::constructions::kernel_generator(d.lamp(0)));
    let closure = fc_class(&d, &gamma, 10_000).unwrap();
    let b6 = ball(&d, &gens, 6, 1 << 20).unwrap();
    let brute: HashSet<_> = b6.iter().map(|(g, _)| d.conj(&gamma, g)).collect();
    let reclosed = closure
        .elements
        .iter()
        .all(|c| gens.iter().all(|g| closure.elements.contains(&d.conj(c, g))));
    Outcome {
        pass: mismatches == 0 && closure.size() == brute.len() && closure.in_kernel && reclosed,
        detail: format!(
            "{} elements in the radius-4 ball, {finite} with finite class, {mismatches} mismatches; single-site class {} vs brute force {}",
            b4.len(),
            closure.size(),
            brute.len()
        ),
    }
}

fn c11_word_metric() -> Outcome {
    let w = presets::ll_z2();
    let gens = vec![w.t(), w.inv(&w.t()), w.lamp_at(0, 1)];
    let b = ball(&w, &gens, 8, 1 << 22).unwrap();
    let bad = b.iter().filter(|(e, d)| word_length_lamplighter_line(e) != *d).count();
    Outcome {
        pass: bad == 0,
        detail: format!("{} elements compared, {bad} mismatches", b.len()),
    }
}

fn c12_speed() -> Outcome {
    let srw = StepDistribution::new(Integers, vec![(1, Prob::new(1, 2)), (-1, Prob::new(1, 2))]).unwrap();
    let n = 10_000;
    let est = speed_estimate(&srw, n, 100_000, 3, |x| x.abs() as f64);
    let target = (2.0 * n as f64 / std::f64::consts::PI).sqrt();
    let rel = (est.mean / target - 1.0).abs();
    // The window applies to the simple random walk for the generators whose
    // word metric is measured; the coupling law is printed for comparison.
    let ratio = |d: &StepDistribution<presets::LlZ2>, k: u32| {
        let n = 1usize << k;
        lamplighter_speed(d, n, 2000, 4).mean / (n as f64).sqrt()
    };
    let srw_ll = presets::ll_z2_srw_step();
    let ratios: Vec<f64> = (10..=14).map(|k| ratio(&srw_ll, k)).collect();
    let coupling_law = ratio(&presets::ll_z2_step(), 14);
    let ll_ok = ratios.iter().all(|r| (0.3..=3.0).contains(r));
    Outcome {
        pass: rel <= 0.05 && ll_ok,
        detail: format!(
            "E|Z_n| = {:.2} vs {target:.2} ({:.2}%), lamplighter speed/√n for n = 2^10..2^14: {:?} (ll-z2 law at 2^14: {coupling_law:.3})",
            est.mean,
            100.0 * rel,
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
    }
}

fn random_zwz_word<R: Rng>(rng: &mut R, max_len: usize) -> WreathElement<i64, i64> {
    let w = ZwZ::new(Integers, Integers);
    let gens = [w.base_elem(1), w.base_elem(-1), w.lamp_at(0, 1), w.lamp_at(0, -1), w.lamp_at(0, 2)];
    let len = rng.gen_range(0..=max_len);
    w.product((0..len).map(|_| &gens[rng.gen_range(0..gens.len())]).collect::<Vec<_>>())
}

fn c13_zwz() -> Outcome {
    let mut rng = trial_rng(13, 0);
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y) = (random_zwz_word(&mut rng, 8), random_zwz_word(&mut rng, 8));
        if !zwz_cocycle_identity(&x, &y, 40).unwrap().is_zero() {
            bad += 1;
        }
    }
    let srw = StepDistribution::new(Integers, vec![(1, Prob::new(1, 2)), (-1, Prob::new(1, 2))]).unwrap();
    let lamps = StepDistribution::new(
        Integers,
        vec![(1, Prob::new(1, 3)), (-1, Prob::new(1, 3)), (3, Prob::new(1, 6)), (-3, Prob::new(1, 6))],
    )
    .unwrap();
    let mean = cocycle_mean(&theta_step(&lamps, &srw), |g| zwz_cocycle(g, 5)).unwrap();
    Outcome {
        pass: bad == 0 && mean.is_zero(),
        detail: format!("identity failures {bad}/1000, θ-mean zero {}", mean.is_zero()),
    }
}

fn c14_copy_check() -> Outcome {
    let spec = embed_s3();
    let c = spec.f.commutator(spec.involutions[0], spec.involutions[1]);
    let good = copy_check(&spec, c, &[(1, 2)]).unwrap();
    let s3 = embed_s3().f;
    let c3 = s3.find_perm(&Perm::from_cycles(3, &[&[1, 2]])).unwrap();
    let mut cs = embed_s3().involutions;
    cs.push(c3);
    let bad_spec = EmbeddingSpec::new(s3, cs, vec![1, 2, 3]).unwrap();
    let c21 = bad_spec.f.commutator(bad_spec.involutions[1], bad_spec.involutions[0]);
    let bad = copy_check(&bad_spec, c21, &[(2, 1)]).unwrap();
    let good_ok = good.holds && good.support.len() == 1 && good.support[0].0 == 0 && good.support[0].1 == spec.f.label(c);
    Outcome {
        pass: good_ok && !bad.doubling && bad.support.len() > 1,
        detail: format!("S3 commutator {} ; k=(1,2,3) control {}", good.key, bad.key),
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("exact harmonicity on Sym(Z)⋊Z", c1_symz_harmonic),
        ("Sym(Z)⋊Z cocycle", c2_symz_cocycle),
        ("DA energy series", c3_da_energy),
        ("DA Dirichlet solve", c4_da_solve),
        ("coupling invariants", c5_coupling_invariants),
        ("coupling tail", c6_coupling_tail),
        ("FC coupling", c7_fc_coupling),
        ("voltage cocycle", c8_voltage),
        ("TV plateau", c9_plateau),
        ("FC-center", c10_fc_center),
        ("word metric", c11_word_metric),
        ("speed", c12_speed),
        ("Z≀Z cocycle", c13_zwz),
        ("copy check", c14_copy_check),
    ];
    let total = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2} {name} ({:.1}s): {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!("total {:.1}s", total.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
