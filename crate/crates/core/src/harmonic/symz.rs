//! The harmonic function and cocycle on the Schreier graph of `Sym(Z) ⋊ Z`
//! acting on the integers.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CocycleSlice, HarmonicError, ScalarField, SchreierGraph};
use crate::group::{Group, SymZ, SymZElement};
use crate::walk::{Prob, StepDistribution};

/// `¼ t + ¼ t⁻¹ + ½ σ` with `σ` the transposition of 0 and 1.
pub fn symz_step() -> StepDistribution<SymZ> {
    let g = SymZ;
    let atoms = vec![
        (g.shift(), Prob::new(1, 4)),
        (g.inv(&g.shift()), Prob::new(1, 4)),
        (g.transposition(), Prob::new(1, 2)),
    ];
    StepDistribution::new(g, atoms).expect("valid step law")
}

/// The orbit of 0 within `[-window, window]`.
pub fn symz_graph(window: i64) -> Result<SchreierGraph<i64>, HarmonicError> {
    if window < 2 {
        return Err(HarmonicError::InvalidParameter(format!("window {window} < 2")));
    }
    let g = SymZ;
    let gens = symz_step().support();
    Ok(SchreierGraph::explore(
        &g,
        0i64,
        &gens,
        |x, s| s.apply(*x),
        usize::MAX,
        |x| x.abs() <= window,
    ))
}

/// `h(x) = x` for `x ≤ 0` and `x − 2/3` for `x ≥ 1`.
pub fn symz_h(x: i64) -> BigRational {
    let v = BigRational::from_integer(BigInt::from(x));
    if x <= 0 {
        v
    } else {
        v - BigRational::new(2.into(), 3.into())
    }
}

pub fn symz_field(graph: &SchreierGraph<i64>) -> ScalarField {
    ScalarField::exact_from(graph, |x| symz_h(*x))
}

/// Radius outside of which `b(g)` vanishes: moved points and the points that
/// cross from one side of `1/2` to the other.
pub fn symz_slice_bound(g: &SymZElement) -> i64 {
    g.moved().map(i64::abs).max().unwrap_or(0).max(g.t.abs() + 1)
}

fn b_at(g: &SymZElement, x: i64) -> BigRational {
    symz_h(g.apply(x)) - symz_h(x) - BigRational::from_integer(g.t.into())
}

/// `b(g)(x) = h(x.g) − h(x) − T_g`.
pub fn symz_cocycle(g: &SymZElement, window: i64) -> Result<CocycleSlice<i64>, HarmonicError> {
    let reach = symz_slice_bound(g);
    if reach >= window {
        return Err(HarmonicError::SupportEscapesWindow {
            element: SymZ.key(g),
            reach,
            window,
        });
    }
    Ok(CocycleSlice::new(SymZ.key(g), (-reach..=reach).map(|x| (x, b_at(g, x)))))
}

/// `b(g₁g₂)(x) − b(g₁)(x) − b(g₂)(x.g₁)` over the window, as a slice (zero
/// when the cocycle identity holds).
pub fn symz_cocycle_identity(g1: &SymZElement, g2: &SymZElement, window: i64) -> Result<CocycleSlice<i64>, HarmonicError> {
    let g12 = SymZ.mul(g1, g2);
    let b12 = symz_cocycle(&g12, window)?;
    let b1 = symz_cocycle(g1, window)?;
    let b2 = symz_cocycle(g2, window)?;
    let defect = (-window..=window).map(|x| (x, b12.get(&x) - b1.get(&x) - b2.get(&g1.apply(x))));
    Ok(CocycleSlice::new("defect".into(), defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{cocycle_mean, harmonicity_residual};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn graph_actions() {
        let g = symz_graph(10).unwrap();
        assert_eq!(g.len(), 21);
        let sigma = g.generator_index(&SymZ.key(&SymZ.transposition())).unwrap();
        let t = g.generator_index(&SymZ.key(&SymZ.shift())).unwrap();
        let v5 = g.index_of(&5).unwrap();
        assert_eq!(g.act(v5, sigma), Some(v5));
        assert_eq!(g.act(g.index_of(&0).unwrap(), t), g.index_of(&1));
        assert!(g.check_action());
        assert!(symz_graph(1).is_err());
    }

    #[test]
    fn h_is_harmonic() {
        let g = symz_graph(50).unwrap();
        let r = harmonicity_residual(&g, &symz_field(&g), &symz_step()).unwrap();
        assert!(r.max_abs.is_zero());
        assert_eq!(r.per_vertex.len(), 99);
    }

    #[test]
    fn shift_slice() {
        let b = symz_cocycle(&SymZ.shift(), 10).unwrap();
        assert_eq!(b.values.len(), 1);
        assert_eq!(b.get(&0), q(-2, 3));
        assert_eq!(b.norm_sq(), q(4, 9));
        let bi = symz_cocycle(&SymZ.inv(&SymZ.shift()), 10).unwrap();
        assert_eq!(bi.values.into_iter().collect::<Vec<_>>(), vec![(1, q(2, 3))]);
        let bs = symz_cocycle(&SymZ.transposition(), 10).unwrap();
        assert_eq!(bs.get(&0), q(1, 3));
        assert_eq!(bs.get(&1), q(-1, 3));
        assert!(symz_cocycle(&SymZ.identity(), 10).unwrap().is_zero());
    }

    #[test]
    fn mean_of_cocycle_vanishes() {
        let m = cocycle_mean(&symz_step(), |g| symz_cocycle(g, 10)).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn window_escape() {
        let far = SymZ.swap(3, 40);
        assert!(matches!(
            symz_cocycle(&far, 20),
            Err(HarmonicError::SupportEscapesWindow { reach: 40, .. })
        ));
    }

    #[test]
    fn cocycle_identity_examples() {
        let (t, s) = (SymZ.shift(), SymZ.transposition());
        let x = SymZ.product(&[t.clone(), s.clone(), t.clone(), t.clone(), s.clone()]);
        let y = SymZ.product(&[s.clone(), SymZ.inv(&t), s.clone()]);
        assert!(symz_cocycle_identity(&x, &y, 20).unwrap().is_zero());
        assert!(symz_cocycle_identity(&x, &SymZ.identity(), 20).unwrap().is_zero());
    }
}
