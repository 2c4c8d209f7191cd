//! The lamp-reading cocycle on `Z ≀ Z`: `b(f, y)(x) = f(x)`, for the
//! representation `π(f, y)ψ(x) = ψ(x − y)` on `ℓ²(Z)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CocycleSlice, HarmonicError};
use crate::group::{Group, Integers, Wreath, WreathElement};
use crate::walk::{Prob, StepDistribution};

pub type ZwZ = Wreath<Integers, Integers>;

pub fn zwz_cocycle(g: &WreathElement<i64, i64>, window: i64) -> Result<CocycleSlice<i64>, HarmonicError> {
    let w = ZwZ::new(Integers, Integers);
    let reach = g.lamps.support().map(|x| x.abs()).max().unwrap_or(0);
    if reach > window {
        return Err(HarmonicError::SupportEscapesWindow {
            element: w.key(g),
            reach,
            window,
        });
    }
    Ok(CocycleSlice::new(
        w.key(g),
        g.lamps.iter().map(|(x, v)| (*x, BigRational::from_integer(BigInt::from(*v)))),
    ))
}

/// `b(g₁g₂)(x) − b(g₁)(x) − b(g₂)(x − y₁)` on the union of the supports.
pub fn zwz_cocycle_identity(
    g1: &WreathElement<i64, i64>,
    g2: &WreathElement<i64, i64>,
    window: i64,
) -> Result<CocycleSlice<i64>, HarmonicError> {
    let w = ZwZ::new(Integers, Integers);
    let b12 = zwz_cocycle(&w.mul(g1, g2), window)?;
    let b1 = zwz_cocycle(g1, window)?;
    let b2 = zwz_cocycle(g2, window)?;
    let mut pts: Vec<i64> = b12.values.keys().chain(b1.values.keys()).copied().collect();
    pts.extend(b2.values.keys().map(|y| y + g1.base));
    pts.sort_unstable();
    pts.dedup();
    let defect = pts
        .into_iter()
        .map(|x| (x, b12.get(&x) - b1.get(&x) - b2.get(&(x - g1.base))));
    Ok(CocycleSlice::new("defect".into(), defect))
}

/// `θ = ½(μ + ν)`: `μ` on the lamp at 0, `ν` on the cursor.
pub fn theta_step(mu: &StepDistribution<Integers>, nu: &StepDistribution<Integers>) -> StepDistribution<ZwZ> {
    let w = ZwZ::new(Integers, Integers);
    let half = Prob::new(1, 2);
    let atoms = mu
        .measure()
        .iter()
        .map(|(h, p)| (w.lamp_at(0, *h), p * half))
        .chain(nu.measure().iter().map(|(y, p)| (w.base_elem(*y), p * half)))
        .collect();
    StepDistribution::new(w, atoms).expect("symmetric laws give a symmetric mixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::cocycle_mean;

    #[test]
    fn slices_and_identity() {
        let w = ZwZ::new(Integers, Integers);
        assert!(zwz_cocycle(&w.identity(), 5).unwrap().is_zero());
        let g1 = w.product(&[w.lamp_at(0, 3), w.base_elem(2), w.lamp_at(0, -1)]);
        let g2 = w.product(&[w.base_elem(-1), w.lamp_at(0, 5)]);
        assert_eq!(zwz_cocycle(&g1, 5).unwrap().get(&2), BigRational::from_integer((-1).into()));
        assert!(zwz_cocycle_identity(&g1, &g2, 10).unwrap().is_zero());
        assert!(zwz_cocycle(&w.lamp_at(7, 1), 5).is_err());
    }

    #[test]
    fn theta_mean_vanishes() {
        let srw = StepDistribution::new(Integers, vec![(1, Prob::new(1, 2)), (-1, Prob::new(1, 2))]).unwrap();
        let wide = StepDistribution::new(
            Integers,
            vec![(2, Prob::new(1, 6)), (-2, Prob::new(1, 6)), (1, Prob::new(1, 3)), (-1, Prob::new(1, 3))],
        )
        .unwrap();
        let theta = theta_step(&wide, &srw);
        assert!(cocycle_mean(&theta, |g| zwz_cocycle(g, 4)).unwrap().is_zero());
    }
}
