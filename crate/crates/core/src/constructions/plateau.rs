use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ConstructionError;
use crate::group::{FiniteGroupTable, Group, Integers, Wreath};
use crate::walk::{prob_to_big, Prob, StepDistribution};

pub type Lamplighter = Wreath<FiniteGroupTable, Integers>;

/// `¼ t + ¼ t⁻¹ + ½ u_F`, the uniform part sitting at the cursor and
/// including the identity of `F`.
pub fn plateau_step(f: &FiniteGroupTable) -> StepDistribution<Lamplighter> {
    let w = Wreath::new(f.clone(), Integers);
    let q = Prob::new(1, 2 * f.order_of_group() as u128);
    let mut atoms = vec![(w.t(), Prob::new(1, 4)), (w.inv(&w.t()), Prob::new(1, 4))];
    for x in f.elements() {
        let e = if x == f.id() { w.identity() } else { w.lamp_at(0, x) };
        atoms.push((e, q));
    }
    StepDistribution::new(w, atoms).expect("symmetric step law")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauRow {
    pub n: usize,
    /// `n + ⌈δ n⌉`
    pub m: usize,
    pub tv: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauReport {
    pub rows: Vec<PlateauRow>,
    /// `1 − max tv` over `n ∈ [n_max/2, n_max]`.
    pub c_hat: BigRational,
}

fn ceil_mul(delta: &BigRational, n: usize) -> usize {
    let x = delta * BigRational::from_integer(BigInt::from(n));
    let c = x.numer().div_ceil(x.denom());
    usize::try_from(c).expect("small")
}

/// `½‖μ^(n) − μ^(n + ⌈δn⌉)‖₁` for `n = 0..=n_max`, exactly.
pub fn plateau_experiment(
    f: &FiniteGroupTable,
    delta: Prob,
    n_max: usize,
    cap: usize,
) -> Result<PlateauReport, ConstructionError> {
    let delta = prob_to_big(delta);
    let d = plateau_step(f);
    let top = n_max + ceil_mul(&delta, n_max);
    let powers = d.powers(top, cap)?;
    let rows: Vec<PlateauRow> = (0..=n_max)
        .map(|n| {
            let m = n + ceil_mul(&delta, n);
            PlateauRow {
                n,
                m,
                tv: powers[n].tv(&powers[m]),
            }
        })
        .collect();
    let worst = rows
        .iter()
        .filter(|r| r.n >= n_max / 2)
        .map(|r| r.tv.clone())
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok(PlateauReport {
        rows,
        c_hat: BigRational::one() - worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_series() {
        let z2 = FiniteGroupTable::cyclic(2);
        let r = plateau_experiment(&z2, Prob::new(1, 4), 8, 1 << 20).unwrap();
        assert_eq!(r.rows[0].tv, BigRational::zero());
        assert_eq!(r.rows[1].m, 2);
        assert!(r.rows.iter().all(|x| x.tv <= BigRational::one()));
        assert!(r.c_hat > BigRational::zero());
    }

    #[test]
    fn overflow_reports_step() {
        let z2 = FiniteGroupTable::cyclic(2);
        let e = plateau_experiment(&z2, Prob::new(1, 4), 10, 50).unwrap_err();
        assert!(matches!(
            e,
            ConstructionError::Measure(crate::walk::MeasureError::SupportOverflow { cap: 50, .. })
        ));
    }
}
