//! Voltage (Green's function) of simple random walk on a box in `Z^d` and the
//! virtual coboundary it induces on `(Z/2) ≀ Z^d`.

use rand::Rng;
use rayon::prelude::*;

use super::cg::{conjugate_gradient, CgReport, DEFAULT_MAX_ITER, DEFAULT_TOL};
use super::HarmonicError;
use crate::group::{Cyclic, Group, Lattice, Wreath, WreathElement};
use crate::walk::{trial_rng, Prob, StepDistribution};

pub type WreathZd = Wreath<Cyclic, Lattice>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoltageMethod {
    /// Conjugate gradient on `(I − P) v = δ₀` with zero boundary.
    Direct { tol: f64 },
    /// Mean number of visits of walks killed on the boundary, at most
    /// `max_len` steps each.
    MonteCarlo { walks: usize, max_len: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageParams {
    pub d: usize,
    /// Odd side length of the box centered at the origin.
    pub side: usize,
    /// Value prescribed at the origin after shifting.
    pub a: f64,
    pub method: VoltageMethod,
    /// Solve even when the walk is recurrent (`d ≤ 2`).
    pub allow_recurrent: bool,
}

impl VoltageParams {
    pub fn direct(d: usize, side: usize, a: f64) -> Self {
        Self {
            d,
            side,
            a,
            method: VoltageMethod::Direct { tol: DEFAULT_TOL },
            allow_recurrent: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageField {
    pub d: usize,
    pub side: usize,
    /// Green's function on the box, zero on the boundary; indexed by
    /// [`VoltageField::index`].
    pub raw: Vec<f64>,
    pub a: f64,
    /// `a − raw(0)`.
    pub shift: f64,
    /// Standard error of `raw(0)` (Monte Carlo only).
    pub origin_stderr: f64,
    pub solve: Option<CgReport>,
}

impl VoltageField {
    pub fn half(&self) -> i64 {
        (self.side as i64 - 1) / 2
    }

    pub fn index(&self, x: &[i64]) -> Option<usize> {
        let h = self.half();
        let mut i = 0usize;
        for &c in x.iter().rev() {
            if c.abs() > h {
                return None;
            }
            i = i * self.side + (c + h) as usize;
        }
        Some(i)
    }

    pub fn point(&self, mut i: usize) -> Vec<i64> {
        let h = self.half();
        (0..self.d)
            .map(|_| {
                let c = (i % self.side) as i64 - h;
                i /= self.side;
                c
            })
            .collect()
    }

    pub fn is_interior(&self, x: &[i64]) -> bool {
        x.iter().all(|c| c.abs() < self.half())
    }

    pub fn raw_origin(&self) -> f64 {
        self.raw[self.index(&vec![0; self.d]).expect("origin in box")]
    }

    /// Shifted voltage; outside the box it takes the boundary value `shift`.
    /// The origin carries `a` exactly.
    pub fn value(&self, x: &[i64]) -> f64 {
        if x.iter().all(|&c| c == 0) {
            return self.a;
        }
        self.index(x).map_or(self.shift, |i| self.raw[i] + self.shift)
    }

    /// Sup norm of `(I − P) v − δ₀` over the interior, for the raw field or
    /// the shifted one.
    pub fn residual_sup(&self, shifted: bool) -> f64 {
        let val = |x: &[i64]| {
            if shifted {
                self.value(x)
            } else {
                self.index(x).map_or(0.0, |i| self.raw[i])
            }
        };
        let deg = (2 * self.d) as f64;
        let mut worst: f64 = 0.0;
        let mut y = vec![0i64; self.d];
        for i in 0..self.raw.len() {
            let x = self.point(i);
            if !self.is_interior(&x) {
                continue;
            }
            let mut s = 0.0;
            for k in 0..self.d {
                for e in [-1, 1] {
                    y.copy_from_slice(&x);
                    y[k] += e;
                    s += val(&y);
                }
            }
            let delta = if x.iter().all(|&c| c == 0) { 1.0 } else { 0.0 };
            worst = worst.max((val(&x) - s / deg - delta).abs());
        }
        worst
    }
}

/// Solves for the voltage on the box `[-h, h]^d` with `side = 2h + 1`.
pub fn voltage_solve(p: &VoltageParams) -> Result<VoltageField, HarmonicError> {
    if p.d == 0 || p.side < 3 || p.side % 2 == 0 {
        return Err(HarmonicError::InvalidParameter(format!(
            "need d ≥ 1 and odd side ≥ 3, got d={} side={}",
            p.d, p.side
        )));
    }
    if p.d <= 2 && !p.allow_recurrent {
        return Err(HarmonicError::RecurrentRegime(p.d));
    }
    let n = p
        .side
        .checked_pow(p.d as u32)
        .filter(|&n| n <= 50_000_000)
        .ok_or_else(|| HarmonicError::InvalidParameter("box too large".into()))?;
    let mut field = VoltageField {
        d: p.d,
        side: p.side,
        raw: vec![0.0; n],
        a: p.a,
        shift: 0.0,
        origin_stderr: 0.0,
        solve: None,
    };
    let strides: Vec<usize> = (0..p.d).map(|k| p.side.pow(k as u32)).collect();
    let interior: Vec<bool> = (0..n).map(|i| field.is_interior(&field.point(i))).collect();
    let origin = field.index(&vec![0; p.d]).expect("origin");
    match p.method {
        VoltageMethod::Direct { tol } => {
            let deg = (2 * p.d) as f64;
            let apply = |x: &[f64], out: &mut [f64]| {
                out.par_iter_mut().enumerate().for_each(|(i, o)| {
                    if !interior[i] {
                        *o = x[i];
                        return;
                    }
                    let mut s = 0.0;
                    for &st in &strides {
                        for j in [i - st, i + st] {
                            if interior[j] {
                                s += x[j];
                            }
                        }
                    }
                    *o = x[i] - s / deg;
                });
            };
            let mut b = vec![0.0; n];
            b[origin] = 1.0;
            let (x, rep) = conjugate_gradient(apply, &vec![1.0; n], &b, tol, DEFAULT_MAX_ITER)?;
            field.raw = x;
            field.solve = Some(rep);
        }
        VoltageMethod::MonteCarlo { walks, max_len, seed } => {
            let h = field.half();
            let d = p.d;
            let (counts, sq) = (0..walks)
                .into_par_iter()
                .with_min_len(walks / 64 + 1)
                .fold(
                    || (vec![0u64; n], 0u64),
                    |(mut counts, sq), t| {
                        let mut rng = trial_rng(seed, t as u64);
                        let mut x = vec![0i64; d];
                        let mut i = origin;
                        let mut at_origin = 0u64;
                        for step in 0..=max_len {
                            counts[i] += 1;
                            if i == origin {
                                at_origin += 1;
                            }
                            if step == max_len {
                                break;
                            }
                            let dir = rng.gen_range(0..2 * d);
                            let (k, e) = (dir / 2, if dir % 2 == 0 { -1 } else { 1 });
                            x[k] += e;
                            if x[k].abs() == h {
                                break;
                            }
                            i = if e > 0 { i + strides[k] } else { i - strides[k] };
                        }
                        (counts, sq + at_origin * at_origin)
                    },
                )
                .reduce(
                    || (vec![0u64; n], 0u64),
                    |(mut a, sa), (b, sb)| {
                        a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                        (a, sa + sb)
                    },
                );
            let w = walks as f64;
            field.raw = counts.iter().map(|&c| c as f64 / w).collect();
            let mean = field.raw[origin];
            let var = (sq as f64 / w - mean * mean).max(0.0) * w / (w - 1.0).max(1.0);
            field.origin_stderr = (var / w).sqrt();
        }
    }
    field.shift = p.a - field.raw[origin];
    Ok(field)
}

/// `b(g) = v − π(g) v` with `π((f, h))ψ(x) = (−1)^{f(x)} ψ(x − h)`, listed
/// over the box points as `(point index, value)` with nonzero values.
pub fn wreath_voltage_cocycle(v: &VoltageField, g: &WreathElement<Vec<i64>, i64>) -> Result<Vec<(usize, f64)>, HarmonicError> {
    let w = WreathZd::new(Cyclic::new(2), Lattice::new(v.d));
    let escapes = g.lamps.support().chain([&g.base]).any(|x| x.len() != v.d || !v.is_interior(x));
    if escapes {
        let reach = g
            .lamps
            .support()
            .chain([&g.base])
            .flat_map(|x| x.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0);
        return Err(HarmonicError::SupportEscapesWindow {
            element: w.key(g),
            reach,
            window: v.half() - 1,
        });
    }
    let mut out = Vec::new();
    let mut y = vec![0i64; v.d];
    for i in 0..v.raw.len() {
        let x = v.point(i);
        for k in 0..v.d {
            y[k] = x[k] - g.base[k];
        }
        let sign = if g.lamps.get(&x).is_some_and(|&s| s % 2 == 1) { -1.0 } else { 1.0 };
        let b = v.value(&x) - sign * v.value(&y);
        if b != 0.0 {
            out.push((i, b));
        }
    }
    Ok(out)
}

/// `η = ½ μ + ½ δ_{δₑ¹}` with `μ` simple random walk on the cursor.
pub fn eta_step(d: usize) -> StepDistribution<WreathZd> {
    let lat = Lattice::new(d);
    let w = WreathZd::new(Cyclic::new(2), lat);
    let mut atoms: Vec<_> = (0..d)
        .flat_map(|k| [-1, 1].map(|e| (w.base_elem(lat.unit(k, e)), Prob::new(1, 4 * d as u128))))
        .collect();
    atoms.push((w.lamp_at(vec![0; d], 1), Prob::new(1, 2)));
    StepDistribution::new(w, atoms).expect("symmetric")
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaReport {
    /// `‖Σ_g η(g) b(g)‖₂` over the interior of the box.
    pub norm: f64,
    pub at_origin: f64,
    /// `b(δₑ¹)` is exactly `2a` at the origin and zero elsewhere.
    pub lamp_slice_exact: bool,
}

pub fn eta_check(v: &VoltageField) -> Result<EtaReport, HarmonicError> {
    let eta = eta_step(v.d);
    let mut acc = vec![0.0; v.raw.len()];
    let mut atoms: Vec<_> = eta.measure().iter().map(|(g, p)| (eta.group.key(g), g.clone(), p)).collect();
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut lamp_slice_exact = false;
    for (_, g, p) in atoms {
        let w = *p.numer() as f64 / *p.denom() as f64;
        let slice = wreath_voltage_cocycle(v, &g)?;
        if !g.lamps.is_empty() {
            let origin = v.index(&vec![0; v.d]).expect("origin");
            lamp_slice_exact = slice == vec![(origin, 2.0 * v.a)] || (v.a == 0.0 && slice.is_empty());
        }
        for (i, b) in slice {
            acc[i] += w * b;
        }
    }
    let mut norm = 0.0;
    for (i, s) in acc.iter().enumerate() {
        if v.is_interior(&v.point(i)) {
            norm += s * s;
        }
    }
    let origin = v.index(&vec![0; v.d]).expect("origin");
    Ok(EtaReport {
        norm: norm.sqrt(),
        at_origin: acc[origin],
        lamp_slice_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrent_dimensions_are_flagged() {
        for d in [1, 2] {
            assert_eq!(voltage_solve(&VoltageParams::direct(d, 11, 0.0)), Err(HarmonicError::RecurrentRegime(d)));
        }
        let mut p = VoltageParams::direct(1, 11, 0.0);
        p.allow_recurrent = true;
        // on [-5, 5] with zero ends the voltage is the tent 5 - |x|, scaled by 1
        let v = voltage_solve(&p).unwrap();
        assert!((v.raw_origin() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn small_box_direct_solve() {
        let v = voltage_solve(&VoltageParams::direct(3, 11, -0.5)).unwrap();
        assert!(v.residual_sup(false) < 1e-9);
        assert!((v.residual_sup(true) - v.residual_sup(false)).abs() < 1e-12);
        assert_eq!(v.value(&[0, 0, 0]), -0.5);
        for i in 0..v.raw.len() {
            let x = v.point(i);
            let m: Vec<i64> = x.iter().map(|c| -c).collect();
            assert!((v.raw[i] - v.raw[v.index(&m).unwrap()]).abs() < 1e-9);
        }
        let rep = eta_check(&v).unwrap();
        assert!(rep.norm < 1e-8 && rep.lamp_slice_exact);
    }

    #[test]
    fn negative_control() {
        let v = voltage_solve(&VoltageParams::direct(3, 9, 0.0)).unwrap();
        let rep = eta_check(&v).unwrap();
        assert!((rep.norm - 0.5).abs() < 1e-8);
        assert!((rep.at_origin - 0.5).abs() < 1e-8);
    }

    #[test]
    fn slices_reject_far_elements() {
        let v = voltage_solve(&VoltageParams::direct(3, 7, 0.0)).unwrap();
        let w = WreathZd::new(Cyclic::new(2), Lattice::new(3));
        assert!(wreath_voltage_cocycle(&v, &w.identity()).unwrap().is_empty());
        assert!(wreath_voltage_cocycle(&v, &w.lamp_at(vec![3, 0, 0], 1)).is_err());
    }
}
