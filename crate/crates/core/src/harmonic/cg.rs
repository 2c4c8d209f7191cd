use super::HarmonicError;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    /// Final `‖b − A x‖₂`.
    pub residual: f64,
}

/// Preconditioned conjugate gradient for a symmetric positive definite
/// operator given as `apply(x, out)`, with Jacobi preconditioner `diag`.
/// Stops once `‖b − A x‖₂ ≤ tol · max(‖b‖₂, 1)`.
pub fn conjugate_gradient<F>(
    apply: F,
    diag: &[f64],
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgReport), HarmonicError>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let target = tol * dot(b, b).sqrt().max(1.0);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..=max_iter {
        let rn = dot(&r, &r).sqrt();
        if !rn.is_finite() {
            return Err(HarmonicError::SolverDiverged { iterations: it, residual: rn });
        }
        if rn <= target {
            return Ok((x, CgReport { iterations: it, residual: rn }));
        }
        if it == max_iter {
            return Err(HarmonicError::SolverDiverged { iterations: it, residual: rn });
        }
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    unreachable!("loop returns at max_iter")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_path_laplacian() {
        // -x_{i-1} + 2 x_i - x_{i+1} = 1 on 50 points with zero ends
        let n = 50;
        let apply = |x: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let l = if i > 0 { x[i - 1] } else { 0.0 };
                let r = if i + 1 < n { x[i + 1] } else { 0.0 };
                out[i] = 2.0 * x[i] - l - r;
            }
        };
        let (x, rep) = conjugate_gradient(apply, &vec![2.0; n], &vec![1.0; n], 1e-12, 1000).unwrap();
        let m = (n + 1) as f64;
        for (i, xi) in x.iter().enumerate() {
            let k = (i + 1) as f64;
            assert!((xi - k * (m - k) / 2.0).abs() < 1e-8);
        }
        assert!(rep.iterations <= n + 1);
    }

    #[test]
    fn iteration_cap_reports_divergence() {
        let apply = |x: &[f64], out: &mut [f64]| {
            for i in 0..x.len() {
                out[i] = (i + 1) as f64 * x[i];
            }
        };
        let r = conjugate_gradient(apply, &[1.0; 20], &[1.0; 20], 1e-14, 2);
        assert!(matches!(r, Err(HarmonicError::SolverDiverged { iterations: 2, .. })));
    }
}
