use super::SolveStats;

/// Preconditioned conjugate gradients on flat vectors.
///
/// `apply` computes `y = A x` and `precond` computes `z = M⁻¹ r`; both must
/// be symmetric positive definite. `x` holds the initial guess on entry.
/// Convergence is declared when `‖r‖ ≤ tol·‖b‖` (Euclidean norms).
pub fn pcg(
    b: &[f64],
    x: &mut [f64],
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut precond: impl FnMut(&[f64], &mut [f64]),
    tol: f64,
    max_iter: usize,
) -> SolveStats {
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return SolveStats { iterations: 0, final_residual: 0.0, converged: true };
    }
    let target = tol * bnorm;
    let mut r = vec![0.0; n];
    apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut rnorm = norm(&r);
    if rnorm <= target {
        return SolveStats { iterations: 0, final_residual: rnorm / bnorm, converged: true };
    }
    let mut z = vec![0.0; n];
    precond(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return SolveStats { iterations: it, final_residual: rnorm / bnorm, converged: false };
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rnorm = norm(&r);
        if rnorm <= target {
            return SolveStats { iterations: it, final_residual: rnorm / bnorm, converged: true };
        }
        precond(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    SolveStats { iterations: max_iter, final_residual: rnorm / bnorm, converged: false }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd() {
        // [[4,1],[1,3]] x = [1,2]
        let a = [[4.0, 1.0], [1.0, 3.0]];
        let mut x = vec![0.0; 2];
        let st = pcg(
            &[1.0, 2.0],
            &mut x,
            |v, y| {
                y[0] = a[0][0] * v[0] + a[0][1] * v[1];
                y[1] = a[1][0] * v[0] + a[1][1] * v[1];
            },
            |r, z| z.copy_from_slice(r),
            1e-14,
            10,
        );
        assert!(st.converged);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-14);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let mut x = vec![3.0; 4];
        let st = pcg(&[0.0; 4], &mut x, |v, y| y.copy_from_slice(v), |r, z| z.copy_from_slice(r), 1e-10, 5);
        assert!(st.converged);
        assert_eq!(x, vec![0.0; 4]);
    }
}
