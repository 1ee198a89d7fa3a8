//! Internal numerical workhorses: a deterministic Nelder-Mead simplex search
//! and a dense linear solver. Both are dependency-free and fixed-seed-free so
//! every fit in this crate is bit-reproducible.

/// Derivative-free simplex minimization of `f` starting at `x0`.
///
/// `clamp` is an optional box `(lo, hi)` applied coordinate-wise to every
/// point *before* evaluation, which keeps all iterates admissible without
/// penalty terms. Converges when the simplex's best/worst spread drops below
/// `tol · max(1, |f_best|)` or after `max_iter` sweeps. Fully deterministic:
/// ties in the ordering keep the earlier point.
pub(crate) fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
    tol: f64,
    clamp: Option<(f64, f64)>,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let fix = |p: &mut Vec<f64>| {
        if let Some((lo, hi)) = clamp {
            for v in p.iter_mut() {
                *v = v.clamp(lo, hi);
            }
        }
    };

    let dim = x0.len();
    if dim == 0 {
        return (Vec::new(), f(&[]));
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut first = x0.to_vec();
    fix(&mut first);
    simplex.push(first);
    for i in 0..dim {
        let mut p = x0.to_vec();
        // step away from the upper bound rather than into it
        if clamp.is_some_and(|(_, hi)| p[i] + step > hi) {
            p[i] -= step;
        } else {
            p[i] += step;
        }
        fix(&mut p);
        simplex.push(p);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| fvals[a].total_cmp(&fvals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fvals = order.iter().map(|&i| fvals[i]).collect();
        if fvals[dim] - fvals[0] <= tol * f64::max(1.0, fvals[0].abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|p| p[d]).sum::<f64>() / dim as f64)
            .collect();
        let mut xr: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + alpha * (centroid[d] - simplex[dim][d]))
            .collect();
        fix(&mut xr);
        let fr = f(&xr);
        if fvals[0] <= fr && fr < fvals[dim - 1] {
            simplex[dim] = xr;
            fvals[dim] = fr;
        } else if fr < fvals[0] {
            let mut xe: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + gamma * (xr[d] - centroid[d]))
                .collect();
            fix(&mut xe);
            let fe = f(&xe);
            if fe < fr {
                simplex[dim] = xe;
                fvals[dim] = fe;
            } else {
                simplex[dim] = xr;
                fvals[dim] = fr;
            }
        } else {
            let mut xc: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + rho * (simplex[dim][d] - centroid[d]))
                .collect();
            fix(&mut xc);
            let fc = f(&xc);
            if fc < fvals[dim] {
                simplex[dim] = xc;
                fvals[dim] = fc;
            } else {
                for i in 1..=dim {
                    let mut p: Vec<f64> = (0..dim)
                        .map(|d| simplex[0][d] + sigma * (simplex[i][d] - simplex[0][d]))
                        .collect();
                    fix(&mut p);
                    fvals[i] = f(&p);
                    simplex[i] = p;
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if fvals[i] < fvals[best] {
            best = i;
        }
    }
    (simplex[best].clone(), fvals[best])
}

/// Solve `a · x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below 1e-12 (singular system).
pub(crate) fn solve_linear(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let fac = m[r][col] / m[col][col];
            for c in col..=n {
                let base = m[col][c];
                m[r][c] -= fac * base;
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = m[r][n];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_bowl() {
        let (x, v) = nelder_mead(
            |p| (p[0] - 0.3).powi(2) + 2.0 * (p[1] - 0.7).powi(2),
            &[0.0, 0.0],
            0.1,
            500,
            1e-10,
            Some((0.0, 1.0)),
        );
        assert_abs_diff_eq!(x[0], 0.3, epsilon = 1e-4);
        assert_abs_diff_eq!(x[1], 0.7, epsilon = 1e-4);
        assert!(v < 1e-8);
    }

    #[test]
    fn respects_box() {
        // unconstrained minimum at 1.5, box caps it at 1.0
        let (x, _) = nelder_mead(
            |p| (p[0] - 1.5).powi(2),
            &[0.5],
            0.1,
            500,
            1e-10,
            Some((0.0, 1.0)),
        );
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn zero_dimensional_input() {
        let (x, v) = nelder_mead(|_| 42.0, &[], 0.1, 500, 1e-10, None);
        assert!(x.is_empty());
        assert_abs_diff_eq!(v, 42.0, epsilon = 0.0);
    }

    #[test]
    fn deterministic_across_runs() {
        let run = || {
            nelder_mead(
                |p| (p[0] - 0.37).powi(2) + (p[1] + 0.2).powi(4) + p[0] * p[1] * 0.01,
                &[0.9, 0.9],
                0.1,
                500,
                1e-10,
                Some((0.0, 1.0)),
            )
        };
        let (a, fa) = run();
        let (b, fb) = run();
        assert_eq!(a, b);
        assert_eq!(fa.to_bits(), fb.to_bits());
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_linear(&a, &[5.0, 10.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_system_is_none() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_linear(&a, &[1.0, 2.0]).is_none());
    }
}
