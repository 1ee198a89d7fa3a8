//! Ordinary least squares against the time index: the straight-line trend
//! model and its extrapolation.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegressionError {
    #[error("linear fit requires at least 2 points, got {len}")]
    TooFewPoints { len: usize },
}

/// A fitted line `value ≈ intercept + slope · t`, where `t` is the 0-based
/// position within the fitted window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearModel {
    /// Value of the line at position 0 (index points).
    pub intercept: f64,
    /// Increment per month (index points / month).
    pub slope: f64,
    pub residual_sse: f64,
    pub n: usize,
}

/// Least-squares line through `(t, values[t])` for `t = 0..n-1`, via the
/// closed-form normal equations in centered coordinates.
pub fn ols_fit(values: &[f64]) -> Result<LinearModel, RegressionError> {
    let n = values.len();
    if n < 2 {
        return Err(RegressionError::TooFewPoints { len: n });
    }
    let tbar = (n as f64 - 1.0) / 2.0;
    let ybar = values.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (t, &y) in values.iter().enumerate() {
        let dt = t as f64 - tbar;
        sxy += dt * (y - ybar);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * tbar;
    let residual_sse = values
        .iter()
        .enumerate()
        .map(|(t, &y)| {
            let e = y - (intercept + slope * t as f64);
            e * e
        })
        .sum();
    Ok(LinearModel {
        intercept,
        slope,
        residual_sse,
        n,
    })
}

/// Evaluate the fitted line at positions `from_index + h − 1` for
/// `h = 1..=horizon`. Passing `from_index = model.n` continues the line
/// immediately after the fitted window.
pub fn ols_extrapolate(model: &LinearModel, from_index: usize, horizon: usize) -> Vec<f64> {
    (1..=horizon)
        .map(|h| model.intercept + model.slope * (from_index + h - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_line_recovered() {
        let values: Vec<f64> = (0..20).map(|t| 3.0 + 2.0 * t as f64).collect();
        let m = ols_fit(&values).unwrap();
        assert_abs_diff_eq!(m.intercept, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.slope, 2.0, epsilon = 1e-9);
        assert!(m.residual_sse < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(
            ols_fit(&[1.0]).unwrap_err(),
            RegressionError::TooFewPoints { len: 1 }
        );
    }

    #[test]
    fn residuals_orthogonal_to_design() {
        let values = [4.0, 9.0, 3.0, 12.0, 15.0, 11.0, 20.0, 17.0];
        let m = ols_fit(&values).unwrap();
        let res: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(t, &y)| y - (m.intercept + m.slope * t as f64))
            .collect();
        let scale: f64 = values.iter().map(|v| v.abs()).sum();
        let e_sum: f64 = res.iter().sum();
        let te_sum: f64 = res.iter().enumerate().map(|(t, e)| t as f64 * e).sum();
        assert!(e_sum.abs() <= 1e-6 * scale);
        assert!(te_sum.abs() <= 1e-6 * scale * values.len() as f64);
    }

    #[test]
    fn affine_equivariance() {
        let values = [5.0, 7.5, 6.0, 9.0, 12.0, 10.5];
        let scaled: Vec<f64> = values.iter().map(|v| 3.0 * v - 4.0).collect();
        let m0 = ols_fit(&values).unwrap();
        let m1 = ols_fit(&scaled).unwrap();
        assert_abs_diff_eq!(m1.slope, 3.0 * m0.slope, epsilon = 1e-9);
        assert_abs_diff_eq!(m1.intercept, 3.0 * m0.intercept - 4.0, epsilon = 1e-9);
    }

    #[test]
    fn extrapolation_is_the_line() {
        let m = LinearModel {
            intercept: 0.0,
            slope: 1.0,
            residual_sse: 0.0,
            n: 5,
        };
        assert_eq!(ols_extrapolate(&m, 5, 3), vec![5.0, 6.0, 7.0]);
        let flat = LinearModel {
            intercept: 4.5,
            slope: 0.0,
            residual_sse: 0.0,
            n: 2,
        };
        assert_eq!(ols_extrapolate(&flat, 2, 4), vec![4.5; 4]);
    }

    #[test]
    fn extrapolation_steps_equal_slope() {
        let values = [4.0, 9.0, 3.0, 12.0, 15.0, 11.0, 20.0, 17.0];
        let m = ols_fit(&values).unwrap();
        let fc = ols_extrapolate(&m, m.n, 12);
        for w in fc.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], m.slope, epsilon = 1e-9 * m.slope.abs());
        }
    }

    #[test]
    fn beats_nearby_grid_candidates() {
        let values = [14.0, 3.0, 7.0, 19.0, 2.0, 11.0, 23.0, 5.0, 17.0, 9.0];
        let m = ols_fit(&values).unwrap();
        let rss = |ic: f64, sl: f64| -> f64 {
            values
                .iter()
                .enumerate()
                .map(|(t, &y)| (y - (ic + sl * t as f64)).powi(2))
                .sum()
        };
        for di in -10..=10 {
            for ds in -10..=10 {
                let cand = rss(
                    m.intercept + di as f64 * 0.05,
                    m.slope + ds as f64 * 0.01,
                );
                assert!(m.residual_sse <= cand + 1e-9);
            }
        }
    }
}
