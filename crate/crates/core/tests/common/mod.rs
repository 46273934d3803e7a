//! Brute-force reference implementations used as test oracles. Written for
//! clarity, not speed, and independent of the library code paths.
#![allow(dead_code)]

use dms_drift::prelude::*;

/// Inverse of a square matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        assert!(d != 0.0, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= d;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let f = row[col];
            if r != col && f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// OLS coefficients from the explicit `(XᵀX)⁻¹ Xᵀ y`, with a leading
/// column of ones when `intercept`.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64], intercept: bool) -> Vec<f64> {
    let z: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            let mut row: Vec<f64> = if intercept { vec![1.0] } else { Vec::new() };
            row.extend(r);
            row
        })
        .collect();
    let p = z[0].len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, &yi) in z.iter().zip(y) {
        for a in 0..p {
            xty[a] += row[a] * yi;
            for b in 0..p {
                xtx[a][b] += row[a] * row[b];
            }
        }
    }
    let inv = invert(&xtx);
    (0..p).map(|a| (0..p).map(|b| inv[a][b] * xty[b]).sum()).collect()
}

/// Env regressors without the intercept column.
pub fn env_rows(envs: &[EnvConditions]) -> Vec<Vec<f64>> {
    envs.iter().map(|e| vec![e.t_meas, e.t_fet, e.h_abs]).collect()
}

pub fn naive_mean(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

pub fn pearson_r(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (naive_mean(x), naive_mean(y));
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Rank = 1 + #smaller + (#equal - 1) / 2, by direct counting.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Two-sided Student-t tail probability `P(|T| > t)` from the closed-form
/// finite series for integer degrees of freedom.
pub fn t_two_sided(t: f64, df: usize) -> f64 {
    let theta = (t.abs() / (df as f64).sqrt()).atan();
    let (s, c) = theta.sin_cos();
    let inside = if df % 2 == 1 {
        let mut sum = 0.0;
        if df > 1 {
            let mut term = c;
            sum = term;
            let mut k = 3;
            while k <= df - 2 {
                term *= (k - 1) as f64 / k as f64 * c * c;
                sum += term;
                k += 2;
            }
        }
        2.0 / std::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 2;
        while k <= df - 2 {
            term *= (k - 1) as f64 / k as f64 * c * c;
            sum += term;
            k += 2;
        }
        s * sum
    };
    1.0 - inside
}

pub fn t_test_p(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = n - 2;
    t_two_sided(r * (df as f64 / (1.0 - r * r)).sqrt(), df)
}

/// Correlation t-test p-value from raw sums, `t² = (n - 2) Sxy² / (Sxx Syy - Sxy²)`
/// with `Sab = n Σab - Σa Σb`. Exact for small integer or half-integer data,
/// where a rounded `r` would misplace perfectly correlated inputs.
pub fn t_test_p_from_sums(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let s = |a: &[f64], b: &[f64]| {
        n * a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() - a.iter().sum::<f64>() * b.iter().sum::<f64>()
    };
    let (sxy, sxx, syy) = (s(x, y), s(x, x), s(y, y));
    let denom = sxx * syy - sxy * sxy;
    if denom <= 0.0 {
        return 0.0;
    }
    let df = x.len() - 2;
    t_two_sided((df as f64 * sxy * sxy / denom).sqrt(), df)
}

/// Percentile by the `1 + q (n - 1)` position rule, via the k-th smallest
/// element found by counting.
pub fn naive_quantile(v: &[f64], level: f64) -> f64 {
    let kth = |k: usize| -> f64 {
        // value with exactly k elements strictly below it (or equal run covering k)
        *v.iter()
            .find(|&&a| {
                let less = v.iter().filter(|&&b| b < a).count();
                let le = v.iter().filter(|&&b| b <= a).count();
                less <= k && k < le
            })
            .unwrap()
    };
    let pos = 1.0 + level / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor();
    let frac = pos - lo;
    let a = kth(lo as usize - 1);
    if frac == 0.0 {
        a
    } else {
        a + frac * (kth(lo as usize) - a)
    }
}

pub fn naive_sample_sd(v: &[f64]) -> f64 {
    let m = naive_mean(v);
    (v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

pub fn naive_rmse(e: &[f64]) -> f64 {
    (e.iter().map(|a| a * a).sum::<f64>() / e.len() as f64).sqrt()
}

pub fn naive_r_squared(y: &[f64], y_hat: &[f64]) -> f64 {
    let m = naive_mean(y);
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|a| (a - m).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Synthetic dataset following a random linear form plus Gaussian noise.
pub fn linear_dataset(n: usize, noise_sd: f64, seed: u64) -> (Dataset, SynthSpec) {
    let mut spec = SynthSpec::new(AxesDef::default(), n, seed);
    spec.linear_term = Some(random_linear_term(&Axes::default(), 2.0, seed));
    spec.noise_sd = noise_sd;
    let (ds, _) = generate_dataset(&spec).expect("valid spec");
    (ds, spec)
}

/// Relative-or-absolute closeness used by coefficient comparisons.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Bitwise equality of two CV results, NaN-aware.
pub fn cv_bits_equal(a: &CVResult, b: &CVResult) -> bool {
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    a.rmse_map.shape() == b.rmse_map.shape()
        && bits(a.rmse_map.as_slice()) == bits(b.rmse_map.as_slice())
        && a.folds.len() == b.folds.len()
        && a.folds.iter().zip(&b.folds).all(|(f, g)| {
            f.fold == g.fold
                && f.test_ids == g.test_ids
                && f.train_size == g.train_size
                && bits(&f.train_r_squared) == bits(&g.train_r_squared)
                && bits(&f.test_r_squared) == bits(&g.test_r_squared)
                && f.errors.len() == g.errors.len()
                && f.errors
                    .iter()
                    .zip(&g.errors)
                    .all(|(x, y)| bits(x.as_slice()) == bits(y.as_slice()))
        })
}
