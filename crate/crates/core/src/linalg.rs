//! Multi-response least squares.
//!
//! All response columns share one design matrix, so the design is factored
//! once (column-pivoted Householder QR) and every column is solved against the
//! same factorization. Rank-deficient designs fall back to the minimum-norm
//! solution from an SVD.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// `p x m` coefficient matrix; column `j` solves response column `j`.
    pub coefficients: Grid,
    /// Numerical rank of the design.
    pub rank: usize,
}

impl LeastSquares {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.coefficients.rows()
    }
}

pub(crate) fn to_matrix(g: &Grid) -> DMatrix<f64> {
    DMatrix::from_row_slice(g.rows(), g.cols(), g.as_slice())
}

pub(crate) fn from_matrix(m: &DMatrix<f64>) -> Grid {
    Grid::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Householder QR of a tall design with column pivoting, applied to the
/// right-hand sides as it goes.
struct PivotedQr {
    /// Columns of the reduced design; the upper triangle holds `R`.
    cols: Vec<Vec<f64>>,
    perm: Vec<usize>,
    /// Columns of `Qᵀ Y`.
    qty: Vec<Vec<f64>>,
}

impl PivotedQr {
    fn factor(design: &Grid, responses: &Grid) -> Self {
        let (n, p) = design.shape();
        let mut cols: Vec<Vec<f64>> = (0..p).map(|j| design.column(j)).collect();
        let mut qty: Vec<Vec<f64>> = (0..responses.cols()).map(|j| responses.column(j)).collect();
        let mut perm: Vec<usize> = (0..p).collect();

        for k in 0..n.min(p) {
            let tail_norm = |c: &[f64]| c[k..].iter().map(|v| v * v).sum::<f64>();
            let pivot = (k..p)
                .max_by(|&a, &b| tail_norm(&cols[a]).total_cmp(&tail_norm(&cols[b])))
                .expect("non-empty pivot range");
            cols.swap(k, pivot);
            perm.swap(k, pivot);

            let norm = tail_norm(&cols[k]).sqrt();
            if norm == 0.0 {
                break;
            }
            let alpha = if cols[k][k] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = cols[k][k..].to_vec();
            v[0] -= alpha;
            let vtv: f64 = v.iter().map(|x| x * x).sum();
            if vtv == 0.0 {
                continue;
            }
            let reflect = |c: &mut Vec<f64>| {
                let dot: f64 = v.iter().zip(&c[k..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vtv;
                for (ci, vi) in c[k..].iter_mut().zip(&v) {
                    *ci -= f * vi;
                }
            };
            for c in cols[k + 1..].iter_mut() {
                reflect(c);
            }
            for c in qty.iter_mut() {
                reflect(c);
            }
            cols[k][k] = alpha;
            cols[k][k + 1..].iter_mut().for_each(|x| *x = 0.0);
        }
        PivotedQr { cols, perm, qty }
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        self.cols[j][i]
    }

    fn rank(&self, n: usize) -> usize {
        let p = self.cols.len();
        let k = n.min(p);
        let largest = (0..k).map(|i| self.r(i, i).abs()).fold(0.0, f64::max);
        let tol = n.max(p) as f64 * f64::EPSILON * largest;
        (0..k).filter(|&i| self.r(i, i).abs() > tol).count()
    }

    /// Back-substitution for a full-rank factorization.
    fn solve(&self) -> Grid {
        let p = self.cols.len();
        let m = self.qty.len();
        let mut b = Grid::zeros(p, m);
        for (j, rhs) in self.qty.iter().enumerate() {
            let mut z = vec![0.0; p];
            for i in (0..p).rev() {
                let mut acc = rhs[i];
                for (l, zl) in z.iter().enumerate().skip(i + 1) {
                    acc -= self.r(i, l) * zl;
                }
                z[i] = acc / self.r(i, i);
            }
            for (i, zi) in z.into_iter().enumerate() {
                b.set(self.perm[i], j, zi);
            }
        }
        b
    }
}

/// Solves `min ||X B - Y||` column by column for an `n x p` design `X` and
/// `n x m` responses `Y`.
pub fn solve(design: &Grid, responses: &Grid) -> Result<LeastSquares> {
    let (n, p) = design.shape();
    if responses.rows() != n {
        return Err(Error::validation(format!(
            "design has {n} rows but responses have {}",
            responses.rows()
        )));
    }
    if p == 0 || n == 0 {
        return Err(Error::validation("empty design matrix"));
    }
    if !design.is_finite() || !responses.is_finite() {
        return Err(Error::validation("non-finite values in least-squares input"));
    }
    let qr = PivotedQr::factor(design, responses);
    let rank = qr.rank(n);
    let coefficients = if rank == p {
        qr.solve()
    } else {
        log::warn!("rank-deficient design (rank {rank} of {p}); using minimum-norm solution");
        let x = to_matrix(design);
        let svd = x.svd(true, true);
        let sv_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let eps = n.max(p) as f64 * f64::EPSILON * sv_max;
        let b = svd
            .solve(&to_matrix(responses), eps)
            .map_err(|e| Error::Internal(e.to_string()))?;
        from_matrix(&b)
    };
    Ok(LeastSquares { coefficients, rank })
}

/// `X B` for an `n x p` design and `p x m` coefficients.
pub fn apply(design: &Grid, coefficients: &Grid) -> Grid {
    from_matrix(&(to_matrix(design) * to_matrix(coefficients)))
}

/// `Eᵀ E / divisor`.
pub fn scaled_gram(residuals: &Grid, divisor: f64) -> Grid {
    let e = to_matrix(residuals);
    from_matrix(&((e.transpose() * &e) / divisor))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Grid) -> Vec<f64> {
    let mut ev: Vec<f64> = to_matrix(m).symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
