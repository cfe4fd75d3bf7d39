//! Small dense linear-algebra helpers on top of `nalgebra`. Singular value
//! decompositions go through `faer`: the `nalgebra` SVD returns wrong
//! factors on many exactly low-rank inputs with repeated rows.

use nalgebra::{DMatrix, SymmetricEigen};

pub type Matrix = DMatrix<f64>;

fn to_faer(m: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m.read(i, j))
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s = to_faer(m).singular_values();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Thin SVD `m = U diag(s) V^T` with singular values sorted descending.
pub fn thin_svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return (Matrix::zeros(r, 0), Vec::new(), Matrix::zeros(c, 0));
    }
    let svd = to_faer(m).thin_svd();
    let s: Vec<f64> = (0..k).map(|i| svd.s_diagonal().read(i)).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let (u, v) = (from_faer(svd.u()), from_faer(svd.v()));
    (
        Matrix::from_fn(r, k, |i, t| u[(i, order[t])]),
        order.iter().map(|&t| s[t]).collect(),
        Matrix::from_fn(c, k, |j, t| v[(j, order[t])]),
    )
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &Matrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Largest Euclidean row norm (the `2,inf` norm).
pub fn two_inf_norm(m: &Matrix) -> f64 {
    m.row_iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(sym: &Matrix) -> f64 {
    if sym.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(sym.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Median of a slice; the mean of the two middle values for even lengths.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Entry-wise median of equally shaped matrices.
pub fn entrywise_median(mats: &[Matrix]) -> Matrix {
    assert!(!mats.is_empty(), "median of zero matrices");
    let (r, c) = mats[0].shape();
    let mut buf = vec![0.0; mats.len()];
    Matrix::from_fn(r, c, |i, j| {
        for (slot, m) in buf.iter_mut().zip(mats) {
            *slot = m[(i, j)];
        }
        median(&mut buf)
    })
}

/// Rows `rows` and columns `cols` of `m`, in the given order.
pub fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Index of the maximum, ties broken by the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
