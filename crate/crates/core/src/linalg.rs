//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;

/// Numerical rank: singular values above `tol * sigma_max` count. Empty or
/// all-zero matrices have rank 0.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 || !max.is_finite() {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * max).count()
}

/// Rescales every column to unit Euclidean norm. Zero columns are left as is.
pub fn normalize_columns(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= n;
        }
    }
}

/// Horizontal concatenation; all blocks must share a row count.
pub fn hstack(rows: usize, blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, c), (rows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Orthogonal projector onto the complement of `span(basis)`, with the span
/// taken from the left singular vectors above `tol * sigma_max`.
pub fn complement_projector(basis: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = basis.nrows();
    let mut p = DMatrix::identity(n, n);
    if basis.ncols() == 0 || n == 0 {
        return p;
    }
    let svd = basis.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > tol * max {
            let q = u.column(i);
            p -= q * q.transpose();
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_known_matrices() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank(&m, 1e-9), 2);
        assert_eq!(rank(&DMatrix::<f64>::identity(4, 4), 1e-9), 4);
        assert_eq!(rank(&DMatrix::<f64>::zeros(3, 2), 1e-9), 0);
        assert_eq!(rank(&DMatrix::<f64>::zeros(3, 0), 1e-9), 0);
    }

    #[test]
    fn projector_annihilates_basis() {
        let b = DMatrix::from_row_slice(3, 1, &[1.0, 1.0, 0.0]);
        let p = complement_projector(&b, 1e-12);
        assert!((&p * &b).norm() < 1e-14);
        let e3 = DMatrix::from_row_slice(3, 1, &[0.0, 0.0, 1.0]);
        assert!((&p * &e3 - &e3).norm() < 1e-14);
        assert!((&p * &p - &p).norm() < 1e-14);
    }

    #[test]
    fn hstack_and_normalize() {
        let a = DMatrix::from_row_slice(2, 1, &[3.0, 4.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let mut s = hstack(2, &[&a, &b]);
        assert_eq!(s.shape(), (2, 3));
        normalize_columns(&mut s);
        assert!((s[(0, 0)] - 0.6).abs() < 1e-15);
        assert!((s[(1, 0)] - 0.8).abs() < 1e-15);
    }
}
