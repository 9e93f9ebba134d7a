//! Small dense SVD helpers shared by the solver, Newton refinement and the
//! mobility analysis.

use faer::Mat;
use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold used for every rank decision.
pub const RANK_RTOL: f64 = 1e-8;

/// SVD of a small dense matrix. nalgebra's bidiagonal SVD loses accuracy
/// on clustered singular values (reconstruction errors near 1e-2 were seen
/// on 6×3 coplanarity systems), so the factorization is delegated to faer.
pub struct Decomposition {
    /// Singular values, descending, length = number of columns.
    pub singular: Vec<f64>,
    /// Left singular vectors for the leading min(rows, cols) values.
    pub u: DMatrix<f64>,
    /// Full set of right singular vectors as columns (cols × cols).
    pub v: DMatrix<f64>,
}

impl Decomposition {
    /// Thin SVD padded with zero rows so that all right singular vectors are
    /// available even for wide matrices.
    pub fn new(a: &DMatrix<f64>) -> Self {
        let (rows, cols) = a.shape();
        let padded_rows = rows.max(cols);
        let m = Mat::<f64>::from_fn(padded_rows, cols, |i, j| if i < rows { a[(i, j)] } else { 0.0 });
        let svd = m.thin_svd().expect("SVD of a finite matrix converges");
        let s = svd.S().column_vector();
        let singular = (0..cols).map(|i| s[i]).collect();
        let (fu, fv) = (svd.U(), svd.V());
        let u = DMatrix::from_fn(rows, cols, |i, j| fu[(i, j)]);
        let v = DMatrix::from_fn(cols, cols, |i, j| fv[(i, j)]);
        Self { singular, u, v }
    }

    pub fn max_singular(&self) -> f64 {
        self.singular.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, rtol: f64) -> usize {
        let smax = self.max_singular();
        if smax == 0.0 {
            return 0;
        }
        self.singular.iter().filter(|&&s| s > rtol * smax).count()
    }

    /// Minimal-norm least-squares solution using the leading `rank` values.
    pub fn solve(&self, b: &DVector<f64>, rank: usize) -> DVector<f64> {
        let cols = self.v.nrows();
        let mut x = DVector::zeros(cols);
        for i in 0..rank {
            let ui = self.u.column(i);
            let coeff = ui.dot(b) / self.singular[i];
            x += self.v.column(i) * coeff;
        }
        x
    }

    /// Orthonormal basis of the numerical nullspace.
    pub fn nullspace(&self, rank: usize) -> Vec<DVector<f64>> {
        (rank..self.v.ncols())
            .map(|i| self.v.column(i).into_owned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_matrix_nullspace() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let d = Decomposition::new(&a);
        assert_eq!(d.rank(RANK_RTOL), 1);
        let ns = d.nullspace(1);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&a * &v).norm() < 1e-14);
        }
    }

    #[test]
    fn min_norm_solution() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![2.0, 2.0]);
        let d = Decomposition::new(&a);
        let x = d.solve(&b, d.rank(RANK_RTOL));
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clustered_singular_values_reconstruct() {
        // Two nearly equal singular values: the case that defeats nalgebra's SVD.
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 1e-9, 0.0, 0.0, 1.0 + 1e-6, 0.0, 0.0, 0.0, 0.5]);
        let q = nalgebra::Rotation3::from_euler_angles(0.3, -1.1, 0.7);
        let a = DMatrix::from_fn(3, 3, |i, j| (q.matrix() * nalgebra::Matrix3::from_fn(|r, c| a[(r, c)]))[(i, j)]);
        let d = Decomposition::new(&a);
        let s = DMatrix::from_diagonal(&DVector::from_vec(d.singular.clone()));
        assert!((&d.u * s * d.v.transpose() - &a).amax() < 1e-14);
        assert!(d.singular.windows(2).all(|w| w[0] >= w[1]));
    }
}
