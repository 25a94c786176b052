//! Dense helpers shared by the spectral and solver modules.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Symmetric eigen-decomposition with eigenvalues in ascending order.
pub(crate) fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest eigenvalue of a symmetric matrix with its unit eigenvector.
pub(crate) fn min_eigen(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let (values, vectors) = sorted_eigen(m);
    (values[0], vectors.column(0).into_owned())
}

pub(crate) fn diag_scale(m: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)] * d[j])
}

/// Generalized symmetric pencil `A x = μ B x` reduced through the Cholesky
/// factor of `A - τB`: the reduced eigenvalues are `ν = 1/(μ - τ)`.
pub(crate) struct ShiftedPencil {
    shift: f64,
    chol: Cholesky<f64, Dyn>,
    pub nu: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl ShiftedPencil {
    pub fn new(a: &DMatrix<f64>, b: &DMatrix<f64>, shift: f64) -> Option<Self> {
        let c = a - b * shift;
        let c = (&c + c.transpose()) * 0.5;
        let chol = Cholesky::new(c)?;
        let l = chol.l();
        let x = l.solve_lower_triangular(b)?;
        let k = l.solve_lower_triangular(&x.transpose())?;
        let k = (&k + k.transpose()) * 0.5;
        let (nu, vectors) = sorted_eigen(&k);
        Some(Self { shift, chol, nu, vectors })
    }

    /// Pencil eigenvalue for reduced index `i`, `None` when `ν` vanishes.
    pub fn mu(&self, i: usize) -> Option<f64> {
        let scale = self.nu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let nu = self.nu[i];
        if nu.abs() <= 1e-13 * scale.max(1e-300) {
            None
        } else {
            Some(self.shift + 1.0 / nu)
        }
    }

    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        let y = self.vectors.column(i).into_owned();
        self.chol.l().tr_solve_lower_triangular(&y).expect("Cholesky factor is nonsingular")
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }
}

/// Flip sign so the entry of largest magnitude is positive.
pub(crate) fn sign_fix(v: &mut DVector<f64>) {
    let mut idx = 0;
    for i in 0..v.len() {
        if v[i].abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.neg_mut();
    }
}

pub fn cosine_similarity(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.dot(b) / (na * nb)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        assert_relative_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(11)).sum();
        assert_relative_eq!(m, 1.0 / 12.0, epsilon = 1e-14);
    }

    #[test]
    fn shifted_pencil_recovers_eigenvalues() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let p = ShiftedPencil::new(&a, &b, 0.5).unwrap();
        let mut mus: Vec<f64> = (0..2).filter_map(|i| p.mu(i)).collect();
        mus.sort_by(f64::total_cmp);
        assert_relative_eq!(mus[0], -3.0, epsilon = 1e-13);
        assert_relative_eq!(mus[1], 2.0, epsilon = 1e-13);
        assert!(ShiftedPencil::new(&a, &b, 2.5).is_none());
    }
}
