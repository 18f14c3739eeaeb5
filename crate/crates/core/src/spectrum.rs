//! Hermitian eigendecomposition with a deterministic eigenvector gauge.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QlError, Result};
use crate::graph::BiasedGraph;

/// Tolerance used when checking Hermiticity of raw matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues sorted ascending, eigenvector `k` in column `k`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top_eigenvector(&self) -> Vec<Complex64> {
        self.eigenvector(self.len() - 1)
    }
}

/// Spectrum of a graph's adjacency matrix.
pub fn spectrum(g: &BiasedGraph) -> Spectrum {
    decompose(g.adjacency())
}

/// Spectrum of an arbitrary dense matrix, which must be Hermitian.
pub fn hermitian_spectrum(matrix: &DMatrix<Complex64>) -> Result<Spectrum> {
    check_hermitian(matrix)?;
    Ok(decompose(matrix.clone()))
}

pub(crate) fn check_hermitian(matrix: &DMatrix<Complex64>) -> Result<()> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(QlError::Contract("matrix is not square".into()));
    }
    let scale = matrix.iter().map(|x| x.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i..n {
            if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > HERMITIAN_TOL * scale {
                return Err(QlError::Contract(format!(
                    "matrix is not Hermitian at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

fn decompose(matrix: DMatrix<Complex64>) -> Spectrum {
    let n = matrix.nrows();
    let eig = matrix.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: Vec<Complex64> = eig.eigenvectors.column(src).iter().copied().collect();
        fix_phase(&mut col);
        for (r, x) in col.into_iter().enumerate() {
            eigenvectors[(r, dst)] = x;
        }
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Rotate `v` by a global phase so that its largest-modulus coefficient is
/// real and positive. Near-ties (within 1e-9 relative) go to the lowest
/// index.
pub fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.norm() >= max * (1.0 - 1e-9))
        .expect("max attained");
    let rot = v[pivot].conj() / v[pivot].norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
}

/// Gap between the two largest eigenvalues.
pub fn spectral_gap(s: &Spectrum) -> f64 {
    let n = s.len();
    assert!(n >= 2, "spectral gap needs at least two eigenvalues");
    s.eigenvalues[n - 1] - s.eigenvalues[n - 2]
}
