//! From oscillator phases to effective QL states and density matrices.
//!
//! At a given instant the adjacency matrix is rotated by the phase unitary
//! `Φ = diag(e^{iθ_k})` into `A' = Φ⁻¹ A Φ`. The eigenvector of `A'` with
//! the largest eigenvalue is projected onto the normalized block indicators
//! and the resulting coefficients are averaged over state preparations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QlError, Result};
use crate::graph::{BiasedGraph, BlockIndicator};
use crate::spectrum::{self, fix_phase, hermitian_spectrum, spectral_gap, Spectrum};

/// Product basis order `(a1b1, a2b1, a1b2, a2b2)`.
pub const PRODUCT_BASIS: [&str; 4] = ["a1b1", "a2b1", "a1b2", "a2b2"];

/// Gap below which the emergent eigenvalue is flagged as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Diagonal phase unitary `diag(e^{iθ_k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseUnitary {
    pub diag: Vec<Complex64>,
}

impl PhaseUnitary {
    pub fn from_phases(theta: &[f64]) -> Self {
        Self {
            diag: theta
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect(),
        }
    }

    /// `Φ⁻¹ v`.
    pub fn apply_inverse(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.diag.iter().zip(v).map(|(p, x)| p.conj() * x).collect()
    }
}

/// `Φ⁻¹ A Φ`: edge `(j, k)` picks up `e^{-i(θ_j - θ_k)}`.
pub fn transform_adjacency(g: &BiasedGraph, theta: &[f64]) -> Result<DMatrix<Complex64>> {
    if theta.len() != g.n() {
        return Err(QlError::Contract(format!(
            "{} phases for {} vertices",
            theta.len(),
            g.n()
        )));
    }
    let mut a = DMatrix::zeros(g.n(), g.n());
    for e in g.edges() {
        let v = e.entry() * Complex64::from_polar(1.0, -(theta[e.i] - theta[e.j]));
        a[(e.i, e.j)] = v;
        a[(e.j, e.i)] = v.conj();
    }
    Ok(a)
}

/// Largest-eigenvalue eigenvector with its gap to the next eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EmergentState {
    pub vector: Vec<Complex64>,
    pub eigenvalue: f64,
    pub gap: f64,
}

impl EmergentState {
    /// True when the top eigenvalue is not separated from the next one, so
    /// the returned vector is one arbitrary member of a degenerate subspace.
    pub fn degenerate(&self) -> bool {
        self.gap < DEGENERACY_GAP
    }

    fn from_spectrum(s: &Spectrum) -> Self {
        Self {
            vector: s.top_eigenvector(),
            eigenvalue: s.max_eigenvalue(),
            gap: if s.len() >= 2 {
                spectral_gap(s)
            } else {
                f64::INFINITY
            },
        }
    }
}

/// Emergent state of a Hermitian matrix by full diagonalization.
pub fn emergent_eigenvector(matrix: &DMatrix<Complex64>) -> Result<EmergentState> {
    Ok(EmergentState::from_spectrum(&hermitian_spectrum(matrix)?))
}

/// Emergent state of a graph, reusable at any phase configuration.
///
/// Since `A' = Φ⁻¹AΦ` is unitarily similar to `A`, its top eigenvector is
/// `Φ⁻¹ v` for the top eigenvector `v` of `A`, with the same eigenvalue and
/// gap. This replaces one diagonalization per sample by a diagonal product.
#[derive(Debug, Clone)]
pub struct EmergentFrame {
    base: EmergentState,
}

impl EmergentFrame {
    pub fn new(g: &BiasedGraph) -> Self {
        Self {
            base: EmergentState::from_spectrum(&spectrum::spectrum(g)),
        }
    }

    /// `Φ⁻¹ v` without re-fixing the global phase, so a common rotation of
    /// all phases shows up as a phase of the returned vector.
    pub fn transported(&self, theta: &[f64]) -> Result<Vec<Complex64>> {
        if theta.len() != self.base.vector.len() {
            return Err(QlError::Contract(format!(
                "{} phases for {} vertices",
                theta.len(),
                self.base.vector.len()
            )));
        }
        Ok(PhaseUnitary::from_phases(theta).apply_inverse(&self.base.vector))
    }

    pub fn base(&self) -> &EmergentState {
        &self.base
    }

    /// Phase-fixed emergent state of `Φ⁻¹AΦ`.
    pub fn at_phases(&self, theta: &[f64]) -> Result<EmergentState> {
        let mut vector = self.transported(theta)?;
        fix_phase(&mut vector);
        Ok(EmergentState {
            vector,
            ..self.base.clone()
        })
    }
}

/// Coefficients on the block basis, renormalized, with the weight that lay
/// outside the block indicators before renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveState {
    pub coefficients: Vec<Complex64>,
    pub residual: f64,
    pub t: f64,
}

impl EffectiveState {
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }
}

/// Block indicators for a graph's effective basis: the four product blocks
/// in [`PRODUCT_BASIS`] order, or the two blocks of a single QL bit in
/// label order.
pub fn effective_basis(g: &BiasedGraph) -> Result<Vec<BlockIndicator>> {
    let blocks = g.blocks();
    let labels: Vec<String> =
        if PRODUCT_BASIS.iter().all(|l| blocks.contains_key(*l)) && blocks.len() == 4 {
            PRODUCT_BASIS.iter().map(|s| s.to_string()).collect()
        } else if blocks.len() == 2 {
            blocks.keys().cloned().collect()
        } else {
            return Err(QlError::Contract(format!(
                "graph blocks {:?} are neither the four product blocks nor a two-block QL bit",
                blocks.keys().collect::<Vec<_>>()
            )));
        };
    labels.iter().map(|l| g.block_indicator(l)).collect()
}

/// Project `v` onto `basis`, with `c_k = ⟨J_k, v⟩`.
pub fn project_onto(v: &[Complex64], basis: &[BlockIndicator], t: f64) -> Result<EffectiveState> {
    let mut coefficients: Vec<Complex64> = basis.iter().map(|j| j.inner(v)).collect();
    let weight: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    let total: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    if weight.is_nan() || weight <= 1e-300 {
        return Err(QlError::Numeric(
            "emergent vector is orthogonal to every block indicator".into(),
        ));
    }
    let scale = 1.0 / weight.sqrt();
    coefficients.iter_mut().for_each(|c| *c *= scale);
    Ok(EffectiveState {
        coefficients,
        residual: (1.0 - weight / total).max(0.0),
        t,
    })
}

pub fn project_effective(v: &[Complex64], g: &BiasedGraph) -> Result<EffectiveState> {
    if v.len() != g.n() {
        return Err(QlError::Contract(format!(
            "vector of length {} for {} vertices",
            v.len(),
            g.n()
        )));
    }
    project_onto(v, &effective_basis(g)?, 0.0)
}

/// Ensemble density matrix `ρ_mn = (1/M) Σ c_m c̄_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.rho[(k, k)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .rho
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if (self.rho[(i, j)] - self.rho[(j, i)].conj()).norm() > 1e-12 {
                    return Err(QlError::Contract(format!(
                        "ρ is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        if (self.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(QlError::Contract(format!("trace ρ = {}", self.trace())));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -1e-10 {
                return Err(QlError::Contract(format!("ρ has eigenvalue {min}")));
            }
        }
        Ok(())
    }

    /// 4×4 (or d×d) array of `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| [self.rho[(i, j)].re, self.rho[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(pairs: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = pairs.len();
        if pairs.iter().any(|row| row.len() != n) {
            return Err(QlError::Contract("density matrix rows are ragged".into()));
        }
        Ok(Self {
            rho: DMatrix::from_fn(n, n, |i, j| Complex64::new(pairs[i][j][0], pairs[i][j][1])),
        })
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Self::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// Average of the projectors `c c†` over `states`, summed in order.
pub fn accumulate_density(states: &[EffectiveState]) -> Result<DensityMatrix> {
    let first = states
        .first()
        .ok_or_else(|| QlError::Parameter("no states to average".into()))?;
    let dim = first.dim();
    if states.iter().any(|s| s.dim() != dim) {
        return Err(QlError::Contract(
            "effective states differ in dimension".into(),
        ));
    }
    if states.iter().any(|s| s.t != first.t) {
        return Err(QlError::Contract(
            "effective states are not at a common time".into(),
        ));
    }
    density_from_coefficients(states.iter().map(|s| s.coefficients.as_slice()), dim)
}

/// Density matrix from raw coefficient vectors, in iteration order.
pub fn density_from_coefficients<'a, I>(coefficients: I, dim: usize) -> Result<DensityMatrix>
where
    I: IntoIterator<Item = &'a [Complex64]>,
{
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    let mut m = 0usize;
    for c in coefficients {
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += c[i] * c[j].conj();
            }
        }
        m += 1;
    }
    if m == 0 {
        return Err(QlError::Parameter("no states to average".into()));
    }
    rho /= Complex64::new(m as f64, 0.0);
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    Ok(DensityMatrix { rho })
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // ρ Hermitian: Tr(ρ²) = Σ |ρ_mn|²
    rho.rho.iter().map(|x| x.norm_sqr()).sum()
}

/// Time series of diagonal entries and off-diagonal magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagonalSeries {
    /// `(m, n)` index pairs with `m < n`, in row-major order.
    pub pairs: Vec<(usize, usize)>,
    /// `abs[t][k] = |ρ_{pairs[k]}|(t)`.
    pub abs: Vec<Vec<f64>>,
    /// `diag[t][k] = ρ_kk(t)`.
    pub diag: Vec<Vec<f64>>,
}

pub fn offdiag_series(rhos: &[DensityMatrix]) -> Result<OffDiagonalSeries> {
    let first = rhos
        .first()
        .ok_or_else(|| QlError::Parameter("empty density-matrix series".into()))?;
    let d = first.dim();
    let pairs: Vec<_> = (0..d)
        .flat_map(|m| ((m + 1)..d).map(move |n| (m, n)))
        .collect();
    let abs = rhos
        .iter()
        .map(|r| pairs.iter().map(|&(m, n)| r.rho[(m, n)].norm()).collect())
        .collect();
    let diag = rhos.iter().map(|r| r.diagonal()).collect();
    Ok(OffDiagonalSeries { pairs, abs, diag })
}
