//! Exact diagonalisation and the thermal states built on it.
//!
//! All Boltzmann weights are taken relative to the lowest eigenvalue, so
//! nothing here overflows however small the temperature is. A temperature
//! of exactly zero never reaches an exponential: callers go through
//! [`ground_state_projector`] instead (or [`thermal_state`], which routes).

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{domain, invalid, Result};
use crate::linalg::{c, hermiticity_defect, trace, CMatrix, CVector, C64};
use crate::spin_model::HermitianOperator;

/// Default energy window treated as one degenerate ground manifold.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

const DENSITY_HERMITICITY_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const DENSITY_PSD_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Number of levels within `tol` of the ground energy.
    pub fn ground_degeneracy(&self, tol: f64) -> usize {
        let e0 = self.ground_energy();
        self.eigenvalues.iter().take_while(|&&e| e - e0 <= tol).count()
    }

    /// `V diag(f(E_k)) V^dagger`.
    pub fn spectral_sum(&self, weights: &[f64]) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(w);
        }
        scaled * v.adjoint()
    }

    /// `V diag(E) V^dagger`.
    pub fn reconstruct(&self) -> CMatrix {
        self.spectral_sum(&self.eigenvalues)
    }
}

/// Diagonalise a Hermitian operator.
///
/// Uses nalgebra's Householder tridiagonalisation followed by implicit
/// symmetric QR, then sorts eigenpairs by ascending eigenvalue (stable with
/// respect to the solver's output order, so repeated calls on the same
/// input agree exactly).
pub fn eigendecompose(h: &HermitianOperator) -> SpectralDecomposition {
    eigendecompose_matrix(h.matrix())
}

pub(crate) fn eigendecompose_matrix(m: &CMatrix) -> SpectralDecomposition {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(m.nrows(), order.len(), |i, k| eig.eigenvectors[(i, order[k])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Temperature in energy units (Boltzmann constant set to one).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(invalid(format!(
                "temperature must be finite and non-negative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    fn require_positive(self, what: &str) -> Result<f64> {
        if self.is_zero() {
            return Err(domain(format!(
                "{what} is undefined at T = 0; use the ground-state projector"
            )));
        }
        Ok(self.0)
    }
}

/// `Z = sum_k exp(-E_k / T)` stored as `exp(-E_min / T) * shifted_sum`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionFunction {
    pub min_energy: f64,
    pub temperature: f64,
    /// `sum_k exp(-(E_k - E_min) / T)`, always in `[1, dim]`.
    pub shifted_sum: f64,
}

impl PartitionFunction {
    pub fn ln(&self) -> f64 {
        -self.min_energy / self.temperature + self.shifted_sum.ln()
    }

    /// The unshifted value, or `None` when it over- or underflows `f64`.
    pub fn value(&self) -> Option<f64> {
        let z = self.ln().exp();
        (z.is_finite() && z > 0.0).then_some(z)
    }
}

fn shifted_weights(spec: &SpectralDecomposition, t: f64) -> Vec<f64> {
    let e0 = spec.ground_energy();
    spec.eigenvalues.iter().map(|&e| (-(e - e0) / t).exp()).collect()
}

pub fn partition_function(spec: &SpectralDecomposition, t: Temperature) -> Result<PartitionFunction> {
    let t = t.require_positive("the partition function")?;
    let shifted_sum = shifted_weights(spec, t).iter().sum();
    Ok(PartitionFunction {
        min_energy: spec.ground_energy(),
        temperature: t,
        shifted_sum,
    })
}

/// Normalised Boltzmann populations of each eigenvector.
pub fn boltzmann_weights(spec: &SpectralDecomposition, t: Temperature) -> Result<Vec<f64>> {
    let t = t.require_positive("Boltzmann weights")?;
    let mut w = shifted_weights(spec, t);
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    Ok(w)
}

/// `rho(T) = exp(-H/T) / Z`, assembled in the eigenbasis.
pub fn gibbs_state(spec: &SpectralDecomposition, t: Temperature) -> Result<DensityMatrix> {
    let w = boltzmann_weights(spec, t)?;
    Ok(DensityMatrix::from_matrix_unchecked(spec.spectral_sum(&w)))
}

/// Equal mixture over every eigenvector within `degeneracy_tol` of the
/// ground energy: the `T -> 0` limit of the Gibbs state.
pub fn ground_state_projector(spec: &SpectralDecomposition, degeneracy_tol: f64) -> DensityMatrix {
    let g = spec.ground_degeneracy(degeneracy_tol.max(0.0));
    let w: Vec<f64> = (0..spec.dim())
        .map(|k| if k < g { 1.0 / g as f64 } else { 0.0 })
        .collect();
    DensityMatrix::from_matrix_unchecked(spec.spectral_sum(&w))
}

/// Gibbs state for `T > 0`, ground-manifold mixture at `T = 0`.
pub fn thermal_state(spec: &SpectralDecomposition, t: Temperature) -> DensityMatrix {
    if t.is_zero() {
        ground_state_projector(spec, DEFAULT_DEGENERACY_TOL)
    } else {
        gibbs_state(spec, t).expect("positive temperature")
    }
}

/// `Tr[rho(T) H]`; the ground-manifold energy at `T = 0`.
pub fn thermal_energy(spec: &SpectralDecomposition, t: Temperature) -> f64 {
    if t.is_zero() {
        return spec.ground_energy();
    }
    let w = boltzmann_weights(spec, t).expect("positive temperature");
    w.iter().zip(&spec.eigenvalues).map(|(p, e)| p * e).sum()
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Rejects matrices that are not Hermitian, not unit-trace or not positive.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(invalid("density matrix must be square and non-empty"));
        }
        let defect = hermiticity_defect(&matrix);
        if !(defect <= DENSITY_HERMITICITY_TOL) {
            return Err(invalid(format!("density matrix is not Hermitian ({defect:e})")));
        }
        let tr = trace(&matrix);
        if !((tr - c(1.0, 0.0)).norm() <= DENSITY_TRACE_TOL) {
            return Err(invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_PSD_TOL {
            return Err(invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm2 = psi.norm_squared();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(invalid("state vector must have positive finite norm"));
        }
        Ok(Self {
            matrix: psi * psi.adjoint() / c(norm2, 0.0),
        })
    }

    /// Equal mixture of the given (normalised) states.
    pub fn equal_mixture(states: &[CVector]) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid("mixture needs at least one state"));
        }
        let dim = states[0].len();
        let mut m = CMatrix::zeros(dim, dim);
        for s in states {
            m += DensityMatrix::pure(s)?.matrix;
        }
        Ok(Self {
            matrix: m / c(states.len() as f64, 0.0),
        })
    }

    /// Diagonal density matrix from probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(probs.len(), probs.iter().map(|&p| c(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        trace(&self.matrix)
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigendecompose_matrix(&self.matrix).eigenvalues
    }

    /// `Tr(rho A)`.
    pub fn expectation(&self, a: &CMatrix) -> C64 {
        trace(&(&self.matrix * a))
    }
}
