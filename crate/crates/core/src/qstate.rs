//! Dense complex state vectors and Hermitian operators.
//!
//! Everything here is immutable once built. Constructors validate their
//! input, so a [`StateVector`] is always finite and nonzero and a
//! [`HermitianOperator`] is always exactly Hermitian (inputs within tolerance
//! are symmetrized).

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field of every amplitude and matrix entry.
pub type ComplexScalar = Complex64;

/// Default tolerance for [`validate_hermitian`].
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Tolerance on `| ‖v‖ − 1 |` for a vector to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// Variances more negative than this (relative to `max(1, ⟨H²⟩)`) are
/// reported instead of clamped.
pub const VARIANCE_CLAMP: f64 = 1e-12;

const IMAG_TOL: f64 = 1e-10;

/// A pure state, not necessarily normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    norm: f64,
}

impl StateVector {
    /// Wraps `amplitudes` unchanged after validation.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall {
                dimension: amplitudes.len(),
            });
        }
        if let Some(index) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFiniteEntry { index });
        }
        let norm = scaled_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amplitudes, norm })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dimension: usize, index: usize) -> Result<Self> {
        if index >= dimension {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dimension}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dimension];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Builds from amplitudes produced internally; the caller guarantees
    /// finiteness.
    pub(crate) fn from_trusted(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = scaled_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amplitudes, norm })
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm - 1.0).abs() <= tol
    }

    /// `v / ‖v‖`.
    pub fn normalize(&self) -> StateVector {
        let amplitudes: Vec<Complex64> = self.amplitudes.iter().map(|a| a / self.norm).collect();
        let norm = scaled_norm(&amplitudes);
        StateVector { amplitudes, norm }
    }

    /// `⟨self|other⟩ = Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.dimension(), other.dimension())?;
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    /// Multiplies every amplitude by `e^{i·angle}`.
    pub fn with_global_phase(&self, angle: f64) -> StateVector {
        let phase = Complex64::from_polar(1.0, angle);
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
            norm: self.norm,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Result<StateVector> {
        StateVector::new(self.amplitudes.iter().map(|a| a * factor).collect())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.dimension(), other.dimension())?;
        let diff: Vec<Complex64> = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a - b)
            .collect();
        Ok(scaled_norm(&diff))
    }
}

pub fn make_state(amplitudes: Vec<Complex64>) -> Result<StateVector> {
    StateVector::new(amplitudes)
}

pub fn normalize(v: &StateVector) -> StateVector {
    v.normalize()
}

pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner(b)
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Overflow/underflow-safe Euclidean norm.
pub(crate) fn scaled_norm(v: &[Complex64]) -> f64 {
    let scale = v.iter().map(|a| a.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = v
        .iter()
        .map(|a| {
            let z = a / scale;
            z.norm_sqr()
        })
        .sum();
    scale * sum.sqrt()
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A validated, exactly Hermitian dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates `matrix` with tolerance `tol` and stores `(M + M†)/2`.
    pub fn from_matrix(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows < 2 {
            return Err(Error::DimensionTooSmall { dimension: rows });
        }
        if let Some(index) = matrix.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFiniteEntry { index });
        }
        let max_deviation = hermiticity_deviation(&matrix);
        if max_deviation > tol {
            return Err(Error::NotHermitian { max_deviation });
        }
        let adjoint = matrix.adjoint();
        let matrix = (matrix + adjoint).map(|z| z * 0.5);
        Ok(Self { matrix })
    }

    /// Row-major nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_matrix(matrix, tol)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::from_matrix(matrix, 0.0)
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `H + c·I`.
    pub fn shifted(&self, c: f64) -> HermitianOperator {
        let mut matrix = self.matrix.clone();
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += Complex64::new(c, 0.0);
        }
        HermitianOperator { matrix }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dimension();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        // column-major storage: accumulate column by column
        for (j, &vj) in v.iter().enumerate() {
            if vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = self.matrix.column(j);
            for (o, m) in out.iter_mut().zip(col.iter()) {
                *o += m * vj;
            }
        }
        out
    }

    /// `H|v⟩` as a raw amplitude vector.
    pub fn apply(&self, v: &StateVector) -> Result<Vec<Complex64>> {
        check_dims(self.dimension(), v.dimension())?;
        Ok(self.apply_slice(v.amplitudes()))
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig(self)
    }

    pub fn expectation(&self, phi: &StateVector) -> Result<f64> {
        expectation(self, phi)
    }

    pub fn dispersion(&self, phi: &StateVector) -> Result<f64> {
        dispersion(self, phi)
    }
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Validates a square matrix given as rows and wraps it as a Hermitian
/// operator, symmetrizing within `tol`.
pub fn validate_hermitian(rows: &[Vec<Complex64>], tol: f64) -> Result<HermitianOperator> {
    HermitianOperator::from_rows(rows, tol)
}

/// Ascending eigenvalues with an orthonormal eigenbasis.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl SpectralDecomposition {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `λ_1 − λ_0`; zero when the ground level is degenerate.
    pub fn gap(&self) -> f64 {
        self.eigenvalues[1] - self.eigenvalues[0]
    }
}

pub fn eig(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = h.dimension();
    let decomposition = nalgebra::SymmetricEigen::try_new(h.matrix.clone(), 1e-15, 10_000 * n)
        .ok_or_else(|| Error::EigFailure(format!("no convergence for dimension {n}")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for k in order {
        let value = decomposition.eigenvalues[k];
        if !value.is_finite() {
            return Err(Error::EigFailure(format!("non-finite eigenvalue {value}")));
        }
        let column: Vec<Complex64> = decomposition.eigenvectors.column(k).iter().copied().collect();
        let v = StateVector::from_trusted(column)
            .map_err(|_| Error::EigFailure("zero eigenvector".into()))?
            .normalize();
        eigenvalues.push(value);
        eigenvectors.push(v);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// First and second moments of `H` in a state, plus the dispersion.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Moments {
    pub mean: f64,
    pub dispersion: f64,
}

/// Moments in the Rayleigh-quotient sense, so slightly unnormalized
/// intermediate states (RK4 stages) are handled consistently.
pub(crate) fn moments(h: &HermitianOperator, phi: &[Complex64]) -> Result<Moments> {
    check_dims(h.dimension(), phi.len())?;
    let hv = h.apply_slice(phi);
    let norm = scaled_norm(phi);
    let norm_sq = norm * norm;
    let raw = dot(phi, &hv);
    let second = scaled_norm(&hv).powi(2) / norm_sq;
    if raw.im.abs() > IMAG_TOL * (norm_sq + second.sqrt() * norm_sq) {
        return Err(Error::NumericalInconsistency(format!(
            "expectation has imaginary part {:e}",
            raw.im
        )));
    }
    let mean = raw.re / norm_sq;
    let variance = second - mean * mean;
    if variance < -VARIANCE_CLAMP * second.max(1.0) {
        return Err(Error::NumericalInconsistency(format!(
            "negative variance {variance:e}"
        )));
    }
    // ‖(H − ⟨H⟩)φ‖ is the same quantity without the cancellation in ⟨H²⟩ − ⟨H⟩².
    let centered: Vec<Complex64> = hv.iter().zip(phi).map(|(a, b)| a - b * mean).collect();
    let dispersion = scaled_norm(&centered) / norm;
    Ok(Moments { mean, dispersion })
}

/// `⟨φ|H|φ⟩` for a normalized `φ`.
pub fn expectation(h: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    Ok(moments(h, phi.amplitudes())?.mean)
}

/// Standard deviation `ΔH = sqrt(⟨H²⟩ − ⟨H⟩²)` for a normalized `φ`.
pub fn dispersion(h: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    Ok(moments(h, phi.amplitudes())?.dispersion)
}

/// `(λ_min, λ_max)` bounds, used by sanity checks.
pub fn spectral_bounds(h: &HermitianOperator) -> Result<(f64, f64)> {
    let s = eig(h)?;
    Ok((s.eigenvalues[0], *s.eigenvalues.last().unwrap()))
}
