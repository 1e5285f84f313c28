//! Dense complex linear algebra and quantum-state primitives for one and two
//! qubits.

mod matrix;
pub mod random;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use matrix::{inner, kron_vec, norm, ComplexMatrix};
pub(crate) use matrix::{ONE, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_FLOOR: f64 = -1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-12;
pub const NORMALIZATION_TOL: f64 = 1e-10;

fn check_dim(d: usize) -> Result<()> {
    if d == 2 || d == 4 {
        Ok(())
    } else {
        Err(Error::Dimension(format!("dimension {d} is not 2 or 4")))
    }
}

/// A qubit or two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all invariants.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let rho = Self { mat };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix produced by a trusted map without the eigenvalue check.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.mat;
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        check_dim(m.rows())?;
        let herm = m.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min_ev = m.hermitian_eigenvalues()[0];
        if min_ev < PSD_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev:e}")));
        }
        Ok(())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)))
    }

    /// Diagonal (incoherent) state from populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag_real(populations))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// <a|rho|b>
    pub fn expectation(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let rb = self.mat.apply(b).expect("vector length matches state dimension");
        inner(a, &rb)
    }

    /// U rho U†.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let out = u.matmul(&self.mat)?.matmul(&u.adjoint())?;
        Ok(Self::from_trusted(out))
    }

    /// Convex combination sum_j w_j rho_j. Weights must be non-negative and sum to one.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::Dimension("weights and states differ in length".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::param("weights", "must be a probability vector"));
        }
        let d = states[0].dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != d {
                return Err(Error::Dimension("mixed dimensions in mixture".into()));
            }
            acc = &acc + &s.mat.scale_real(*w);
        }
        Ok(Self::from_trusted(acc))
    }

    /// True when every off-diagonal entry is below `tol` in modulus.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.mat[(i, j)].norm() <= tol))
    }
}

/// Ordered orthonormal basis of C^2 or C^4.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        check_dim(d)?;
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension("basis vectors must have length equal to their count".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let expected = if i == j { 1.0 } else { 0.0 };
                let dev = (inner(&vectors[i], &vectors[j]) - expected).norm();
                if dev > ORTHONORMAL_TOL {
                    return Err(Error::InvalidBasis(format!("<v{i}|v{j}> off by {dev:e}")));
                }
            }
        }
        Ok(Self { vectors })
    }

    pub(crate) fn from_trusted(vectors: Vec<Vec<Complex64>>) -> Self {
        Self { vectors }
    }

    pub fn computational(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_trusted(
            (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect())
                .collect(),
        ))
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    /// Applies `u` to every basis vector.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| u.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    /// Product basis {a_i ⊗ b_j}, index `2 i + j`.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::Dimension("product bases are built from two qubit bases".into()));
        }
        Ok(Self::from_trusted(
            a.vectors
                .iter()
                .flat_map(|x| b.vectors.iter().map(move |y| kron_vec(x, y)))
                .collect(),
        ))
    }

    /// Each vector multiplied by the matching phase factor e^{i phi_k}.
    pub fn with_phases(&self, phases: &[f64]) -> Self {
        Self::from_trusted(
            self.vectors
                .iter()
                .zip(phases)
                .map(|(v, &p)| {
                    let f = Complex64::from_polar(1.0, p);
                    v.iter().map(|z| z * f).collect()
                })
                .collect(),
        )
    }
}

/// Bloch-sphere angles of one qubit basis: alpha in [0, pi], beta in [0, 2 pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngles {
    alpha: f64,
    beta: f64,
}

impl BlochAngles {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) {
            return Err(Error::param("alpha", format!("{alpha} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&beta) {
            return Err(Error::param("beta", format!("{beta} outside [0, 2pi)")));
        }
        Ok(Self { alpha, beta })
    }

    /// Maps arbitrary real angles to the equivalent canonical pair.
    ///
    /// `(2 pi - alpha, beta)` and `(alpha, beta + pi)` give the same basis up to
    /// per-vector phases, which is all any KD functional sees.
    pub fn canonical(alpha: f64, beta: f64) -> Self {
        let mut a = alpha.rem_euclid(2.0 * PI);
        let mut b = beta;
        if a > PI {
            a = 2.0 * PI - a;
            b += PI;
        }
        let mut b = b.rem_euclid(2.0 * PI);
        if b >= 2.0 * PI {
            b = 0.0;
        }
        Self { alpha: a, beta: b }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Non-destructively computes the qubit basis for raw angles.
pub(crate) fn bloch_vectors(alpha: f64, beta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (0.5 * alpha).sin_cos();
    let e = Complex64::from_polar(1.0, beta);
    [
        [Complex64::new(c, 0.0), e * s],
        [Complex64::new(s, 0.0), -e * c],
    ]
}

/// Qubit basis {cos(a/2)|0> + e^{ib} sin(a/2)|1>, sin(a/2)|0> - e^{ib} cos(a/2)|1>}.
pub fn bloch_basis(angles: BlochAngles) -> OrthonormalBasis {
    let [v0, v1] = bloch_vectors(angles.alpha, angles.beta);
    OrthonormalBasis::from_trusted(vec![v0.to_vec(), v1.to_vec()])
}

/// Tensor product of two qubit Bloch bases.
pub fn product_bloch_basis(first: BlochAngles, second: BlochAngles) -> OrthonormalBasis {
    OrthonormalBasis::product(&bloch_basis(first), &bloch_basis(second))
        .expect("qubit bases have dimension 2")
}

/// |psi><psi| for a unit vector.
pub fn density_from_pure(psi: &[Complex64]) -> Result<DensityMatrix> {
    check_dim(psi.len())?;
    let n = norm(psi);
    if (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Normalization { norm: n });
    }
    Ok(DensityMatrix::from_trusted(ComplexMatrix::outer(psi, psi)))
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn tensor_states(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::Dimension("tensor_states expects two qubit states".into()));
    }
    Ok(DensityMatrix::from_trusted(a.mat.kron(&b.mat)))
}

/// Which qubit of a two-qubit state to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!(
            "partial trace needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match keep {
                    Subsystem::A => rho.get(2 * i + k, 2 * j + k),
                    Subsystem::B => rho.get(2 * k + i, 2 * k + j),
                })
                .sum();
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Largest entry of |sum_n K_n† K_n - I|.
pub fn kraus_completeness_defect(kraus: &[ComplexMatrix]) -> Result<f64> {
    let d = kraus
        .first()
        .ok_or_else(|| Error::Dimension("empty Kraus set".into()))?
        .cols();
    let mut acc = ComplexMatrix::zeros(d, d);
    for k in kraus {
        if k.rows() != d || k.cols() != d {
            return Err(Error::Dimension("Kraus operators must be square and equal-sized".into()));
        }
        acc = &acc + &(&k.adjoint() * k);
    }
    Ok(acc.max_abs_diff(&ComplexMatrix::identity(d)))
}

/// sum_n K_n rho K_n†.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &[ComplexMatrix]) -> Result<DensityMatrix> {
    let deviation = kraus_completeness_defect(kraus)?;
    if deviation > 1e-10 {
        return Err(Error::Kraus { deviation });
    }
    let d = rho.dim();
    if kraus[0].rows() != d {
        return Err(Error::Dimension(format!(
            "Kraus operators of size {} on a state of dimension {d}",
            kraus[0].rows()
        )));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for k in kraus {
        out = &out + &(&(k * &rho.mat) * &k.adjoint());
    }
    Ok(DensityMatrix::from_trusted(out))
}
