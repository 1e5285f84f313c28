//! KD coherence: the l1 norm of the imaginary part of the KD table, maximised
//! over the second basis with the first basis held fixed as the incoherent
//! reference.
//!
//! Values are reported normalised by the dimension (`raw / d`). With this
//! normalisation a qubit gives `C_KD = |rho_01|`, which is half its l1-norm
//! coherence. The unnormalised sum is available as [`ckd_raw_fixed`] and
//! [`CoherenceResult::raw_value`].
//!
//! For two qubits the search runs over product bases, one Bloch-angle pair per
//! qubit.

mod optimizer;
pub mod properties;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kdq::{imag_l1, kd_table};
use crate::qmath::{BlochAngles, DensityMatrix, OrthonormalBasis};

pub use optimizer::OptimizerConfig;
pub use properties::{check_property, IncoherentMap, Property, PropertyInput, PropertyReport};

/// Normalisation applied to the raw imaginary-part sum in dimension `d`.
pub fn normalization(d: usize) -> f64 {
    1.0 / d as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceResult {
    pub value: f64,
    /// One angle pair per qubit of the maximising second basis.
    pub argmax: Vec<BlochAngles>,
    pub evaluations: usize,
}

impl CoherenceResult {
    pub fn raw_value(&self) -> f64 {
        self.value * (1usize << self.argmax.len()) as f64
    }

    /// The maximising second basis.
    pub fn basis(&self) -> OrthonormalBasis {
        optimizer::basis_from_angles(&self.argmax)
    }
}

/// sum |Im P(mu, nu)| for a fixed pair of bases.
pub fn ckd_raw_fixed(
    rho: &DensityMatrix,
    reference: &OrthonormalBasis,
    second: &OrthonormalBasis,
) -> Result<f64> {
    Ok(imag_l1(&kd_table(rho, reference, second)?))
}

/// KD coherence for a fixed second basis, normalised by the dimension.
pub fn ckd_fixed(
    rho: &DensityMatrix,
    reference: &OrthonormalBasis,
    second: &OrthonormalBasis,
) -> Result<f64> {
    Ok(normalization(rho.dim()) * ckd_raw_fixed(rho, reference, second)?)
}

/// KD coherence maximised over Bloch-parametrised (product) second bases.
pub fn ckd(rho: &DensityMatrix, reference: &OrthonormalBasis, cfg: &OptimizerConfig) -> Result<CoherenceResult> {
    ckd_seeded(rho, reference, cfg, &[])
}

/// As [`ckd`], additionally starting the local refinement from any
/// caller-supplied angle tuple that beats the grid.
pub fn ckd_seeded(
    rho: &DensityMatrix,
    reference: &OrthonormalBasis,
    cfg: &OptimizerConfig,
    seeds: &[Vec<BlochAngles>],
) -> Result<CoherenceResult> {
    if rho.dim() != reference.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} with reference basis of dimension {}",
            rho.dim(),
            reference.dim()
        )));
    }
    let qubits = if rho.dim() == 2 { 1 } else { 2 };
    if seeds.iter().any(|s| s.len() != qubits) {
        return Err(Error::Dimension(format!("seed angle tuples must have {qubits} entries")));
    }
    let (raw, argmax, evaluations) = optimizer::maximize(rho, reference, cfg, seeds);
    Ok(CoherenceResult {
        value: normalization(rho.dim()) * raw,
        argmax,
        evaluations,
    })
}

/// sum_{i != j} |<mu_i|rho|mu_j>|.
pub fn l1_coherence(rho: &DensityMatrix, reference: &OrthonormalBasis) -> Result<f64> {
    if rho.dim() != reference.dim() {
        return Err(Error::Dimension("state and reference basis differ in dimension".into()));
    }
    let v = reference.vectors();
    let mut total = 0.0;
    for (i, a) in v.iter().enumerate() {
        let rho_a: Vec<Complex64> = rho.matrix().apply(a)?;
        for (j, b) in v.iter().enumerate() {
            if i != j {
                // <mu_j|rho|mu_i>
                total += crate::qmath::inner(b, &rho_a).norm();
            }
        }
    }
    Ok(total)
}
