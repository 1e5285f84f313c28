//! C_KD for a damped, detuned qubit: the fixed y basis misses the optimum,
//! the Bloch-angle search finds |rho_01|.

use std::f64::consts::FRAC_PI_2;

use kd_coherence::coherence::{ckd, ckd_fixed, l1_coherence, OptimizerConfig};
use kd_coherence::qmath::{bloch_basis, BlochAngles, DensityMatrix, OrthonormalBasis};
use kd_coherence::channels::damping_1q_with_amplitude;
use kd_coherence::nonmarkov::fiducial_state;
use kd_coherence::channels::ChannelKind;
use kd_coherence::Complex64;

fn main() -> kd_coherence::Result<()> {
    let reference = OrthonormalBasis::computational(2)?;
    let rho: DensityMatrix = damping_1q_with_amplitude(&fiducial_state(ChannelKind::Damp1Q), Complex64::new(0.35, -0.42))?;

    let y = bloch_basis(BlochAngles::new(FRAC_PI_2, FRAC_PI_2)?);
    let fixed = ckd_fixed(&rho, &reference, &y)?;
    let opt = ckd(&rho, &reference, &OptimizerConfig::default())?;
    let a = opt.argmax[0];

    println!("|rho_01|           = {:.10}", rho.get(0, 1).norm());
    println!("C_KD (y basis)     = {fixed:.10}");
    println!("C_KD (optimised)   = {:.10} at alpha={:.6}, beta={:.6}", opt.value, a.alpha(), a.beta());
    println!("objective evals    = {}", opt.evaluations);
    println!("l1 coherence       = {:.10}", l1_coherence(&rho, &reference)?);
    Ok(())
}
