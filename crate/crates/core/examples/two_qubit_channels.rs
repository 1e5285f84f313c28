//! Bell state through local dephasing and local damping: C_KD against the
//! closed forms |R^4 sin((h1+h2)t)|/4 and |B|^2/4.

use std::f64::consts::FRAC_1_SQRT_2;

use kd_coherence::channels::{b_analytic, zeta_exact, ChannelModel, LorentzParams, OhmicParams, TwoQubitDephasingParams};
use kd_coherence::coherence::OptimizerConfig;
use kd_coherence::nonmarkov::{trajectory, BasisMode, MeasureResult, TimeGrid};
use kd_coherence::qmath::density_from_pure;
use kd_coherence::Complex64;

fn main() -> kd_coherence::Result<()> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let bell = density_from_pure(&[h, z, z, h])?;
    let grid = TimeGrid::new(30.0, 2048)?;
    let cfg = OptimizerConfig::default();

    let ohm = OhmicParams::new(1.0, 1.0)?;
    let m = ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(0.2, 0.4, 0.0, ohm)?);
    let tr = trajectory(&m, &bell, &grid, &BasisMode::fixed_default(m.kind()), &cfg)?;
    let dev = grid
        .times()
        .iter()
        .zip(&tr.ckd)
        .map(|(&t, c)| (c - 0.25 * ((-2.0 * zeta_exact(t, &ohm)).exp().powi(4) * (0.6 * t).sin()).abs()).abs())
        .fold(0.0, f64::max);
    println!("dephase2q s=1: max deviation {dev:.1e}, nCkd = {:.6e}", MeasureResult::from_trajectory(&tr)?.n_ckd);

    for ratio in [0.2, 1.0, 2.0, 4.0] {
        let p = LorentzParams::resonant_ratio(1.0, ratio)?;
        let m = ChannelModel::Damp2Q(p);
        let tr = trajectory(&m, &bell, &grid, &BasisMode::fixed_default(m.kind()), &cfg)?;
        let dev = grid
            .times()
            .iter()
            .zip(&tr.ckd)
            .map(|(&t, c)| (c - 0.25 * b_analytic(t, &p).norm_sqr()).abs())
            .fold(0.0, f64::max);
        println!(
            "damp2q kappa/gamma0={ratio}: max deviation {dev:.1e}, nCkd = {:.6e}",
            MeasureResult::from_trajectory(&tr)?.n_ckd
        );
    }
    Ok(())
}
