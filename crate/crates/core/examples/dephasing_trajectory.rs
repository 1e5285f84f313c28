//! Ohmic dephasing: C_KD(t) against R(t)/2 and the non-Markovianity measure
//! across ohmicities.

use kd_coherence::channels::{zeta_exact, ChannelModel, OhmicParams};
use kd_coherence::coherence::OptimizerConfig;
use kd_coherence::nonmarkov::{fiducial_state, n_ckd_dephasing_analytic, trajectory, BasisMode, MeasureResult, TimeGrid};

fn main() -> kd_coherence::Result<()> {
    let grid = TimeGrid::new(30.0, 4096)?;
    for s in [1.0, 2.0, 3.0, 4.0] {
        let p = OhmicParams::new(s, 1.0)?;
        let m = ChannelModel::Dephase1Q(p);
        let mode = BasisMode::fixed_default(m.kind());
        let tr = trajectory(&m, &fiducial_state(m.kind()), &grid, &mode, &OptimizerConfig::default())?;
        let worst = grid
            .times()
            .iter()
            .zip(&tr.ckd)
            .map(|(&t, c)| (c - 0.5 * (-2.0 * zeta_exact(t, &p)).exp()).abs())
            .fold(0.0, f64::max);
        let meas = MeasureResult::from_trajectory(&tr)?;
        println!(
            "s={s}: max|C_KD - R/2| = {worst:.1e}, nCkd = {:.6e} (quadrature {:.6e}), nCl1/nCkd = {:.4}, ascents {}",
            meas.n_ckd,
            n_ckd_dephasing_analytic(&p, 30.0)?,
            if meas.n_ckd > 0.0 { meas.n_cl1 / meas.n_ckd } else { f64::NAN },
            meas.ascending_intervals.len()
        );
    }
    Ok(())
}
