//! nCkd across ohmicity (dephasing) and across kappa/gamma0 (damping).

use kd_coherence::channels::{ChannelKind, ChannelModel, LorentzParams, OhmicParams};
use kd_coherence::coherence::OptimizerConfig;
use kd_coherence::nonmarkov::{sweep, BasisMode, InitialStateMode, SweepParam, SweepRange, TimeGrid};

fn print_rows(param: SweepParam, rows: &[kd_coherence::nonmarkov::SweepRow]) {
    println!("{:>8}  {:>14}  {:>14}", param.name(), "nCkd", "nCl1");
    for row in rows {
        match &row.result {
            Ok(m) => println!("{:8.3}  {:14.6e}  {:14.6e}", row.value, m.n_ckd, m.n_cl1),
            Err(e) => println!("{:8.3}  failed: {e}", row.value),
        }
    }
}

fn main() -> kd_coherence::Result<()> {
    let grid = TimeGrid::new(30.0, 4096)?;
    let cfg = OptimizerConfig::default();

    let base = ChannelModel::Dephase1Q(OhmicParams::new(1.0, 1.0)?);
    let rows = sweep(
        &base,
        SweepParam::S,
        &SweepRange::new(0.5, 5.0, 10)?,
        &grid,
        &BasisMode::fixed_default(ChannelKind::Dephase1Q),
        &cfg,
        InitialStateMode::Fiducial,
    )?;
    print_rows(SweepParam::S, &rows);
    println!();

    let base = ChannelModel::Damp1Q(LorentzParams::resonant_ratio(1.0, 1.0)?);
    let rows = sweep(
        &base,
        SweepParam::KappaOverGamma0,
        &SweepRange::new(0.25, 3.0, 12)?,
        &grid,
        &BasisMode::fixed_default(ChannelKind::Damp1Q),
        &cfg,
        InitialStateMode::Fiducial,
    )?;
    print_rows(SweepParam::KappaOverGamma0, &rows);
    Ok(())
}
