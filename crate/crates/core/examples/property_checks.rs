//! Resource-theory property suites and KD engine invariants.

use kd_coherence::suites::{run_suite, Suite, DEFAULT_SEED};

fn main() -> kd_coherence::Result<()> {
    let seed = std::env::args().nth(1).map_or(DEFAULT_SEED, |s| s.parse().expect("seed"));
    for suite in [Suite::A1, Suite::A2, Suite::A3, Suite::A4, Suite::A5, Suite::KdInvariants, Suite::OracleVolterra] {
        let report = run_suite(suite, seed)?;
        println!("{report}");
    }
    Ok(())
}
