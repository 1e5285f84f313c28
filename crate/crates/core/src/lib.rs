//! Kirkwood-Dirac (KD) quasiprobabilities, the KD coherence functional and a
//! coherence-based non-Markovianity measure for dephasing and amplitude-damping
//! qubit channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`qmath`]: small dense complex matrices, density matrices, bases.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature with breakpoints.
//! - [`kdq`]: KD tables, marginals, state reconstruction, nonclassicality.
//! - [`coherence`]: the KD coherence functional with basis maximisation,
//!   l1-norm coherence and executable resource-theory property checks.
//! - [`channels`]: ohmic and Lorentzian reservoirs, the four channel maps and
//!   a Volterra solver for the damping amplitude.
//! - [`nonmarkov`]: coherence trajectories, positive-variation measures and
//!   parameter sweeps.
//! - [`suites`]: seeded property suites and the Volterra oracle, shared by
//!   `kdnm check` and the acceptance run.
//! - [`cli`]: the `kdnm` command line front end (CSV and SVG output).

pub mod channels;
pub mod cli;
pub mod coherence;
pub mod error;
pub mod kdq;
pub mod nonmarkov;
pub mod qmath;
pub mod quad;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;
