//! The four open-system channels: single- and two-qubit dephasing driven by an
//! ohmic reservoir, and single- and two-qubit amplitude damping driven by a
//! Lorentzian reservoir.
//!
//! All maps are closed-form functions of `(rho0, t, params)`; only the
//! decoherence exponent zeta(t) needs quadrature.

mod lorentz;
mod ohmic;
mod volterra;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix};

pub use lorentz::{b_analytic, b_analytic_literal, b_derivative, kernel_lorentzian, modulus_slope_numerator, LorentzParams};
pub use ohmic::{dephase_factor, gamma_ohmic, zeta, zeta_between, zeta_exact, zeta_on_grid, OhmicParams, RateForm};
pub use volterra::{b_volterra, VolterraSolver, MAX_STEP_KAPPA};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitDephasingParams {
    h1: f64,
    h2: f64,
    lambda: f64,
    ohmic: OhmicParams,
}

impl TwoQubitDephasingParams {
    pub fn new(h1: f64, h2: f64, lambda: f64, ohmic: OhmicParams) -> Result<Self> {
        for (name, v) in [("h1", h1), ("h2", h2), ("lambda", lambda)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        Ok(Self { h1, h2, lambda, ohmic })
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ohmic(&self) -> &OhmicParams {
        &self.ohmic
    }
}

fn check_input(rho0: &DensityMatrix, dim: usize, t: f64) -> Result<()> {
    if rho0.dim() != dim {
        return Err(Error::Dimension(format!("channel acts on dimension {dim}, state has {}", rho0.dim())));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::param("t", format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// Single-qubit dephasing with a given decay factor R: populations kept,
/// coherences scaled by R.
pub fn dephasing_1q_with_factor(rho0: &DensityMatrix, r: f64) -> Result<DensityMatrix> {
    check_input(rho0, 2, 0.0)?;
    let mut m = rho0.matrix().clone();
    m[(0, 1)] *= r;
    m[(1, 0)] *= r;
    Ok(DensityMatrix::from_trusted(m))
}

pub fn dephasing_1q(rho0: &DensityMatrix, t: f64, p: &OhmicParams) -> Result<DensityMatrix> {
    check_input(rho0, 2, t)?;
    dephasing_1q_with_factor(rho0, dephase_factor(t, p)?)
}

/// K1 = diag(1, B), K2 = sqrt(1 - |B|^2) |0><1|.
pub fn damping_kraus(b: Complex64) -> [ComplexMatrix; 2] {
    let k1 = ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), b]);
    let mut k2 = ComplexMatrix::zeros(2, 2);
    k2[(0, 1)] = Complex64::new((1.0 - b.norm_sqr()).max(0.0).sqrt(), 0.0);
    [k1, k2]
}

/// Single-qubit amplitude damping for a given amplitude B, |B| <= 1.
pub fn damping_1q_with_amplitude(rho0: &DensityMatrix, b: Complex64) -> Result<DensityMatrix> {
    check_input(rho0, 2, 0.0)?;
    check_amplitude(b)?;
    let b2 = b.norm_sqr();
    let r = |i, j| rho0.get(i, j);
    let r11 = r(1, 1) * b2;
    let r00 = Complex64::new(1.0, 0.0) - r11;
    let r01 = r(0, 1) * b.conj();
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_rows(&[[r00, r01], [r01.conj(), r11]])))
}

pub fn damping_1q(rho0: &DensityMatrix, t: f64, p: &LorentzParams) -> Result<DensityMatrix> {
    check_input(rho0, 2, t)?;
    damping_1q_with_amplitude(rho0, b_analytic(t, p))
}

fn check_amplitude(b: Complex64) -> Result<()> {
    if !(b.norm_sqr() <= 1.0 + 1e-12) {
        return Err(Error::param("B", format!("amplitude modulus must not exceed 1, got {}", b.norm())));
    }
    Ok(())
}

/// Two-qubit dephasing for a given decoherence exponent zeta at time t.
///
/// The collective coupling to the total spin along z damps |00><11| by
/// e^{-8 zeta} and the single-excitation coherences by e^{-2 zeta}; |01><10|
/// lies in a zero-eigenvalue subspace of the total spin and is not damped.
/// Phases follow the qubit splittings h1, h2 and the exchange coupling lambda.
pub fn dephasing_2q_with_zeta(
    rho0: &DensityMatrix,
    t: f64,
    zeta: f64,
    p: &TwoQubitDephasingParams,
) -> Result<DensityMatrix> {
    check_input(rho0, 4, t)?;
    let (h1, h2, l) = (p.h1, p.h2, p.lambda);
    let factor = |phase: f64, decay: f64| Complex64::from_polar((-decay * zeta).exp(), phase * t);
    let upper = [
        ((0, 1), factor(-(l + h2), 2.0)),
        ((0, 2), factor(-(l + h1), 2.0)),
        ((0, 3), factor(-(h1 + h2), 8.0)),
        ((1, 2), factor(-(h1 - h2), 0.0)),
        ((1, 3), factor(l - h1, 2.0)),
        ((2, 3), factor(l - h2, 2.0)),
    ];
    let mut m = rho0.matrix().clone();
    for ((i, j), f) in upper {
        m[(i, j)] = rho0.get(i, j) * f;
        m[(j, i)] = m[(i, j)].conj();
    }
    Ok(DensityMatrix::from_trusted(m))
}

pub fn dephasing_2q(rho0: &DensityMatrix, t: f64, p: &TwoQubitDephasingParams) -> Result<DensityMatrix> {
    check_input(rho0, 4, t)?;
    dephasing_2q_with_zeta(rho0, t, zeta(t, &p.ohmic)?, p)
}

/// Two qubits, each damped by its own reservoir with amplitude B. The basis
/// order is |00>, |01>, |10>, |11> with |0> the excited level.
pub fn damping_2q_with_amplitude(rho0: &DensityMatrix, b: Complex64) -> Result<DensityMatrix> {
    check_input(rho0, 4, 0.0)?;
    check_amplitude(b)?;
    let r = |i, j| rho0.get(i, j);
    let b2 = b.norm_sqr();
    let lost = 1.0 - b2;
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = r(0, 0) * b2 * b2;
    m[(1, 1)] = r(0, 0) * b2 * lost + r(1, 1) * b2;
    m[(2, 2)] = r(0, 0) * b2 * lost + r(2, 2) * b2;
    m[(3, 3)] = Complex64::new(1.0, 0.0) - (m[(0, 0)] + m[(1, 1)] + m[(2, 2)]);
    m[(0, 1)] = r(0, 1) * b2 * b;
    m[(0, 2)] = r(0, 2) * b2 * b;
    m[(0, 3)] = r(0, 3) * b * b;
    m[(1, 2)] = r(1, 2) * b2;
    m[(1, 3)] = r(0, 2) * b * lost + r(1, 3) * b;
    m[(2, 3)] = r(0, 1) * b * lost + r(2, 3) * b;
    for i in 0..4 {
        m[(i, i)].im = 0.0;
        for j in i + 1..4 {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    Ok(DensityMatrix::from_trusted(m))
}

pub fn damping_2q(rho0: &DensityMatrix, t: f64, p: &LorentzParams) -> Result<DensityMatrix> {
    check_input(rho0, 4, t)?;
    damping_2q_with_amplitude(rho0, b_analytic(t, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Dephase1Q,
    Damp1Q,
    Dephase2Q,
    Damp2Q,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 4] = [Self::Dephase1Q, Self::Damp1Q, Self::Dephase2Q, Self::Damp2Q];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dephase1Q => "dephase1q",
            Self::Damp1Q => "damp1q",
            Self::Dephase2Q => "dephase2q",
            Self::Damp2Q => "damp2q",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Dephase1Q | Self::Damp1Q => 2,
            Self::Dephase2Q | Self::Damp2Q => 4,
        }
    }

    pub fn is_dephasing(&self) -> bool {
        matches!(self, Self::Dephase1Q | Self::Dephase2Q)
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("channel", format!("unknown channel '{s}' (expected dephase1q, damp1q, dephase2q or damp2q)")))
    }
}

/// A channel together with its reservoir parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    Dephase1Q(OhmicParams),
    Damp1Q(LorentzParams),
    Dephase2Q(TwoQubitDephasingParams),
    Damp2Q(LorentzParams),
}

/// States along a time grid plus the scalar that drives them: R(t) for the
/// dephasing channels, |B(t)| for the damping channels.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub states: Vec<DensityMatrix>,
    pub driver: Vec<f64>,
}

impl ChannelModel {
    pub fn kind(&self) -> ChannelKind {
        match self {
            Self::Dephase1Q(_) => ChannelKind::Dephase1Q,
            Self::Damp1Q(_) => ChannelKind::Damp1Q,
            Self::Dephase2Q(_) => ChannelKind::Dephase2Q,
            Self::Damp2Q(_) => ChannelKind::Damp2Q,
        }
    }

    pub fn dim(&self) -> usize {
        self.kind().dim()
    }

    /// Name of the driving scalar reported alongside trajectories.
    pub fn driver_name(&self) -> &'static str {
        if self.kind().is_dephasing() {
            "R"
        } else {
            "absB"
        }
    }

    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        match self {
            Self::Dephase1Q(p) => dephasing_1q(rho0, t, p),
            Self::Damp1Q(p) => damping_1q(rho0, t, p),
            Self::Dephase2Q(p) => dephasing_2q(rho0, t, p),
            Self::Damp2Q(p) => damping_2q(rho0, t, p),
        }
    }

    /// Evolves `rho0` to every time in a non-decreasing sequence, sharing the
    /// zeta quadrature between neighbouring points.
    pub fn evolve_grid(&self, rho0: &DensityMatrix, times: &[f64]) -> Result<Evolution> {
        if rho0.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "{} acts on dimension {}, state has {}",
                self.kind(),
                self.dim(),
                rho0.dim()
            )));
        }
        let mut states = Vec::with_capacity(times.len());
        let mut driver = Vec::with_capacity(times.len());
        match self {
            Self::Dephase1Q(p) => {
                for z in zeta_on_grid(times, p)? {
                    let r = (-2.0 * z).exp();
                    states.push(dephasing_1q_with_factor(rho0, r)?);
                    driver.push(r);
                }
            }
            Self::Dephase2Q(p) => {
                for (&t, z) in times.iter().zip(zeta_on_grid(times, &p.ohmic)?) {
                    states.push(dephasing_2q_with_zeta(rho0, t, z, p)?);
                    driver.push((-2.0 * z).exp());
                }
            }
            Self::Damp1Q(p) | Self::Damp2Q(p) => {
                let two = matches!(self, Self::Damp2Q(_));
                for &t in times {
                    check_input(rho0, rho0.dim(), t)?;
                    let b = b_analytic(t, p);
                    states.push(if two {
                        damping_2q_with_amplitude(rho0, b)?
                    } else {
                        damping_1q_with_amplitude(rho0, b)?
                    });
                    driver.push(b.norm());
                }
            }
        }
        Ok(Evolution { states, driver })
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dephase1Q(p) => write!(f, "dephase1q(s={}, omega_c={})", p.s(), p.omega_c()),
            Self::Damp1Q(p) | Self::Damp2Q(p) => write!(
                f,
                "{}(gamma0={}, kappa={}, varpi={})",
                self.kind(),
                p.gamma0(),
                p.kappa(),
                p.varpi()
            ),
            Self::Dephase2Q(p) => write!(
                f,
                "dephase2q(h1={}, h2={}, lambda={}, s={}, omega_c={})",
                p.h1,
                p.h2,
                p.lambda,
                p.ohmic.s(),
                p.ohmic.omega_c()
            ),
        }
    }
}
