//! Lorentzian reservoir: correlation kernel and the excited-state amplitude
//! B(t) of a qubit coupled to it.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzParams {
    gamma0: f64,
    kappa: f64,
    varpi: f64,
}

impl LorentzParams {
    pub fn new(gamma0: f64, kappa: f64, varpi: f64) -> Result<Self> {
        if !(gamma0 > 0.0) || !gamma0.is_finite() {
            return Err(Error::param("gamma0", format!("coupling must be positive and finite, got {gamma0}")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", format!("width must be positive and finite, got {kappa}")));
        }
        if !varpi.is_finite() {
            return Err(Error::param("varpi", "detuning must be finite"));
        }
        Ok(Self { gamma0, kappa, varpi })
    }

    /// Resonant reservoir with `kappa = ratio * gamma0`.
    pub fn resonant_ratio(gamma0: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0) {
            return Err(Error::param("kappa_over_gamma0", format!("must be positive, got {ratio}")));
        }
        Self::new(gamma0, ratio * gamma0, 0.0)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn varpi(&self) -> f64 {
        self.varpi
    }

    /// M = kappa - i varpi.
    fn m(&self) -> Complex64 {
        Complex64::new(self.kappa, -self.varpi)
    }

    /// Delta = sqrt(M^2 - 2 gamma0 kappa).
    pub fn delta(&self) -> Complex64 {
        let m = self.m();
        (m * m - 2.0 * self.gamma0 * self.kappa).sqrt()
    }

    /// On resonance, |B| decays monotonically iff kappa >= 2 gamma0.
    pub fn is_weak_coupling(&self) -> bool {
        self.varpi == 0.0 && self.kappa >= 2.0 * self.gamma0
    }
}

/// G(tau) = (gamma0 kappa / 2) e^{-(kappa - i varpi) tau}.
pub fn kernel_lorentzian(tau: f64, p: &LorentzParams) -> Complex64 {
    0.5 * p.gamma0 * p.kappa * (-p.m() * tau).exp()
}

/// e^{-Mt/2} cosh(x) and e^{-Mt/2} sinh(x)/x with x = Delta t / 2, evaluated
/// without overflow and without the removable singularity at Delta = 0.
fn damped_cosh_sinhc(t: f64, p: &LorentzParams) -> (Complex64, Complex64) {
    let m = p.m();
    let delta = p.delta();
    let x = 0.5 * delta * t;
    if x.norm() < 1e-3 {
        let x2 = x * x;
        let env = (-0.5 * m * t).exp();
        let ch = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0));
        let shc = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
        (env * ch, env * shc)
    } else {
        let ep = (0.5 * (delta - m) * t).exp();
        let em = (-0.5 * (delta + m) * t).exp();
        (0.5 * (ep + em), 0.5 * (ep - em) / x)
    }
}

/// B(t) = e^{-Mt/2}[cosh(Delta t/2) + (M/Delta) sinh(Delta t/2)], the solution
/// of the amplitude equation with B(0) = 1 and dB/dt(0) = 0.
pub fn b_analytic(t: f64, p: &LorentzParams) -> Complex64 {
    let (ch, shc) = damped_cosh_sinhc(t, p);
    ch + p.m() * 0.5 * t * shc
}

/// Variant with coefficient M/2 on the sinh term. Its initial slope is
/// M(Delta - 2)/4 rather than 0, so it does not solve the amplitude equation;
/// kept for comparison only.
pub fn b_analytic_literal(t: f64, p: &LorentzParams) -> Complex64 {
    let (ch, shc) = damped_cosh_sinhc(t, p);
    ch + 0.5 * p.m() * (0.5 * p.delta() * t) * shc
}

/// dB/dt = -(gamma0 kappa t / 2) e^{-Mt/2} sinh(x)/x.
pub fn b_derivative(t: f64, p: &LorentzParams) -> Complex64 {
    let (_, shc) = damped_cosh_sinhc(t, p);
    -0.5 * p.gamma0 * p.kappa * t * shc
}

/// d|B|/dt expressed through Re(conj(B) dB/dt) = |B| d|B|/dt; has the sign
/// of d|B|/dt wherever B != 0.
pub fn modulus_slope_numerator(t: f64, p: &LorentzParams) -> f64 {
    (b_analytic(t, p).conj() * b_derivative(t, p)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(g: f64, k: f64, w: f64) -> LorentzParams {
        LorentzParams::new(g, k, w).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LorentzParams::new(0.0, 1.0, 0.0).is_err());
        assert!(LorentzParams::new(1.0, -1.0, 0.0).is_err());
        assert!(LorentzParams::new(1.0, 1.0, f64::INFINITY).is_err());
        assert!(LorentzParams::resonant_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let p = lp(1.0, 1.0, 0.0);
        assert!((kernel_lorentzian(0.0, &p) - 0.5).norm() < 1e-16);
        assert!((kernel_lorentzian(1.0, &p) - 0.5 * (-1f64).exp()).norm() < 1e-16);
        assert!(kernel_lorentzian(60.0, &p).norm() < 1e-20);
    }

    #[test]
    fn initial_conditions() {
        for p in [lp(0.25, 1.0, 0.0), lp(5.0, 1.0, 0.0), lp(1.0, 1.0, 0.5), lp(0.5, 2.0, 0.0)] {
            assert!((b_analytic(0.0, &p) - 1.0).norm() < 1e-15);
            assert_eq!(b_derivative(0.0, &p), Complex64::new(0.0, 0.0));
            // finite-difference slope agrees with the closed-form derivative
            for t in [0.3, 1.7, 4.0] {
                let h = 1e-6;
                let fd = (b_analytic(t + h, &p) - b_analytic(t - h, &p)) / (2.0 * h);
                assert!((fd - b_derivative(t, &p)).norm() < 1e-7);
            }
        }
        let p = lp(0.25, 1.0, 0.0);
        let h = 1e-7;
        let slope = (b_analytic_literal(h, &p) - 1.0) / h;
        let expect = p.m() * (p.delta() - 2.0) / 4.0;
        assert!((slope - expect).norm() < 1e-5);
    }

    #[test]
    fn satisfies_second_order_form() {
        // B'' = -M B' - (gamma0 kappa / 2) B
        let p = lp(1.0, 1.0, 0.5);
        let h = 1e-4;
        for t in [0.5, 2.0, 5.0] {
            let b2 = (b_analytic(t + h, &p) - 2.0 * b_analytic(t, &p) + b_analytic(t - h, &p)) / (h * h);
            let rhs = -p.m() * b_derivative(t, &p) - 0.5 * p.gamma0 * p.kappa * b_analytic(t, &p);
            assert!((b2 - rhs).norm() < 1e-6);
        }
    }

    #[test]
    fn critical_damping_limit_is_continuous() {
        // Delta = 0 exactly when kappa = 2 gamma0 on resonance
        let p = lp(0.5, 1.0, 0.0);
        assert_eq!(p.delta().norm(), 0.0);
        for t in [0.0f64, 0.5, 3.0, 20.0] {
            let limit = (-0.5 * t).exp() * (1.0 + 0.5 * t);
            assert!((b_analytic(t, &p) - limit).norm() < 1e-15);
        }
        let near = lp(0.5 + 1e-9, 1.0, 0.0);
        assert!((b_analytic(3.0, &near) - b_analytic(3.0, &p)).norm() < 1e-8);
    }

    #[test]
    fn weak_coupling_is_monotone_and_strong_coupling_revives() {
        let weak = lp(0.25, 1.0, 0.0);
        assert!(weak.is_weak_coupling());
        let mods: Vec<f64> = (0..1000).map(|i| b_analytic(i as f64 * 0.03, &weak).norm()).collect();
        assert!(mods.windows(2).all(|w| w[1] < w[0]));

        let strong = lp(5.0, 1.0, 0.0);
        assert!(!strong.is_weak_coupling());
        // B is real on resonance; a sign change marks a zero of |B|
        let vals: Vec<f64> = (0..1000).map(|i| b_analytic(i as f64 * 0.01, &strong).re).collect();
        let crossing = vals.windows(2).position(|w| w[0] > 0.0 && w[1] <= 0.0).unwrap();
        let later = vals[crossing + 1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(later > 0.1);
    }

    #[test]
    fn long_times_do_not_overflow() {
        let p = lp(0.01, 50.0, 0.0);
        let b = b_analytic(1e4, &p);
        assert!(b.re.is_finite() && b.norm() < 1.0);
    }
}
