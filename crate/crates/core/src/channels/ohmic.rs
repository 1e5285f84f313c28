//! Zero-temperature dephasing rate for the ohmic family
//! J(w) ∝ (w/w_c)^s e^{-w/w_c}.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};

/// Which rate expression to use.
///
/// `Standard` carries the factor `sin(s·arctan(w_c t))`, which changes sign
/// for `s > 2`. `Literal` carries `sin(arctan(w_c t))`; it is non-negative for
/// all `t` and is only kept for comparison runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RateForm {
    #[default]
    Standard,
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OhmicParams {
    s: f64,
    omega_c: f64,
    form: RateForm,
}

impl OhmicParams {
    pub fn new(s: f64, omega_c: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::param("s", format!("ohmicity must be positive and finite, got {s}")));
        }
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::param(
                "omega_c",
                format!("cutoff must be positive and finite, got {omega_c}"),
            ));
        }
        Ok(Self {
            s,
            omega_c,
            form: RateForm::Standard,
        })
    }

    pub fn with_form(mut self, form: RateForm) -> Self {
        self.form = form;
        self
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn form(&self) -> RateForm {
        self.form
    }

    /// Positive times at which the rate changes sign, up to `t_max`.
    /// Roots of `s·arctan(w_c t) = k·pi`; the literal form has none.
    pub fn rate_roots(&self, t_max: f64) -> Vec<f64> {
        if self.form == RateForm::Literal {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut k = 1.0;
        while k * PI / self.s < 0.5 * PI {
            let t = (k * PI / self.s).tan() / self.omega_c;
            if t > t_max {
                break;
            }
            roots.push(t);
            k += 1.0;
        }
        roots
    }
}

/// gamma(t) = w_c Γ(s) sin(s·arctan(w_c t)) / (1 + (w_c t)^2)^{s/2}.
pub fn gamma_ohmic(t: f64, p: &OhmicParams) -> f64 {
    let x = p.omega_c * t;
    let phase = match p.form {
        RateForm::Standard => p.s * x.atan(),
        RateForm::Literal => x.atan(),
    };
    p.omega_c * libm::tgamma(p.s) * phase.sin() / (1.0 + x * x).powf(0.5 * p.s)
}

fn zeta_config(abs_tol: f64) -> QuadConfig {
    QuadConfig {
        abs_tol,
        rel_tol: 0.0,
        max_intervals: 4000,
    }
}

/// zeta(t) = ∫_0^t gamma(v) dv, by adaptive quadrature split at the sign
/// changes of gamma.
pub fn zeta(t: f64, p: &OhmicParams) -> Result<f64> {
    zeta_between(0.0, t, p, 1e-10)
}

/// ∫_a^b gamma(v) dv.
pub fn zeta_between(a: f64, b: f64, p: &OhmicParams, abs_tol: f64) -> Result<f64> {
    if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::param("t", format!("times must be finite and non-negative, got [{a}, {b}]")));
    }
    let roots = p.rate_roots(a.max(b));
    Ok(integrate(|v| gamma_ohmic(v, p), a, b, &roots, zeta_config(abs_tol))?.value)
}

/// zeta at every point of a non-decreasing sequence of times, accumulated
/// interval by interval.
pub fn zeta_on_grid(times: &[f64], p: &OhmicParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in times {
        if t < prev {
            return Err(Error::param("times", "must be non-decreasing and non-negative"));
        }
        acc += zeta_between(prev, t, p, 1e-13)?;
        out.push(acc);
        prev = t;
    }
    Ok(out)
}

/// R(t) = exp(-2 zeta(t)).
pub fn dephase_factor(t: f64, p: &OhmicParams) -> Result<f64> {
    Ok((-2.0 * zeta(t, p)?).exp())
}

/// Closed form of zeta for the standard rate, used to cross-check the
/// quadrature:
/// Γ(s-1)[1 - cos((s-1)θ)/(1+x^2)^{(s-1)/2}], θ = arctan x, x = w_c t,
/// and ½ln(1+x^2) at s = 1.
pub fn zeta_exact(t: f64, p: &OhmicParams) -> f64 {
    let x = p.omega_c * t;
    let s = p.s;
    if (s - 1.0).abs() < 1e-12 {
        return 0.5 * (x * x).ln_1p();
    }
    let theta = x.atan();
    libm::tgamma(s - 1.0) * (1.0 - ((s - 1.0) * theta).cos() / (1.0 + x * x).powf(0.5 * (s - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: f64) -> OhmicParams {
        OhmicParams::new(s, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(OhmicParams::new(0.0, 1.0).is_err());
        assert!(OhmicParams::new(-1.0, 1.0).is_err());
        assert!(OhmicParams::new(1.0, 0.0).is_err());
        assert!(OhmicParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rate_examples() {
        assert_eq!(gamma_ohmic(0.0, &p(2.3)), 0.0);
        assert!((gamma_ohmic(1.0, &p(1.0)) - 0.5).abs() < 1e-15);
        assert!(gamma_ohmic(2.0, &p(3.0)) < 0.0);
        let roots = p(3.0).rate_roots(100.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 3f64.sqrt()).abs() < 1e-12);
        assert!(gamma_ohmic(roots[0], &p(3.0)).abs() < 1e-14);
    }

    #[test]
    fn rate_sign_by_ohmicity() {
        for s in [0.5, 1.0, 2.0, 2.5, 3.0, 4.0] {
            let min = (0..=30_000)
                .map(|i| gamma_ohmic(i as f64 * 1e-3, &p(s)))
                .fold(f64::INFINITY, f64::min);
            if s <= 2.0 {
                assert!(min >= -1e-15, "s={s} min={min}");
            } else {
                assert!(min < 0.0, "s={s}");
            }
        }
    }

    #[test]
    fn literal_rate_never_negative() {
        let lit = p(3.0).with_form(RateForm::Literal);
        assert!(lit.rate_roots(100.0).is_empty());
        assert!((0..1000).all(|i| gamma_ohmic(i as f64 * 0.03, &lit) >= 0.0));
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(0.0, &p(1.0)).unwrap(), 0.0);
        assert!((zeta(1.0, &p(1.0)).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-12);
        assert!((dephase_factor(1.0, &p(1.0)).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(dephase_factor(0.0, &p(3.0)).unwrap(), 1.0);
        // decreases past the root of gamma
        assert!(zeta(3.0, &p(3.0)).unwrap() < zeta(1.5, &p(3.0)).unwrap());
    }

    #[test]
    fn zeta_matches_closed_form() {
        for s in [0.5, 1.0, 1.7, 2.0, 2.5, 3.0, 4.0, 5.0] {
            for omega_c in [0.5, 1.0, 3.0] {
                let q = OhmicParams::new(s, omega_c).unwrap();
                for t in [0.1, 1.0, 2.5, 10.0, 30.0] {
                    let z = zeta(t, &q).unwrap();
                    assert!((z - zeta_exact(t, &q)).abs() < 1e-9, "s={s} wc={omega_c} t={t}");
                }
            }
        }
    }

    #[test]
    fn grid_accumulation_is_additive() {
        let q = p(3.0);
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.15).collect();
        let z = zeta_on_grid(&times, &q).unwrap();
        for (&t, &zg) in times.iter().zip(&z) {
            assert!((zg - zeta(t, &q).unwrap()).abs() < 1e-9);
        }
        let split = zeta(4.0, &q).unwrap() + zeta_between(4.0, 9.0, &q, 1e-12).unwrap();
        assert!((split - zeta(9.0, &q).unwrap()).abs() < 1e-9);
        assert!(zeta_on_grid(&[1.0, 0.5], &q).is_err());
    }
}
