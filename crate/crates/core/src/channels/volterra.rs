//! Numerical solution of dB/dt = -∫_0^t G(t - t1) B(t1) dt1, B(0) = 1.
//!
//! The memory integral uses the trapezoidal rule on the uniform grid; each
//! step predicts with second-order Adams-Bashforth and corrects with the
//! trapezoidal rule for dB/dt, iterating the corrector to convergence.

use num_complex::Complex64;

use super::lorentz::{kernel_lorentzian, LorentzParams};
use crate::error::{Error, Result};

/// Largest accepted `h * kappa` for the Lorentzian kernel.
pub const MAX_STEP_KAPPA: f64 = 0.5;

const CORRECTOR_TOL: f64 = 1e-15;
const CORRECTOR_ITERS: usize = 5;

/// Holds the solution history of one run; not meant to be shared.
pub struct VolterraSolver {
    h: f64,
    kernel: Vec<Complex64>,
    b: Vec<Complex64>,
    /// I_n = ∫_0^{t_n} G(t_n - t1) B(t1) dt1, so dB/dt(t_n) = -I_n.
    memory: Vec<Complex64>,
}

impl VolterraSolver {
    /// `kernel` is sampled at `k h` for `k = 0..=steps`.
    pub fn new(h: f64, steps: usize, kernel: impl Fn(f64) -> Complex64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::param("h", format!("step must be positive and finite, got {h}")));
        }
        let kernel = (0..=steps).map(|k| kernel(k as f64 * h)).collect();
        let mut b = Vec::with_capacity(steps + 1);
        let mut memory = Vec::with_capacity(steps + 1);
        b.push(Complex64::new(1.0, 0.0));
        memory.push(Complex64::new(0.0, 0.0));
        Ok(Self { h, kernel, b, memory })
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    pub fn solution(&self) -> &[Complex64] {
        &self.b
    }

    pub fn into_solution(self) -> Vec<Complex64> {
        self.b
    }

    /// Steps still available with the sampled kernel.
    pub fn remaining(&self) -> usize {
        self.kernel.len() - self.b.len()
    }

    /// Advances one step and returns the new value.
    pub fn step(&mut self) -> Result<Complex64> {
        let n = self.b.len() - 1;
        if n + 1 >= self.kernel.len() {
            return Err(Error::param("steps", "kernel samples exhausted"));
        }
        let h = self.h;
        let g = &self.kernel;
        // known part of I_{n+1}: trapezoid over t1 in [0, t_n]
        let mut history = 0.5 * g[n + 1] * self.b[0];
        for j in 1..=n {
            history += g[n + 1 - j] * self.b[j];
        }
        history *= h;

        let bn = self.b[n];
        let in_ = self.memory[n];
        let mut next = if n == 0 {
            bn - h * in_
        } else {
            bn - 0.5 * h * (3.0 * in_ - self.memory[n - 1])
        };
        let mut mem_next = history + 0.5 * h * g[0] * next;
        for _ in 0..CORRECTOR_ITERS {
            let corrected = bn - 0.5 * h * (in_ + mem_next);
            let change = (corrected - next).norm();
            next = corrected;
            mem_next = history + 0.5 * h * g[0] * next;
            if change <= CORRECTOR_TOL * next.norm().max(1.0) {
                break;
            }
        }
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::StepSize { product: h * g[0].norm().sqrt() });
        }
        self.b.push(next);
        self.memory.push(mem_next);
        Ok(next)
    }

    pub fn run(mut self) -> Result<Vec<Complex64>> {
        while self.remaining() > 0 {
            self.step()?;
        }
        Ok(self.b)
    }
}

/// B on the grid `t_k = k h`, `k = 0..=steps`, for the Lorentzian kernel.
pub fn b_volterra(h: f64, steps: usize, p: &LorentzParams) -> Result<Vec<Complex64>> {
    if h * p.kappa() > MAX_STEP_KAPPA {
        return Err(Error::StepSize { product: h * p.kappa() });
    }
    VolterraSolver::new(h, steps, |tau| kernel_lorentzian(tau, p))?.run()
}
