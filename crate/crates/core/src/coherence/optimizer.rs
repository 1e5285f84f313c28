use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qmath::{bloch_vectors, product_bloch_basis, bloch_basis, BlochAngles, DensityMatrix, OrthonormalBasis, ZERO};

/// Coarse grid plus compass-search refinement over Bloch angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    grid_points: usize,
    refine_iters: usize,
    tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 24,
            refine_iters: 60,
            tolerance: 1e-8,
        }
    }
}

impl OptimizerConfig {
    pub fn new(grid_points: usize, refine_iters: usize, tolerance: f64) -> Result<Self> {
        if grid_points < 4 {
            return Err(Error::param("grid_points", "must be at least 4"));
        }
        if refine_iters < 1 {
            return Err(Error::param("refine_iters", "must be at least 1"));
        }
        if !(tolerance > 0.0) {
            return Err(Error::param("tolerance", "must be positive"));
        }
        Ok(Self {
            grid_points,
            refine_iters,
            tolerance,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn refine_iters(&self) -> usize {
        self.refine_iters
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

pub(crate) fn basis_from_angles(angles: &[BlochAngles]) -> OrthonormalBasis {
    match angles {
        [a] => bloch_basis(*a),
        [a, b] => product_bloch_basis(*a, *b),
        _ => unreachable!("one or two qubits"),
    }
}

/// Raw imaginary-part sum as a function of the angle vector
/// `(alpha_1, beta_1[, alpha_2, beta_2])`.
struct Objective {
    d: usize,
    rho: [[Complex64; 4]; 4],
    reference: [[Complex64; 4]; 4],
}

impl Objective {
    fn new(rho: &DensityMatrix, reference: &OrthonormalBasis) -> Self {
        let d = rho.dim();
        let mut r = [[ZERO; 4]; 4];
        let mut m = [[ZERO; 4]; 4];
        for i in 0..d {
            for j in 0..d {
                r[i][j] = rho.get(i, j);
                m[i][j] = reference.vector(i)[j];
            }
        }
        Self { d, rho: r, reference: m }
    }

    fn second_basis(&self, x: &[f64]) -> [[Complex64; 4]; 4] {
        let mut nu = [[ZERO; 4]; 4];
        let q1 = bloch_vectors(x[0], x[1]);
        if self.d == 2 {
            nu[0][..2].copy_from_slice(&q1[0]);
            nu[1][..2].copy_from_slice(&q1[1]);
        } else {
            let q2 = bloch_vectors(x[2], x[3]);
            for a in 0..2 {
                for b in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            nu[2 * a + b][2 * i + j] = q1[a][i] * q2[b][j];
                        }
                    }
                }
            }
        }
        nu
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let d = self.d;
        let nu = self.second_basis(x);
        let mut total = 0.0;
        for v in nu.iter().take(d) {
            let mut rho_v = [ZERO; 4];
            for (i, slot) in rho_v.iter_mut().take(d).enumerate() {
                *slot = (0..d).map(|j| self.rho[i][j] * v[j]).sum();
            }
            for mu in self.reference.iter().take(d) {
                let overlap: Complex64 = (0..d).map(|k| v[k].conj() * mu[k]).sum();
                let amp: Complex64 = (0..d).map(|k| mu[k].conj() * rho_v[k]).sum();
                total += (overlap * amp).im.abs();
            }
        }
        total
    }
}

fn grid_point(index: usize, g: usize, nvars: usize, out: &mut [f64]) {
    let alpha_step = PI / (g - 1) as f64;
    let beta_step = 2.0 * PI / g as f64;
    let mut rem = index;
    for k in (0..nvars).rev() {
        let digit = rem % g;
        rem /= g;
        out[k] = if k % 2 == 0 {
            digit as f64 * alpha_step
        } else {
            digit as f64 * beta_step
        };
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

fn canonical_angles(x: &[f64]) -> Vec<BlochAngles> {
    x.chunks(2).map(|p| BlochAngles::canonical(p[0], p[1])).collect()
}

/// Returns the raw maximum, its canonical angles and the number of objective
/// evaluations.
pub(crate) fn maximize(
    rho: &DensityMatrix,
    reference: &OrthonormalBasis,
    cfg: &OptimizerConfig,
    seeds: &[Vec<BlochAngles>],
) -> (f64, Vec<BlochAngles>, usize) {
    let obj = Objective::new(rho, reference);
    let nvars = if obj.d == 2 { 2 } else { 4 };
    let g = cfg.grid_points;
    let total = g.pow(nvars as u32);

    let eval_index = |idx: usize| {
        let mut x = [0.0; 4];
        grid_point(idx, g, nvars, &mut x);
        obj.eval(&x[..nvars])
    };
    // evaluated in parallel, reduced in index order
    let values: Vec<f64> = if total > 4096 {
        (0..total).into_par_iter().map(eval_index).collect()
    } else {
        (0..total).map(eval_index).collect()
    };
    let mut best_idx = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best_idx] {
            best_idx = i;
        }
    }
    let mut x = vec![0.0; nvars];
    grid_point(best_idx, g, nvars, &mut x);
    let mut fx = values[best_idx];
    let mut evaluations = total;

    for seed in seeds {
        let s: Vec<f64> = seed.iter().flat_map(|a| [a.alpha(), a.beta()]).collect();
        let fs = obj.eval(&s);
        evaluations += 1;
        if fs > fx || (fs == fx && lex_less(&s, &x)) {
            x = s;
            fx = fs;
        }
    }

    // compass search: poll +-step along each axis, move to the best strict
    // improvement, halve the steps when none improves
    let mut steps: Vec<f64> = (0..nvars)
        .map(|k| if k % 2 == 0 { PI / (g - 1) as f64 } else { 2.0 * PI / g as f64 })
        .collect();
    for _ in 0..cfg.refine_iters {
        if steps.iter().all(|&s| s < cfg.tolerance) {
            break;
        }
        let mut best_move: Option<(Vec<f64>, f64)> = None;
        for k in 0..nvars {
            for sign in [-1.0, 1.0] {
                let mut y = x.clone();
                y[k] += sign * steps[k];
                let fy = obj.eval(&y);
                evaluations += 1;
                let current = best_move.as_ref().map_or(fx, |(_, f)| *f);
                if fy > current {
                    best_move = Some((y, fy));
                }
            }
        }
        match best_move {
            Some((y, fy)) => {
                x = y;
                fx = fy;
            }
            None => steps.iter_mut().for_each(|s| *s *= 0.5),
        }
    }

    let angles = canonical_angles(&x);
    (fx, angles, evaluations)
}
