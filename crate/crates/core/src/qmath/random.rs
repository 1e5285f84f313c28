//! Seeded random states, unitaries and incoherent channels for property
//! checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{inner, norm, BlochAngles, ComplexMatrix, DensityMatrix, ZERO};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let data = (0..d * d).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(d, d, data).expect("square shape")
}

/// Full-rank mixed state from the Hilbert-Schmidt ensemble.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    let mut m = m.scale_real(1.0 / tr);
    // symmetrize away roundoff so the Hermiticity check is tight
    let h = &m + &m.adjoint();
    m = h.scale_real(0.5);
    DensityMatrix::from_trusted(m)
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Incoherent state with random populations.
pub fn random_diagonal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let raw: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
    DensityMatrix::from_trusted(ComplexMatrix::diag_real(&p))
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for c in &cols {
                let p = inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= p * y;
                }
            }
        }
        let n = norm(&v);
        if n < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Permutation times diagonal phases: maps incoherent states to incoherent states.
pub fn random_incoherent_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, &i) in perm.iter().enumerate() {
        u[(i, j)] = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    }
    u
}

/// Probability vector of length `n` with all entries positive.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-6).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Uniformly drawn canonical Bloch angles.
pub fn random_angles<R: Rng + ?Sized>(rng: &mut R) -> BlochAngles {
    BlochAngles::canonical(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI))
}

/// Diagonal Kraus set {diag(a_k)} with sum_k |a_k|^2 = 1 entrywise: a random dephasing map.
pub fn random_dephasing_kraus<R: Rng + ?Sized>(rng: &mut R, d: usize, count: usize) -> Vec<ComplexMatrix> {
    let mut ops = vec![vec![ZERO; d]; count];
    for i in 0..d {
        let w = random_weights(rng, count);
        for (k, wk) in w.iter().enumerate() {
            ops[k][i] = Complex64::from_polar(wk.sqrt(), rng.random_range(0.0..2.0 * PI));
        }
    }
    ops.iter().map(|a| ComplexMatrix::diag(a)).collect()
}
