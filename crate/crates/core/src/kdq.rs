//! Kirkwood-Dirac quasiprobability tables and the scalar functionals built on
//! them.
//!
//! For a state `rho` and two orthonormal bases `{|mu>}` and `{|nu>}` the table
//! entry is `P(mu, nu) = <nu|mu><mu|rho|nu>`. Row sums give the Born
//! probabilities in `{|mu>}`, column sums those in `{|nu>}`, and whenever no
//! overlap `<mu|nu>` vanishes the table determines `rho` completely.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{inner, ComplexMatrix, DensityMatrix, OrthonormalBasis, ZERO};

/// Residual imaginary part tolerated on a marginal before it is rejected.
pub const MARGINAL_IMAG_TOL: f64 = 1e-8;
/// Smallest |<mu|nu>| accepted by [`reconstruct_state`].
pub const MIN_OVERLAP: f64 = 1e-8;

/// KD quasiprobabilities of one state, indexed `[mu][nu]`.
#[derive(Clone, Debug, PartialEq)]
pub struct KdTable {
    entries: ComplexMatrix,
    basis_mu: OrthonormalBasis,
    basis_nu: OrthonormalBasis,
}

impl KdTable {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entry(&self, mu: usize, nu: usize) -> Complex64 {
        self.entries[(mu, nu)]
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn basis_mu(&self) -> &OrthonormalBasis {
        &self.basis_mu
    }

    pub fn basis_nu(&self) -> &OrthonormalBasis {
        &self.basis_nu
    }

    pub fn total(&self) -> Complex64 {
        self.entries.as_slice().iter().sum()
    }
}

fn check_dims(rho: &DensityMatrix, a: &OrthonormalBasis, b: &OrthonormalBasis) -> Result<()> {
    if rho.dim() != a.dim() || rho.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} with bases of dimension {} and {}",
            rho.dim(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Fills `out[mu * d + nu]` with `<nu|mu><mu|rho|nu>` without allocating a table.
pub(crate) fn kd_entries_into(
    rho: &ComplexMatrix,
    basis_mu: &[Vec<Complex64>],
    basis_nu: &[Vec<Complex64>],
    out: &mut [Complex64],
) {
    let d = basis_mu.len();
    for (n, nu) in basis_nu.iter().enumerate() {
        let mut rho_nu = [ZERO; 4];
        for (i, slot) in rho_nu.iter_mut().take(d).enumerate() {
            *slot = rho.row(i).iter().zip(nu).map(|(a, b)| a * b).sum();
        }
        for (m, mu) in basis_mu.iter().enumerate() {
            let overlap = inner(nu, mu);
            let mu_rho_nu = inner(mu, &rho_nu[..d]);
            out[m * d + n] = overlap * mu_rho_nu;
        }
    }
}

pub fn kd_table(
    rho: &DensityMatrix,
    basis_mu: &OrthonormalBasis,
    basis_nu: &OrthonormalBasis,
) -> Result<KdTable> {
    check_dims(rho, basis_mu, basis_nu)?;
    let d = rho.dim();
    let mut data = vec![ZERO; d * d];
    kd_entries_into(rho.matrix(), basis_mu.vectors(), basis_nu.vectors(), &mut data);
    Ok(KdTable {
        entries: ComplexMatrix::from_row_major(d, d, data)?,
        basis_mu: basis_mu.clone(),
        basis_nu: basis_nu.clone(),
    })
}

/// Row sums (probabilities in `{|mu>}`) and column sums (probabilities in `{|nu>}`).
pub fn kd_marginals(table: &KdTable) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = table.dim();
    let rows: Vec<Complex64> = (0..d).map(|m| (0..d).map(|n| table.entry(m, n)).sum()).collect();
    let cols: Vec<Complex64> = (0..d).map(|n| (0..d).map(|m| table.entry(m, n)).sum()).collect();
    let residual = rows
        .iter()
        .chain(&cols)
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    if residual > MARGINAL_IMAG_TOL {
        return Err(Error::Marginal { residual });
    }
    Ok((rows.iter().map(|z| z.re).collect(), cols.iter().map(|z| z.re).collect()))
}

/// Inverts the table: `rho = sum P(mu, nu) |mu><nu| / <nu|mu>`.
pub fn reconstruct_state(table: &KdTable) -> Result<DensityMatrix> {
    let d = table.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (a, mu) in table.basis_mu.vectors().iter().enumerate() {
        for (b, nu) in table.basis_nu.vectors().iter().enumerate() {
            let overlap = inner(nu, mu);
            if overlap.norm() <= MIN_OVERLAP {
                return Err(Error::Overlap {
                    overlap: overlap.norm(),
                });
            }
            let w = table.entry(a, b) / overlap;
            m = &m + &ComplexMatrix::outer(mu, nu).scale(w);
        }
    }
    // the exact inverse is Hermitian; drop the anti-Hermitian roundoff
    let herm = (&m + &m.adjoint()).scale_real(0.5);
    DensityMatrix::new(herm)
}

/// sum over the table of |Im P(mu, nu)|.
pub fn imag_l1(table: &KdTable) -> f64 {
    table.entries.as_slice().iter().map(|z| z.im.abs()).sum()
}

/// Interference term sum_{k != i} <mu_i|rho|mu_k><mu_k|nu_j><nu_j|mu_i>.
fn interference(rho: &DensityMatrix, mu: &OrthonormalBasis, i: usize, nu_j: &[Complex64]) -> Complex64 {
    let back = inner(nu_j, mu.vector(i));
    (0..mu.dim())
        .filter(|&k| k != i)
        .map(|k| rho.expectation(mu.vector(i), mu.vector(k)) * inner(mu.vector(k), nu_j) * back)
        .sum()
}

/// KD nonclassicality: the summed moduli of the real and imaginary
/// off-diagonal interference terms, with the projector onto `nu_j` indexed by
/// the outer `j` sum.
pub fn nonclassicality(
    rho: &DensityMatrix,
    basis_mu: &OrthonormalBasis,
    basis_nu: &OrthonormalBasis,
) -> Result<f64> {
    check_dims(rho, basis_mu, basis_nu)?;
    let d = rho.dim();
    let mut total = 0.0;
    for i in 0..d {
        for nu_j in basis_nu.vectors() {
            let z = interference(rho, basis_mu, i, nu_j);
            total += z.re.abs() + z.im.abs();
        }
    }
    Ok(total)
}

/// Variant of [`nonclassicality`] that keeps the `k = i` term and halves the
/// result, i.e. `1/2 sum (|Re P| + |Im P|)` over the whole table. This is the
/// form whose dephasing value is `(1 + R)/2`.
pub fn nonclassicality_full(
    rho: &DensityMatrix,
    basis_mu: &OrthonormalBasis,
    basis_nu: &OrthonormalBasis,
) -> Result<f64> {
    let table = kd_table(rho, basis_mu, basis_nu)?;
    Ok(0.5
        * table
            .entries
            .as_slice()
            .iter()
            .map(|z| z.re.abs() + z.im.abs())
            .sum::<f64>())
}
