//! KD quasiprobabilities of |+> against the computational and y bases.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use kd_coherence::kdq::{imag_l1, kd_marginals, kd_table, nonclassicality_full, reconstruct_state};
use kd_coherence::qmath::{bloch_basis, density_from_pure, BlochAngles, OrthonormalBasis};
use kd_coherence::Complex64;

fn main() -> kd_coherence::Result<()> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let plus = density_from_pure(&[h, h])?;
    let mu = OrthonormalBasis::computational(2)?;
    let nu = bloch_basis(BlochAngles::new(FRAC_PI_2, FRAC_PI_2)?);

    let table = kd_table(&plus, &mu, &nu)?;
    for i in 0..2 {
        for j in 0..2 {
            let p = table.entry(i, j);
            println!("P({i},{j}) = {:+.6} {:+.6}i", p.re, p.im);
        }
    }
    let (pm, pn) = kd_marginals(&table)?;
    println!("marginals: mu {pm:.6?}, nu {pn:.6?}");
    println!("sum |Im P| = {:.6}", imag_l1(&table));
    println!("N_c = {:.6}", nonclassicality_full(&plus, &mu, &nu)?);

    let back = reconstruct_state(&table)?;
    println!("reconstructed rho_01 = {:.6}", back.get(0, 1));
    Ok(())
}
