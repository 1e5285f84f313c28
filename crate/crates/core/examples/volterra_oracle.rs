//! Amplitude damping: the Volterra integro-differential solution against the
//! closed-form B(t), and the collapse-revival it produces at strong coupling.

use kd_coherence::channels::{b_analytic, b_volterra, LorentzParams};
use kd_coherence::nonmarkov::n_ckd_damping_analytic;

fn main() -> kd_coherence::Result<()> {
    for (g, k, w) in [(0.25, 1.0, 0.0), (5.0, 1.0, 0.0), (1.0, 1.0, 0.5)] {
        let p = LorentzParams::new(g, k, w)?;
        let h = 1e-3 / k;
        let steps = 10_000;
        let numeric = b_volterra(h, steps, &p)?;
        let dev = numeric
            .iter()
            .enumerate()
            .map(|(i, b)| (b - b_analytic(i as f64 * h, &p)).norm())
            .fold(0.0, f64::max);
        println!(
            "gamma0={g} kappa={k} varpi={w}: max|B_volterra - B| = {dev:.2e}, weak coupling {}, nCkd(30) = {:.6e}",
            p.is_weak_coupling(),
            n_ckd_damping_analytic(&p, 30.0)?
        );
    }

    let p = LorentzParams::new(5.0, 1.0, 0.0)?;
    println!("\nt      |B(t)|   (gamma0=5, kappa=1)");
    for i in 0..=20 {
        let t = 0.25 * i as f64;
        println!("{t:5.2}  {:.6}", b_analytic(t, &p).norm());
    }
    Ok(())
}
