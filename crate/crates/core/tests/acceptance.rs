//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`cargo test --test acceptance`) and exits non-zero if any criterion fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use kd_coherence::channels::{
    b_analytic, zeta_exact, ChannelKind, ChannelModel, LorentzParams, OhmicParams, TwoQubitDephasingParams,
};
use kd_coherence::coherence::OptimizerConfig;
use kd_coherence::nonmarkov::{
    fiducial_state, n_ckd, n_ckd_dephasing_analytic, sweep, trajectory, BasisMode, InitialStateMode, SweepParam,
    SweepRange, TimeGrid,
};
use kd_coherence::suites::{run_suite, volterra_deviation, Suite, DEFAULT_SEED, VOLTERRA_CASES, VOLTERRA_TOL};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("{what} took {took:.1?}, limit {limit:?}"))
}

fn ohm(s: f64) -> OhmicParams {
    OhmicParams::new(s, 1.0).unwrap()
}

fn r_exact(t: f64, s: f64) -> f64 {
    (-2.0 * zeta_exact(t, &ohm(s))).exp()
}

fn fixed(kind: ChannelKind) -> BasisMode {
    BasisMode::fixed_default(kind)
}

fn measure(m: ChannelModel, grid: &TimeGrid) -> Result<kd_coherence::nonmarkov::MeasureResult, String> {
    n_ckd(&m, &fiducial_state(m.kind()), grid, &fixed(m.kind()), &OptimizerConfig::default()).map_err(|e| e.to_string())
}

/// 1. Single-qubit dephasing, optimised basis: C_KD(t) = R(t)/2.
fn closed_form_dephasing() -> Outcome {
    let start = Instant::now();
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let mut worst = 0.0f64;
    for s in [1.0, 3.0] {
        let m = ChannelModel::Dephase1Q(ohm(s));
        let tr = trajectory(&m, &fiducial_state(m.kind()), &grid, &BasisMode::Optimized, &OptimizerConfig::default())
            .map_err(|e| e.to_string())?;
        for (t, c) in grid.times().into_iter().zip(&tr.ckd) {
            worst = worst.max((c - 0.5 * r_exact(t, s)).abs());
        }
    }
    ensure(worst <= 1e-6, format!("max |C_KD - R/2| = {worst:.3e}"))?;
    within(start, Duration::from_secs(30), "trajectories")?;
    Ok(format!("max |C_KD - R/2| = {worst:.2e} over 2 x 4096 samples in {:.1?}", start.elapsed()))
}

/// 2. Dephasing threshold, sweep peak and grid-vs-quadrature agreement.
fn dephasing_threshold() -> Outcome {
    let start = Instant::now();
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let mut parts = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        let v = measure(ChannelModel::Dephase1Q(ohm(s)), &grid)?.n_ckd;
        ensure(v <= 1e-8, format!("s={s}: nCkd = {v:.3e} > 1e-8"))?;
    }
    for s in [2.5, 3.0, 4.0] {
        let v = measure(ChannelModel::Dephase1Q(ohm(s)), &grid)?.n_ckd;
        ensure(v > 1e-4, format!("s={s}: nCkd = {v:.3e} <= 1e-4"))?;
        parts.push(format!("s={s}: {v:.4e}"));
    }
    let rows = sweep(
        &ChannelModel::Dephase1Q(ohm(1.0)),
        SweepParam::S,
        &SweepRange::new(0.5, 5.0, 46).unwrap(),
        &grid,
        &fixed(ChannelKind::Dephase1Q),
        &OptimizerConfig::default(),
        InitialStateMode::Fiducial,
    )
    .map_err(|e| e.to_string())?;
    let mut peak = (0.0, f64::NEG_INFINITY);
    for row in &rows {
        let v = row.result.as_ref().map_err(|e| e.to_string())?.n_ckd;
        if v > peak.1 {
            peak = (row.value, v);
        }
    }
    ensure((2.6..=3.4).contains(&peak.0), format!("sweep peak at s = {}", peak.0))?;
    within(start, Duration::from_secs(120), "threshold checks and 46-point sweep")?;

    let fine = TimeGrid::new(30.0, 10_000).unwrap();
    for s in [2.5, 3.0, 4.0] {
        let g = measure(ChannelModel::Dephase1Q(ohm(s)), &fine)?.n_ckd;
        let a = n_ckd_dephasing_analytic(&ohm(s), 30.0).map_err(|e| e.to_string())?;
        ensure((g / a - 1.0).abs() < 5e-3, format!("s={s}: grid {g:.6e} vs quadrature {a:.6e}"))?;
    }
    Ok(format!("{}; peak at s = {:.1} ({:.4e}); grid vs quadrature within 0.5%", parts.join(", "), peak.0, peak.1))
}

/// 3. nCl1 / nCkd = 2 for single-qubit dephasing at s = 3.
fn measure_ratio() -> Outcome {
    let r = measure(ChannelModel::Dephase1Q(ohm(3.0)), &TimeGrid::new(30.0, 4096).unwrap())?;
    let ratio = r.n_cl1 / r.n_ckd;
    ensure((ratio - 2.0).abs() <= 0.02, format!("ratio {ratio}"))?;
    Ok(format!("nCl1/nCkd = {ratio:.6}"))
}

/// 4. Volterra solution vs closed-form amplitude.
fn volterra_oracle() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (g, k, w) in VOLTERRA_CASES {
        let p = LorentzParams::new(g, k, w).unwrap();
        let (dev, dev_literal) = volterra_deviation(&p).map_err(|e| e.to_string())?;
        ensure(dev <= VOLTERRA_TOL, format!("({g},{k},{w}): deviation {dev:.3e}"))?;
        // the literal sinh coefficient violates B'(0) = 0 and misses the oracle
        ensure(dev_literal > 1e-2, format!("({g},{k},{w}): literal form deviates only {dev_literal:.3e}"))?;
        let h = 1e-6;
        let slope = ((b_analytic(h, &p) - 1.0) / h).norm();
        ensure(slope < 1e-5, format!("({g},{k},{w}): initial slope {slope:.3e}"))?;
        parts.push(format!("{dev:.1e}"));
    }
    within(start, Duration::from_secs(60), "Volterra oracle")?;
    Ok(format!("max deviations {}; B'(0) = 0", parts.join(", ")))
}

/// 5. Damping threshold on resonance: Markovian iff kappa >= 2 gamma0.
fn damping_threshold() -> Outcome {
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let mut parts = Vec::new();
    for ratio in [2.0, 2.5, 4.0, 0.2, 0.6, 1.0] {
        let p = LorentzParams::resonant_ratio(1.0, ratio).unwrap();
        let v = measure(ChannelModel::Damp1Q(p), &grid)?.n_ckd;
        if ratio >= 2.0 {
            ensure(v <= 1e-8, format!("kappa/gamma0={ratio}: nCkd = {v:.3e}"))?;
        } else {
            ensure(v > 1e-4, format!("kappa/gamma0={ratio}: nCkd = {v:.3e}"))?;
        }
        parts.push(format!("{ratio}: {v:.3e}"));
    }
    Ok(parts.join(", "))
}

fn bell() -> kd_coherence::qmath::DensityMatrix {
    let h = kd_coherence::Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = kd_coherence::Complex64::new(0.0, 0.0);
    kd_coherence::qmath::density_from_pure(&[h, z, z, h]).unwrap()
}

/// 6. Two-qubit dephasing: C_KD = |R^4 sin((h1+h2)t)|/4.
fn two_qubit_dephasing() -> Outcome {
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let mut worst = 0.0f64;
    for s in [1.0, 3.0] {
        for lambda in [0.0, 0.3] {
            let m = ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(0.2, 0.4, lambda, ohm(s)).unwrap());
            let tr = trajectory(&m, &bell(), &grid, &fixed(m.kind()), &OptimizerConfig::default())
                .map_err(|e| e.to_string())?;
            for (t, c) in grid.times().into_iter().zip(&tr.ckd) {
                let expect = 0.25 * (r_exact(t, s).powi(4) * (0.6 * t).sin()).abs();
                worst = worst.max((c - expect).abs());
            }
        }
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:.3e}"))?;
    let m = ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(0.2, 0.4, 0.0, ohm(1.0)).unwrap());
    let v = measure(m, &grid)?.n_ckd;
    ensure(v > 1e-4, format!("nCkd at s=1 is {v:.3e}"))?;
    Ok(format!("max deviation {worst:.2e}; nCkd(s=1) = {v:.4e}"))
}

/// 7. Two-qubit damping: C_KD = |B|^2/4, non-Markovian iff kappa/gamma0 < 2.
fn two_qubit_damping() -> Outcome {
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for ratio in [0.2, 0.6, 1.0, 1.5, 2.0, 2.5, 4.0] {
        let p = LorentzParams::resonant_ratio(1.0, ratio).unwrap();
        let m = ChannelModel::Damp2Q(p);
        let tr = trajectory(&m, &bell(), &grid, &fixed(m.kind()), &OptimizerConfig::default())
            .map_err(|e| e.to_string())?;
        for (t, c) in grid.times().into_iter().zip(&tr.ckd) {
            worst = worst.max((c - 0.25 * b_analytic(t, &p).norm_sqr()).abs());
        }
        let v = measure(m, &grid)?.n_ckd;
        if ratio < 2.0 {
            ensure(v > 1e-8, format!("kappa/gamma0={ratio}: variation {v:.3e}"))?;
        } else {
            ensure(v <= 1e-8, format!("kappa/gamma0={ratio}: variation {v:.3e}"))?;
        }
        parts.push(format!("{ratio}: {v:.2e}"));
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.2e}; variation {}", parts.join(", ")))
}

/// 8. Resource-theory properties.
fn property_suites() -> Outcome {
    let mut parts = Vec::new();
    for suite in [Suite::A1, Suite::A3, Suite::A4, Suite::A5, Suite::A2] {
        let report = run_suite(suite, DEFAULT_SEED).map_err(|e| e.to_string())?;
        ensure(report.passed(), format!("{report}"))?;
        let cases: usize = report.checks.iter().map(|c| c.cases).sum();
        let failures: usize = report.checks.iter().filter(|c| c.asserted).map(|c| c.failures).sum();
        if suite == Suite::A2 {
            parts.push(format!("a2 report: {}", report.checks[0].detail));
        } else {
            parts.push(format!("{suite} {cases} cases/{failures} violations"));
        }
    }
    Ok(parts.join("; "))
}

/// 9. KD table invariants.
fn kd_invariants() -> Outcome {
    let start = Instant::now();
    let report = run_suite(Suite::KdInvariants, DEFAULT_SEED).map_err(|e| e.to_string())?;
    ensure(report.passed(), format!("{report}"))?;
    within(start, Duration::from_secs(60), "kd-invariants")?;
    let details: Vec<String> = report.checks.iter().map(|c| format!("{}: {}", c.label, c.detail)).collect();
    Ok(format!("10^4 draws in {:.1?}; {}", start.elapsed(), details.join("; ")))
}

/// Not a criterion: the two-qubit dephasing sweep beyond s = 3.
fn two_qubit_sweep_report() -> String {
    let grid = TimeGrid::new(30.0, 4096).unwrap();
    let base = ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(0.2, 0.4, 0.0, ohm(1.0)).unwrap());
    let rows = sweep(
        &base,
        SweepParam::S,
        &SweepRange::new(0.5, 5.0, 10).unwrap(),
        &grid,
        &fixed(ChannelKind::Dephase2Q),
        &OptimizerConfig::default(),
        InitialStateMode::Fiducial,
    )
    .unwrap();
    let vals: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.value, r.result.as_ref().map_or(f64::NAN, |m| m.n_ckd))).collect();
    let peak = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    let beyond = vals.iter().filter(|v| v.0 > 3.0).map(|v| v.1 / peak).fold(0.0, f64::max);
    let listed: Vec<String> = vals.iter().map(|(s, v)| format!("s={s}: {v:.3e}")).collect();
    format!("{}; max over s > 3 relative to peak = {beyond:.3e}", listed.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 closed-form dephasing trajectory", closed_form_dephasing),
        ("2 dephasing threshold and sweep peak", dephasing_threshold),
        ("3 measure ratio nCl1/nCkd", measure_ratio),
        ("4 Volterra oracle", volterra_oracle),
        ("5 damping threshold", damping_threshold),
        ("6 two-qubit dephasing closed form", two_qubit_dephasing),
        ("7 two-qubit damping closed form", two_qubit_damping),
        ("8 property suites", property_suites),
        ("9 KD engine invariants", kd_invariants),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{:.1?}]: {detail}", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{:.1?}]: {why}", start.elapsed());
            }
        }
    }
    println!("INFO two-qubit dephasing nCkd across s (not asserted): {}", two_qubit_sweep_report());
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
