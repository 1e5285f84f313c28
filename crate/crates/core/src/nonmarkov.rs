//! Coherence trajectories and the non-Markovianity measure
//! N = ∫_{dC/dt > 0} dC/dt dt, realised on a sampled trajectory as the sum of
//! its rises (exact for the piecewise-linear interpolant).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::{
    b_analytic, gamma_ohmic, modulus_slope_numerator, zeta, zeta_between, ChannelKind, ChannelModel, LorentzParams,
    OhmicParams, TwoQubitDephasingParams,
};
use crate::coherence::{ckd, ckd_fixed, l1_coherence, OptimizerConfig};
use crate::error::{Error, Result};
use crate::kdq::nonclassicality_full;
use crate::qmath::{bloch_basis, density_from_pure, product_bloch_basis, BlochAngles, DensityMatrix, OrthonormalBasis};
use crate::quad::{integrate, QuadConfig};

pub const MIN_SAMPLES: usize = 16;

/// Uniform grid t_i = i t_max / (n - 1), i = 0..n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::param("t_max", format!("must be positive and finite, got {t_max}")));
        }
        if n < MIN_SAMPLES {
            return Err(Error::param("n", format!("need at least {MIN_SAMPLES} samples, got {n}")));
        }
        Ok(Self { t_max, n })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.n - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.t_max
        } else {
            i as f64 * self.step()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.time(i)).collect()
    }
}

/// How the second KD basis is chosen at each time.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisMode {
    /// One angle pair per qubit, held fixed along the trajectory.
    Fixed(Vec<BlochAngles>),
    /// Maximised independently at each sample.
    Optimized,
}

impl BasisMode {
    /// Fixed bases for which the closed-form coherences hold with the
    /// fiducial initial states: the sigma_y basis for one qubit, x ⊗ x for
    /// two-qubit dephasing and y ⊗ x for two-qubit damping.
    pub fn fixed_default(kind: ChannelKind) -> Self {
        let x = BlochAngles::new(FRAC_PI_2, 0.0).expect("valid angles");
        let y = BlochAngles::new(FRAC_PI_2, FRAC_PI_2).expect("valid angles");
        Self::Fixed(match kind {
            ChannelKind::Dephase1Q | ChannelKind::Damp1Q => vec![y],
            ChannelKind::Dephase2Q => vec![x, x],
            ChannelKind::Damp2Q => vec![y, x],
        })
    }

    fn basis(&self, dim: usize) -> Result<Option<OrthonormalBasis>> {
        match self {
            Self::Optimized => Ok(None),
            Self::Fixed(a) => match (dim, a.as_slice()) {
                (2, [a]) => Ok(Some(bloch_basis(*a))),
                (4, [a, b]) => Ok(Some(product_bloch_basis(*a, *b))),
                _ => Err(Error::Dimension(format!(
                    "{} fixed angle pairs given for dimension {dim}",
                    a.len()
                ))),
            },
        }
    }
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Optimized => f.write_str("optimized"),
            Self::Fixed(a) => {
                f.write_str("fixed(")?;
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "alpha={:.6}, beta={:.6}", x.alpha(), x.beta())?;
                }
                f.write_str(")")
            }
        }
    }
}

/// |+> for one qubit, (|00> + |11>)/sqrt(2) for two.
pub fn fiducial_state(kind: ChannelKind) -> DensityMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let psi = if kind.dim() == 2 { vec![h, h] } else { vec![h, z, z, h] };
    density_from_pure(&psi).expect("normalized fiducial state")
}

#[derive(Clone, Debug)]
pub struct CoherenceTrajectory {
    pub grid: TimeGrid,
    pub channel: ChannelModel,
    pub initial_state: DensityMatrix,
    pub basis_mode: BasisMode,
    pub ckd: Vec<f64>,
    pub l1: Vec<f64>,
    /// Nonclassicality ½ Σ (|Re P| + |Im P|) in the same pair of bases as `ckd`.
    pub nc: Vec<f64>,
    /// R(t) for dephasing, |B(t)| for damping.
    pub driver: Vec<f64>,
}

impl CoherenceTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }
}

pub fn trajectory(
    channel: &ChannelModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    mode: &BasisMode,
    cfg: &OptimizerConfig,
) -> Result<CoherenceTrajectory> {
    let d = channel.dim();
    let fixed = mode.basis(d)?;
    let reference = OrthonormalBasis::computational(d)?;
    let evolution = channel.evolve_grid(rho0, &grid.times())?;

    let sample = |rho: &DensityMatrix| -> Result<(f64, f64, f64)> {
        let (c, nu) = match &fixed {
            Some(nu) => (ckd_fixed(rho, &reference, nu)?, nu.clone()),
            None => {
                let res = ckd(rho, &reference, cfg)?;
                (res.value, res.basis())
            }
        };
        Ok((c, l1_coherence(rho, &reference)?, nonclassicality_full(rho, &reference, &nu)?))
    };
    let values: Vec<(f64, f64, f64)> = if fixed.is_some() {
        evolution.states.iter().map(sample).collect::<Result<_>>()?
    } else {
        evolution.states.par_iter().map(sample).collect::<Result<_>>()?
    };

    Ok(CoherenceTrajectory {
        grid: *grid,
        channel: *channel,
        initial_state: rho0.clone(),
        basis_mode: mode.clone(),
        ckd: values.iter().map(|v| v.0).collect(),
        l1: values.iter().map(|v| v.1).collect(),
        nc: values.iter().map(|v| v.2).collect(),
        driver: evolution.driver,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variation {
    pub total: f64,
    /// Maximal runs of strictly increasing samples, as (t_start, t_end).
    pub ascending_intervals: Vec<(f64, f64)>,
}

/// Sum of the rises of `values` sampled at `times`.
pub fn positive_variation(values: &[f64], times: &[f64]) -> Result<Variation> {
    if values.len() != times.len() {
        return Err(Error::Dimension(format!("{} values for {} times", values.len(), times.len())));
    }
    if values.len() < 2 {
        return Err(Error::param("values", "need at least two samples"));
    }
    let mut total = 0.0;
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..values.len() - 1 {
        let rise = values[i + 1] - values[i];
        if rise > 0.0 {
            total += rise;
            run_start.get_or_insert(i);
        } else if let Some(s) = run_start.take() {
            intervals.push((times[s], times[i]));
        }
    }
    if let Some(s) = run_start {
        intervals.push((times[s], times[values.len() - 1]));
    }
    Ok(Variation {
        total,
        ascending_intervals: intervals,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub n_ckd: f64,
    pub n_cl1: f64,
    pub ascending_intervals: Vec<(f64, f64)>,
}

impl MeasureResult {
    pub fn from_trajectory(traj: &CoherenceTrajectory) -> Result<Self> {
        let times = traj.times();
        let c = positive_variation(&traj.ckd, &times)?;
        let l = positive_variation(&traj.l1, &times)?;
        Ok(Self {
            n_ckd: c.total,
            n_cl1: l.total,
            ascending_intervals: c.ascending_intervals,
        })
    }
}

pub fn n_ckd(
    channel: &ChannelModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    mode: &BasisMode,
    cfg: &OptimizerConfig,
) -> Result<MeasureResult> {
    MeasureResult::from_trajectory(&trajectory(channel, rho0, grid, mode, cfg)?)
}

/// Which initial states the measure is maximised over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialStateMode {
    /// |+> or the Bell state |Φ+>.
    Fiducial,
    /// Pure single-qubit states on a polar x azimuthal grid with the given
    /// number of points per angle; the poles (incoherent) are skipped.
    BlochGrid(usize),
}

/// The measure maximised over initial states, with the maximising state.
pub fn n_ckd_over_initial_states(
    channel: &ChannelModel,
    grid: &TimeGrid,
    mode: &BasisMode,
    cfg: &OptimizerConfig,
    states: InitialStateMode,
) -> Result<(MeasureResult, DensityMatrix)> {
    match states {
        InitialStateMode::Fiducial => {
            let rho0 = fiducial_state(channel.kind());
            Ok((n_ckd(channel, &rho0, grid, mode, cfg)?, rho0))
        }
        InitialStateMode::BlochGrid(points) => {
            if channel.dim() != 2 {
                return Err(Error::Dimension("initial-state grid search is single-qubit only".into()));
            }
            if points < 2 {
                return Err(Error::param("points", "need at least 2 points per angle"));
            }
            let mut candidates = Vec::new();
            for i in 1..=points {
                let theta = PI * i as f64 / (points + 1) as f64;
                for j in 0..points {
                    let phi = 2.0 * PI * j as f64 / points as f64;
                    let psi = [
                        Complex64::new((0.5 * theta).cos(), 0.0),
                        Complex64::from_polar((0.5 * theta).sin(), phi),
                    ];
                    candidates.push(density_from_pure(&psi)?);
                }
            }
            let results: Vec<MeasureResult> = candidates
                .par_iter()
                .map(|rho| n_ckd(channel, rho, grid, mode, cfg))
                .collect::<Result<_>>()?;
            let mut best = 0;
            for (k, r) in results.iter().enumerate() {
                if r.n_ckd > results[best].n_ckd {
                    best = k;
                }
            }
            Ok((results[best].clone(), candidates.swap_remove(best)))
        }
    }
}

/// -∫_{gamma<0} gamma(t) R(t) dt over [0, t_max] for the fiducial |+> state,
/// by quadrature over the intervals where the rate is negative.
pub fn n_ckd_dephasing_analytic(p: &OhmicParams, t_max: f64) -> Result<f64> {
    if !(t_max > 0.0) {
        return Err(Error::param("t_max", "must be positive"));
    }
    let mut cuts = vec![0.0];
    cuts.extend(p.rate_roots(t_max));
    cuts.push(t_max);
    let cfg = QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_intervals: 2000,
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a || gamma_ohmic(0.5 * (a + b), p) >= 0.0 {
            continue;
        }
        let za = zeta(a, p)?;
        let f = |t: f64| {
            let z = za + zeta_between(a, t, p, 1e-13).unwrap_or(f64::NAN);
            -gamma_ohmic(t, p) * (-2.0 * z).exp()
        };
        let v = integrate(f, a, b, &[], cfg)?.value;
        if !v.is_finite() {
            return Err(Error::Integration { a, b, estimate: f64::NAN });
        }
        total += v;
    }
    Ok(total)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-10 * mid.abs().max(1e-300) {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// ½ Σ rises of |B(t)| on [0, t_max]; turning points (smooth extrema and
/// zeros of B) are bracketed on a scan and refined by bisection on
/// Re(conj(B) dB/dt).
pub fn n_ckd_damping_analytic(p: &LorentzParams, t_max: f64) -> Result<f64> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::param("t_max", "must be positive and finite"));
    }
    let g = |t: f64| modulus_slope_numerator(t, p);
    let rate = p.delta().norm().max(p.kappa()).max(p.varpi().abs()).max(1.0 / t_max);
    let n_scan = ((t_max * rate * 200.0).ceil() as usize).max(4000);
    let h = t_max / n_scan as f64;

    // sign changes of g, in order
    let mut turns = Vec::new();
    let mut prev_t = 0.5 * h;
    let mut prev_g = g(prev_t);
    for k in 1..=n_scan {
        let t = if k == n_scan { t_max } else { (k as f64 + 0.5) * h };
        let gt = g(t);
        if (gt > 0.0) != (prev_g > 0.0) && gt != 0.0 && prev_g != 0.0 {
            turns.push(bisect(g, prev_t, t.min(t_max)));
        }
        prev_t = t;
        prev_g = gt;
    }
    let abs_b = |t: f64| b_analytic(t, p).norm();
    let mut points = vec![0.0];
    points.extend(turns);
    points.push(t_max);
    let mut total = 0.0;
    for w in points.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if g(mid) > 0.0 {
            total += (abs_b(w[1]) - abs_b(w[0])).max(0.0);
        }
    }
    Ok(0.5 * total)
}

/// A parameter that a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    S,
    OmegaC,
    Gamma0,
    Kappa,
    Varpi,
    KappaOverGamma0,
    H1,
    H2,
    Lambda,
}

impl SweepParam {
    pub const ALL: [SweepParam; 9] = [
        Self::S,
        Self::OmegaC,
        Self::Gamma0,
        Self::Kappa,
        Self::Varpi,
        Self::KappaOverGamma0,
        Self::H1,
        Self::H2,
        Self::Lambda,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::S => "s",
            Self::OmegaC => "omega-c",
            Self::Gamma0 => "gamma0",
            Self::Kappa => "kappa",
            Self::Varpi => "varpi",
            Self::KappaOverGamma0 => "kappa-over-gamma0",
            Self::H1 => "h1",
            Self::H2 => "h2",
            Self::Lambda => "lambda",
        }
    }

    /// `base` with this parameter replaced by `value`.
    pub fn apply(&self, base: &ChannelModel, value: f64) -> Result<ChannelModel> {
        let ohmic = |p: &OhmicParams| -> Result<OhmicParams> {
            let q = match self {
                Self::S => OhmicParams::new(value, p.omega_c()),
                Self::OmegaC => OhmicParams::new(p.s(), value),
                _ => return Ok(*p),
            }?;
            Ok(q.with_form(p.form()))
        };
        let lorentz = |p: &LorentzParams| match self {
            Self::Gamma0 => LorentzParams::new(value, p.kappa(), p.varpi()),
            Self::Kappa => LorentzParams::new(p.gamma0(), value, p.varpi()),
            Self::Varpi => LorentzParams::new(p.gamma0(), p.kappa(), value),
            Self::KappaOverGamma0 => {
                if !(value > 0.0) {
                    return Err(Error::param("kappa-over-gamma0", format!("must be positive, got {value}")));
                }
                LorentzParams::new(p.gamma0(), value * p.gamma0(), p.varpi())
            }
            _ => Ok(*p),
        };
        let applies = match base.kind() {
            ChannelKind::Dephase1Q => matches!(self, Self::S | Self::OmegaC),
            ChannelKind::Dephase2Q => matches!(self, Self::S | Self::OmegaC | Self::H1 | Self::H2 | Self::Lambda),
            ChannelKind::Damp1Q | ChannelKind::Damp2Q => {
                matches!(self, Self::Gamma0 | Self::Kappa | Self::Varpi | Self::KappaOverGamma0)
            }
        };
        if !applies {
            return Err(Error::param(
                "param",
                format!("'{}' is not a parameter of {}", self.name(), base.kind()),
            ));
        }
        Ok(match base {
            ChannelModel::Dephase1Q(p) => ChannelModel::Dephase1Q(ohmic(p)?),
            ChannelModel::Damp1Q(p) => ChannelModel::Damp1Q(lorentz(p)?),
            ChannelModel::Damp2Q(p) => ChannelModel::Damp2Q(lorentz(p)?),
            ChannelModel::Dephase2Q(p) => {
                let (mut h1, mut h2, mut l) = (p.h1(), p.h2(), p.lambda());
                match self {
                    Self::H1 => h1 = value,
                    Self::H2 => h2 = value,
                    Self::Lambda => l = value,
                    _ => {}
                }
                ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(h1, h2, l, ohmic(p.ohmic())?)?)
            }
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::param("param", format!("unknown sweep parameter '{s}'")))
    }
}

/// Evenly spaced values `from..=to` in `steps` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRange {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(from: f64, to: f64, steps: usize) -> Result<Self> {
        if !from.is_finite() || !to.is_finite() {
            return Err(Error::param("from/to", "must be finite"));
        }
        if steps == 0 || (steps == 1 && from != to) {
            return Err(Error::param("steps", "need at least 2 points for a non-degenerate range"));
        }
        if to < from {
            return Err(Error::param("to", format!("must not be below from ({to} < {from})")));
        }
        Ok(Self { from, to, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.to } else { self.from + i as f64 * h })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub result: std::result::Result<MeasureResult, Error>,
}

/// One measure evaluation per parameter value, rows in parameter order. Rows
/// run in parallel; a failing row is recorded and the sweep continues.
pub fn sweep(
    base: &ChannelModel,
    param: SweepParam,
    range: &SweepRange,
    grid: &TimeGrid,
    mode: &BasisMode,
    cfg: &OptimizerConfig,
    states: InitialStateMode,
) -> Result<Vec<SweepRow>> {
    // reject parameter/channel mismatches up front rather than per row
    param.apply(base, range.from).map(|_| ()).or_else(|e| match e {
        Error::Param { ref name, .. } if name == "param" => Err(e),
        _ => Ok(()),
    })?;
    Ok(range
        .values()
        .into_par_iter()
        .map(|value| SweepRow {
            value,
            result: param
                .apply(base, value)
                .and_then(|m| n_ckd_over_initial_states(&m, grid, mode, cfg, states).map(|r| r.0)),
        })
        .collect())
}
