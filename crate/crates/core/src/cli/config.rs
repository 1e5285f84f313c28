//! Run configuration: an optional flat `key = value` file overlaid by
//! command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::channels::{ChannelKind, ChannelModel, LorentzParams, OhmicParams, RateForm, TwoQubitDephasingParams};
use crate::coherence::OptimizerConfig;
use crate::nonmarkov::{BasisMode, InitialStateMode, SweepParam, SweepRange, TimeGrid};

pub const DEFAULT_T_MAX: f64 = 30.0;
pub const DEFAULT_N: usize = 4096;

/// Every key accepted in a config file (flag names with '-' -> '_').
pub const KEYS: [&str; 23] = [
    "channel",
    "s",
    "omega_c",
    "rate_form",
    "gamma0",
    "kappa",
    "varpi",
    "h1",
    "h2",
    "lambda",
    "t_max",
    "n",
    "basis",
    "param",
    "from",
    "to",
    "steps",
    "out",
    "svg",
    "grid_points",
    "refine_iters",
    "tolerance",
    "initial_grid",
];

const SWEEP_KEYS: [&str; 5] = ["param", "from", "to", "steps", "initial_grid"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Traj,
    Sweep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub range: SweepRange,
    pub initial: InitialStateMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub channel: ChannelModel,
    pub grid: TimeGrid,
    pub basis: BasisMode,
    pub optimizer: OptimizerConfig,
    pub sweep: Option<SweepSpec>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Parses the config-file format: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected 'key = value'", lineno + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{}'", lineno + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

struct Values {
    map: BTreeMap<String, String>,
    used: Vec<&'static str>,
}

impl Values {
    fn raw(&mut self, key: &'static str) -> Option<String> {
        self.used.push(key);
        self.map.get(key).cloned()
    }

    fn f64(&mut self, key: &'static str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Usage(format!("parameter '{}': '{v}' is not a finite number", flag(key))))
            })
            .transpose()
    }

    fn usize(&mut self, key: &'static str) -> Result<Option<usize>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("parameter '{}': '{v}' is not a non-negative integer", flag(key))))
            })
            .transpose()
    }

    fn required_f64(&mut self, key: &'static str, channel: ChannelKind) -> Result<f64, CliError> {
        self.f64(key)?
            .ok_or_else(|| CliError::Usage(format!("parameter '{}' is required for {channel}", flag(key))))
    }
}

fn flag(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

fn channel_keys(kind: ChannelKind) -> &'static [&'static str] {
    match kind {
        ChannelKind::Dephase1Q => &["s", "omega_c", "rate_form"],
        ChannelKind::Dephase2Q => &["s", "omega_c", "rate_form", "h1", "h2", "lambda"],
        ChannelKind::Damp1Q | ChannelKind::Damp2Q => &["gamma0", "kappa", "varpi"],
    }
}

impl RunConfig {
    /// Builds a validated configuration from merged key/value pairs.
    pub fn from_map(command: Command, map: BTreeMap<String, String>) -> Result<Self, CliError> {
        for key in map.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown parameter '{}'", flag(key))));
            }
        }
        let mut v = Values { map, used: Vec::new() };
        let kind: ChannelKind = v
            .raw("channel")
            .ok_or_else(|| CliError::Usage("parameter '--channel' is required".into()))?
            .parse()
            .map_err(CliError::from)?;

        for key in v.map.keys() {
            let is_channel_key = ChannelKind::ALL.iter().any(|k| channel_keys(*k).contains(&key.as_str()));
            if is_channel_key && !channel_keys(kind).contains(&key.as_str()) {
                return Err(CliError::Usage(format!("parameter '{}' does not apply to {kind}", flag(key))));
            }
            if command == Command::Traj && SWEEP_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("parameter '{}' is only valid for sweep", flag(key))));
            }
        }

        let sweep_param = if command == Command::Sweep {
            let name = v
                .raw("param")
                .ok_or_else(|| CliError::Usage("parameter '--param' is required for sweep".into()))?;
            Some(name.parse::<SweepParam>().map_err(CliError::from)?)
        } else {
            None
        };
        let sweep_from = v.f64("from")?;
        // the swept quantity need not be given; it is filled in per row
        let placeholder = |key: &str| -> Option<f64> {
            let p = sweep_param?;
            let hit = p.name().replace('-', "_") == key
                || (p == SweepParam::KappaOverGamma0 && key == "kappa");
            if hit {
                Some(sweep_from.unwrap_or(1.0).abs().max(1e-3))
            } else {
                None
            }
        };
        let get = |v: &mut Values, key: &'static str| -> Result<f64, CliError> {
            match v.f64(key)? {
                Some(x) => Ok(x),
                None => placeholder(key).map_or_else(|| v.required_f64(key, kind), Ok),
            }
        };

        let channel = match kind {
            ChannelKind::Dephase1Q | ChannelKind::Dephase2Q => {
                let s = get(&mut v, "s")?;
                let omega_c = v.f64("omega_c")?.unwrap_or(1.0);
                let form = match v.raw("rate_form").as_deref() {
                    None | Some("standard") => RateForm::Standard,
                    Some("literal") => RateForm::Literal,
                    Some(other) => {
                        return Err(CliError::Usage(format!(
                            "parameter '--rate-form': expected standard or literal, got '{other}'"
                        )))
                    }
                };
                let ohmic = OhmicParams::new(s, omega_c)?.with_form(form);
                if kind == ChannelKind::Dephase1Q {
                    ChannelModel::Dephase1Q(ohmic)
                } else {
                    let h1 = get(&mut v, "h1")?;
                    let h2 = get(&mut v, "h2")?;
                    let lambda = v.f64("lambda")?.unwrap_or(0.0);
                    ChannelModel::Dephase2Q(TwoQubitDephasingParams::new(h1, h2, lambda, ohmic)?)
                }
            }
            ChannelKind::Damp1Q | ChannelKind::Damp2Q => {
                let gamma0 = match v.f64("gamma0")? {
                    Some(g) => g,
                    None if sweep_param.is_some_and(|p| matches!(p, SweepParam::Gamma0 | SweepParam::KappaOverGamma0)) => {
                        1.0
                    }
                    None => v.required_f64("gamma0", kind)?,
                };
                let kappa = get(&mut v, "kappa")?;
                let varpi = v.f64("varpi")?.unwrap_or(0.0);
                let p = LorentzParams::new(gamma0, kappa, varpi)?;
                if kind == ChannelKind::Damp1Q {
                    ChannelModel::Damp1Q(p)
                } else {
                    ChannelModel::Damp2Q(p)
                }
            }
        };

        let grid = TimeGrid::new(
            v.f64("t_max")?.unwrap_or(DEFAULT_T_MAX),
            v.usize("n")?.unwrap_or(DEFAULT_N),
        )?;
        let basis = match v.raw("basis").as_deref() {
            None | Some("fixed") => BasisMode::fixed_default(kind),
            Some("optimized") => BasisMode::Optimized,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "parameter '--basis': expected fixed or optimized, got '{other}'"
                )))
            }
        };
        let defaults = OptimizerConfig::default();
        let optimizer = OptimizerConfig::new(
            v.usize("grid_points")?.unwrap_or(defaults.grid_points()),
            v.usize("refine_iters")?.unwrap_or(defaults.refine_iters()),
            v.f64("tolerance")?.unwrap_or(defaults.tolerance()),
        )?;

        let sweep = match sweep_param {
            None => None,
            Some(param) => {
                let from = sweep_from.ok_or_else(|| CliError::Usage("parameter '--from' is required for sweep".into()))?;
                let to = v.f64("to")?.ok_or_else(|| CliError::Usage("parameter '--to' is required for sweep".into()))?;
                let steps = v
                    .usize("steps")?
                    .ok_or_else(|| CliError::Usage("parameter '--steps' is required for sweep".into()))?;
                let range = SweepRange::new(from, to, steps)?;
                // surfaces a parameter/channel mismatch before any work
                param.apply(&channel, range.from).or_else(|e| match e {
                    crate::Error::Param { ref name, .. } if name == "param" => Err(e),
                    _ => Ok(channel),
                })?;
                let initial = match v.usize("initial_grid")? {
                    None => InitialStateMode::Fiducial,
                    Some(n) => InitialStateMode::BlochGrid(n),
                };
                Some(SweepSpec { param, range, initial })
            }
        };

        Ok(RunConfig {
            command,
            channel,
            grid,
            basis,
            optimizer,
            sweep,
            out: v.raw("out").map(PathBuf::from),
            svg: v.raw("svg").map(PathBuf::from),
        })
    }
}
