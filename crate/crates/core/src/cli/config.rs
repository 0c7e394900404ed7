//! Run configuration: per-command presets, overridden by a TOML file,
//! overridden by flags.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{DEFAULT_GRID_POINTS, REFERENCE_PAIRS_PER_PULSE};
use crate::detection::{CurveOptions, FluxModel, LossModel, Port, DEFAULT_REP_RATE};
use crate::error::{invalid, Result};
use crate::fock::SourceParams;
use crate::math::linspace;
use crate::optics::BeamSplitterConvention;

/// An angle in radians. Parsed from a bare number (radians) or a string with
/// a `deg` or `rad` suffix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr")]
pub struct Angle(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<AngleRepr> for Angle {
    type Error = String;

    fn try_from(value: AngleRepr) -> std::result::Result<Self, String> {
        match value {
            AngleRepr::Number(x) => Ok(Angle(x)),
            AngleRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        let (number, degrees) = if let Some(x) = t.strip_suffix("deg") {
            (x, true)
        } else if let Some(x) = t.strip_suffix("rad") {
            (x, false)
        } else {
            (t, false)
        };
        let v: f64 = number.trim().parse().map_err(|_| {
            format!("cannot parse angle `{s}` (use e.g. `1.57`, `1.57rad` or `90deg`)")
        })?;
        if !v.is_finite() {
            return Err(format!("angle `{s}` is not finite"));
        }
        Ok(Angle(if degrees { v.to_radians() } else { v }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Curve,
    Fig2,
    Fig3,
    Fig4,
    Verify,
}

// ---- file layer: every field optional ----

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub loss: LossSection,
    #[serde(default)]
    pub flux: FluxSection,
    #[serde(default)]
    pub phases: PhaseSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub alpha_mag: Option<f64>,
    pub theta_cs: Option<Angle>,
    pub r: Option<f64>,
    pub gamma_inverse: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossSection {
    pub eta: Option<f64>,
    pub eta_e: Option<f64>,
    pub eta_f: Option<f64>,
    pub dark_e: Option<f64>,
    pub dark_f: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSection {
    pub rep_rate: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSection {
    pub points: Option<usize>,
    pub start: Option<Angle>,
    pub end: Option<Angle>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub orders: Option<Vec<usize>>,
    pub cutoff: Option<usize>,
    pub max_truncation_deficit: Option<f64>,
    pub port: Option<Port>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub gamma_inverse: Option<Vec<f64>>,
    pub eta: Option<Vec<f64>>,
    pub pairs_per_pulse: Option<Vec<f64>>,
    /// γ⁻¹ of each column of the flux × efficiency grid.
    pub columns: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| invalid("config", format!("{}: {e}", path.display())))
    }
}

// ---- flag layer ----

/// Overrides collected from the command line; same shape as the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub alpha_mag: Option<f64>,
    pub theta_cs: Option<Angle>,
    pub r: Option<f64>,
    pub gamma_inverse: Option<f64>,
    pub eta: Option<f64>,
    pub eta_e: Option<f64>,
    pub eta_f: Option<f64>,
    pub dark_e: Option<f64>,
    pub dark_f: Option<f64>,
    pub rep_rate: Option<f64>,
    pub orders: Option<Vec<usize>>,
    pub points: Option<usize>,
    pub phi_start: Option<Angle>,
    pub phi_end: Option<Angle>,
    pub cutoff: Option<usize>,
    pub max_truncation_deficit: Option<f64>,
    pub port: Option<Port>,
    pub gamma_inverse_list: Option<Vec<f64>>,
    pub eta_list: Option<Vec<f64>>,
    pub ppp_list: Option<Vec<f64>>,
    pub columns: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

// ---- resolved configuration ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub points: usize,
    pub start: f64,
    pub end: f64,
}

impl PhaseGrid {
    pub fn phases(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    pub orders: Vec<usize>,
    pub cutoff: Option<usize>,
    pub max_truncation_deficit: f64,
    pub port: Port,
    pub convention: BeamSplitterConvention,
}

impl Simulation {
    pub fn curve_options(&self) -> CurveOptions {
        CurveOptions {
            port: self.port,
            cutoff: self.cutoff,
            max_truncation_deficit: self.max_truncation_deficit,
            convention: self.convention,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sweep {
    GammaInverse {
        values: Vec<f64>,
    },
    FluxEfficiency {
        columns: Vec<f64>,
        eta: Vec<f64>,
        pairs_per_pulse: Vec<f64>,
        reference_pairs_per_pulse: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    pub path: PathBuf,
    pub format: Format,
}

/// Fully resolved configuration; echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// Absent for the flux × efficiency grid, where each cell has its own source.
    pub source: Option<SourceParams>,
    pub gamma: Option<f64>,
    pub gamma_inverse: Option<f64>,
    pub loss: LossModel,
    pub flux: FluxModel,
    pub pair_rate_hz: f64,
    pub phase_grid: PhaseGrid,
    pub simulation: Simulation,
    pub sweep: Option<Sweep>,
    pub output: Output,
    pub seed: u64,
}

/// Values used when neither the file nor a flag sets them.
struct Preset {
    alpha_mag: f64,
    theta_cs: f64,
    gamma_inverse: f64,
    eta: f64,
    orders: Vec<usize>,
    output: &'static str,
}

fn preset(command: Command) -> Preset {
    let base = Preset {
        alpha_mag: 0.1,
        theta_cs: FRAC_PI_2,
        gamma_inverse: 0.1,
        eta: 0.1,
        orders: vec![3],
        output: "",
    };
    match command {
        Command::Curve => Preset {
            eta: 1.0,
            output: "curve.csv",
            ..base
        },
        Command::Fig2 => Preset {
            output: "fig2",
            ..base
        },
        Command::Fig3 => Preset {
            orders: vec![1, 2, 3, 4],
            output: "fig3",
            ..base
        },
        Command::Fig4 => Preset {
            eta: 1.0,
            output: "fig4",
            ..base
        },
        Command::Verify => Preset {
            eta: 1.0,
            output: "verify.json",
            ..base
        },
    }
}

pub fn fig2_gamma_inverse() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

pub const FIG4_COLUMNS: [f64; 2] = [1.0, 0.1];
pub const FIG4_ETA: [f64; 2] = [1.0, 0.01];
pub const FIG4_PAIRS_PER_PULSE: [f64; 2] = [1e-4, 0.1];

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

impl RunConfig {
    pub fn resolve(command: Command, file: ConfigFile, flags: Overrides) -> Result<Self> {
        let p = preset(command);

        // an explicit r from either layer beats a preset γ⁻¹, but a flag
        // always beats the file
        let r_flag = flags.r;
        let g_flag = flags.gamma_inverse;
        let (r, gamma_inverse_in) = match (r_flag, g_flag) {
            (Some(_), Some(_)) => {
                return Err(invalid("r", "set either r or gamma_inverse, not both"))
            }
            (Some(r), None) => (Some(r), None),
            (None, Some(g)) => (None, Some(g)),
            (None, None) => match (file.source.r, file.source.gamma_inverse) {
                (Some(_), Some(_)) => {
                    return Err(invalid("source", "set either r or gamma_inverse, not both"))
                }
                (r, g) => (r, g),
            },
        };
        let alpha_mag = pick(flags.alpha_mag, file.source.alpha_mag, p.alpha_mag);
        let theta_cs = pick(flags.theta_cs, file.source.theta_cs, Angle(p.theta_cs)).0;
        let source = match r {
            Some(r) => SourceParams::new(alpha_mag, theta_cs, r)?,
            None => SourceParams::with_gamma_inverse(
                alpha_mag,
                theta_cs,
                gamma_inverse_in.unwrap_or(p.gamma_inverse),
            )?,
        };

        let eta = pick(flags.eta, file.loss.eta, p.eta);
        let loss = LossModel {
            eta_e: flags.eta_e.or(file.loss.eta_e).unwrap_or(eta),
            eta_f: flags.eta_f.or(file.loss.eta_f).unwrap_or(eta),
            dark_e: pick(flags.dark_e, file.loss.dark_e, 0.0),
            dark_f: pick(flags.dark_f, file.loss.dark_f, 0.0),
        };
        loss.validate()?;

        let flux = FluxModel::new(
            pick(flags.rep_rate, file.flux.rep_rate, DEFAULT_REP_RATE),
            source.pairs_per_pulse(),
        )?;

        let phase_grid = PhaseGrid {
            points: pick(flags.points, file.phases.points, DEFAULT_GRID_POINTS),
            start: pick(flags.phi_start, file.phases.start, Angle(0.0)).0,
            end: pick(flags.phi_end, file.phases.end, Angle(TAU)).0,
        };
        if phase_grid.points < 3 {
            return Err(invalid("points", "need at least 3 phase samples"));
        }
        if phase_grid.end.partial_cmp(&phase_grid.start) != Some(std::cmp::Ordering::Greater) {
            return Err(invalid("phases", "end must exceed start"));
        }

        let defaults = CurveOptions::default();
        let simulation = Simulation {
            orders: pick(flags.orders, file.simulation.orders, p.orders),
            cutoff: flags.cutoff.or(file.simulation.cutoff),
            max_truncation_deficit: pick(
                flags.max_truncation_deficit,
                file.simulation.max_truncation_deficit,
                defaults.max_truncation_deficit,
            ),
            port: pick(flags.port, file.simulation.port, defaults.port),
            convention: defaults.convention,
        };
        if simulation.orders.is_empty() || simulation.orders.contains(&0) {
            return Err(invalid("orders", "need at least one order, each >= 1"));
        }
        if !(0.0..=1.0).contains(&simulation.max_truncation_deficit) {
            return Err(invalid("max_truncation_deficit", "must lie in [0, 1]"));
        }
        if let Some(c) = simulation.cutoff {
            if c > 120 {
                return Err(invalid("cutoff", "must be <= 120"));
            }
        }

        let sweep = match command {
            Command::Fig2 => Some(Sweep::GammaInverse {
                values: flags
                    .gamma_inverse_list
                    .or(file.sweep.gamma_inverse)
                    .unwrap_or_else(fig2_gamma_inverse),
            }),
            Command::Fig4 => Some(Sweep::FluxEfficiency {
                columns: pick(flags.columns, file.sweep.columns, FIG4_COLUMNS.to_vec()),
                eta: pick(flags.eta_list, file.sweep.eta, FIG4_ETA.to_vec()),
                pairs_per_pulse: pick(
                    flags.ppp_list,
                    file.sweep.pairs_per_pulse,
                    FIG4_PAIRS_PER_PULSE.to_vec(),
                ),
                reference_pairs_per_pulse: REFERENCE_PAIRS_PER_PULSE,
            }),
            _ => None,
        };
        if let Some(Sweep::GammaInverse { values }) = &sweep {
            if values.is_empty() {
                return Err(invalid("gamma_inverse", "sweep list is empty"));
            }
        }
        if let Some(Sweep::FluxEfficiency {
            columns,
            eta,
            pairs_per_pulse,
            ..
        }) = &sweep
        {
            if columns.is_empty() || eta.is_empty() || pairs_per_pulse.is_empty() {
                return Err(invalid("sweep", "flux/efficiency lists must be non-empty"));
            }
        }

        let output = Output {
            path: pick(flags.output, file.output.path, PathBuf::from(p.output)),
            format: pick(flags.format, file.output.format, Format::default()),
        };
        let seed = pick(flags.seed, file.output.seed, 1);

        let (source, gamma, gamma_inverse) = if command == Command::Fig4 {
            (None, None, None)
        } else {
            (Some(source), source.gamma(), source.gamma_inverse())
        };
        Ok(RunConfig {
            command,
            source,
            gamma,
            gamma_inverse,
            loss,
            pair_rate_hz: flux.pair_rate(),
            flux,
            phase_grid,
            simulation,
            sweep,
            output,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!("90deg".parse::<Angle>().unwrap().0, FRAC_PI_2);
        assert_eq!("1.5".parse::<Angle>().unwrap().0, 1.5);
        assert_eq!(" 2rad".parse::<Angle>().unwrap().0, 2.0);
        assert!("ninety".parse::<Angle>().is_err());
        assert!("infdeg".parse::<Angle>().is_err());
    }

    #[test]
    fn flags_beat_file_beat_preset() {
        let file: ConfigFile = toml::from_str(
            r#"
            [source]
            alpha_mag = 0.2
            theta_cs = "45deg"
            [loss]
            eta = 0.5
            "#,
        )
        .unwrap();
        let flags = Overrides {
            alpha_mag: Some(0.3),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(Command::Curve, file, flags).unwrap();
        let s = cfg.source.unwrap();
        assert_eq!(s.alpha_mag, 0.3);
        assert!((s.theta_cs - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(cfg.loss.eta_e, 0.5);
        assert!((cfg.gamma_inverse.unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn r_flag_overrides_file_gamma() {
        let file: ConfigFile = toml::from_str("[source]\ngamma_inverse = 0.5\n").unwrap();
        let flags = Overrides {
            r: Some(0.0),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(Command::Curve, file, flags).unwrap();
        assert_eq!(cfg.source.unwrap().r, 0.0);
        assert_eq!(cfg.gamma, None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(toml::from_str::<ConfigFile>("[source]\nalpha = 1\n").is_err());
        let file: ConfigFile = toml::from_str("[loss]\neta = 1.5\n").unwrap();
        assert!(RunConfig::resolve(Command::Curve, file, Overrides::default()).is_err());
        let flags = Overrides {
            orders: Some(vec![]),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve(Command::Fig3, ConfigFile::default(), flags).is_err());
    }

    #[test]
    fn presets() {
        let f2 =
            RunConfig::resolve(Command::Fig2, ConfigFile::default(), Overrides::default()).unwrap();
        match f2.sweep {
            Some(Sweep::GammaInverse { values }) => assert_eq!(values.len(), 11),
            _ => panic!("fig2 sweeps gamma"),
        }
        let f3 =
            RunConfig::resolve(Command::Fig3, ConfigFile::default(), Overrides::default()).unwrap();
        assert_eq!(f3.simulation.orders, vec![1, 2, 3, 4]);
        assert_eq!(f3.loss.eta_e, 0.1);
    }
}
