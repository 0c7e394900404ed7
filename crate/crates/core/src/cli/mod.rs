//! The `subrayleigh` command line: single curves, the three figure presets,
//! the oracle comparison and the self-check suite.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid configuration or
//! arguments, 3 insufficient cutoff, 4 I/O failure, 5 analysis failure
//! (no fringe, undefined width, non-monotone sweep). Errors are printed to
//! stderr as one JSON object.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::{
    flux_efficiency_grid, fringe_metrics, gamma_sweep, scaling_exponent, FringeMetrics,
};
use crate::detection::{n_fold_curve, rate_curve, FluxModel, Port};
use crate::error::Error;
use crate::fock::SourceParams;
use crate::optics::{BeamSplitterConvention, MachZehnder};
use crate::oracle::{closed_form, subspace_probability, Expansion, MAX_ORDER};
use crate::verify::{run_checks, VerifyOptions};
use config::{Angle, Command, ConfigFile, Format, Overrides, RunConfig, Sweep};
use output::{Artifact, Coords, Panel, Series};

#[derive(Debug, Parser)]
#[command(
    name = "subrayleigh",
    version,
    about = "Sub-Rayleigh fringe simulator for coherent + SPDC light"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// N-fold coincidence curves for one source.
    Curve(RunArgs),
    /// γ⁻¹ sweep of the three-photon fringe.
    Fig2(RunArgs),
    /// N = 1..4 coincidence curves, quantum and classical, with width scaling fits.
    Fig3(RunArgs),
    /// Flux × efficiency grid for the NOON condition and a γ⁻¹ = 0.1 source.
    Fig4(RunArgs),
    /// Compare the subspace oracle, the closed forms and the full simulator.
    Oracle(OracleArgs),
    /// Run the built-in check suite; exit 0 only if every check passes.
    Verify(VerifyArgs),
}

fn parse_port(s: &str) -> Result<Port, String> {
    match s.to_ascii_lowercase().as_str() {
        "e" => Ok(Port::E),
        "f" => Ok(Port::F),
        _ => Err(format!("unknown port `{s}` (expected e or f)")),
    }
}

#[derive(Debug, Args, Default)]
struct SourceArgs {
    /// Coherent amplitude |α|.
    #[arg(long = "alpha")]
    alpha_mag: Option<f64>,
    /// Coherent-state phase θ (radians, or with a `deg` suffix).
    #[arg(long = "theta", allow_hyphen_values = true)]
    theta_cs: Option<Angle>,
    /// Squeezing parameter r.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gamma_inverse")]
    r: Option<f64>,
    /// Sets r = γ⁻¹ |α|².
    #[arg(long)]
    gamma_inverse: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct RunArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
    /// Efficiency of both detectors.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    eta_e: Option<f64>,
    #[arg(long)]
    eta_f: Option<f64>,
    /// Dark-click probability per pulse, detector e.
    #[arg(long)]
    dark_e: Option<f64>,
    #[arg(long)]
    dark_f: Option<f64>,
    /// Pulse repetition rate in Hz.
    #[arg(long)]
    rep_rate: Option<f64>,
    /// Coincidence orders, comma separated.
    #[arg(short = 'n', long = "orders", value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Number of phase samples.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    phi_start: Option<Angle>,
    #[arg(long, allow_hyphen_values = true)]
    phi_end: Option<Angle>,
    /// Per-mode photon cutoff (default derived from the source).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Largest tolerated truncation deficit.
    #[arg(long)]
    max_deficit: Option<f64>,
    /// Detector registering the N-fold event.
    #[arg(long, value_parser = parse_port)]
    port: Option<Port>,
    /// γ⁻¹ values for fig2.
    #[arg(long, value_delimiter = ',')]
    gamma_inverse_list: Option<Vec<f64>>,
    /// η values for fig4.
    #[arg(long, value_delimiter = ',')]
    eta_list: Option<Vec<f64>>,
    /// Pairs-per-pulse values for fig4.
    #[arg(long, value_delimiter = ',')]
    ppp_list: Option<Vec<f64>>,
    /// γ⁻¹ of each fig4 column.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<f64>>,
    /// Output file (curve) or directory (figures).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            alpha_mag: self.source.alpha_mag,
            theta_cs: self.source.theta_cs,
            r: self.source.r,
            gamma_inverse: self.source.gamma_inverse,
            eta: self.eta,
            eta_e: self.eta_e,
            eta_f: self.eta_f,
            dark_e: self.dark_e,
            dark_f: self.dark_f,
            rep_rate: self.rep_rate,
            orders: self.orders.clone(),
            points: self.points,
            phi_start: self.phi_start,
            phi_end: self.phi_end,
            cutoff: self.cutoff,
            max_truncation_deficit: self.max_deficit,
            port: self.port,
            gamma_inverse_list: self.gamma_inverse_list.clone(),
            eta_list: self.eta_list.clone(),
            ppp_list: self.ppp_list.clone(),
            columns: self.columns.clone(),
            output: self.output.clone(),
            format: self.format,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Total photon number of the subspace (at most 6).
    #[arg(short = 'n', long, default_value_t = 3)]
    order: usize,
    /// Number of phases in the printed table.
    #[arg(long, default_value_t = 13)]
    points: usize,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
    /// Cutoff used by the configured-source check.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    max_deficit: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the check table as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Negative control: run every check with the swapped beamsplitter convention.
    #[arg(long, hide = true)]
    perturb_convention: bool,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::InvalidParameter { .. }
            | Error::CutoffMismatch(..)
            | Error::OrderTooLarge(_) => (2, "invalid_config"),
            Error::CutoffInsufficient { .. } => (3, "cutoff_insufficient"),
            _ => (5, "analysis_failed"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 4,
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn report(err: &mut dyn Write, f: &Failure) {
    let _ = writeln!(
        err,
        "{}",
        json!({ "error": f.kind, "code": f.code, "message": f.message })
    );
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let f = Failure {
                code: 2,
                kind: "invalid_arguments",
                message: e.render().to_string().trim().to_string(),
            };
            report(err, &f);
            return f.code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Cmd::Curve(a) => run_figure(Command::Curve, &a, out),
        Cmd::Fig2(a) => run_figure(Command::Fig2, &a, out),
        Cmd::Fig3(a) => run_figure(Command::Fig3, &a, out),
        Cmd::Fig4(a) => run_figure(Command::Fig4, &a, out),
        Cmd::Oracle(a) => oracle(&a, out),
        Cmd::Verify(a) => verify(&a, out),
    }
}

fn load(command: Command, path: Option<&PathBuf>, flags: Overrides) -> Result<RunConfig, Failure> {
    let file = match path {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    Ok(RunConfig::resolve(command, file, flags)?)
}

fn run_figure(command: Command, args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = load(command, args.config.as_ref(), args.overrides())?;
    let artifact = match command {
        Command::Curve => curve_artifact(&config)?,
        Command::Fig2 => fig2_artifact(&config)?,
        Command::Fig3 => fig3_artifact(&config)?,
        Command::Fig4 => fig4_artifact(&config)?,
        Command::Verify => unreachable!("verify has its own runner"),
    };
    let path = &config.output.path;
    let written = if command == Command::Curve {
        output::write_single(&config, &artifact, path)
    } else {
        output::write_panels(&config, &artifact, path)
    }
    .map_err(|e| Failure {
        code: 4,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })?;
    for path in written {
        writeln!(out, "{}", path.display())?;
    }
    Ok(0)
}

fn metrics_or_none(
    curve: &crate::analysis::CoincidenceCurve,
) -> Result<Option<FringeMetrics>, Failure> {
    match fringe_metrics(curve) {
        Ok(m) => Ok(Some(m)),
        Err(Error::NoFringe { .. }) | Err(Error::WidthUndefined) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn simulate(
    config: &RunConfig,
    source: &SourceParams,
    order: usize,
    label: String,
    coords: Coords,
) -> Result<Series, Failure> {
    let phases = config.phase_grid.phases();
    let curve = n_fold_curve(
        source,
        &config.loss,
        order,
        &phases,
        &config.simulation.curve_options(),
    )?;
    let flux = FluxModel::new(config.flux.rep_rate, source.pairs_per_pulse())?;
    let rate = rate_curve(&curve, &flux)?;
    let metrics = metrics_or_none(&curve)?;
    Ok(Series {
        label,
        coords,
        curve,
        rate,
        metrics,
        distortion: None,
    })
}

fn source_of(config: &RunConfig) -> SourceParams {
    config
        .source
        .expect("curve-type commands always resolve a source")
}

fn exponent_entries(
    prefix: &str,
    series: &[Series],
    summary: &mut Vec<(String, f64)>,
) -> Result<(), Failure> {
    let widths: Vec<(usize, f64)> = series
        .iter()
        .filter_map(|s| s.metrics.map(|m| (s.curve.order, m.fwhm)))
        .collect();
    let multi: Vec<(usize, f64)> = widths.iter().copied().filter(|&(n, _)| n >= 2).collect();
    if multi.len() >= 3 {
        summary.push((
            format!("{prefix}scaling_exponent"),
            scaling_exponent(&multi)?,
        ));
    }
    if widths.len() >= 3 && widths.len() != multi.len() {
        summary.push((
            format!("{prefix}scaling_exponent_all_orders"),
            scaling_exponent(&widths)?,
        ));
    }
    Ok(())
}

fn curve_artifact(config: &RunConfig) -> Result<Artifact, Failure> {
    let source = source_of(config);
    let coords = Coords {
        gamma_inverse: config.gamma_inverse,
        eta: Some(config.loss.eta_e),
        pairs_per_pulse: Some(source.pairs_per_pulse()),
    };
    let series = config
        .simulation
        .orders
        .iter()
        .map(|&n| simulate(config, &source, n, format!("N{n}"), coords))
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = Vec::new();
    exponent_entries("", &series, &mut summary)?;
    Ok(Artifact {
        panels: vec![Panel {
            name: "curve".into(),
            series,
        }],
        summary,
    })
}

fn fig2_artifact(config: &RunConfig) -> Result<Artifact, Failure> {
    let source = source_of(config);
    let values = match &config.sweep {
        Some(Sweep::GammaInverse { values }) => values.clone(),
        _ => config::fig2_gamma_inverse(),
    };
    let phases = config.phase_grid.phases();
    let opts = config.simulation.curve_options();
    let mut panels = Vec::new();
    for &order in &config.simulation.orders {
        let points = gamma_sweep(&source, &config.loss, order, &values, &phases, &opts)?;
        for p in points {
            let flux = FluxModel::new(config.flux.rep_rate, p.source.pairs_per_pulse())?;
            let rate = rate_curve(&p.curve, &flux)?;
            let label = format!("gamma_inv_{:.3}", p.gamma_inverse);
            let name = if config.simulation.orders.len() == 1 {
                label.clone()
            } else {
                format!("N{order}_{label}")
            };
            panels.push(Panel {
                name,
                series: vec![Series {
                    label,
                    coords: Coords {
                        gamma_inverse: Some(p.gamma_inverse),
                        eta: Some(config.loss.eta_e),
                        pairs_per_pulse: Some(p.source.pairs_per_pulse()),
                    },
                    curve: p.curve,
                    rate,
                    metrics: Some(p.metrics),
                    distortion: None,
                }],
            });
        }
    }
    Ok(Artifact {
        panels,
        summary: Vec::new(),
    })
}

fn fig3_artifact(config: &RunConfig) -> Result<Artifact, Failure> {
    let quantum = source_of(config);
    let classical = SourceParams::new(quantum.alpha_mag, quantum.theta_cs, 0.0)?;
    let mut q_series = Vec::new();
    let mut c_series = Vec::new();
    for &n in &config.simulation.orders {
        let coords = Coords {
            gamma_inverse: config.gamma_inverse,
            eta: Some(config.loss.eta_e),
            pairs_per_pulse: Some(quantum.pairs_per_pulse()),
        };
        q_series.push(simulate(config, &quantum, n, format!("N{n}"), coords)?);
        let coords = Coords {
            gamma_inverse: Some(0.0),
            pairs_per_pulse: Some(0.0),
            ..coords
        };
        c_series.push(simulate(
            config,
            &classical,
            n,
            format!("classical_N{n}"),
            coords,
        )?);
    }
    let mut summary = Vec::new();
    exponent_entries("", &q_series, &mut summary)?;
    exponent_entries("classical_", &c_series, &mut summary)?;
    let panels = q_series
        .into_iter()
        .chain(c_series)
        .map(|s| Panel {
            name: s.label.clone(),
            series: vec![s],
        })
        .collect();
    Ok(Artifact { panels, summary })
}

fn column_name(gamma_inverse: f64) -> String {
    if gamma_inverse == 1.0 {
        "noon".into()
    } else {
        format!("gamma_inv_{gamma_inverse:.3}")
    }
}

fn fig4_artifact(config: &RunConfig) -> Result<Artifact, Failure> {
    let Some(Sweep::FluxEfficiency {
        columns,
        eta,
        pairs_per_pulse,
        ..
    }) = &config.sweep
    else {
        unreachable!("fig4 always resolves a flux/efficiency sweep");
    };
    let phases = config.phase_grid.phases();
    let opts = config.simulation.curve_options();
    let mut panels = Vec::new();
    let mut summary = Vec::new();
    let mut distortions = Vec::new();
    for &order in &config.simulation.orders {
        for &g in columns {
            let grid = flux_efficiency_grid(
                g,
                eta,
                pairs_per_pulse,
                order,
                &phases,
                config.flux.rep_rate,
                &opts,
            )?;
            for p in grid {
                let col = column_name(g);
                let name = format!("{col}_N{order}_eta{}_ppp{:e}", p.eta, p.pairs_per_pulse);
                distortions.push((
                    order,
                    g,
                    p.eta,
                    p.pairs_per_pulse,
                    p.distortion,
                    p.metrics.map(|m| m.fwhm),
                ));
                panels.push(Panel {
                    name: name.clone(),
                    series: vec![Series {
                        label: name,
                        coords: Coords {
                            gamma_inverse: Some(g),
                            eta: Some(p.eta),
                            pairs_per_pulse: Some(p.pairs_per_pulse),
                        },
                        curve: p.curve,
                        rate: p.rate,
                        metrics: p.metrics,
                        distortion: Some(p.distortion),
                    }],
                });
            }
        }
    }

    // NOON distortion relative to each other column at identical settings
    for &(order, g, e, ppp, d, _) in &distortions {
        if g == 1.0 {
            continue;
        }
        if let Some(&(.., noon, _)) = distortions
            .iter()
            .find(|x| x.0 == order && x.1 == 1.0 && x.2 == e && x.3 == ppp)
        {
            if d > 0.0 {
                summary.push((
                    format!(
                        "distortion_ratio_N{order}_{}_eta{e}_ppp{ppp:e}",
                        column_name(g)
                    ),
                    noon / d,
                ));
            }
        }
    }
    // relative FWHM shift of each column between the lowest and highest flux
    let lo = pairs_per_pulse
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let hi = pairs_per_pulse
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        for &order in &config.simulation.orders {
            for &g in columns {
                for &e in eta {
                    let width = |ppp: f64| {
                        distortions
                            .iter()
                            .find(|x| x.0 == order && x.1 == g && x.2 == e && x.3 == ppp)
                            .and_then(|x| x.5)
                    };
                    if let (Some(a), Some(b)) = (width(lo), width(hi)) {
                        summary.push((
                            format!("fwhm_shift_N{order}_{}_eta{e}", column_name(g)),
                            (b - a).abs() / a,
                        ));
                    }
                }
            }
        }
    }
    Ok(Artifact { panels, summary })
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let flags = Overrides {
        alpha_mag: args.source.alpha_mag,
        theta_cs: args.source.theta_cs,
        r: args.source.r,
        gamma_inverse: args.source.gamma_inverse,
        ..Overrides::default()
    };
    let config = RunConfig::resolve(Command::Curve, ConfigFile::default(), flags)?;
    let source = source_of(&config);
    let n = args.order;
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OrderTooLarge(n).into());
    }
    if args.points < 2 {
        return Err(crate::error::invalid("points", "need at least 2").into());
    }

    let cutoff = source.default_cutoff().max(n);
    let input = source.input_state(cutoff)?;
    let mz = MachZehnder::new(cutoff, BeamSplitterConvention::RealSymmetric);
    let phases = crate::math::linspace(0.0, std::f64::consts::TAU, args.points);
    let conv = BeamSplitterConvention::RealSymmetric;

    let mut rows = Vec::new();
    for &phi in &phases {
        let leading = subspace_probability(&source, n, Expansion::LeadingOrder, phi, conv)?;
        let exact = subspace_probability(&source, n, Expansion::Exact, phi, conv)?;
        let full = mz.apply(&input, phi).amplitude(0, n).norm_sqr();
        let closed =
            (n == 3).then(|| closed_form::three_photon_probability(source.alpha(), source.r, phi));
        rows.push((phi, leading, closed, exact, full));
    }

    // symbolic limits, evaluated at the configured |α|
    let a = source.alpha_mag;
    let limit_error = |src: &SourceParams, f: &dyn Fn(f64) -> f64| -> Result<f64, Failure> {
        let mut worst = 0.0f64;
        let mut peak = 0.0f64;
        for &phi in &phases {
            let o = subspace_probability(src, 3, Expansion::LeadingOrder, phi, conv)?;
            worst = worst.max((o - f(phi)).abs());
            peak = peak.max(f(phi));
        }
        Ok(if peak > 0.0 { worst / peak } else { worst })
    };
    let classical_err = limit_error(&SourceParams::classical(a), &|p| {
        closed_form::classical_three_photon(a, p)
    })?;
    let noon_err = limit_error(&SourceParams::noon_condition(a)?, &|p| {
        closed_form::noon_three_photon(a, p)
    })?;

    if args.json {
        let table: Vec<_> = rows
            .iter()
            .map(|&(phi, l, c, e, f)| {
                json!({"phi_rad": phi, "oracle_leading_order": l, "closed_form": c, "oracle_exact": e, "simulator": f})
            })
            .collect();
        let doc = json!({
            "source": source,
            "N": n,
            "rows": table,
            "limits": {
                "classical_sin6_relative_error": classical_err,
                "noon_sin2_relative_error": noon_err,
            }
        });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?
        )?;
        return Ok(0);
    }

    writeln!(
        out,
        "source: |alpha| = {}, theta = {} rad, r = {}; N = {n}, cutoff {cutoff}",
        source.alpha_mag, source.theta_cs, source.r
    )?;
    writeln!(
        out,
        "{:>9}  {:>14}  {:>14}  {:>14}  {:>14}  {:>9}",
        "phi", "leading", "closed form", "oracle exact", "simulator", "diff/peak"
    )?;
    let peak = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    for (phi, l, c, e, f) in rows {
        let rel = if peak > 0.0 {
            (f - e).abs() / peak
        } else {
            (f - e).abs()
        };
        let c = c.map_or("-".to_string(), |c| format!("{c:.6e}"));
        writeln!(
            out,
            "{phi:>9.5}  {l:>14.6e}  {c:>14}  {e:>14.6e}  {f:>14.6e}  {rel:>9.1e}"
        )?;
    }
    writeln!(
        out,
        "classical limit |alpha|^6/6 sin^6(phi/2): max error / peak {classical_err:.2e}"
    )?;
    writeln!(
        out,
        "NOON limit |alpha|^6/6 sin^2(3phi/2):     max error / peak {noon_err:.2e}"
    )?;
    Ok(0)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let flags = Overrides {
        alpha_mag: args.source.alpha_mag,
        theta_cs: args.source.theta_cs,
        r: args.source.r,
        gamma_inverse: args.source.gamma_inverse,
        cutoff: args.cutoff,
        max_truncation_deficit: args.max_deficit,
        seed: args.seed,
        ..Overrides::default()
    };
    let config = load(Command::Verify, args.config.as_ref(), flags)?;
    let opts = VerifyOptions {
        convention: if args.perturb_convention {
            BeamSplitterConvention::Swapped
        } else {
            BeamSplitterConvention::RealSymmetric
        },
        seed: args.seed.unwrap_or(VerifyOptions::default().seed),
        source: source_of(&config),
        cutoff: config.simulation.cutoff,
        max_truncation_deficit: config.simulation.max_truncation_deficit,
    };
    let checks = run_checks(&opts);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        writeln!(
            out,
            "{:<width$}  {}  {:>7.3}s  {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.seconds,
            c.detail
        )?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(
        out,
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    )?;
    if let Some(path) = &args.output {
        let doc = json!({ "options": opts, "checks": checks });
        std::fs::write(
            path,
            serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)? + "\n",
        )?;
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
