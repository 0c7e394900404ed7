//! CSV and JSON artifact writers. Everything is written in sweep order by a
//! single writer, so files are byte-identical across runs.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::{Format, RunConfig};
use crate::analysis::{CoincidenceCurve, CurveParams, FringeMetrics};

/// Where a series sits in a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Coords {
    pub gamma_inverse: Option<f64>,
    pub eta: Option<f64>,
    pub pairs_per_pulse: Option<f64>,
}

/// One simulated curve with its derived quantities.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub coords: Coords,
    pub curve: CoincidenceCurve,
    pub rate: CoincidenceCurve,
    pub metrics: Option<FringeMetrics>,
    pub distortion: Option<f64>,
}

/// Curves that share one output file.
#[derive(Debug, Clone)]
pub struct Panel {
    pub name: String,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, Default)]
pub struct Artifact {
    pub panels: Vec<Panel>,
    /// Scalars such as fitted exponents, in insertion order.
    pub summary: Vec<(String, f64)>,
}

#[derive(Serialize)]
struct CurveRow {
    #[serde(rename = "N")]
    order: usize,
    phi_rad: f64,
    prob_per_pulse: f64,
    rate_hz: f64,
    normalized: f64,
}

#[derive(Serialize)]
struct MetricsRow<'a> {
    panel: &'a str,
    series: &'a str,
    #[serde(rename = "N")]
    order: usize,
    gamma_inverse: Option<f64>,
    eta: Option<f64>,
    pairs_per_pulse: Option<f64>,
    fwhm_rad: Option<f64>,
    visibility: Option<f64>,
    narrowing_fraction: Option<f64>,
    narrowing_beyond_classical: Option<f64>,
    peak_phase_rad: Option<f64>,
    peak_prob_per_pulse: f64,
    peak_rate_hz: f64,
    distortion_score: Option<f64>,
    cutoff: Option<usize>,
    truncation_deficit: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    quantity: &'a str,
    value: f64,
}

fn metrics_row<'a>(panel: &'a str, s: &'a Series) -> MetricsRow<'a> {
    let m = s.metrics.as_ref();
    let params: Option<&CurveParams> = s.curve.params.as_ref();
    MetricsRow {
        panel,
        series: &s.label,
        order: s.curve.order,
        gamma_inverse: s.coords.gamma_inverse,
        eta: s.coords.eta,
        pairs_per_pulse: s.coords.pairs_per_pulse,
        fwhm_rad: m.map(|m| m.fwhm),
        visibility: m.map(|m| m.visibility),
        narrowing_fraction: m.and_then(|m| m.narrowing_fraction),
        narrowing_beyond_classical: m.and_then(|m| m.narrowing_beyond_classical),
        peak_phase_rad: m.map(|m| m.peak_phase),
        peak_prob_per_pulse: s.curve.peak(),
        peak_rate_hz: s.rate.peak(),
        distortion_score: s.distortion,
        cutoff: params.map(|p| p.cutoff),
        truncation_deficit: params.map(|p| p.truncation_deficit),
    }
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_curve_csv(path: &Path, series: &[Series]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for s in series {
        let normalized = s.curve.normalized();
        for (i, &phi) in s.curve.phases.iter().enumerate() {
            w.serialize(CurveRow {
                order: s.curve.order,
                phi_rad: phi,
                prob_per_pulse: s.curve.values[i],
                rate_hz: s.rate.values[i],
                normalized: normalized[i],
            })
            .map_err(csv_error)?;
        }
    }
    w.flush()
}

fn write_metrics_csv(path: &Path, panels: &[Panel]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for p in panels {
        for s in &p.series {
            w.serialize(metrics_row(&p.name, s)).map_err(csv_error)?;
        }
    }
    w.flush()
}

fn write_summary_csv(path: &Path, summary: &[(String, f64)]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for (quantity, value) in summary {
        w.serialize(SummaryRow {
            quantity,
            value: *value,
        })
        .map_err(csv_error)?;
    }
    w.flush()
}

fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    let mut f = io::BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()
}

fn curve_json(s: &Series) -> Value {
    json!({
        "label": s.label,
        "N": s.curve.order,
        "coords": s.coords,
        "port": s.curve.port,
        "params": s.curve.params,
        "phi_rad": s.curve.phases,
        "prob_per_pulse": s.curve.values,
        "rate_hz": s.rate.values,
        "normalized": s.curve.normalized(),
    })
}

fn metrics_json(panels: &[Panel], summary: &[(String, f64)]) -> Value {
    let rows: Vec<Value> = panels
        .iter()
        .flat_map(|p| p.series.iter().map(move |s| json!(metrics_row(&p.name, s))))
        .collect();
    let mut m = Map::new();
    m.insert("per_curve".into(), Value::Array(rows));
    for (k, v) in summary {
        m.insert(k.clone(), json!(v));
    }
    Value::Object(m)
}

fn document(config: &RunConfig, panels: &[Panel], summary: &[(String, f64)]) -> Value {
    let curves: Vec<Value> = panels
        .iter()
        .flat_map(|p| p.series.iter().map(curve_json))
        .collect();
    json!({
        "config": config,
        "curves": curves,
        "metrics": metrics_json(panels, summary),
    })
}

fn ensure_parent(path: &Path) -> io::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir),
        _ => Ok(()),
    }
}

/// All panels in one file (the `curve` command). CSV output gets
/// `.metrics.csv`, `.summary.csv` and `.config.json` sidecars.
pub fn write_single(
    config: &RunConfig,
    artifact: &Artifact,
    path: &Path,
) -> io::Result<Vec<PathBuf>> {
    ensure_parent(path)?;
    match config.output.format {
        Format::Json => {
            write_json(path, &document(config, &artifact.panels, &artifact.summary))?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv => {
            let series: Vec<Series> = artifact
                .panels
                .iter()
                .flat_map(|p| p.series.clone())
                .collect();
            write_curve_csv(path, &series)?;
            let metrics = path.with_extension("metrics.csv");
            write_metrics_csv(&metrics, &artifact.panels)?;
            let cfg = path.with_extension("config.json");
            write_json(&cfg, &json!({ "config": config }))?;
            let mut written = vec![path.to_path_buf(), metrics, cfg];
            if !artifact.summary.is_empty() {
                let summary = path.with_extension("summary.csv");
                write_summary_csv(&summary, &artifact.summary)?;
                written.push(summary);
            }
            Ok(written)
        }
    }
}

/// One file per panel inside `dir`, plus shared metrics and config files.
pub fn write_panels(
    config: &RunConfig,
    artifact: &Artifact,
    dir: &Path,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match config.output.format {
        Format::Json => {
            for p in &artifact.panels {
                let path = dir.join(format!("{}.json", p.name));
                write_json(&path, &document(config, std::slice::from_ref(p), &[]))?;
                written.push(path);
            }
            let path = dir.join("summary.json");
            write_json(
                &path,
                &json!({
                    "config": config,
                    "metrics": metrics_json(&artifact.panels, &artifact.summary),
                }),
            )?;
            written.push(path);
        }
        Format::Csv => {
            for p in &artifact.panels {
                let path = dir.join(format!("{}.csv", p.name));
                write_curve_csv(&path, &p.series)?;
                written.push(path);
            }
            let metrics = dir.join("metrics.csv");
            write_metrics_csv(&metrics, &artifact.panels)?;
            written.push(metrics);
            if !artifact.summary.is_empty() {
                let summary = dir.join("summary.csv");
                write_summary_csv(&summary, &artifact.summary)?;
                written.push(summary);
            }
            let cfg = dir.join("config.json");
            write_json(&cfg, &json!({ "config": config }))?;
            written.push(cfg);
        }
    }
    Ok(written)
}
