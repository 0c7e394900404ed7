//! Fringe metrics and the parameter sweeps built on them.
//!
//! The width of a fringe is its full width at half maximum, measured on the
//! bright fringe containing the curve's global maximum. Reference widths:
//! the classical `N`-fold curve `sin^{2N}(φ/2)` and the NOON curve
//! `sin²(Nφ/2)`, whose width is `π/N`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{n_fold_curve, rate_curve, CurveOptions, FluxModel, LossModel, Port};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::fock::SourceParams;
use crate::math::linspace;
use crate::optics::BeamSplitterConvention;

/// Number of samples in the default phase grid (0.5° steps over a full period).
pub const DEFAULT_GRID_POINTS: usize = 721;

/// Flux used as the undistorted reference in [`flux_efficiency_grid`].
pub const REFERENCE_PAIRS_PER_PULSE: f64 = 1e-6;

/// Samples closer than this (relative to the peak) count as the same maximum.
const PEAK_TIE_TOLERANCE: f64 = 1e-12;

/// `DEFAULT_GRID_POINTS` samples over `[0, 2π]`, both ends included.
pub fn default_phase_grid() -> Vec<f64> {
    linspace(0.0, TAU, DEFAULT_GRID_POINTS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    PerPulse,
    Hertz,
}

/// Everything needed to recompute a simulated curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub source: SourceParams,
    pub loss: LossModel,
    pub cutoff: usize,
    pub convention: BeamSplitterConvention,
    /// Probability lost to the cutoff inside the interferometer.
    pub truncation_deficit: f64,
}

/// `N`-fold coincidence probability (or rate) sampled on a phase grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceCurve {
    pub phases: Vec<f64>,
    pub values: Vec<f64>,
    pub order: usize,
    pub units: Units,
    pub port: Port,
    /// `None` for curves that did not come from the simulator.
    pub params: Option<CurveParams>,
}

impl CoincidenceCurve {
    /// Wraps externally computed samples (per-pulse units, no parameters).
    pub fn from_values(phases: Vec<f64>, values: Vec<f64>, order: usize) -> Result<Self> {
        let curve = Self {
            phases,
            values,
            order,
            units: Units::PerPulse,
            port: Port::default(),
            params: None,
        };
        curve.validate()?;
        Ok(curve)
    }

    /// Samples `f` on `phases`.
    pub fn from_fn(phases: &[f64], order: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values(
            phases.to_vec(),
            phases.iter().map(|&p| f(p)).collect(),
            order,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.phases.len() != self.values.len() {
            return Err(Error::GridMismatch);
        }
        if self.phases.is_empty() {
            return Err(invalid("phases", "grid is empty"));
        }
        if self
            .phases
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
        {
            return Err(invalid("phases", "must be strictly increasing"));
        }
        if self.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("values", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Values scaled to unit peak (all zeros if the curve vanishes).
    pub fn normalized(&self) -> Vec<f64> {
        let peak = self.peak();
        if peak == 0.0 {
            return vec![0.0; self.values.len()];
        }
        self.values.iter().map(|v| v / peak).collect()
    }
}

/// Width, contrast and narrowing of the central fringe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeMetrics {
    pub fwhm: f64,
    pub visibility: f64,
    /// Position of the maximum the width was measured around.
    pub peak_phase: f64,
    /// `(π − w)/(π − π/N)`; `None` for `N < 2`.
    pub narrowing_fraction: Option<f64>,
    /// `(W_cl(N) − w)/(W_cl(N) − π/N)`; `None` for `N < 2`.
    pub narrowing_beyond_classical: Option<f64>,
}

struct Sampling {
    // samples of one period (the duplicated endpoint removed) or the raw grid
    n: usize,
    periodic: bool,
}

impl Sampling {
    fn of(phases: &[f64]) -> Self {
        let len = phases.len();
        if len < 3 {
            return Self {
                n: len,
                periodic: false,
            };
        }
        let span = phases[len - 1] - phases[0];
        let step = span / (len - 1) as f64;
        if (span - TAU).abs() < 1e-9 {
            Self {
                n: len - 1,
                periodic: true,
            }
        } else if (span + step - TAU).abs() < 1e-6 * step {
            Self {
                n: len,
                periodic: true,
            }
        } else {
            Self {
                n: len,
                periodic: false,
            }
        }
    }
}

/// Phase and value at a possibly wrapped index.
fn sample(curve: &CoincidenceCurve, s: &Sampling, i: isize) -> (f64, f64) {
    let n = s.n as isize;
    let wraps = i.div_euclid(n);
    let k = i.rem_euclid(n) as usize;
    (curve.phases[k] + wraps as f64 * TAU, curve.values[k])
}

fn visibility_of(max: f64, min: f64) -> f64 {
    if max + min == 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

fn peak_index(curve: &CoincidenceCurve, s: &Sampling) -> usize {
    let values = &curve.values[..s.n];
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let centre = 0.5 * (curve.phases[0] + curve.phases[curve.phases.len() - 1]);
    (0..s.n)
        .filter(|&i| values[i] >= max * (1.0 - PEAK_TIE_TOLERANCE))
        .min_by(|&a, &b| {
            let da = (curve.phases[a] - centre).abs();
            let db = (curve.phases[b] - centre).abs();
            da.total_cmp(&db)
        })
        .expect("non-empty grid")
}

/// Phase at which the curve crosses `level`, walking from the peak in
/// direction `dir` (±1).
fn crossing(
    curve: &CoincidenceCurve,
    s: &Sampling,
    start: usize,
    dir: isize,
    level: f64,
) -> Result<f64> {
    let mut i = start as isize;
    for _ in 0..s.n {
        let next = i + dir;
        if !s.periodic && (next < 0 || next >= s.n as isize) {
            return Err(Error::WidthUndefined);
        }
        let (p0, v0) = sample(curve, s, i);
        let (p1, v1) = sample(curve, s, next);
        if v1 <= level {
            let t = (v0 - level) / (v0 - v1);
            return Ok(p0 + t * (p1 - p0));
        }
        i = next;
    }
    Err(Error::WidthUndefined)
}

/// Full width at half maximum of the fringe containing the global maximum.
///
/// Grids spanning exactly one period (`[0, 2π]` or `[0, 2π)`) are treated as
/// periodic, so fringes straddling the grid edge are measured correctly.
/// Equal maxima are resolved toward the middle of the grid.
pub fn fwhm(curve: &CoincidenceCurve) -> Result<f64> {
    Ok(central_fringe(curve)?.0)
}

/// `(fwhm, peak phase, visibility)`.
fn central_fringe(curve: &CoincidenceCurve) -> Result<(f64, f64, f64)> {
    curve.validate()?;
    let s = Sampling::of(&curve.phases);
    let values = &curve.values[..s.n];
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let visibility = visibility_of(max, min);
    if visibility.is_nan() || visibility < 1e-6 {
        return Err(Error::NoFringe { visibility });
    }
    let peak = peak_index(curve, &s);
    let level = 0.5 * max;
    let right = crossing(curve, &s, peak, 1, level)?;
    let left = crossing(curve, &s, peak, -1, level)?;
    let width = right - left;
    if !(width > 0.0 && width < TAU) {
        return Err(Error::WidthUndefined);
    }
    Ok((width, curve.phases[peak], visibility))
}

/// `(max − min)/(max + min)` over the curve.
pub fn visibility(curve: &CoincidenceCurve) -> f64 {
    let max = curve
        .values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = curve.values.iter().copied().fold(f64::INFINITY, f64::min);
    visibility_of(max, min)
}

/// FWHM, visibility and (for `N >= 2`) both narrowing measures.
pub fn fringe_metrics(curve: &CoincidenceCurve) -> Result<FringeMetrics> {
    let (width, peak_phase, visibility) = central_fringe(curve)?;
    let (nf, nbc) = if curve.order >= 2 {
        (
            Some(narrowing_fraction(width, curve.order)?),
            Some(narrowing_beyond_classical(width, curve.order)?),
        )
    } else {
        (None, None)
    };
    Ok(FringeMetrics {
        fwhm: width,
        visibility,
        peak_phase,
        narrowing_fraction: nf,
        narrowing_beyond_classical: nbc,
    })
}

/// FWHM of `sin^{2N}(φ/2)`: `2π − 4 asin(2^{−1/(2N)})`.
pub fn classical_fwhm(order: usize) -> f64 {
    TAU - 4.0 * 2f64.powf(-0.5 / order as f64).asin()
}

/// FWHM of `sin²(Nφ/2)`: `π/N`.
pub fn noon_fwhm(order: usize) -> f64 {
    PI / order as f64
}

fn check_width(width: f64, order: usize) -> Result<()> {
    ensure_finite("width", width)?;
    if order < 2 {
        return Err(invalid("N", "narrowing needs N >= 2"));
    }
    if !(width > 0.0 && width < TAU) {
        return Err(invalid("width", "must lie in (0, 2π)"));
    }
    Ok(())
}

/// Share of the possible narrowing from the one-photon fringe width `π`
/// down to the NOON width `π/N`: 0 at `π`, 1 at `π/N`.
pub fn narrowing_fraction(width: f64, order: usize) -> Result<f64> {
    check_width(width, order)?;
    Ok((PI - width) / (PI - noon_fwhm(order)))
}

/// Narrowing measured from the classical `N`-fold width instead:
/// 0 at `W_cl(N)`, 1 at `π/N`.
pub fn narrowing_beyond_classical(width: f64, order: usize) -> Result<f64> {
    check_width(width, order)?;
    let classical = classical_fwhm(order);
    Ok((classical - width) / (classical - noon_fwhm(order)))
}

/// Least-squares slope of `ln(width)` against `ln N`.
pub fn scaling_exponent(widths: &[(usize, f64)]) -> Result<f64> {
    if widths.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: widths.len(),
        });
    }
    if widths
        .iter()
        .any(|&(n, w)| n == 0 || !w.is_finite() || w <= 0.0)
    {
        return Err(invalid(
            "widths",
            "orders must be >= 1 and widths finite and > 0",
        ));
    }
    let pts: Vec<(f64, f64)> = widths
        .iter()
        .map(|&(n, w)| ((n as f64).ln(), w.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("widths", "need at least two distinct orders"));
    }
    Ok(sxy / sxx)
}

/// Root-mean-square difference between the unit-peak shapes of two curves on
/// the same grid.
pub fn distortion_score(curve: &CoincidenceCurve, reference: &CoincidenceCurve) -> Result<f64> {
    if curve.phases.len() != reference.phases.len()
        || curve
            .phases
            .iter()
            .zip(&reference.phases)
            .any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::GridMismatch);
    }
    let a = curve.normalized();
    let b = reference.normalized();
    let sum: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum();
    Ok((sum / a.len() as f64).sqrt())
}

/// One point of a γ sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPoint {
    pub gamma_inverse: f64,
    pub source: SourceParams,
    pub curve: CoincidenceCurve,
    pub metrics: FringeMetrics,
}

/// Holds `|α|` and `θ_cs` of `base` fixed and sets `r = γ⁻¹|α|²` for each value.
///
/// The fringe must narrow monotonically as γ⁻¹ grows; a wider fringe at a
/// larger γ⁻¹ is reported as [`Error::NonMonotone`].
pub fn gamma_sweep(
    base: &SourceParams,
    loss: &LossModel,
    order: usize,
    gamma_inverse_values: &[f64],
    phases: &[f64],
    opts: &CurveOptions,
) -> Result<Vec<GammaPoint>> {
    for &g in gamma_inverse_values {
        ensure_finite("gamma_inverse", g)?;
        if !(0.0..=1.0).contains(&g) {
            return Err(invalid("gamma_inverse", format!("{g} is outside [0, 1]")));
        }
    }
    let points = gamma_inverse_values
        .par_iter()
        .map(|&g| {
            let source = SourceParams::with_gamma_inverse(base.alpha_mag, base.theta_cs, g)?;
            let curve = n_fold_curve(&source, loss, order, phases, opts)?;
            let metrics = fringe_metrics(&curve)?;
            Ok(GammaPoint {
                gamma_inverse: g,
                source,
                curve,
                metrics,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut order_idx: Vec<usize> = (0..points.len()).collect();
    order_idx.sort_by(|&a, &b| points[a].gamma_inverse.total_cmp(&points[b].gamma_inverse));
    for w in order_idx.windows(2) {
        let (p, q) = (&points[w[0]], &points[w[1]]);
        if q.metrics.fwhm > p.metrics.fwhm * (1.0 + 1e-9) {
            return Err(Error::NonMonotone {
                at_prev: p.gamma_inverse,
                at_next: q.gamma_inverse,
                prev: p.metrics.fwhm,
                next: q.metrics.fwhm,
            });
        }
    }
    Ok(points)
}

/// Source on the flux/γ parameterisation: `sinh² r = pairs_per_pulse`,
/// `|α|² = r/γ⁻¹`, `θ_cs = π/2`. At `γ⁻¹ = 1` this is the NOON condition.
pub fn source_for_flux(gamma_inverse: f64, pairs_per_pulse: f64) -> Result<SourceParams> {
    ensure_finite("gamma_inverse", gamma_inverse)?;
    ensure_finite("pairs_per_pulse", pairs_per_pulse)?;
    if gamma_inverse <= 0.0 {
        return Err(invalid("gamma_inverse", "must be > 0"));
    }
    if pairs_per_pulse < 0.0 {
        return Err(invalid("pairs_per_pulse", "must be >= 0"));
    }
    let r = pairs_per_pulse.sqrt().asinh();
    SourceParams::new((r / gamma_inverse).sqrt(), FRAC_PI_2, r)
}

/// One cell of a flux × efficiency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxPoint {
    pub eta: f64,
    pub pairs_per_pulse: f64,
    pub source: SourceParams,
    pub flux: FluxModel,
    pub curve: CoincidenceCurve,
    pub rate: CoincidenceCurve,
    /// `None` when the curve has no fringe (e.g. zero flux).
    pub metrics: Option<FringeMetrics>,
    /// Shape distance to the same `(γ⁻¹, η)` at [`REFERENCE_PAIRS_PER_PULSE`].
    pub distortion: f64,
    pub peak_rate_hz: f64,
}

/// Simulates the full state (no subspace truncation) at every `(η, flux)`
/// pair, in row-major order over `eta_values` × `pairs_per_pulse_values`.
#[allow(clippy::too_many_arguments)]
pub fn flux_efficiency_grid(
    gamma_inverse: f64,
    eta_values: &[f64],
    pairs_per_pulse_values: &[f64],
    order: usize,
    phases: &[f64],
    rep_rate: f64,
    opts: &CurveOptions,
) -> Result<Vec<FluxPoint>> {
    for &eta in eta_values {
        ensure_finite("eta", eta)?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid("eta", format!("{eta} is outside (0, 1]")));
        }
    }
    let cells: Vec<(f64, f64)> = eta_values
        .iter()
        .flat_map(|&e| pairs_per_pulse_values.iter().map(move |&p| (e, p)))
        .collect();
    let reference_source = source_for_flux(gamma_inverse, REFERENCE_PAIRS_PER_PULSE)?;

    cells
        .par_iter()
        .map(|&(eta, ppp)| {
            let loss = LossModel::uniform(eta)?;
            let source = source_for_flux(gamma_inverse, ppp)?;
            let flux = FluxModel::new(rep_rate, ppp)?;
            let curve = n_fold_curve(&source, &loss, order, phases, opts)?;
            let reference = n_fold_curve(&reference_source, &loss, order, phases, opts)?;
            let rate = rate_curve(&curve, &flux)?;
            let metrics = match fringe_metrics(&curve) {
                Ok(m) => Some(m),
                Err(Error::NoFringe { .. }) | Err(Error::WidthUndefined) => None,
                Err(e) => return Err(e),
            };
            Ok(FluxPoint {
                eta,
                pairs_per_pulse: ppp,
                source,
                flux,
                distortion: distortion_score(&curve, &reference)?,
                peak_rate_hz: rate.peak(),
                curve,
                rate,
                metrics,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        linspace(0.0, TAU, n)
    }

    fn analytic(n: usize, order: usize, f: impl Fn(f64) -> f64) -> CoincidenceCurve {
        CoincidenceCurve::from_fn(&grid(n), order, f).unwrap()
    }

    /// Bisection for the half-max point of `sin^{2N}(φ/2)` on `(0, π)`.
    fn classical_half_max_root(order: usize) -> f64 {
        let f = |x: f64| (x / 2.0).sin().powi(2 * order as i32) - 0.5;
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn one_photon_fringe_is_pi_wide() {
        let c = analytic(2001, 1, |p| (p / 2.0).sin().powi(2));
        assert!((fwhm(&c).unwrap() - PI).abs() < 1e-6);
    }

    #[test]
    fn noon_fringe_is_a_third() {
        let c = analytic(2001, 3, |p| (1.5 * p).sin().powi(2));
        assert!((fwhm(&c).unwrap() - PI / 3.0).abs() < 1e-6);
        // ties resolve to the central fringe
        let m = fringe_metrics(&c).unwrap();
        assert!((m.peak_phase - PI).abs() < 1e-12);
    }

    #[test]
    fn classical_width_formula() {
        for order in 1..=6 {
            let root = classical_half_max_root(order);
            assert!((classical_fwhm(order) - (TAU - 2.0 * root)).abs() < 1e-12);
        }
        assert!((classical_fwhm(3) - 1.885_905).abs() < 1e-6);
        assert!((classical_fwhm(1) - PI).abs() < 1e-15);
    }

    #[test]
    fn classical_sixth_power() {
        let c = analytic(20_001, 3, |p| (p / 2.0).sin().powi(6));
        assert!((fwhm(&c).unwrap() - classical_fwhm(3)).abs() < 1e-6);
    }

    #[test]
    fn grid_convergence_is_second_order() {
        // each crossing is misplaced by at most h² f''/(8 f') ≈ 0.036 h² here
        let f = |p: f64| (p / 2.0).sin().powi(6);
        let exact = classical_fwhm(3);
        for intervals in [90, 180, 360, 720] {
            let h = TAU / intervals as f64;
            let coarse = fwhm(&analytic(intervals + 1, 3, f)).unwrap();
            let fine = fwhm(&analytic(2 * intervals + 1, 3, f)).unwrap();
            assert!((coarse - fine).abs() < 0.08 * h * h, "{intervals}");
            assert!((coarse - exact).abs() < 0.08 * h * h, "{intervals}");
        }
    }

    #[test]
    fn fringe_across_the_grid_edge() {
        // peak at φ = 0 on a [0, 2π) grid
        let phases: Vec<f64> = (0..720).map(|i| i as f64 * TAU / 720.0).collect();
        let c = CoincidenceCurve::from_fn(&phases, 1, |p| (p / 2.0).cos().powi(2)).unwrap();
        assert!((fwhm(&c).unwrap() - PI).abs() < 1e-5);
    }

    #[test]
    fn flat_and_uncrossed_curves() {
        let flat = analytic(101, 2, |_| 0.3);
        assert!(matches!(fwhm(&flat), Err(Error::NoFringe { .. })));
        let shallow = analytic(101, 2, |p| 1.0 + 0.2 * p.cos());
        assert!(matches!(fwhm(&shallow), Err(Error::WidthUndefined)));
        let partial =
            CoincidenceCurve::from_fn(&linspace(2.0, 4.0, 50), 1, |p| (p / 2.0).sin().powi(2))
                .unwrap();
        assert!(matches!(fwhm(&partial), Err(Error::WidthUndefined)));
    }

    #[test]
    fn narrowing_endpoints() {
        for order in 2..=5 {
            assert_eq!(narrowing_fraction(PI, order).unwrap(), 0.0);
            assert!((narrowing_fraction(PI / order as f64, order).unwrap() - 1.0).abs() < 1e-15);
            assert_eq!(
                narrowing_beyond_classical(classical_fwhm(order), order).unwrap(),
                0.0
            );
            assert!(
                (narrowing_beyond_classical(noon_fwhm(order), order).unwrap() - 1.0).abs() < 1e-15
            );
        }
        assert!(narrowing_fraction(1.0, 1).is_err());
        assert!(narrowing_fraction(7.0, 3).is_err());
        let a = narrowing_fraction(2.0, 3).unwrap();
        let b = narrowing_fraction(1.5, 3).unwrap();
        assert!(b > a);
    }

    #[test]
    fn exponent_of_power_laws() {
        let noon: Vec<(usize, f64)> = (1..=4).map(|n| (n, PI / n as f64)).collect();
        assert!((scaling_exponent(&noon).unwrap() + 1.0).abs() < 1e-10);
        let classical: Vec<(usize, f64)> = (1..=4).map(|n| (n, classical_fwhm(n))).collect();
        assert!((scaling_exponent(&classical).unwrap() + 0.5).abs() < 0.05);
        assert!(matches!(
            scaling_exponent(&noon[..2]),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        ));
        assert!(scaling_exponent(&[(1, 1.0), (2, 0.0), (3, 1.0)]).is_err());
    }

    #[test]
    fn distortion_of_identical_shapes_is_zero() {
        let a = analytic(361, 3, |p| (p / 2.0).sin().powi(6));
        let b = analytic(361, 3, |p| 5.0 * (p / 2.0).sin().powi(6));
        assert!(distortion_score(&a, &b).unwrap() < 1e-15);
        let c = analytic(181, 3, |p| (p / 2.0).sin().powi(6));
        assert!(matches!(distortion_score(&a, &c), Err(Error::GridMismatch)));
    }

    #[test]
    fn curve_invariants_are_checked() {
        assert!(CoincidenceCurve::from_values(vec![0.0, 0.0], vec![1.0, 1.0], 1).is_err());
        assert!(CoincidenceCurve::from_values(vec![0.0, 1.0], vec![1.0], 1).is_err());
        assert!(CoincidenceCurve::from_values(vec![0.0, 1.0], vec![1.0, -1.0], 1).is_err());
    }

    #[test]
    fn flux_parameterisation() {
        let s = source_for_flux(0.1, 0.1).unwrap();
        assert!((s.pairs_per_pulse() - 0.1).abs() < 1e-14);
        assert!((s.gamma_inverse().unwrap() - 0.1).abs() < 1e-14);
        let noon = source_for_flux(1.0, 1e-4).unwrap();
        assert!((noon.gamma().unwrap() - 1.0).abs() < 1e-14);
        assert!((2.0 * noon.theta_cs - PI).abs() < 1e-15);
        assert!(source_for_flux(0.0, 0.1).is_err());
    }

    #[test]
    fn default_grid_has_half_degree_steps() {
        let g = default_phase_grid();
        assert_eq!(g.len(), 721);
        assert!((g[1] - 0.5f64.to_radians()).abs() < 1e-15);
        assert!((g[360] - PI).abs() < 1e-15);
    }
}
