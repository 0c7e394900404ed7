//! Photon-number-resolving detection after binomial loss.
//!
//! Loss is applied once, at the detectors: each photon reaching detector `e`
//! (`f`) survives with probability `eta_e` (`eta_f`). Equal-efficiency loss
//! commutes with balanced linear optics, so this is exact for the symmetric
//! case. Lossy higher-order events feed lower-order outcomes; the sum over
//! true photon numbers below keeps that contamination explicitly.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Binomial};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{CoincidenceCurve, CurveParams, Units};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::fock::{SourceParams, TwoModeState};
use crate::math::binomial_pmf;
use crate::optics::{BeamSplitterConvention, MachZehnder};

/// Pulse repetition rate of the pump laser, in Hz.
pub const DEFAULT_REP_RATE: f64 = 8.0e7;

/// Simulations refuse interferometer states that lost more than this.
pub const DEFAULT_MAX_TRUNCATION_DEFICIT: f64 = 1e-8;

/// Largest per-mode cutoff a curve will use.
pub const MAX_CURVE_CUTOFF: usize = 120;

const CUTOFF_STEP: usize = 4;

/// Per-detector survival probabilities and optional dark-click probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    pub eta_e: f64,
    pub eta_f: f64,
    #[serde(default)]
    pub dark_e: f64,
    #[serde(default)]
    pub dark_f: f64,
}

impl LossModel {
    pub fn new(eta_e: f64, eta_f: f64) -> Result<Self> {
        let loss = Self {
            eta_e,
            eta_f,
            dark_e: 0.0,
            dark_f: 0.0,
        };
        loss.validate()?;
        Ok(loss)
    }

    /// The same efficiency on both detectors.
    pub fn uniform(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }

    pub fn lossless() -> Self {
        Self {
            eta_e: 1.0,
            eta_f: 1.0,
            dark_e: 0.0,
            dark_f: 0.0,
        }
    }

    /// Adds a per-pulse dark-click probability to each detector.
    pub fn with_dark_clicks(mut self, dark_e: f64, dark_f: f64) -> Result<Self> {
        self.dark_e = dark_e;
        self.dark_f = dark_f;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eta_e", self.eta_e),
            ("eta_f", self.eta_f),
            ("dark_e", self.dark_e),
            ("dark_f", self.dark_f),
        ] {
            ensure_finite(name, v)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, format!("must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    fn has_dark_clicks(&self) -> bool {
        self.dark_e > 0.0 || self.dark_f > 0.0
    }
}

impl Default for LossModel {
    fn default() -> Self {
        Self::lossless()
    }
}

/// Pulsed-source timing: converts per-pulse probabilities to rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxModel {
    /// Pulse repetition frequency in Hz.
    pub rep_rate: f64,
    /// Mean SPDC pairs per pulse, `sinh² r`.
    pub pairs_per_pulse: f64,
}

impl FluxModel {
    pub fn new(rep_rate: f64, pairs_per_pulse: f64) -> Result<Self> {
        let flux = Self {
            rep_rate,
            pairs_per_pulse,
        };
        flux.validate()?;
        Ok(flux)
    }

    pub fn for_source(source: &SourceParams) -> Self {
        Self {
            rep_rate: DEFAULT_REP_RATE,
            pairs_per_pulse: source.pairs_per_pulse(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("rep_rate", self.rep_rate)?;
        ensure_finite("pairs_per_pulse", self.pairs_per_pulse)?;
        if self.rep_rate <= 0.0 {
            return Err(invalid("rep_rate", "must be > 0"));
        }
        if self.pairs_per_pulse < 0.0 {
            return Err(invalid("pairs_per_pulse", "must be >= 0"));
        }
        Ok(())
    }

    /// Pair rate `N_p` in pairs per second.
    pub fn pair_rate(&self) -> f64 {
        self.pairs_per_pulse * self.rep_rate
    }
}

impl Default for FluxModel {
    fn default() -> Self {
        Self {
            rep_rate: DEFAULT_REP_RATE,
            pairs_per_pulse: 0.0,
        }
    }
}

/// Detected photon counts `(n_e, n_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClickOutcome {
    pub n_e: usize,
    pub n_f: usize,
}

impl ClickOutcome {
    pub fn new(n_e: usize, n_f: usize) -> Self {
        Self { n_e, n_f }
    }
}

/// Detector that registers the `N`-fold event; the other sees nothing.
///
/// With the default beamsplitter convention the interferometer sends
/// coherent light to `E` at zero phase, so `F` carries the dark-fringe
/// `|0, N⟩_{e,f}` event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Port {
    E,
    #[default]
    F,
}

impl Port {
    pub fn outcome(self, n: usize) -> ClickOutcome {
        match self {
            Port::E => ClickOutcome::new(n, 0),
            Port::F => ClickOutcome::new(0, n),
        }
    }
}

/// One term of the loss sum: true photon numbers and their contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickTerm {
    pub m_e: usize,
    pub m_f: usize,
    pub probability: f64,
}

/// Every term `|ψ(m_e, m_f)|² B(m_e, n_e, η_e) B(m_f, n_f, η_f)` that feeds the
/// outcome, in summation order. Dark clicks are not included.
pub fn click_terms(
    state: &TwoModeState,
    outcome: ClickOutcome,
    loss: &LossModel,
) -> Vec<ClickTerm> {
    let cutoff = state.cutoff();
    let mut terms = Vec::new();
    if outcome.n_e > cutoff || outcome.n_f > cutoff {
        return terms;
    }
    for m_e in outcome.n_e..=cutoff {
        let we = binomial_pmf(m_e, outcome.n_e, loss.eta_e);
        for m_f in outcome.n_f..=cutoff {
            let p = state.amplitude(m_e, m_f).norm_sqr();
            if p == 0.0 {
                continue;
            }
            let wf = binomial_pmf(m_f, outcome.n_f, loss.eta_f);
            terms.push(ClickTerm {
                m_e,
                m_f,
                probability: p * we * wf,
            });
        }
    }
    terms
}

fn thinned_probability(state: &TwoModeState, n_e: usize, n_f: usize, loss: &LossModel) -> f64 {
    let cutoff = state.cutoff();
    if n_e > cutoff || n_f > cutoff {
        return 0.0;
    }
    let mut total = 0.0;
    for m_e in n_e..=cutoff {
        let we = binomial_pmf(m_e, n_e, loss.eta_e);
        if we == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for m_f in n_f..=cutoff {
            row += state.amplitude(m_e, m_f).norm_sqr() * binomial_pmf(m_f, n_f, loss.eta_f);
        }
        total += we * row;
    }
    total
}

/// `(1−d)` weight for `k = 0` and `d` for `k = 1` extra dark clicks.
fn dark_weights(d: f64) -> [f64; 2] {
    [1.0 - d, d]
}

/// Probability of registering `outcome` after binomial loss (and dark clicks,
/// if the model has any).
pub fn click_probability(state: &TwoModeState, outcome: ClickOutcome, loss: &LossModel) -> f64 {
    if !loss.has_dark_clicks() {
        return thinned_probability(state, outcome.n_e, outcome.n_f, loss);
    }
    let mut total = 0.0;
    for (de, we) in dark_weights(loss.dark_e).into_iter().enumerate() {
        for (df, wf) in dark_weights(loss.dark_f).into_iter().enumerate() {
            if de > outcome.n_e || df > outcome.n_f || we * wf == 0.0 {
                continue;
            }
            total += we * wf * thinned_probability(state, outcome.n_e - de, outcome.n_f - df, loss);
        }
    }
    total
}

/// Joint distribution of detected counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickDistribution {
    dim: usize,
    values: Vec<f64>,
}

impl ClickDistribution {
    /// Largest representable count per detector.
    pub fn max_count(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, outcome: ClickOutcome) -> f64 {
        if outcome.n_e >= self.dim || outcome.n_f >= self.dim {
            return 0.0;
        }
        self.values[outcome.n_e * self.dim + outcome.n_f]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn pmf_table(max: usize, eta: f64) -> Vec<Vec<f64>> {
    (0..=max)
        .map(|m| (0..=m).map(|n| binomial_pmf(m, n, eta)).collect())
        .collect()
}

/// All outcome probabilities at once, by thinning each detector in turn.
pub fn click_distribution(state: &TwoModeState, loss: &LossModel) -> ClickDistribution {
    let dim = state.dim();
    let be = pmf_table(state.cutoff(), loss.eta_e);
    let bf = pmf_table(state.cutoff(), loss.eta_f);
    let p = state.photon_number_distribution();

    // thin detector e: half[n_e][m_f]
    let mut half = vec![0.0; dim * dim];
    for (m_e, row) in be.iter().enumerate().take(dim) {
        for (n_e, &w) in row.iter().enumerate().take(m_e + 1) {
            for m_f in 0..dim {
                half[n_e * dim + m_f] += w * p.get(m_e, m_f);
            }
        }
    }
    let mut thinned = vec![0.0; dim * dim];
    for n_e in 0..dim {
        for m_f in 0..dim {
            let x = half[n_e * dim + m_f];
            for n_f in 0..=m_f {
                thinned[n_e * dim + n_f] += x * bf[m_f][n_f];
            }
        }
    }
    if !loss.has_dark_clicks() {
        return ClickDistribution {
            dim,
            values: thinned,
        };
    }

    let out_dim = dim + 1;
    let mut values = vec![0.0; out_dim * out_dim];
    for n_e in 0..dim {
        for n_f in 0..dim {
            let x = thinned[n_e * dim + n_f];
            for (de, we) in dark_weights(loss.dark_e).into_iter().enumerate() {
                for (df, wf) in dark_weights(loss.dark_f).into_iter().enumerate() {
                    values[(n_e + de) * out_dim + n_f + df] += we * wf * x;
                }
            }
        }
    }
    ClickDistribution {
        dim: out_dim,
        values,
    }
}

/// Empirical click counts from direct simulation of the loss channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickSamples {
    samples: u64,
    dim: usize,
    counts: Vec<u64>,
    truncated: u64,
}

impl ClickSamples {
    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn count(&self, outcome: ClickOutcome) -> u64 {
        if outcome.n_e >= self.dim || outcome.n_f >= self.dim {
            return 0;
        }
        self.counts[outcome.n_e * self.dim + outcome.n_f]
    }

    /// Draws that landed in the truncated (unrepresented) part of the state.
    pub fn truncated(&self) -> u64 {
        self.truncated
    }

    pub fn probability(&self, outcome: ClickOutcome) -> f64 {
        self.count(outcome) as f64 / self.samples as f64
    }

    /// Binomial standard error of [`probability`](Self::probability).
    pub fn standard_error(&self, outcome: ClickOutcome) -> f64 {
        let p = self.probability(outcome);
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Draws photon numbers from the state, then thins every photon independently.
///
/// The truncation deficit is kept as its own category, so estimates are
/// directly comparable with [`click_probability`].
pub fn sample_clicks(
    state: &TwoModeState,
    loss: &LossModel,
    samples: u64,
    seed: u64,
) -> Result<ClickSamples> {
    loss.validate()?;
    if samples == 0 {
        return Err(invalid("samples", "must be > 0"));
    }
    let dim = state.dim();
    let mut weights: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    weights.push(state.truncation_deficit());
    let index = WeightedIndex::new(&weights).map_err(|e| invalid("state", e.to_string()))?;
    let dark_e = Bernoulli::new(loss.dark_e).map_err(|e| invalid("dark_e", e.to_string()))?;
    let dark_f = Bernoulli::new(loss.dark_f).map_err(|e| invalid("dark_f", e.to_string()))?;

    let out_dim = dim + usize::from(loss.has_dark_clicks());
    let mut counts = vec![0u64; out_dim * out_dim];
    let mut truncated = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let idx = index.sample(&mut rng);
        if idx == dim * dim {
            truncated += 1;
            continue;
        }
        let (m_e, m_f) = (idx / dim, idx % dim);
        let mut n_e = thin(m_e, loss.eta_e, &mut rng);
        let mut n_f = thin(m_f, loss.eta_f, &mut rng);
        n_e += usize::from(dark_e.sample(&mut rng));
        n_f += usize::from(dark_f.sample(&mut rng));
        counts[n_e * out_dim + n_f] += 1;
    }
    Ok(ClickSamples {
        samples,
        dim: out_dim,
        counts,
        truncated,
    })
}

fn thin(m: usize, eta: f64, rng: &mut ChaCha8Rng) -> usize {
    if m == 0 {
        return 0;
    }
    // eta is validated to [0, 1], which Binomial accepts
    Binomial::new(m as u64, eta)
        .expect("valid binomial")
        .sample(rng) as usize
}

/// How an `N`-fold curve is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub port: Port,
    /// Per-mode photon cutoff. `None` starts at the source default and grows
    /// until `max_truncation_deficit` is met.
    pub cutoff: Option<usize>,
    /// Largest truncation deficit tolerated inside the interferometer.
    pub max_truncation_deficit: f64,
    pub convention: BeamSplitterConvention,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            port: Port::F,
            cutoff: None,
            max_truncation_deficit: DEFAULT_MAX_TRUNCATION_DEFICIT,
            convention: BeamSplitterConvention::RealSymmetric,
        }
    }
}

fn validate_phases(phases: &[f64]) -> Result<()> {
    if phases.is_empty() {
        return Err(invalid("phases", "grid is empty"));
    }
    for &p in phases {
        ensure_finite("phases", p)?;
    }
    if phases.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("phases", "must be strictly increasing"));
    }
    Ok(())
}

/// Probability per pulse of the `N`-fold event on `opts.port`, for each phase.
pub fn n_fold_curve(
    source: &SourceParams,
    loss: &LossModel,
    order: usize,
    phases: &[f64],
    opts: &CurveOptions,
) -> Result<CoincidenceCurve> {
    source.validate()?;
    loss.validate()?;
    validate_phases(phases)?;
    if order == 0 {
        return Err(invalid("N", "must be >= 1"));
    }
    let limit = opts.max_truncation_deficit;
    if !(0.0..=1.0).contains(&limit) {
        return Err(invalid("max_truncation_deficit", "must lie in [0, 1]"));
    }
    if let Some(c) = opts.cutoff {
        if c < order {
            return Err(invalid("cutoff", format!("{c} is below N = {order}")));
        }
        if c > MAX_CURVE_CUTOFF {
            return Err(invalid("cutoff", format!("must be <= {MAX_CURVE_CUTOFF}")));
        }
    }

    // An explicit cutoff is used as given; the default grows until the
    // deficit after the first beamsplitter is within the limit.
    let mut cutoff = opts
        .cutoff
        .unwrap_or_else(|| source.default_cutoff().max(order));
    let (mz, interior) = loop {
        let input = source.input_state(cutoff)?;
        let mz = MachZehnder::new(cutoff, opts.convention);
        let interior = mz.split(&input);
        let deficit = interior.truncation_deficit();
        if deficit <= limit {
            break (mz, interior);
        }
        if opts.cutoff.is_some() || cutoff >= MAX_CURVE_CUTOFF {
            return Err(Error::CutoffInsufficient {
                cutoff,
                deficit,
                limit,
            });
        }
        cutoff = (cutoff + CUTOFF_STEP).min(MAX_CURVE_CUTOFF);
    };
    let deficit = interior.truncation_deficit();

    let outcome = opts.port.outcome(order);
    let values = phases
        .par_iter()
        .map(|&phi| click_probability(&mz.recombine(&interior, phi), outcome, loss))
        .collect();

    Ok(CoincidenceCurve {
        phases: phases.to_vec(),
        values,
        order,
        units: Units::PerPulse,
        port: opts.port,
        params: Some(CurveParams {
            source: *source,
            loss: *loss,
            cutoff,
            convention: opts.convention,
            truncation_deficit: deficit,
        }),
    })
}

/// Converts a per-pulse curve to a rate in Hz.
pub fn rate_curve(curve: &CoincidenceCurve, flux: &FluxModel) -> Result<CoincidenceCurve> {
    flux.validate()?;
    if curve.units != Units::PerPulse {
        return Err(invalid("curve", "already expressed in Hz"));
    }
    let mut out = curve.clone();
    out.values.iter_mut().for_each(|v| *v *= flux.rep_rate);
    out.units = Units::Hertz;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, product_state, squeezed_vacuum};
    use crate::math::linspace;
    use crate::optics::mach_zehnder;
    use std::f64::consts::PI;

    fn mixed_state(cutoff: usize) -> TwoModeState {
        let a = coherent_state(0.8, 0.3, cutoff).unwrap();
        let b = squeezed_vacuum(0.4, cutoff).unwrap();
        mach_zehnder(&product_state(&a, &b).unwrap(), 1.1)
    }

    #[test]
    fn lossless_limit_reads_the_distribution() {
        let s = mixed_state(12);
        let loss = LossModel::lossless();
        for (n_e, n_f) in [(0, 0), (1, 2), (3, 0), (0, 3)] {
            let want = s.amplitude(n_e, n_f).norm_sqr();
            assert_eq!(
                click_probability(&s, ClickOutcome::new(n_e, n_f), &loss),
                want
            );
        }
    }

    #[test]
    fn single_photon_survival() {
        let s = TwoModeState::fock(4, 1, 0);
        let loss = LossModel::new(0.6, 1.0).unwrap();
        let p = click_probability(&s, ClickOutcome::new(1, 0), &loss);
        assert!((p - 0.6).abs() < 1e-15);
    }

    #[test]
    fn two_photon_thinning() {
        let s = TwoModeState::fock(4, 2, 0);
        let loss = LossModel::new(0.5, 1.0).unwrap();
        let p = click_probability(&s, ClickOutcome::new(1, 0), &loss);
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn outcomes_are_complete() {
        let s = mixed_state(16);
        for loss in [
            LossModel::uniform(0.3).unwrap(),
            LossModel::new(0.9, 0.05).unwrap(),
            LossModel::uniform(0.2)
                .unwrap()
                .with_dark_clicks(0.01, 0.3)
                .unwrap(),
        ] {
            let d = click_distribution(&s, &loss);
            assert!((d.total() + s.truncation_deficit() - 1.0).abs() < 1e-10);
            assert!(d.as_slice().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn distribution_matches_single_outcomes() {
        let s = mixed_state(10);
        let loss = LossModel::new(0.7, 0.4)
            .unwrap()
            .with_dark_clicks(0.05, 0.02)
            .unwrap();
        let d = click_distribution(&s, &loss);
        for n_e in 0..=d.max_count() {
            for n_f in 0..=d.max_count() {
                let o = ClickOutcome::new(n_e, n_f);
                assert!((d.get(o) - click_probability(&s, o, &loss)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn contamination_terms() {
        let s = mixed_state(12);
        let loss = LossModel::new(0.35, 0.8).unwrap();
        let o = ClickOutcome::new(3, 0);
        let terms = click_terms(&s, o, &loss);
        assert!(terms.iter().all(|t| t.probability >= 0.0));
        let sum: f64 = terms.iter().map(|t| t.probability).sum();
        assert!((sum - click_probability(&s, o, &loss)).abs() < 1e-15);
        let direct = terms.iter().find(|t| t.m_e == 3 && t.m_f == 0).unwrap();
        let want = s.amplitude(3, 0).norm_sqr() * 0.35f64.powi(3);
        assert!((direct.probability - want).abs() < 1e-15 * want.max(1e-300));
    }

    #[test]
    fn exact_n_states_lose_signal_monotonically() {
        let s = TwoModeState::fock(6, 3, 0);
        let mut prev = f64::INFINITY;
        for eta in [1.0, 0.8, 0.5, 0.2, 0.0] {
            let p = click_probability(
                &s,
                ClickOutcome::new(3, 0),
                &LossModel::uniform(eta).unwrap(),
            );
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn monte_carlo_agrees_within_five_sigma() {
        let s = mixed_state(10);
        let loss = LossModel::new(0.6, 0.3).unwrap();
        let mc = sample_clicks(&s, &loss, 1_000_000, 7).unwrap();
        for (n_e, n_f) in [(0, 0), (1, 0), (0, 1), (2, 1), (3, 0)] {
            let o = ClickOutcome::new(n_e, n_f);
            let exact = click_probability(&s, o, &loss);
            let se = mc.standard_error(o).max(1e-6);
            assert!((mc.probability(o) - exact).abs() < 5.0 * se, "{o:?}");
        }
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let s = mixed_state(8);
        let loss = LossModel::uniform(0.5).unwrap();
        let a = sample_clicks(&s, &loss, 10_000, 3).unwrap();
        let b = sample_clicks(&s, &loss, 10_000, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn curve_is_even_in_phase_for_real_structure() {
        let phases: Vec<f64> = linspace(-PI, PI, 41);
        for theta in [0.0, PI / 2.0] {
            let src = SourceParams::new(0.3, theta, 0.05).unwrap();
            let c = n_fold_curve(
                &src,
                &LossModel::uniform(0.4).unwrap(),
                3,
                &phases,
                &CurveOptions::default(),
            )
            .unwrap();
            let n = c.values.len();
            for i in 0..n {
                assert!((c.values[i] - c.values[n - 1 - i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn curve_is_periodic_and_bounded() {
        let src = SourceParams::new(0.5, 0.7, -0.2).unwrap();
        let phases = [0.3, 1.7, 0.3 + 2.0 * PI, 1.7 + 2.0 * PI];
        let c = n_fold_curve(
            &src,
            &LossModel::uniform(0.6).unwrap(),
            2,
            &phases,
            &CurveOptions::default(),
        )
        .unwrap();
        assert!(c.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!((c.values[0] - c.values[2]).abs() < 1e-10);
        assert!((c.values[1] - c.values[3]).abs() < 1e-10);
    }

    #[test]
    fn small_cutoff_is_refused() {
        let src = SourceParams::classical(1.0);
        let opts = CurveOptions {
            cutoff: Some(2),
            ..CurveOptions::default()
        };
        let err = n_fold_curve(&src, &LossModel::lossless(), 2, &[0.0, 1.0], &opts).unwrap_err();
        assert!(matches!(err, Error::CutoffInsufficient { cutoff: 2, .. }));
    }

    #[test]
    fn default_cutoff_grows_to_meet_the_limit() {
        let src = SourceParams::new(0.0, 0.0, 0.4).unwrap();
        let c = n_fold_curve(
            &src,
            &LossModel::lossless(),
            2,
            &[0.0],
            &CurveOptions::default(),
        )
        .unwrap();
        let params = c.params.unwrap();
        assert!(params.cutoff > src.default_cutoff());
        assert!(params.truncation_deficit <= DEFAULT_MAX_TRUNCATION_DEFICIT);
    }

    #[test]
    fn ports_mirror_under_phase_shift_by_pi() {
        let src = SourceParams::classical(0.4);
        let phases = [0.4, 1.3];
        let shifted: Vec<f64> = phases.iter().map(|p| p + PI).collect();
        let f = n_fold_curve(
            &src,
            &LossModel::lossless(),
            2,
            &phases,
            &CurveOptions::default(),
        )
        .unwrap();
        let opts = CurveOptions {
            port: Port::E,
            ..CurveOptions::default()
        };
        let e = n_fold_curve(&src, &LossModel::lossless(), 2, &shifted, &opts).unwrap();
        for (a, b) in f.values.iter().zip(&e.values) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rates() {
        let curve = CoincidenceCurve::from_values(vec![0.0, 1.0], vec![1e-9, 0.0], 3).unwrap();
        let flux = FluxModel::new(DEFAULT_REP_RATE, 0.01).unwrap();
        let hz = rate_curve(&curve, &flux).unwrap();
        assert!((hz.values[0] - 0.08).abs() < 1e-15);
        assert_eq!(hz.values[1], 0.0);
        assert_eq!(hz.units, Units::Hertz);
        let double = rate_curve(
            &curve,
            &FluxModel::new(2.0 * DEFAULT_REP_RATE, 0.01).unwrap(),
        )
        .unwrap();
        assert_eq!(double.values[0], 2.0 * hz.values[0]);
        assert!(rate_curve(&hz, &flux).is_err());
        assert!((flux.pair_rate() - 8.0e5).abs() < 1e-6);
    }

    #[test]
    fn loss_model_rejects_out_of_range() {
        assert!(LossModel::uniform(1.2).is_err());
        assert!(LossModel::uniform(f64::NAN).is_err());
        assert!(LossModel::lossless().with_dark_clicks(-0.1, 0.0).is_err());
        assert!(FluxModel::new(0.0, 0.1).is_err());
    }
}
