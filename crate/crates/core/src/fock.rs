//! Truncated Fock-basis states: coherent and squeezed-vacuum single modes and
//! their two-mode product.
//!
//! Amplitudes are assembled in log-magnitude + phase form from a cumulative
//! log-factorial table, so large cutoffs never overflow. Every state carries
//! the probability mass its cutoff dropped (`truncation_deficit`), and
//! `sum |amplitude|^2 + truncation_deficit == 1` holds at construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::math::LogFactorial;

/// Constructors refuse cutoffs that drop more than this much probability.
pub const MAX_CONSTRUCTION_DEFICIT: f64 = 0.5;

/// Upper bound applied by [`default_cutoff`].
pub const MAX_DEFAULT_CUTOFF: usize = 60;

/// Tail sums stop once terms fall below `exp(-LOG_TAIL_FLOOR)`.
const LOG_TAIL_FLOOR: f64 = 745.0;

/// Physical parameters of the coherent + SPDC input.
///
/// `gamma` (pair amplitude ratio) is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    /// Coherent amplitude `|α|`.
    pub alpha_mag: f64,
    /// Coherent-state phase `θ_cs` in radians.
    pub theta_cs: f64,
    /// Squeezing parameter; the sign selects the SPDC phase convention.
    pub r: f64,
}

impl SourceParams {
    pub fn new(alpha_mag: f64, theta_cs: f64, r: f64) -> Result<Self> {
        let params = Self {
            alpha_mag,
            theta_cs,
            r,
        };
        params.validate()?;
        Ok(params)
    }

    /// Purely classical input: coherent light only.
    pub fn classical(alpha_mag: f64) -> Self {
        Self {
            alpha_mag,
            theta_cs: 0.0,
            r: 0.0,
        }
    }

    /// Holds `|α|` and `θ_cs` fixed and sets `r = γ⁻¹ |α|²`.
    pub fn with_gamma_inverse(alpha_mag: f64, theta_cs: f64, gamma_inverse: f64) -> Result<Self> {
        ensure_finite("gamma_inverse", gamma_inverse)?;
        Self::new(alpha_mag, theta_cs, gamma_inverse * alpha_mag * alpha_mag)
    }

    /// The NOON condition `α² = -r`: `γ = 1`, `2θ_cs = π`, `r = |α|² > 0`.
    pub fn noon_condition(alpha_mag: f64) -> Result<Self> {
        Self::new(
            alpha_mag,
            std::f64::consts::FRAC_PI_2,
            alpha_mag * alpha_mag,
        )
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("alpha_mag", self.alpha_mag)?;
        ensure_finite("theta_cs", self.theta_cs)?;
        ensure_finite("r", self.r)?;
        if self.alpha_mag < 0.0 {
            return Err(invalid("alpha_mag", "must be >= 0"));
        }
        Ok(())
    }

    /// Complex coherent amplitude `α = |α| e^{iθ_cs}`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mag, self.theta_cs)
    }

    /// `γ = |α|² / |r|`; `None` when `r == 0` (no SPDC).
    pub fn gamma(&self) -> Option<f64> {
        if self.r == 0.0 {
            None
        } else {
            Some(self.alpha_mag * self.alpha_mag / self.r.abs())
        }
    }

    /// `γ⁻¹ = |r| / |α|²`; `None` when `α == 0`.
    pub fn gamma_inverse(&self) -> Option<f64> {
        if self.alpha_mag == 0.0 {
            None
        } else {
            Some(self.r.abs() / (self.alpha_mag * self.alpha_mag))
        }
    }

    /// Mean SPDC pairs per pulse, `sinh² r`.
    pub fn pairs_per_pulse(&self) -> f64 {
        self.r.sinh().powi(2)
    }

    pub fn default_cutoff(&self) -> usize {
        default_cutoff(self.alpha_mag, self.r)
    }

    /// `|α⟩_a ⊗ |ξ(r)⟩_b` at the given per-mode cutoff.
    pub fn input_state(&self, cutoff: usize) -> Result<TwoModeState> {
        let a = coherent_state(self.alpha_mag, self.theta_cs, cutoff)?;
        let b = squeezed_vacuum(self.r, cutoff)?;
        product_state(&a, &b)
    }
}

/// `max(8, ⌈4(|α|² + sinh² r) + 12⌉)`, capped at [`MAX_DEFAULT_CUTOFF`].
pub fn default_cutoff(alpha_mag: f64, r: f64) -> usize {
    let mean = alpha_mag * alpha_mag + r.sinh().powi(2);
    let c = (4.0 * mean + 12.0).ceil();
    if !c.is_finite() {
        return MAX_DEFAULT_CUTOFF;
    }
    (c as usize).clamp(8, MAX_DEFAULT_CUTOFF)
}

/// Single-mode amplitude vector over `|0⟩ ..= |cutoff⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    amplitudes: Vec<Complex64>,
    truncation_deficit: f64,
}

impl ModeAmplitudes {
    pub fn vacuum(cutoff: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            truncation_deficit: 0.0,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

fn check_deficit(cutoff: usize, deficit: f64) -> Result<()> {
    if deficit > MAX_CONSTRUCTION_DEFICIT {
        Err(Error::CutoffInsufficient {
            cutoff,
            deficit,
            limit: MAX_CONSTRUCTION_DEFICIT,
        })
    } else {
        Ok(())
    }
}

/// Sum of `exp(log_terms[i])` for `i > cutoff`, accumulated from the far end
/// so that the result is monotone in `cutoff`.
fn tail_mass(log_terms: &[f64], cutoff: usize) -> f64 {
    log_terms
        .iter()
        .skip(cutoff + 1)
        .rev()
        .fold(0.0, |acc, &lt| acc + lt.exp())
}

/// Coherent state `e^{-|α|²/2} Σ αⁿ/√n! |n⟩` with `α = |α| e^{iθ}`.
pub fn coherent_state(alpha_mag: f64, theta_cs: f64, cutoff: usize) -> Result<ModeAmplitudes> {
    ensure_finite("alpha_mag", alpha_mag)?;
    ensure_finite("theta_cs", theta_cs)?;
    if alpha_mag < 0.0 {
        return Err(invalid("alpha_mag", "must be >= 0"));
    }
    if alpha_mag == 0.0 {
        return Ok(ModeAmplitudes::vacuum(cutoff));
    }

    let mean = alpha_mag * alpha_mag;
    let ln_mean = mean.ln();
    // far end of the Poisson tail, independent of the cutoff
    let far = cutoff.max((mean + 40.0 * (mean + 1.0).sqrt() + 40.0).ceil() as usize);
    let lf = LogFactorial::new(far);
    let log_prob: Vec<f64> = (0..=far)
        .map(|n| -mean + n as f64 * ln_mean - lf.ln(n))
        .collect();

    let amplitudes = (0..=cutoff)
        .map(|n| Complex64::from_polar((0.5 * log_prob[n]).exp(), n as f64 * theta_cs))
        .collect();
    let truncation_deficit = tail_mass(&log_prob, cutoff);
    check_deficit(cutoff, truncation_deficit)?;
    Ok(ModeAmplitudes {
        amplitudes,
        truncation_deficit,
    })
}

/// Single-mode squeezed vacuum (degenerate SPDC):
/// `(cosh r)^{-1/2} Σ (-1)^m √((2m)!)/(2^m m!) (tanh r)^m |2m⟩`.
pub fn squeezed_vacuum(r: f64, cutoff: usize) -> Result<ModeAmplitudes> {
    ensure_finite("r", r)?;
    let t = r.tanh();
    if t == 0.0 {
        return Ok(ModeAmplitudes::vacuum(cutoff));
    }

    let ln_t = t.abs().ln();
    let ln_cosh = r.cosh().ln();
    let kept_pairs = cutoff / 2;
    let far_pairs =
        kept_pairs.max(((LOG_TAIL_FLOOR / (2.0 * -ln_t)).ceil() as usize).min(200_000) + 10);
    let lf = LogFactorial::new(2 * far_pairs);
    let ln2 = std::f64::consts::LN_2;
    // log of |amplitude(2m)|
    let log_amp = |m: usize| {
        let mf = m as f64;
        -0.5 * ln_cosh + 0.5 * lf.ln(2 * m) - mf * ln2 - lf.ln(m) + mf * ln_t
    };

    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for m in 0..=kept_pairs {
        // (-1)^m from the wave function times sign(tanh r)^m
        let negative = m % 2 == 1 && t > 0.0;
        let mag = log_amp(m).exp();
        amplitudes[2 * m] = Complex64::new(if negative { -mag } else { mag }, 0.0);
    }

    let log_prob: Vec<f64> = (0..=far_pairs).map(|m| 2.0 * log_amp(m)).collect();
    let truncation_deficit =
        if log_prob.last().copied().unwrap_or(f64::NEG_INFINITY) < -LOG_TAIL_FLOOR + 1.0 {
            tail_mass(&log_prob, kept_pairs)
        } else {
            // tail did not converge within the table; fall back to the complement
            let kept: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
            (1.0 - kept).max(0.0)
        };
    check_deficit(cutoff, truncation_deficit)?;
    Ok(ModeAmplitudes {
        amplitudes,
        truncation_deficit,
    })
}

/// Which pair of modes a two-mode state describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModePair {
    /// Interferometer inputs `a`, `b`.
    Input,
    /// Between the beamsplitters, `c`, `d`.
    Interior,
    /// Detector modes `e`, `f`.
    Output,
}

impl ModePair {
    pub fn labels(self) -> (char, char) {
        match self {
            ModePair::Input => ('a', 'b'),
            ModePair::Interior => ('c', 'd'),
            ModePair::Output => ('e', 'f'),
        }
    }

    pub(crate) fn after_beamsplitter(self) -> Self {
        match self {
            ModePair::Input => ModePair::Interior,
            ModePair::Interior | ModePair::Output => ModePair::Output,
        }
    }
}

/// Dense pure state over `(n_a, n_b)`, `0 <= n_a, n_b <= cutoff`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: usize,
    amplitudes: Vec<Complex64>,
    truncation_deficit: f64,
    modes: ModePair,
}

impl TwoModeState {
    pub fn from_amplitudes(
        cutoff: usize,
        amplitudes: Vec<Complex64>,
        truncation_deficit: f64,
    ) -> Result<Self> {
        let dim = cutoff + 1;
        if amplitudes.len() != dim * dim {
            return Err(invalid(
                "amplitudes",
                format!("expected {} entries, got {}", dim * dim, amplitudes.len()),
            ));
        }
        if !(0.0..=1.0).contains(&truncation_deficit) {
            return Err(invalid("truncation_deficit", "must lie in [0, 1]"));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(invalid("amplitudes", "must be finite"));
        }
        Ok(Self {
            cutoff,
            amplitudes,
            truncation_deficit,
            modes: ModePair::Input,
        })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::fock(cutoff, 0, 0)
    }

    /// Number state `|n_a, n_b⟩`.
    ///
    /// # Panics
    /// If either count exceeds the cutoff.
    pub fn fock(cutoff: usize, n_a: usize, n_b: usize) -> Self {
        assert!(n_a <= cutoff && n_b <= cutoff, "Fock state outside cutoff");
        let dim = cutoff + 1;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim * dim];
        amplitudes[n_a * dim + n_b] = Complex64::new(1.0, 0.0);
        Self {
            cutoff,
            amplitudes,
            truncation_deficit: 0.0,
            modes: ModePair::Input,
        }
    }

    pub(crate) fn from_parts(
        cutoff: usize,
        amplitudes: Vec<Complex64>,
        truncation_deficit: f64,
        modes: ModePair,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), (cutoff + 1) * (cutoff + 1));
        Self {
            cutoff,
            amplitudes,
            truncation_deficit,
            modes,
        }
    }

    pub fn with_modes(mut self, modes: ModePair) -> Self {
        self.modes = modes;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn modes(&self) -> ModePair {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes[n_a * self.dim() + n_b]
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    /// `Σ |amplitude|²` over the grid.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability held in the total-photon-number block `n_a + n_b = n`.
    pub fn block_probability(&self, n: usize) -> f64 {
        let lo = n.saturating_sub(self.cutoff);
        let hi = n.min(self.cutoff);
        if lo > hi {
            return 0.0;
        }
        (lo..=hi).map(|k| self.amplitude(k, n - k).norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩` over the grid.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn photon_number_distribution(&self) -> PhotonDistribution {
        photon_number_distribution(self)
    }
}

/// `|a⟩ ⊗ |b⟩`. Deficits compose as `1 - (1 - d_a)(1 - d_b)`.
pub fn product_state(mode_a: &ModeAmplitudes, mode_b: &ModeAmplitudes) -> Result<TwoModeState> {
    if mode_a.cutoff() != mode_b.cutoff() {
        return Err(Error::CutoffMismatch(mode_a.cutoff(), mode_b.cutoff()));
    }
    let cutoff = mode_a.cutoff();
    let amplitudes = mode_a
        .amplitudes
        .iter()
        .flat_map(|&a| mode_b.amplitudes.iter().map(move |&b| a * b))
        .collect();
    let deficit = 1.0 - (1.0 - mode_a.truncation_deficit) * (1.0 - mode_b.truncation_deficit);
    Ok(TwoModeState {
        cutoff,
        amplitudes,
        truncation_deficit: deficit.max(0.0),
        modes: ModePair::Input,
    })
}

/// Joint photon-number probabilities `|amplitude(n_a, n_b)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    cutoff: usize,
    probs: Vec<f64>,
}

impl PhotonDistribution {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    #[inline]
    pub fn get(&self, n_a: usize, n_b: usize) -> f64 {
        self.probs[n_a * (self.cutoff + 1) + n_b]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn marginal_first(&self) -> Vec<f64> {
        self.probs
            .chunks(self.cutoff + 1)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn marginal_second(&self) -> Vec<f64> {
        let dim = self.cutoff + 1;
        (0..dim)
            .map(|n_b| (0..dim).map(|n_a| self.get(n_a, n_b)).sum())
            .collect()
    }
}

pub fn photon_number_distribution(state: &TwoModeState) -> PhotonDistribution {
    PhotonDistribution {
        cutoff: state.cutoff,
        probs: state.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn closure(m: &ModeAmplitudes) -> f64 {
        (m.norm_sqr() + m.truncation_deficit() - 1.0).abs()
    }

    #[test]
    fn coherent_vacuum_case() {
        let v = coherent_state(0.0, 1.3, 4).unwrap();
        assert_eq!(v.amplitude(0), Complex64::new(1.0, 0.0));
        for n in 1..=4 {
            assert_eq!(v.amplitude(n), Complex64::new(0.0, 0.0));
        }
        assert_eq!(v.truncation_deficit(), 0.0);
    }

    #[test]
    fn coherent_unit_amplitude_values() {
        let v = coherent_state(1.0, 0.0, 20).unwrap();
        let e = (-0.5_f64).exp();
        assert!((v.amplitude(0).re - e).abs() < 1e-15);
        assert!((v.amplitude(1).re - e).abs() < 1e-15);
        assert!((v.amplitude(2).re - e / 2f64.sqrt()).abs() < 1e-15);
        assert!((v.amplitude(0).re - 0.6065306597126334).abs() < 1e-15);
        assert!((v.amplitude(2).re - 0.42888194248035344).abs() < 1e-15);
    }

    #[test]
    fn coherent_phase_is_carried() {
        let v = coherent_state(0.1, FRAC_PI_2, 10).unwrap();
        let a1 = v.amplitude(1);
        assert!(a1.re.abs() < 1e-15);
        assert!((a1.im - 0.1 * (-0.005_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_zero_r_is_vacuum() {
        let v = squeezed_vacuum(0.0, 6).unwrap();
        assert_eq!(v.amplitude(0), Complex64::new(1.0, 0.0));
        assert!(v.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn squeezed_vacuum_two_photon_amplitude() {
        let v = squeezed_vacuum(0.2, 10).unwrap();
        let expected = -(2f64.sqrt() / 2.0) * 0.2f64.tanh() / 0.2f64.cosh().sqrt();
        assert!((v.amplitude(2).re - expected).abs() < 1e-15);
        assert!((v.amplitude(2).re + 0.138186).abs() < 1e-6);
        assert_eq!(v.amplitude(1), Complex64::new(0.0, 0.0));
        assert_eq!(v.amplitude(3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn squeezed_vacuum_sign_convention() {
        let p = squeezed_vacuum(0.2, 10).unwrap();
        let m = squeezed_vacuum(-0.2, 10).unwrap();
        assert_eq!(p.amplitude(2), -m.amplitude(2));
        assert_eq!(p.amplitude(4), m.amplitude(4));
        assert_eq!(p.amplitude(6), -m.amplitude(6));
    }

    #[test]
    fn constructors_reject_bad_inputs() {
        assert!(coherent_state(f64::NAN, 0.0, 5).is_err());
        assert!(coherent_state(1.0, f64::INFINITY, 5).is_err());
        assert!(coherent_state(-1.0, 0.0, 5).is_err());
        assert!(squeezed_vacuum(f64::NAN, 5).is_err());
        // mean 9 with cutoff 2 leaves almost everything in the tail
        assert!(matches!(
            coherent_state(3.0, 0.0, 2),
            Err(Error::CutoffInsufficient { .. })
        ));
        assert!(matches!(
            squeezed_vacuum(3.0, 2),
            Err(Error::CutoffInsufficient { .. })
        ));
    }

    #[test]
    fn normalization_closure_for_constructors() {
        for &(a, r, c) in &[
            (0.3, 0.1, 4),
            (1.0, 0.5, 8),
            (2.0, -0.4, 30),
            (0.0, 0.9, 12),
        ] {
            let ca = coherent_state(a, 0.7, c).unwrap();
            let sq = squeezed_vacuum(r, c).unwrap();
            assert!(closure(&ca) < 1e-12);
            assert!(closure(&sq) < 1e-12);
            let s = product_state(&ca, &sq).unwrap();
            assert!((s.norm_sqr() + s.truncation_deficit() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_cutoff_does_not_overflow() {
        let sq = squeezed_vacuum(1.5, 200).unwrap();
        assert!(sq.amplitudes().iter().all(|a| a.re.is_finite()));
        assert!(closure(&sq) < 1e-12);
        let ca = coherent_state(5.0, 0.0, 200).unwrap();
        assert!(closure(&ca) < 1e-12);
    }

    #[test]
    fn coherent_mean_photon_number_converges() {
        for &mean in &[0.01, 0.5, 1.0, 2.5, 4.0] {
            let a: f64 = f64::sqrt(mean);
            let cutoff = (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize;
            let v = coherent_state(a, 0.3, cutoff).unwrap();
            let rel = (v.mean_photon_number() - mean).abs() / mean;
            assert!(rel < 1e-10, "mean {mean}: rel err {rel}");
        }
    }

    #[test]
    fn squeezed_mean_photon_number_converges() {
        for &r in &[0.05_f64, 0.2, 0.5] {
            let v = squeezed_vacuum(r, 80).unwrap();
            let expected = r.sinh().powi(2);
            let rel = (v.mean_photon_number() - expected).abs() / expected;
            assert!(rel < 1e-10, "r {r}: rel err {rel}");
        }
    }

    #[test]
    fn product_state_amplitude() {
        let a = coherent_state(0.3, 0.0, 6).unwrap();
        let b = squeezed_vacuum(0.1, 6).unwrap();
        let s = product_state(&a, &b).unwrap();
        let expected = ((-0.045_f64).exp() * 0.3)
            * (-(2f64.sqrt() / 2.0) * 0.1f64.tanh() / 0.1f64.cosh().sqrt());
        assert!((s.amplitude(1, 2).re - expected).abs() < 1e-16);
        assert_eq!(s.amplitude(1, 1), Complex64::new(0.0, 0.0));
        let d = 1.0 - (1.0 - a.truncation_deficit()) * (1.0 - b.truncation_deficit());
        assert_eq!(s.truncation_deficit(), d);
    }

    #[test]
    fn product_state_vacuum_and_mismatch() {
        let v = product_state(&ModeAmplitudes::vacuum(3), &ModeAmplitudes::vacuum(3)).unwrap();
        assert_eq!(v, TwoModeState::vacuum(3));
        assert_eq!(
            product_state(&ModeAmplitudes::vacuum(3), &ModeAmplitudes::vacuum(4)),
            Err(Error::CutoffMismatch(3, 4))
        );
    }

    #[test]
    fn distribution_of_coherent_times_vacuum_is_poisson() {
        let s = SourceParams::classical(1.0).input_state(20).unwrap();
        let d = s.photon_number_distribution();
        let marginal = d.marginal_first();
        let mut pmf = (-1.0_f64).exp();
        for (n, &p) in marginal.iter().enumerate().take(12) {
            if n > 0 {
                pmf /= n as f64;
            }
            assert!((p - pmf).abs() < 1e-15, "n = {n}");
        }
        assert!(d.marginal_second()[1..].iter().all(|&p| p == 0.0));
        assert!((d.total() + s.truncation_deficit() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_of_vacuum() {
        let d = TwoModeState::vacuum(5).photon_number_distribution();
        assert_eq!(d.get(0, 0), 1.0);
        assert_eq!(d.total(), 1.0);
    }

    #[test]
    fn gamma_is_derived() {
        let s = SourceParams::new(0.5, 0.0, -0.05).unwrap();
        let g = s.gamma().unwrap();
        assert!((g * s.r.abs() - 0.25).abs() < 1e-15);
        assert_eq!(SourceParams::classical(1.0).gamma(), None);
        let n = SourceParams::noon_condition(0.2).unwrap();
        assert!((n.gamma().unwrap() - 1.0).abs() < 1e-15);
        assert!((n.alpha() * n.alpha() + n.r).norm() < 1e-15);
        assert!(SourceParams::new(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn default_cutoff_policy() {
        assert_eq!(default_cutoff(0.0, 0.0), 12);
        assert_eq!(default_cutoff(0.1, 0.001), 13);
        assert_eq!(default_cutoff(10.0, 0.0), MAX_DEFAULT_CUTOFF);
        let s = SourceParams::new(1.0, PI / 3.0, 0.3).unwrap();
        let st = s.input_state(s.default_cutoff()).unwrap();
        assert!(st.truncation_deficit() < 1e-10);
    }

    #[test]
    fn mode_labels_follow_stages() {
        assert_eq!(ModePair::Input.labels(), ('a', 'b'));
        assert_eq!(ModePair::Input.after_beamsplitter(), ModePair::Interior);
        assert_eq!(ModePair::Interior.after_beamsplitter().labels(), ('e', 'f'));
    }
}
