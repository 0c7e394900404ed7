//! Exact fixed-photon-number calculator used as ground truth for the grid
//! simulator.
//!
//! Without loss the interferometer conserves the total photon number, so the
//! `N`-photon signal only involves the `N`-photon part of the input. This
//! module tracks that part as `N + 1` coefficients on `|k, N−k⟩` and applies
//! the beamsplitter by substituting the creation operators into the
//! polynomial `Σ x_k a†^k b†^{N−k} / √(k!(N−k)!)` and re-expanding. That is a
//! different route from the block matrices in [`crate::optics`], so agreement
//! between the two is evidence rather than tautology.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::SourceParams;
use crate::optics::BeamSplitterConvention;

pub const MAX_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Input,
    AfterBs1,
    AfterPs,
    AfterBs2,
}

/// How the input coefficients are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expansion {
    /// Full coherent × squeezed-vacuum amplitudes, normalization included.
    Exact,
    /// Low-flux form: `αⁿ/√n!` times `(−1)^m √((2m)!)/(2^m m!) r^m`, no
    /// normalization and `tanh r → r`. The closed-form three-photon
    /// expressions hold identically in this expansion.
    LeadingOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubspaceElement {
    BeamSplitter,
    PhaseShift(f64),
}

/// The `N`-photon part of the state, coefficient `k` on `|k, N−k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceAmplitudes {
    total_n: usize,
    coefficients: Vec<Complex64>,
    stage: Stage,
    convention: BeamSplitterConvention,
}

impl SubspaceAmplitudes {
    pub fn new(coefficients: Vec<Complex64>, stage: Stage) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(crate::error::invalid("coefficients", "need at least one"));
        }
        let total_n = coefficients.len() - 1;
        if total_n > MAX_ORDER {
            return Err(Error::OrderTooLarge(total_n));
        }
        Ok(Self {
            total_n,
            coefficients,
            stage,
            convention: BeamSplitterConvention::RealSymmetric,
        })
    }

    pub fn with_convention(mut self, convention: BeamSplitterConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn total_n(&self) -> usize {
        self.total_n
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient on `|k, N−k⟩`.
    pub fn coefficient(&self, k: usize) -> Complex64 {
        self.coefficients[k]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn coherent_coefficient(source: &SourceParams, n: usize, expansion: Expansion) -> Complex64 {
    let alpha = source.alpha();
    let mut c = alpha.powu(n as u32) / factorial(n).sqrt();
    if expansion == Expansion::Exact {
        c *= (-0.5 * source.alpha_mag * source.alpha_mag).exp();
    }
    c
}

fn squeezed_coefficient(r: f64, n: usize, expansion: Expansion) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let shape = sign * factorial(2 * m).sqrt() / (2f64.powi(m as i32) * factorial(m));
    match expansion {
        Expansion::Exact => shape * r.tanh().powi(m as i32) / r.cosh().sqrt(),
        Expansion::LeadingOrder => shape * r.powi(m as i32),
    }
}

/// `N`-photon part of `|α⟩_a ⊗ |ξ⟩_b`: coefficient of `|k, N−k⟩` is the
/// coherent amplitude at `k` times the squeezed amplitude at `N−k`.
pub fn input_subspace(
    source: &SourceParams,
    total_n: usize,
    expansion: Expansion,
) -> Result<SubspaceAmplitudes> {
    source.validate()?;
    if total_n > MAX_ORDER {
        return Err(Error::OrderTooLarge(total_n));
    }
    let coefficients = (0..=total_n)
        .map(|k| {
            coherent_coefficient(source, k, expansion)
                * squeezed_coefficient(source.r, total_n - k, expansion)
        })
        .collect();
    SubspaceAmplitudes::new(coefficients, Stage::Input)
}

/// Homogeneous polynomial in (c†, d†); entry `p` multiplies `c†^p d†^{deg−p}`.
#[derive(Debug, Clone)]
struct Polynomial(Vec<Complex64>);

impl Polynomial {
    fn one() -> Self {
        Polynomial(vec![Complex64::new(1.0, 0.0)])
    }

    /// Multiply by `x c† + y d†`.
    fn times_linear(&self, x: f64, y: f64) -> Self {
        let deg = self.0.len();
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (p, &coef) in self.0.iter().enumerate() {
            out[p + 1] += coef * x;
            out[p] += coef * y;
        }
        Polynomial(out)
    }
}

fn beamsplit(coefficients: &[Complex64], convention: BeamSplitterConvention) -> Vec<Complex64> {
    let n = coefficients.len() - 1;
    let [[t, s], [u, v]] = convention.mode_matrix();
    let mut total = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, &x) in coefficients.iter().enumerate() {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        // a†^k b†^{n-k} after substitution
        let mut poly = Polynomial::one();
        for _ in 0..k {
            poly = poly.times_linear(t, s);
        }
        for _ in 0..(n - k) {
            poly = poly.times_linear(u, v);
        }
        let weight = x / (factorial(k) * factorial(n - k)).sqrt();
        for (acc, term) in total.iter_mut().zip(&poly.0) {
            *acc += weight * term;
        }
    }
    // c†^p d†^{n-p}|0⟩ = √(p!(n-p)!) |p, n-p⟩
    total
        .into_iter()
        .enumerate()
        .map(|(p, c)| c * (factorial(p) * factorial(n - p)).sqrt())
        .collect()
}

/// Advances the subspace by one element; stages must follow
/// input → BS → PS → BS.
pub fn transform_subspace(
    amps: &SubspaceAmplitudes,
    element: SubspaceElement,
) -> Result<SubspaceAmplitudes> {
    let n = amps.total_n;
    let (coefficients, stage) = match (element, amps.stage) {
        (SubspaceElement::BeamSplitter, Stage::Input) => (
            beamsplit(&amps.coefficients, amps.convention),
            Stage::AfterBs1,
        ),
        (SubspaceElement::BeamSplitter, Stage::AfterPs) => (
            beamsplit(&amps.coefficients, amps.convention),
            Stage::AfterBs2,
        ),
        (SubspaceElement::PhaseShift(phi), Stage::AfterBs1) => {
            let shifted = amps
                .coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c * Complex64::from_polar(1.0, (n - k) as f64 * phi))
                .collect();
            (shifted, Stage::AfterPs)
        }
        (SubspaceElement::BeamSplitter, found) => {
            return Err(Error::StageOrder {
                found,
                expected: "input or after_ps",
            })
        }
        (SubspaceElement::PhaseShift(_), found) => {
            return Err(Error::StageOrder {
                found,
                expected: "after_bs1",
            })
        }
    };
    Ok(SubspaceAmplitudes {
        total_n: n,
        coefficients,
        stage,
        convention: amps.convention,
    })
}

/// `|⟨0, N | ψ⟩|²`: all `N` photons in the second output port.
pub fn detection_probability(amps: &SubspaceAmplitudes) -> Result<f64> {
    if amps.stage != Stage::AfterBs2 {
        return Err(Error::StageOrder {
            found: amps.stage,
            expected: "after_bs2",
        });
    }
    Ok(amps.coefficients[0].norm_sqr())
}

/// Runs the whole chain for one phase.
pub fn subspace_probability(
    source: &SourceParams,
    total_n: usize,
    expansion: Expansion,
    phi: f64,
    convention: BeamSplitterConvention,
) -> Result<f64> {
    let amps = input_subspace(source, total_n, expansion)?.with_convention(convention);
    let amps = transform_subspace(&amps, SubspaceElement::BeamSplitter)?;
    let amps = transform_subspace(&amps, SubspaceElement::PhaseShift(phi))?;
    let amps = transform_subspace(&amps, SubspaceElement::BeamSplitter)?;
    detection_probability(&amps)
}

/// Closed-form three-photon expressions, in the leading-order expansion.
pub mod closed_form {
    use num_complex::Complex64;

    /// Coefficients on `|0,3⟩, |1,2⟩, |2,1⟩, |3,0⟩` after the first beamsplitter:
    /// `(α/4)[(α²−3r)/√3, α²+r, α²+r, (α²−3r)/√3]`.
    pub fn after_first_beamsplitter(alpha: Complex64, r: f64) -> [Complex64; 4] {
        let a2 = alpha * alpha;
        let edge = alpha / 4.0 * (a2 - 3.0 * r) / 3f64.sqrt();
        let mid = alpha / 4.0 * (a2 + r);
        [edge, mid, mid, edge]
    }

    /// `|α|²/128 · |((α²−3r)/√3)(1 − e^{3iφ}) + √3(α²+r)(e^{2iφ} − e^{iφ})|²`.
    pub fn three_photon_probability(alpha: Complex64, r: f64, phi: f64) -> f64 {
        let a2 = alpha * alpha;
        let e = |k: f64| Complex64::from_polar(1.0, k * phi);
        let one = Complex64::new(1.0, 0.0);
        let amp = (a2 - r * 3.0) / 3f64.sqrt() * (one - e(3.0))
            + 3f64.sqrt() * (a2 + r) * (e(2.0) - e(1.0));
        alpha.norm_sqr() / 128.0 * amp.norm_sqr()
    }

    /// Classical (`r = 0`) limit: `|α|⁶/6 · sin⁶(φ/2)`.
    pub fn classical_three_photon(alpha_mag: f64, phi: f64) -> f64 {
        alpha_mag.powi(6) / 6.0 * (phi / 2.0).sin().powi(6)
    }

    /// NOON (`α² = −r`) limit: `|α|⁶/6 · sin²(3φ/2)`.
    pub fn noon_three_photon(alpha_mag: f64, phi: f64) -> f64 {
        alpha_mag.powi(6) / 6.0 * (1.5 * phi).sin().powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::closed_form::*;
    use super::*;
    use crate::math::linspace;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn chain(source: &SourceParams, n: usize, phi: f64) -> f64 {
        subspace_probability(source, n, Expansion::LeadingOrder, phi, Default::default()).unwrap()
    }

    // error relative to the curve's peak; pointwise relative error is
    // meaningless at the fringe zeros
    fn worst_peak_relative_error(s: &SourceParams, want: impl Fn(f64) -> f64) -> f64 {
        let grid = linspace(0.0, 2.0 * PI, 721);
        let peak = grid.iter().map(|&p| want(p)).fold(0.0, f64::max);
        grid.iter()
            .map(|&phi| (chain(s, 3, phi) - want(phi)).abs() / peak)
            .fold(0.0, f64::max)
    }

    #[test]
    fn three_photon_input_has_two_terms() {
        let s = SourceParams::new(0.2, 0.4, 0.03).unwrap();
        let amps = input_subspace(&s, 3, Expansion::LeadingOrder).unwrap();
        let alpha = s.alpha();
        assert!((amps.coefficient(3) - alpha.powu(3) / 6f64.sqrt()).norm() < 1e-16);
        assert!((amps.coefficient(1) + alpha * 0.03 / 2f64.sqrt()).norm() < 1e-16);
        assert_eq!(amps.coefficient(0).norm(), 0.0);
        assert_eq!(amps.coefficient(2).norm(), 0.0);
    }

    #[test]
    fn one_photon_subspace() {
        let s = SourceParams::new(0.3, 0.0, 0.1).unwrap();
        let amps = input_subspace(&s, 1, Expansion::Exact).unwrap();
        let coh1 = 0.3 * (-0.045_f64).exp();
        let sq0 = 1.0 / 0.1f64.cosh().sqrt();
        assert!((amps.coefficient(1).re - coh1 * sq0).abs() < 1e-16);
        assert_eq!(amps.coefficient(0).norm(), 0.0);
    }

    #[test]
    fn classical_input_occupies_one_ket() {
        for n in 0..=MAX_ORDER {
            let amps = input_subspace(&SourceParams::classical(0.5), n, Expansion::Exact).unwrap();
            for k in 0..n {
                assert_eq!(amps.coefficient(k).norm(), 0.0);
            }
            assert!(amps.coefficient(n).norm() > 0.0);
        }
    }

    #[test]
    fn first_beamsplitter_matches_closed_form() {
        for &(a, th, r) in &[(0.2, 0.0, 0.01), (0.5, 1.2, -0.2), (0.9, 2.5, 0.3)] {
            let s = SourceParams::new(a, th, r).unwrap();
            let amps = input_subspace(&s, 3, Expansion::LeadingOrder).unwrap();
            let out = transform_subspace(&amps, SubspaceElement::BeamSplitter).unwrap();
            let expected = after_first_beamsplitter(s.alpha(), r);
            for (k, want) in expected.iter().enumerate() {
                assert!((out.coefficient(k) - want).norm() < 1e-15, "k={k}");
            }
        }
    }

    #[test]
    fn phase_shift_stage() {
        let s = SourceParams::new(0.4, 0.2, 0.05).unwrap();
        let bs1 = transform_subspace(
            &input_subspace(&s, 3, Expansion::LeadingOrder).unwrap(),
            SubspaceElement::BeamSplitter,
        )
        .unwrap();
        let phi = 0.8;
        let ps = transform_subspace(&bs1, SubspaceElement::PhaseShift(phi)).unwrap();
        // photons in the second mode: 3, 2, 1, 0 for k = 0..3
        for k in 0..4 {
            let expect = bs1.coefficient(k) * Complex64::from_polar(1.0, (3 - k) as f64 * phi);
            assert!((ps.coefficient(k) - expect).norm() < 1e-16);
        }
        let zero = transform_subspace(&bs1, SubspaceElement::PhaseShift(0.0)).unwrap();
        assert_eq!(zero.coefficients(), bs1.coefficients());
    }

    #[test]
    fn stage_order_is_enforced() {
        let s = SourceParams::classical(0.3);
        let input = input_subspace(&s, 2, Expansion::Exact).unwrap();
        assert!(matches!(
            transform_subspace(&input, SubspaceElement::PhaseShift(0.1)),
            Err(Error::StageOrder { .. })
        ));
        assert!(detection_probability(&input).is_err());
        let bs1 = transform_subspace(&input, SubspaceElement::BeamSplitter).unwrap();
        assert!(transform_subspace(&bs1, SubspaceElement::BeamSplitter).is_err());
        assert!(matches!(
            input_subspace(&s, 7, Expansion::Exact),
            Err(Error::OrderTooLarge(7))
        ));
    }

    #[test]
    fn norm_preserved_by_each_element() {
        let s = SourceParams::new(0.7, 0.9, 0.25).unwrap();
        for n in 0..=MAX_ORDER {
            let a0 = input_subspace(&s, n, Expansion::Exact).unwrap();
            let a1 = transform_subspace(&a0, SubspaceElement::BeamSplitter).unwrap();
            let a2 = transform_subspace(&a1, SubspaceElement::PhaseShift(1.3)).unwrap();
            let a3 = transform_subspace(&a2, SubspaceElement::BeamSplitter).unwrap();
            for a in [&a1, &a2, &a3] {
                assert!((a.norm_sqr() - a0.norm_sqr()).abs() < 1e-14 * a0.norm_sqr().max(1e-300));
            }
        }
    }

    #[test]
    fn detection_matches_three_photon_closed_form() {
        let s = SourceParams::new(0.37, 0.6, -0.08).unwrap();
        for phi in linspace(0.0, 2.0 * PI, 50) {
            let got = chain(&s, 3, phi);
            let want = three_photon_probability(s.alpha(), s.r, phi);
            assert!((got - want).abs() <= 1e-13 * want.max(1e-12), "phi={phi}");
        }
    }

    #[test]
    fn classical_limit_identically() {
        let s = SourceParams::classical(0.3);
        let worst = worst_peak_relative_error(&s, |phi| classical_three_photon(0.3, phi));
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn noon_limit_identically() {
        let s = SourceParams::noon_condition(0.3).unwrap();
        let worst = worst_peak_relative_error(&s, |phi| noon_three_photon(0.3, phi));
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn zero_phase_is_dark_for_odd_orders() {
        // the squeezed input has no odd |0, N⟩ component and the interferometer
        // is the identity at φ = 0
        for s in [
            SourceParams::new(0.4, 1.0, 0.1).unwrap(),
            SourceParams::noon_condition(0.5).unwrap(),
        ] {
            for n in [1, 3, 5] {
                let scale: f64 = [0.7, 2.0, PI].iter().map(|&p| chain(&s, n, p)).sum();
                assert!(chain(&s, n, 0.0) < 1e-25 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn zero_phase_passes_spdc_pairs_for_even_orders() {
        let s = SourceParams::new(0.4, 1.0, 0.1).unwrap();
        for n in [2, 4] {
            let input = input_subspace(&s, n, Expansion::LeadingOrder).unwrap();
            let got = chain(&s, n, 0.0);
            assert!((got - input.coefficient(0).norm_sqr()).abs() < 1e-15);
            assert!(got > 0.0);
        }
    }

    #[test]
    fn noon_cross_terms_cancel() {
        for &a in &[0.05, 0.3, 0.9] {
            let s = SourceParams::noon_condition(a).unwrap();
            let bs1 = transform_subspace(
                &input_subspace(&s, 3, Expansion::LeadingOrder).unwrap(),
                SubspaceElement::BeamSplitter,
            )
            .unwrap();
            assert!(bs1.coefficient(1).norm() < 1e-14);
            assert!(bs1.coefficient(2).norm() < 1e-14);
        }
        let s = SourceParams::new(0.3, FRAC_PI_2, 0.09).unwrap();
        let p = chain(&s, 3, 1.0);
        assert!((p - noon_three_photon(0.3, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn swapped_convention_breaks_first_beamsplitter_pattern() {
        let s = SourceParams::new(0.5, 0.3, 0.1).unwrap();
        let amps = input_subspace(&s, 3, Expansion::LeadingOrder)
            .unwrap()
            .with_convention(BeamSplitterConvention::Swapped);
        let out = transform_subspace(&amps, SubspaceElement::BeamSplitter).unwrap();
        let expected = after_first_beamsplitter(s.alpha(), s.r);
        let err = (0..4)
            .map(|k| (out.coefficient(k) - expected[k]).norm())
            .fold(0.0, f64::max);
        assert!(err > 1e-3);
    }
}
