//! Self-checks run by `subrayleigh verify`: closed-form limits, oracle
//! agreement and the structural invariants of the simulator.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::default_phase_grid;
use crate::detection::{
    click_distribution, click_probability, n_fold_curve, sample_clicks, ClickOutcome, CurveOptions,
    LossModel,
};
use crate::error::Error;
use crate::fock::{coherent_state, product_state, squeezed_vacuum, SourceParams, TwoModeState};
use crate::optics::{phase_shift, BeamSplitter, BeamSplitterConvention, MachZehnder};
use crate::oracle::{
    closed_form, input_subspace, subspace_probability, transform_subspace, Expansion,
    SubspaceElement,
};

/// Settings for [`run_checks`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Convention used throughout. Anything but the default is a negative
    /// control and should make the coefficient check fail.
    pub convention: BeamSplitterConvention,
    pub seed: u64,
    /// Source and cutoff exercised by the final "configured source" check.
    pub source: SourceParams,
    pub cutoff: Option<usize>,
    pub max_truncation_deficit: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            convention: BeamSplitterConvention::RealSymmetric,
            seed: 20_240_229,
            source: SourceParams {
                alpha_mag: 0.1,
                theta_cs: PI / 2.0,
                r: 0.001,
            },
            cutoff: None,
            max_truncation_deficit: CurveOptions::default().max_truncation_deficit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let start = Instant::now();
    let (passed, detail) = f();
    Check {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Largest deviation between two curves after scaling each to unit peak.
pub fn shape_error(values: &[f64], reference: &[f64]) -> f64 {
    let peak = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let (pa, pb) = (peak(values), peak(reference));
    values
        .iter()
        .zip(reference)
        .map(|(a, b)| (a / pa - b / pb).abs())
        .fold(0.0, f64::max)
}

fn curve_opts(opts: &VerifyOptions) -> CurveOptions {
    CurveOptions {
        convention: opts.convention,
        ..CurveOptions::default()
    }
}

fn classical_limit(opts: &VerifyOptions) -> Vec<Check> {
    let alpha_mag = 1e-3f64.sqrt();
    let phases = default_phase_grid();
    let curve = n_fold_curve(
        &SourceParams::classical(alpha_mag),
        &LossModel::lossless(),
        3,
        &phases,
        &curve_opts(opts),
    );
    let curve = match curve {
        Ok(c) => c,
        Err(e) => {
            return vec![Check {
                name: "classical limit",
                passed: false,
                detail: e.to_string(),
                seconds: 0.0,
            }]
        }
    };
    let shape: Vec<f64> = phases.iter().map(|p| (p / 2.0).sin().powi(6)).collect();
    let err = shape_error(&curve.values, &shape);
    let prefactor = alpha_mag.powi(6) / 6.0;
    let ratio = curve.peak() / prefactor;
    vec![
        Check {
            name: "classical limit shape sin^6(phi/2)",
            passed: err < 1e-6,
            detail: format!("max shape error {err:.2e} (< 1e-6)"),
            seconds: 0.0,
        },
        Check {
            name: "classical limit prefactor |alpha|^6/6",
            passed: (ratio - 1.0).abs() < 1e-3,
            detail: format!("peak / prefactor = {ratio:.7} (within 1e-3)"),
            seconds: 0.0,
        },
    ]
}

fn noon_limit(opts: &VerifyOptions) -> (bool, String) {
    let phases = default_phase_grid();
    let source = match SourceParams::noon_condition(1e-3f64.sqrt()) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    match n_fold_curve(
        &source,
        &LossModel::lossless(),
        3,
        &phases,
        &curve_opts(opts),
    ) {
        Ok(curve) => {
            let shape: Vec<f64> = phases.iter().map(|p| (1.5 * p).sin().powi(2)).collect();
            let err = shape_error(&curve.values, &shape);
            (err < 1e-6, format!("max shape error {err:.2e} (< 1e-6)"))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn random_source(rng: &mut ChaCha8Rng, max: f64) -> SourceParams {
    SourceParams {
        alpha_mag: rng.random_range(0.01..max),
        theta_cs: rng.random_range(0.0..TAU),
        r: rng.random_range(-max..max),
    }
}

fn first_beamsplitter_coefficients(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = random_source(&mut rng, 0.5);
        let amps = input_subspace(&s, 3, Expansion::LeadingOrder)
            .map(|a| a.with_convention(opts.convention))
            .and_then(|a| transform_subspace(&a, SubspaceElement::BeamSplitter));
        let amps = match amps {
            Ok(a) => a,
            Err(e) => return (false, e.to_string()),
        };
        let want = closed_form::after_first_beamsplitter(s.alpha(), s.r);
        for (got, want) in amps.coefficients().iter().zip(want) {
            worst = worst.max((got - want).norm());
        }
    }
    (
        worst < 1e-12,
        format!("20 tuples, max |diff| {worst:.2e} (< 1e-12)"),
    )
}

fn oracle_equivalence(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut worst = 0.0f64;
    let mut worst_abs = 0.0f64;
    for _ in 0..100 {
        let s = random_source(&mut rng, 0.3);
        let phi = rng.random_range(0.0..TAU);
        let cutoff = s.default_cutoff();
        let input = match s.input_state(cutoff) {
            Ok(i) => i,
            Err(e) => return (false, e.to_string()),
        };
        let out = MachZehnder::new(cutoff, opts.convention).apply(&input, phi);
        for n in 1..=4 {
            let full = out.amplitude(0, n).norm_sqr();
            let oracle = match subspace_probability(&s, n, Expansion::Exact, phi, opts.convention) {
                Ok(p) => p,
                Err(e) => return (false, e.to_string()),
            };
            let diff = (full - oracle).abs();
            worst_abs = worst_abs.max(diff);
            // values underflowing double precision carry no relative information
            if oracle > 1e-290 {
                worst = worst.max(diff / oracle);
            }
        }
    }
    (
        worst < 1e-10,
        format!("100 tuples x N=1..4, max relative error {worst:.2e} (< 1e-10), max abs {worst_abs:.1e}"),
    )
}

/// Random pure state supported on total photon numbers `<= cutoff`.
pub fn random_block_state(rng: &mut ChaCha8Rng, cutoff: usize) -> TwoModeState {
    let dim = cutoff + 1;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
    for n_a in 0..dim {
        for n_b in 0..dim - n_a {
            amps[n_a * dim + n_b] =
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    TwoModeState::from_amplitudes(cutoff, amps, 0.0).expect("normalized by construction")
}

fn unitarity(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xbeef);
    let mut worst = 0.0f64;
    for cutoff in [3, 8, 20] {
        let bs = BeamSplitter::new(cutoff, opts.convention);
        let mz = MachZehnder::new(cutoff, opts.convention);
        for _ in 0..10 {
            let s = random_block_state(&mut rng, cutoff);
            let phi = rng.random_range(-PI..PI);
            for out in [bs.apply(&s), phase_shift(&s, phi), mz.apply(&s, phi)] {
                worst = worst.max((out.norm_sqr() - s.norm_sqr()).abs());
            }
        }
    }
    (
        worst < 1e-12,
        format!("max |norm change| {worst:.2e} (< 1e-12)"),
    )
}

fn normalization_closure(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc105e);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let alpha = rng.random_range(0.0..3.0);
        let theta = rng.random_range(0.0..TAU);
        let r = rng.random_range(-1.0..1.0);
        let cutoff = rng.random_range(6..40);
        let states = coherent_state(alpha, theta, cutoff)
            .and_then(|a| squeezed_vacuum(r, cutoff).map(|b| (a, b)))
            .and_then(|(a, b)| {
                let p = product_state(&a, &b)?;
                Ok([
                    a.norm_sqr() + a.truncation_deficit(),
                    b.norm_sqr() + b.truncation_deficit(),
                    p.norm_sqr() + p.truncation_deficit(),
                ])
            });
        match states {
            Ok(totals) => {
                for t in totals {
                    worst = worst.max((t - 1.0).abs());
                }
            }
            // cutoffs too small for the drawn amplitude are refused; skip them
            Err(Error::CutoffInsufficient { .. }) => continue,
            Err(e) => return (false, e.to_string()),
        }
    }
    (
        worst < 1e-12,
        format!("max |sum + deficit - 1| {worst:.2e} (< 1e-12)"),
    )
}

fn block_conservation(opts: &VerifyOptions) -> (bool, String) {
    let cutoff = 10;
    let bs = BeamSplitter::new(cutoff, opts.convention);
    let mz = MachZehnder::new(cutoff, opts.convention);
    for n in 0..=cutoff {
        for k in 0..=n {
            let s = TwoModeState::fock(cutoff, k, n - k);
            for out in [bs.apply(&s), mz.apply(&s, 0.83)] {
                for n_a in 0..=cutoff {
                    for n_b in 0..=cutoff {
                        if n_a + n_b != n && out.amplitude(n_a, n_b) != Complex64::new(0.0, 0.0) {
                            return (false, format!("|{k},{}> leaks into |{n_a},{n_b}>", n - k));
                        }
                    }
                }
            }
        }
    }
    (
        true,
        format!("every Fock input up to N={cutoff} stays in its block"),
    )
}

fn outcome_completeness(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xa11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = random_block_state(&mut rng, 12);
        let loss = LossModel::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0))
            .expect("drawn in range");
        let total = click_distribution(&s, &loss).total() + s.truncation_deficit();
        worst = worst.max((total - 1.0).abs());
    }
    (
        worst < 1e-10,
        format!("max |sum - 1| {worst:.2e} (< 1e-10)"),
    )
}

fn monte_carlo(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x3c);
    let s = random_block_state(&mut rng, 6);
    let loss = LossModel::new(0.55, 0.3).expect("in range");
    let samples = match sample_clicks(&s, &loss, 1_000_000, opts.seed) {
        Ok(x) => x,
        Err(e) => return (false, e.to_string()),
    };
    let mut worst = 0.0f64;
    for n_e in 0..=6 {
        for n_f in 0..=6 - n_e {
            let o = ClickOutcome::new(n_e, n_f);
            let exact = click_probability(&s, o, &loss);
            let se = samples.standard_error(o).max(1e-6);
            worst = worst.max((samples.probability(o) - exact).abs() / se);
        }
    }
    (
        worst < 5.0,
        format!("10^6 samples, worst deviation {worst:.2} sigma (< 5)"),
    )
}

fn noon_cross_terms(opts: &VerifyOptions) -> (bool, String) {
    let mut worst = 0.0f64;
    for alpha in [0.05, 0.2, 0.6] {
        let amps = SourceParams::noon_condition(alpha)
            .and_then(|s| input_subspace(&s, 3, Expansion::LeadingOrder))
            .map(|a| a.with_convention(opts.convention))
            .and_then(|a| transform_subspace(&a, SubspaceElement::BeamSplitter));
        match amps {
            Ok(a) => {
                worst = worst
                    .max(a.coefficient(1).norm())
                    .max(a.coefficient(2).norm())
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    (
        worst < 1e-14,
        format!("max |2,1>,|1,2> modulus {worst:.2e} (< 1e-14)"),
    )
}

fn configured_source(opts: &VerifyOptions) -> (bool, String) {
    let curve_opts = CurveOptions {
        cutoff: opts.cutoff,
        max_truncation_deficit: opts.max_truncation_deficit,
        convention: opts.convention,
        ..CurveOptions::default()
    };
    let phases = [0.0, PI / 2.0, PI];
    match n_fold_curve(
        &opts.source,
        &LossModel::lossless(),
        1,
        &phases,
        &curve_opts,
    ) {
        Ok(c) => {
            let cutoff = c.params.map(|p| p.cutoff).unwrap_or_default();
            (true, format!("cutoff {cutoff} holds the configured source"))
        }
        Err(e) => (false, e.to_string()),
    }
}

/// Runs every check in a fixed order.
pub fn run_checks(opts: &VerifyOptions) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = classical_limit(opts);
    let elapsed = start.elapsed().as_secs_f64();
    checks.iter_mut().for_each(|c| c.seconds = elapsed);
    checks.push(timed("NOON limit shape sin^2(3phi/2)", || noon_limit(opts)));
    checks.push(timed("first beamsplitter coefficients", || {
        first_beamsplitter_coefficients(opts)
    }));
    checks.push(timed("oracle equivalence", || oracle_equivalence(opts)));
    checks.push(timed("NOON cross-term cancellation", || {
        noon_cross_terms(opts)
    }));
    checks.push(timed("unitarity", || unitarity(opts)));
    checks.push(timed("normalization closure", || {
        normalization_closure(opts)
    }));
    checks.push(timed("photon-number block conservation", || {
        block_conservation(opts)
    }));
    checks.push(timed("outcome completeness under loss", || {
        outcome_completeness(opts)
    }));
    checks.push(timed("Monte-Carlo thinning agreement", || {
        monte_carlo(opts)
    }));
    checks.push(timed("configured source within cutoff", || {
        configured_source(opts)
    }));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let checks = run_checks(&VerifyOptions::default());
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn swapped_convention_fails_the_coefficient_check() {
        let opts = VerifyOptions {
            convention: BeamSplitterConvention::Swapped,
            ..VerifyOptions::default()
        };
        let (passed, _) = first_beamsplitter_coefficients(&opts);
        assert!(!passed);
    }

    #[test]
    fn tiny_cutoff_is_reported() {
        let opts = VerifyOptions {
            source: SourceParams::classical(1.0),
            cutoff: Some(2),
            ..VerifyOptions::default()
        };
        let (passed, detail) = configured_source(&opts);
        assert!(!passed);
        assert!(detail.contains("cutoff 2 is insufficient"), "{detail}");
    }
}
