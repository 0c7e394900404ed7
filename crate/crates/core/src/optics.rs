//! Linear optics on [`TwoModeState`]: 50:50 beamsplitters, the phase shifter
//! and their Mach–Zehnder composition.
//!
//! Linear optics conserves the total photon number, so every element acts
//! block-diagonally on the blocks `n_a + n_b = N`. The beamsplitter applies a
//! precomputed real orthogonal `(N+1)×(N+1)` matrix per block. The grid only
//! holds complete blocks for `N <= cutoff`; amplitudes in higher blocks are
//! dropped and their probability is moved into the truncation deficit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fock::TwoModeState;

/// Creation-operator convention of the 50:50 beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamSplitterConvention {
    /// `a† → (c† + d†)/√2`, `b† → (c† − d†)/√2`.
    #[default]
    RealSymmetric,
    /// `a† → (c† − d†)/√2`, `b† → (c† + d†)/√2`. Only used as a negative control.
    Swapped,
}

impl BeamSplitterConvention {
    /// Row `i` gives the image of input creation operator `i` (a or b) in
    /// terms of the output operators (c, d).
    pub fn mode_matrix(self) -> [[f64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BeamSplitterConvention::RealSymmetric => [[h, h], [h, -h]],
            BeamSplitterConvention::Swapped => [[h, -h], [h, h]],
        }
    }
}

/// Fock-space representation of a beamsplitter up to a total photon number.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    convention: BeamSplitterConvention,
    // blocks[n] is (n+1)×(n+1), row-major; column k is the image of |k, n-k⟩
    blocks: Vec<Vec<f64>>,
}

impl BeamSplitter {
    /// Block matrices for `N = 0..=max_total`.
    ///
    /// Every entry of a 50:50 mode matrix is `±1/√2`, so
    /// `U[p][k] = 2^{-N/2} √(p!(N−p)!/(k!(N−k)!)) · S(p, k)` where `S` is an
    /// integer signed binomial sum. `S` is accumulated exactly in `i128`, which
    /// avoids the cancellation a floating-point sum suffers at large `N`.
    ///
    /// # Panics
    /// If `max_total > 120` (the exact sums would overflow).
    pub fn new(max_total: usize, convention: BeamSplitterConvention) -> Self {
        assert!(
            max_total <= 120,
            "beamsplitter blocks limited to 120 photons"
        );
        let signs = convention.mode_matrix().map(|row| row.map(|x| x < 0.0));
        let pascal = pascal_triangle(max_total);
        let blocks = (0..=max_total)
            .map(|n| block_matrix(n, signs, &pascal))
            .collect();
        Self { convention, blocks }
    }

    pub fn convention(&self) -> BeamSplitterConvention {
        self.convention
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Matrix of block `n`, row-major.
    pub fn block(&self, n: usize) -> &[f64] {
        &self.blocks[n]
    }

    pub fn apply(&self, state: &TwoModeState) -> TwoModeState {
        self.apply_with(state, false)
    }

    pub fn apply_inverse(&self, state: &TwoModeState) -> TwoModeState {
        self.apply_with(state, true)
    }

    fn apply_with(&self, state: &TwoModeState, transpose: bool) -> TwoModeState {
        assert!(
            self.max_total() >= state.cutoff(),
            "beamsplitter built for {} photons, state cutoff is {}",
            self.max_total(),
            state.cutoff()
        );
        let cutoff = state.cutoff();
        let dim = cutoff + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut dropped = 0.0;
        for n in (cutoff + 1)..=(2 * cutoff) {
            dropped += state.block_probability(n);
        }

        let mut input = Vec::with_capacity(dim);
        for n in 0..=cutoff {
            let m = n + 1;
            let u = &self.blocks[n];
            input.clear();
            input.extend((0..m).map(|k| state.amplitude(k, n - k)));
            for p in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, x) in input.iter().enumerate() {
                    let w = if transpose {
                        u[k * m + p]
                    } else {
                        u[p * m + k]
                    };
                    acc += x * w;
                }
                out[p * dim + (n - p)] = acc;
            }
        }

        let modes = if transpose {
            state.modes()
        } else {
            state.modes().after_beamsplitter()
        };
        TwoModeState::from_parts(
            cutoff,
            out,
            (state.truncation_deficit() + dropped).min(1.0),
            modes,
        )
    }
}

fn pascal_triangle(max: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut row = vec![1i128; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// `√(p!(n−p)!/(k!(n−k)!))` as a ratio of two partial products.
fn factorial_ratio_sqrt(n: usize, p: usize, k: usize) -> f64 {
    let prod = |lo: usize, hi: usize| (lo + 1..=hi).map(|i| i as f64).product::<f64>();
    // p!/k! · (n−p)!/(n−k)!
    let (num1, den1) = if p >= k {
        (prod(k, p), 1.0)
    } else {
        (1.0, prod(p, k))
    };
    let (num2, den2) = if n - p >= n - k {
        (prod(n - k, n - p), 1.0)
    } else {
        (1.0, prod(n - p, n - k))
    };
    ((num1 * num2) / (den1 * den2)).sqrt()
}

fn block_matrix(n: usize, negative: [[bool; 2]; 2], pascal: &[Vec<i128>]) -> Vec<f64> {
    let [[t_neg, s_neg], [u_neg, v_neg]] = negative;
    let dim = n + 1;
    let scale = 0.5f64.powi(n as i32).sqrt();
    let mut block = vec![0.0; dim * dim];
    for k in 0..dim {
        for p in 0..dim {
            // a†^k → Σ_i C(k,i) t^i s^{k−i} c†^i d†^{k−i}; b†^{n−k} likewise with j = p − i
            let mut sum: i128 = 0;
            for i in p.saturating_sub(n - k)..=k.min(p) {
                let j = p - i;
                let negatives = (t_neg as usize) * i
                    + (s_neg as usize) * (k - i)
                    + (u_neg as usize) * j
                    + (v_neg as usize) * (n - k - j);
                let term = pascal[k][i] * pascal[n - k][j];
                sum += if negatives.is_multiple_of(2) {
                    term
                } else {
                    -term
                };
            }
            block[p * dim + k] = scale * factorial_ratio_sqrt(n, p, k) * sum as f64;
        }
    }
    block
}

/// 50:50 beamsplitter in the [`BeamSplitterConvention::RealSymmetric`] convention.
pub fn beamsplitter_5050(state: &TwoModeState) -> TwoModeState {
    BeamSplitter::new(state.cutoff(), BeamSplitterConvention::RealSymmetric).apply(state)
}

/// Multiplies `amplitude(n_c, n_d)` by `e^{i n_d φ}`.
pub fn phase_shift(state: &TwoModeState, phi: f64) -> TwoModeState {
    let dim = state.dim();
    let phases: Vec<Complex64> = (0..dim)
        .map(|n| Complex64::from_polar(1.0, n as f64 * phi))
        .collect();
    let out = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| a * phases[idx % dim])
        .collect();
    TwoModeState::from_parts(
        state.cutoff(),
        out,
        state.truncation_deficit(),
        state.modes(),
    )
}

/// `BS₂ ∘ PS(φ) ∘ BS₁` with the default convention.
pub fn mach_zehnder(state: &TwoModeState, phi: f64) -> TwoModeState {
    MachZehnder::new(state.cutoff(), BeamSplitterConvention::RealSymmetric).apply(state, phi)
}

/// A Mach–Zehnder interferometer with cached beamsplitter blocks, for
/// evaluating many phases against one input.
#[derive(Debug, Clone)]
pub struct MachZehnder {
    bs: BeamSplitter,
}

impl MachZehnder {
    pub fn new(cutoff: usize, convention: BeamSplitterConvention) -> Self {
        Self {
            bs: BeamSplitter::new(cutoff, convention),
        }
    }

    pub fn beamsplitter(&self) -> &BeamSplitter {
        &self.bs
    }

    /// First beamsplitter only: the phase-independent half of the interferometer.
    pub fn split(&self, input: &TwoModeState) -> TwoModeState {
        self.bs.apply(input)
    }

    /// Phase shifter and second beamsplitter, applied to the output of [`split`](Self::split).
    pub fn recombine(&self, interior: &TwoModeState, phi: f64) -> TwoModeState {
        self.bs.apply(&phase_shift(interior, phi))
    }

    pub fn apply(&self, input: &TwoModeState, phi: f64) -> TwoModeState {
        self.recombine(&self.split(input), phi)
    }

    /// Output states for every phase, in grid order.
    pub fn sweep(&self, input: &TwoModeState, phases: &[f64]) -> Vec<TwoModeState> {
        let interior = self.split(input);
        phases
            .par_iter()
            .map(|&phi| self.recombine(&interior, phi))
            .collect()
    }
}

/// One optical element of an interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Element {
    BeamSplitter,
    InverseBeamSplitter,
    PhaseShift(f64),
}

/// An ordered element sequence; by default the three-stage Mach–Zehnder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub phi: f64,
    pub bs_convention: BeamSplitterConvention,
    pub stages: Vec<Element>,
}

impl InterferometerConfig {
    pub fn mach_zehnder(phi: f64) -> Self {
        Self::with_convention(phi, BeamSplitterConvention::RealSymmetric)
    }

    pub fn with_convention(phi: f64, bs_convention: BeamSplitterConvention) -> Self {
        Self {
            phi,
            bs_convention,
            stages: vec![
                Element::BeamSplitter,
                Element::PhaseShift(phi),
                Element::BeamSplitter,
            ],
        }
    }

    /// Reversed element order with every element inverted.
    pub fn inverse(&self) -> Self {
        let stages = self
            .stages
            .iter()
            .rev()
            .map(|e| match *e {
                Element::BeamSplitter => Element::InverseBeamSplitter,
                Element::InverseBeamSplitter => Element::BeamSplitter,
                Element::PhaseShift(phi) => Element::PhaseShift(-phi),
            })
            .collect();
        Self {
            phi: -self.phi,
            bs_convention: self.bs_convention,
            stages,
        }
    }

    pub fn apply(&self, state: &TwoModeState) -> TwoModeState {
        let bs = BeamSplitter::new(state.cutoff(), self.bs_convention);
        self.stages
            .iter()
            .fold(state.clone(), |s, element| match *element {
                Element::BeamSplitter => bs.apply(&s),
                Element::InverseBeamSplitter => bs.apply_inverse(&s),
                Element::PhaseShift(phi) => phase_shift(&s, phi),
            })
    }
}
