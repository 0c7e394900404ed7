//! How the fringe narrows as the squeezed component grows.

use std::f64::consts::FRAC_PI_2;

use subrayleigh::analysis::{default_phase_grid, gamma_sweep};
use subrayleigh::detection::{CurveOptions, LossModel};
use subrayleigh::fock::SourceParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = SourceParams::new(0.1, FRAC_PI_2, 0.0)?;
    let values: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let points = gamma_sweep(
        &base,
        &LossModel::uniform(0.1)?,
        3,
        &values,
        &default_phase_grid(),
        &CurveOptions::default(),
    )?;
    for p in points {
        println!(
            "γ⁻¹ {:.1}  r {:.4}  FWHM {:.4}  visibility {:.4}",
            p.gamma_inverse, p.source.r, p.metrics.fwhm, p.metrics.visibility
        );
    }
    Ok(())
}
