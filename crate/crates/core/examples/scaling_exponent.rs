//! Fits FWHM ∝ N^k for a classical and a mixed source.

use std::f64::consts::FRAC_PI_2;

use subrayleigh::analysis::{default_phase_grid, fwhm, scaling_exponent};
use subrayleigh::detection::{n_fold_curve, CurveOptions, LossModel};
use subrayleigh::fock::SourceParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loss = LossModel::uniform(0.1)?;
    for (label, source) in [
        ("classical", SourceParams::classical(0.1)),
        (
            "γ⁻¹ = 0.1",
            SourceParams::with_gamma_inverse(0.1, FRAC_PI_2, 0.1)?,
        ),
    ] {
        let mut widths = Vec::new();
        for n in 1..=4 {
            let curve = n_fold_curve(
                &source,
                &loss,
                n,
                &default_phase_grid(),
                &CurveOptions::default(),
            )?;
            widths.push((n, fwhm(&curve)?));
        }
        println!("{label}: widths {widths:.4?}");
        println!("  k over N=2..4: {:.4}", scaling_exponent(&widths[1..])?);
        println!("  k over N=1..4: {:.4}", scaling_exponent(&widths)?);
    }
    Ok(())
}
