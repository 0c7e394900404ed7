//! Width and visibility of the three-fold fringe for three kinds of source.

use std::f64::consts::FRAC_PI_2;

use subrayleigh::analysis::{classical_fwhm, default_phase_grid, fringe_metrics, noon_fwhm};
use subrayleigh::detection::{n_fold_curve, CurveOptions, LossModel};
use subrayleigh::fock::SourceParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loss = LossModel::uniform(0.1)?;
    let sources = [
        ("coherent only", SourceParams::classical(0.1)),
        (
            "γ⁻¹ = 0.1",
            SourceParams::with_gamma_inverse(0.1, FRAC_PI_2, 0.1)?,
        ),
        ("NOON condition", SourceParams::noon_condition(0.1)?),
    ];
    println!(
        "reference widths: classical {:.4}, NOON {:.4}",
        classical_fwhm(3),
        noon_fwhm(3)
    );
    for (label, source) in sources {
        let curve = n_fold_curve(
            &source,
            &loss,
            3,
            &default_phase_grid(),
            &CurveOptions::default(),
        )?;
        let m = fringe_metrics(&curve)?;
        println!(
            "{label:<15} FWHM {:.4}  visibility {:.4}  narrowing {:.3}",
            m.fwhm,
            m.visibility,
            m.narrowing_fraction.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
