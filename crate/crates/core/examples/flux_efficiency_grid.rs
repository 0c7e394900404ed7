//! Fringe distortion as pair flux rises, for NOON and γ⁻¹ = 0.1 sources.

use subrayleigh::analysis::{default_phase_grid, flux_efficiency_grid};
use subrayleigh::detection::{CurveOptions, DEFAULT_REP_RATE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let etas = [1.0, 0.01];
    let ppps = [1e-4, 1e-2, 1e-1];
    for gamma_inverse in [1.0, 0.1] {
        println!("γ⁻¹ = {gamma_inverse}");
        let grid = flux_efficiency_grid(
            gamma_inverse,
            &etas,
            &ppps,
            3,
            &default_phase_grid(),
            DEFAULT_REP_RATE,
            &CurveOptions::default(),
        )?;
        for p in grid {
            println!(
                "  η {:<5} ppp {:<7.0e} distortion {:.4}  FWHM {:.4}  peak {:.3e} Hz",
                p.eta,
                p.pairs_per_pulse,
                p.distortion,
                p.metrics.map_or(f64::NAN, |m| m.fwhm),
                p.peak_rate_hz
            );
        }
    }
    Ok(())
}
