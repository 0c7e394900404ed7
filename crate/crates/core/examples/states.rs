//! Builds the input state and reports how much probability the cutoff drops.

use std::f64::consts::FRAC_PI_2;

use subrayleigh::fock::{coherent_state, squeezed_vacuum, SourceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = coherent_state(0.5, FRAC_PI_2, 12)?;
    println!(
        "coherent |α|=0.5: <n> = {:.6}, deficit {:.2e}",
        alpha.mean_photon_number(),
        alpha.truncation_deficit()
    );

    let xi = squeezed_vacuum(0.3, 12)?;
    println!(
        "squeezed r=0.3:   <n> = {:.6} (sinh² r = {:.6})",
        xi.mean_photon_number(),
        0.3f64.sinh().powi(2)
    );
    for n in (0..=6).step_by(2) {
        println!("  P({n}) = {:.6e}", xi.amplitude(n).norm_sqr());
    }

    let source = SourceParams::with_gamma_inverse(0.1, FRAC_PI_2, 0.1)?;
    let state = source.input_state(source.default_cutoff())?;
    println!(
        "two-mode input at cutoff {}: norm {:.12}, deficit {:.2e}",
        state.cutoff(),
        state.norm_sqr(),
        state.truncation_deficit()
    );
    for n in 0..=4 {
        println!("  P(N={n}) = {:.6e}", state.block_probability(n));
    }
    Ok(())
}
