//! The fixed-N subspace calculation next to the full simulation.

use std::f64::consts::FRAC_PI_2;

use subrayleigh::fock::SourceParams;
use subrayleigh::optics::{mach_zehnder, BeamSplitterConvention};
use subrayleigh::oracle::{closed_form, subspace_probability, Expansion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = SourceParams::with_gamma_inverse(0.2, FRAC_PI_2, 0.5)?;
    let state = source.input_state(source.default_cutoff())?;
    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "phi", "leading", "exact", "simulated"
    );
    for phi in [0.3, 1.0, 2.0, 3.0] {
        let leading = closed_form::three_photon_probability(source.alpha(), source.r, phi);
        let exact = subspace_probability(
            &source,
            3,
            Expansion::Exact,
            phi,
            BeamSplitterConvention::RealSymmetric,
        )?;
        let simulated = mach_zehnder(&state, phi).amplitude(0, 3).norm_sqr();
        println!("{phi:6.2} {leading:14.6e} {exact:14.6e} {simulated:14.6e}");
    }
    Ok(())
}
