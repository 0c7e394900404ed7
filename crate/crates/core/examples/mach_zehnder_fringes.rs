//! Lossless N-fold fringes at the dark port for a weak coherent input.

use subrayleigh::fock::SourceParams;
use subrayleigh::math::linspace;
use subrayleigh::optics::mach_zehnder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = SourceParams::classical(0.3);
    let state = source.input_state(source.default_cutoff())?;
    println!("{:>8} {:>12} {:>12} {:>12}", "phi", "N=1", "N=2", "N=3");
    for phi in linspace(0.0, std::f64::consts::TAU, 13) {
        let out = mach_zehnder(&state, phi);
        let p: Vec<f64> = (1..=3).map(|n| out.amplitude(0, n).norm_sqr()).collect();
        println!("{phi:8.4} {:12.4e} {:12.4e} {:12.4e}", p[0], p[1], p[2]);
    }
    Ok(())
}
