//! Two photons meeting on a 50:50 beamsplitter leave together.

use subrayleigh::fock::TwoModeState;
use subrayleigh::optics::beamsplitter_5050;

fn main() {
    let out = beamsplitter_5050(&TwoModeState::fock(2, 1, 1));
    for (a, b) in [(2, 0), (1, 1), (0, 2)] {
        println!("P({a},{b}) = {:.6}", out.amplitude(a, b).norm_sqr());
    }
}
