//! Click statistics of |1,2⟩ behind lossy detectors, with and without dark clicks.

use subrayleigh::detection::{click_distribution, sample_clicks, ClickOutcome, LossModel};
use subrayleigh::fock::TwoModeState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = TwoModeState::fock(3, 1, 2);
    let loss = LossModel::new(0.8, 0.5)?;
    let exact = click_distribution(&state, &loss);
    let mc = sample_clicks(&state, &loss, 200_000, 7)?;
    println!(
        "{:>6} {:>10} {:>10} {:>9}",
        "(e,f)", "exact", "sampled", "σ"
    );
    for e in 0..=1 {
        for f in 0..=2 {
            let o = ClickOutcome::new(e, f);
            println!(
                "({e},{f})  {:10.6} {:10.6} {:9.2e}",
                exact.get(o),
                mc.probability(o),
                mc.standard_error(o)
            );
        }
    }

    let dark = loss.with_dark_clicks(1e-3, 1e-3)?;
    let with_dark = click_distribution(&state, &dark);
    println!(
        "P(1,3) with dark clicks: {:.3e}",
        with_dark.get(ClickOutcome::new(1, 3))
    );
    Ok(())
}
