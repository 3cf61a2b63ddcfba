//! Synthesize noisy bidirectional soundings and recover the RF gains.
//!
//! `cargo run --example simulate_and_estimate`

use selfcal::crlb::{crlb_closed_form, ScenarioParams};
use selfcal::estimator::{collapse_repetitions, estimation_error, ml_estimate};
use selfcal::simulate::{draw_gains, synthesize};
use selfcal::topology::Topology;

fn main() -> selfcal::Result<()> {
    let t = Topology::daisy(9, 5)?;
    let f = t.reference();

    // Noiseless: exact recovery.
    let clean = ScenarioParams::unit().with_noise_variance(0.0);
    let g = draw_gains(t.m(), &clean, 1);
    let est = ml_estimate(&collapse_repetitions(&synthesize(&t, &g, &clean, 1, 2)), &t, &clean, g.alpha(f), g.beta(f))?;
    println!("noiseless average |error|^2: {:.3e}", estimation_error(&est, &g)?.average_alpha);

    // Noisy: compare empirical MSE with the bound as repetitions grow.
    let s = ScenarioParams::unit().with_snr_db(30.0);
    let bound = crlb_closed_form(&t, &s)?;
    let trials = 2000;
    for reps in [1, 4, 16] {
        let mut mse = 0.0;
        for trial in 0..trials {
            let g = draw_gains(t.m(), &s, 1000 + trial);
            let ms = collapse_repetitions(&synthesize(&t, &g, &s, reps, trial));
            let est = ml_estimate(&ms, &t, &s, g.alpha(f), g.beta(f))?;
            mse += estimation_error(&est, &g)?.average_alpha;
        }
        mse /= trials as f64;
        let crlb = bound.average_alpha / reps as f64;
        println!("I = {reps:>2}: MSE {mse:.4e}, CRLB {crlb:.4e}, ratio {:.3}", mse / crlb);
    }

    let g = draw_gains(t.m(), &s, 7);
    let est = ml_estimate(&collapse_repetitions(&synthesize(&t, &g, &s, 1, 7)), &t, &s, g.alpha(f), g.beta(f))?;
    println!("\nsingle trial estimates:");
    for &k in &est.antennas {
        println!("  antenna {k}: alpha {:.4} (true {:.4})", est.alpha(k).unwrap(), g.alpha(k));
    }
    Ok(())
}
