//! How the budgeted daisy advantage evolves with array size, and where to
//! put the reference.
//!
//! `cargo run --example budget_tradeoff`

use selfcal::crlb::{budgeted_average_crlb, daisy_budget_ratio, optimal_reference, ScenarioParams, DAISY_RATIO_LIMIT};
use selfcal::rational::to_f64;
use selfcal::topology::Topology;

fn main() -> selfcal::Result<()> {
    println!("{:>5} {:>5} {:>12} {:>10}", "M", "f*", "daisy/star", "value");
    for m in [3, 4, 5, 6, 9, 17, 33, 51, 65, 101, 129, 257] {
        let (f, _) = optimal_reference(m)?;
        let r = daisy_budget_ratio(m)?;
        println!("{m:>5} {f:>5} {:>12} {:>10.6}", r.to_string(), to_f64(r));
    }
    println!("limit: {DAISY_RATIO_LIMIT}");

    // The same quantity through the full report, with a time budget that
    // matches one star round on 129 antennas.
    let s = ScenarioParams::unit().with_snr_db(20.0);
    for f in [1, 64, 65] {
        let report = budgeted_average_crlb(&Topology::daisy(129, f)?, &s, 256)?;
        println!(
            "daisy(129, {f:>2}): I = {:>2}, leftover {} s, average bound {:.6e} = {:.10} rho",
            report.repetitions,
            report.remainder_seconds,
            report.average_alpha,
            report.average_alpha / report.rho_b
        );
    }
    Ok(())
}
