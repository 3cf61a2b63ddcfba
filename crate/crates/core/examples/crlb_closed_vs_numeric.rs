//! Per-antenna Cramér-Rao bounds two ways: inverting the Fisher matrix and
//! the hop-count closed form `d_m * rho`.
//!
//! `cargo run --example crlb_closed_vs_numeric`

use num_complex::Complex64;
use selfcal::crlb::{crlb_closed_form, crlb_numeric, fisher_matrix, ScenarioParams};
use selfcal::simulate::draw_gains;
use selfcal::topology::Topology;

fn main() -> selfcal::Result<()> {
    let s = ScenarioParams::new(Complex64::from_polar(0.8, 0.3), 1e-2, 1.2, 0.9, 1e-3)?;
    let t = Topology::from_edges(7, 3, [(3, 1), (1, 2), (3, 4), (4, 5), (3, 6), (6, 7)])?;
    let gains = draw_gains(t.m(), &s, 42);

    let j = fisher_matrix(&t, &gains, &s)?;
    let numeric = crlb_numeric(&j)?;
    let closed = crlb_closed_form(&t, &s)?;

    println!("rho_a = {:.6e}, rho_b = {:.6e}", closed.rho_a, closed.rho_b);
    println!("condition number of J: {:.3e}", numeric.condition_number);
    println!("{:>7} {:>4} {:>14} {:>14} {:>14} {:>14}", "antenna", "d_m", "alpha (J^-1)", "alpha (d*rho)", "beta (J^-1)", "beta (d*rho)");
    for i in 0..closed.antennas.len() {
        println!(
            "{:>7} {:>4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            closed.antennas[i],
            closed.distances[i],
            numeric.alpha[i],
            closed.per_antenna_alpha[i],
            numeric.beta[i],
            closed.per_antenna_beta[i]
        );
    }
    println!("average alpha bound: {:.6e} (mean distance {})", closed.average_alpha, closed.mean_distance);

    println!("\nCSV report:");
    closed.write_csv(std::io::stdout())?;
    Ok(())
}
