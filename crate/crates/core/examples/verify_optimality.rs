//! Exhaustive checks over every labeled spanning tree of small arrays.
//!
//! `cargo run --release --example verify_optimality`

use selfcal::harness::{verify_daisy_optimality, verify_star_optimality, verify_time_bounds};
use selfcal::rational::to_f64;

fn main() -> selfcal::Result<()> {
    println!("Mean calibration distance over all trees:");
    for m in 3..=7 {
        let r = verify_star_optimality(m, 1)?;
        println!(
            "  M = {m}: {:>6} trees, min {} attained by {:?}, {}",
            r.tree_count,
            r.min_mean_distance,
            r.minimizers,
            if r.passed { "star is the unique minimizer" } else { "FAILED" }
        );
    }

    println!("\nOne-round collection time:");
    for m in 4..=7 {
        let r = verify_time_bounds(m)?;
        println!(
            "  M = {m}: slots in [{}, {}], {} paths at the floor, {} stars at the ceiling, passed = {}",
            r.min_slots, r.max_slots, r.lower_equality_count, r.upper_equality_count, r.passed
        );
    }

    println!("\nBudgeted average bound, central daisy relative to star:");
    let report = verify_daisy_optimality(3..=8)?;
    for e in &report.entries {
        let best = e.exhaustive.as_ref().map(|x| format!(", best over all trees {}", x.best_ratio)).unwrap_or_default();
        println!("  M = {}: daisy/star = {} ({:.4}){best}", e.m, e.ratio, to_f64(e.ratio));
    }
    println!("all checks passed: {}", report.passed);
    Ok(())
}
