//! Monte-Carlo SNR sweep: star versus central daisy on a 129-antenna array
//! under a shared time budget. Set TRIALS to change the trial count.
//!
//! `cargo run --release --example snr_sweep`

use selfcal::harness::{run_snr_sweep, write_sweep, Budget, ExperimentConfig, OutputFormat, TopologySpec};

fn main() -> selfcal::Result<()> {
    let trials = std::env::var("TRIALS").ok().and_then(|v| v.parse().ok()).unwrap_or(1000);
    let curves = [
        ("star, one round", TopologySpec::Star, Budget::Measurements(256)),
        ("daisy, 256 slots", TopologySpec::Daisy, Budget::Time(256)),
        ("daisy, one round", TopologySpec::Daisy, Budget::Measurements(256)),
    ];
    let mut all = Vec::new();
    for (name, spec, budget) in curves {
        let mut cfg = ExperimentConfig::new(spec, 129, 64);
        cfg.trials = trials;
        cfg.master_seed = 7;
        cfg.budget = Some(budget);
        let rows = run_snr_sweep(&cfg)?;
        println!("{name} (I = {}):", rows[0].repetitions);
        for r in &rows {
            println!(
                "  {:>4} dB  CRLB {:.3e}  MSE {:.3e}  MSE/CRLB {:.3}",
                r.snr_db,
                r.avg_crlb_alpha,
                r.avg_mse_alpha,
                r.avg_mse_alpha / r.avg_crlb_alpha
            );
        }
        all.extend(rows);
    }
    println!("\nCSV:");
    write_sweep(&all, OutputFormat::Csv, std::io::stdout())?;
    Ok(())
}
