use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, OutputFormat};
use crate::crlb::CrlbReport;
use crate::estimator::{collapse_repetitions, estimation_error, ml_estimate, EstimatorError};
use crate::simulate::{draw_gains, synthesize};
use crate::topology::Topology;
use crate::{seed, Error};

/// Grid points whose division-hazard rate exceeds this are flagged.
pub const HAZARD_FLAG_RATE: f64 = 0.01;

/// One SNR point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub topology: String,
    pub m: usize,
    pub reference: usize,
    #[serde(rename = "I")]
    pub repetitions: u64,
    #[serde(rename = "F_seconds")]
    pub remainder_seconds: f64,
    pub avg_crlb_alpha: f64,
    pub avg_crlb_beta: f64,
    pub avg_mse_alpha: f64,
    pub avg_mse_beta: f64,
    pub trials: usize,
    pub hazard_rate: f64,
}

impl SweepRow {
    pub fn flagged(&self) -> bool {
        self.hazard_rate > HAZARD_FLAG_RATE
    }
}

struct TrialOutcome {
    mse_alpha: f64,
    mse_beta: f64,
}

fn run_trial(
    t: &Topology,
    cfg: &ExperimentConfig,
    noise_variance: f64,
    repetitions: usize,
    grid_index: usize,
    trial: usize,
) -> Result<TrialOutcome, EstimatorError> {
    let s = cfg.scenario.with_noise_variance(noise_variance);
    // Gains depend on the trial only, so every grid point sees the same draws.
    let gains = draw_gains(t.m(), &s, seed::derive(cfg.master_seed, &[trial as u64]));
    let noise_seed = seed::derive(cfg.master_seed, &[trial as u64, grid_index as u64 + 1]);
    let ms = collapse_repetitions(&synthesize(t, &gains, &s, repetitions, noise_seed));
    let f = t.reference();
    let est = ml_estimate(&ms, t, &s, gains.alpha(f), gains.beta(f))?;
    let err = estimation_error(&est, &gains)?;
    Ok(TrialOutcome {
        mse_alpha: err.average_alpha,
        mse_beta: err.average_beta,
    })
}

/// Monte-Carlo SNR sweep.
///
/// For each grid point the noise variance follows from the SNR, every trial
/// draws fresh gains, synthesizes `I` rounds, averages them, estimates and
/// scores. Trials that hit a division hazard are excluded from the MSE and
/// counted in `hazard_rate`. Trials run in parallel but are reduced in
/// trial order, so the output is reproducible bit for bit.
pub fn run_snr_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, Error> {
    let (t, repetitions, remainder_slots) = cfg.resolve()?;
    let mut rows = Vec::with_capacity(cfg.snr_grid_db.0.len());
    for (grid_index, &snr_db) in cfg.snr_grid_db.0.iter().enumerate() {
        let s = cfg.scenario.with_snr_db(snr_db);
        let bound = CrlbReport::from_distances(&t, &s, repetitions, remainder_slots)?;
        let outcomes: Vec<_> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                run_trial(&t, cfg, s.noise_variance, repetitions as usize, grid_index, trial)
            })
            .collect();

        let (mut sum_alpha, mut sum_beta, mut good, mut hazards) = (0.0, 0.0, 0usize, 0usize);
        for outcome in outcomes {
            match outcome {
                Ok(o) => {
                    sum_alpha += o.mse_alpha;
                    sum_beta += o.mse_beta;
                    good += 1;
                }
                Err(EstimatorError::DivisionHazard { .. }) => hazards += 1,
                Err(e) => return Err(e.into()),
            }
        }
        rows.push(SweepRow {
            snr_db,
            topology: cfg.topology.label(),
            m: t.m(),
            reference: t.reference(),
            repetitions,
            remainder_seconds: bound.remainder_seconds,
            avg_crlb_alpha: bound.average_alpha,
            avg_crlb_beta: bound.average_beta,
            avg_mse_alpha: sum_alpha / good as f64,
            avg_mse_beta: sum_beta / good as f64,
            trials: cfg.trials,
            hazard_rate: hazards as f64 / cfg.trials as f64,
        });
    }
    Ok(rows)
}

/// Writes sweep rows as CSV (one header line) or a JSON array.
pub fn write_sweep<W: std::io::Write>(
    rows: &[SweepRow],
    format: OutputFormat,
    mut w: W,
) -> Result<(), Error> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(w);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Budget, SnrGrid, TopologySpec};

    fn small(topology: TopologySpec) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(topology, 9, 5);
        cfg.snr_grid_db = SnrGrid(vec![20.0, 30.0]);
        cfg.trials = 200;
        cfg.master_seed = 3;
        cfg
    }

    #[test]
    fn star_rows_track_the_bound() {
        let rows = run_snr_sweep(&small(TopologySpec::Star)).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(row.repetitions, 1);
            assert_eq!(row.hazard_rate, 0.0);
            let ratio = row.avg_mse_alpha / row.avg_crlb_alpha;
            assert!((0.85..1.15).contains(&ratio), "ratio {ratio}");
        }
        assert!((rows[1].avg_crlb_alpha - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn time_budget_sets_repetitions() {
        let mut cfg = small(TopologySpec::Daisy);
        cfg.budget = Some(Budget::Time(2 * 8));
        let rows = run_snr_sweep(&cfg).unwrap();
        // 16 slots over a 4-slot round.
        assert_eq!(rows[0].repetitions, 4);
        assert_eq!(rows[0].remainder_seconds, 0.0);
        let profile = Topology::daisy(9, 5).unwrap().calibration_distances();
        let expected = crate::rational::to_f64(profile.mean) / 4.0 * 1e-2;
        assert!((rows[0].avg_crlb_alpha - expected).abs() < 1e-15);
    }

    #[test]
    fn reproducible_output() {
        let cfg = small(TopologySpec::Daisy);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_sweep(&run_snr_sweep(&cfg).unwrap(), OutputFormat::Csv, &mut a).unwrap();
        write_sweep(&run_snr_sweep(&cfg).unwrap(), OutputFormat::Csv, &mut b).unwrap();
        assert_eq!(a, b);
        let header = String::from_utf8(a).unwrap().lines().next().unwrap().to_string();
        assert_eq!(
            header,
            "snr_db,topology,m,reference,I,F_seconds,avg_crlb_alpha,avg_crlb_beta,\
             avg_mse_alpha,avg_mse_beta,trials,hazard_rate"
        );
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let mut cfg = small(TopologySpec::Star);
        cfg.trials = 5;
        let mut out = Vec::new();
        write_sweep(&run_snr_sweep(&cfg).unwrap(), OutputFormat::Json, &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v[0]["I"], 1);
        assert_eq!(v[0]["topology"], "star");
        assert!(v[0].get("hazard_rate").is_some());
    }
}
