//! Cramér-Rao lower bounds for the unknown RF gains.
//!
//! Two independent routes are provided: numeric inversion of the full
//! complex Fisher information matrix ([`fisher`]), and the closed form that
//! scales each antenna's calibration distance by the inverse SNR
//! ([`crlb_closed_form`]). [`budget`] covers the collection-time model and
//! the repetition bookkeeping under a fixed time budget.

pub mod budget;
pub mod fisher;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{serialize_ratio, to_f64};
use crate::topology::{Antenna, Topology};

pub use budget::{
    budgeted_average_crlb, daisy_mean_distance, optimal_reference, daisy_budget_ratio, repetition_budget,
    time_to_collect, RepetitionBudget, DAISY_RATIO_LIMIT,
};
pub use fisher::{crlb_numeric, fisher_matrix, FisherMatrix, NumericCrlb, CONDITION_LIMIT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrlbError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("noise variance is zero; the bound is degenerate")]
    Noiseless,
    #[error("gain amplitude of antenna {antenna} is {found}, expected {expected}")]
    AmplitudeMismatch {
        antenna: Antenna,
        expected: f64,
        found: f64,
    },
    #[error("gain vectors have length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Fisher matrix is singular or ill-conditioned (condition number {condition:e})")]
    Singular { condition: f64 },
    #[error("budget of {budget_slots} slots is below one collection round of {round_slots} slots")]
    InsufficientBudget { budget_slots: u64, round_slots: u64 },
    #[error("{0} is outside the valid antenna range")]
    InvalidAntennaCount(usize),
}

/// Physical constants of a calibration run.
///
/// `noise_variance` may be zero to describe noiseless synthesis; the bound
/// computations reject that case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// Common line gain `h` of every interconnection.
    pub line_gain: Complex64,
    /// Variance of the complex measurement noise.
    pub noise_variance: f64,
    /// Common transmit gain amplitude `a`.
    pub tx_amplitude: f64,
    /// Common receive gain amplitude `b`.
    pub rx_amplitude: f64,
    /// Duration `T` of one sounding slot in seconds.
    pub slot_duration: f64,
}

impl ScenarioParams {
    pub fn new(
        line_gain: Complex64,
        noise_variance: f64,
        tx_amplitude: f64,
        rx_amplitude: f64,
        slot_duration: f64,
    ) -> Result<Self, CrlbError> {
        let s = ScenarioParams {
            line_gain,
            noise_variance,
            tx_amplitude,
            rx_amplitude,
            slot_duration,
        };
        s.validate()?;
        Ok(s)
    }

    /// Unit line gain, unit amplitudes, unit noise and a 1 s slot.
    pub fn unit() -> Self {
        ScenarioParams {
            line_gain: Complex64::new(1.0, 0.0),
            noise_variance: 1.0,
            tx_amplitude: 1.0,
            rx_amplitude: 1.0,
            slot_duration: 1.0,
        }
    }

    /// Sets the noise variance from `SNR = a² b² |h|² / σ²` in dB.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        let signal = (self.tx_amplitude * self.rx_amplitude).powi(2) * self.line_gain.norm_sqr();
        self.noise_variance = signal * 10f64.powf(-snr_db / 10.0);
        self
    }

    pub fn with_noise_variance(mut self, noise_variance: f64) -> Self {
        self.noise_variance = noise_variance;
        self
    }

    pub fn validate(&self) -> Result<(), CrlbError> {
        let bad = |what: &str| Err(CrlbError::InvalidScenario(what.to_string()));
        if !(self.line_gain.norm_sqr() > 0.0) || !self.line_gain.norm_sqr().is_finite() {
            return bad("line gain must be nonzero and finite");
        }
        if !(self.noise_variance >= 0.0) || !self.noise_variance.is_finite() {
            return bad("noise variance must be finite and non-negative");
        }
        if !(self.tx_amplitude > 0.0 && self.rx_amplitude > 0.0)
            || !self.tx_amplitude.is_finite()
            || !self.rx_amplitude.is_finite()
        {
            return bad("gain amplitudes must be positive and finite");
        }
        if !(self.slot_duration > 0.0) || !self.slot_duration.is_finite() {
            return bad("slot duration must be positive and finite");
        }
        Ok(())
    }

    fn require_noise(&self) -> Result<(), CrlbError> {
        self.validate()?;
        if self.noise_variance == 0.0 {
            return Err(CrlbError::Noiseless);
        }
        Ok(())
    }

    /// `(ρ_a, ρ_b) = (σ² / (a²|h|²), σ² / (b²|h|²))`.
    pub fn noise_ratios(&self) -> (f64, f64) {
        let h2 = self.line_gain.norm_sqr();
        (
            self.noise_variance / (self.tx_amplitude.powi(2) * h2),
            self.noise_variance / (self.rx_amplitude.powi(2) * h2),
        )
    }
}

/// Per-antenna and average bounds plus the time-budget bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrlbReport {
    pub m: usize,
    pub reference: Antenna,
    /// Ordinary antennas, ascending.
    pub antennas: Vec<Antenna>,
    pub distances: Vec<u64>,
    pub per_antenna_alpha: Vec<f64>,
    pub per_antenna_beta: Vec<f64>,
    pub average_alpha: f64,
    pub average_beta: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub mean_distance: Rational64,
    pub rho_a: f64,
    pub rho_b: f64,
    /// `I`: full collection rounds that fit the budget.
    pub repetitions: u64,
    /// `F` in seconds (left unused).
    pub remainder_seconds: f64,
    /// `T_arb` in seconds.
    pub collection_time: f64,
}

/// One CSV line of a [`CrlbReport`].
#[derive(Debug, Clone, Serialize)]
pub struct CrlbCsvRow {
    pub antenna: Antenna,
    pub d_m: u64,
    pub crlb_alpha: f64,
    pub crlb_beta: f64,
    pub rho_a: f64,
    pub rho_b: f64,
    #[serde(rename = "I")]
    pub repetitions: u64,
    #[serde(rename = "F_seconds")]
    pub remainder_seconds: f64,
    #[serde(rename = "T_arb_seconds")]
    pub collection_time: f64,
}

impl CrlbReport {
    /// Builds a report from distances, scaling every bound by `1 / I`.
    pub(crate) fn from_distances(
        t: &Topology,
        s: &ScenarioParams,
        repetitions: u64,
        remainder_slots: u64,
    ) -> Result<Self, CrlbError> {
        s.require_noise()?;
        let profile = t.calibration_distances();
        let (rho_a, rho_b) = s.noise_ratios();
        let reps = repetitions as f64;
        let per_antenna_alpha = profile
            .distances
            .iter()
            .map(|&d| d as f64 * rho_b / reps)
            .collect();
        let per_antenna_beta = profile
            .distances
            .iter()
            .map(|&d| d as f64 * rho_a / reps)
            .collect();
        let scaled = to_f64(profile.mean / Rational64::from_integer(repetitions as i64));
        Ok(CrlbReport {
            m: t.m(),
            reference: t.reference(),
            antennas: profile.antennas,
            distances: profile.distances,
            per_antenna_alpha,
            per_antenna_beta,
            average_alpha: scaled * rho_b,
            average_beta: scaled * rho_a,
            mean_distance: profile.mean,
            rho_a,
            rho_b,
            repetitions,
            remainder_seconds: remainder_slots as f64 * s.slot_duration,
            collection_time: time_to_collect(t) as f64 * s.slot_duration,
        })
    }

    pub fn csv_rows(&self) -> Vec<CrlbCsvRow> {
        self.antennas
            .iter()
            .enumerate()
            .map(|(i, &antenna)| CrlbCsvRow {
                antenna,
                d_m: self.distances[i],
                crlb_alpha: self.per_antenna_alpha[i],
                crlb_beta: self.per_antenna_beta[i],
                rho_a: self.rho_a,
                rho_b: self.rho_b,
                repetitions: self.repetitions,
                remainder_seconds: self.remainder_seconds,
                collection_time: self.collection_time,
            })
            .collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(w);
        for row in self.csv_rows() {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// `CRLB(α_m) = d_m ρ_b`, `CRLB(β_m) = d_m ρ_a`, with a single collection round.
pub fn crlb_closed_form(t: &Topology, s: &ScenarioParams) -> Result<CrlbReport, CrlbError> {
    CrlbReport::from_distances(t, s, 1, 0)
}
