//! Maximum-likelihood gain estimation on tree wirings.
//!
//! A tree gives exactly `2(M − 1)` complex equations for `2(M − 1)`
//! unknowns. Walking outward from the reference, each line `parent → child`
//! is solved for the child's receive gain and `child → parent` for its
//! transmit gain. The result reproduces every observation exactly, which is
//! the maximum of the Gaussian likelihood.
//!
//! Repeated soundings are first averaged per direction: the sample mean is
//! sufficient for i.i.d. Gaussian noise with a common mean, so the ML
//! solution over `I` rounds is the single-round solution on the means.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::crlb::ScenarioParams;
use crate::simulate::{MeasurementSet, RfGains};
use crate::topology::{Antenna, Topology};

/// Default hazard floor, as a fraction of the nominal amplitude.
pub const DEFAULT_HAZARD_FRACTION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("measurement set holds {0} repetitions; collapse it first")]
    NotCollapsed(usize),
    #[error("measurement set does not cover line {tx} -> {rx}")]
    MissingObservation { tx: Antenna, rx: Antenna },
    #[error("measurement set is for {found} antennas, topology has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reference gains and line gain must be nonzero")]
    ZeroKnownGain,
    #[error("estimate for antenna {antenna} collapsed to magnitude {magnitude:e}; SNR too low for propagation")]
    DivisionHazard { antenna: Antenna, magnitude: f64 },
}

/// Estimated gains of the ordinary antennas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainEstimates {
    pub m: usize,
    pub reference: Antenna,
    /// Ordinary antennas, ascending.
    pub antennas: Vec<Antenna>,
    pub alpha_hat: Vec<Complex64>,
    pub beta_hat: Vec<Complex64>,
    pub reference_alpha: Complex64,
    pub reference_beta: Complex64,
}

impl GainEstimates {
    fn index(&self, antenna: Antenna) -> Option<usize> {
        self.antennas.binary_search(&antenna).ok()
    }

    /// Transmit gain of any antenna, the reference included.
    pub fn alpha(&self, antenna: Antenna) -> Option<Complex64> {
        if antenna == self.reference {
            return Some(self.reference_alpha);
        }
        self.index(antenna).map(|i| self.alpha_hat[i])
    }

    pub fn beta(&self, antenna: Antenna) -> Option<Complex64> {
        if antenna == self.reference {
            return Some(self.reference_beta);
        }
        self.index(antenna).map(|i| self.beta_hat[i])
    }
}

/// Per-direction sample mean over repetitions.
pub fn collapse_repetitions(ms: &MeasurementSet) -> MeasurementSet {
    if ms.repetitions <= 1 {
        return ms.clone();
    }
    let reps = ms.repetitions as f64;
    let observations = ms
        .observations
        .iter()
        .map(|(&key, values)| (key, vec![values.iter().sum::<Complex64>() / reps]))
        .collect();
    MeasurementSet {
        m: ms.m,
        repetitions: 1,
        sounding_value: ms.sounding_value,
        noise_variance: ms.noise_variance / reps,
        observations,
    }
}

/// Propagation solver with a configurable division-hazard floor.
#[derive(Debug, Clone, Copy)]
pub struct MlEstimator {
    /// Estimates below `fraction · a` (or `· b`) abort the solve.
    pub hazard_fraction: f64,
}

impl Default for MlEstimator {
    fn default() -> Self {
        MlEstimator {
            hazard_fraction: DEFAULT_HAZARD_FRACTION,
        }
    }
}

impl MlEstimator {
    pub fn estimate(
        &self,
        ms: &MeasurementSet,
        t: &Topology,
        s: &ScenarioParams,
        ref_alpha: Complex64,
        ref_beta: Complex64,
    ) -> Result<GainEstimates, EstimatorError> {
        if ms.repetitions != 1 {
            return Err(EstimatorError::NotCollapsed(ms.repetitions));
        }
        if ms.m != t.m() {
            return Err(EstimatorError::DimensionMismatch {
                expected: t.m(),
                found: ms.m,
            });
        }
        let h = s.line_gain;
        if ref_alpha.norm_sqr() == 0.0 || ref_beta.norm_sqr() == 0.0 || h.norm_sqr() == 0.0 {
            return Err(EstimatorError::ZeroKnownGain);
        }
        let floor_alpha = self.hazard_fraction * s.tx_amplitude;
        let floor_beta = self.hazard_fraction * s.rx_amplitude;
        let observe = |tx: Antenna, rx: Antenna| -> Result<Complex64, EstimatorError> {
            ms.get(tx, rx)
                .and_then(|v| v.first().copied())
                .ok_or(EstimatorError::MissingObservation { tx, rx })
        };

        let m = t.m();
        let mut alpha = vec![Complex64::new(0.0, 0.0); m + 1];
        let mut beta = alpha.clone();
        alpha[t.reference()] = ref_alpha;
        beta[t.reference()] = ref_beta;

        let traversal = t.traversal();
        for &parent in &traversal.order {
            for child in t.children(parent, &traversal) {
                let b = observe(parent, child)? / (h * alpha[parent]);
                if b.norm() < floor_beta {
                    return Err(EstimatorError::DivisionHazard {
                        antenna: child,
                        magnitude: b.norm(),
                    });
                }
                let a = observe(child, parent)? / (beta[parent] * h);
                if a.norm() < floor_alpha {
                    return Err(EstimatorError::DivisionHazard {
                        antenna: child,
                        magnitude: a.norm(),
                    });
                }
                beta[child] = b;
                alpha[child] = a;
            }
        }

        let antennas: Vec<_> = t.ordinary_antennas().collect();
        Ok(GainEstimates {
            m,
            reference: t.reference(),
            alpha_hat: antennas.iter().map(|&k| alpha[k]).collect(),
            beta_hat: antennas.iter().map(|&k| beta[k]).collect(),
            antennas,
            reference_alpha: ref_alpha,
            reference_beta: ref_beta,
        })
    }
}

/// ML estimate with the default hazard floor.
pub fn ml_estimate(
    ms: &MeasurementSet,
    t: &Topology,
    s: &ScenarioParams,
    ref_alpha: Complex64,
    ref_beta: Complex64,
) -> Result<GainEstimates, EstimatorError> {
    MlEstimator::default().estimate(ms, t, s, ref_alpha, ref_beta)
}

/// Squared errors against ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationError {
    pub antennas: Vec<Antenna>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub average_alpha: f64,
    pub average_beta: f64,
}

pub fn estimation_error(
    est: &GainEstimates,
    truth: &RfGains,
) -> Result<EstimationError, EstimatorError> {
    if truth.m() != est.m {
        return Err(EstimatorError::DimensionMismatch {
            expected: est.m,
            found: truth.m(),
        });
    }
    let alpha: Vec<f64> = est
        .antennas
        .iter()
        .zip(&est.alpha_hat)
        .map(|(&k, &a)| (a - truth.alpha(k)).norm_sqr())
        .collect();
    let beta: Vec<f64> = est
        .antennas
        .iter()
        .zip(&est.beta_hat)
        .map(|(&k, &b)| (b - truth.beta(k)).norm_sqr())
        .collect();
    let n = est.antennas.len() as f64;
    Ok(EstimationError {
        average_alpha: alpha.iter().sum::<f64>() / n,
        average_beta: beta.iter().sum::<f64>() / n,
        antennas: est.antennas.clone(),
        alpha,
        beta,
    })
}
