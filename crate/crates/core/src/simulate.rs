//! Ground-truth RF gains and noisy sounding measurements.
//!
//! A sounding of the line between `p` and `q`, transmitted by `p` and
//! received by `q`, yields `y = β_q · h · α_p + n` with a unit sounding
//! signal and `n` circularly-symmetric complex Gaussian of variance `σ²`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::crlb::ScenarioParams;
use crate::seed;
use crate::topology::{Antenna, Topology};

/// Transmit and receive gains of every antenna, reference included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfGains {
    /// `alpha[k - 1]` is the transmit gain of antenna `k`.
    pub alpha: Vec<Complex64>,
    /// `beta[k - 1]` is the receive gain of antenna `k`.
    pub beta: Vec<Complex64>,
}

impl RfGains {
    /// All gains equal to one.
    pub fn unit(m: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        RfGains {
            alpha: vec![one; m],
            beta: vec![one; m],
        }
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, antenna: Antenna) -> Complex64 {
        self.alpha[antenna - 1]
    }

    pub fn beta(&self, antenna: Antenna) -> Complex64 {
        self.beta[antenna - 1]
    }
}

/// Draws gains with amplitudes `a`, `b` and i.i.d. phases uniform on `[−π, π)`.
pub fn draw_gains(m: usize, s: &ScenarioParams, seed: u64) -> RfGains {
    let mut rng = seed::rng(seed, &[0x6761_696e]);
    let mut phase = || rng.random_range(-PI..PI);
    let alpha = (0..m)
        .map(|_| Complex64::from_polar(s.tx_amplitude, phase()))
        .collect();
    let beta = (0..m)
        .map(|_| Complex64::from_polar(s.rx_amplitude, phase()))
        .collect();
    RfGains { alpha, beta }
}

/// One directed line and its repeated observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub tx: Antenna,
    pub rx: Antenna,
    /// One value per repetition, `[re, im]` in JSON.
    pub values: Vec<Complex64>,
}

/// Noisy measurements of every line in both directions, `I` times each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MeasurementFile", try_from = "MeasurementFile")]
pub struct MeasurementSet {
    pub m: usize,
    pub repetitions: usize,
    pub sounding_value: Complex64,
    /// Variance of the noise on each stored value.
    pub noise_variance: f64,
    pub observations: BTreeMap<(Antenna, Antenna), Vec<Complex64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasurementFile {
    m: usize,
    repetitions: usize,
    sounding_value: Complex64,
    noise_variance: f64,
    observations: Vec<Observation>,
}

impl From<MeasurementSet> for MeasurementFile {
    fn from(ms: MeasurementSet) -> Self {
        MeasurementFile {
            m: ms.m,
            repetitions: ms.repetitions,
            sounding_value: ms.sounding_value,
            noise_variance: ms.noise_variance,
            observations: ms
                .observations
                .into_iter()
                .map(|((tx, rx), values)| Observation { tx, rx, values })
                .collect(),
        }
    }
}

impl TryFrom<MeasurementFile> for MeasurementSet {
    type Error = String;

    fn try_from(f: MeasurementFile) -> Result<Self, String> {
        let mut observations = BTreeMap::new();
        for o in f.observations {
            if o.values.len() != f.repetitions {
                return Err(format!(
                    "line {}->{} has {} values, expected {}",
                    o.tx,
                    o.rx,
                    o.values.len(),
                    f.repetitions
                ));
            }
            if observations.insert((o.tx, o.rx), o.values).is_some() {
                return Err(format!("line {}->{} listed twice", o.tx, o.rx));
            }
        }
        Ok(MeasurementSet {
            m: f.m,
            repetitions: f.repetitions,
            sounding_value: f.sounding_value,
            noise_variance: f.noise_variance,
            observations,
        })
    }
}

impl MeasurementSet {
    /// Values received by `rx` from `tx`.
    pub fn get(&self, tx: Antenna, rx: Antenna) -> Option<&[Complex64]> {
        self.observations.get(&(tx, rx)).map(Vec::as_slice)
    }

    /// Total number of scalar observations, `2(M − 1) · I` for a tree.
    pub fn observation_count(&self) -> usize {
        self.observations.values().map(Vec::len).sum()
    }

    /// Whether the keys are exactly both directions of every line of `t`.
    pub fn matches(&self, t: &Topology) -> bool {
        self.m == t.m()
            && self.observations.len() == 2 * t.edges().len()
            && t
                .edges()
                .iter()
                .all(|&(p, q)| self.observations.contains_key(&(p, q)) && self.observations.contains_key(&(q, p)))
    }
}

/// Synthesizes `repetitions` soundings of every line in both directions.
///
/// The noise for line `tx → rx` comes from its own stream keyed by
/// `(seed, tx, rx)`, repetitions drawn in order, so the result does not
/// depend on evaluation order. A zero noise variance gives exact values.
pub fn synthesize(
    t: &Topology,
    gains: &RfGains,
    s: &ScenarioParams,
    repetitions: usize,
    seed: u64,
) -> MeasurementSet {
    let std = (s.noise_variance / 2.0).sqrt();
    let mut observations = BTreeMap::new();
    for &(p, q) in t.edges() {
        for (tx, rx) in [(p, q), (q, p)] {
            let clean = gains.beta(rx) * s.line_gain * gains.alpha(tx);
            let values = if std == 0.0 {
                vec![clean; repetitions]
            } else {
                let mut rng = seed::rng(seed, &[tx as u64, rx as u64]);
                (0..repetitions)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        clean + Complex64::new(std * re, std * im)
                    })
                    .collect()
            };
            observations.insert((tx, rx), values);
        }
    }
    MeasurementSet {
        m: t.m(),
        repetitions,
        sounding_value: Complex64::new(1.0, 0.0),
        noise_variance: s.noise_variance,
        observations,
    }
}
