#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfcal::crlb::ScenarioParams;
use selfcal::topology::{decode_pruefer, Topology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random labeled tree with a random reference.
pub fn random_tree(m: usize, rng: &mut impl Rng) -> Topology {
    let seq: Vec<usize> = (0..m - 2).map(|_| rng.random_range(0..m)).collect();
    let reference = rng.random_range(1..=m);
    Topology::from_edges(m, reference, decode_pruefer(m, &seq)).unwrap()
}

/// Random nonzero line gain, random amplitudes and noise.
pub fn random_scenario(rng: &mut impl Rng) -> ScenarioParams {
    let h = Complex64::from_polar(rng.random_range(0.2..3.0), rng.random_range(-3.1..3.1));
    ScenarioParams::new(
        h,
        rng.random_range(0.01..2.0),
        rng.random_range(0.3..2.5),
        rng.random_range(0.3..2.5),
        1.0,
    )
    .unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
