//! Internal self-calibration of TDD massive-MIMO base stations.
//!
//! A base station with `M` antennas wires its RF front-ends together with
//! `M - 1` transmission lines and sounds every line in both directions. The
//! gains of one reference antenna are known; everything else is estimated
//! from the sounding measurements. This crate answers three questions about
//! such a wiring:
//!
//! * how well can the gains be estimated at all ([`crlb`]),
//! * how long does it take to collect the measurements ([`topology::schedule`], [`crlb::budget`]),
//! * what does an actual estimator achieve on synthetic data ([`simulate`], [`estimator`]).
//!
//! [`harness`] ties these together into SNR sweeps and exhaustive checks of
//! the star/daisy-chain optimality results, and backs the `selfcal` binary.
//!
//! Antennas are 1-indexed throughout.
//!
//! ```
//! use selfcal::crlb::{crlb_closed_form, ScenarioParams};
//! use selfcal::topology::Topology;
//!
//! let daisy = Topology::daisy(5, 3).unwrap();
//! let report = crlb_closed_form(&daisy, &ScenarioParams::unit()).unwrap();
//! assert_eq!(report.per_antenna_alpha, vec![2.0, 1.0, 1.0, 2.0]);
//! assert_eq!(report.average_alpha, 1.5);
//! ```

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crlb;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod rational;
pub mod seed;
pub mod simulate;
pub mod topology;

pub use error::{Error, Result};
pub use num_complex::Complex64;
