//! Complex Fisher information for the stacked parameter `θ = [α; β]` over
//! the ordinary antennas, and its numeric inversion.
//!
//! ```text
//! J = |h|²/σ² · [ A  Dᴴ ]      A = diag_m Σ_{i ∈ C_m} |β_i|²
//!               [ D  B  ]      B = diag_m Σ_{i ∈ C_m} |α_i|²
//!                              D = diag(β) · Ā · diag(α*)
//! ```
//!
//! `C_m` is the neighbor set of antenna `m` (the reference included) and `Ā`
//! the interconnection matrix without the reference row and column.
//! `[J⁻¹]_kk` bounds `E|θ̂_k − θ_k|²` under circular complex Gaussian noise.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::{CrlbError, ScenarioParams};
use crate::simulate::RfGains;
use crate::topology::{Antenna, Topology};

/// Condition numbers above this are reported as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative tolerance of the equal-amplitude check on the gains.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FisherMatrix {
    /// Order `2(M - 1)`; α rows first, then β rows.
    pub matrix: DMatrix<Complex64>,
    /// Ordinary antenna for row `i` (and `i + M - 1`).
    pub antennas: Vec<Antenna>,
}

impl FisherMatrix {
    /// Assembles `J` from a raw edge list without checking that the edges
    /// form a spanning tree. Non-effective wirings produce singular matrices.
    pub fn from_edges(
        m: usize,
        reference: Antenna,
        edges: &[(Antenna, Antenna)],
        gains: &RfGains,
        s: &ScenarioParams,
    ) -> Result<Self, CrlbError> {
        s.require_noise()?;
        if gains.m() != m {
            return Err(CrlbError::DimensionMismatch {
                expected: m,
                found: gains.m(),
            });
        }
        if m < 2 || reference == 0 || reference > m {
            return Err(CrlbError::InvalidAntennaCount(m));
        }
        let antennas: Vec<Antenna> = (1..=m).filter(|&k| k != reference).collect();
        let n = antennas.len();
        // Row position of each antenna inside a block, None for the reference.
        let position = |k: Antenna| -> Option<usize> {
            match k.cmp(&reference) {
                std::cmp::Ordering::Less => Some(k - 1),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(k - 2),
            }
        };

        let scale = s.line_gain.norm_sqr() / s.noise_variance;
        let mut j = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        for &(p, q) in edges {
            for (u, v) in [(p, q), (q, p)] {
                if let Some(iu) = position(u) {
                    // Line u-v feeds Σ|β_v|² into A and Σ|α_v|² into B.
                    j[(iu, iu)] += scale * gains.beta(v).norm_sqr();
                    j[(n + iu, n + iu)] += scale * gains.alpha(v).norm_sqr();
                    if let Some(iv) = position(v) {
                        // D[u, v] = β_u α_v*, placed at (β_u, α_v) and mirrored.
                        let d = scale * gains.beta(u) * gains.alpha(v).conj();
                        j[(n + iu, iv)] += d;
                        j[(iv, n + iu)] += d.conj();
                    }
                }
            }
        }
        Ok(FisherMatrix {
            matrix: j,
            antennas,
        })
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row of `α_k` and of `β_k` for ordinary antenna `k`.
    pub fn rows_of(&self, antenna: Antenna) -> Option<(usize, usize)> {
        let n = self.antennas.len();
        self.antennas
            .binary_search(&antenna)
            .ok()
            .map(|i| (i, n + i))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let a = &self.matrix;
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        (0..a.nrows()).all(|r| (0..a.ncols()).all(|c| (a[(r, c)] - a[(c, r)].conj()).norm() <= tol * scale))
    }

    /// Eigenvalues of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Fisher matrix of a validated topology, checking the equal-amplitude
/// assumption on the gains.
pub fn fisher_matrix(
    t: &Topology,
    gains: &RfGains,
    s: &ScenarioParams,
) -> Result<FisherMatrix, CrlbError> {
    if gains.m() != t.m() {
        return Err(CrlbError::DimensionMismatch {
            expected: t.m(),
            found: gains.m(),
        });
    }
    for k in 1..=t.m() {
        for (expected, z) in [(s.tx_amplitude, gains.alpha(k)), (s.rx_amplitude, gains.beta(k))] {
            let found = z.norm();
            if (found - expected).abs() > AMPLITUDE_TOLERANCE * expected {
                return Err(CrlbError::AmplitudeMismatch {
                    antenna: k,
                    expected,
                    found,
                });
            }
        }
    }
    FisherMatrix::from_edges(t.m(), t.reference(), t.edges(), gains, s)
}

/// Diagonal of `J⁻¹`, split per ordinary antenna.
#[derive(Debug, Clone, Serialize)]
pub struct NumericCrlb {
    pub antennas: Vec<Antenna>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Spectral condition number of `J`.
    pub condition_number: f64,
}

/// Inverts `J` through a Cholesky solve of `J X = I`.
///
/// Matrices whose smallest eigenvalue is not positive, or whose condition
/// number exceeds [`CONDITION_LIMIT`], are rejected as singular.
pub fn crlb_numeric(j: &FisherMatrix) -> Result<NumericCrlb, CrlbError> {
    let ev = j.eigenvalues();
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= CONDITION_LIMIT) {
        return Err(CrlbError::Singular { condition });
    }
    let chol = Cholesky::new(j.matrix.clone()).ok_or(CrlbError::Singular { condition })?;
    let order = j.order();
    let inverse = chol.solve(&DMatrix::<Complex64>::identity(order, order));
    let n = j.antennas.len();
    let diag: Vec<f64> = (0..order).map(|i| inverse[(i, i)].re).collect();
    Ok(NumericCrlb {
        antennas: j.antennas.clone(),
        alpha: diag[..n].to_vec(),
        beta: diag[n..].to_vec(),
        condition_number: condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::RfGains;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dense(rows: &[[f64; 4]]) -> DMatrix<Complex64> {
        DMatrix::from_fn(4, 4, |r, col| c(rows[r][col]))
    }

    #[test]
    fn daisy3_unit_matrix() {
        let t = Topology::daisy(3, 1).unwrap();
        let j = fisher_matrix(&t, &RfGains::unit(3), &ScenarioParams::unit()).unwrap();
        let expected = dense(&[
            [2.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, 2.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(j.matrix, expected);
        let bound = crlb_numeric(&j).unwrap();
        for (got, want) in bound.alpha.iter().zip([1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in bound.beta.iter().zip([1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn star3_unit_matrix_is_identity() {
        let t = Topology::star(3, 1).unwrap();
        let j = fisher_matrix(&t, &RfGains::unit(3), &ScenarioParams::unit()).unwrap();
        assert_eq!(j.matrix, DMatrix::identity(4, 4));
        let bound = crlb_numeric(&j).unwrap();
        assert!(bound.alpha.iter().chain(&bound.beta).all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn daisy5_from_end() {
        let t = Topology::daisy(5, 1).unwrap();
        let j = fisher_matrix(&t, &RfGains::unit(5), &ScenarioParams::unit()).unwrap();
        let bound = crlb_numeric(&j).unwrap();
        for (got, want) in bound.alpha.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn index_map() {
        let t = Topology::star(4, 2).unwrap();
        let j = fisher_matrix(&t, &RfGains::unit(4), &ScenarioParams::unit()).unwrap();
        assert_eq!(j.antennas, vec![1, 3, 4]);
        assert_eq!(j.rows_of(3), Some((1, 4)));
        assert_eq!(j.rows_of(2), None);
        assert_eq!(j.order(), 6);
    }

    #[test]
    fn rejects_wrong_amplitudes() {
        let t = Topology::star(3, 1).unwrap();
        let mut g = RfGains::unit(3);
        g.alpha[1] = c(1.5);
        assert!(matches!(
            fisher_matrix(&t, &g, &ScenarioParams::unit()),
            Err(CrlbError::AmplitudeMismatch { antenna: 2, .. })
        ));
    }

    #[test]
    fn disconnected_candidate_is_singular() {
        // Antennas 3-4 wired to each other but not to the reference.
        let edges = [(1, 2), (3, 4), (2, 1)];
        let j = FisherMatrix::from_edges(4, 1, &edges[..2], &RfGains::unit(4), &ScenarioParams::unit())
            .unwrap();
        assert!(matches!(crlb_numeric(&j), Err(CrlbError::Singular { .. })));
        // An isolated antenna leaves an all-zero row.
        let j = FisherMatrix::from_edges(3, 1, &[(1, 2)], &RfGains::unit(3), &ScenarioParams::unit())
            .unwrap();
        assert!(matches!(crlb_numeric(&j), Err(CrlbError::Singular { .. })));
    }
}
