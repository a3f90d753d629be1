//! The four-outcome joint measurement of two qubit observables and its
//! observed statistics.
//!
//! Each outcome pair (x, y) with x, y = +-1 carries an effect
//! (sigma_0 + eta(x,y) . sigma) / 4. The wired-in family uses the
//! tetrahedral vectors eta(x,y) = (eta / sqrt(3)) (x, y, xy): the four
//! effects point at the vertices of a regular tetrahedron, and at
//! eta = 1 the observed statistics amount to sampling the state's SU(2)
//! Husimi function at those four directions (no Husimi machinery is built
//! here; the connection is noted for orientation). Arbitrary
//! outcome-vector sets satisfying positivity and zero-sum are accepted
//! through [`EtaVectors::new`] so other measurement families can be
//! validated, but only the tetrahedral family feeds the witness pipeline.

use serde::{Deserialize, Serialize};

use crate::bloch::{dot, norm, BlochVector, DensityMatrix2, Vec3};
use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Fixed outcome order used everywhere, including file output:
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
pub const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Index of an outcome pair in [`OUTCOMES`].
pub fn outcome_index(x: i8, y: i8) -> usize {
    debug_assert!(x == 1 || x == -1);
    debug_assert!(y == 1 || y == -1);
    let xi = if x == 1 { 0 } else { 1 };
    let yi = if y == 1 { 0 } else { 1 };
    2 * xi + yi
}

/// Entries this close to zero from below are clamped; anything lower is a
/// hard error.
pub const PROBABILITY_CLAMP: f64 = 1e-15;

/// Tolerance on distribution normalization.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// The outcome vectors eta(x, y) of a four-outcome joint measurement,
/// together with the scalar strength eta.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaVectors {
    vectors: [Vec3; 4],
    strength: f64,
}

impl EtaVectors {
    /// The tetrahedral family eta(x,y) = (eta / sqrt(3)) (x, y, xy), for
    /// which |eta(x,y)| = eta exactly.
    pub fn tetrahedral(strength: f64) -> Result<Self> {
        if !(strength > 0.0 && strength <= 1.0) {
            return Err(Error::InvalidStrength(strength));
        }
        let scale = strength / 3.0_f64.sqrt();
        let vectors = OUTCOMES.map(|(x, y)| {
            [
                scale * f64::from(x),
                scale * f64::from(y),
                scale * f64::from(x) * f64::from(y),
            ]
        });
        Ok(EtaVectors { vectors, strength })
    }

    /// Arbitrary outcome vectors in [`OUTCOMES`] order. Requires
    /// |eta(x,y)| <= 1 for every outcome and a zero vector sum; `strength`
    /// is the nominal measurement strength in (0, 1] used by inversion.
    pub fn new(vectors: [Vec3; 4], strength: f64) -> Result<Self> {
        if !(strength > 0.0 && strength <= 1.0) {
            return Err(Error::InvalidStrength(strength));
        }
        for ((x, y), v) in OUTCOMES.iter().zip(&vectors) {
            let n = norm(*v);
            if n > 1.0 + NORMALIZATION_TOL {
                return Err(Error::EtaVectorTooLong {
                    label: format!("eta({x},{y})"),
                    norm: n,
                });
            }
        }
        let mut sum = [0.0; 3];
        for v in &vectors {
            for (acc, c) in sum.iter_mut().zip(v) {
                *acc += c;
            }
        }
        let residual = norm(sum);
        if residual > NORMALIZATION_TOL {
            return Err(Error::EtaVectorsUnbalanced(residual));
        }
        Ok(EtaVectors { vectors, strength })
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn vector(&self, x: i8, y: i8) -> Vec3 {
        self.vectors[outcome_index(x, y)]
    }

    pub fn vectors(&self) -> &[Vec3; 4] {
        &self.vectors
    }
}

/// The validated four effects of the joint measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPovm {
    effects: [Mat2; 4],
    eta: EtaVectors,
}

impl JointPovm {
    /// Builds the effects (sigma_0 + eta(x,y) . sigma) / 4 and checks
    /// positivity of each and normalization of the sum.
    pub fn from_eta(eta: EtaVectors) -> Result<Self> {
        let effects = eta.vectors.map(effect_matrix);
        for eff in &effects {
            let (min_eig, _) = eff.hermitian_eigenvalues();
            if min_eig < -NORMALIZATION_TOL {
                return Err(Error::NegativeEigenvalue(min_eig));
            }
        }
        let total = effects.iter().fold(Mat2::zero(), |acc, eff| acc + *eff);
        let residual = total - Mat2::identity();
        let worst = residual
            .e
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if worst > NORMALIZATION_TOL {
            return Err(Error::EtaVectorsUnbalanced(worst));
        }
        Ok(JointPovm { effects, eta })
    }

    /// The tetrahedral measurement at the given strength.
    pub fn tetrahedral(strength: f64) -> Result<Self> {
        JointPovm::from_eta(EtaVectors::tetrahedral(strength)?)
    }

    pub fn strength(&self) -> f64 {
        self.eta.strength()
    }

    pub fn eta_vectors(&self) -> &EtaVectors {
        &self.eta
    }

    pub fn effect(&self, x: i8, y: i8) -> &Mat2 {
        &self.effects[outcome_index(x, y)]
    }

    /// Born-rule statistics tr(rho effect) computed with explicit 2x2
    /// matrices; an independent route to [`observed_joint`].
    pub fn probabilities(&self, rho: &DensityMatrix2) -> Result<JointDistribution> {
        let p = self.effects.map(|eff| rho.expectation(&eff));
        JointDistribution::new(p)
    }
}

fn effect_matrix(v: Vec3) -> Mat2 {
    let dot_sigma =
        Mat2::pauli_x().scale(v[0]) + Mat2::pauli_y().scale(v[1]) + Mat2::pauli_z().scale(v[2]);
    (Mat2::identity() + dot_sigma).scale(0.25)
}

/// A proper (nonnegative, normalized) distribution over the four outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    entries: [f64; 4],
}

impl JointDistribution {
    /// Entries in [`OUTCOMES`] order; values in [-1e-15, 0) are clamped to
    /// zero, lower values are rejected, and the total must be 1 within
    /// `NORMALIZATION_TOL`.
    pub fn new(mut entries: [f64; 4]) -> Result<Self> {
        for p in entries.iter_mut() {
            if *p < 0.0 {
                if *p < -PROBABILITY_CLAMP {
                    return Err(Error::NegativeProbability(*p));
                }
                *p = 0.0;
            }
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalizedDistribution(total));
        }
        Ok(JointDistribution { entries })
    }

    pub fn uniform() -> Self {
        JointDistribution { entries: [0.25; 4] }
    }

    pub fn get(&self, x: i8, y: i8) -> f64 {
        self.entries[outcome_index(x, y)]
    }

    pub fn entries(&self) -> &[f64; 4] {
        &self.entries
    }

    /// Marginal over y, as [p(x=+1), p(x=-1)].
    pub fn marginal_x(&self) -> [f64; 2] {
        [
            self.entries[0] + self.entries[1],
            self.entries[2] + self.entries[3],
        ]
    }

    /// Marginal over x, as [p(y=+1), p(y=-1)].
    pub fn marginal_y(&self) -> [f64; 2] {
        [
            self.entries[0] + self.entries[2],
            self.entries[1] + self.entries[3],
        ]
    }

    /// Both observed marginals, x first.
    pub fn marginals(&self) -> ([f64; 2], [f64; 2]) {
        (self.marginal_x(), self.marginal_y())
    }

    /// First moment of x: sum_xy x p(x,y).
    pub fn moment_x(&self) -> f64 {
        (self.entries[0] + self.entries[1]) - (self.entries[2] + self.entries[3])
    }

    /// First moment of y.
    pub fn moment_y(&self) -> f64 {
        (self.entries[0] + self.entries[2]) - (self.entries[1] + self.entries[3])
    }

    /// Correlation sum_xy xy p(x,y).
    pub fn correlation(&self) -> f64 {
        (self.entries[0] + self.entries[3]) - (self.entries[1] + self.entries[2])
    }
}

/// Observed statistics (1 + eta(x,y) . s) / 4 of the joint measurement on
/// the state `s`; the closed form of the Born rule for these effects.
pub fn observed_joint(s: &BlochVector, povm: &JointPovm) -> JointDistribution {
    let sv = s.components();
    let entries = OUTCOMES.map(|(x, y)| 0.25 * (1.0 + dot(povm.eta.vector(x, y), sv)));
    JointDistribution::new(entries)
        .expect("effect statistics are nonnegative and normalized by construction")
}

/// Exact single-observable statistics of X = sigma_x and Y = sigma_y:
/// p_X(x) = (1 + x s_x) / 2 and p_Y(y) = (1 + y s_y) / 2, as
/// ([p(+1), p(-1)], [p(+1), p(-1)]).
pub fn exact_marginals(s: &BlochVector) -> ([f64; 2], [f64; 2]) {
    (
        [0.5 * (1.0 + s.x()), 0.5 * (1.0 - s.x())],
        [0.5 * (1.0 + s.y()), 0.5 * (1.0 - s.y())],
    )
}
