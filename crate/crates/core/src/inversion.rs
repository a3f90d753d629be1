//! Inversion of observed joint statistics into the retrieved quasi-joint
//! distribution, and the negativity witness built on it.
//!
//! The observed marginals of the tetrahedral measurement are smeared by a
//! factor eta / sqrt(3); the kernel mu(a, a') = (1 + (sqrt(3)/eta) a a') / 2
//! undoes the smearing exactly. Applied factor-wise to both outcome indices
//! it maps the observed joint to a normalized but possibly negative
//! quasi-distribution whose marginals are the exact single-observable
//! statistics. A negative entry is the nonclassicality signature, and it
//! appears exactly when sqrt(3) |s| > eta.

use serde::{Deserialize, Serialize};

use crate::bloch::{canonical_rotation, BlochVector, Rotation3};
use crate::error::{Error, Result};
use crate::povm::{observed_joint, outcome_index, JointDistribution, JointPovm, OUTCOMES};

/// Entries below -NEGATIVITY_TOL count as genuinely negative; anything
/// closer to zero is floating-point residue of the exact pipeline.
pub const NEGATIVITY_TOL: f64 = 1e-12;

/// The marginal-inversion kernel at strength eta.
///
/// Defined for every eta > 0: the kernel itself does not require a physical
/// measurement (eta = sqrt(3) even makes it the identity); the measurement
/// constructor is where eta <= 1 is enforced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionKernel {
    eta: f64,
}

impl InversionKernel {
    pub fn new(eta: f64) -> Result<Self> {
        if eta <= 0.0 || !eta.is_finite() {
            return Err(Error::NonPositiveStrength(eta));
        }
        Ok(InversionKernel { eta })
    }

    pub fn strength(&self) -> f64 {
        self.eta
    }

    /// sqrt(3) / eta, the amplification applied to correlations.
    pub fn amplification(&self) -> f64 {
        3.0_f64.sqrt() / self.eta
    }

    /// mu(a, a') = (1 + (sqrt(3)/eta) a a') / 2.
    pub fn weight(&self, a: i8, a_prime: i8) -> f64 {
        0.5 * (1.0 + self.amplification() * f64::from(a) * f64::from(a_prime))
    }

    /// Applies the kernel to a two-outcome distribution in [+1, -1] order.
    /// For observed marginals of the tetrahedral measurement this recovers
    /// the exact statistics (1 + a s_a) / 2.
    pub fn invert_marginal(&self, observed: [f64; 2]) -> [f64; 2] {
        let moment = observed[0] - observed[1];
        let k = self.amplification();
        [0.5 * (1.0 + k * moment), 0.5 * (1.0 - k * moment)]
    }

    /// Applies the kernel to both indices of the observed joint:
    /// p(x,y) = sum_{x',y'} mu(x,x') mu(y,y') p~(x',y').
    ///
    /// The product mu(x,x') mu(y,y') is expanded in the outcome moments of
    /// p~ before summation, so symmetric inputs invert without rounding
    /// residue; the nested sum evaluates to the same values.
    pub fn invert_joint(&self, observed: &JointDistribution) -> QuasiDistribution {
        let k = self.amplification();
        let mx = observed.moment_x();
        let my = observed.moment_y();
        let corr = observed.correlation();
        let entries = OUTCOMES.map(|(x, y)| {
            let x = f64::from(x);
            let y = f64::from(y);
            0.25 * (1.0 + k * x * mx + k * y * my + k * k * x * y * corr)
        });
        QuasiDistribution::new(entries).expect("kernel application preserves normalization")
    }

    /// The 4x4 matrix K\[(x,y)\]\[(x',y')\] = mu(x,x') mu(y,y') in the
    /// fixed outcome order; used for covariance propagation.
    pub fn joint_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (x, y) in OUTCOMES {
            for (xp, yp) in OUTCOMES {
                m[outcome_index(x, y)][outcome_index(xp, yp)] =
                    self.weight(x, xp) * self.weight(y, yp);
            }
        }
        m
    }
}

/// A normalized signed distribution over the four outcomes; entries may be
/// negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistribution {
    entries: [f64; 4],
}

impl QuasiDistribution {
    /// Entries in [`OUTCOMES`] order summing to 1 within 1e-12.
    pub fn new(entries: [f64; 4]) -> Result<Self> {
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalizedDistribution(total));
        }
        Ok(QuasiDistribution { entries })
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

    /// Smallest entry and its outcome pair.
    pub fn min_entry(&self) -> (f64, (i8, i8)) {
        let mut best = (self.entries[0], OUTCOMES[0]);
        for (i, &(x, y)) in OUTCOMES.iter().enumerate() {
            if self.entries[i] < best.0 {
                best = (self.entries[i], (x, y));
            }
        }
        best
    }
}

/// Result of the negativity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Negativity {
    pub min_entry: f64,
    pub outcome: (i8, i8),
    pub nonclassical: bool,
}

/// Flags the distribution as nonclassical when its smallest entry lies
/// below -[`NEGATIVITY_TOL`].
pub fn negativity(q: &QuasiDistribution) -> Negativity {
    let (min_entry, outcome) = q.min_entry();
    Negativity {
        min_entry,
        outcome,
        nonclassical: min_entry < -NEGATIVITY_TOL,
    }
}

/// Default strength rule: eta = 0.9 min(1, sqrt(3) |s|).
///
/// Negativity needs eta < sqrt(3) |s|; pushing eta lower deepens the
/// negative entry but amplifies the inversion factor (and shot noise), so
/// a fixed 0.9 backoff is applied. For s = 0 no strength produces
/// negativity and the full-strength measurement is used for the report.
pub fn default_strength(state_norm: f64) -> f64 {
    if state_norm == 0.0 {
        return 1.0;
    }
    0.9 * (3.0_f64.sqrt() * state_norm).min(1.0)
}

/// Why the witness run concluded the way it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStatus {
    /// A negative quasi-probability entry was found.
    Nonclassical,
    /// s = 0: the observed statistics are uniform for every strength and no
    /// witness exists.
    MaximallyMixed,
    /// The requested strength satisfies eta >= sqrt(3) |s|, so the retrieved
    /// joint stays nonnegative at this setting.
    StrengthAboveThreshold,
}

/// Full record of a witness run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// The state as supplied.
    pub input: BlochVector,
    /// Rotation taking the input onto the +z axis.
    pub rotation: Rotation3,
    /// The canonical state (0, 0, |s|) actually measured.
    pub canonical: BlochVector,
    /// Measurement strength used.
    pub eta: f64,
    /// Observed statistics of the joint measurement.
    pub observed: JointDistribution,
    /// Retrieved quasi-joint distribution.
    pub quasi: QuasiDistribution,
    pub min_entry: f64,
    pub min_outcome: (i8, i8),
    pub nonclassical: bool,
    /// sqrt(3) |s| / eta; greater than 1 exactly when negativity appears.
    pub threshold_ratio: f64,
    pub status: WitnessStatus,
}

/// Runs the full witness pipeline: rotate to canonical axes, measure the
/// tetrahedral joint measurement at the chosen strength, invert, and flag
/// negativity.
///
/// Without an override the strength follows [`default_strength`], which
/// certifies every s != 0. An override outside (0, 1] is an error; an
/// override at or above sqrt(3) |s| is allowed but the run reports
/// `StrengthAboveThreshold` instead of a witness. States with |s| below
/// the resolution of the observed statistics (around 1e-16) invert as
/// uniform, like s = 0.
pub fn find_witness(s: &BlochVector, eta_override: Option<f64>) -> Result<WitnessReport> {
    if let Some(eta) = eta_override {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidStrength(eta));
        }
    }
    let (rotation, canonical) = canonical_rotation(s);
    let state_norm = canonical.z();
    let eta = eta_override.unwrap_or_else(|| default_strength(state_norm));
    let povm = JointPovm::tetrahedral(eta)?;
    let observed = observed_joint(&canonical, &povm);
    let kernel = InversionKernel::new(eta)?;
    let quasi = kernel.invert_joint(&observed);
    let neg = negativity(&quasi);
    let status = if state_norm == 0.0 {
        WitnessStatus::MaximallyMixed
    } else if neg.nonclassical {
        WitnessStatus::Nonclassical
    } else {
        WitnessStatus::StrengthAboveThreshold
    };
    Ok(WitnessReport {
        input: *s,
        rotation,
        canonical,
        eta,
        observed,
        quasi,
        min_entry: neg.min_entry,
        min_outcome: neg.outcome,
        nonclassical: neg.nonclassical,
        threshold_ratio: 3.0_f64.sqrt() * state_norm / eta,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::exact_marginals;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Literal nested double-kernel sum, kept independent of the
    /// implementation's moment expansion.
    fn invert_joint_nested(kernel: &InversionKernel, p: &JointDistribution) -> [f64; 4] {
        OUTCOMES.map(|(x, y)| {
            let mut acc = 0.0;
            for (xp, yp) in OUTCOMES {
                acc += kernel.weight(x, xp) * kernel.weight(y, yp) * p.get(xp, yp);
            }
            acc
        })
    }

    fn random_state(rng: &mut ChaCha8Rng) -> BlochVector {
        loop {
            let x = rng.random_range(-1.0..1.0);
            let y = rng.random_range(-1.0..1.0);
            let z = rng.random_range(-1.0..1.0);
            if (x * x + y * y + z * z) <= 1.0 {
                return BlochVector::new(x, y, z).unwrap();
            }
        }
    }

    #[test]
    fn kernel_columns_sum_to_one() {
        for eta in [0.05, 0.3, 0.9, 1.0, 3.0_f64.sqrt(), 2.0] {
            let kernel = InversionKernel::new(eta).unwrap();
            for a_prime in [1, -1] {
                let total = kernel.weight(1, a_prime) + kernel.weight(-1, a_prime);
                assert_eq!(total, 1.0);
            }
        }
    }

    #[test]
    fn kernel_rejects_nonpositive_strength() {
        assert!(matches!(
            InversionKernel::new(0.0),
            Err(Error::NonPositiveStrength(_))
        ));
        assert!(matches!(
            InversionKernel::new(-1.0),
            Err(Error::NonPositiveStrength(_))
        ));
    }

    #[test]
    fn identity_kernel_at_sqrt_three() {
        let kernel = InversionKernel::new(3.0_f64.sqrt()).unwrap();
        let observed = [0.3, 0.7];
        let out = kernel.invert_marginal(observed);
        assert!((out[0] - 0.3).abs() < 1e-15);
        assert!((out[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn marginal_inversion_recovers_exact_statistics() {
        // eta = 0.8, s_x = 0.5: observed (0.6154701, 0.3845299) -> (0.75, 0.25).
        let kernel = InversionKernel::new(0.8).unwrap();
        let k = 0.8 / 3.0_f64.sqrt();
        let observed = [0.5 * (1.0 + k * 0.5), 0.5 * (1.0 - k * 0.5)];
        assert!((observed[0] - 0.6154701).abs() < 5e-8);
        let out = kernel.invert_marginal(observed);
        assert!((out[0] - 0.75).abs() < 1e-12);
        assert!((out[1] - 0.25).abs() < 1e-12);

        let kernel = InversionKernel::new(1.0).unwrap();
        let out = kernel.invert_marginal([0.5, 0.5]);
        assert_eq!(out, [0.5, 0.5]);
    }

    #[test]
    fn marginal_inversion_exact_on_grid() {
        let dirs = 20;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for i in 0..=10 {
            let len = i as f64 / 10.0;
            for j in 1..=10 {
                let eta = j as f64 / 10.0;
                for _ in 0..dirs {
                    let s = loop {
                        let v = random_state(&mut rng);
                        if v.norm() > 1e-6 || len == 0.0 {
                            break v;
                        }
                    };
                    let scale = if s.norm() == 0.0 { 0.0 } else { len / s.norm() };
                    let s = BlochVector::new(s.x() * scale, s.y() * scale, s.z() * scale).unwrap();
                    let povm = JointPovm::tetrahedral(eta).unwrap();
                    let observed = observed_joint(&s, &povm);
                    let kernel = InversionKernel::new(eta).unwrap();
                    let (ox, oy) = observed.marginals();
                    let (ex, ey) = exact_marginals(&s);
                    let ix = kernel.invert_marginal(ox);
                    let iy = kernel.invert_marginal(oy);
                    for k in 0..2 {
                        assert!((ix[k] - ex[k]).abs() < 1e-12);
                        assert!((iy[k] - ey[k]).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn joint_inversion_reference_values() {
        let kernel = InversionKernel::new(1.0).unwrap();
        let q = kernel.invert_joint(&JointDistribution::uniform());
        for e in q.entries() {
            assert_eq!(*e, 0.25);
        }

        let povm = JointPovm::tetrahedral(1.0).unwrap();
        let s = BlochVector::new(0.0, 0.0, 1.0).unwrap();
        let q = kernel.invert_joint(&observed_joint(&s, &povm));
        let hi = 0.25 * (1.0 + 3.0_f64.sqrt());
        let lo = 0.25 * (1.0 - 3.0_f64.sqrt());
        assert!((q.get(1, 1) - hi).abs() < 1e-12);
        assert!((q.get(-1, -1) - hi).abs() < 1e-12);
        assert!((q.get(1, -1) - lo).abs() < 1e-12);
        assert!((q.get(-1, 1) - lo).abs() < 1e-12);
        assert!((lo + 0.1830127).abs() < 5e-8);

        // sqrt(3) * 0.5 < 1: no negativity at full strength.
        let s = BlochVector::new(0.0, 0.0, 0.5).unwrap();
        let q = kernel.invert_joint(&observed_joint(&s, &povm));
        let expect = 0.25 * (1.0 - 3.0_f64.sqrt() * 0.5);
        assert!((q.get(1, -1) - expect).abs() < 1e-12);
        assert!(expect > 0.0);
        assert!((expect - 0.0334936).abs() < 5e-8);
    }

    #[test]
    fn moment_form_matches_nested_sum_and_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..1000 {
            let s = random_state(&mut rng);
            let eta = rng.random_range(0.1..=1.0);
            let povm = JointPovm::tetrahedral(eta).unwrap();
            let observed = observed_joint(&s, &povm);
            let kernel = InversionKernel::new(eta).unwrap();
            let q = kernel.invert_joint(&observed);

            let nested = invert_joint_nested(&kernel, &observed);
            let k = kernel.amplification();
            for (i, (x, y)) in OUTCOMES.iter().enumerate() {
                let x = f64::from(*x);
                let y = f64::from(*y);
                // Closed form in terms of the state.
                let closed = 0.25 * (1.0 + x * s.x() + y * s.y() + x * y * k * s.z());
                assert!((q.entries()[i] - nested[i]).abs() < 1e-12);
                assert!((q.entries()[i] - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quasi_normalization_and_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..1000 {
            let s = random_state(&mut rng);
            let eta = rng.random_range(0.1..=1.0);
            let povm = JointPovm::tetrahedral(eta).unwrap();
            let kernel = InversionKernel::new(eta).unwrap();
            let q = kernel.invert_joint(&observed_joint(&s, &povm));
            let total: f64 = q.entries().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            // The pathology stays in the joint; the marginals are exact.
            let (ex, ey) = exact_marginals(&s);
            let qx = q.marginal_x();
            let qy = q.marginal_y();
            for k in 0..2 {
                assert!((qx[k] - ex[k]).abs() < 1e-12);
                assert!((qy[k] - ey[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn negativity_examples() {
        let q = QuasiDistribution::new([0.25; 4]).unwrap();
        let n = negativity(&q);
        assert_eq!(n.min_entry, 0.25);
        assert!(!n.nonclassical);

        let kernel = InversionKernel::new(1.0).unwrap();
        let povm = JointPovm::tetrahedral(1.0).unwrap();
        let s = BlochVector::new(0.0, 0.0, 1.0).unwrap();
        let n = negativity(&kernel.invert_joint(&observed_joint(&s, &povm)));
        assert!(n.nonclassical);
        assert!((n.min_entry + 0.1830127).abs() < 5e-8);

        let kernel = InversionKernel::new(0.6).unwrap();
        let povm = JointPovm::tetrahedral(0.6).unwrap();
        let s = BlochVector::new(0.0, 0.0, 0.5).unwrap();
        let n = negativity(&kernel.invert_joint(&observed_joint(&s, &povm)));
        assert!(n.nonclassical);
        assert!((n.min_entry + 0.1108439).abs() < 5e-8);
    }

    #[test]
    fn threshold_equivalence_on_grid() {
        for i in 1..=100 {
            for j in 1..=100 {
                let len = i as f64 / 100.0;
                let eta = j as f64 / 100.0;
                let s = BlochVector::polar(len).unwrap();
                let report = find_witness(&s, Some(eta)).unwrap();
                let predicted = 3.0_f64.sqrt() * len > eta;
                assert_eq!(
                    report.nonclassical, predicted,
                    "mismatch at |s|={len}, eta={eta}"
                );
            }
        }
        // Boundary: eta = sqrt(3) |s| leaves the minimum at zero.
        for i in 1..=11 {
            let len = i as f64 * 0.05;
            let eta = 3.0_f64.sqrt() * len;
            assert!(eta <= 1.0);
            let report = find_witness(&BlochVector::polar(len).unwrap(), Some(eta)).unwrap();
            assert!(report.min_entry.abs() < 1e-12);
            assert!(!report.nonclassical);
        }
    }

    #[test]
    fn rotation_invariance_of_minimum_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let len = 0.7;
        let eta = 0.8;
        let reference = find_witness(&BlochVector::polar(len).unwrap(), Some(eta))
            .unwrap()
            .min_entry;
        for _ in 0..100 {
            let dir = random_state(&mut rng);
            let n = dir.norm().max(1e-9);
            let s =
                BlochVector::new(dir.x() / n * len, dir.y() / n * len, dir.z() / n * len).unwrap();
            let report = find_witness(&s, Some(eta)).unwrap();
            assert!((report.min_entry - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_default_strength_examples() {
        let report = find_witness(&BlochVector::new(0.0, 0.0, 1.0).unwrap(), None).unwrap();
        assert_eq!(report.eta, 0.9);
        assert!(report.nonclassical);
        assert!((report.min_entry - 0.25 * (1.0 - 3.0_f64.sqrt() / 0.9)).abs() < 1e-15);
        assert!((report.min_entry + 0.2311252).abs() < 5e-8);

        // At eta = 0.9 sqrt(3)|s| the minimum is (1 - 1/0.9)/4 independent
        // of |s|.
        let report = find_witness(&BlochVector::new(0.0, 0.0, 0.3).unwrap(), None).unwrap();
        assert!((report.eta - 0.9 * 3.0_f64.sqrt() * 0.3).abs() < 1e-15);
        assert!((report.eta - 0.4676537).abs() < 5e-8);
        assert!(report.nonclassical);
        assert!((report.min_entry - 0.25 * (1.0 - 1.0 / 0.9)).abs() < 1e-12);
    }

    #[test]
    fn witness_on_maximally_mixed_state() {
        let report = find_witness(&BlochVector::zero(), None).unwrap();
        assert!(!report.nonclassical);
        assert_eq!(report.status, WitnessStatus::MaximallyMixed);
        assert_eq!(report.threshold_ratio, 0.0);
        for e in report.quasi.entries() {
            assert_eq!(*e, 0.25);
        }
    }

    #[test]
    fn witness_override_handling() {
        assert!(matches!(
            find_witness(&BlochVector::zero(), Some(1.5)),
            Err(Error::InvalidStrength(_))
        ));
        // Oversized strength is a warning status, not an error.
        let s = BlochVector::new(0.0, 0.0, 0.2).unwrap();
        let report = find_witness(&s, Some(1.0)).unwrap();
        assert!(!report.nonclassical);
        assert_eq!(report.status, WitnessStatus::StrengthAboveThreshold);
    }
}
