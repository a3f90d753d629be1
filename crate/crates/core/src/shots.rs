//! Finite-sample simulation of the joint measurement and statistical
//! certification of negativity from counts.
//!
//! Sampling is multinomial by inverse-CDF over the fixed outcome order,
//! driven by ChaCha8 seeded from a u64 so runs are reproducible across
//! platforms. The empirical frequencies pass through the same inversion
//! kernel as the exact pipeline; since the kernel is linear, the estimator
//! covariance is K Sigma K^T / N with Sigma the multinomial covariance at
//! the plugged-in frequencies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inversion::{InversionKernel, QuasiDistribution};
use crate::povm::JointDistribution;

/// Default certification threshold in standard errors.
pub const DEFAULT_SIGMA_THRESHOLD: f64 = 5.0;

/// Counts of a finite measurement run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    /// Counts per outcome in the fixed order.
    pub counts: [u64; 4],
    pub total: u64,
    pub seed: u64,
}

impl ShotRecord {
    /// Empirical frequencies n(x,y) / N.
    pub fn frequencies(&self) -> [f64; 4] {
        self.counts.map(|c| c as f64 / self.total as f64)
    }
}

/// Draws `n_shots` outcomes from `p_tilde`, deterministically in `seed`.
pub fn sample_counts(p_tilde: &JointDistribution, n_shots: u64, seed: u64) -> Result<ShotRecord> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (i, p) in p_tilde.entries().iter().enumerate() {
        acc += p;
        cdf[i] = acc;
    }
    cdf[3] = 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n_shots {
        let u: f64 = rng.random();
        let idx = cdf.iter().position(|&c| u < c).unwrap_or(3);
        counts[idx] += 1;
    }
    Ok(ShotRecord {
        counts,
        total: n_shots,
        seed,
    })
}

/// Point estimate of the quasi-distribution with per-entry standard errors
/// and the full 4x4 covariance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatedQuasi {
    pub estimate: QuasiDistribution,
    pub std_errors: [f64; 4],
    pub covariance: [[f64; 4]; 4],
    pub shots: u64,
    /// An outcome cell received zero counts, so the plug-in covariance is
    /// rank-deficient along that cell and understates the uncertainty.
    pub degenerate_counts: bool,
}

/// Covariance of the inverted estimator when the true outcome
/// probabilities are `p`: K (diag(p) - p p^T) K^T / N.
pub fn covariance_at(p: &[f64; 4], kernel: &InversionKernel, n_shots: u64) -> [[f64; 4]; 4] {
    let k = kernel.joint_matrix();
    let n = n_shots as f64;
    let mut cov = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for (a, pa) in p.iter().enumerate() {
                for (b, pb) in p.iter().enumerate() {
                    let sigma = if a == b { pa - pa * pb } else { -pa * pb };
                    acc += k[i][a] * sigma * k[j][b];
                }
            }
            cov[i][j] = acc / n;
        }
    }
    cov
}

/// Inverts the empirical frequencies and propagates the multinomial
/// covariance through the kernel.
pub fn estimate_quasi(record: &ShotRecord, kernel: &InversionKernel) -> Result<EstimatedQuasi> {
    let freqs = record.frequencies();
    let observed = JointDistribution::new(freqs)?;
    let estimate = kernel.invert_joint(&observed);
    let covariance = covariance_at(&freqs, kernel, record.total);
    let std_errors = [
        covariance[0][0].max(0.0).sqrt(),
        covariance[1][1].max(0.0).sqrt(),
        covariance[2][2].max(0.0).sqrt(),
        covariance[3][3].max(0.0).sqrt(),
    ];
    Ok(EstimatedQuasi {
        estimate,
        std_errors,
        covariance,
        shots: record.total,
        degenerate_counts: record.counts.contains(&0),
    })
}

/// Statistical verdict on the estimated minimum entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub min_entry: f64,
    pub min_outcome: (i8, i8),
    pub std_error: f64,
    /// z = -min_entry / std_error; 0 when the standard error degenerates.
    pub z_score: f64,
    pub certified: bool,
    pub threshold: f64,
    /// The count vector was degenerate: an outcome cell was empty or the
    /// minimum entry carries zero standard error. The z-score is still
    /// reported but certification is withheld.
    pub degenerate_std_error: bool,
}

/// Certifies negativity when the minimum entry is negative by more than
/// `threshold` standard errors and the count vector is nondegenerate.
pub fn negativity_significance(est: &EstimatedQuasi, threshold: f64) -> Significance {
    let (min_entry, min_outcome) = est.estimate.min_entry();
    let idx = crate::povm::outcome_index(min_outcome.0, min_outcome.1);
    let std_error = est.std_errors[idx];
    let degenerate = est.degenerate_counts || std_error == 0.0;
    let z_score = if std_error == 0.0 {
        0.0
    } else {
        -min_entry / std_error
    };
    Significance {
        min_entry,
        min_outcome,
        std_error,
        z_score,
        certified: !degenerate && min_entry < 0.0 && z_score > threshold,
        threshold,
        degenerate_std_error: degenerate,
    }
}
