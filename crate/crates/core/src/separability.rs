//! Hidden-variable separability testing of the observed statistics.
//!
//! A classical explanation of the joint measurement assigns each hidden
//! state a vector lambda in the unit ball and factorizes the observed
//! statistics into per-observable responses
//! (1 + a (eta/sqrt(3)) lambda_a) / 2. Whether a given observed joint
//! admits such a mixture is a linear feasibility program over a
//! discretized hidden-variable domain. Only the x and y components of
//! lambda enter the responses, so the domain is the unit disk.
//!
//! Product-moment bookkeeping: any mixture satisfies
//! sum_j p_j lambda_{j,x} lambda_{j,y} <= 1, and on the disk the
//! zero-marginal maximum is 1/2. Observed statistics demanding a larger
//! correlation target are therefore nonseparable, which is exactly the
//! regime where the retrieved quasi-distribution turns negative.

use serde::{Deserialize, Serialize};

use crate::bloch::{norm, Vec3};
use crate::error::{Error, Result};
use crate::inversion::QuasiDistribution;
use crate::povm::{JointDistribution, OUTCOMES};
use crate::simplex::{solve_equality_form, LpSolution, SimplexOptions};

/// Tolerance on model weights and lambda norms.
const MODEL_TOL: f64 = 1e-12;

/// LP equality-residual tolerance.
pub const LP_FEASIBILITY_TOL: f64 = 1e-9;

/// Grids whose achievable correlation falls below this are too coarse to
/// decide separability near the disk bound.
pub const DEGENERATE_GRID_THRESHOLD: f64 = 0.45;

/// Per-observable response (1 + a (eta/sqrt(3)) lambda_a) / 2 at strength
/// eta.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseFunction {
    eta: f64,
}

impl ResponseFunction {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidStrength(eta));
        }
        Ok(ResponseFunction { eta })
    }

    pub fn strength(&self) -> f64 {
        self.eta
    }

    /// Probability of outcome `a` given the relevant lambda component.
    pub fn prob(&self, a: i8, lambda_component: f64) -> f64 {
        0.5 * (1.0 + f64::from(a) * self.eta / 3.0_f64.sqrt() * lambda_component)
    }
}

/// A discrete mixture of hidden states: weights on vectors in the unit
/// ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenVariableModel {
    points: Vec<(f64, Vec3)>,
}

impl HiddenVariableModel {
    /// Weights must be nonnegative and sum to 1 within 1e-12; every lambda
    /// must sit inside the unit ball (same slack).
    pub fn new(points: Vec<(f64, Vec3)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyModel);
        }
        let mut total = 0.0;
        for (w, lambda) in &points {
            if *w < 0.0 {
                return Err(Error::NegativeWeight(*w));
            }
            let n = norm(*lambda);
            if n > 1.0 + MODEL_TOL {
                return Err(Error::LambdaOutsideBall(n));
            }
            total += w;
        }
        if (total - 1.0).abs() > MODEL_TOL {
            return Err(Error::NotNormalizedDistribution(total));
        }
        Ok(HiddenVariableModel { points })
    }

    /// Single deterministic hidden state.
    pub fn point(lambda: Vec3) -> Result<Self> {
        HiddenVariableModel::new(vec![(1.0, lambda)])
    }

    pub fn points(&self) -> &[(f64, Vec3)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// sum_j p_j lambda_{j,x} lambda_{j,y}.
    pub fn product_moment(&self) -> f64 {
        self.points.iter().map(|(w, l)| w * l[0] * l[1]).sum()
    }

    /// Random model for property tests and demos: weights from a flat
    /// simplex sample, lambdas uniform in the unit ball.
    pub fn sample<R: rand::Rng>(rng: &mut R, n_points: usize) -> Self {
        let n_points = n_points.max(1);
        let mut weights: Vec<f64> = (0..n_points)
            .map(|_| -f64::ln(1.0 - rng.random::<f64>()))
            .collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        // Exact renormalization of the largest weight absorbs rounding.
        let drift: f64 = 1.0 - weights.iter().sum::<f64>();
        weights[0] += drift;
        let points = weights
            .into_iter()
            .map(|w| {
                let lambda = loop {
                    let v = [
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    ];
                    if norm(v) <= 1.0 {
                        break v;
                    }
                };
                (w, lambda)
            })
            .collect();
        HiddenVariableModel { points }
    }
}

/// Observed statistics produced by a hidden-variable mixture:
/// p~(x,y) = sum_j p_j A(x | lambda_j) A(y | lambda_j).
pub fn separable_statistics(
    model: &HiddenVariableModel,
    response: &ResponseFunction,
) -> JointDistribution {
    let entries = OUTCOMES.map(|(x, y)| {
        model
            .points()
            .iter()
            .map(|(w, l)| w * response.prob(x, l[0]) * response.prob(y, l[1]))
            .sum()
    });
    JointDistribution::new(entries).expect("mixtures of product responses are valid distributions")
}

/// The inversion of a separable mixture, computed directly:
/// p(x,y) = sum_j (p_j / 4) (1 + x lambda_{j,x}) (1 + y lambda_{j,y}).
///
/// Always nonnegative since |lambda| <= 1; agrees with running
/// [`separable_statistics`] through the inversion kernel.
pub fn inverted_separable_statistics(model: &HiddenVariableModel) -> QuasiDistribution {
    let entries = OUTCOMES.map(|(x, y)| {
        model
            .points()
            .iter()
            .map(|(w, l)| 0.25 * w * (1.0 + f64::from(x) * l[0]) * (1.0 + f64::from(y) * l[1]))
            .sum()
    });
    QuasiDistribution::new(entries).expect("mixture inversion preserves normalization")
}

/// Discretization of the unit disk used as the hidden-variable domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    points: Vec<[f64; 2]>,
    rings: usize,
    angles: usize,
}

impl DiskGrid {
    pub const DEFAULT_RINGS: usize = 24;
    pub const DEFAULT_ANGLES: usize = 48;

    /// Concentric rings: the center plus `rings` radii at `angles` angles
    /// each (24 x 48 + 1 = 1153 points by default).
    pub fn rings(rings: usize, angles: usize) -> Result<Self> {
        if rings == 0 || angles == 0 {
            return Err(Error::EmptyGrid);
        }
        let mut points = Vec::with_capacity(rings * angles + 1);
        points.push([0.0, 0.0]);
        for i in 1..=rings {
            let r = i as f64 / rings as f64;
            for k in 0..angles {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
                points.push([r * theta.cos(), r * theta.sin()]);
            }
        }
        Ok(DiskGrid {
            points,
            rings,
            angles,
        })
    }

    pub fn default_grid() -> Self {
        DiskGrid::rings(Self::DEFAULT_RINGS, Self::DEFAULT_ANGLES)
            .expect("default dimensions are nonzero")
    }

    /// Explicit points inside the unit disk; degenerate sets (for example
    /// all collinear) are accepted and simply limit what the LP can reach.
    pub fn from_points(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for p in &points {
            if (p[0] * p[0] + p[1] * p[1]).sqrt() > 1.0 + MODEL_TOL {
                return Err(Error::GridPointOutsideDisk { x: p[0], y: p[1] });
            }
        }
        let len = points.len();
        Ok(DiskGrid {
            points,
            rings: 0,
            angles: len,
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// (rings, angles) for ring grids; (0, point count) for explicit sets.
    pub fn shape(&self) -> (usize, usize) {
        (self.rings, self.angles)
    }
}

/// Where the correlation target sits relative to the hidden-variable
/// bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationRegime {
    /// |c| <= 1/2: reachable on the disk with free marginals.
    WithinDiskBound,
    /// 1/2 < |c| <= 1: below the generic product-moment bound of 1 but
    /// beyond the disk maximum of 1/2, so still nonseparable here.
    BeyondDiskBound,
    /// |c| > 1: exceeds the product-moment bound of any unit-ball mixture.
    BeyondUnitBound,
}

impl CorrelationRegime {
    pub fn classify(target: f64) -> Self {
        let c = target.abs();
        if c > 1.0 {
            CorrelationRegime::BeyondUnitBound
        } else if c > 0.5 {
            CorrelationRegime::BeyondDiskBound
        } else {
            CorrelationRegime::WithinDiskBound
        }
    }
}

/// Outcome of the separability feasibility program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub feasible: bool,
    /// Correlation target c = 3 corr(p~) / eta^2 that any mixture must
    /// meet; equals sqrt(3) s_z / eta for the tetrahedral statistics.
    pub target_correlation: f64,
    pub regime: CorrelationRegime,
    /// Hidden-variable mixture reproducing the statistics, when feasible.
    pub witness: Option<HiddenVariableModel>,
    /// Largest |p~ - reproduced| entry of the witness.
    pub witness_residual: Option<f64>,
    /// Phase-one mass when infeasible: the smallest total equality
    /// violation any mixture can achieve.
    pub infeasibility: Option<f64>,
}

/// Decides whether `p_tilde` is a mixture of product responses over the
/// grid, at residual tolerance [`LP_FEASIBILITY_TOL`].
pub fn separability_feasibility(
    p_tilde: &JointDistribution,
    response: &ResponseFunction,
    grid: &DiskGrid,
) -> Result<SeparabilityVerdict> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let n = grid.len();
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(5);
    a.push(vec![1.0; n]);
    for (x, y) in OUTCOMES {
        let row = grid
            .points()
            .iter()
            .map(|l| response.prob(x, l[0]) * response.prob(y, l[1]))
            .collect();
        a.push(row);
    }
    let mut b = vec![1.0];
    b.extend(p_tilde.entries());

    let opts = SimplexOptions {
        feasibility_tol: LP_FEASIBILITY_TOL,
        ..SimplexOptions::default()
    };
    let eta = response.strength();
    let target = 3.0 * p_tilde.correlation() / (eta * eta);
    let regime = CorrelationRegime::classify(target);

    match solve_equality_form(&a, &b, None, &opts)? {
        LpSolution::Optimal { x, .. } => {
            let mut points: Vec<(f64, Vec3)> = x
                .iter()
                .zip(grid.points())
                .filter(|(w, _)| **w > 1e-12)
                .map(|(w, l)| (*w, [l[0], l[1], 0.0]))
                .collect();
            let total: f64 = points.iter().map(|(w, _)| w).sum();
            for (w, _) in points.iter_mut() {
                *w /= total;
            }
            let witness = HiddenVariableModel::new(points)?;
            let reproduced = separable_statistics(&witness, response);
            let residual = reproduced
                .entries()
                .iter()
                .zip(p_tilde.entries())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(SeparabilityVerdict {
                feasible: true,
                target_correlation: target,
                regime,
                witness: Some(witness),
                witness_residual: Some(residual),
                infeasibility: None,
            })
        }
        LpSolution::Infeasible { infeasibility } => Ok(SeparabilityVerdict {
            feasible: false,
            target_correlation: target,
            regime,
            witness: None,
            witness_residual: None,
            infeasibility: Some(infeasibility),
        }),
        LpSolution::Unbounded => Err(Error::SolverFailure(
            "feasibility program reported unbounded".into(),
        )),
    }
}

/// Largest product moment sum_g w_g lambda_x lambda_y reachable on the
/// grid under zero marginal moments. On a dense disk grid this approaches
/// 1/2, attained at +-(1/sqrt(2), 1/sqrt(2)).
pub fn max_achievable_correlation(grid: &DiskGrid) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let n = grid.len();
    let a: Vec<Vec<f64>> = vec![
        vec![1.0; n],
        grid.points().iter().map(|l| l[0]).collect(),
        grid.points().iter().map(|l| l[1]).collect(),
    ];
    let b = vec![1.0, 0.0, 0.0];
    let c: Vec<f64> = grid.points().iter().map(|l| l[0] * l[1]).collect();

    match solve_equality_form(&a, &b, Some(&c), &SimplexOptions::default())? {
        LpSolution::Optimal { objective, .. } => Ok(objective),
        LpSolution::Infeasible { infeasibility } => Err(Error::SolverFailure(format!(
            "zero-moment constraints unreachable on this grid (violation {infeasibility})"
        ))),
        LpSolution::Unbounded => Err(Error::SolverFailure(
            "correlation objective reported unbounded on the simplex".into(),
        )),
    }
}
