//! JSON-string API behind the wasm exports, kept free of JS types so it
//! runs under host tests.

use quasijoint::{
    find_witness, max_achievable_correlation, separability_feasibility, BlochVector,
    CorrelationRegime, DiskGrid, InversionKernel, ResponseFunction, WitnessStatus,
    DEFAULT_SIGMA_THRESHOLD,
};
use serde_json::json;

fn err(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn status_str(status: WitnessStatus) -> &'static str {
    match status {
        WitnessStatus::Nonclassical => "nonclassical",
        WitnessStatus::MaximallyMixed => "maximally_mixed",
        WitnessStatus::StrengthAboveThreshold => "strength_above_threshold",
    }
}

fn regime_str(regime: CorrelationRegime) -> &'static str {
    match regime {
        CorrelationRegime::WithinDiskBound => "within_disk_bound",
        CorrelationRegime::BeyondDiskBound => "beyond_disk_bound",
        CorrelationRegime::BeyondUnitBound => "beyond_unit_bound",
    }
}

/// Witness pipeline for the state (sx, sy, sz). `eta <= 0` selects the
/// default strength rule. With `with_separability` the LP verdict on a
/// rings x angles grid is attached.
pub fn witness_json(
    sx: f64,
    sy: f64,
    sz: f64,
    eta: f64,
    with_separability: bool,
    rings: u32,
    angles: u32,
) -> String {
    let state = match BlochVector::new(sx, sy, sz) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let eta_override = (eta > 0.0).then_some(eta);
    let report = match find_witness(&state, eta_override) {
        Ok(r) => r,
        Err(e) => return err(e),
    };

    let separability = if with_separability {
        let grid = match DiskGrid::rings(rings as usize, angles as usize) {
            Ok(g) => g,
            Err(e) => return err(e),
        };
        let response = match ResponseFunction::new(report.eta) {
            Ok(r) => r,
            Err(e) => return err(e),
        };
        let verdict = match separability_feasibility(&report.observed, &response, &grid) {
            Ok(v) => v,
            Err(e) => return err(e),
        };
        let grid_max = match max_achievable_correlation(&grid) {
            Ok(m) => m,
            Err(e) => return err(e),
        };
        Some(json!({
            "feasible": verdict.feasible,
            "target_correlation": verdict.target_correlation,
            "regime": regime_str(verdict.regime),
            "witness_points": verdict.witness.as_ref().map(|w| w.len()),
            "witness_residual": verdict.witness_residual,
            "infeasibility": verdict.infeasibility,
            "grid_points": grid.len(),
            "grid_max_correlation": grid_max,
        }))
    } else {
        None
    };

    json!({
        "input": { "x": state.x(), "y": state.y(), "z": state.z(), "norm": state.norm() },
        "canonical_z": report.canonical.z(),
        "eta": report.eta,
        "threshold_ratio": report.threshold_ratio,
        "observed": report.observed.entries(),
        "quasi": report.quasi.entries(),
        "min_entry": report.min_entry,
        "min_outcome": [report.min_outcome.0, report.min_outcome.1],
        "nonclassical": report.nonclassical,
        "status": status_str(report.status),
        "separability": separability,
    })
    .to_string()
}

/// Minimum quasi-entry over the (|s|, eta) grid, row-major with |s| as the
/// slow index; both axes run over {1/steps, ..., 1}.
pub fn sweep_json(s_steps: u32, eta_steps: u32) -> String {
    if !(1..=1000).contains(&s_steps) || !(1..=1000).contains(&eta_steps) {
        return err("sweep grid must be between 1x1 and 1000x1000");
    }
    let s_values: Vec<f64> = (1..=s_steps)
        .map(|i| f64::from(i) / f64::from(s_steps))
        .collect();
    let eta_values: Vec<f64> = (1..=eta_steps)
        .map(|j| f64::from(j) / f64::from(eta_steps))
        .collect();
    let mut min_entries = Vec::with_capacity(s_values.len() * eta_values.len());
    let mut flags = Vec::with_capacity(min_entries.capacity());
    for &s in &s_values {
        let state = match BlochVector::polar(s) {
            Ok(v) => v,
            Err(e) => return err(e),
        };
        for &eta in &eta_values {
            match find_witness(&state, Some(eta)) {
                Ok(report) => {
                    min_entries.push(report.min_entry);
                    flags.push(report.nonclassical);
                }
                Err(e) => return err(e),
            }
        }
    }
    json!({
        "s": s_values,
        "eta": eta_values,
        "min_entries": min_entries,
        "nonclassical": flags,
    })
    .to_string()
}

/// Finite-shot certification at the canonical orientation of
/// (sx, sy, sz). `eta <= 0` selects the default rule; `threshold <= 0`
/// selects 5 sigma.
pub fn sample_json(
    sx: f64,
    sy: f64,
    sz: f64,
    eta: f64,
    shots: u32,
    seed: u32,
    threshold: f64,
) -> String {
    let state = match BlochVector::new(sx, sy, sz) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let eta_override = (eta > 0.0).then_some(eta);
    let report = match find_witness(&state, eta_override) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    let record =
        match quasijoint::sample_counts(&report.observed, u64::from(shots), u64::from(seed)) {
            Ok(r) => r,
            Err(e) => return err(e),
        };
    let kernel = match InversionKernel::new(report.eta) {
        Ok(k) => k,
        Err(e) => return err(e),
    };
    let estimate = match quasijoint::estimate_quasi(&record, &kernel) {
        Ok(e) => e,
        Err(e) => return err(e),
    };
    let threshold = if threshold > 0.0 {
        threshold
    } else {
        DEFAULT_SIGMA_THRESHOLD
    };
    let sig = quasijoint::negativity_significance(&estimate, threshold);
    json!({
        "counts": record.counts,
        "shots": record.total,
        "seed": record.seed,
        "eta": report.eta,
        "exact_quasi": report.quasi.entries(),
        "estimate": estimate.estimate.entries(),
        "std_errors": estimate.std_errors,
        "min_entry": sig.min_entry,
        "min_outcome": [sig.min_outcome.0, sig.min_outcome.1],
        "std_error": sig.std_error,
        "z_score": sig.z_score,
        "certified": sig.certified,
        "threshold": sig.threshold,
        "degenerate": sig.degenerate_std_error,
    })
    .to_string()
}
