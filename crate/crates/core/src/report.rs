//! Run configuration and machine-readable reports shared by the CLI and
//! the browser demo.
//!
//! A [`RunConfig`] captures everything needed to reproduce a run: the state
//! specification, strength override, grid shape, shot count and seed, and
//! output options. Reports echo their configuration and the numeric
//! tolerances in force, so re-running a serialized config reproduces the
//! report bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{BlochVector, DensityMatrix2, PureStateVector, BLOCH_NORM_SLACK, MATRIX_TOL};
use crate::error::{Error, Result};
use crate::inversion::{find_witness, InversionKernel, WitnessReport, NEGATIVITY_TOL};
use crate::povm::{NORMALIZATION_TOL, PROBABILITY_CLAMP};
use crate::separability::{
    max_achievable_correlation, separability_feasibility, DiskGrid, ResponseFunction,
    SeparabilityVerdict, DEGENERATE_GRID_THRESHOLD, LP_FEASIBILITY_TOL,
};
use crate::shots::{
    estimate_quasi, negativity_significance, sample_counts, EstimatedQuasi, ShotRecord,
    Significance, DEFAULT_SIGMA_THRESHOLD,
};

/// Which pipeline a configuration drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Witness,
    Separability,
    Sweep,
    Sample,
}

/// Exactly one way of specifying the input state. Complex numbers are
/// [re, im] pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// Bloch components (x, y, z) with |s| <= 1.
    Bloch { components: [f64; 3] },
    /// Row-major 2x2 density-matrix entries.
    Density { entries: Vec<[f64; 2]> },
    /// Pure-state amplitudes of any dimension >= 2; normalized on input.
    Pure { amplitudes: Vec<[f64; 2]> },
}

impl StateSpec {
    /// Resolves the specification to a Bloch vector. Pure states embed
    /// into their effective qubit via the deterministic orthogonal
    /// partner.
    pub fn to_bloch(&self) -> Result<BlochVector> {
        match self {
            StateSpec::Bloch { components } => {
                BlochVector::new(components[0], components[1], components[2])
            }
            StateSpec::Density { entries } => {
                if entries.len() != 4 {
                    return Err(Error::InvalidConfig(format!(
                        "density matrix needs 4 entries, got {}",
                        entries.len()
                    )));
                }
                let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
                let rho = DensityMatrix2::from_entries(
                    c(entries[0]),
                    c(entries[1]),
                    c(entries[2]),
                    c(entries[3]),
                )?;
                Ok(rho.to_bloch())
            }
            StateSpec::Pure { amplitudes } => {
                let amps = amplitudes
                    .iter()
                    .map(|v| Complex64::new(v[0], v[1]))
                    .collect();
                let psi = PureStateVector::normalized(amps)?;
                crate::bloch::embed_pure_state(&psi, None)
            }
        }
    }
}

/// Hidden-variable grid shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rings: usize,
    pub angles: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            rings: DiskGrid::DEFAULT_RINGS,
            angles: DiskGrid::DEFAULT_ANGLES,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<DiskGrid> {
        DiskGrid::rings(self.rings, self.angles)
    }
}

/// Sweep dimensions: |s| and eta each run over {1/steps, ..., 1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub s_steps: usize,
    pub eta_steps: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            s_steps: 100,
            eta_steps: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

fn default_sigma_threshold() -> f64 {
    DEFAULT_SIGMA_THRESHOLD
}

/// A complete, reproducible run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    /// Measurement strength override in (0, 1]; the default rule applies
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_sigma_threshold")]
    pub sigma_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            state: None,
            eta: None,
            grid: GridSpec::default(),
            shots: None,
            seed: None,
            sigma_threshold: DEFAULT_SIGMA_THRESHOLD,
            sweep: None,
            format: OutputFormat::default(),
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidStrength(eta));
            }
        }
        if self.grid.rings == 0 || self.grid.angles == 0 {
            return Err(Error::EmptyGrid);
        }
        if !self.sigma_threshold.is_finite() || self.sigma_threshold <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma threshold must be positive, got {}",
                self.sigma_threshold
            )));
        }
        match self.command {
            CommandKind::Witness | CommandKind::Separability => {
                if self.state.is_none() {
                    return Err(Error::InvalidConfig(
                        "a state specification is required".into(),
                    ));
                }
            }
            CommandKind::Sample => {
                if self.state.is_none() {
                    return Err(Error::InvalidConfig(
                        "a state specification is required".into(),
                    ));
                }
                match self.shots {
                    None | Some(0) => return Err(Error::ZeroShots),
                    Some(_) => {}
                }
                if self.seed.is_none() {
                    return Err(Error::InvalidConfig(
                        "a seed is required for sampling runs".into(),
                    ));
                }
            }
            CommandKind::Sweep => {
                let sweep = self.sweep.unwrap_or_default();
                if sweep.s_steps == 0 || sweep.eta_steps == 0 {
                    return Err(Error::InvalidConfig("sweep steps must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Numeric tolerances in force for a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSet {
    pub bloch_norm_slack: f64,
    pub matrix: f64,
    pub probability_clamp: f64,
    pub normalization: f64,
    pub negativity: f64,
    pub lp_feasibility: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            bloch_norm_slack: BLOCH_NORM_SLACK,
            matrix: MATRIX_TOL,
            probability_clamp: PROBABILITY_CLAMP,
            normalization: NORMALIZATION_TOL,
            negativity: NEGATIVITY_TOL,
            lp_feasibility: LP_FEASIBILITY_TOL,
        }
    }
}

/// Separability result plus the grid diagnostics behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityBlock {
    pub eta: f64,
    pub grid: GridSpec,
    pub grid_points: usize,
    /// LP maximum of the product moment on this grid; ~0.5 for healthy
    /// grids.
    pub grid_max_correlation: f64,
    /// Set when the grid cannot reach DEGENERATE_GRID_THRESHOLD, meaning
    /// infeasibility may reflect the grid rather than the statistics.
    pub degenerate_grid: bool,
    pub verdict: SeparabilityVerdict,
}

/// Finite-shot certification result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingBlock {
    pub record: ShotRecord,
    pub estimate: EstimatedQuasi,
    pub significance: Significance,
}

/// Everything a run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub tolerances: ToleranceSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separability: Option<SeparabilityBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingBlock>,
}

impl Report {
    fn bare(config: RunConfig) -> Self {
        Report {
            config,
            tolerances: ToleranceSet::default(),
            witness: None,
            separability: None,
            sampling: None,
        }
    }
}

fn required_state(config: &RunConfig) -> Result<BlochVector> {
    config
        .state
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("a state specification is required".into()))?
        .to_bloch()
}

/// Witness pipeline: state -> canonical axes -> joint measurement ->
/// inversion -> negativity.
pub fn run_witness(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let s = required_state(config)?;
    let witness = find_witness(&s, config.eta)?;
    let mut report = Report::bare(config.clone());
    report.witness = Some(witness);
    Ok(report)
}

/// Separability pipeline: the canonical observed statistics are handed to
/// the hidden-variable feasibility program; the exact witness comes along
/// for context.
pub fn run_separability(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let s = required_state(config)?;
    let witness = find_witness(&s, config.eta)?;
    let eta = witness.eta;
    let grid = config.grid.build()?;
    let response = ResponseFunction::new(eta)?;
    let verdict = separability_feasibility(&witness.observed, &response, &grid)?;
    let grid_max = max_achievable_correlation(&grid)?;
    let mut report = Report::bare(config.clone());
    report.separability = Some(SeparabilityBlock {
        eta,
        grid: config.grid,
        grid_points: grid.len(),
        grid_max_correlation: grid_max,
        degenerate_grid: grid_max < DEGENERATE_GRID_THRESHOLD,
        verdict,
    });
    report.witness = Some(witness);
    Ok(report)
}

/// Sampling pipeline: witness run plus a finite-shot certification of the
/// negative entry.
pub fn run_sample(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let s = required_state(config)?;
    let witness = find_witness(&s, config.eta)?;
    let shots = config.shots.expect("validated above");
    let seed = config.seed.expect("validated above");
    let record = sample_counts(&witness.observed, shots, seed)?;
    let kernel = InversionKernel::new(witness.eta)?;
    let estimate = estimate_quasi(&record, &kernel)?;
    let significance = negativity_significance(&estimate, config.sigma_threshold);
    let mut report = Report::bare(config.clone());
    report.witness = Some(witness);
    report.sampling = Some(SamplingBlock {
        record,
        estimate,
        significance,
    });
    Ok(report)
}

/// One row of the threshold sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub s: f64,
    pub eta: f64,
    pub min_entry: f64,
    pub nonclassical: bool,
    pub lp_feasible: bool,
}

/// Evaluates one sweep cell at the pole state (0, 0, s).
pub fn sweep_cell(s: f64, eta: f64, grid: &DiskGrid) -> Result<SweepRow> {
    let state = BlochVector::polar(s)?;
    let witness = find_witness(&state, Some(eta))?;
    let response = ResponseFunction::new(eta)?;
    let verdict = separability_feasibility(&witness.observed, &response, grid)?;
    Ok(SweepRow {
        s,
        eta,
        min_entry: witness.min_entry,
        nonclassical: witness.nonclassical,
        lp_feasible: verdict.feasible,
    })
}

/// The (s, eta) parameter pairs of a sweep in output order (lexicographic
/// in (s, eta)).
pub fn sweep_parameters(spec: &SweepSpec) -> Vec<(f64, f64)> {
    let mut cells = Vec::with_capacity(spec.s_steps * spec.eta_steps);
    for i in 1..=spec.s_steps {
        let s = i as f64 / spec.s_steps as f64;
        for j in 1..=spec.eta_steps {
            let eta = j as f64 / spec.eta_steps as f64;
            cells.push((s, eta));
        }
    }
    cells
}
