//! Simulation configs, trajectory tables and the two reference scenarios.
//!
//! Configs are JSON documents; complex numbers are `[re, im]` pairs and
//! matrices are either four rows of four pairs or sixteen pairs in row-major
//! order. Trajectories are written as CSV with the fixed header
//! [`CSV_HEADER`] and 17 significant digits per value.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    check_dephasing_constraints, control_hamiltonian, dephasing_constraint_residuals, dephasing_from_amplitudes,
    dissipator_from_rates, evolve_pure_series, extract_rates, lindblad_dissipator, lindblad_realizability,
    liouvillian_hamiltonian, propagate, DynamicsError, LindbladSpec, RateSet, Realizability, SuperOperator,
    TimeConvention, UNPHYSICAL_TOL,
};
use crate::entanglement::{concurrence_mixed, concurrence_pure, entanglement_of_formation, EntanglementError};
use crate::linalg::{hermitian_eig, CMatrix, LinalgError};
use crate::plot::{LineChart, Series};
use crate::state::{
    bell_state, density_from_pure, is_separable_pure, validate_state, BellKind, DensityMatrix, PureState, StateError,
    DIM, SEPARABILITY_TOL,
};

pub const CSV_HEADER: [&str; 6] = ["t", "concurrence", "eof", "purity", "trace_error", "min_eigenvalue"];

/// Default tolerance for the dephasing constraints and realizability fit.
pub const RATE_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot parse config: {0}")]
    ConfigParse(String),
    #[error("invalid config at `{path}`: {reason}")]
    ConfigInvalid { path: String, reason: String },
    #[error("unphysical evolution at t = {t}: {reason}")]
    Unphysical { t: f64, reason: String, records: Vec<TrajectoryRecord> },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ScenarioError {
    fn invalid(path: impl Into<String>, reason: impl fmt::Display) -> Self {
        ScenarioError::ConfigInvalid { path: path.into(), reason: reason.to_string() }
    }

    /// 2 config error, 3 unphysical evolution, 4 numerical failure or I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::ConfigParse(_) | ScenarioError::ConfigInvalid { .. } => 2,
            ScenarioError::Unphysical { .. } => 3,
            ScenarioError::Numerical(_) | ScenarioError::Io(_) => 4,
        }
    }
}

impl From<LinalgError> for ScenarioError {
    fn from(e: LinalgError) -> Self {
        ScenarioError::Numerical(e.to_string())
    }
}

impl From<EntanglementError> for ScenarioError {
    fn from(e: EntanglementError) -> Self {
        ScenarioError::Numerical(e.to_string())
    }
}

/// One row of an output table.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub concurrence: f64,
    pub eof: f64,
    /// `tr ρ²`.
    pub purity: f64,
    /// `|tr ρ − 1|`.
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl TrajectoryRecord {
    fn fields(&self) -> [f64; 6] {
        [self.t, self.concurrence, self.eof, self.purity, self.trace_error, self.min_eigenvalue]
    }
}

/// 17 significant digits, fixed exponent form.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(records: &[TrajectoryRecord], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields().map(format_value))?;
    }
    w.flush()
}

pub fn csv_string(records: &[TrajectoryRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

/// Parses a trajectory CSV written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<TrajectoryRecord>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(format!("unexpected header {header:?}"));
    }
    rdr.records()
        .map(|row| {
            let row = row.map_err(|e| e.to_string())?;
            let v: Vec<f64> = row.iter().map(|f| f.parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
            Ok(TrajectoryRecord { t: v[0], concurrence: v[1], eof: v[2], purity: v[3], trace_error: v[4], min_eigenvalue: v[5] })
        })
        .collect()
}

/// `points` equally spaced times from 0 to `t_max` inclusive.
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0];
    }
    (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect()
}

/// Row for a (possibly slightly unphysical) propagated matrix.
///
/// Diagnostics are taken from the raw matrix; concurrence and EoF from the
/// state certified at [`UNPHYSICAL_TOL`].
pub fn record_from_matrix(t: f64, raw: &CMatrix) -> Result<TrajectoryRecord, ScenarioError> {
    let rho = validate_state(raw, UNPHYSICAL_TOL)
        .map_err(|e| ScenarioError::Unphysical { t, reason: e.to_string(), records: Vec::new() })?;
    let conc = concurrence_mixed(&rho)?;
    Ok(TrajectoryRecord {
        t,
        concurrence: conc.value,
        eof: entanglement_of_formation(conc.value)?,
        purity: (raw * raw).trace().re,
        trace_error: (raw.trace().re - 1.0).abs(),
        min_eigenvalue: hermitian_eig(&raw.hermitian_part(), f64::INFINITY)?.min_value(),
    })
}

/// Row for a pure state; concurrence comes from the coefficient determinant.
pub fn record_from_pure(t: f64, v: &PureState) -> Result<TrajectoryRecord, ScenarioError> {
    let rho = density_from_pure(v);
    let c = concurrence_pure(v);
    Ok(TrajectoryRecord {
        t,
        concurrence: c,
        eof: entanglement_of_formation(c)?,
        purity: rho.purity(),
        trace_error: (rho.matrix().trace().re - 1.0).abs(),
        min_eigenvalue: hermitian_eig(rho.matrix(), f64::INFINITY)?.min_value(),
    })
}

/// Control-Hamiltonian scenario: entanglement generated from `e1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Params {
    pub y: f64,
    pub t_max: f64,
    pub points: usize,
    /// Diagonal energies `x1, x2, x3`.
    pub energies: [f64; 3],
    pub convention: TimeConvention,
}

impl Default for Figure1Params {
    fn default() -> Self {
        Self { y: 1.0, t_max: std::f64::consts::PI, points: 400, energies: [0.0; 3], convention: TimeConvention::Positive }
    }
}

/// Diagonal energies `x1, x2, x3` drawn uniformly from `[-5, 5)`.
pub fn random_energies(seed: u64) -> [f64; 3] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    [(); 3].map(|_| rng.gen_range(-5.0..5.0))
}

fn check_grid(t_max: f64, points: usize, prefix: &str) -> Result<(), ScenarioError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(ScenarioError::invalid(format!("{prefix}t_max"), format!("must be a positive number, got {t_max}")));
    }
    if points < 2 {
        return Err(ScenarioError::invalid(format!("{prefix}points"), format!("must be at least 2, got {points}")));
    }
    Ok(())
}

pub fn figure1(p: &Figure1Params) -> Result<Vec<TrajectoryRecord>, ScenarioError> {
    if p.y == 0.0 || !p.y.is_finite() {
        return Err(ScenarioError::invalid("y", "control coupling must be a nonzero finite number"));
    }
    if let Some(k) = p.energies.iter().position(|x| !x.is_finite()) {
        return Err(ScenarioError::invalid(format!("x{}", k + 1), "must be finite"));
    }
    check_grid(p.t_max, p.points, "")?;
    let [x1, x2, x3] = p.energies;
    let h = control_hamiltonian(x1, x2, x3, p.y).matrix();
    let times = time_grid(p.t_max, p.points);
    let states = evolve_pure_series(&h, &PureState::basis(0), &times, p.convention).map_err(dynamics_to_scenario)?;
    times.iter().zip(&states).map(|(&t, v)| record_from_pure(t, v)).collect()
}

/// Bell-state dephasing scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Params {
    pub gamma14: f64,
    /// Value for the five other dephasing rates; `None` uses `gamma14`, which
    /// makes all six equal and satisfies the dephasing constraints.
    pub other_gamma: Option<f64>,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Figure2Params {
    fn default() -> Self {
        Self { gamma14: 1.0, other_gamma: None, t_max: 5.0, points: 400 }
    }
}

impl Figure2Params {
    pub fn rates(&self) -> Result<RateSet, ScenarioError> {
        let g = self.other_gamma.unwrap_or(self.gamma14);
        RateSet::pure_dephasing(g, g, self.gamma14, g, g, g).map_err(|e| match e {
            DynamicsError::InvalidRates(msg) => ScenarioError::invalid("gamma", msg),
            other => ScenarioError::Numerical(other.to_string()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub records: Vec<TrajectoryRecord>,
    pub warnings: Vec<String>,
}

fn constraint_warning(rates: &RateSet) -> Option<String> {
    if check_dephasing_constraints(rates, RATE_CHECK_TOL) {
        return None;
    }
    let [r1, r2] = dephasing_constraint_residuals(rates);
    Some(format!(
        "dephasing rates violate G12+G34 = G14+G23 = G13+G24 (residuals {r1:.6e}, {r2:.6e}); \
         they cannot come from diagonal Lindblad operators and may not describe a physical process"
    ))
}

pub fn figure2(p: &Figure2Params) -> Result<ScenarioOutput, ScenarioError> {
    if !(p.gamma14.is_finite() && p.gamma14 >= 0.0) {
        return Err(ScenarioError::invalid("gamma14", format!("must be a nonnegative number, got {}", p.gamma14)));
    }
    check_grid(p.t_max, p.points, "")?;
    let rates = p.rates()?;
    let warnings = constraint_warning(&rates).into_iter().collect();
    let l = dissipator_from_rates(&rates);
    let rho0 = density_from_pure(&bell_state(BellKind::PhiPlus));
    let records = run_trajectory(&l, &rho0, &time_grid(p.t_max, p.points))?;
    Ok(ScenarioOutput { records, warnings })
}

fn dynamics_to_scenario(e: DynamicsError) -> ScenarioError {
    match e {
        DynamicsError::UnphysicalEvolution { t, source } => {
            ScenarioError::Unphysical { t, reason: source.to_string(), records: Vec::new() }
        }
        other => ScenarioError::Numerical(other.to_string()),
    }
}

/// Propagates `rho0` under `l` and tabulates every grid point. Stops at the
/// first state that fails validation, returning the rows computed so far.
pub fn run_trajectory(l: &SuperOperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<TrajectoryRecord>, ScenarioError> {
    let raw = propagate(l, rho0.matrix(), times).map_err(dynamics_to_scenario)?;
    let mut records = Vec::with_capacity(times.len());
    for (m, &t) in raw.iter().zip(times) {
        match record_from_matrix(t, m) {
            Ok(r) => records.push(r),
            Err(ScenarioError::Unphysical { t, reason, .. }) => {
                return Err(ScenarioError::Unphysical { t, reason, records });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(records)
}

/// Concurrence against time, with an optional dashed reference curve.
pub fn concurrence_chart(title: &str, x_label: &str, records: &[TrajectoryRecord], reference: Option<(&str, Vec<(f64, f64)>)>) -> LineChart {
    let mut chart = LineChart::new(title, x_label, "Concurrence").with_y_range(0.0, 1.0);
    chart.push(Series::new("concurrence", records.iter().map(|r| (r.t, r.concurrence)).collect(), "#1f77b4"));
    if let Some((label, pts)) = reference {
        chart.push(Series::new(label, pts, "#d62728").dashed());
    }
    chart
}

pub fn figure1_chart(p: &Figure1Params, records: &[TrajectoryRecord]) -> LineChart {
    let reference = records.iter().map(|r| (r.t, (2.0 * r.t * p.y).sin().abs())).collect();
    concurrence_chart("Concurrence v time", "t (units of 1/control frequency)", records, Some(("|sin(2ty)|", reference)))
}

pub fn figure2_chart(p: &Figure2Params, records: &[TrajectoryRecord]) -> LineChart {
    let reference = records.iter().map(|r| (r.t, (-p.gamma14 * r.t).exp())).collect();
    concurrence_chart("Concurrence v time", "t (units of 1/Gamma14)", records, Some(("exp(-Gamma14 t)", reference)))
}

// ---------------------------------------------------------------------------
// Config schema

/// A complex number as `[re, im]`.
pub type ComplexPair = [f64; 2];

fn to_complex(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixInput {
    Rows(Vec<Vec<ComplexPair>>),
    Flat(Vec<ComplexPair>),
}

impl MatrixInput {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixInput::Rows((0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    fn to_matrix(&self, path: &str) -> Result<CMatrix, ScenarioError> {
        let data: Vec<Complex64> = match self {
            MatrixInput::Rows(rows) => {
                if rows.len() != DIM {
                    return Err(ScenarioError::invalid(path, format!("expected 4 rows, got {}", rows.len())));
                }
                for (i, r) in rows.iter().enumerate() {
                    if r.len() != DIM {
                        return Err(ScenarioError::invalid(format!("{path}[{i}]"), format!("expected 4 entries, got {}", r.len())));
                    }
                }
                rows.iter().flatten().map(to_complex).collect()
            }
            MatrixInput::Flat(v) => {
                if v.len() != DIM * DIM {
                    return Err(ScenarioError::invalid(path, format!("expected 16 row-major entries, got {}", v.len())));
                }
                v.iter().map(to_complex).collect()
            }
        };
        CMatrix::new(DIM, DIM, data).map_err(|e| match e {
            LinalgError::NonFinite { row, col } => ScenarioError::invalid(format!("{path}[{row}][{col}]"), "entry is not finite"),
            other => ScenarioError::invalid(path, other),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianConfig {
    Control { x1: f64, x2: f64, x3: f64, y: f64 },
    Matrix { matrix: MatrixInput },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatesConfig {
    #[serde(rename = "Gamma")]
    pub dephasing: [[f64; DIM]; DIM],
    #[serde(rename = "gamma", default)]
    pub relaxation: [[f64; DIM]; DIM],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DissipationConfig {
    #[default]
    None,
    Rates(RatesConfig),
    LindbladDiagonal([ComplexPair; DIM]),
    LindbladGeneral(Vec<MatrixInput>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateConfig {
    Bell(BellKind),
    Amplitudes([ComplexPair; DIM]),
    DensityMatrix(MatrixInput),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub dissipation: DissipationConfig,
    pub initial_state: InitialStateConfig,
    pub time_grid: TimeGridConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

pub fn parse_config(text: &str) -> Result<SimulationConfig, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ScenarioError::ConfigParse(if path == "." { e.inner().to_string() } else { format!("at `{path}`: {}", e.inner()) })
    })
}

pub fn load_config(path: &Path) -> Result<SimulationConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::ConfigParse(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// A config turned into numerical objects.
#[derive(Debug, Clone)]
pub struct ResolvedSimulation {
    pub hamiltonian: CMatrix,
    pub dissipator: SuperOperator,
    /// Rates behind the dissipator when it has rate form.
    pub rates: Option<RateSet>,
    pub initial_state: DensityMatrix,
    pub times: Vec<f64>,
}

impl ResolvedSimulation {
    pub fn liouvillian(&self) -> Result<SuperOperator, ScenarioError> {
        let lh = liouvillian_hamiltonian(&self.hamiltonian).map_err(|e| ScenarioError::invalid("hamiltonian", e))?;
        Ok(&lh + &self.dissipator)
    }
}

fn rates_from_config(r: &RatesConfig) -> Result<RateSet, ScenarioError> {
    RateSet::new(r.dephasing, r.relaxation).map_err(|e| ScenarioError::invalid("dissipation.rates", e))
}

impl SimulationConfig {
    pub fn resolve(&self, state_tol: f64) -> Result<ResolvedSimulation, ScenarioError> {
        let hamiltonian = match &self.hamiltonian {
            HamiltonianConfig::Control { x1, x2, x3, y } => {
                for (name, v) in [("x1", x1), ("x2", x2), ("x3", x3), ("y", y)] {
                    if !v.is_finite() {
                        return Err(ScenarioError::invalid(format!("hamiltonian.{name}"), "must be finite"));
                    }
                }
                control_hamiltonian(*x1, *x2, *x3, *y).matrix()
            }
            HamiltonianConfig::Matrix { matrix } => {
                let h = matrix.to_matrix("hamiltonian.matrix")?;
                let dev = h.hermitian_deviation();
                if dev > crate::linalg::HERMITIAN_TOL {
                    return Err(ScenarioError::invalid("hamiltonian.matrix", format!("not Hermitian (deviation {dev:.3e})")));
                }
                h
            }
        };

        let (dissipator, rates) = match &self.dissipation {
            DissipationConfig::None => (SuperOperator::zero(), Some(RateSet::zero())),
            DissipationConfig::Rates(r) => {
                let rates = rates_from_config(r)?;
                (dissipator_from_rates(&rates), Some(rates))
            }
            DissipationConfig::LindbladDiagonal(a) => {
                if a.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(ScenarioError::invalid("dissipation.lindblad_diagonal", "amplitudes must be finite"));
                }
                let a = a.map(|p| to_complex(&p));
                let l = lindblad_dissipator(&LindbladSpec::diagonal(a)).map_err(|e| ScenarioError::invalid("dissipation", e))?;
                (l, Some(dephasing_from_amplitudes(a)))
            }
            DissipationConfig::LindbladGeneral(ops) => {
                let ops = ops
                    .iter()
                    .enumerate()
                    .map(|(k, m)| m.to_matrix(&format!("dissipation.lindblad_general[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let l = lindblad_dissipator(&LindbladSpec::Operators(ops)).map_err(|e| ScenarioError::invalid("dissipation", e))?;
                let extracted = extract_rates(&l, 1e-12);
                let rates = if extracted.rate_form { extracted.to_rate_set().ok() } else { None };
                (l, rates)
            }
        };

        let initial_state = match &self.initial_state {
            InitialStateConfig::Bell(kind) => density_from_pure(&bell_state(*kind)),
            InitialStateConfig::Amplitudes(a) => {
                let v = PureState::new(a.map(|p| to_complex(&p))).map_err(|e| ScenarioError::invalid("initial_state.amplitudes", e))?;
                density_from_pure(&v)
            }
            InitialStateConfig::DensityMatrix(m) => {
                let m = m.to_matrix("initial_state.density_matrix")?;
                validate_state(&m, state_tol).map_err(|e| ScenarioError::invalid("initial_state.density_matrix", e))?
            }
        };

        check_grid(self.time_grid.t_max, self.time_grid.points, "time_grid.")?;
        Ok(ResolvedSimulation {
            hamiltonian,
            dissipator,
            rates,
            initial_state,
            times: time_grid(self.time_grid.t_max, self.time_grid.points),
        })
    }
}

/// Builds `L = L_H + L_D` from the config and tabulates the trajectory.
pub fn run_simulation(cfg: &SimulationConfig, state_tol: f64) -> Result<ScenarioOutput, ScenarioError> {
    let sim = cfg.resolve(state_tol)?;
    let mut warnings = Vec::new();
    if let (DissipationConfig::Rates(_), Some(rates)) = (&cfg.dissipation, &sim.rates) {
        if !rates.has_relaxation() {
            warnings.extend(constraint_warning(rates));
        }
    }
    let l = sim.liouvillian()?;
    let records = run_trajectory(&l, &sim.initial_state, &sim.times)?;
    Ok(ScenarioOutput { records, warnings })
}

pub fn simulation_chart(records: &[TrajectoryRecord]) -> LineChart {
    concurrence_chart("Concurrence v time", "t", records, None)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone)]
pub struct RateReport {
    pub rates: RateSet,
    pub residuals: [f64; 2],
    pub constraints_hold: bool,
    pub realizability: Realizability,
}

/// Rate summary for a config's dissipation section.
pub fn rate_report(dissipation: &DissipationConfig, tol: f64) -> Result<RateReport, ScenarioError> {
    let rates = match dissipation {
        DissipationConfig::None => {
            return Err(ScenarioError::invalid("dissipation", "no rates to check (dissipation is `none`)"));
        }
        DissipationConfig::Rates(r) => rates_from_config(r)?,
        DissipationConfig::LindbladDiagonal(a) => dephasing_from_amplitudes(a.map(|p| to_complex(&p))),
        DissipationConfig::LindbladGeneral(ops) => {
            let ops = ops
                .iter()
                .enumerate()
                .map(|(k, m)| m.to_matrix(&format!("dissipation.lindblad_general[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let l = lindblad_dissipator(&LindbladSpec::Operators(ops)).map_err(|e| ScenarioError::invalid("dissipation", e))?;
            let e = extract_rates(&l, tol.max(1e-12));
            if !e.rate_form {
                return Err(ScenarioError::invalid(
                    "dissipation.lindblad_general",
                    format!("operators do not give a rate-form dissipator (residual {:.3e})", e.residual),
                ));
            }
            e.to_rate_set().map_err(|e| ScenarioError::invalid("dissipation.lindblad_general", e))?
        }
    };
    let residuals = dephasing_constraint_residuals(&rates);
    Ok(RateReport {
        constraints_hold: check_dephasing_constraints(&rates, tol),
        realizability: lindblad_realizability(&rates, tol),
        residuals,
        rates,
    })
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gamma (dephasing):")?;
        for row in self.rates.dephasing_matrix() {
            writeln!(f, "  {}", row.iter().map(|x| format!("{x:>12.6}")).collect::<Vec<_>>().join(" "))?;
        }
        writeln!(f, "gamma (relaxation):")?;
        for row in self.rates.relaxation_matrix() {
            writeln!(f, "  {}", row.iter().map(|x| format!("{x:>12.6}")).collect::<Vec<_>>().join(" "))?;
        }
        writeln!(f, "constraint residuals:")?;
        writeln!(f, "  G12+G34-G14-G23 = {:.6e}", self.residuals[0])?;
        writeln!(f, "  G14+G23-G13-G24 = {:.6e}", self.residuals[1])?;
        writeln!(f, "constraints: {}", if self.constraints_hold { "pass" } else { "FAIL" })?;
        let p = &self.realizability.populations;
        writeln!(f, "fitted |a_ii|^2: {}", p.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", "))?;
        writeln!(f, "fit residual: {:.6e}", self.realizability.fit_residual)?;
        match &self.realizability.reason {
            None => writeln!(f, "lindblad-realizable: yes"),
            Some(why) => writeln!(f, "lindblad-realizable: no ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceReport {
    pub concurrence: f64,
    /// Wootters spectrum (mixed-state path only).
    pub lambdas: Option<[f64; 4]>,
    pub eof: f64,
    /// Product-state verdict (pure inputs only).
    pub separable: Option<bool>,
}

pub fn concurrence_report_pure(v: &PureState) -> Result<ConcurrenceReport, ScenarioError> {
    let c = concurrence_pure(v);
    Ok(ConcurrenceReport {
        concurrence: c,
        lambdas: None,
        eof: entanglement_of_formation(c)?,
        separable: Some(is_separable_pure(v, SEPARABILITY_TOL)),
    })
}

pub fn concurrence_report_mixed(rho: &DensityMatrix) -> Result<ConcurrenceReport, ScenarioError> {
    let r = concurrence_mixed(rho)?;
    Ok(ConcurrenceReport { concurrence: r.value, lambdas: Some(r.lambdas), eof: entanglement_of_formation(r.value)?, separable: None })
}

/// Reads a state given as 4 amplitudes or a 4×4 matrix (JSON).
pub fn parse_state_input(text: &str, normalize: bool, tol: f64) -> Result<StateInput, StateError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Amplitudes([ComplexPair; DIM]),
        RealAmplitudes([f64; DIM]),
        Matrix(MatrixInput),
    }
    let raw: Raw = serde_json::from_str(text)
        .map_err(|_| StateError::Dimension { expected: "4 amplitudes or a 4x4 matrix", got: text.trim().to_string() })?;
    let pure = |a: [Complex64; DIM]| if normalize { PureState::normalized(a) } else { PureState::new(a) };
    match raw {
        Raw::Amplitudes(a) => Ok(StateInput::Pure(pure(a.map(|p| to_complex(&p)))?)),
        Raw::RealAmplitudes(a) => Ok(StateInput::Pure(pure(a.map(|x| Complex64::new(x, 0.0)))?)),
        Raw::Matrix(m) => {
            let m = m.to_matrix("state").map_err(|e| StateError::Dimension { expected: "4x4 matrix", got: e.to_string() })?;
            Ok(StateInput::Mixed(validate_state(&m, tol)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateInput {
    Pure(PureState),
    Mixed(DensityMatrix),
}
