//! Hamiltonians, Liouville superoperators and time propagation.
//!
//! States are propagated as Liouville vectors `r` with `r[4m + n] = ρ[m][n]`.
//! Under that row-major convention `A ρ B` maps to `(A ⊗ Bᵀ) r`, which is
//! how both the Hamiltonian part and the Lindblad dissipator are assembled.
//!
//! Two time conventions coexist. Pure states follow `v(t) = exp(+itH) v0` by
//! default, while the Liouvillian realizes `i dρ/dt = [H, ρ]`, i.e.
//! `ρ(t) = exp(−itH) ρ exp(+itH)`. They are time reverses of each other and
//! give identical concurrence; [`TimeConvention`] switches the pure-state one.

use num_complex::Complex64;
use std::ops::Add;
use thiserror::Error;

use crate::linalg::{expm, expm_hermitian_scaled, hermitian_eig, kron, CMatrix, LinalgError, HERMITIAN_TOL, ZERO};
use crate::state::{
    liouville_index, validate_state, BellKind, DensityMatrix, PureState, StateError, DIM, LIOUVILLE_DIM,
};

/// Outputs of [`evolve_state`] must pass state validation at this tolerance.
pub const UNPHYSICAL_TOL: f64 = 1e-8;
/// Allowed asymmetry `|Γ_kn − Γ_nk|` in a [`RateSet`].
pub const RATE_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid rates: {0}")]
    InvalidRates(String),
    #[error("invalid time grid: {0}")]
    InvalidTimes(String),
    #[error("expected {expected}, got {got}")]
    Dimension { expected: &'static str, got: String },
    #[error("unphysical evolution at t = {t}: {source}")]
    UnphysicalEvolution { t: f64, source: StateError },
    #[error("invariant-state analysis needs pure dephasing, but relaxation rate gamma_{k}{n} = {rate} is present")]
    RelaxationPresent { k: usize, n: usize, rate: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Free two-qubit Hamiltonian `diag(x1, x2, x3, x1)` plus a control coupling
/// `y` between levels 1 and 4. Units with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlHamiltonian {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub y: f64,
}

impl ControlHamiltonian {
    pub fn new(x1: f64, x2: f64, x3: f64, y: f64) -> Self {
        Self { x1, x2, x3, y }
    }

    pub fn matrix(&self) -> CMatrix {
        let mut h = CMatrix::from_real_diag(&[self.x1, self.x2, self.x3, self.x1]);
        h[(0, 3)] = Complex64::new(self.y, 0.0);
        h[(3, 0)] = Complex64::new(self.y, 0.0);
        h
    }

    /// A sum of single-qubit terms `A⊗I + I⊗B`. That needs `y = 0` and
    /// `2·x1 = x2 + x3`; otherwise the diagonal carries a `σz⊗σz` part.
    pub fn is_local(&self, tol: f64) -> bool {
        self.y == 0.0 && (2.0 * self.x1 - self.x2 - self.x3).abs() <= tol
    }
}

pub fn control_hamiltonian(x1: f64, x2: f64, x3: f64, y: f64) -> ControlHamiltonian {
    ControlHamiltonian::new(x1, x2, x3, y)
}

/// Sign of the exponent used for pure-state evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeConvention {
    /// `v(t) = exp(+itH) v0`.
    #[default]
    Positive,
    /// `v(t) = exp(−itH) v0` (Schrödinger).
    Schrodinger,
}

impl TimeConvention {
    fn sign(self) -> f64 {
        match self {
            TimeConvention::Positive => 1.0,
            TimeConvention::Schrodinger => -1.0,
        }
    }
}

fn check_hamiltonian(h: &CMatrix) -> Result<(), DynamicsError> {
    if h.rows() != DIM || h.cols() != DIM {
        return Err(DynamicsError::Dimension { expected: "4x4 Hamiltonian", got: format!("{}x{}", h.rows(), h.cols()) });
    }
    Ok(())
}

/// Unitary evolution of a pure state for time `t`.
pub fn evolve_pure(h: &CMatrix, v0: &PureState, t: f64, convention: TimeConvention) -> Result<PureState, DynamicsError> {
    check_hamiltonian(h)?;
    let u = expm_hermitian_scaled(h, Complex64::new(0.0, convention.sign() * t))?;
    Ok(v0.transformed(&u)?)
}

/// [`evolve_pure`] over a time grid, diagonalizing `h` once.
pub fn evolve_pure_series(
    h: &CMatrix,
    v0: &PureState,
    times: &[f64],
    convention: TimeConvention,
) -> Result<Vec<PureState>, DynamicsError> {
    check_hamiltonian(h)?;
    check_times(times)?;
    let eig = hermitian_eig(h, HERMITIAN_TOL)?;
    let s = convention.sign();
    times
        .iter()
        .map(|&t| {
            let u = eig.reconstruct_with(|l| Complex64::new(0.0, s * t * l).exp());
            Ok(v0.transformed(&u)?)
        })
        .collect()
}

/// A 16×16 generator acting on Liouville vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator(CMatrix);

impl SuperOperator {
    pub fn new(matrix: CMatrix) -> Result<Self, DynamicsError> {
        if matrix.rows() != LIOUVILLE_DIM || matrix.cols() != LIOUVILLE_DIM {
            return Err(DynamicsError::Dimension {
                expected: "16x16 superoperator",
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Self(matrix))
    }

    pub fn zero() -> Self {
        Self(CMatrix::zeros(LIOUVILLE_DIM, LIOUVILLE_DIM))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.is_diagonal(0.0)
    }

    /// Largest `|Σ_n L[[n;n], c]|` over columns `c`; zero iff `d tr ρ / dt = 0`
    /// for every ρ.
    pub fn trace_preservation_defect(&self) -> f64 {
        (0..LIOUVILLE_DIM)
            .map(|col| (0..DIM).map(|n| self.0[(liouville_index(n, n), col)]).sum::<Complex64>().norm())
            .fold(0.0, f64::max)
    }

    /// `L r` for a matrix given in its 4×4 form.
    pub fn apply_to_matrix(&self, rho: &CMatrix) -> CMatrix {
        let r = self.0.apply(rho.as_slice());
        CMatrix::new(DIM, DIM, r).expect("16 finite entries")
    }

    /// `‖[self, other]‖_max`.
    pub fn commutator_norm(&self, other: &SuperOperator) -> f64 {
        self.0.commutator(&other.0).max_abs()
    }
}

impl Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, rhs: &SuperOperator) -> SuperOperator {
        SuperOperator(&self.0 + &rhs.0)
    }
}

/// `L_H = −i (H ⊗ I − I ⊗ Hᵀ)`, the generator of `i dρ/dt = [H, ρ]`.
pub fn liouvillian_hamiltonian(h: &CMatrix) -> Result<SuperOperator, DynamicsError> {
    check_hamiltonian(h)?;
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { deviation, tol: HERMITIAN_TOL }.into());
    }
    let id = CMatrix::identity(DIM);
    let comm = &kron(h, &id) - &kron(&id, &h.transpose());
    SuperOperator::new(comm.scale(Complex64::new(0.0, -1.0)))
}

/// Dephasing rates `Γ` and population relaxation rates `γ` (1/time).
///
/// `Γ[k][n]` damps the coherence ρ_kn; `γ[k][n]` is the transition rate from
/// level n to level k. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSet {
    dephasing: [[f64; DIM]; DIM],
    relaxation: [[f64; DIM]; DIM],
}

impl RateSet {
    /// Requires finite nonnegative entries, zero diagonals and a symmetric `Γ`.
    pub fn new(dephasing: [[f64; DIM]; DIM], relaxation: [[f64; DIM]; DIM]) -> Result<Self, DynamicsError> {
        for (name, m) in [("Gamma", &dephasing), ("gamma", &relaxation)] {
            for k in 0..DIM {
                for n in 0..DIM {
                    let v = m[k][n];
                    if !v.is_finite() {
                        return Err(DynamicsError::InvalidRates(format!("{name}[{}][{}] is not finite", k + 1, n + 1)));
                    }
                    if v < 0.0 {
                        return Err(DynamicsError::InvalidRates(format!(
                            "{name}[{}][{}] = {v} is negative",
                            k + 1,
                            n + 1
                        )));
                    }
                    if k == n && v != 0.0 {
                        return Err(DynamicsError::InvalidRates(format!(
                            "{name}[{}][{}] = {v} must be zero on the diagonal",
                            k + 1,
                            n + 1
                        )));
                    }
                }
            }
        }
        for k in 0..DIM {
            for n in (k + 1)..DIM {
                if (dephasing[k][n] - dephasing[n][k]).abs() > RATE_SYMMETRY_TOL {
                    return Err(DynamicsError::InvalidRates(format!(
                        "Gamma is not symmetric: Gamma[{}][{}] = {} but Gamma[{}][{}] = {}",
                        k + 1,
                        n + 1,
                        dephasing[k][n],
                        n + 1,
                        k + 1,
                        dephasing[n][k]
                    )));
                }
            }
        }
        Ok(Self { dephasing, relaxation })
    }

    pub fn zero() -> Self {
        Self { dephasing: [[0.0; DIM]; DIM], relaxation: [[0.0; DIM]; DIM] }
    }

    /// Pure dephasing from the six rates `Γ12, Γ13, Γ14, Γ23, Γ24, Γ34`.
    pub fn pure_dephasing(g12: f64, g13: f64, g14: f64, g23: f64, g24: f64, g34: f64) -> Result<Self, DynamicsError> {
        let mut d = [[0.0; DIM]; DIM];
        for ((k, n), g) in [((0, 1), g12), ((0, 2), g13), ((0, 3), g14), ((1, 2), g23), ((1, 3), g24), ((2, 3), g34)] {
            d[k][n] = g;
            d[n][k] = g;
        }
        Self::new(d, [[0.0; DIM]; DIM])
    }

    /// `Γ[k][n]`, 0-based.
    pub fn dephasing(&self, k: usize, n: usize) -> f64 {
        self.dephasing[k][n]
    }

    /// `γ[k][n]`, 0-based: rate of the transition n → k.
    pub fn relaxation(&self, k: usize, n: usize) -> f64 {
        self.relaxation[k][n]
    }

    pub fn dephasing_matrix(&self) -> &[[f64; DIM]; DIM] {
        &self.dephasing
    }

    pub fn relaxation_matrix(&self) -> &[[f64; DIM]; DIM] {
        &self.relaxation
    }

    pub fn has_relaxation(&self) -> bool {
        self.relaxation.iter().flatten().any(|&g| g != 0.0)
    }

    pub fn max_rate(&self) -> f64 {
        self.dephasing.iter().chain(&self.relaxation).flatten().copied().fold(0.0, f64::max)
    }
}

/// Dissipator with `L[[k;n],[k;n]] = −Γ_kn`, `L[[n;n],[k;k]] = γ_nk` and
/// `L[[n;n],[n;n]] = −Σ_k γ_kn`; every other entry is zero.
pub fn dissipator_from_rates(rates: &RateSet) -> SuperOperator {
    let mut l = CMatrix::zeros(LIOUVILLE_DIM, LIOUVILLE_DIM);
    for k in 0..DIM {
        for n in 0..DIM {
            if k == n {
                continue;
            }
            l[(liouville_index(k, n), liouville_index(k, n))] = Complex64::new(-rates.dephasing[k][n], 0.0);
            l[(liouville_index(n, n), liouville_index(k, k))] = Complex64::new(rates.relaxation[n][k], 0.0);
        }
    }
    for n in 0..DIM {
        let loss: f64 = (0..DIM).filter(|&k| k != n).map(|k| rates.relaxation[k][n]).sum();
        l[(liouville_index(n, n), liouville_index(n, n))] = Complex64::new(-loss, 0.0);
    }
    SuperOperator(l)
}

/// Jump operators for a Lindblad dissipator.
#[derive(Debug, Clone, PartialEq)]
pub enum LindbladSpec {
    /// `V_[i;j] = a[i][j] E_ij` for a 4×4 amplitude matrix `a`.
    Amplitudes(CMatrix),
    /// Arbitrary 4×4 jump operators.
    Operators(Vec<CMatrix>),
}

impl LindbladSpec {
    /// Only the diagonal amplitudes `a_[i;i]`: pure dephasing.
    pub fn diagonal(a: [Complex64; DIM]) -> Self {
        LindbladSpec::Amplitudes(CMatrix::from_diag(&a))
    }

    pub fn operators(&self) -> Result<Vec<CMatrix>, DynamicsError> {
        match self {
            LindbladSpec::Amplitudes(a) => {
                if a.rows() != DIM || a.cols() != DIM {
                    return Err(DynamicsError::Dimension {
                        expected: "4x4 amplitude matrix",
                        got: format!("{}x{}", a.rows(), a.cols()),
                    });
                }
                let mut ops = Vec::new();
                for i in 0..DIM {
                    for j in 0..DIM {
                        if a[(i, j)] != ZERO {
                            let mut v = CMatrix::zeros(DIM, DIM);
                            v[(i, j)] = a[(i, j)];
                            ops.push(v);
                        }
                    }
                }
                Ok(ops)
            }
            LindbladSpec::Operators(ops) => {
                if let Some(bad) = ops.iter().find(|v| v.rows() != DIM || v.cols() != DIM) {
                    return Err(DynamicsError::Dimension {
                        expected: "4x4 jump operator",
                        got: format!("{}x{}", bad.rows(), bad.cols()),
                    });
                }
                Ok(ops.clone())
            }
        }
    }
}

/// `L[ρ] = Σ_s (V ρ V† − ½ {V†V, ρ})`, written as
/// `Σ_s V ⊗ V̄ − ½ (V†V ⊗ I) − ½ (I ⊗ (V†V)ᵀ)`.
pub fn lindblad_dissipator(spec: &LindbladSpec) -> Result<SuperOperator, DynamicsError> {
    let id = CMatrix::identity(DIM);
    let mut l = CMatrix::zeros(LIOUVILLE_DIM, LIOUVILLE_DIM);
    for v in spec.operators()? {
        let vdv = &v.adjoint() * &v;
        l = &l + &kron(&v, &v.conj());
        l = &l - &kron(&vdv, &id).scale_re(0.5);
        l = &l - &kron(&id, &vdv.transpose()).scale_re(0.5);
    }
    SuperOperator::new(l)
}

/// `Γ_ij = ½(|a_i|² + |a_j|²)` for `i ≠ j`, no relaxation.
pub fn dephasing_from_amplitudes(a: [Complex64; DIM]) -> RateSet {
    let mut d = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j {
                d[i][j] = 0.5 * (a[i].norm_sqr() + a[j].norm_sqr());
            }
        }
    }
    RateSet::new(d, [[0.0; DIM]; DIM]).expect("amplitude-derived rates are valid")
}

/// `(Γ12 + Γ34 − Γ14 − Γ23, Γ14 + Γ23 − Γ13 − Γ24)`; both vanish for any
/// dephasing generated by diagonal Lindblad amplitudes.
pub fn dephasing_constraint_residuals(rates: &RateSet) -> [f64; 2] {
    let g = |k: usize, n: usize| rates.dephasing[k - 1][n - 1];
    [g(1, 2) + g(3, 4) - g(1, 4) - g(2, 3), g(1, 4) + g(2, 3) - g(1, 3) - g(2, 4)]
}

pub fn check_dephasing_constraints(rates: &RateSet, tol: f64) -> bool {
    dephasing_constraint_residuals(rates).iter().all(|r| r.abs() <= tol)
}

/// Least-squares fit of the populations `p_i = |a_[i;i]|²` to a dephasing set.
#[derive(Debug, Clone, PartialEq)]
pub struct Realizability {
    pub populations: [f64; DIM],
    /// Largest `|½(p_i + p_j) − Γ_ij|` over pairs.
    pub fit_residual: f64,
    pub realizable: bool,
    pub reason: Option<String>,
}

/// Solves `½(p_i + p_j) = Γ_ij` over the six pairs in the least-squares sense.
///
/// The normal matrix is `(2I + J)/4` with `J` all-ones, so the solution is
/// `p_i = s_i − S/6` where `s_i = Σ_j Γ_ij` and `S = Σ_i s_i`.
pub fn lindblad_realizability(rates: &RateSet, tol: f64) -> Realizability {
    let s: Vec<f64> = (0..DIM).map(|i| rates.dephasing[i].iter().sum()).collect();
    let total: f64 = s.iter().sum();
    let mut p = [0.0; DIM];
    for i in 0..DIM {
        p[i] = s[i] - total / 6.0;
    }
    let mut fit_residual: f64 = 0.0;
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            fit_residual = fit_residual.max((0.5 * (p[i] + p[j]) - rates.dephasing[i][j]).abs());
        }
    }
    let reason = if rates.has_relaxation() {
        Some("relaxation rates are present; diagonal amplitudes only produce dephasing".to_string())
    } else if fit_residual > tol {
        Some(format!("no amplitudes reproduce these rates (fit residual {fit_residual:.3e})"))
    } else if let Some(i) = p.iter().position(|&x| x < -tol) {
        Some(format!("|a_[{0};{0}]|^2 would be {1:.6e} < 0", i + 1, p[i]))
    } else {
        None
    };
    Realizability { populations: p, fit_residual, realizable: reason.is_none(), reason }
}

/// Rates read back off a superoperator by position.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedRates {
    pub dephasing: [[f64; DIM]; DIM],
    pub relaxation: [[f64; DIM]; DIM],
    /// Largest entrywise mismatch between the operator and the rate-form
    /// operator rebuilt from the extracted numbers.
    pub residual: f64,
    /// The operator is exactly of rate form (within tolerance) with valid rates.
    pub rate_form: bool,
}

impl ExtractedRates {
    pub fn to_rate_set(&self) -> Result<RateSet, DynamicsError> {
        RateSet::new(self.dephasing, self.relaxation)
    }
}

/// Inverse of [`dissipator_from_rates`]. Anything outside the rate pattern
/// shows up in `residual` instead of being dropped.
pub fn extract_rates(l: &SuperOperator, tol: f64) -> ExtractedRates {
    let m = l.matrix();
    let mut dephasing = [[0.0; DIM]; DIM];
    let mut relaxation = [[0.0; DIM]; DIM];
    for k in 0..DIM {
        for n in 0..DIM {
            if k != n {
                dephasing[k][n] = -m[(liouville_index(k, n), liouville_index(k, n))].re;
                relaxation[n][k] = m[(liouville_index(n, n), liouville_index(k, k))].re;
            }
        }
    }
    let rebuilt = {
        let mut r = CMatrix::zeros(LIOUVILLE_DIM, LIOUVILLE_DIM);
        for k in 0..DIM {
            for n in 0..DIM {
                if k != n {
                    r[(liouville_index(k, n), liouville_index(k, n))] = Complex64::new(-dephasing[k][n], 0.0);
                    r[(liouville_index(n, n), liouville_index(k, k))] = Complex64::new(relaxation[n][k], 0.0);
                }
            }
            let loss: f64 = (0..DIM).filter(|&j| j != k).map(|j| relaxation[j][k]).sum();
            r[(liouville_index(k, k), liouville_index(k, k))] = Complex64::new(-loss, 0.0);
        }
        r
    };
    let residual = m.max_abs_diff(&rebuilt);
    let rate_form = residual <= tol && RateSet::new(dephasing, relaxation).is_ok();
    ExtractedRates { dephasing, relaxation, residual, rate_form }
}

pub(crate) fn check_times(times: &[f64]) -> Result<(), DynamicsError> {
    if times.is_empty() {
        return Err(DynamicsError::InvalidTimes("time grid is empty".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(DynamicsError::InvalidTimes(format!("non-finite time {t}")));
    }
    if times[0] < 0.0 {
        return Err(DynamicsError::InvalidTimes(format!("first time {} is negative", times[0])));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
        return Err(DynamicsError::InvalidTimes(format!("times not ascending: {} then {}", w[0], w[1])));
    }
    Ok(())
}

/// `exp(L t)`.
pub fn propagator(l: &SuperOperator, t: f64) -> Result<CMatrix, DynamicsError> {
    if l.is_diagonal() {
        let d: Vec<Complex64> = l.matrix().diag().into_iter().map(|z| (z * t).exp()).collect();
        return Ok(CMatrix::from_diag(&d));
    }
    Ok(expm(&l.matrix().scale_re(t))?)
}

/// `ρ(t) = devec(exp(L t) vec(ρ0))` at each time, without validation.
///
/// Diagonal generators (pure dephasing) are exponentiated entrywise.
pub fn propagate(l: &SuperOperator, rho0: &CMatrix, times: &[f64]) -> Result<Vec<CMatrix>, DynamicsError> {
    if rho0.rows() != DIM || rho0.cols() != DIM {
        return Err(DynamicsError::Dimension { expected: "4x4 initial state", got: format!("{}x{}", rho0.rows(), rho0.cols()) });
    }
    check_times(times)?;
    let r0 = rho0.as_slice();
    if l.is_diagonal() {
        let rates = l.matrix().diag();
        return Ok(times
            .iter()
            .map(|&t| {
                let r: Vec<Complex64> = rates.iter().zip(r0).map(|(&lk, &rk)| (lk * t).exp() * rk).collect();
                CMatrix::new(DIM, DIM, r).expect("finite")
            })
            .collect());
    }
    times
        .iter()
        .map(|&t| {
            let r = expm(&l.matrix().scale_re(t))?.apply(r0);
            Ok(CMatrix::new(DIM, DIM, r)?)
        })
        .collect()
}

/// Propagates and certifies every output as a density matrix within
/// [`UNPHYSICAL_TOL`].
pub fn evolve_state(l: &SuperOperator, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>, DynamicsError> {
    propagate(l, rho0.matrix(), times)?
        .into_iter()
        .zip(times)
        .map(|(m, &t)| validate_state(&m, UNPHYSICAL_TOL).map_err(|source| DynamicsError::UnphysicalEvolution { t, source }))
        .collect()
}

/// Which coherences survive a pure-dephasing dissipator.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    /// 1-based pairs `(m, n)`, `m < n`, with `Γ_mn = 0`.
    pub protected_pairs: Vec<(usize, usize)>,
    /// Bell states left fixed by the dissipator.
    pub invariant_bell_states: Vec<BellKind>,
}

impl InvariantReport {
    /// Only populations survive.
    pub fn only_diagonal(&self) -> bool {
        self.protected_pairs.is_empty()
    }

    /// Every coherence survives.
    pub fn all_invariant(&self) -> bool {
        self.protected_pairs.len() == DIM * (DIM - 1) / 2
    }

    /// `ρ` is a fixed point iff its off-diagonal support lies in the protected pairs.
    pub fn is_fixed_point(&self, rho: &CMatrix, tol: f64) -> bool {
        for m in 0..DIM {
            for n in (m + 1)..DIM {
                let coherent = rho[(m, n)].norm() > tol || rho[(n, m)].norm() > tol;
                if coherent && !self.protected_pairs.contains(&(m + 1, n + 1)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Kernel of the diagonal dephasing dissipator.
pub fn invariant_states(rates: &RateSet) -> Result<InvariantReport, DynamicsError> {
    for k in 0..DIM {
        for n in 0..DIM {
            let rate = rates.relaxation[k][n];
            if rate != 0.0 {
                return Err(DynamicsError::RelaxationPresent { k: k + 1, n: n + 1, rate });
            }
        }
    }
    let mut protected_pairs = Vec::new();
    for m in 0..DIM {
        for n in (m + 1)..DIM {
            if rates.dephasing[m][n] == 0.0 {
                protected_pairs.push((m + 1, n + 1));
            }
        }
    }
    let invariant_bell_states = BellKind::ALL
        .into_iter()
        .filter(|k| {
            let (a, b) = k.support();
            protected_pairs.contains(&(a + 1, b + 1))
        })
        .collect();
    Ok(InvariantReport { protected_pairs, invariant_bell_states })
}
