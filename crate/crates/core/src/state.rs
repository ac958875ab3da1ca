//! Two-qubit states in the fixed standard basis `(e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2)`.
//!
//! Matrix indices are 0-based in code; the `[m;n] = (m-1)·4 + n` Liouville
//! index is 1-based in docs and `4·m + n` in code.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{det2, hermitian_eig, kron, CMatrix, LinalgError, ONE, ZERO};

/// Hilbert-space dimension of two qubits.
pub const DIM: usize = 4;
/// Length of a Liouville vector.
pub const LIOUVILLE_DIM: usize = DIM * DIM;

/// Allowed deviation of a pure state's norm from 1.
pub const NORM_TOL: f64 = 1e-12;
/// Default tolerance for state validation and eigenvalue clamping.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default threshold on `|det c|` for the pure separability test.
pub const SEPARABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("zero vector is not a state")]
    ZeroVector,
    #[error("state vector is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },
    #[error("state is not Hermitian (max deviation {deviation:.3e}, tol {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("state trace is not one (trace {trace:.15}, |tr - 1| = {error:.3e}, tol {tol:.1e})")]
    TraceNotOne { trace: f64, error: f64, tol: f64 },
    #[error("state is not positive (min eigenvalue {min_eigenvalue:.3e}, tol {tol:.1e})")]
    NotPositive { min_eigenvalue: f64, tol: f64 },
    #[error("expected a {expected} object, got {got}")]
    Dimension { expected: &'static str, got: String },
    #[error("mixture weights must be nonnegative and sum to 1 (sum {sum})")]
    BadWeights { sum: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Normalized vector in the two-qubit space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState([Complex64; DIM]);

impl PureState {
    /// Accepts amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: [Complex64; DIM]) -> Result<Self, StateError> {
        if let Some(bad) = amplitudes.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LinalgError::NonFinite { row: bad, col: 0 }.into());
        }
        let norm = norm(&amplitudes);
        if norm == 0.0 {
            return Err(StateError::ZeroVector);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Divides by the norm. The zero vector is still rejected.
    pub fn normalized(amplitudes: [Complex64; DIM]) -> Result<Self, StateError> {
        let n = norm(&amplitudes);
        if n == 0.0 {
            return Err(StateError::ZeroVector);
        }
        Self::new(amplitudes.map(|z| z / n))
    }

    pub fn from_real(amplitudes: [f64; DIM]) -> Result<Self, StateError> {
        Self::new(amplitudes.map(|x| Complex64::new(x, 0.0)))
    }

    /// Basis vector `e_{k+1}` in the product basis (k is 0-based).
    pub fn basis(k: usize) -> Self {
        let mut a = [ZERO; DIM];
        a[k] = ONE;
        Self(a)
    }

    /// `x ⊗ y` for single-qubit vectors; both are normalized first.
    pub fn product(x: [Complex64; 2], y: [Complex64; 2]) -> Result<Self, StateError> {
        Self::normalized([x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]])
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn to_column(&self) -> CMatrix {
        CMatrix::column(&self.0)
    }

    /// Applies a 4×4 matrix, renormalizing the result. Intended for unitaries.
    pub fn transformed(&self, u: &CMatrix) -> Result<Self, StateError> {
        if u.rows() != DIM || u.cols() != DIM {
            return Err(StateError::Dimension { expected: "4x4 operator", got: format!("{}x{}", u.rows(), u.cols()) });
        }
        let out = u.apply(&self.0);
        Self::normalized([out[0], out[1], out[2], out[3]])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Equality up to a global phase: `1 - |⟨a|b⟩| ≤ tol`.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        1.0 - self.inner(other).norm() <= tol
    }
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// The 2×2 matrix `c` with `v = Σ c_ij e_i ⊗ e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffMatrix(CMatrix);

impl CoeffMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn det(&self) -> Complex64 {
        det2(&self.0).expect("coefficient matrix is 2x2")
    }
}

pub fn coeff_matrix(v: &PureState) -> CoeffMatrix {
    let a = v.amplitudes();
    CoeffMatrix(CMatrix::from_rows(&[[a[0], a[1]], [a[2], a[3]]]))
}

/// A pure state is a product state iff `det c = 0`.
pub fn is_separable_pure(v: &PureState, tol: f64) -> bool {
    coeff_matrix(v).det().norm() <= tol
}

/// Certified 4×4 density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `U ρ U†`, revalidated.
    pub fn conjugated(&self, u: &CMatrix, tol: f64) -> Result<Self, StateError> {
        validate_state(&(&(u * &self.0) * &u.adjoint()), tol)
    }

    /// Maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self(CMatrix::identity(DIM).scale_re(0.25))
    }
}

/// `ρ = v v†`.
pub fn density_from_pure(v: &PureState) -> DensityMatrix {
    let col = v.to_column();
    DensityMatrix(&col * &col.adjoint())
}

/// Checks Hermiticity, unit trace and positivity, each within `tol`.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero and the matrix rebuilt
/// from its spectrum; a Hermitian input that is already PSD is kept as given
/// up to symmetrization.
pub fn validate_state(m: &CMatrix, tol: f64) -> Result<DensityMatrix, StateError> {
    if m.rows() != DIM || m.cols() != DIM {
        return Err(StateError::Dimension { expected: "4x4 density matrix", got: format!("{}x{}", m.rows(), m.cols()) });
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(StateError::NotHermitian { deviation, tol });
    }
    let trace = m.trace().re;
    let error = (trace - 1.0).abs();
    if error > tol {
        return Err(StateError::TraceNotOne { trace, error, tol });
    }
    let herm = m.hermitian_part();
    let eig = hermitian_eig(&herm, tol)?;
    let min_eigenvalue = eig.min_value();
    if min_eigenvalue < -tol {
        return Err(StateError::NotPositive { min_eigenvalue, tol });
    }
    if min_eigenvalue < 0.0 {
        return Ok(DensityMatrix(eig.reconstruct_with(|l| Complex64::new(l.max(0.0), 0.0))));
    }
    Ok(DensityMatrix(herm))
}

/// `Σ w_i ρ¹_i ⊗ ρ²_i` from single-qubit factors, validated as a state.
///
/// This is the constructive form of a separable mixed state; no test for
/// separability of an arbitrary ρ is provided.
pub fn separable_mixture(terms: &[(f64, CMatrix, CMatrix)], tol: f64) -> Result<DensityMatrix, StateError> {
    let sum: f64 = terms.iter().map(|t| t.0).sum();
    if terms.iter().any(|t| t.0 < 0.0) || (sum - 1.0).abs() > tol {
        return Err(StateError::BadWeights { sum });
    }
    let mut acc = CMatrix::zeros(DIM, DIM);
    for (w, a, b) in terms {
        if a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2 {
            return Err(StateError::Dimension { expected: "2x2 single-qubit factor", got: format!("{}x{}", a.rows(), a.cols()) });
        }
        acc = &acc + &kron(a, b).scale_re(*w);
    }
    validate_state(&acc, tol)
}

/// Convex sum `Σ w_i ρ_i` of two-qubit states.
pub fn mixture(terms: &[(f64, &DensityMatrix)], tol: f64) -> Result<DensityMatrix, StateError> {
    let sum: f64 = terms.iter().map(|t| t.0).sum();
    if terms.iter().any(|t| t.0 < 0.0) || (sum - 1.0).abs() > tol {
        return Err(StateError::BadWeights { sum });
    }
    let mut acc = CMatrix::zeros(DIM, DIM);
    for (w, rho) in terms {
        acc = &acc + &rho.matrix().scale_re(*w);
    }
    validate_state(&acc, tol)
}

/// Row-major flattening of a 4×4 matrix: `r[4m + n] = ρ[m][n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVector([Complex64; LIOUVILLE_DIM]);

impl LiouvilleVector {
    pub fn new(components: [Complex64; LIOUVILLE_DIM]) -> Self {
        Self(components)
    }

    pub fn from_slice(components: &[Complex64]) -> Result<Self, StateError> {
        let arr: [Complex64; LIOUVILLE_DIM] = components
            .try_into()
            .map_err(|_| StateError::Dimension { expected: "16-component vector", got: format!("{} components", components.len()) })?;
        Ok(Self(arr))
    }

    pub fn components(&self) -> &[Complex64; LIOUVILLE_DIM] {
        &self.0
    }
}

/// 0-based Liouville index of matrix entry `(m, n)`.
pub fn liouville_index(m: usize, n: usize) -> usize {
    m * DIM + n
}

pub fn vectorize(rho: &DensityMatrix) -> LiouvilleVector {
    vectorize_matrix(rho.matrix())
}

/// Flat copy of any 4×4 matrix's storage.
pub fn vectorize_matrix(m: &CMatrix) -> LiouvilleVector {
    assert!(m.rows() == DIM && m.cols() == DIM, "vectorize needs a 4x4 matrix");
    LiouvilleVector::from_slice(m.as_slice()).expect("16 entries")
}

/// Inverse of [`vectorize`]. The result is not validated.
pub fn devectorize(r: &LiouvilleVector) -> CMatrix {
    CMatrix::new(DIM, DIM, r.0.to_vec()).expect("16 finite entries")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`
    PsiMinus,
    /// `(|00⟩ + i|11⟩)/√2`, reached by the control Hamiltonian at `t = π/(4y)`.
    PhiI,
}

impl BellKind {
    pub const ALL: [BellKind; 5] =
        [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiI];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
            BellKind::PhiI => "phi_i",
        }
    }

    /// 0-based basis levels carrying the state's amplitude.
    pub fn support(self) -> (usize, usize) {
        match self {
            BellKind::PhiPlus | BellKind::PhiMinus | BellKind::PhiI => (0, 3),
            BellKind::PsiPlus | BellKind::PsiMinus => (1, 2),
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown Bell state `{s}` (expected one of phi_plus, phi_minus, psi_plus, psi_minus, phi_i)"))
    }
}

pub fn bell_state(kind: BellKind) -> PureState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let a = match kind {
        BellKind::PhiPlus => [h, ZERO, ZERO, h],
        BellKind::PhiMinus => [h, ZERO, ZERO, -h],
        BellKind::PsiPlus => [ZERO, h, h, ZERO],
        BellKind::PsiMinus => [ZERO, h, -h, ZERO],
        BellKind::PhiI => [h, ZERO, ZERO, h * Complex64::new(0.0, 1.0)],
    };
    PureState(a)
}
