//! Concurrence and entanglement of formation for two qubits.

use thiserror::Error;

use crate::linalg::{hermitian_eig, kron, pauli, CMatrix, LinalgError};
use crate::state::{coeff_matrix, DensityMatrix, PureState, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error("concurrence {0} is outside [0, 1]")]
    Domain(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Slack allowed outside `[0, 1]` before [`entanglement_of_formation`] rejects its input.
pub const CONCURRENCE_DOMAIN_SLACK: f64 = 1e-12;

/// The real involution `σ_y ⊗ σ_y`.
#[derive(Debug, Clone)]
pub struct SpinFlip(CMatrix);

impl SpinFlip {
    pub fn new() -> Self {
        Self(kron(&pauli::sigma_y(), &pauli::sigma_y()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// `(σy⊗σy) m (σy⊗σy)`.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        &(&self.0 * m) * &self.0
    }
}

impl Default for SpinFlip {
    fn default() -> Self {
        Self::new()
    }
}

/// Wootters concurrence together with the spectrum it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending.
    pub lambdas: [f64; 4],
}

impl ConcurrenceResult {
    pub fn from_lambdas(lambdas: [f64; 4]) -> Self {
        let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
        Self { value, lambdas }
    }
}

/// `C = 2|det c|`.
pub fn concurrence_pure(v: &PureState) -> f64 {
    2.0 * coeff_matrix(v).det().norm()
}

/// The spin-flipped state `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &DensityMatrix) -> CMatrix {
    SpinFlip::new().conjugate(&rho.matrix().conj())
}

/// Eigenvalues of ρ at or below this are treated as exact zeros when forming
/// `√ρ`; square roots would otherwise lift roundoff to ~1e-8.
pub const RANK_FLOOR: f64 = 1e-14;

/// Wootters concurrence `max(λ1 − λ2 − λ3 − λ4, 0)`.
///
/// `ρ ρ̃` is not Hermitian, but it is similar to the PSD matrix `√ρ ρ̃ √ρ`,
/// whose eigenvalues are found with the Hermitian solver instead. That matrix
/// is assembled in the eigenbasis of ρ (`ρ = V D V†`), where it reads
/// `√D V† ρ̃ V √D` and the kernel of ρ stays exactly zero.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<ConcurrenceResult, EntanglementError> {
    let eig = hermitian_eig(rho.matrix(), DEFAULT_TOL)?;
    let min = eig.min_value();
    if min < -DEFAULT_TOL {
        return Err(LinalgError::NotPsd { min_eigenvalue: min, tol: DEFAULT_TOL }.into());
    }
    let root: Vec<f64> = eig.values.iter().map(|&d| if d <= RANK_FLOOR { 0.0 } else { d.sqrt() }).collect();
    let v = &eig.vectors;
    let flipped = &(&v.adjoint() * &spin_flip(rho)) * v;
    let mut r = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            r[(i, j)] = flipped[(i, j)] * (root[i] * root[j]);
        }
    }
    let spectrum = hermitian_eig(&r.hermitian_part(), DEFAULT_TOL)?;
    let min = spectrum.min_value();
    if min < -DEFAULT_TOL {
        return Err(LinalgError::NotPsd { min_eigenvalue: min, tol: DEFAULT_TOL }.into());
    }
    let mut lambdas = [0.0; 4];
    for (slot, &ev) in lambdas.iter_mut().zip(spectrum.values.iter().rev()) {
        *slot = ev.max(0.0).sqrt();
    }
    Ok(ConcurrenceResult::from_lambdas(lambdas))
}

/// Binary entropy `−x log2 x − (1−x) log2 (1−x)`, zero at both endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `E = h((1 + √(1 − C²)) / 2)` with `h` the binary entropy.
pub fn entanglement_of_formation(c: f64) -> Result<f64, EntanglementError> {
    if !(-CONCURRENCE_DOMAIN_SLACK..=1.0 + CONCURRENCE_DOMAIN_SLACK).contains(&c) {
        return Err(EntanglementError::Domain(c));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}
