//! Seeded random ensembles of states, Hamiltonians and local unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{expm_hermitian_scaled, kron, CMatrix};
use crate::state::{density_from_pure, mixture, DensityMatrix, PureState, DEFAULT_TOL, DIM};

/// Environment variable consulted when no explicit seed is given.
pub const SEED_ENV: &str = "LINDQBIT_SEED";
pub const DEFAULT_SEED: u64 = 0x5EED_2009;

/// Explicit seed, else `LINDQBIT_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()))
        .unwrap_or(DEFAULT_SEED)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state (normalized complex Gaussian vector).
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let a = [(); DIM].map(|_| complex_gaussian(rng));
        if let Ok(v) = PureState::normalized(a) {
            return v;
        }
    }
}

/// Convex combination of 1–4 random pure projectors with flat Dirichlet weights.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let k = rng.gen_range(1..=4);
    random_mixture(rng, k)
}

/// Convex combination of `k` random pure projectors with flat Dirichlet weights.
pub fn random_mixture<R: Rng + ?Sized>(rng: &mut R, k: usize) -> DensityMatrix {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let states: Vec<DensityMatrix> = (0..k).map(|_| density_from_pure(&random_pure(rng))).collect();
    let terms: Vec<(f64, &DensityMatrix)> = raw.iter().map(|w| w / total).zip(&states).collect();
    mixture(&terms, DEFAULT_TOL).expect("convex sum of projectors is a state")
}

/// Hermitian matrix with standard complex Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    CMatrix::new(n, n, data).expect("finite").hermitian_part()
}

/// Arbitrary complex matrix with entries uniform in the unit square.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    CMatrix::new(rows, cols, data).expect("finite")
}

/// `exp(iH)` for a random Hermitian 2×2 `H`.
pub fn random_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let h = random_hermitian(rng, 2).scale_re(2.0);
    expm_hermitian_scaled(&h, Complex64::new(0.0, 1.0)).expect("Hermitian generator")
}

/// `U1 ⊗ U2` with independent random single-qubit unitaries.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let u1 = random_unitary_2(rng);
    let u2 = random_unitary_2(rng);
    kron(&u1, &u2)
}
