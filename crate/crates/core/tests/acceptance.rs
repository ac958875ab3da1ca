//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The random ensembles use `LINDQBIT_SEED` when set.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lindqbit::dynamics::{
    check_dephasing_constraints, control_hamiltonian, dephasing_from_amplitudes, dissipator_from_rates,
    evolve_pure_series, lindblad_dissipator, liouvillian_hamiltonian, propagate, LindbladSpec, RateSet, TimeConvention,
};
use lindqbit::entanglement::{concurrence_mixed, concurrence_pure};
use lindqbit::linalg::{hermitian_eig, kron};
use lindqbit::random::{
    complex_gaussian, random_density, random_hermitian, random_local_unitary, random_matrix, random_pure, resolve_seed,
};
use lindqbit::scenario::time_grid;
use lindqbit::state::{bell_state, density_from_pure, validate_state, vectorize_matrix, BellKind, PureState};
use lindqbit::{CMatrix, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng_for(seed: u64, criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ criterion.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn separability() -> Outcome {
    let v = PureState::normalized([1.0, 3.0, 2.0, 6.0].map(|x| Complex64::new(x, 0.0))).unwrap();
    let c_sep = concurrence_pure(&v);
    let c_bell = concurrence_pure(&bell_state(BellKind::PhiPlus));
    let pass = c_sep.abs() <= 1e-12 && (c_bell - 1.0).abs() <= 1e-12;
    outcome(pass, format!("C[1,3,2,6]/sqrt50 = {c_sep:.3e}, C(phi+) - 1 = {:.3e} (tol 1e-12)", c_bell - 1.0))
}

fn figure1_column(energies: [f64; 3]) -> Vec<(f64, f64)> {
    let [x1, x2, x3] = energies;
    let h = control_hamiltonian(x1, x2, x3, 1.0).matrix();
    let times = time_grid(PI, 400);
    let states = evolve_pure_series(&h, &PureState::basis(0), &times, TimeConvention::Positive).unwrap();
    times.into_iter().zip(states.iter().map(concurrence_pure)).collect()
}

fn unitary_production(seed: u64) -> Outcome {
    let base = figure1_column([0.0; 3]);
    let err = base.iter().map(|&(t, c)| (c - (2.0 * t).sin().abs()).abs()).fold(0.0, f64::max);

    let h = control_hamiltonian(0.0, 0.0, 0.0, 1.0).matrix();
    let at = |t: f64| {
        concurrence_pure(&evolve_pure_series(&h, &PureState::basis(0), &[t], TimeConvention::Positive).unwrap()[0])
    };
    let peak = (at(PI / 4.0) - 1.0).abs();
    let zero = at(PI / 2.0).abs();

    let mut rng = rng_for(seed, 2);
    let mut shift = 0.0f64;
    for _ in 0..10 {
        let energies = [(); 3].map(|_| rng.gen_range(-5.0..5.0));
        let col = figure1_column(energies);
        shift = shift.max(col.iter().zip(&base).map(|(a, b)| (a.1 - b.1).abs()).fold(0.0, f64::max));
    }
    let pass = err <= 1e-9 && peak <= 1e-9 && zero <= 1e-9 && shift <= 1e-9;
    outcome(
        pass,
        format!("max|C - |sin 2t|| = {err:.3e}, |C(pi/4) - 1| = {peak:.3e}, C(pi/2) = {zero:.3e}, random x shift = {shift:.3e} (tol 1e-9)"),
    )
}

fn concurrence_trajectory(l: &lindqbit::dynamics::SuperOperator, rho0: &CMatrix, times: &[f64]) -> Vec<f64> {
    propagate(l, rho0, times)
        .unwrap()
        .iter()
        .map(|m| concurrence_mixed(&validate_state(m, 1e-8).unwrap()).unwrap().value)
        .collect()
}

fn bell_dephasing() -> Outcome {
    let rho0 = density_from_pure(&bell_state(BellKind::PhiPlus)).into_matrix();
    let times = time_grid(5.0, 400);
    let l = dissipator_from_rates(&RateSet::pure_dephasing(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap());
    let err = concurrence_trajectory(&l, &rho0, &times)
        .iter()
        .zip(&times)
        .map(|(c, t)| (c - (-t).exp()).abs())
        .fold(0.0, f64::max);
    let stable = dissipator_from_rates(&RateSet::pure_dephasing(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap());
    let drift = concurrence_trajectory(&stable, &rho0, &times).iter().map(|c| (c - 1.0).abs()).fold(0.0, f64::max);
    outcome(err <= 1e-8 && drift <= 1e-9, format!("max|C - e^-t| = {err:.3e} (tol 1e-8), Gamma14 = 0 drift = {drift:.3e} (tol 1e-9)"))
}

fn lindblad_rates_equivalence(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 4);
    let (mut diff, mut resid) = (0.0f64, 0.0f64);
    let mut all_hold = true;
    for _ in 0..1000 {
        let a = [(); 4].map(|_| complex_gaussian(&mut rng));
        let direct = lindblad_dissipator(&LindbladSpec::diagonal(a)).unwrap();
        let rates = dephasing_from_amplitudes(a);
        let via_rates = dissipator_from_rates(&rates);
        diff = diff.max(direct.matrix().max_abs_diff(via_rates.matrix()));
        let [r1, r2] = lindqbit::dynamics::dephasing_constraint_residuals(&rates);
        resid = resid.max(r1.abs()).max(r2.abs());
        all_hold &= check_dephasing_constraints(&rates, 1e-12);
    }
    outcome(
        diff <= 1e-13 && resid <= 1e-12 && all_hold,
        format!("max entry diff = {diff:.3e} (tol 1e-13), max constraint residual = {resid:.3e} (tol 1e-12)"),
    )
}

fn local_unitary_invariance(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 5);
    let mut pure_shift = 0.0f64;
    for _ in 0..1000 {
        let v = random_pure(&mut rng);
        let u = random_local_unitary(&mut rng);
        pure_shift = pure_shift.max((concurrence_pure(&v.transformed(&u).unwrap()) - concurrence_pure(&v)).abs());
    }
    let mut mixed_shift = 0.0f64;
    for _ in 0..200 {
        let rho = random_density(&mut rng);
        let u = random_local_unitary(&mut rng);
        let moved = rho.conjugated(&u, 1e-10).unwrap();
        let d = concurrence_mixed(&moved).unwrap().value - concurrence_mixed(&rho).unwrap().value;
        mixed_shift = mixed_shift.max(d.abs());
    }
    outcome(
        pure_shift <= 1e-10 && mixed_shift <= 1e-9,
        format!("pure shift = {pure_shift:.3e} (tol 1e-10), mixed shift = {mixed_shift:.3e} (tol 1e-9)"),
    )
}

fn vectorization_identity(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 6);
    let mut err = 0.0f64;
    for _ in 0..1000 {
        let a = random_matrix(&mut rng, 4, 4);
        let b = random_matrix(&mut rng, 4, 4);
        let rho = random_density(&mut rng);
        let lhs = vectorize_matrix(&(&(&a * rho.matrix()) * &b));
        let rhs = kron(&a, &b.transpose()).apply(vectorize_matrix(rho.matrix()).components());
        err = err.max(lhs.components().iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max));
    }
    outcome(err <= 1e-12, format!("max|vec(A rho B) - (A (x) B^T) vec(rho)| = {err:.3e} (tol 1e-12)"))
}

fn physicality(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 7);
    let (mut trace_err, mut min_eig) = (0.0f64, f64::INFINITY);
    for _ in 0..200 {
        let h = random_hermitian(&mut rng, 4);
        let k = rng.gen_range(1..=3);
        let ops: Vec<CMatrix> = (0..k).map(|_| random_matrix(&mut rng, 4, 4)).collect();
        let l = &liouvillian_hamiltonian(&h).unwrap() + &lindblad_dissipator(&LindbladSpec::Operators(ops)).unwrap();
        let rho0 = random_density(&mut rng);
        let t_max = rng.gen_range(0.5..5.0);
        for m in propagate(&l, rho0.matrix(), &time_grid(t_max, 50)).unwrap() {
            trace_err = trace_err.max((m.trace() - Complex64::new(1.0, 0.0)).norm());
            min_eig = min_eig.min(hermitian_eig(&m.hermitian_part(), f64::INFINITY).unwrap().min_value());
        }
    }
    outcome(
        trace_err <= 1e-10 && min_eig >= -1e-9,
        format!("max trace error = {trace_err:.3e} (tol 1e-10), min eigenvalue = {min_eig:.3e} (tol -1e-9)"),
    )
}

fn commutation(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 8);
    let rho0 = density_from_pure(&bell_state(BellKind::PhiPlus)).into_matrix();
    let times = time_grid(5.0, 50);
    let (mut comm, mut diff) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let a = [(); 4].map(|_| complex_gaussian(&mut rng));
        let ld = dissipator_from_rates(&dephasing_from_amplitudes(a));
        let h = CMatrix::from_real_diag(&[(); 4].map(|_| rng.gen_range(-5.0..5.0)));
        let lh = liouvillian_hamiltonian(&h).unwrap();
        comm = comm.max(lh.commutator_norm(&ld));
        let with_h = concurrence_trajectory(&(&lh + &ld), &rho0, &times);
        let without = concurrence_trajectory(&ld, &rho0, &times);
        diff = diff.max(with_h.iter().zip(&without).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    outcome(
        comm <= 1e-13 && diff <= 1e-9,
        format!("max||[L_H, L_D0]|| = {comm:.3e} (tol 1e-13), concurrence diff = {diff:.3e} (tol 1e-9)"),
    )
}

fn pure_mixed_reduction(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 9);
    let mut err = 0.0f64;
    for _ in 0..1000 {
        let v = random_pure(&mut rng);
        let c = concurrence_mixed(&density_from_pure(&v)).unwrap().value;
        err = err.max((c - concurrence_pure(&v)).abs());
    }
    outcome(err <= 1e-9, format!("max|C_mixed(vv*) - C_pure(v)| = {err:.3e} (tol 1e-9)"))
}

fn main() -> ExitCode {
    let seed = resolve_seed(None);
    println!("acceptance suite, seed {seed}");
    let criteria: Vec<Criterion> = vec![
        ("separability criterion", Duration::from_secs(1), Box::new(separability)),
        ("unitary production/decay", Duration::from_secs(1), Box::new(move || unitary_production(seed))),
        ("Bell dephasing", Duration::from_secs(2), Box::new(bell_dephasing)),
        ("Lindblad/rates equivalence", Duration::from_secs(5), Box::new(move || lindblad_rates_equivalence(seed))),
        ("local-unitary invariance", Duration::from_secs(10), Box::new(move || local_unitary_invariance(seed))),
        ("vectorization identity", Duration::from_secs(10), Box::new(move || vectorization_identity(seed))),
        ("physicality preservation", Duration::from_secs(30), Box::new(move || physicality(seed))),
        ("commutation property", Duration::from_secs(30), Box::new(move || commutation(seed))),
        ("pure/mixed reduction", Duration::from_secs(10), Box::new(move || pure_mixed_reduction(seed))),
    ];
    let total = Instant::now();
    let mut failures = 0;
    for (name, budget, check) in &criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *budget;
        failures += usize::from(!pass);
        println!(
            "{} {name}: {} [{:.3}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    let elapsed = total.elapsed();
    let within_minute = elapsed <= Duration::from_secs(60);
    failures += usize::from(!within_minute);
    println!("{} full suite: {:.3}s (budget 60s)", if within_minute { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    println!("{} of {} criteria passed", criteria.len() + 1 - failures, criteria.len() + 1);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
