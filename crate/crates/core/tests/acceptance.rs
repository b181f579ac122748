//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{c, kron_pauli, random_density, random_hermitian, random_letters, rng};
use num_complex::Complex64;
use rand::Rng;
use zenoctl_core::dense::{self, StateVector};
use zenoctl_core::dissipation::{self, DensityMatrix};
use zenoctl_core::models;
use zenoctl_core::pauli::{PauliString, PauliSum};
use zenoctl_core::purification;
use zenoctl_core::zeno;

mod tol {
    pub const CLOSURE: f64 = 1e-10;
    pub const COMMUTATOR_IDENTITY: f64 = 1e-12;
    pub const PURIFIED_COMMUTATOR: f64 = 1e-11;
    pub const PURIFIED_RECOVERY: f64 = 1e-12;
    pub const RATE_RATIO: (f64, f64) = (1.5, 2.5);
    pub const INTEGRATOR_VS_CLOSED_FORM: f64 = 1e-6;
    pub const LONG_TIME_TRACE_DISTANCE: f64 = 1e-4;
    pub const LADDER_FLUCTUATION: f64 = 1.10;
    pub const GENERICITY_MIN_FULL: usize = 48;
    pub const ORACLE_COEFFICIENT: f64 = 1e-13;
}

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail.push_str(&format!(" [{:.2} s", elapsed.as_secs_f64()));
    if let Some(limit) = limit {
        o.detail.push_str(&format!(" / limit {} s", limit.as_secs()));
        if elapsed > limit {
            o.pass = false;
        }
    }
    o.detail.push(']');
    o
}

fn intro_dims() -> Outcome {
    let m = models::intro_example().unwrap();
    let naked = m.naked_closure(tol::CLOSURE).unwrap().dimension;
    let zeno = m.zeno_closure(tol::CLOSURE).unwrap().dimension;
    outcome(naked == 2 && zeno == 3, format!("naked dim {naked} (want 2), Zeno dim {zeno} (want 3)"))
}

fn commutator_identity() -> Outcome {
    let printed = zeno::intro_commutator_residual(Complex64::new(0.0, 2.0 / 3.0)).unwrap();
    let flipped = zeno::intro_commutator_residual(Complex64::new(0.0, -2.0 / 3.0)).unwrap();
    outcome(
        printed <= tol::COMMUTATOR_IDENTITY,
        format!(
            "|[PX1X2P, PZ1Z2P] - (2i/3) P Y2|_F = {printed:.3e} (tol {:.0e}); with -2i/3 the residual is {flipped:.3e}",
            tol::COMMUTATOR_IDENTITY
        ),
    )
}

fn example_a_dims() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, want) in [(3, 15), (4, 63)] {
        let m = models::example_a(n).unwrap();
        let naked = m.naked_closure(tol::CLOSURE).unwrap().dimension;
        let zeno = m.zeno_closure(tol::CLOSURE).unwrap().traceless_dimension;
        pass &= naked == 2 && zeno == want;
        parts.push(format!("n={n}: naked {naked} (want 2), Zeno traceless {zeno} (want {want})"));
    }
    outcome(pass, parts.join("; "))
}

fn example_b_dims() -> Outcome {
    let m = models::example_b(5).unwrap();
    let naked = m.naked_closure(tol::CLOSURE).unwrap().dimension;
    let zeno = m.zeno_closure(tol::CLOSURE).unwrap().traceless_dimension;
    outcome(naked == 3 && zeno == 63, format!("naked {naked} (want 3), Zeno traceless {zeno} (want 63)"))
}

fn purification_checks() -> Outcome {
    let mut r = rng(SEED);
    let (mut worst_comm, mut worst_rec) = (0.0f64, 0.0f64);
    for d in [2, 4, 8] {
        for _ in 0..100 {
            let h1 = random_hermitian(&mut r, d);
            let h2 = random_hermitian(&mut r, d);
            let rep = purification::verify_purification(&purification::purify_pair(&h1, &h2).unwrap()).unwrap();
            worst_comm = worst_comm.max(rep.commutator_norm);
            worst_rec = worst_rec.max(rep.recovery_error_1).max(rep.recovery_error_2);
        }
    }
    let (x, z) = models::purification_demo().unwrap();
    let pair = purification::purify_pair(&x.to_dense().unwrap(), &z.to_dense().unwrap()).unwrap();
    let contrast = purification::closure_contrast(&pair, tol::CLOSURE).unwrap();
    let pass = worst_comm <= tol::PURIFIED_COMMUTATOR
        && worst_rec <= tol::PURIFIED_RECOVERY
        && (contrast.dim_original, contrast.dim_purified) == (3, 2);
    outcome(
        pass,
        format!(
            "300 pairs: max commutator {worst_comm:.3e}, max recovery {worst_rec:.3e}; (X, Z) contrast ({}, {})",
            contrast.dim_original, contrast.dim_purified
        ),
    )
}

fn zeno_convergence() -> Outcome {
    let m = models::example_a(3).unwrap();
    let h = &m.dense_hamiltonians().unwrap()[1];
    let p = m.projection().unwrap();
    let ms = [8, 16, 32, 64, 128, 256];
    let pts = zeno::zeno_convergence(h, &p, 1.0, &ms, None).unwrap();
    let decreasing = pts.windows(2).all(|w| w[1].error < w[0].error);
    let ratio = pts[4].error / pts[5].error;
    let errors: Vec<String> = pts.iter().map(|pt| format!("{}:{:.3e}", pt.m, pt.error)).collect();
    outcome(
        decreasing && (tol::RATE_RATIO.0..=tol::RATE_RATIO.1).contains(&ratio),
        format!("errors [{}], error(128)/error(256) = {ratio:.4}", errors.join(" ")),
    )
}

fn dissipation_checks() -> Outcome {
    let mut r = rng(SEED);
    let mut worst = 0.0f64;
    for gamma in [0.5, 1.0, 3.0] {
        for t in [0.1, 1.0, 5.0] {
            let rho0 = DensityMatrix::new(random_density(&mut r, 4)).unwrap();
            let model = dissipation::amplitude_damping_model(1, 2, gamma, None).unwrap();
            let got = dissipation::evolve_lindblad(&model, &rho0, t, 2000).unwrap();
            let exact = dissipation::analytic_damping_solution(&rho0, 1, 2, gamma, t).unwrap();
            worst = worst.max(dense::max_abs_diff(got.matrix(), exact.matrix()));
        }
    }
    let rho0 = DensityMatrix::new(random_density(&mut r, 4)).unwrap();
    let model = dissipation::amplitude_damping_model(1, 2, 1.0, None).unwrap();
    let late = dissipation::evolve_lindblad(&model, &rho0, 20.0, 2000).unwrap();
    let (phi, _) = zeno::phi_states();
    let reduced = dense::partial_trace_qubit(rho0.matrix(), 1, 2).unwrap();
    let target = dense::outer(&phi, &phi).kronecker(&reduced);
    let long = dense::trace_distance(late.matrix(), &target);
    outcome(
        worst <= tol::INTEGRATOR_VS_CLOSED_FORM && long <= tol::LONG_TIME_TRACE_DISTANCE,
        format!("max entrywise deviation {worst:.3e}; trace distance at gamma t = 20: {long:.3e}"),
    )
}

fn strong_damping() -> Outcome {
    let m = models::example_a(3).unwrap();
    let h = m.dense_hamiltonians().unwrap()[1].clone();
    let psi = StateVector::from_element(4, c(0.5, 0.0));
    let gammas = [20.0, 50.0, 100.0, 200.0];
    let ladder = dissipation::strong_damping_zeno_check(&h, 1, 3, &psi, 1.0, &gammas, None).unwrap();
    let monotone = ladder.windows(2).all(|w| w[1].trace_distance <= tol::LADDER_FLUCTUATION * w[0].trace_distance);
    let pass = monotone && ladder[3].trace_distance < ladder[0].trace_distance;
    let pts: Vec<String> = ladder.iter().map(|p| format!("{}:{:.3e}", p.gamma, p.trace_distance)).collect();
    outcome(pass, format!("trace distance by gamma [{}]", pts.join(" ")))
}

fn genericity() -> Outcome {
    let s = models::genericity_sweep(3, 50, SEED, tol::CLOSURE, false).unwrap();
    let at_15 = s.trials.iter().filter(|t| t.zeno_dim == 15).count();
    outcome(
        at_15 >= tol::GENERICITY_MIN_FULL,
        format!(
            "{at_15}/{} trials reach traceless dim 15 (full verdicts {}), min witness {:.3e}",
            s.total, s.full_count, s.min_smallest_singular_value
        ),
    )
}

fn pauli_oracles() -> Outcome {
    let mut r = rng(SEED);
    let mut phase_failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.random_range(1..=5);
        let a = random_letters(&mut r, n);
        let b = random_letters(&mut r, n);
        let (phase, prod) = a.parse::<PauliString>().unwrap().mul(&b.parse().unwrap()).unwrap();
        if kron_pauli(&prod.to_string()) * phase.to_complex() != kron_pauli(&a) * kron_pauli(&b) {
            phase_failures += 1;
        }

        let k = r.random_range(1..=3);
        let ta: Vec<(f64, String)> = (0..k).map(|_| (r.random_range(-2.0..2.0), random_letters(&mut r, n))).collect();
        let tb: Vec<(f64, String)> = (0..k).map(|_| (r.random_range(-2.0..2.0), random_letters(&mut r, n))).collect();
        let build = |t: &[(f64, String)]| {
            let refs: Vec<(f64, &str)> = t.iter().map(|(x, s)| (*x, s.as_str())).collect();
            PauliSum::from_terms(n, &refs).unwrap()
        };
        let oracle = |t: &[(f64, String)]| {
            t.iter().fold(dense::DenseOperator::zeros(1 << n, 1 << n), |acc, (x, s)| acc + kron_pauli(s) * c(*x, 0.0))
        };
        let got = build(&ta).commutator(&build(&tb)).unwrap().to_dense().unwrap();
        let want = dense::commutator(&oracle(&ta), &oracle(&tb));
        worst = worst.max(dense::max_abs_diff(&got, &want));
    }
    outcome(
        phase_failures == 0 && worst <= tol::ORACLE_COEFFICIENT,
        format!("1000 products: {phase_failures} phase mismatches; 1000 commutators: max deviation {worst:.3e}"),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Option<u64>, Check); 10] = [
        ("intro example closure dimensions", Some(1), intro_dims),
        ("intro commutator identity", None, commutator_identity),
        ("example A dimensions", Some(30), example_a_dims),
        ("example B dimensions", Some(120), example_b_dims),
        ("purification", None, purification_checks),
        ("Zeno product convergence", None, zeno_convergence),
        ("damping integrator vs closed form", None, dissipation_checks),
        ("strong-damping Zeno ladder", None, strong_damping),
        ("genericity sweep", Some(300), genericity),
        ("Pauli algebra oracles", None, pauli_oracles),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let o = timed(limit.map(Duration::from_secs), check);
        println!("{} {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
