//! Reproduction suite: every built-in claim as a named PASS/FAIL check.

use num_complex::Complex64;
use zenoctl_core::dense::{self, StateVector};
use zenoctl_core::dissipation::{self, DensityMatrix};
use zenoctl_core::models;
use zenoctl_core::purification;
use zenoctl_core::zeno;
use zenoctl_core::Result;

use crate::commands::RunConfig;
use crate::report::{fmt_num, Report};

struct Claim {
    pass: bool,
    detail: String,
}

fn claim(pass: bool, detail: String) -> Result<Claim> {
    Ok(Claim { pass, detail })
}

fn intro(cfg: RunConfig) -> Result<Claim> {
    let m = models::intro_example()?;
    let naked = m.naked_closure(cfg.tol)?.dimension;
    let zeno = m.zeno_closure(cfg.tol)?.dimension;
    claim(naked == 2 && zeno == 3, format!("naked {naked} (want 2), Zeno {zeno} (want 3)"))
}

fn commutator_identity(_: RunConfig) -> Result<Claim> {
    let corrected = zeno::intro_commutator_residual(Complex64::new(0.0, -2.0 / 3.0))?;
    let printed = zeno::intro_commutator_residual(Complex64::new(0.0, 2.0 / 3.0))?;
    claim(
        corrected <= 1e-12,
        format!(
            "|[PX1X2P, PZ1Z2P] + (2i/3) P Y2|_F = {}; with coefficient +2i/3 the residual is {}",
            fmt_num(corrected),
            fmt_num(printed)
        ),
    )
}

fn example_a(cfg: RunConfig) -> Result<Claim> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [3, 4] {
        let m = models::example_a(n)?;
        let naked = m.naked_closure(cfg.tol)?.dimension;
        let zeno = m.zeno_closure(cfg.tol)?.traceless_dimension;
        pass &= naked == m.expected_naked_dim && zeno == m.expected_zeno_dim;
        parts.push(format!("n={n}: naked {naked}, Zeno traceless {zeno} (want {})", m.expected_zeno_dim));
    }
    claim(pass, parts.join("; "))
}

fn example_b(cfg: RunConfig) -> Result<Claim> {
    let m = models::example_b(5)?;
    let naked = m.naked_closure(cfg.tol)?.dimension;
    let zeno = m.zeno_closure(cfg.tol)?.traceless_dimension;
    claim(naked == 3 && zeno == 63, format!("n=5: naked {naked} (want 3), Zeno traceless {zeno} (want 63)"))
}

fn purification_check(cfg: RunConfig) -> Result<Claim> {
    let (mut comm, mut rec) = (0.0f64, 0.0f64);
    let mut k = 0u64;
    for d in [2, 4, 8] {
        for _ in 0..100 {
            let h1 = models::random_hermitian(d, models::trial_seed(cfg.seed, k));
            let h2 = models::random_hermitian(d, models::trial_seed(cfg.seed, k + 1));
            k += 2;
            let r = purification::verify_purification(&purification::purify_pair(&h1, &h2)?)?;
            comm = comm.max(r.commutator_norm);
            rec = rec.max(r.recovery_error_1).max(r.recovery_error_2);
        }
    }
    let (x, z) = models::purification_demo()?;
    let c = purification::closure_contrast(&purification::purify_pair(&x.to_dense()?, &z.to_dense()?)?, cfg.tol)?;
    claim(
        comm <= 1e-11 && rec <= 1e-12 && (c.dim_original, c.dim_purified) == (3, 2),
        format!(
            "300 pairs: commutator {}, recovery {}; (X, Z) closure {} -> {}",
            fmt_num(comm),
            fmt_num(rec),
            c.dim_original,
            c.dim_purified
        ),
    )
}

fn convergence(_: RunConfig) -> Result<Claim> {
    let m = models::example_a(3)?;
    let h = &m.dense_hamiltonians()?[1];
    let pts = zeno::zeno_convergence(h, &m.projection()?, 1.0, &[8, 16, 32, 64, 128, 256], None)?;
    let decreasing = pts.windows(2).all(|w| w[1].error < w[0].error);
    let ratio = pts[4].error / pts[5].error;
    claim(
        decreasing && (1.5..=2.5).contains(&ratio),
        format!(
            "error(8) {}, error(256) {}, error(128)/error(256) {}",
            fmt_num(pts[0].error),
            fmt_num(pts[5].error),
            fmt_num(ratio)
        ),
    )
}

fn damping(cfg: RunConfig) -> Result<Claim> {
    let mut worst = 0.0f64;
    let mut k = 0u64;
    for gamma in [0.5, 1.0, 3.0] {
        for t in [0.1, 1.0, 5.0] {
            let u = models::haar_unitary(4, models::trial_seed(cfg.seed, k))?;
            k += 1;
            let psi = u.column(0).into_owned();
            let mixed =
                dense::outer(&psi, &psi) * Complex64::new(0.7, 0.0) + dense::identity(4) * Complex64::new(0.075, 0.0);
            let rho0 = DensityMatrix::new(mixed)?;
            let model = dissipation::amplitude_damping_model(1, 2, gamma, None)?;
            let got = dissipation::evolve_lindblad(&model, &rho0, t, 2000)?;
            let exact = dissipation::analytic_damping_solution(&rho0, 1, 2, gamma, t)?;
            worst = worst.max(dense::max_abs_diff(got.matrix(), exact.matrix()));
        }
    }
    claim(worst <= 1e-6, format!("max entrywise deviation {} over 9 (gamma, t) pairs", fmt_num(worst)))
}

fn ladder(_: RunConfig) -> Result<Claim> {
    let m = models::example_a(3)?;
    let h = m.dense_hamiltonians()?[1].clone();
    let psi = StateVector::from_element(4, Complex64::new(0.5, 0.0));
    let pts = dissipation::strong_damping_zeno_check(&h, 1, 3, &psi, 1.0, &[20.0, 50.0, 100.0, 200.0], None)?;
    let monotone = pts.windows(2).all(|w| w[1].trace_distance <= 1.1 * w[0].trace_distance);
    let values: Vec<String> = pts.iter().map(|p| format!("{}:{}", p.gamma, fmt_num(p.trace_distance))).collect();
    claim(
        monotone && pts[3].trace_distance < pts[0].trace_distance,
        format!("trace distance by gamma {}", values.join(" ")),
    )
}

fn genericity(cfg: RunConfig) -> Result<Claim> {
    let s = models::genericity_sweep(3, 50, cfg.seed, cfg.tol, false)?;
    let at_15 = s.trials.iter().filter(|t| t.zeno_dim == 15).count();
    claim(
        at_15 >= 48,
        format!("{at_15}/{} reach traceless dim 15, min witness {}", s.total, fmt_num(s.min_smallest_singular_value)),
    )
}

type ClaimFn = fn(RunConfig) -> Result<Claim>;

const CLAIMS: [(&str, ClaimFn); 9] = [
    ("intro example closure dimensions", intro),
    ("intro commutator identity", commutator_identity),
    ("example A closure dimensions", example_a),
    ("example B closure dimensions", example_b),
    ("purification", purification_check),
    ("Zeno product convergence", convergence),
    ("damping integrator vs closed form", damping),
    ("strong-damping ladder", ladder),
    ("genericity sweep", genericity),
];

pub fn run_paper_suite(cfg: RunConfig) -> Report {
    let mut rep = Report::new("paper-suite");
    rep.field("tol", cfg.tol).field("seed", cfg.seed);
    for (name, f) in CLAIMS {
        match f(cfg) {
            Ok(c) => rep.check(name, c.pass, c.detail),
            Err(e) => rep.check(name, false, format!("error: {e}")),
        };
    }
    rep
}
