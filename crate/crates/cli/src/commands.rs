use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use zenoctl_core::dense::{self, StateVector};
use zenoctl_core::dissipation::{self, DensityMatrix};
use zenoctl_core::lie;
use zenoctl_core::models;
use zenoctl_core::purification;
use zenoctl_core::zeno;

use crate::io::parse_pauli_file;
use crate::report::{fmt_num, Format, Report, Table};
use crate::suite;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "zenoctl",
    version,
    about = "Lie-algebraic controllability of commuting Hamiltonians under Zeno projections"
)]
pub struct Cli {
    /// Relative rank tolerance for Lie closures, in (0, 1).
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tol)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in (0, 1), got {t}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the Lie algebra generated by i H for each input file.
    Closure {
        /// Pauli-sum files, one Hamiltonian each.
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        /// Compress by a projection such as `phi:1` or `phi:1*phi:3` first.
        #[arg(long)]
        project: Option<String>,
    },
    /// Naked and Zeno-projected closure dimensions of a built-in model.
    Zeno {
        /// `intro`, `a:<n>` or `b:<n>`.
        #[arg(long)]
        model: String,
    },
    /// Error of the repeated-projection product against the Zeno limit.
    Convergence {
        #[arg(long, default_value = "a:3")]
        model: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,256")]
        m: Vec<usize>,
        /// 1-based index of the model Hamiltonian (default: the last one).
        #[arg(long)]
        hamiltonian: Option<usize>,
    },
    /// Amplitude damping of qubit 1 toward |phi>, and the strong-damping ladder.
    Damping {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        qubits: usize,
        /// Number of trajectory rows after t = 0.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "20,50,100,200")]
        ladder: Vec<f64>,
        #[arg(long, default_value = "a:3")]
        ladder_model: String,
        #[arg(long, default_value_t = 1.0)]
        ladder_t: f64,
        #[arg(long)]
        no_ladder: bool,
    },
    /// Fraction of random commuting pairs whose compression is fully controllable.
    Genericity {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Compress by a Haar-random rank-d/2 projection instead of `phi:1`.
        #[arg(long)]
        random_projection: bool,
        /// Fail unless at least this many trials are full.
        #[arg(long)]
        min_full: Option<usize>,
    },
    /// Commuting purification of two Hamiltonians on one extra qubit.
    Purify {
        #[arg(long)]
        h1: PathBuf,
        #[arg(long)]
        h2: PathBuf,
    },
    /// Reproduce every built-in claim; exits nonzero if any check fails.
    PaperSuite,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { tol: lie::DEFAULT_TOL, seed: DEFAULT_SEED }
    }
}

pub fn run(command: &Command, cfg: RunConfig) -> Result<Report> {
    match command {
        Command::Closure { input, project } => closure(input, project.as_deref(), cfg),
        Command::Zeno { model } => zeno_dims(model, cfg),
        Command::Convergence { model, t, m, hamiltonian } => convergence(model, *t, m, *hamiltonian),
        Command::Damping { gamma, t, steps, qubits, samples, ladder, ladder_model, ladder_t, no_ladder } => {
            let ladder = if *no_ladder { None } else { Some((ladder.as_slice(), ladder_model.as_str(), *ladder_t)) };
            damping(*gamma, *t, *steps, *qubits, *samples, ladder, cfg)
        }
        Command::Genericity { n, trials, random_projection, min_full } => {
            genericity(*n, *trials, *random_projection, *min_full, cfg)
        }
        Command::Purify { h1, h2 } => purify(h1, h2, cfg),
        Command::PaperSuite => Ok(suite::run_paper_suite(cfg)),
    }
}

fn closure(inputs: &[PathBuf], project: Option<&str>, cfg: RunConfig) -> Result<Report> {
    let sums = inputs.iter().map(|p| parse_pauli_file(p)).collect::<Result<Vec<_>>>()?;
    let n = sums[0].n_qubits();
    ensure!(sums.iter().all(|s| s.n_qubits() == n), "all inputs must act on the same number of qubits");
    let mut hs = sums.iter().map(|s| s.to_dense()).collect::<zenoctl_core::Result<Vec<_>>>()?;
    if let Some(spec) = project {
        let p = zeno::parse_projection_spec(spec, n)?;
        hs = hs.iter().map(|h| p.compress(h)).collect::<zenoctl_core::Result<Vec<_>>>()?;
    }
    let (_, r) = lie::closure_of_hamiltonians(&hs, cfg.tol)?;
    let mut rep = Report::new("closure");
    rep.field("qubits", n)
        .field("projection", project.unwrap_or("none"))
        .field("space_dimension", r.dim_space)
        .field("generators", r.generator_count)
        .field("dimension", r.dimension)
        .field("traceless_dimension", r.traceless_dimension)
        .field("full_u", r.is_full_u)
        .field("full_su", r.is_full_su)
        .field("smallest_singular_value", r.smallest_singular_value)
        .field("rounds", r.rounds)
        .field("tol", cfg.tol);
    Ok(rep)
}

fn zeno_dims(name: &str, cfg: RunConfig) -> Result<Report> {
    let m = models::parse_model(name)?;
    let naked = m.naked_closure(cfg.tol)?;
    let zeno = m.zeno_closure(cfg.tol)?;
    let mut rep = Report::new("zeno");
    rep.field("model", m.name.as_str()).field("qubits", m.n_qubits).field("projection", m.projection_spec.as_str());
    for (k, h) in m.hamiltonians.iter().enumerate() {
        rep.field(&format!("H{}", k + 1), h.to_string());
    }
    rep.field("naked_dimension", naked.dimension)
        .field("zeno_dimension", zeno.dimension)
        .field("zeno_traceless_dimension", zeno.traceless_dimension)
        .field("zeno_full_su", zeno.is_full_su)
        .field("tol", cfg.tol);
    rep.check(
        "naked dimension",
        naked.dimension == m.expected_naked_dim,
        format!("{} (expected {})", naked.dimension, m.expected_naked_dim),
    );
    rep.check(
        "Zeno traceless dimension",
        zeno.traceless_dimension == m.expected_zeno_dim,
        format!("{} (expected {})", zeno.traceless_dimension, m.expected_zeno_dim),
    );
    Ok(rep)
}

fn pick_hamiltonian(m: &models::ModelSpec, index: Option<usize>) -> Result<(usize, dense::DenseOperator)> {
    let k = index.unwrap_or(m.hamiltonians.len());
    ensure!(k >= 1 && k <= m.hamiltonians.len(), "model {} has {} Hamiltonians", m.name, m.hamiltonians.len());
    Ok((k, m.hamiltonians[k - 1].to_dense()?))
}

fn convergence(name: &str, t: f64, ms: &[usize], index: Option<usize>) -> Result<Report> {
    let m = models::parse_model(name)?;
    let (k, h) = pick_hamiltonian(&m, index)?;
    let p = m.projection()?;
    let pts = zeno::zeno_convergence(&h, &p, t, ms, None)?;
    let mut rep = Report::new("convergence");
    rep.field("model", m.name.as_str()).field("hamiltonian", k).field("t", t);
    let mut table = Table::new("convergence", &["m", "error", "survival_probability"]);
    for pt in &pts {
        table.push(vec![pt.m.into(), pt.error.into(), pt.survival_probability.into()]);
    }
    rep.tables.push(table);
    if pts.len() >= 2 {
        let (a, b) = (&pts[pts.len() - 2], &pts[pts.len() - 1]);
        rep.field("last_ratio", a.error / b.error);
    }
    rep.check(
        "error strictly decreasing in m",
        pts.windows(2).all(|w| w[1].error < w[0].error),
        format!("{} points", pts.len()),
    );
    Ok(rep)
}

/// `|phi_perp> (x) |u>` with `u` the first column of a seeded Haar unitary.
fn perp_start(qubits: usize, seed: u64) -> Result<DensityMatrix> {
    let (_, perp) = zeno::phi_states();
    let rest = if qubits > 1 {
        models::haar_unitary(1 << (qubits - 1), seed)?.column(0).into_owned()
    } else {
        StateVector::from_element(1, dense::ONE)
    };
    Ok(DensityMatrix::pure(&perp.kronecker(&rest))?)
}

type LadderArgs<'a> = (&'a [f64], &'a str, f64);

fn damping(
    gamma: f64,
    t: f64,
    steps: usize,
    qubits: usize,
    samples: usize,
    ladder: Option<LadderArgs<'_>>,
    cfg: RunConfig,
) -> Result<Report> {
    ensure!((1..=8).contains(&qubits), "--qubits must be between 1 and 8");
    let rho0 = perp_start(qubits, cfg.seed)?;
    let model = dissipation::amplitude_damping_model(1, qubits, gamma, None)?;
    let traj = dissipation::evolve_lindblad_sampled(&model, &rho0, t, steps, samples)?;
    let mut table =
        Table::new("trajectory", &["t", "fidelity_to_phi", "trace", "min_eigenvalue", "closed_form_deviation"]);
    let mut worst = 0.0f64;
    for (time, rho) in &traj {
        let exact = dissipation::analytic_damping_solution(&rho0, 1, qubits, gamma, *time)?;
        let dev = dense::max_abs_diff(rho.matrix(), exact.matrix());
        worst = worst.max(dev);
        table.push(vec![
            (*time).into(),
            dissipation::phi_population(rho, 1, qubits)?.into(),
            rho.trace().into(),
            rho.min_eigenvalue().into(),
            dev.into(),
        ]);
    }
    let mut rep = Report::new("damping");
    rep.field("gamma", gamma).field("t", t).field("steps", steps).field("qubits", qubits);
    rep.tables.push(table);
    rep.check("integrator matches closed form", worst <= 1e-6, format!("max entrywise deviation {}", fmt_num(worst)));

    if let Some((gammas, model_name, ladder_t)) = ladder {
        let m = models::parse_model(model_name)?;
        let (_, h) = pick_hamiltonian(&m, None)?;
        let p = m.projection()?;
        ensure!(p.pinned_qubits() == [1], "ladder model must project qubit 1 only");
        let psi = StateVector::from_element(p.rank(), Complex64::new(1.0 / (p.rank() as f64).sqrt(), 0.0));
        let pts = dissipation::strong_damping_zeno_check(&h, 1, m.n_qubits, &psi, ladder_t, gammas, None)?;
        let mut lt = Table::new("ladder", &["gamma", "steps", "trace_distance"]);
        for pt in &pts {
            lt.push(vec![pt.gamma.into(), pt.steps.into(), pt.trace_distance.into()]);
        }
        rep.tables.push(lt);
        let monotone = pts.windows(2).all(|w| w[1].trace_distance <= 1.1 * w[0].trace_distance);
        rep.check(
            "ladder approaches the Zeno limit",
            monotone,
            format!("{} rates, 10% fluctuation allowance", pts.len()),
        );
    }
    Ok(rep)
}

fn genericity(
    n: usize,
    trials: usize,
    random_projection: bool,
    min_full: Option<usize>,
    cfg: RunConfig,
) -> Result<Report> {
    let s = models::genericity_sweep(n, trials, cfg.seed, cfg.tol, random_projection)?;
    let mut rep = Report::new("genericity");
    rep.field("qubits", n)
        .field("projection", if random_projection { "haar" } else { "phi:1" })
        .field("full_count", s.full_count)
        .field("total", s.total)
        .field("fraction", s.fraction())
        .field("min_smallest_singular_value", s.min_smallest_singular_value)
        .field("seed", cfg.seed)
        .field("tol", cfg.tol);
    let mut table = Table::new("trials", &["trial", "seed", "zeno_dim", "is_full", "smallest_singular_value"]);
    for tr in &s.trials {
        table.push(vec![
            tr.trial.into(),
            tr.seed.into(),
            tr.zeno_dim.into(),
            tr.is_full.into(),
            tr.smallest_singular_value.into(),
        ]);
    }
    rep.tables.push(table);
    if let Some(min) = min_full {
        rep.check("full trials", s.full_count >= min, format!("{}/{} (need {min})", s.full_count, s.total));
    }
    Ok(rep)
}

fn purify(h1: &Path, h2: &Path, cfg: RunConfig) -> Result<Report> {
    let a = parse_pauli_file(h1)?;
    let b = parse_pauli_file(h2)?;
    if a.n_qubits() != b.n_qubits() {
        bail!("{} acts on {} qubits but {} acts on {}", h1.display(), a.n_qubits(), h2.display(), b.n_qubits());
    }
    let (e1, e2) = purification::purify_pauli_pair(&a, &b)?;
    let pair = purification::purify_pair(&a.to_dense()?, &b.to_dense()?).context("purifying")?;
    let r = purification::verify_purification(&pair)?;
    let c = purification::closure_contrast(&pair, cfg.tol)?;
    let mut rep = Report::new("purify");
    rep.field("H1", e1.to_string())
        .field("H2", e2.to_string())
        .field("commutator_norm", r.commutator_norm)
        .field("recovery_error_1", r.recovery_error_1)
        .field("recovery_error_2", r.recovery_error_2)
        .field("dim_original", c.dim_original)
        .field("dim_purified", c.dim_purified);
    rep.check("extensions commute", r.commutator_norm <= 1e-11, fmt_num(r.commutator_norm));
    rep.check(
        "projection recovers inputs",
        r.recovery_error_1.max(r.recovery_error_2) <= 1e-12,
        fmt_num(r.recovery_error_1.max(r.recovery_error_2)),
    );
    Ok(rep)
}
