//! Concrete commuting-Hamiltonian systems and the random commuting ensemble.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{self, DenseOperator};
use crate::error::{Error, Result};
use crate::lie::{self, ClosureReport};
use crate::pauli::{PauliSum, DEFAULT_DENSE_QUBIT_LIMIT};
use crate::zeno::{self, make_phi_projector, Projection};

/// Largest Frobenius norm of a pairwise commutator accepted for a model.
pub const COMMUTATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub n_qubits: usize,
    pub hamiltonians: Vec<PauliSum>,
    /// Projection in the `phi:<q>*...` syntax.
    pub projection_spec: String,
    pub expected_naked_dim: usize,
    pub expected_zeno_dim: usize,
}

/// Frobenius norm of a Pauli sum on `n` qubits: `sqrt(2^n sum |c|^2)`.
fn pauli_frobenius(s: &PauliSum) -> f64 {
    let sq: f64 = s.iter().map(|(_, c)| c.norm_sqr()).sum();
    (sq * 2f64.powi(s.n_qubits() as i32)).sqrt()
}

impl ModelSpec {
    pub fn new(
        name: impl Into<String>,
        hamiltonians: Vec<PauliSum>,
        projection_spec: impl Into<String>,
        expected_naked_dim: usize,
        expected_zeno_dim: usize,
    ) -> Result<Self> {
        let name = name.into();
        let n_qubits = hamiltonians
            .first()
            .ok_or_else(|| Error::InvalidArgument("model needs at least one Hamiltonian".into()))?
            .n_qubits();
        for (a, ha) in hamiltonians.iter().enumerate() {
            if !ha.is_hermitian() {
                return Err(Error::Contract(format!("{name}: Hamiltonian {} is not Hermitian", a + 1)));
            }
            for (b, hb) in hamiltonians.iter().enumerate().skip(a + 1) {
                let residual = pauli_frobenius(&ha.commutator(hb)?);
                if residual > COMMUTATION_TOL {
                    return Err(Error::Contract(format!(
                        "{name}: Hamiltonians {} and {} do not commute (residual {residual:e})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        let spec = Self {
            name,
            n_qubits,
            hamiltonians,
            projection_spec: projection_spec.into(),
            expected_naked_dim,
            expected_zeno_dim,
        };
        spec.projection()?;
        Ok(spec)
    }

    pub fn projection(&self) -> Result<Projection> {
        zeno::parse_projection_spec(&self.projection_spec, self.n_qubits)
    }

    pub fn dense_hamiltonians(&self) -> Result<Vec<DenseOperator>> {
        self.hamiltonians.iter().map(PauliSum::to_dense).collect()
    }

    /// Compressed Hamiltonians `V^dagger H V` on the unpinned qubits.
    pub fn compressed_hamiltonians(&self) -> Result<Vec<DenseOperator>> {
        let p = self.projection()?;
        self.dense_hamiltonians()?.iter().map(|h| p.compress(h)).collect()
    }

    pub fn naked_closure(&self, tol: f64) -> Result<ClosureReport> {
        Ok(lie::closure_of_hamiltonians(&self.dense_hamiltonians()?, tol)?.1)
    }

    pub fn zeno_closure(&self, tol: f64) -> Result<ClosureReport> {
        Ok(lie::closure_of_hamiltonians(&self.compressed_hamiltonians()?, tol)?.1)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} qubits, projection {})", self.name, self.n_qubits, self.projection_spec)?;
        for (k, h) in self.hamiltonians.iter().enumerate() {
            writeln!(f, "  H{} = {}", k + 1, h)?;
        }
        Ok(())
    }
}

/// `X1 X2` and `Z1 Z2` under the projection of qubit 1.
pub fn intro_example() -> Result<ModelSpec> {
    let h1 = PauliSum::from_terms(2, &[(1.0, "XX")])?;
    let h2 = PauliSum::from_terms(2, &[(1.0, "ZZ")])?;
    ModelSpec::new("intro", vec![h1, h2], "phi:1", 2, 3)
}

fn letters_at(n: usize, placed: &[(usize, char)]) -> String {
    let mut s = vec!['I'; n];
    for &(q, c) in placed {
        s[q - 1] = c;
    }
    s.into_iter().collect()
}

/// `X1 X2` with `sqrt3 (XXX + YYY + ZZZ)_{123} + Z3 + Heisenberg_{3..n}`.
pub fn example_a(n_qubits: usize) -> Result<ModelSpec> {
    if n_qubits < 3 {
        return Err(Error::InvalidArgument(format!("example A needs at least 3 qubits, got {n_qubits}")));
    }
    let n = n_qubits;
    let s3 = 3f64.sqrt();
    let h1 = PauliSum::from_terms(n, &[(1.0, &letters_at(n, &[(1, 'X'), (2, 'X')]))])?;
    let mut h2 = PauliSum::zero(n)?;
    for c in ['X', 'Y', 'Z'] {
        h2 = h2.add(&PauliSum::from_terms(n, &[(s3, &letters_at(n, &[(1, c), (2, c), (3, c)]))])?)?;
    }
    h2 = h2
        .add(&PauliSum::from_terms(n, &[(1.0, &letters_at(n, &[(3, 'Z')]))])?)?
        .add(&PauliSum::heisenberg_chain(n, 3, n)?)?;
    ModelSpec::new(format!("a:{n}"), vec![h1, h2], "phi:1", 2, 4usize.pow(n as u32 - 1) - 1)
}

/// `Z1 Z2`, `X3 X4` and
/// `sqrt3 Heis_{12} + sqrt3 Heis_{34} + Z2 Z5 + Z5 + X4 X5 + X5 + Heis_{5..n}`.
pub fn example_b(n_qubits: usize) -> Result<ModelSpec> {
    if n_qubits < 5 {
        return Err(Error::InvalidArgument(format!("example B needs at least 5 qubits, got {n_qubits}")));
    }
    let n = n_qubits;
    let s3 = Complex64::new(3f64.sqrt(), 0.0);
    let term = |placed: &[(usize, char)]| PauliSum::from_terms(n, &[(1.0, &letters_at(n, placed))]);
    let h1 = term(&[(1, 'Z'), (2, 'Z')])?;
    let h2 = term(&[(3, 'X'), (4, 'X')])?;
    let h3 = PauliSum::heisenberg_chain(n, 1, 2)?
        .scale(s3)
        .add(&PauliSum::heisenberg_chain(n, 3, 4)?.scale(s3))?
        .add(&term(&[(2, 'Z'), (5, 'Z')])?)?
        .add(&term(&[(5, 'Z')])?)?
        .add(&term(&[(4, 'X'), (5, 'X')])?)?
        .add(&term(&[(5, 'X')])?)?
        .add(&PauliSum::heisenberg_chain(n, 5, n)?)?;
    ModelSpec::new(format!("b:{n}"), vec![h1, h2, h3], "phi:1*phi:3", 3, 4usize.pow(n as u32 - 2) - 1)
}

/// `intro`, `a:<n>` or `b:<n>`.
pub fn parse_model(name: &str) -> Result<ModelSpec> {
    let name = name.trim();
    if name == "intro" {
        return intro_example();
    }
    let bad = || Error::InvalidArgument(format!("unknown model {name:?}; expected intro, a:<n> or b:<n>"));
    let (family, n) = name.split_once(':').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match family.trim() {
        "a" => example_a(n),
        "b" => example_b(n),
        _ => Err(bad()),
    }
}

/// Single-qubit `X` and `Z`, the smallest non-commuting pair.
pub fn purification_demo() -> Result<(PauliSum, PauliSum)> {
    Ok((PauliSum::from_terms(1, &[(1.0, "X")])?, PauliSum::from_terms(1, &[(1.0, "Z")])?))
}

fn haar_from_rng(d: usize, rng: &mut impl Rng) -> DenseOperator {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = DenseOperator::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let (mut q, r) = ginibre.qr().unpack();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let diag = r[(k, k)];
        let n = diag.norm();
        if n > 0.0 {
            col *= diag / Complex64::new(n, 0.0);
        }
    }
    q
}

/// Haar-random `d x d` unitary, deterministic in `seed`.
pub fn haar_unitary(d: usize, seed: u64) -> Result<DenseOperator> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(haar_from_rng(d, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Hermitian matrix `(G + G^dagger)/2` with standard complex Gaussian `G`,
/// deterministic in `seed`.
pub fn random_hermitian(d: usize, seed: u64) -> DenseOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DenseOperator::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `U diag(e) U^dagger`.
fn from_eigensystem(u: &DenseOperator, eigenvalues: &DVector<f64>) -> DenseOperator {
    let mut scaled = u.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(eigenvalues[k], 0.0);
    }
    let h = scaled * u.adjoint();
    (&h + h.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Two Hamiltonians sharing the eigenbasis `common_unitary`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCommutingPair {
    pub dim: usize,
    pub eigenvalues_1: DVector<f64>,
    pub eigenvalues_2: DVector<f64>,
    pub common_unitary: DenseOperator,
    pub seed: u64,
}

impl RandomCommutingPair {
    pub fn from_parts(
        eigenvalues_1: DVector<f64>,
        eigenvalues_2: DVector<f64>,
        common_unitary: DenseOperator,
        seed: u64,
    ) -> Result<Self> {
        let dim = common_unitary.nrows();
        crate::error::ensure_dim(dim, eigenvalues_1.len())?;
        crate::error::ensure_dim(dim, eigenvalues_2.len())?;
        let defect = (common_unitary.adjoint() * &common_unitary - dense::identity(dim)).norm();
        if !common_unitary.is_square() || defect > 1e-12 {
            return Err(Error::Contract(format!("common eigenbasis is not unitary (defect {defect:e})")));
        }
        Ok(Self { dim, eigenvalues_1, eigenvalues_2, common_unitary, seed })
    }

    pub fn hamiltonians(&self) -> (DenseOperator, DenseOperator) {
        (
            from_eigensystem(&self.common_unitary, &self.eigenvalues_1),
            from_eigensystem(&self.common_unitary, &self.eigenvalues_2),
        )
    }
}

/// Eigenvalues i.i.d. uniform on `[-1, 1]`, common Haar eigenbasis.
pub fn random_commuting_pair(n_qubits: usize, seed: u64) -> Result<RandomCommutingPair> {
    if n_qubits == 0 || n_qubits > DEFAULT_DENSE_QUBIT_LIMIT {
        return Err(Error::TooLarge { n_qubits, max: DEFAULT_DENSE_QUBIT_LIMIT });
    }
    let d = 1usize << n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e1 = DVector::from_fn(d, |_, _| rng.random_range(-1.0..=1.0));
    let e2 = DVector::from_fn(d, |_, _| rng.random_range(-1.0..=1.0));
    let u = haar_from_rng(d, &mut rng);
    Ok(RandomCommutingPair { dim: d, eigenvalues_1: e1, eigenvalues_2: e2, common_unitary: u, seed })
}

/// Seed of trial `trial` in a sweep seeded with `seed`: the first word of
/// ChaCha stream `trial`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub zeno_dim: usize,
    pub is_full: bool,
    pub smallest_singular_value: f64,
}

/// Closure of the compressed pair.
pub fn zeno_trial(pair: &RandomCommutingPair, projection: &Projection, tol: f64) -> Result<(usize, bool, f64)> {
    let (h1, h2) = pair.hamiltonians();
    let compressed = [projection.compress(&h1)?, projection.compress(&h2)?];
    let (basis, report) = lie::closure_of_hamiltonians(&compressed, tol)?;
    let rank = lie::full_rank_test(&basis);
    Ok((report.traceless_dimension, rank.is_full, rank.smallest_singular_value))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericitySummary {
    pub n_qubits: usize,
    pub seed: u64,
    pub tol: f64,
    pub random_projection: bool,
    pub full_count: usize,
    pub total: usize,
    pub min_smallest_singular_value: f64,
    pub trials: Vec<TrialResult>,
}

impl GenericitySummary {
    pub fn fraction(&self) -> f64 {
        self.full_count as f64 / self.total as f64
    }
}

/// Random commuting pairs on `n_qubits`, each compressed by `phi:1` (or, with
/// `random_projection`, by a Haar-random projection of rank `d/2`), counted
/// by whether the compressed closure is all of `su(d/2)`.
pub fn genericity_sweep(
    n_qubits: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    random_projection: bool,
) -> Result<GenericitySummary> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if n_qubits < 2 {
        return Err(Error::InvalidArgument("genericity sweep needs at least 2 qubits".into()));
    }
    let fixed = make_phi_projector(1, n_qubits)?;
    let d = 1usize << n_qubits;
    let rows = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = trial_seed(seed, trial as u64);
            let pair = random_commuting_pair(n_qubits, s)?;
            let (zeno_dim, is_full, ssv) = if random_projection {
                let u = haar_unitary(d, s.wrapping_add(1))?;
                let p = Projection::from_isometry(u.columns(0, d / 2).into_owned())?;
                zeno_trial(&pair, &p, tol)?
            } else {
                zeno_trial(&pair, &fixed, tol)?
            };
            Ok(TrialResult { trial, seed: s, zeno_dim, is_full, smallest_singular_value: ssv })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenericitySummary {
        n_qubits,
        seed,
        tol,
        random_projection,
        full_count: rows.iter().filter(|r| r.is_full).count(),
        total: rows.len(),
        min_smallest_singular_value: rows.iter().map(|r| r.smallest_singular_value).fold(f64::INFINITY, f64::min),
        trials: rows,
    })
}
