//! Zeno projections, projected Hamiltonians `PHP` and their compressions
//! `V^dagger H V`, and the repeated-measurement product formula.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{self, DenseOperator, Spectrum, StateVector};
use crate::error::{ensure_dim, Error, Result};
use crate::pauli::PauliSum;

/// Slack on `V^dagger V = 1` accepted when wrapping a user isometry.
const ISOMETRY_TOL: f64 = 1e-12;

/// The `+1` and `-1` eigenvectors of `(X + Y + Z)/sqrt(3)`, each gauged so its
/// first nonzero amplitude is real and positive.
pub fn phi_states() -> (StateVector, StateVector) {
    let n = PauliSum::from_terms(1, &[(1.0, "X"), (1.0, "Y"), (1.0, "Z")])
        .and_then(|s| s.to_dense())
        .expect("single-qubit operator");
    let n = n / Complex64::new(3f64.sqrt(), 0.0);
    let (_, vecs) = dense::eigh(&n);
    (gauge(vecs.column(1).into_owned()), gauge(vecs.column(0).into_owned()))
}

fn gauge(mut v: StateVector) -> StateVector {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        v *= lead.conj() / Complex64::new(lead.norm(), 0.0);
    }
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Rank-`r` orthogonal projection `P = V V^dagger` carried by its isometry `V`
/// (`d x r`, orthonormal columns).
///
/// Projections that pin individual qubits to pure states remember the pins;
/// their isometry columns are the computational basis of the unpinned qubits
/// in register order, so compressed operators read as operators on those
/// qubits directly.
#[derive(Debug, Clone)]
pub struct Projection {
    isometry: DenseOperator,
    n_qubits: Option<usize>,
    pins: Vec<(usize, StateVector)>,
}

impl Projection {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::pin_qubits(n_qubits, Vec::new())
    }

    /// Projects each listed 1-based qubit onto its (normalized) 2-component state.
    pub fn pin_qubits(n_qubits: usize, mut pins: Vec<(usize, StateVector)>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::pauli::DEFAULT_DENSE_QUBIT_LIMIT {
            return Err(Error::InvalidArgument(format!("unsupported register size {n_qubits}")));
        }
        pins.sort_by_key(|(q, _)| *q);
        for w in pins.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::OverlappingProjections(w[0].0));
            }
        }
        for (q, s) in &mut pins {
            if *q == 0 || *q > n_qubits {
                return Err(Error::QubitOutOfRange { qubit: *q, n_qubits });
            }
            ensure_dim(2, s.len())?;
            let norm = s.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::InvalidArgument(format!("pinned state on qubit {q} is zero")));
            }
            *s /= Complex64::new(norm, 0.0);
        }
        let isometry = pinned_isometry(n_qubits, &pins);
        Ok(Self { isometry, n_qubits: Some(n_qubits), pins })
    }

    /// Wraps an arbitrary isometry.
    pub fn from_isometry(isometry: DenseOperator) -> Result<Self> {
        let r = isometry.ncols();
        if r == 0 || isometry.nrows() < r {
            return Err(Error::InvalidArgument("isometry must be d x r with 1 <= r <= d".into()));
        }
        let gram = isometry.adjoint() * &isometry;
        if (gram - dense::identity(r)).norm() > ISOMETRY_TOL {
            return Err(Error::Contract("isometry columns are not orthonormal".into()));
        }
        Ok(Self { isometry, n_qubits: None, pins: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.isometry.nrows()
    }

    pub fn rank(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn isometry(&self) -> &DenseOperator {
        &self.isometry
    }

    pub fn n_qubits(&self) -> Option<usize> {
        self.n_qubits
    }

    /// 1-based qubits pinned by this projection (empty if not qubit-local).
    pub fn pinned_qubits(&self) -> Vec<usize> {
        self.pins.iter().map(|(q, _)| *q).collect()
    }

    /// `P = V V^dagger`.
    pub fn matrix(&self) -> DenseOperator {
        &self.isometry * self.isometry.adjoint()
    }

    /// `Q = 1 - P`.
    pub fn complement(&self) -> DenseOperator {
        dense::identity(self.dim()) - self.matrix()
    }

    /// `V^dagger A V`.
    pub fn compress(&self, a: &DenseOperator) -> Result<DenseOperator> {
        ensure_dim(self.dim(), a.nrows())?;
        ensure_dim(self.dim(), a.ncols())?;
        Ok(self.isometry.adjoint() * a * &self.isometry)
    }

    /// `V B V^dagger`.
    pub fn lift(&self, b: &DenseOperator) -> Result<DenseOperator> {
        ensure_dim(self.rank(), b.nrows())?;
        Ok(&self.isometry * b * self.isometry.adjoint())
    }

    pub fn lift_state(&self, psi: &StateVector) -> Result<StateVector> {
        ensure_dim(self.rank(), psi.len())?;
        Ok(&self.isometry * psi)
    }
}

fn pinned_isometry(n_qubits: usize, pins: &[(usize, StateVector)]) -> DenseOperator {
    let dim = 1usize << n_qubits;
    let free: Vec<usize> = (1..=n_qubits).filter(|q| !pins.iter().any(|(p, _)| p == q)).collect();
    let rank = 1usize << free.len();
    let shift = |q: usize| n_qubits - q;
    let mut v = DenseOperator::zeros(dim, rank);
    for col in 0..rank {
        let mut base = 0usize;
        for (k, &q) in free.iter().enumerate() {
            let bit = (col >> (free.len() - 1 - k)) & 1;
            base |= bit << shift(q);
        }
        for assignment in 0..(1usize << pins.len()) {
            let mut row = base;
            let mut amp = dense::ONE;
            for (k, (q, state)) in pins.iter().enumerate() {
                let bit = (assignment >> k) & 1;
                row |= bit << shift(*q);
                amp *= state[bit];
            }
            v[(row, col)] = amp;
        }
    }
    v
}

/// Projection of one qubit onto the `+1` eigenstate of `(X + Y + Z)/sqrt(3)`.
pub fn make_phi_projector(qubit: usize, n_qubits: usize) -> Result<Projection> {
    if qubit == 0 || qubit > n_qubits {
        return Err(Error::QubitOutOfRange { qubit, n_qubits });
    }
    let (phi, _) = phi_states();
    Projection::pin_qubits(n_qubits, vec![(qubit, phi)])
}

/// Product of commuting projections.
///
/// Qubit-pinning projections on a common register combine slot by slot; a
/// qubit pinned twice must be pinned to the same ray. Other projections are
/// multiplied as matrices and must commute.
pub fn product_projector(ps: &[Projection]) -> Result<Projection> {
    let (first, rest) = ps.split_first().ok_or_else(|| Error::InvalidArgument("no projections to multiply".into()))?;
    rest.iter().try_fold(first.clone(), |acc, p| product_pair(&acc, p))
}

fn product_pair(a: &Projection, b: &Projection) -> Result<Projection> {
    ensure_dim(a.dim(), b.dim())?;
    if let (Some(na), Some(nb)) = (a.n_qubits, b.n_qubits) {
        if na != nb {
            return Err(Error::QubitMismatch { left: na, right: nb });
        }
        let mut pins = a.pins.clone();
        for (q, s) in &b.pins {
            match pins.iter().find(|(p, _)| p == q) {
                Some((_, existing)) => {
                    let overlap = existing.dotc(s).norm();
                    if (overlap - 1.0).abs() > 1e-12 {
                        return Err(Error::OverlappingProjections(*q));
                    }
                }
                None => pins.push((*q, s.clone())),
            }
        }
        return Projection::pin_qubits(na, pins);
    }
    let pa = a.matrix();
    let pb = b.matrix();
    let prod = &pa * &pb;
    if (&prod - &pb * &pa).norm() > 1e-10 {
        return Err(Error::Contract("projections do not commute".into()));
    }
    let (values, vectors) = dense::eigh(&prod);
    let cols: Vec<StateVector> =
        values.iter().enumerate().filter(|(_, &v)| v > 0.5).map(|(j, _)| vectors.column(j).into_owned()).collect();
    if cols.is_empty() {
        return Err(Error::Contract("product projection is zero".into()));
    }
    Projection::from_isometry(DenseOperator::from_columns(&cols))
}

/// Parses `phi:<q>` terms joined by `*`, or `id`, on an `n_qubits` register.
pub fn parse_projection_spec(spec: &str, n_qubits: usize) -> Result<Projection> {
    let spec = spec.trim();
    if spec == "id" || spec == "identity" {
        return Projection::identity(n_qubits);
    }
    let parts =
        spec.split('*')
            .map(|part| {
                let part = part.trim();
                let q = part.strip_prefix("phi:").and_then(|q| q.trim().parse::<usize>().ok()).ok_or_else(|| {
                    Error::InvalidArgument(format!("bad projection term {part:?}; expected phi:<qubit>"))
                })?;
                make_phi_projector(q, n_qubits)
            })
            .collect::<Result<Vec<_>>>()?;
    product_projector(&parts)
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n_qubits {
            Some(n) if self.pins.is_empty() => write!(f, "identity on {n} qubits"),
            Some(n) => {
                let qs: Vec<String> = self.pins.iter().map(|(q, _)| q.to_string()).collect();
                write!(f, "pins qubits {} of {n} (rank {})", qs.join(","), self.rank())
            }
            None => write!(f, "rank-{} projection in dimension {}", self.rank(), self.dim()),
        }
    }
}

/// `PHP` in the full space and `V^dagger H V` on the subspace.
#[derive(Debug, Clone)]
pub struct ZenoHamiltonian {
    pub full: DenseOperator,
    pub compressed: DenseOperator,
}

pub fn zeno_hamiltonian(h: &DenseOperator, p: &Projection) -> Result<ZenoHamiltonian> {
    ensure_dim(p.dim(), h.nrows())?;
    dense::ensure_hermitian(h, "Hamiltonian")?;
    let compressed = p.compress(h)?;
    let full = p.lift(&compressed)?;
    Ok(ZenoHamiltonian { full, compressed })
}

/// A set of control Hamiltonians together with their Zeno counterparts.
#[derive(Debug, Clone)]
pub struct ZenoSystem {
    pub full_hamiltonians: Vec<DenseOperator>,
    pub projection: Projection,
    pub zeno_hamiltonians: Vec<DenseOperator>,
    pub compressed_hamiltonians: Vec<DenseOperator>,
}

impl ZenoSystem {
    pub fn new(full_hamiltonians: Vec<DenseOperator>, projection: Projection) -> Result<Self> {
        let mut zeno_hamiltonians = Vec::with_capacity(full_hamiltonians.len());
        let mut compressed_hamiltonians = Vec::with_capacity(full_hamiltonians.len());
        for h in &full_hamiltonians {
            let z = zeno_hamiltonian(h, &projection)?;
            zeno_hamiltonians.push(z.full);
            compressed_hamiltonians.push(z.compressed);
        }
        Ok(Self { full_hamiltonians, projection, zeno_hamiltonians, compressed_hamiltonians })
    }
}

/// `[P X1X2 P, P Z1Z2 P] - coefficient * (P Y2)` for the two-qubit system
/// with `P` pinning qubit 1 to `|phi>`, as a Frobenius norm.
pub fn intro_commutator_residual(coefficient: Complex64) -> Result<f64> {
    let p = make_phi_projector(1, 2)?;
    let h1 = PauliSum::from_terms(2, &[(1.0, "XX")])?.to_dense()?;
    let h2 = PauliSum::from_terms(2, &[(1.0, "ZZ")])?.to_dense()?;
    let a = zeno_hamiltonian(&h1, &p)?.full;
    let b = zeno_hamiltonian(&h2, &p)?.full;
    let py = p.matrix() * PauliSum::from_terms(2, &[(1.0, "IY")])?.to_dense()?;
    Ok((dense::commutator(&a, &b) - py * coefficient).norm())
}

/// `e^{-iHt}`.
pub fn propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    dense::propagator(h, t)
}

/// `V^dagger (P e^{-iHt/m})^m V`, the conditional propagator after `m`
/// evolve-then-project steps started inside the subspace.
///
/// Since `P = V V^dagger`, this equals `(V^dagger e^{-iHt/m} V)^m`.
pub fn zeno_product(h: &DenseOperator, p: &Projection, t: f64, m: usize) -> Result<DenseOperator> {
    ensure_dim(p.dim(), h.nrows())?;
    dense::ensure_hermitian(h, "Hamiltonian")?;
    if m == 0 {
        return Err(Error::InvalidArgument("step count m must be at least 1".into()));
    }
    Ok(zeno_product_with(&Spectrum::new(h), p, t, m))
}

fn zeno_product_with(spectrum: &Spectrum, p: &Projection, t: f64, m: usize) -> DenseOperator {
    let step = p.isometry.adjoint() * spectrum.propagator(t / m as f64) * &p.isometry;
    let mut out = dense::identity(p.rank());
    for _ in 0..m {
        out = &step * out;
    }
    out
}

/// `|Z psi|^2` for a conditional propagator `Z`.
pub fn survival_probability(z: &DenseOperator, psi: &StateVector) -> Result<f64> {
    ensure_dim(z.ncols(), psi.len())?;
    Ok((z * psi).norm_squared() / psi.norm_squared())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub m: usize,
    /// Spectral-norm distance to `exp(-i V^dagger H V t)`.
    pub error: f64,
    pub survival_probability: f64,
}

/// Product-formula error against the Zeno-limit evolution for each `m`.
/// The survival probability uses `psi` (default: first subspace basis vector).
pub fn zeno_convergence(
    h: &DenseOperator,
    p: &Projection,
    t: f64,
    ms: &[usize],
    psi: Option<&StateVector>,
) -> Result<Vec<ConvergencePoint>> {
    ensure_dim(p.dim(), h.nrows())?;
    dense::ensure_hermitian(h, "Hamiltonian")?;
    if ms.is_empty() || ms[0] == 0 || ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("m values must be positive and strictly increasing".into()));
    }
    let default_psi = {
        let mut e = StateVector::zeros(p.rank());
        e[0] = dense::ONE;
        e
    };
    let psi = psi.unwrap_or(&default_psi);
    ensure_dim(p.rank(), psi.len())?;
    let spectrum = Spectrum::new(h);
    let target = Spectrum::new(&p.compress(h)?).propagator(t);
    Ok(ms
        .par_iter()
        .map(|&m| {
            let z = zeno_product_with(&spectrum, p, t, m);
            ConvergencePoint {
                m,
                error: dense::spectral_norm(&(&z - &target)),
                survival_probability: (&z * psi).norm_squared() / psi.norm_squared(),
            }
        })
        .collect())
}
