//! Amplitude damping toward `|phi>` on one qubit, integrated as a Lindblad
//! master equation, and its strong-damping limit as a Zeno projection.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{self, DenseOperator, StateVector};
use crate::error::{ensure_dim, Error, Result};
use crate::zeno::{make_phi_projector, phi_states};

/// Trace drift beyond which an integration is reported as unstable.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// Minimum `steps / (gamma t)` for strong-damping runs.
pub const STEPS_PER_DAMPING_TIME: f64 = 50.0;

const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub operator: DenseOperator,
    pub rate: f64,
}

/// `drho/dt = -i[H, rho] + sum_k rate_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2)`.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: DenseOperator,
    jumps: Vec<JumpOperator>,
    // H - (i/2) sum rate L^dagger L
    effective: DenseOperator,
}

impl LindbladModel {
    pub fn new(hamiltonian: DenseOperator, jumps: Vec<JumpOperator>) -> Result<Self> {
        dense::ensure_hermitian(&hamiltonian, "Hamiltonian")?;
        let dim = hamiltonian.nrows();
        let mut effective = hamiltonian.clone();
        for j in &jumps {
            ensure_dim(dim, j.operator.nrows())?;
            ensure_dim(dim, j.operator.ncols())?;
            if !(j.rate >= 0.0 && j.rate.is_finite()) {
                return Err(Error::InvalidArgument(format!("jump rate must be finite and >= 0, got {}", j.rate)));
            }
            if !j.operator.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Contract("jump operator has non-finite entries".into()));
            }
            effective -= j.operator.adjoint() * &j.operator * Complex64::new(0.0, 0.5 * j.rate);
        }
        Ok(Self { dim, hamiltonian, jumps, effective })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &DenseOperator {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    /// Right-hand side of the master equation.
    pub fn rhs(&self, rho: &DenseOperator) -> DenseOperator {
        let a = &self.effective * rho;
        let mut out = (&a - a.adjoint()) * Complex64::new(0.0, -1.0);
        for j in &self.jumps {
            if j.rate != 0.0 {
                out += &j.operator * rho * j.operator.adjoint() * Complex64::new(j.rate, 0.0);
            }
        }
        out
    }

    fn rk4_step(&self, rho: &DenseOperator, dt: f64) -> DenseOperator {
        let h = Complex64::new(dt, 0.0);
        let half = Complex64::new(0.5 * dt, 0.0);
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(rho + &k1 * half));
        let k3 = self.rhs(&(rho + &k2 * half));
        let k4 = self.rhs(&(rho + &k3 * h));
        rho + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(dt / 6.0, 0.0)
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DenseOperator);

impl DensityMatrix {
    pub fn new(matrix: DenseOperator) -> Result<Self> {
        let rho = DensityMatrix(matrix);
        rho.validate(DENSITY_TOL)?;
        Ok(rho)
    }

    /// Wraps without checking positivity (integrator output).
    pub fn new_unchecked(matrix: DenseOperator) -> Self {
        DensityMatrix(matrix)
    }

    pub fn pure(psi: &StateVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(DensityMatrix(dense::outer(&psi, &psi)))
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let m = &self.0;
        if !m.is_square() {
            return Err(Error::Contract("density matrix is not square".into()));
        }
        if (m - m.adjoint()).norm() > tol {
            return Err(Error::Contract("density matrix is not Hermitian".into()));
        }
        if (self.trace() - 1.0).abs() > tol {
            return Err(Error::Contract(format!("density matrix trace is {}", self.trace())));
        }
        if self.min_eigenvalue() < -tol {
            return Err(Error::Contract("density matrix has a negative eigenvalue".into()));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.0
    }

    pub fn into_matrix(self) -> DenseOperator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        dense::eigh(&self.0).0.min()
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        dense::trace_distance(&self.0, &other.0)
    }
}

/// Damping of `qubit` from `|phi_perp>` to `|phi>` at rate `gamma`, with an
/// optional coherent part.
pub fn amplitude_damping_model(
    qubit: usize,
    n_qubits: usize,
    gamma: f64,
    hamiltonian: Option<DenseOperator>,
) -> Result<LindbladModel> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("damping rate must be finite and >= 0, got {gamma}")));
    }
    let (phi, perp) = phi_states();
    let lowering = dense::outer(&phi, &perp);
    let operator = dense::embed_qubit_operator(&lowering, qubit, n_qubits)?;
    let dim = 1usize << n_qubits;
    let hamiltonian = hamiltonian.unwrap_or_else(|| DenseOperator::zeros(dim, dim));
    ensure_dim(dim, hamiltonian.nrows())?;
    LindbladModel::new(hamiltonian, vec![JumpOperator { operator, rate: gamma }])
}

/// Fixed-step classical Runge-Kutta integration. Returns the states at
/// `samples + 1` evenly spaced times (including `0` and `t`).
pub fn evolve_lindblad_sampled(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t: f64,
    steps: usize,
    samples: usize,
) -> Result<Vec<(f64, DensityMatrix)>> {
    ensure_dim(model.dim, rho0.dim())?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite".into()));
    }
    let samples = samples.clamp(1, steps);
    let dt = t / steps as f64;
    let trace0 = rho0.trace();
    let mut rho = rho0.0.clone();
    let mut out = vec![(0.0, rho0.clone())];
    let mut next_sample = 1;
    for step in 1..=steps {
        rho = model.rk4_step(&rho, dt);
        let tr = rho.trace();
        if !(tr.re.is_finite()) || (tr.re - trace0).abs() > TRACE_DRIFT_LIMIT || tr.im.abs() > TRACE_DRIFT_LIMIT {
            return Err(Error::Integration(format!(
                "trace drifted to {tr} after {step} steps of size {dt}; increase the step count"
            )));
        }
        if step * samples >= next_sample * steps {
            out.push((step as f64 * dt, DensityMatrix(rho.clone())));
            next_sample += 1;
        }
    }
    Ok(out)
}

pub fn evolve_lindblad(model: &LindbladModel, rho0: &DensityMatrix, t: f64, steps: usize) -> Result<DensityMatrix> {
    let mut traj = evolve_lindblad_sampled(model, rho0, t, steps, 1)?;
    Ok(traj.pop().expect("at least the initial sample").1)
}

/// Closed-form pure-damping solution
/// `(1 - e^{-gt}) P Tr_q(rho0) + e^{-gt}(P rho0 P + Q rho0 Q) + e^{-gt/2}(P rho0 Q + Q rho0 P)`,
/// where `P Tr_q(rho0)` is `|phi><phi|` on `qubit` tensored with the partial trace.
pub fn analytic_damping_solution(
    rho0: &DensityMatrix,
    qubit: usize,
    n_qubits: usize,
    gamma: f64,
    t: f64,
) -> Result<DensityMatrix> {
    ensure_dim(1 << n_qubits, rho0.dim())?;
    let p = make_phi_projector(qubit, n_qubits)?;
    let pm = p.matrix();
    let qm = p.complement();
    let rho = &rho0.0;
    let (phi, _) = phi_states();
    let reduced = dense::partial_trace_qubit(rho, qubit, n_qubits)?;
    let reset = dense::insert_qubit_factor(&dense::outer(&phi, &phi), &reduced, qubit, n_qubits)?;
    let decay = (-gamma * t).exp();
    let half = (-0.5 * gamma * t).exp();
    let c = |x: f64| Complex64::new(x, 0.0);
    let diag = &pm * rho * &pm + &qm * rho * &qm;
    let offdiag = &pm * rho * &qm + &qm * rho * &pm;
    Ok(DensityMatrix(reset * c(1.0 - decay) + diag * c(decay) + offdiag * c(half)))
}

/// Population of `|phi>` on `qubit`, `Tr(P rho)`.
pub fn phi_population(rho: &DensityMatrix, qubit: usize, n_qubits: usize) -> Result<f64> {
    let p = make_phi_projector(qubit, n_qubits)?;
    Ok((p.matrix() * rho.matrix()).trace().re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPoint {
    pub gamma: f64,
    pub steps: usize,
    pub trace_distance: f64,
}

/// Evolves `|phi> (x) psi` under the control Hamiltonian plus damping of
/// `qubit` for each rate and reports the trace distance to the ideal Zeno
/// evolution `V exp(-i V^dagger H V t) psi`.
///
/// `steps` defaults to `max(ceil(50 gamma t), 1000)`; explicit values below
/// `50 gamma t` are rejected.
pub fn strong_damping_zeno_check(
    hamiltonian: &DenseOperator,
    qubit: usize,
    n_qubits: usize,
    psi: &StateVector,
    t: f64,
    gammas: &[f64],
    steps: Option<usize>,
) -> Result<Vec<LadderPoint>> {
    let p = make_phi_projector(qubit, n_qubits)?;
    ensure_dim(p.dim(), hamiltonian.nrows())?;
    dense::ensure_hermitian(hamiltonian, "Hamiltonian")?;
    let rho0 = DensityMatrix::pure(&p.lift_state(psi)?)?;
    let compressed = p.compress(hamiltonian)?;
    let evolved = dense::propagator(&compressed, t)? * psi;
    let ideal = DensityMatrix::pure(&p.lift_state(&evolved)?)?;

    let plan = gammas
        .iter()
        .map(|&gamma| {
            let needed = (STEPS_PER_DAMPING_TIME * gamma * t).ceil() as usize;
            match steps {
                Some(s) if (s as f64) < STEPS_PER_DAMPING_TIME * gamma * t => Err(Error::InvalidArgument(format!(
                    "{s} steps is below the {needed} required for gamma = {gamma}, t = {t}"
                ))),
                Some(s) => Ok((gamma, s)),
                None => Ok((gamma, needed.max(1000))),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    plan.into_par_iter()
        .map(|(gamma, steps)| {
            let model = amplitude_damping_model(qubit, n_qubits, gamma, Some(hamiltonian.clone()))?;
            let rho = evolve_lindblad(&model, &rho0, t, steps)?;
            Ok(LadderPoint { gamma, steps, trace_distance: rho.trace_distance(&ideal) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliSum;

    fn pauli(s: &str) -> DenseOperator {
        PauliSum::from_terms(s.len(), &[(1.0, s)]).unwrap().to_dense().unwrap()
    }

    fn perp_state_on(n: usize) -> DensityMatrix {
        let (_, perp) = phi_states();
        let mut rest = StateVector::zeros(1 << (n - 1));
        rest[0] = dense::ONE;
        let psi = perp.kronecker(&rest);
        DensityMatrix::pure(&psi).unwrap()
    }

    #[test]
    fn jump_construction_identity() {
        let m = amplitude_damping_model(1, 2, 1.0, None).unwrap();
        let l = &m.jumps()[0].operator;
        let q = make_phi_projector(1, 2).unwrap().complement();
        assert!((l.adjoint() * l - q).norm() < 1e-12);
    }

    #[test]
    fn negative_rate_rejected() {
        assert!(amplitude_damping_model(1, 2, -0.1, None).is_err());
        assert!(amplitude_damping_model(3, 2, 0.1, None).is_err());
    }

    #[test]
    fn zero_rate_is_unitary_evolution() {
        let h = pauli("XZ") + pauli("IY") * Complex64::new(0.4, 0.0);
        let model = amplitude_damping_model(1, 2, 0.0, Some(h.clone())).unwrap();
        let rho0 = perp_state_on(2);
        let rho = evolve_lindblad(&model, &rho0, 0.8, 400).unwrap();
        let u = dense::propagator(&h, 0.8).unwrap();
        let exact = &u * rho0.matrix() * u.adjoint();
        assert!(dense::max_abs_diff(rho.matrix(), &exact) < 1e-10);
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let model = amplitude_damping_model(1, 2, 1.0, None).unwrap();
        let rho0 = perp_state_on(2);
        assert_eq!(evolve_lindblad(&model, &rho0, 0.0, 10).unwrap(), rho0);
        assert!(evolve_lindblad(&model, &rho0, 1.0, 0).is_err());
    }

    #[test]
    fn half_life_population() {
        let model = amplitude_damping_model(1, 2, 1.0, None).unwrap();
        let rho = evolve_lindblad(&model, &perp_state_on(2), 2f64.ln(), 2000).unwrap();
        let pop_perp = 1.0 - phi_population(&rho, 1, 2).unwrap();
        assert!((pop_perp - 0.5).abs() < 1e-10, "{pop_perp}");
    }

    #[test]
    fn single_qubit_textbook_channel() {
        // In the (phi, perp) basis: population of perp decays as e^{-gt},
        // coherence as e^{-gt/2}.
        let (phi, perp) = phi_states();
        let psi = (&phi * Complex64::new(0.6, 0.0)) + (&perp * Complex64::new(0.0, 0.8));
        let rho0 = DensityMatrix::pure(&psi).unwrap();
        let (g, t) = (1.7, 0.9);
        let model = amplitude_damping_model(1, 1, g, None).unwrap();
        let rho = evolve_lindblad(&model, &rho0, t, 2000).unwrap();
        let pp = perp.dotc(&(rho.matrix() * &perp)).re;
        let coh = phi.dotc(&(rho.matrix() * &perp));
        let coh0 = phi.dotc(&(rho0.matrix() * &perp));
        assert!((pp - 0.64 * (-g * t).exp()).abs() < 1e-10);
        assert!((coh - coh0 * (-0.5 * g * t).exp()).norm() < 1e-10);
    }

    #[test]
    fn analytic_edge_cases() {
        let rho0 = perp_state_on(2);
        let at_zero = analytic_damping_solution(&rho0, 1, 2, 2.0, 0.0).unwrap();
        assert!(dense::max_abs_diff(at_zero.matrix(), rho0.matrix()) < 1e-14);
        let no_rate = analytic_damping_solution(&rho0, 1, 2, 0.0, 5.0).unwrap();
        assert!(dense::max_abs_diff(no_rate.matrix(), rho0.matrix()) < 1e-14);
        let late = analytic_damping_solution(&rho0, 1, 2, 1.0, 60.0).unwrap();
        assert!((phi_population(&late, 1, 2).unwrap() - 1.0).abs() < 1e-12);
        late.validate(1e-10).unwrap();
    }

    #[test]
    fn instability_is_detected() {
        let model = amplitude_damping_model(1, 1, 1000.0, None).unwrap();
        let rho0 = perp_state_on(1);
        let err = evolve_lindblad(&model, &rho0, 1.0, 10).unwrap_err();
        assert!(matches!(err, Error::Integration(_)), "{err}");
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(dense::identity(2)).is_err());
        assert!(DensityMatrix::new(dense::identity(2) * Complex64::new(0.5, 0.0)).is_ok());
        let bad = DenseOperator::from_row_slice(
            2,
            2,
            &[Complex64::new(1.5, 0.0), dense::ZERO, dense::ZERO, Complex64::new(-0.5, 0.0)],
        );
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn ladder_rejects_too_few_steps() {
        let h = pauli("IX");
        let psi = StateVector::from_vec(vec![dense::ONE, dense::ZERO]);
        assert!(strong_damping_zeno_check(&h, 1, 2, &psi, 1.0, &[100.0], Some(1000)).is_err());
    }

    #[test]
    fn commuting_control_is_unaffected_by_damping() {
        let h = pauli("IX") + pauli("IZ") * Complex64::new(0.5, 0.0);
        let psi = StateVector::from_vec(vec![dense::ONE, dense::ZERO]);
        let ladder = strong_damping_zeno_check(&h, 1, 2, &psi, 1.0, &[0.0, 5.0, 40.0], None).unwrap();
        for pt in ladder {
            assert!(pt.trace_distance <= 1e-6, "{pt:?}");
        }
    }
}
