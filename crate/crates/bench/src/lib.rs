//! Fixtures shared by the benchmarks.

use zenoctl_core::dense::{DenseOperator, StateVector};
use zenoctl_core::dissipation::{self, DensityMatrix, LindbladModel};
use zenoctl_core::models;
use zenoctl_core::zeno::Projection;
use zenoctl_core::{PauliString, Result};

/// Pairs of dense-ish Pauli strings on `n` qubits.
pub fn pauli_pairs(n: usize, count: usize) -> Result<Vec<(PauliString, PauliString)>> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..count as u64)
        .map(|k| {
            let a = PauliString::from_masks(
                n,
                k.wrapping_mul(0x9E37_79B9_7F4A_7C15) & mask,
                k.wrapping_mul(0xC2B2_AE3D_27D4_EB4F) & mask,
            )?;
            let b = PauliString::from_masks(
                n,
                k.wrapping_mul(0x1656_67B1_9E37_79F9) & mask,
                !k.wrapping_mul(0x27D4_EB2F_1656_67C5) & mask,
            )?;
            Ok((a, b))
        })
        .collect()
}

/// Second Hamiltonian of example A and its projection.
pub fn example_a_fixture(n: usize) -> Result<(DenseOperator, Projection)> {
    let m = models::example_a(n)?;
    Ok((m.dense_hamiltonians()?.swap_remove(1), m.projection()?))
}

/// Damping plus example-A control on three qubits, starting inside the subspace.
pub fn lindblad_fixture(gamma: f64) -> Result<(LindbladModel, DensityMatrix)> {
    let (h, p) = example_a_fixture(3)?;
    let psi = StateVector::from_element(p.rank(), zenoctl_core::dense::ONE * 0.5);
    let rho0 = DensityMatrix::pure(&p.lift_state(&psi)?)?;
    Ok((dissipation::amplitude_damping_model(1, 3, gamma, Some(h))?, rho0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(pauli_pairs(64, 8).unwrap().len(), 8);
        let (h, p) = example_a_fixture(3).unwrap();
        assert_eq!((h.nrows(), p.rank()), (8, 4));
        let (model, rho0) = lindblad_fixture(1.0).unwrap();
        assert_eq!(model.dim(), rho0.dim());
    }
}
