//! Hamiltonian purification of a pair: two arbitrary Hamiltonians become a
//! commuting pair on a space with one extra leading qubit, and projecting
//! that qubit onto `|0>` recovers the originals.
//!
//! `H1 = 1 (x) h1 + X (x) h2`, `H2 = 1 (x) h2 + X (x) h1`. Both are
//! block-diagonal in the `|+>, |->` basis of the new qubit with blocks
//! `h1 +- h2` and `h2 +- h1 = +-(h1 +- h2)`, hence they commute.

use serde::Serialize;

use crate::dense::{self, DenseOperator, StateVector};
use crate::error::{ensure_dim, Result};
use crate::lie;
use crate::pauli::{Letter, PauliSum};
use crate::zeno::Projection;

#[derive(Debug, Clone)]
pub struct PurifiedPair {
    pub h1: DenseOperator,
    pub h2: DenseOperator,
    pub extended1: DenseOperator,
    pub extended2: DenseOperator,
    /// Rank-`d` projection `(1 + Z)/2 (x) 1` with isometry `|0> (x) 1`.
    pub projection: Projection,
}

fn pauli_x() -> DenseOperator {
    DenseOperator::from_row_slice(2, 2, &[dense::ZERO, dense::ONE, dense::ONE, dense::ZERO])
}

fn zero_pin_isometry(d: usize) -> DenseOperator {
    let mut v = DenseOperator::zeros(2 * d, d);
    for k in 0..d {
        v[(k, k)] = dense::ONE;
    }
    v
}

pub fn purify_pair(h1: &DenseOperator, h2: &DenseOperator) -> Result<PurifiedPair> {
    dense::ensure_hermitian(h1, "h1")?;
    dense::ensure_hermitian(h2, "h2")?;
    ensure_dim(h1.nrows(), h2.nrows())?;
    let d = h1.nrows();
    let one = dense::identity(2);
    let x = pauli_x();
    let extended1 = one.kronecker(h1) + x.kronecker(h2);
    let extended2 = one.kronecker(h2) + x.kronecker(h1);
    // For qubit registers this coincides with pinning the new qubit 1 to |0>.
    let projection = if d.is_power_of_two() && d.trailing_zeros() < crate::pauli::DEFAULT_DENSE_QUBIT_LIMIT as u32 {
        let n = d.trailing_zeros() as usize + 1;
        let zero = StateVector::from_vec(vec![dense::ONE, dense::ZERO]);
        Projection::pin_qubits(n, vec![(1, zero)])?
    } else {
        Projection::from_isometry(zero_pin_isometry(d))?
    };
    Ok(PurifiedPair { h1: h1.clone(), h2: h2.clone(), extended1, extended2, projection })
}

/// Pauli-sum form of the purification, for operators given as Pauli sums.
pub fn purify_pauli_pair(h1: &PauliSum, h2: &PauliSum) -> Result<(PauliSum, PauliSum)> {
    let e1 = h1.prepend(Letter::I)?.add(&h2.prepend(Letter::X)?)?;
    let e2 = h2.prepend(Letter::I)?.add(&h1.prepend(Letter::X)?)?;
    Ok((e1, e2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurificationReport {
    pub commutator_norm: f64,
    pub recovery_error_1: f64,
    pub recovery_error_2: f64,
}

impl PurificationReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator_norm.max(self.recovery_error_1).max(self.recovery_error_2)
    }
}

/// `|[H1, H2]|_F` and the largest entrywise deviations of `V^dagger Hk V` from `hk`.
pub fn verify_purification(p: &PurifiedPair) -> Result<PurificationReport> {
    let r1 = p.projection.compress(&p.extended1)?;
    let r2 = p.projection.compress(&p.extended2)?;
    Ok(PurificationReport {
        commutator_norm: dense::commutator(&p.extended1, &p.extended2).norm(),
        recovery_error_1: dense::max_abs_diff(&r1, &p.h1),
        recovery_error_2: dense::max_abs_diff(&r2, &p.h2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureContrast {
    pub dim_original: usize,
    pub dim_purified: usize,
}

/// Lie-algebra dimensions of `{i h1, i h2}` and of the purified `{i H1, i H2}`.
pub fn closure_contrast(p: &PurifiedPair, tol: f64) -> Result<ClosureContrast> {
    let (_, original) = lie::closure_of_hamiltonians(&[p.h1.clone(), p.h2.clone()], tol)?;
    let (_, purified) = lie::closure_of_hamiltonians(&[p.extended1.clone(), p.extended2.clone()], tol)?;
    Ok(ClosureContrast { dim_original: original.dimension, dim_purified: purified.dimension })
}

/// `(1 + Z)/2 (x) h`, the projected extension written in the full space.
pub fn projected_form(h: &DenseOperator) -> DenseOperator {
    let p0 = DenseOperator::from_row_slice(2, 2, &[dense::ONE, dense::ZERO, dense::ZERO, dense::ZERO]);
    p0.kronecker(h)
}
