//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zenoctl_core::dense::{DenseOperator, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit Pauli matrix written out by hand.
pub fn pauli_2x2(letter: char) -> DenseOperator {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let entries = match letter {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        other => panic!("not a Pauli letter: {other}"),
    };
    DenseOperator::from_row_slice(2, 2, &entries)
}

/// Kronecker product of letters, qubit 1 leftmost.
pub fn kron_pauli(letters: &str) -> DenseOperator {
    letters.chars().fold(DenseOperator::from_element(1, 1, c(1.0, 0.0)), |acc, l| acc.kronecker(&pauli_2x2(l)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_letters(rng: &mut impl Rng, n: usize) -> String {
    (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect()
}

/// Hermitian matrix with entries drawn uniformly from the unit square.
pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> DenseOperator {
    let a = DenseOperator::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5, 0.0)
}

pub fn random_state(rng: &mut impl Rng, d: usize) -> StateVector {
    let v = StateVector::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / c(n, 0.0)
}

/// Random full-rank density matrix `A A^dagger / Tr`.
pub fn random_density(rng: &mut impl Rng, d: usize) -> DenseOperator {
    let a = DenseOperator::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}
