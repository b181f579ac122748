//! Dense complex matrices and the Hilbert-Schmidt geometry on them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};

/// A `d x d` complex matrix.
pub type DenseOperator = DMatrix<Complex64>;

/// A complex column vector of amplitudes.
pub type StateVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance (relative to `max(1, |A|_F)`) used to accept an input as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub fn identity(dim: usize) -> DenseOperator {
    DenseOperator::identity(dim, dim)
}

pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    a * b - b * a
}

/// `Re Tr(a^dagger b)`.
pub fn hs_inner(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    ensure_dim(a.nrows(), b.nrows())?;
    ensure_dim(a.ncols(), b.ncols())?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.re * y.re + x.im * y.im).sum())
}

pub fn frobenius(a: &DenseOperator) -> f64 {
    a.norm()
}

/// Stacks columns top to bottom, then lays the real parts followed by the
/// imaginary parts into a real vector of length `2 d^2`. The Euclidean dot
/// product of two vectorizations is [`hs_inner`].
pub fn vectorize(a: &DenseOperator) -> DVector<f64> {
    let n = a.len();
    DVector::from_iterator(2 * n, a.iter().map(|z| z.re).chain(a.iter().map(|z| z.im)))
}

pub fn is_hermitian(a: &DenseOperator, tol: f64) -> bool {
    a.is_square() && (a - a.adjoint()).norm() <= tol * a.norm().max(1.0)
}

pub fn is_anti_hermitian(a: &DenseOperator, tol: f64) -> bool {
    a.is_square() && (a + a.adjoint()).norm() <= tol * a.norm().max(1.0)
}

pub fn ensure_hermitian(a: &DenseOperator, what: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Contract(format!("{what} is not square")));
    }
    if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Contract(format!("{what} has non-finite entries")));
    }
    if !is_hermitian(a, HERMITIAN_TOL) {
        return Err(Error::Contract(format!("{what} is not Hermitian")));
    }
    Ok(())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Spectral decomposition of a Hermitian matrix: ascending real eigenvalues
/// and the matching orthonormal eigenvectors as columns.
pub fn eigh(h: &DenseOperator) -> (DVector<f64>, DenseOperator) {
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DenseOperator::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// `exp(-i H t)` by eigendecomposition.
pub fn propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    ensure_hermitian(h, "Hamiltonian")?;
    Ok(Spectrum::new(h).propagator(t))
}

/// Cached eigendecomposition so a Hamiltonian can be exponentiated at many times.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DenseOperator,
}

impl Spectrum {
    pub fn new(h: &DenseOperator) -> Self {
        let (values, vectors) = eigh(h);
        Self { values, vectors }
    }

    pub fn propagator(&self, t: f64) -> DenseOperator {
        let phases = self.values.map(|e| Complex64::from_polar(1.0, -e * t));
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn singular_values(a: &DenseOperator) -> DVector<f64> {
    a.clone().svd(false, false).singular_values
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseOperator) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a).max()
}

/// `1/2 * sum |eigenvalues(a - b)|` for Hermitian `a`, `b`.
pub fn trace_distance(a: &DenseOperator, b: &DenseOperator) -> f64 {
    let (values, _) = eigh(&(a - b));
    0.5 * values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Index of the basis bit carrying the 1-based `qubit` of an `n_qubits` register.
fn qubit_shift(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - qubit
}

fn check_qubit(qubit: usize, n_qubits: usize) -> Result<()> {
    if qubit == 0 || qubit > n_qubits {
        return Err(Error::QubitOutOfRange { qubit, n_qubits });
    }
    Ok(())
}

/// Removes the bit at `shift` from `index`.
fn squeeze(index: usize, shift: usize) -> usize {
    let low = index & ((1 << shift) - 1);
    let high = index >> (shift + 1);
    (high << shift) | low
}

/// Inserts `bit` at position `shift` of `rest`.
fn unsqueeze(rest: usize, shift: usize, bit: usize) -> usize {
    let low = rest & ((1 << shift) - 1);
    let high = rest >> shift;
    (high << (shift + 1)) | (bit << shift) | low
}

/// `1 (x) ... (x) op (x) ... (x) 1` with the 2x2 `op` on the given qubit.
pub fn embed_qubit_operator(op: &DenseOperator, qubit: usize, n_qubits: usize) -> Result<DenseOperator> {
    ensure_dim(2, op.nrows())?;
    ensure_dim(2, op.ncols())?;
    check_qubit(qubit, n_qubits)?;
    let dim = 1usize << n_qubits;
    let shift = qubit_shift(qubit, n_qubits);
    Ok(DenseOperator::from_fn(dim, dim, |r, c| {
        if squeeze(r, shift) != squeeze(c, shift) {
            ZERO
        } else {
            op[((r >> shift) & 1, (c >> shift) & 1)]
        }
    }))
}

/// `op` on `qubit`, tensored with `rest` acting on the remaining qubits in order.
pub fn insert_qubit_factor(
    op: &DenseOperator,
    rest: &DenseOperator,
    qubit: usize,
    n_qubits: usize,
) -> Result<DenseOperator> {
    ensure_dim(2, op.nrows())?;
    check_qubit(qubit, n_qubits)?;
    ensure_dim(1 << (n_qubits - 1), rest.nrows())?;
    let dim = 1usize << n_qubits;
    let shift = qubit_shift(qubit, n_qubits);
    Ok(DenseOperator::from_fn(dim, dim, |r, c| {
        op[((r >> shift) & 1, (c >> shift) & 1)] * rest[(squeeze(r, shift), squeeze(c, shift))]
    }))
}

/// Partial trace over one qubit.
pub fn partial_trace_qubit(rho: &DenseOperator, qubit: usize, n_qubits: usize) -> Result<DenseOperator> {
    check_qubit(qubit, n_qubits)?;
    ensure_dim(1 << n_qubits, rho.nrows())?;
    let shift = qubit_shift(qubit, n_qubits);
    let sub = 1usize << (n_qubits - 1);
    Ok(DenseOperator::from_fn(sub, sub, |r, c| {
        (0..2).map(|b| rho[(unsqueeze(r, shift, b), unsqueeze(c, shift, b))]).sum()
    }))
}

pub fn outer(a: &StateVector, b: &StateVector) -> DenseOperator {
    a * b.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliSum;
    use std::f64::consts::PI;

    fn pauli(s: &str) -> DenseOperator {
        PauliSum::from_terms(s.len(), &[(1.0, s)]).unwrap().to_dense().unwrap()
    }

    #[test]
    fn hs_inner_basics() {
        assert_eq!(hs_inner(&pauli("X"), &pauli("X")).unwrap(), 2.0);
        assert_eq!(hs_inner(&pauli("X"), &pauli("Z")).unwrap(), 0.0);
        assert!(hs_inner(&pauli("X"), &pauli("XX")).is_err());
        let a = pauli("XY") * Complex64::new(0.3, -1.1) + pauli("ZI");
        let n = hs_inner(&a, &a).unwrap();
        assert!((n - a.norm_squared()).abs() < 1e-14);
    }

    #[test]
    fn vectorize_layout() {
        assert!(vectorize(&DenseOperator::zeros(2, 2)).iter().all(|&v| v == 0.0));
        let v = vectorize(&identity(2));
        assert_eq!(v.as_slice(), &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let y = vectorize(&pauli("Y"));
        // Y = [[0, -i], [i, 0]]: column 0 is (0, i), column 1 is (-i, 0).
        assert_eq!(y.as_slice(), &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn propagator_of_z() {
        let u = propagator(&pauli("Z"), PI / 2.0).unwrap();
        assert!((u[(0, 0)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(u[(0, 1)].norm() < 1e-15);
        let id = propagator(&pauli("X"), 0.0).unwrap();
        assert!((id - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn propagator_rejects_non_hermitian() {
        let a = pauli("X") * I;
        assert!(matches!(propagator(&a, 1.0), Err(Error::Contract(_))));
    }

    #[test]
    fn group_inverse() {
        let h = pauli("XZ") * Complex64::new(0.7, 0.0) + pauli("YI") + pauli("ZZ") * Complex64::new(-0.2, 0.0);
        let s = Spectrum::new(&h);
        let u = s.propagator(1.3);
        let w = s.propagator(-1.3);
        assert!((u * w - identity(4)).norm() < 1e-13);
    }

    #[test]
    fn embedding_and_partial_trace_agree_with_kronecker() {
        let x = pauli("X");
        let z = pauli("Z");
        assert_eq!(embed_qubit_operator(&x, 1, 2).unwrap(), pauli("XI"));
        assert_eq!(embed_qubit_operator(&x, 2, 3).unwrap(), pauli("IXI"));
        let full = insert_qubit_factor(&x, &z.kronecker(&z), 2, 3).unwrap();
        assert_eq!(full, pauli("ZXZ"));

        // Tr_2 (A (x) B (x) C) = Tr(B) A (x) C
        let a = pauli("X") + identity(2);
        let b = pauli("Z") * Complex64::new(0.5, 0.0) + identity(2) * Complex64::new(2.0, 0.0);
        let c = pauli("Y") + identity(2);
        let rho = a.kronecker(&b).kronecker(&c);
        let tr = partial_trace_qubit(&rho, 2, 3).unwrap();
        let expected = a.kronecker(&c) * b.trace();
        assert!((tr - expected).norm() < 1e-14);
        assert!(partial_trace_qubit(&rho, 4, 3).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let a = DenseOperator::from_diagonal(&DVector::from_vec(vec![ONE, ZERO]));
        let b = DenseOperator::from_diagonal(&DVector::from_vec(vec![ZERO, ONE]));
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance(&a, &a), 0.0);
    }
}
