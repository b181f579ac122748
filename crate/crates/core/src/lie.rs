//! Dynamical Lie algebra of a set of control Hamiltonians.
//!
//! The algebra generated by `iH_1, ..., iH_n` is built breadth-first: every
//! pair of basis elements is commutated once, and each commutator is added if
//! it leaves the current span. Spans are tracked with an orthonormal basis
//! under the Hilbert-Schmidt inner product, using classical Gram-Schmidt with
//! one full re-orthogonalization pass so orthonormality survives hundreds of
//! extensions.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{self, DenseOperator};
use crate::error::{ensure_dim, Error, Result};

/// Default relative rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Anti-Hermiticity slack accepted on generators and candidates.
const ANTI_HERMITIAN_TOL: f64 = 1e-10;

/// Orthonormal real basis of a subspace of anti-Hermitian `d x d` matrices.
#[derive(Debug, Clone)]
pub struct LieBasis {
    dim: usize,
    elements: Vec<DenseOperator>,
    coords: Vec<DVector<f64>>,
    generator_count: usize,
    tol: f64,
    discarded: usize,
}

impl LieBasis {
    pub fn new(dim: usize, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive".into()));
        }
        check_tol(tol)?;
        Ok(Self { dim, elements: Vec::new(), coords: Vec::new(), generator_count: 0, tol, discarded: 0 })
    }

    /// Dimension `d` of the matrices (the algebra lives in `u(d)`).
    pub fn dim_space(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DenseOperator] {
        &self.elements
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn discarded(&self) -> usize {
        self.discarded
    }

    /// Whether the basis already spans all of `u(d)`.
    pub fn is_saturated(&self) -> bool {
        self.elements.len() == self.dim * self.dim
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in self.coords.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - target).abs());
            }
        }
        worst
    }

    /// Adds the part of `candidate` orthogonal to the current span, if that
    /// part is larger than `tol * |candidate|_F`. Returns whether the basis
    /// grew; a rejected candidate is counted in [`LieBasis::discarded`].
    pub fn orthonormal_extend(&mut self, candidate: &DenseOperator) -> Result<bool> {
        self.check_candidate(candidate)?;
        Ok(self.extend_unchecked(candidate, 0.0))
    }

    fn check_candidate(&self, candidate: &DenseOperator) -> Result<()> {
        ensure_dim(self.dim, candidate.nrows())?;
        ensure_dim(self.dim, candidate.ncols())?;
        if !candidate.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Contract("candidate has non-finite entries".into()));
        }
        if !dense::is_anti_hermitian(candidate, ANTI_HERMITIAN_TOL) {
            return Err(Error::Contract("candidate is not anti-Hermitian".into()));
        }
        Ok(())
    }

    /// `floor` is an absolute norm below which the candidate counts as zero.
    fn extend_unchecked(&mut self, candidate: &DenseOperator, floor: f64) -> bool {
        let mut r = dense::vectorize(candidate);
        let cand_norm = r.norm();
        if cand_norm <= floor {
            self.discarded += 1;
            return false;
        }
        for _pass in 0..2 {
            for b in &self.coords {
                let overlap = b.dot(&r);
                r.axpy(-overlap, b, 1.0);
            }
        }
        let res = r.norm();
        if res <= self.tol * cand_norm || self.is_saturated() {
            self.discarded += 1;
            return false;
        }
        let m = devectorize(&r, self.dim);
        // Orthogonal projection onto the anti-Hermitian part; keeps the
        // residual orthogonal to the (anti-Hermitian) basis.
        let m = (&m - m.adjoint()) * Complex64::new(0.5, 0.0);
        let norm = m.norm();
        let m = m / Complex64::new(norm, 0.0);
        self.coords.push(dense::vectorize(&m));
        self.elements.push(m);
        true
    }
}

fn devectorize(v: &DVector<f64>, dim: usize) -> DenseOperator {
    let n = dim * dim;
    DenseOperator::from_iterator(dim, dim, (0..n).map(|k| Complex64::new(v[k], v[n + k])))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

/// Summary of a closure run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub dim_space: usize,
    pub generator_count: usize,
    pub dimension: usize,
    pub traceless_dimension: usize,
    pub is_full_u: bool,
    pub is_full_su: bool,
    pub rounds: usize,
    pub discarded: usize,
    pub tol: f64,
    pub smallest_singular_value: f64,
}

/// Outcome of the vectorized full-rank test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTest {
    pub is_full: bool,
    pub rank: usize,
    /// The `d^2`-th largest singular value of the vectorized basis matrix
    /// (zero when fewer than `d^2` columns exist); positive iff full rank.
    pub smallest_singular_value: f64,
}

/// Real Lie algebra generated by the anti-Hermitian `generators`.
pub fn lie_closure(generators: &[DenseOperator], tol: f64) -> Result<(LieBasis, ClosureReport)> {
    let first = generators.first().ok_or_else(|| Error::InvalidArgument("generator list is empty".into()))?;
    let mut basis = LieBasis::new(first.nrows(), tol)?;
    for g in generators {
        basis.check_candidate(g)?;
    }
    let scale = generators.iter().map(|g| g.norm()).fold(0.0, f64::max);
    for g in generators {
        basis.extend_unchecked(g, tol * scale);
    }
    basis.generator_count = generators.len();

    // Basis elements are unit norm, so their commutators are O(1) when
    // genuinely nonzero; `tol` is the absolute zero floor for candidates.
    let mut done = 0;
    let mut rounds = 0;
    while done < basis.len() && !basis.is_saturated() {
        rounds += 1;
        let frontier_end = basis.len();
        for j in done..frontier_end {
            if basis.is_saturated() {
                break;
            }
            let candidates: Vec<DenseOperator> =
                (0..j).into_par_iter().map(|i| dense::commutator(&basis.elements[i], &basis.elements[j])).collect();
            for c in &candidates {
                basis.extend_unchecked(c, tol);
            }
        }
        done = frontier_end;
    }

    let report = report_for(&basis, rounds);
    Ok((basis, report))
}

/// Closure of `{iH_k}` for Hermitian `hamiltonians`.
pub fn closure_of_hamiltonians(hamiltonians: &[DenseOperator], tol: f64) -> Result<(LieBasis, ClosureReport)> {
    let gens: Vec<DenseOperator> = hamiltonians.iter().map(|h| h * dense::I).collect();
    lie_closure(&gens, tol)
}

fn report_for(basis: &LieBasis, rounds: usize) -> ClosureReport {
    let d2 = basis.dim * basis.dim;
    let traceless = traceless_dimension(basis);
    let rank = full_rank_test(basis);
    ClosureReport {
        dim_space: basis.dim,
        generator_count: basis.generator_count,
        dimension: basis.len(),
        traceless_dimension: traceless,
        is_full_u: basis.len() == d2,
        is_full_su: traceless == d2 - 1,
        rounds,
        discarded: basis.discarded,
        tol: basis.tol,
        smallest_singular_value: rank.smallest_singular_value,
    }
}

/// Rank test on the matrix whose columns are the vectorized `i 1/sqrt(d)`
/// followed by the vectorized basis elements. Full means rank `d^2`, i.e.
/// the elements together with the identity span `u(d)`.
pub fn full_rank_test(basis: &LieBasis) -> RankTest {
    let d = basis.dim;
    let d2 = d * d;
    let identity = dense::identity(d) * Complex64::new(0.0, 1.0 / (d as f64).sqrt());
    let mut cols = Vec::with_capacity(basis.len() + 1);
    cols.push(dense::vectorize(&identity));
    cols.extend(basis.coords.iter().cloned());
    let m = nalgebra::DMatrix::from_columns(&cols);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > basis.tol * sigma_max).count();
    RankTest { is_full: rank == d2, rank, smallest_singular_value: sv.get(d2 - 1).copied().unwrap_or(0.0) }
}

/// Dimension of the span of the traceless parts `A - (Tr A / d) 1`.
pub fn traceless_dimension(basis: &LieBasis) -> usize {
    let d = basis.dim;
    let mut traceless = LieBasis::new(d, basis.tol).expect("validated on construction");
    for a in &basis.elements {
        let shift = a.trace() / Complex64::new(d as f64, 0.0);
        let t = a - dense::identity(d) * shift;
        traceless.extend_unchecked(&t, basis.tol);
    }
    traceless.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliSum;

    fn ip(s: &str) -> DenseOperator {
        PauliSum::from_terms(s.len(), &[(1.0, s)]).unwrap().to_dense().unwrap() * dense::I
    }

    #[test]
    fn extend_single_and_dependent() {
        let mut b = LieBasis::new(2, DEFAULT_TOL).unwrap();
        assert!(b.orthonormal_extend(&ip("X")).unwrap());
        assert_eq!(b.len(), 1);
        assert!(!b.orthonormal_extend(&(ip("X") * Complex64::new(3.0, 0.0))).unwrap());
        assert_eq!(b.len(), 1);
        assert_eq!(b.discarded(), 1);
        assert!(b.orthonormal_extend(&ip("Z")).unwrap());
        assert_eq!(b.len(), 2);
        assert!(b.gram_error() < 1e-15);
    }

    #[test]
    fn extend_rejects_hermitian_candidate() {
        let mut b = LieBasis::new(2, DEFAULT_TOL).unwrap();
        let herm = ip("X") * Complex64::new(0.0, -1.0);
        assert!(matches!(b.orthonormal_extend(&herm), Err(Error::Contract(_))));
        assert!(b.orthonormal_extend(&ip("XX")).is_err());
    }

    #[test]
    fn tolerance_must_be_in_unit_interval() {
        assert!(LieBasis::new(2, 0.0).is_err());
        assert!(LieBasis::new(2, 1.0).is_err());
        assert!(lie_closure(&[ip("X")], -1.0).is_err());
    }

    #[test]
    fn single_generator_closes_immediately() {
        let (b, r) = lie_closure(&[ip("X")], DEFAULT_TOL).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(r.dimension, 1);
        assert_eq!(r.traceless_dimension, 1);
        assert!(!r.is_full_su);
    }

    #[test]
    fn empty_or_non_finite_generators_fail() {
        assert!(lie_closure(&[], DEFAULT_TOL).is_err());
        let mut bad = ip("X");
        bad[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(lie_closure(&[bad], DEFAULT_TOL).is_err());
    }

    #[test]
    fn x_and_z_generate_su2() {
        let (_, r) = lie_closure(&[ip("X"), ip("Z")], DEFAULT_TOL).unwrap();
        assert_eq!(r.dimension, 3);
        assert_eq!(r.traceless_dimension, 3);
        assert!(r.is_full_su);
        assert!(!r.is_full_u);
    }

    #[test]
    fn traceless_dimension_cases() {
        let mut b = LieBasis::new(2, DEFAULT_TOL).unwrap();
        b.orthonormal_extend(&ip("I")).unwrap();
        assert_eq!(traceless_dimension(&b), 0);

        let mut b = LieBasis::new(2, DEFAULT_TOL).unwrap();
        for s in ["X", "Y", "Z"] {
            b.orthonormal_extend(&ip(s)).unwrap();
        }
        assert_eq!(traceless_dimension(&b), 3);
    }

    #[test]
    fn rank_test_cases() {
        let mut full = LieBasis::new(2, DEFAULT_TOL).unwrap();
        for s in ["I", "X", "Y", "Z"] {
            full.orthonormal_extend(&ip(s)).unwrap();
        }
        let t = full_rank_test(&full);
        assert!(t.is_full);
        assert_eq!(t.rank, 4);

        let mut single = LieBasis::new(2, DEFAULT_TOL).unwrap();
        single.orthonormal_extend(&ip("X")).unwrap();
        let t = full_rank_test(&single);
        assert!(!t.is_full);
        assert_eq!(t.smallest_singular_value, 0.0);

        let mut su2 = LieBasis::new(2, DEFAULT_TOL).unwrap();
        for s in ["X", "Y", "Z"] {
            su2.orthonormal_extend(&ip(s)).unwrap();
        }
        let t = full_rank_test(&su2);
        assert!(t.is_full);
        assert!((t.smallest_singular_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_component_is_tracked_separately() {
        // iX + i1 and iY, iZ: traceless parts span su(2) but the algebra
        // also contains i1 once [iY, iZ] = -2iX is added.
        let gens = [ip("X") + ip("I"), ip("Y"), ip("Z")];
        let (_, r) = lie_closure(&gens, DEFAULT_TOL).unwrap();
        assert_eq!(r.dimension, 4);
        assert_eq!(r.traceless_dimension, 3);
        assert!(r.is_full_u && r.is_full_su);
    }
}
