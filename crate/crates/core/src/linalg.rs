//! Dense square matrices, Kronecker-product application, and the resolvent
//! solve at the heart of the replacement score.
//!
//! Teams are small (single-digit sizes), so matrices are plain row-major
//! buffers. The one thing never built explicitly is the t²×t² Kronecker
//! product: both the product-vector application and the resolvent work
//! through the reshape identity instead.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of power-iteration steps behind [`spectral_radius_estimate`].
pub const POWER_ITERATION_STEPS: usize = 100;

/// Admissibility margin: the solve requires μ·ρ̂(A)·ρ̂(B) < this bound.
pub const SPECTRAL_SAFETY_BOUND: f64 = 0.95;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Real> SquareMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![F::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Matrix-vector product; panics if the length disagrees (internal use).
    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim, "vector length must equal matrix dimension");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }
}

/// Diagonal matrix stored as its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal<F> {
    entries: Vec<F>,
}

impl<F: Real> Diagonal<F> {
    pub fn new(entries: Vec<F>) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: vec![F::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn entry(&self, i: usize) -> F {
        self.entries[i]
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == F::zero())
    }

    /// Entrywise product with another diagonal.
    pub fn compose(&self, other: &Diagonal<F>) -> Result<Diagonal<F>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal dimensions {} and {} differ",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Diagonal::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a * b)
                .collect(),
        ))
    }

    pub fn to_square(&self) -> SquareMatrix<F> {
        let mut m = SquareMatrix::zeros(self.dim());
        for (i, &e) in self.entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }
}

fn check_kron_dims(a_dim: usize, b_dim: usize, v_len: usize) -> Result<()> {
    if a_dim * b_dim != v_len {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {v_len} does not match Kronecker factors {a_dim}x{a_dim} and {b_dim}x{b_dim}"
        )));
    }
    Ok(())
}

/// Apply `(A ⊗ B)` to `v` without forming the product matrix.
///
/// With `v` read row-major as a matrix `X` (`X[j][l] = v[j·n+l]`), the
/// identity `(A⊗B)·vec(X) = vec(A·X·Bᵀ)` reduces the product to two small
/// matrix multiplications.
pub fn kron_apply<F: Real>(a: &SquareMatrix<F>, b: &SquareMatrix<F>, v: &[F]) -> Result<Vec<F>> {
    let (m, n) = (a.dim(), b.dim());
    check_kron_dims(m, n, v.len())?;

    // Y = X · Bᵀ, so Y[j][k] = Σ_l v[j·n+l] · B[k][l].
    let mut y = vec![F::zero(); m * n];
    for j in 0..m {
        let x_row = &v[j * n..(j + 1) * n];
        for k in 0..n {
            y[j * n + k] = b.row(k).iter().zip(x_row).map(|(&bb, &xx)| bb * xx).sum();
        }
    }
    // Z = A · Y, flattened row-major.
    let mut out = vec![F::zero(); m * n];
    for i in 0..m {
        for j in 0..m {
            let a_ij = a.get(i, j);
            if a_ij == F::zero() {
                continue;
            }
            for k in 0..n {
                out[i * n + k] += a_ij * y[j * n + k];
            }
        }
    }
    Ok(out)
}

/// Apply `(D_a ⊗ D_b)` to `v` for diagonal factors: a pure entrywise scale.
pub fn kron_apply_diagonal<F: Real>(a: &Diagonal<F>, b: &Diagonal<F>, v: &[F]) -> Result<Vec<F>> {
    let (m, n) = (a.dim(), b.dim());
    check_kron_dims(m, n, v.len())?;
    let mut out = Vec::with_capacity(m * n);
    for i in 0..m {
        let ai = a.entry(i);
        for k in 0..n {
            out.push(ai * b.entry(k) * v[i * n + k]);
        }
    }
    Ok(out)
}

/// Largest-eigenvalue estimate for a symmetric non-negative matrix.
///
/// Power iteration runs on `A + I` — the shift keeps bipartite-style spectra
/// (±λ pairs) from stalling the iteration — and the returned value is the
/// Rayleigh quotient of the final iterate under `A` itself.
pub fn spectral_radius_estimate<F: Real>(m: &SquareMatrix<F>, steps: usize) -> F {
    let t = m.dim();
    if t == 0 {
        return F::zero();
    }
    let mut v = vec![F::one(); t];
    for _ in 0..steps {
        let mut w = m.mul_vec(&v);
        for (wi, &vi) in w.iter_mut().zip(&v) {
            *wi += vi;
        }
        let norm = w.iter().fold(F::zero(), |acc, &x| acc.max(x.abs()));
        if norm == F::zero() {
            return F::zero();
        }
        for x in &mut w {
            *x /= norm;
        }
        v = w;
    }
    let av = m.mul_vec(&v);
    let numerator: F = v.iter().zip(&av).map(|(&a, &b)| a * b).sum();
    let denominator: F = v.iter().map(|&a| a * a).sum();
    (numerator / denominator).max(F::zero())
}

/// Iteration controls for [`resolvent_apply`].
///
/// The default tolerance suits `f64`; lower-precision scalars need a looser
/// one to terminate.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<F> {
    /// Successive-iterate max-norm below which the solve is converged.
    pub tolerance: F,
    pub max_iterations: usize,
}

impl<F: Real> Default for SolveOptions<F> {
    fn default() -> Self {
        Self {
            tolerance: F::from_f64(1e-10).expect("tolerance representable"),
            max_iterations: 10_000,
        }
    }
}

/// Solve `(I − μ·(A_old ⊗ B_new))·y = v` by fixed-point iteration.
///
/// Admissibility is checked first: μ times the product of the two estimated
/// spectral radii must stay under [`SPECTRAL_SAFETY_BOUND`], otherwise the
/// geometric series behind the iteration has no business converging and the
/// call fails loudly. The iteration is `y ← v + μ·(A⊗B)·y` starting from `v`,
/// stopping when two successive iterates agree to `tolerance` in max-norm.
pub fn resolvent_apply<F: Real>(
    a_old: &SquareMatrix<F>,
    a_new: &SquareMatrix<F>,
    decay: F,
    v: &[F],
    options: &SolveOptions<F>,
) -> Result<Vec<F>> {
    check_kron_dims(a_old.dim(), a_new.dim(), v.len())?;
    let mu = decay.as_f64();
    if !(mu >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "decay must be non-negative and finite, got {mu}"
        )));
    }
    let radius_product = spectral_radius_estimate(a_old, POWER_ITERATION_STEPS).as_f64()
        * spectral_radius_estimate(a_new, POWER_ITERATION_STEPS).as_f64();
    if mu * radius_product >= SPECTRAL_SAFETY_BOUND {
        return Err(Error::SpectralCondition {
            decay: mu,
            bound: SPECTRAL_SAFETY_BOUND,
            radius_product,
        });
    }

    let mut y = v.to_vec();
    let mut residual = F::infinity();
    for _ in 0..options.max_iterations {
        let ky = kron_apply(a_old, a_new, &y)?;
        let next: Vec<F> = v
            .iter()
            .zip(&ky)
            .map(|(&vi, &ki)| vi + decay * ki)
            .collect();
        residual = next
            .iter()
            .zip(&y)
            .fold(F::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
        y = next;
        if residual < options.tolerance {
            return Ok(y);
        }
    }
    Err(Error::NonConvergence {
        max_iterations: options.max_iterations,
        residual: residual.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_dense(m: &SquareMatrix<f64>) -> Vec<Vec<f64>> {
        (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
    }

    #[test]
    fn identity_kron_leaves_vector_unchanged() {
        let a = SquareMatrix::<f64>::identity(3);
        let b = SquareMatrix::<f64>::identity(2);
        let v: Vec<f64> = (0..6).map(|i| i as f64).collect();
        assert_eq!(kron_apply(&a, &b, &v).unwrap(), v);
    }

    #[test]
    fn zero_factor_annihilates() {
        let a = SquareMatrix::<f64>::zeros(3);
        let b = SquareMatrix::<f64>::identity(3);
        let v = vec![1.0; 9];
        assert_eq!(kron_apply(&a, &b, &v).unwrap(), vec![0.0; 9]);
    }

    #[test]
    fn matches_explicit_materialization() {
        let a = SquareMatrix::from_rows(vec![
            vec![0.3, 1.2, 0.0],
            vec![0.7, 0.1, 2.0],
            vec![0.0, 0.5, 0.9],
        ])
        .unwrap();
        let b = SquareMatrix::from_rows(vec![
            vec![1.0, 0.2, 0.4],
            vec![0.6, 0.0, 1.1],
            vec![0.3, 0.8, 0.5],
        ])
        .unwrap();
        let v: Vec<f64> = (1..=9).map(|i| i as f64 / 3.0).collect();
        let fast = kron_apply(&a, &b, &v).unwrap();
        let slow = omr_oracle::dense_kron_apply(&to_dense(&a), &to_dense(&b), &v);
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = SquareMatrix::<f64>::identity(2);
        let b = SquareMatrix::<f64>::identity(2);
        assert!(matches!(
            kron_apply(&a, &b, &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn diagonal_kron_agrees_with_square_form() {
        let d1 = Diagonal::new(vec![0.5, 2.0, 0.0]);
        let d2 = Diagonal::new(vec![1.5, 0.25]);
        let v: Vec<f64> = (0..6).map(|i| (i as f64).sin()).collect();
        let fast = kron_apply_diagonal(&d1, &d2, &v).unwrap();
        let square = kron_apply(&d1.to_square(), &d2.to_square(), &v).unwrap();
        for (x, y) in fast.iter().zip(&square) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(matches!(
            SquareMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn radius_of_known_graphs() {
        // Single edge: eigenvalues ±1.
        let k2 =
            SquareMatrix::<f64>::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((spectral_radius_estimate(&k2, POWER_ITERATION_STEPS) - 1.0).abs() < 1e-9);

        // Three-vertex path: radius √2, a bipartite spectrum that defeats
        // unshifted power iteration.
        let path = SquareMatrix::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        let est = spectral_radius_estimate(&path, POWER_ITERATION_STEPS);
        assert!((est - 2.0_f64.sqrt()).abs() < 1e-9, "estimate {est}");

        // Complete graph on 4 vertices: radius 3.
        let mut k4 = SquareMatrix::<f64>::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    k4.set(i, j, 1.0);
                }
            }
        }
        assert!((spectral_radius_estimate(&k4, POWER_ITERATION_STEPS) - 3.0).abs() < 1e-9);

        assert_eq!(
            spectral_radius_estimate(&SquareMatrix::<f64>::zeros(3), POWER_ITERATION_STEPS),
            0.0
        );

        let diag = Diagonal::<f64>::new(vec![3.0, 1.0, 0.5]).to_square();
        assert!((spectral_radius_estimate(&diag, POWER_ITERATION_STEPS) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn zero_decay_returns_input() {
        let a = SquareMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let v = vec![0.1, 0.2, 0.3, 0.4];
        let y = resolvent_apply(&a, &a, 0.0, &v, &SolveOptions::default()).unwrap();
        assert_eq!(y, v);
    }

    #[test]
    fn matches_dense_direct_solve() {
        let a = SquareMatrix::from_rows(vec![vec![0.0, 0.8], vec![0.8, 0.0]]).unwrap();
        let b = SquareMatrix::from_rows(vec![vec![0.0, 0.6], vec![0.6, 0.0]]).unwrap();
        let v = vec![0.25, 0.1, 0.4, 0.25];
        let mu = 0.1;
        let fast = resolvent_apply(&a, &b, mu, &v, &SolveOptions::default()).unwrap();
        let slow =
            omr_oracle::dense_resolvent_solve(&to_dense(&a), &to_dense(&b), mu, &v).unwrap();
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn inadmissible_decay_is_a_hard_error() {
        // ρ = 1 on both sides, so μ = 1.2 breaks μ·ρ·ρ < 0.95.
        let a = SquareMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        match resolvent_apply(&a, &a, 1.2, &[1.0; 4], &SolveOptions::default()) {
            Err(Error::SpectralCondition {
                decay,
                bound,
                radius_product,
            }) => {
                assert_eq!(decay, 1.2);
                assert_eq!(bound, SPECTRAL_SAFETY_BOUND);
                assert!((radius_product - 1.0).abs() < 1e-9);
            }
            other => panic!("expected SpectralCondition, got {other:?}"),
        }
    }

    #[test]
    fn iteration_budget_exhaustion_is_reported() {
        let a = SquareMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let options = SolveOptions {
            tolerance: 1e-10,
            max_iterations: 2,
        };
        // μ·ρ² = 0.9: admissible but far too slow for two iterations.
        match resolvent_apply(&a, &a, 0.9, &[1.0; 4], &options) {
            Err(Error::NonConvergence {
                max_iterations,
                residual,
            }) => {
                assert_eq!(max_iterations, 2);
                assert!(residual > 1e-10);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn negative_decay_is_rejected() {
        let a = SquareMatrix::<f64>::zeros(2);
        assert!(matches!(
            resolvent_apply(&a, &a, -0.5, &[1.0; 4], &SolveOptions::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let a =
            SquareMatrix::<f32>::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let v = vec![1.0_f32, 0.0, 0.0, 1.0];
        let options = SolveOptions {
            tolerance: 1e-5_f32,
            max_iterations: 10_000,
        };
        let y = resolvent_apply(&a, &a, 0.2_f32, &v, &options).unwrap();
        // Fixed point satisfies y = v + μ(A⊗A)y.
        let ky = kron_apply(&a, &a, &y).unwrap();
        for i in 0..4 {
            assert!((y[i] - (v[i] + 0.2 * ky[i])).abs() < 1e-4);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn matrix_from(data: &[f64], dim: usize) -> SquareMatrix<f64> {
            SquareMatrix::from_rows(data.chunks(dim).map(<[f64]>::to_vec).collect()).unwrap()
        }

        proptest! {
            #[test]
            fn kron_apply_matches_dense_oracle(
                (m, a_data, n, b_data, v) in (2usize..6, 2usize..6).prop_flat_map(|(m, n)| (
                    Just(m),
                    prop::collection::vec(0.0..1.0f64, m * m),
                    Just(n),
                    prop::collection::vec(0.0..1.0f64, n * n),
                    prop::collection::vec(-1.0..1.0f64, m * n),
                ))
            ) {
                let a = matrix_from(&a_data, m);
                let b = matrix_from(&b_data, n);
                let fast = kron_apply(&a, &b, &v).unwrap();
                let slow = omr_oracle::dense_kron_apply(&to_dense(&a), &to_dense(&b), &v);
                for (x, y) in fast.iter().zip(&slow) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }

            #[test]
            fn resolvent_solves_its_equation(mask in any::<u32>(), mu in 0.0..0.2f64) {
                // Random symmetric 3x3 with entries in {0, 0.5, 1}.
                let mut a = SquareMatrix::<f64>::zeros(3);
                let mut bits = mask;
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        let w = (bits & 3) as f64 / 2.0;
                        bits >>= 2;
                        a.set(i, j, w);
                        a.set(j, i, w);
                    }
                }
                let v = vec![0.2, 0.1, 0.0, 0.3, 0.05, 0.15, 0.1, 0.05, 0.05];
                let result = resolvent_apply(&a, &a, mu, &v, &SolveOptions::default());
                let rho = spectral_radius_estimate(&a, POWER_ITERATION_STEPS);
                if mu * rho * rho < SPECTRAL_SAFETY_BOUND {
                    let y = result.unwrap();
                    let ky = kron_apply(&a, &a, &y).unwrap();
                    for i in 0..9 {
                        prop_assert!((y[i] - mu * ky[i] - v[i]).abs() < 1e-8);
                    }
                } else {
                    prop_assert!(result.is_err());
                }
            }
        }
    }
}
