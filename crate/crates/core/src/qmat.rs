//! Small dense complex matrices for one- and two-qubit operators.
//!
//! Two-qubit operators use the basis |00⟩, |01⟩, |10⟩, |11⟩ with detector A
//! as the first (slow) tensor factor, so index `2 * a + b` addresses the
//! basis state |a b⟩.

use nalgebra::{Complex, DMatrix, SMatrix, SymmetricEigen, Vector2};
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type ComplexMatrix2 = SMatrix<C64, 2, 2>;
pub type ComplexMatrix4 = SMatrix<C64, 4, 4>;
pub type Ket2 = Vector2<C64>;

/// Maximum entrywise deviation from Hermiticity tolerated by [`DensityOperator`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum deviation of the trace from one tolerated by [`DensityOperator`].
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated by [`DensityOperator`].
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Default gap below which a 2×2 spectrum is reported as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

const EIGEN_INPUT_HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmatError {
    #[error("Pauli index must be 1, 2 or 3, got {0}")]
    InvalidPauliIndex(usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(DensityReport),
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn real(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// σ_x, σ_y, σ_z for `index` 1, 2, 3.
pub fn pauli(index: usize) -> Result<ComplexMatrix2, QmatError> {
    let (o, l, i) = (real(0.0), real(1.0), c(0.0, 1.0));
    match index {
        1 => Ok(ComplexMatrix2::new(o, l, l, o)),
        2 => Ok(ComplexMatrix2::new(o, -i, i, o)),
        3 => Ok(ComplexMatrix2::new(l, o, o, -l)),
        _ => Err(QmatError::InvalidPauliIndex(index)),
    }
}

/// The three Pauli matrices in order x, y, z.
pub fn paulis() -> [ComplexMatrix2; 3] {
    [1, 2, 3].map(|k| pauli(k).expect("valid index"))
}

/// Tensor product `a ⊗ b`; `a` acts on detector A.
pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Partial trace of an arbitrary 4×4 operator over `side`.
pub fn partial_trace_matrix(m: &ComplexMatrix4, side: Side) -> ComplexMatrix2 {
    ComplexMatrix2::from_fn(|i, j| match side {
        Side::A => m[(i, j)] + m[(2 + i, 2 + j)],
        Side::B => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
    })
}

pub fn partial_trace(rho: &DensityOperator4, side: Side) -> DensityOperator2 {
    DensityOperator::from_matrix_unchecked(hermitize(&partial_trace_matrix(rho.matrix(), side)))
}

pub fn hermitize<const N: usize>(m: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    (m + m.adjoint()) * real(0.5)
}

pub fn hermiticity_error<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_finite<const N: usize>(m: &SMatrix<C64, N, N>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigenvalues of the Hermitian part of `m`, sorted descending.
pub fn hermitian_eigenvalues<const N: usize>(m: &SMatrix<C64, N, N>) -> Vec<f64> {
    let h = hermitize(m);
    let dynamic = DMatrix::from_iterator(N, N, h.iter().cloned());
    let mut values: Vec<f64> = SymmetricEigen::new(dynamic).eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Half the trace norm of `rho - sigma`.
pub fn trace_distance<const N: usize>(rho: &SMatrix<C64, N, N>, sigma: &SMatrix<C64, N, N>) -> f64 {
    0.5 * hermitian_eigenvalues(&(rho - sigma)).iter().map(|v| v.abs()).sum::<f64>()
}

/// Bloch vector `r` of a 2×2 operator written as `(tr(m) I + r·σ) / 2`.
pub fn bloch_vector(m: &ComplexMatrix2) -> [f64; 3] {
    let off = m[(0, 1)] + m[(1, 0)].conj();
    [off.re, -off.im, (m[(0, 0)] - m[(1, 1)]).re]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotHermitian(f64),
    TraceNotOne(f64),
    NotPositive(f64),
    NonFinite,
}

/// Outcome of [`validate_density`]; `violations` is empty for a valid density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<Violation>,
}

impl DensityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for DensityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::NotHermitian(e) => format!("non-Hermitian by {e:e}"),
                Violation::TraceNotOne(e) => format!("trace off by {e:e}"),
                Violation::NotPositive(e) => format!("negative eigenvalue of magnitude {e:e}"),
                Violation::NonFinite => "non-finite entries".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Checks Hermiticity, unit trace and positivity, reporting every failure.
pub fn validate_density<const N: usize>(m: &SMatrix<C64, N, N>) -> DensityReport {
    if !is_finite(m) {
        return DensityReport {
            hermiticity_error: f64::NAN,
            trace_error: f64::NAN,
            min_eigenvalue: f64::NAN,
            violations: vec![Violation::NonFinite],
        };
    }
    let hermiticity_error = hermiticity_error(m);
    let trace = m.trace();
    let trace_error = (trace - real(1.0)).norm();
    let min_eigenvalue = *hermitian_eigenvalues(m).last().expect("non-empty spectrum");
    let mut violations = Vec::new();
    if hermiticity_error > HERMITICITY_TOL {
        violations.push(Violation::NotHermitian(hermiticity_error));
    }
    if trace_error > TRACE_TOL {
        violations.push(Violation::TraceNotOne(trace_error));
    }
    if min_eigenvalue < -POSITIVITY_TOL {
        violations.push(Violation::NotPositive(-min_eigenvalue));
    }
    DensityReport { hermiticity_error, trace_error, min_eigenvalue, violations }
}

/// A validated N×N density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<const N: usize> {
    matrix: SMatrix<C64, N, N>,
}

pub type DensityOperator2 = DensityOperator<2>;
pub type DensityOperator4 = DensityOperator<4>;

impl<const N: usize> DensityOperator<N> {
    pub fn new(matrix: SMatrix<C64, N, N>) -> Result<Self, QmatError> {
        let report = validate_density(&matrix);
        if report.is_ok() {
            Ok(Self { matrix })
        } else {
            Err(QmatError::InvalidDensity(report))
        }
    }

    /// Wraps a matrix the caller already knows to be a density operator
    /// (up to rounding), skipping the eigenvalue check.
    pub fn from_matrix_unchecked(matrix: SMatrix<C64, N, N>) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: SMatrix::<C64, N, N>::identity() * real(1.0 / N as f64) }
    }

    pub fn matrix(&self) -> &SMatrix<C64, N, N> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SMatrix<C64, N, N> {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *hermitian_eigenvalues(&self.matrix).last().expect("non-empty spectrum")
    }

    pub fn trace_distance(&self, other: &Self) -> f64 {
        trace_distance(&self.matrix, &other.matrix)
    }
}

impl DensityOperator4 {
    pub fn product(a: &DensityOperator2, b: &DensityOperator2) -> Self {
        Self { matrix: kron(&a.matrix, &b.matrix) }
    }

    /// Projector onto `|ψ⟩ = (|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let mut m = ComplexMatrix4::zeros();
        m[(1, 1)] = real(0.5);
        m[(2, 2)] = real(0.5);
        m[(1, 2)] = real(-0.5);
        m[(2, 1)] = real(-0.5);
        Self { matrix: m }
    }

    /// Projector onto the computational basis state with index `2a + b`.
    pub fn basis_state(index: usize) -> Self {
        let mut m = ComplexMatrix4::zeros();
        m[(index, index)] = real(1.0);
        Self { matrix: m }
    }
}

impl DensityOperator2 {
    pub fn from_bloch(r: [f64; 3]) -> Result<Self, QmatError> {
        let [x, y, z] = r;
        Self::new(ComplexMatrix2::new(
            real((1.0 + z) / 2.0),
            c(x / 2.0, -y / 2.0),
            c(x / 2.0, y / 2.0),
            real((1.0 - z) / 2.0),
        ))
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        bloch_vector(&self.matrix)
    }
}

/// Spectral decomposition of a Hermitian 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem2 {
    /// Sorted descending.
    pub eigenvalues: [f64; 2],
    /// Orthonormal; the first non-negligible component of each is real and positive.
    pub eigenvectors: [Ket2; 2],
    pub degenerate: bool,
}

impl EigenSystem2 {
    pub fn reconstruct(&self) -> ComplexMatrix2 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&l, v)| v * v.adjoint() * real(l))
            .sum()
    }
}

/// Rotates `v` so that its first component above rounding level is real positive.
pub(crate) fn fix_phase(v: Ket2) -> Ket2 {
    let scale = v.norm();
    match v.iter().find(|z| z.norm() > 1e-14 * scale.max(1e-300)) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v,
    }
}

/// Closed-form eigensystem of a Hermitian 2×2 matrix.
pub fn eigensystem2(m: &ComplexMatrix2, degeneracy_tol: f64) -> Result<EigenSystem2, QmatError> {
    let herr = hermiticity_error(m);
    if herr > EIGEN_INPUT_HERMITICITY_TOL || !is_finite(m) {
        return Err(QmatError::NotHermitian(herr));
    }
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    let (l1, l2) = (mean + radius, mean - radius);

    let first = if b.norm() == 0.0 {
        if a >= d {
            Ket2::new(real(1.0), real(0.0))
        } else {
            Ket2::new(real(0.0), real(1.0))
        }
    } else if a >= d {
        // second row of (m - λ₁)v = 0, well conditioned when a ≥ d
        Ket2::new(real(half_gap + radius), b.conj())
    } else {
        Ket2::new(b, real(-half_gap + radius))
    };
    let first = first.normalize();
    let second = Ket2::new(-first[1].conj(), first[0].conj());
    Ok(EigenSystem2 {
        eigenvalues: [l1, l2],
        eigenvectors: [fix_phase(first), fix_phase(second)],
        degenerate: (l1 - l2).abs() <= degeneracy_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close2(a: &ComplexMatrix2, b: &ComplexMatrix2, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    fn random_matrix2(rng: &mut ChaCha8Rng) -> ComplexMatrix2 {
        ComplexMatrix2::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn x_state(a: f64, b: f64, cc: f64, d: f64) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        m[(0, 0)] = real(a);
        m[(3, 3)] = real(b);
        m[(1, 1)] = real(cc);
        m[(2, 2)] = real(cc);
        m[(1, 2)] = real(d);
        m[(2, 1)] = real(d);
        m
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = paulis();
        assert_eq!(z, ComplexMatrix2::from_diagonal(&Ket2::new(real(1.0), real(-1.0))));
        assert!(close2(&(x * x), &ComplexMatrix2::identity(), 0.0));
        assert!(close2(&(x * y), &(z * c(0.0, 1.0)), 0.0));
        assert_eq!(pauli(0), Err(QmatError::InvalidPauliIndex(0)));
        assert_eq!(pauli(4), Err(QmatError::InvalidPauliIndex(4)));
    }

    #[test]
    fn kron_layout() {
        let id = ComplexMatrix2::identity();
        assert_eq!(kron(&id, &id), ComplexMatrix4::identity());
        let p0 = ComplexMatrix2::new(real(1.0), real(0.0), real(0.0), real(0.0));
        let expected = ComplexMatrix4::from_diagonal(&nalgebra::Vector4::new(
            real(1.0),
            real(1.0),
            real(0.0),
            real(0.0),
        ));
        assert_eq!(kron(&p0, &id), expected);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (a, b) = (random_matrix2(&mut rng), random_matrix2(&mut rng));
            assert!((kron(&a, &b).trace() - a.trace() * b.trace()).norm() < 1e-13);
        }
    }

    #[test]
    fn partial_trace_cases() {
        let rho_a = DensityOperator2::from_bloch([0.3, -0.2, 0.5]).unwrap();
        let rho_b = DensityOperator2::from_bloch([-0.1, 0.6, 0.1]).unwrap();
        let prod = DensityOperator4::product(&rho_a, &rho_b);
        assert!(close2(partial_trace(&prod, Side::A).matrix(), rho_b.matrix(), 1e-15));
        assert!(close2(partial_trace(&prod, Side::B).matrix(), rho_a.matrix(), 1e-15));

        let half = ComplexMatrix2::identity() * real(0.5);
        let singlet = DensityOperator4::singlet();
        assert!(close2(partial_trace(&singlet, Side::A).matrix(), &half, 0.0));

        // X-matrix marginal is diag(A + C, C + B) by index contraction
        let (a, b, cc, d) = (0.1, 0.5, 0.2, -0.15);
        let rho = DensityOperator4::new(x_state(a, b, cc, d)).unwrap();
        let marginal = partial_trace(&rho, Side::A);
        let expected = ComplexMatrix2::new(real(a + cc), real(0.0), real(0.0), real(cc + b));
        assert!(close2(marginal.matrix(), &expected, 1e-15));
    }

    #[test]
    fn eigensystem_diagonal_and_degenerate() {
        let m = ComplexMatrix2::new(real(0.7), real(0.0), real(0.0), real(0.3));
        let es = eigensystem2(&m, DEFAULT_DEGENERACY_TOL).unwrap();
        assert!((es.eigenvalues[0] - 0.7).abs() < 1e-15 && (es.eigenvalues[1] - 0.3).abs() < 1e-15);
        assert_eq!(es.eigenvectors[0], Ket2::new(real(1.0), real(0.0)));
        assert_eq!(es.eigenvectors[1], Ket2::new(real(0.0), real(1.0)));
        assert!(!es.degenerate);

        let m = ComplexMatrix2::new(real(0.3), real(0.0), real(0.0), real(0.7));
        let es = eigensystem2(&m, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(es.eigenvectors[0], Ket2::new(real(0.0), real(1.0)));

        let half = ComplexMatrix2::identity() * real(0.5);
        assert!(eigensystem2(&half, DEFAULT_DEGENERACY_TOL).unwrap().degenerate);

        let bad = ComplexMatrix2::new(real(1.0), real(1.0), real(0.0), real(0.0));
        assert!(matches!(eigensystem2(&bad, 1e-9), Err(QmatError::NotHermitian(_))));
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let m = hermitize(&random_matrix2(&mut rng));
            let es = eigensystem2(&m, DEFAULT_DEGENERACY_TOL).unwrap();
            assert!(es.eigenvalues[0] >= es.eigenvalues[1]);
            assert!(close2(&es.reconstruct(), &m, 1e-10));
            let [u, v] = &es.eigenvectors;
            assert!((u.dotc(u) - real(1.0)).norm() < 1e-12);
            assert!((v.dotc(v) - real(1.0)).norm() < 1e-12);
            assert!(u.dotc(v).norm() < 1e-12);
            for vec in [u, v] {
                let lead = vec.iter().find(|z| z.norm() > 1e-14).unwrap();
                assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
            }
        }
    }

    #[test]
    fn density_validation_reports() {
        assert!(validate_density(&(ComplexMatrix4::identity() * real(0.25))).is_ok());
        let report = validate_density(&ComplexMatrix2::new(real(1.5), real(0.0), real(0.0), real(-0.5)));
        assert_eq!(report.violations, vec![Violation::NotPositive(0.5)]);

        let report = validate_density(&ComplexMatrix2::new(real(0.5), real(0.2), real(0.0), real(0.6)));
        assert!(matches!(report.violations[0], Violation::NotHermitian(_)));
        assert!(matches!(report.violations[1], Violation::TraceNotOne(_)));

        // steady state at (Δ₀ = 0.5, γ = 0.3)
        let (dd, g) = (0.5f64, 0.3f64);
        let den = 3.0 + g * g;
        let a = (3.0 + dd) * (g - 1.0).powi(2) / (4.0 * den);
        let b = (3.0 + dd) * (g + 1.0).powi(2) / (4.0 * den);
        let cc = (3.0 - dd - (dd + 1.0) * g * g) / (4.0 * den);
        let d = (dd - g * g) / (2.0 * den);
        assert!(validate_density(&x_state(a, b, cc, d)).is_ok());
    }

    #[test]
    fn trace_distance_of_orthogonal_states_is_one() {
        let a = DensityOperator4::basis_state(0);
        let b = DensityOperator4::basis_state(3);
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-14);
        assert!(a.trace_distance(&a) < 1e-15);
    }
}
