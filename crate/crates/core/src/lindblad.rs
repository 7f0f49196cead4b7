//! Markovian master equation for two detectors coupled collectively to a
//! thermal (Unruh) scalar field.
//!
//! The dissipator uses one Kossakowski matrix
//! C = (γ₊/2)·I − i(γ₋/2)·ε₍ᵢⱼ₃₎ + γ₀·e₃e₃ᵀ for every pair of detectors, so it
//! is written in terms of the collective operators Σᵢ = σᵢ⊗I + I⊗σᵢ.

use nalgebra::{DMatrix, DVector, SMatrix, SymmetricEigen};
use thiserror::Error;

use crate::qmat::{
    c, hermitize, is_finite, kron, paulis, real, validate_density, ComplexMatrix2, ComplexMatrix4,
    DensityOperator4, C64,
};
use crate::udw_state::{delta_observable, StateError};

pub type ComplexMatrix3 = SMatrix<C64, 3, 3>;

const RATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated along a trajectory before the step is rejected.
pub const STEP_POSITIVITY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LindbladError {
    #[error("invalid rates: {0}")]
    InvalidRates(&'static str),
    #[error("effective gap must be positive and finite, got {0}")]
    InvalidGap(f64),
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("rate scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("dt must be positive and tau_max >= dt (dt = {dt}, tau_max = {tau_max})")]
    InvalidTimeGrid { dt: f64, tau_max: f64 },
    #[error("step too large: eigenvalue {min_eigenvalue:e} at tau = {tau}; try dt <= {suggested_dt:e}")]
    StepTooLarge { tau: f64, min_eigenvalue: f64, suggested_dt: f64 },
    #[error("no fixed point with delta = {delta0} (residual {residual:e})")]
    NoFixedPointInSector { delta0: f64, residual: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Symmetric, antisymmetric and dephasing rates (γ₊, γ₋, γ₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma_zero: f64,
}

impl RateTriple {
    pub fn new(gamma_plus: f64, gamma_minus: f64, gamma_zero: f64) -> Result<Self, LindbladError> {
        if ![gamma_plus, gamma_minus, gamma_zero].iter().all(|v| v.is_finite()) {
            return Err(LindbladError::InvalidRates("non-finite rate"));
        }
        if gamma_plus <= 0.0 {
            return Err(LindbladError::InvalidRates("gamma_plus must be positive"));
        }
        let tol = RATE_TOL * gamma_plus;
        if gamma_plus + tol < gamma_minus.abs() {
            return Err(LindbladError::InvalidRates("gamma_plus < |gamma_minus|"));
        }
        if gamma_plus / 2.0 + gamma_zero < -tol {
            return Err(LindbladError::InvalidRates("gamma_plus/2 + gamma_zero < 0"));
        }
        Ok(Self { gamma_plus, gamma_minus, gamma_zero })
    }

    pub fn with_gamma_zero(&self, gamma_zero: f64) -> Result<Self, LindbladError> {
        Self::new(self.gamma_plus, self.gamma_minus, gamma_zero)
    }

    /// γ₋/γ₊, which equals tanh(ω/2T) for rates obeying detailed balance.
    pub fn ratio(&self) -> f64 {
        self.gamma_minus / self.gamma_plus
    }
}

fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Default field response G(λ) = scale·λ / (1 − e^{−λ/T}) with G(0) = scale·T.
///
/// Satisfies G(λ) = e^{λ/T} G(−λ) for all λ.
pub fn unruh_spectral_profile(lambda: f64, temperature: f64, scale: f64) -> Result<f64, LindbladError> {
    if !positive_finite(temperature) {
        return Err(LindbladError::InvalidTemperature(temperature));
    }
    if !positive_finite(scale) {
        return Err(LindbladError::InvalidScale(scale));
    }
    let x = lambda / temperature;
    if x == 0.0 {
        return Ok(scale * temperature);
    }
    Ok(scale * lambda / -(-x).exp_m1())
}

/// Rates induced by [`unruh_spectral_profile`] at gap `omega`.
pub fn unruh_rates(omega: f64, temperature: f64, scale: f64) -> Result<RateTriple, LindbladError> {
    if !positive_finite(omega) {
        return Err(LindbladError::State(StateError::InvalidOmega(omega)));
    }
    let up = unruh_spectral_profile(omega, temperature, scale)?;
    let down = unruh_spectral_profile(-omega, temperature, scale)?;
    let zero = unruh_spectral_profile(0.0, temperature, scale)?;
    let gamma_plus = up + down;
    RateTriple::new(gamma_plus, up - down, zero - gamma_plus / 2.0)
}

/// Positive semidefinite 3×3 coefficient matrix of the dissipator.
#[derive(Debug, Clone, PartialEq)]
pub struct KossakowskiMatrix(ComplexMatrix3);

impl KossakowskiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix3 {
        &self.0
    }

    /// Sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = hermitize(&self.0);
        let dynamic = DMatrix::from_iterator(3, 3, h.iter().cloned());
        let mut v: Vec<f64> = SymmetricEigen::new(dynamic).eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

pub fn kossakowski(rates: &RateTriple) -> Result<KossakowskiMatrix, LindbladError> {
    let RateTriple { gamma_plus, gamma_minus, gamma_zero } = *rates;
    let mut m = ComplexMatrix3::identity() * real(gamma_plus / 2.0);
    // −i(γ₋/2) ε_{ij3}: ε₁₂₃ = 1, ε₂₁₃ = −1
    m[(0, 1)] = c(0.0, -gamma_minus / 2.0);
    m[(1, 0)] = c(0.0, gamma_minus / 2.0);
    m[(2, 2)] += real(gamma_zero);
    let km = KossakowskiMatrix(m);
    let smallest = *km.eigenvalues().last().expect("3 eigenvalues");
    if smallest < -RATE_TOL * gamma_plus.abs().max(1.0) {
        return Err(LindbladError::InvalidRates("Kossakowski matrix not positive semidefinite"));
    }
    Ok(km)
}

/// Gap entering the effective Hamiltonian (ω̃/2)Σ₃, and the dissipative rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladParams {
    pub effective_gap: f64,
    pub rates: RateTriple,
}

impl LindbladParams {
    pub fn new(effective_gap: f64, rates: RateTriple) -> Result<Self, LindbladError> {
        if !positive_finite(effective_gap) {
            return Err(LindbladError::InvalidGap(effective_gap));
        }
        Ok(Self { effective_gap, rates })
    }

    /// Unruh rates at (ω, T) with ω̃ = ω.
    pub fn unruh(omega: f64, temperature: f64, scale: f64) -> Result<Self, LindbladError> {
        Self::new(omega, unruh_rates(omega, temperature, scale)?)
    }

    pub fn default_dt(&self) -> f64 {
        0.01 / self.rates.gamma_plus
    }

    pub fn default_tau_max(&self) -> f64 {
        40.0 / self.rates.gamma_plus
    }
}

/// Precomputed pieces of ρ ↦ −i[H, ρ] + Σᵢⱼ Cᵢⱼ(Σⱼ ρ Σᵢ − ½{ΣᵢΣⱼ, ρ}).
#[derive(Debug, Clone)]
pub struct Generator {
    hamiltonian: ComplexMatrix4,
    collective: [ComplexMatrix4; 3],
    coefficients: ComplexMatrix3,
    /// Σᵢⱼ Cᵢⱼ ΣᵢΣⱼ
    anticommutator_part: ComplexMatrix4,
}

/// σᵢ⊗I + I⊗σᵢ for i = x, y, z.
pub fn collective_operators() -> [ComplexMatrix4; 3] {
    let id = ComplexMatrix2::identity();
    paulis().map(|s| kron(&s, &id) + kron(&id, &s))
}

impl Generator {
    pub fn new(params: &LindbladParams) -> Result<Self, LindbladError> {
        let coefficients = *kossakowski(&params.rates)?.matrix();
        let collective = collective_operators();
        let hamiltonian = collective[2] * real(params.effective_gap / 2.0);
        let mut anticommutator_part = ComplexMatrix4::zeros();
        for i in 0..3 {
            for j in 0..3 {
                anticommutator_part += collective[i] * collective[j] * coefficients[(i, j)];
            }
        }
        Ok(Self { hamiltonian, collective, coefficients, anticommutator_part })
    }

    pub fn apply(&self, rho: &ComplexMatrix4) -> ComplexMatrix4 {
        let i = c(0.0, 1.0);
        let mut out = (self.hamiltonian * rho - rho * self.hamiltonian) * -i;
        out -= (self.anticommutator_part * rho + rho * self.anticommutator_part) * real(0.5);
        for a in 0..3 {
            for b in 0..3 {
                let coeff = self.coefficients[(a, b)];
                if coeff != real(0.0) {
                    out += self.collective[b] * rho * self.collective[a] * coeff;
                }
            }
        }
        out
    }

    /// 16×16 matrix of the generator acting on row-major vec(ρ).
    pub fn superoperator(&self) -> DMatrix<C64> {
        let mut sup = DMatrix::<C64>::zeros(16, 16);
        for col in 0..16 {
            let mut basis = ComplexMatrix4::zeros();
            basis[(col / 4, col % 4)] = real(1.0);
            let image = self.apply(&basis);
            for row in 0..16 {
                sup[(row, col)] = image[(row / 4, row % 4)];
            }
        }
        sup
    }
}

/// dρ/dτ for the master equation; traceless and Hermitian.
pub fn generator(rho: &DensityOperator4, params: &LindbladParams) -> Result<ComplexMatrix4, LindbladError> {
    Ok(Generator::new(params)?.apply(rho.matrix()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator4>,
}

impl Trajectory {
    pub fn last(&self) -> &DensityOperator4 {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn rk4_step(gen: &Generator, rho: &ComplexMatrix4, h: f64) -> ComplexMatrix4 {
    let k1 = gen.apply(rho);
    let k2 = gen.apply(&(rho + k1 * real(h / 2.0)));
    let k3 = gen.apply(&(rho + k2 * real(h / 2.0)));
    let k4 = gen.apply(&(rho + k3 * real(h)));
    rho + (k1 + (k2 + k3) * real(2.0) + k4) * real(h / 6.0)
}

/// Integrates from τ = 0 to `tau_max` with classical RK4, storing every state.
pub fn evolve(
    rho0: &DensityOperator4,
    params: &LindbladParams,
    tau_max: f64,
    dt: f64,
) -> Result<Trajectory, LindbladError> {
    evolve_strided(rho0, params, tau_max, dt, 1)
}

/// As [`evolve`], storing every `stride`-th state plus the final one.
///
/// The step is shrunk to `tau_max / ceil(tau_max / dt)` so the grid ends
/// exactly at `tau_max`.
pub fn evolve_strided(
    rho0: &DensityOperator4,
    params: &LindbladParams,
    tau_max: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory, LindbladError> {
    if !(positive_finite(dt) && tau_max.is_finite() && tau_max >= dt) {
        return Err(LindbladError::InvalidTimeGrid { dt, tau_max });
    }
    let stride = stride.max(1);
    let gen = Generator::new(params)?;
    let steps = (tau_max / dt - 1e-9).ceil().max(1.0) as usize;
    let h = tau_max / steps as f64;

    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut rho = *rho0.matrix();
    for n in 1..=steps {
        rho = hermitize(&rk4_step(&gen, &rho, h));
        let tau = n as f64 * h;
        let report = validate_density(&rho);
        if !is_finite(&rho) || report.min_eigenvalue < -STEP_POSITIVITY_TOL || report.min_eigenvalue.is_nan() {
            return Err(LindbladError::StepTooLarge {
                tau,
                min_eigenvalue: report.min_eigenvalue,
                suggested_dt: h / 2.0,
            });
        }
        if n % stride == 0 || n == steps {
            times.push(tau);
            states.push(DensityOperator4::from_matrix_unchecked(rho));
        }
    }
    Ok(Trajectory { times, states })
}

/// Fixed point of the generator found by linear algebra, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpaceSteadyState {
    pub state: DensityOperator4,
    /// Number of singular values of the superoperator below the rank tolerance.
    pub kernel_dimension: usize,
    /// ‖L vec(ρ)‖ for the returned state.
    pub residual: f64,
}

const RANK_TOL: f64 = 1e-10;

/// Solves L(ρ) = 0 together with tr ρ = 1 and Σᵢ tr[ρ σᵢ⊗σᵢ] = `delta0_sector`.
///
/// The generator conserves Δ, so its kernel holds one fixed point per
/// Δ-sector; the two linear constraints pick the requested one.
pub fn steady_state_numeric(
    params: &LindbladParams,
    delta0_sector: f64,
) -> Result<NullSpaceSteadyState, LindbladError> {
    crate::udw_state::check_delta0(delta0_sector)?;
    let gen = Generator::new(params)?;
    let sup = gen.superoperator();

    let singular = sup.clone().svd(false, false).singular_values;
    let largest = singular.max();
    let kernel_dimension = singular.iter().filter(|&&s| s <= RANK_TOL * largest).count();

    let delta_op = delta_observable();
    let mut system = DMatrix::<C64>::zeros(18, 16);
    system.view_mut((0, 0), (16, 16)).copy_from(&sup);
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                system[(16, 4 * i + j)] = real(1.0);
            }
            system[(17, 4 * i + j)] = delta_op[(j, i)];
        }
    }
    let mut rhs = DVector::<C64>::zeros(18);
    rhs[16] = real(1.0);
    rhs[17] = real(delta0_sector);

    let solution = system
        .clone()
        .svd(true, true)
        .solve(&rhs, RANK_TOL * largest)
        .map_err(|_| LindbladError::NoFixedPointInSector { delta0: delta0_sector, residual: f64::NAN })?;
    let constraint_residual = (&system * &solution - &rhs).norm();

    let rho = hermitize(&ComplexMatrix4::from_fn(|i, j| solution[4 * i + j]));
    let residual = gen.apply(&rho).norm();
    let scale = params.rates.gamma_plus.max(params.effective_gap);
    if residual > 1e-9 * scale || constraint_residual > 1e-9 * scale.max(1.0) {
        return Err(LindbladError::NoFixedPointInSector {
            delta0: delta0_sector,
            residual: residual.max(constraint_residual),
        });
    }
    let state = DensityOperator4::new(rho)
        .map_err(|_| LindbladError::NoFixedPointInSector { delta0: delta0_sector, residual })?;
    Ok(NullSpaceSteadyState { state, kernel_dimension, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::udw_state::{coeffs_to_density, delta_of_state, gamma_ratio, steady_state_coeffs};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut ChaCha8Rng) -> DensityOperator4 {
        let g = ComplexMatrix4::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = g * g.adjoint();
        let t = m.trace();
        DensityOperator4::new(m / t).unwrap()
    }

    /// Dissipator written as the explicit sum over detector pairs (α, β).
    fn pairwise_dissipator(rho: &ComplexMatrix4, coeffs: &ComplexMatrix3) -> ComplexMatrix4 {
        let id = ComplexMatrix2::identity();
        let s = paulis();
        let local = |i: usize, alpha: usize| if alpha == 0 { kron(&s[i], &id) } else { kron(&id, &s[i]) };
        let mut out = ComplexMatrix4::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for alpha in 0..2 {
                    for beta in 0..2 {
                        let si = local(i, alpha);
                        let sj = local(j, beta);
                        let term = sj * rho * si * real(2.0) - (si * sj * rho + rho * si * sj);
                        out += term * (coeffs[(i, j)] * 0.5);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn profile_obeys_detailed_balance() {
        let ratio = unruh_spectral_profile(1.0, 0.5, 1.0).unwrap() / unruh_spectral_profile(-1.0, 0.5, 1.0).unwrap();
        assert!((ratio - 2f64.exp()).abs() < 1e-13);
        assert_eq!(unruh_spectral_profile(0.0, 0.7, 2.0).unwrap(), 1.4);
        // continuity at λ = 0
        assert!((unruh_spectral_profile(1e-9, 0.7, 2.0).unwrap() - 1.4).abs() < 1e-8);
        for t in [0.1, 1.0, 10.0] {
            let odd = unruh_spectral_profile(2.0, t, 3.0).unwrap() - unruh_spectral_profile(-2.0, t, 3.0).unwrap();
            assert!((odd - 6.0).abs() < 1e-12);
        }
        assert!(unruh_spectral_profile(1.0, 0.0, 1.0).is_err());
        assert!(unruh_spectral_profile(1.0, 1.0, -1.0).is_err());
        assert_eq!(unruh_spectral_profile(-1e4, 1e-2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn rates_from_profile() {
        let r = unruh_rates(1.0, 0.5, 1.0).unwrap();
        assert!((r.ratio() - gamma_ratio(1.0, 0.5).unwrap()).abs() < 1e-15);
        for (w, t, s) in [(1.0, 0.1, 1.0), (3.0, 2.0, 0.5), (5.0, 40.0, 2.0), (0.2, 0.01, 1.0)] {
            let r = unruh_rates(w, t, s).unwrap();
            assert!((r.gamma_minus - s * w).abs() < 1e-12 * s * w);
            assert!(r.gamma_plus >= r.gamma_minus.abs());
            assert!(r.gamma_plus / 2.0 + r.gamma_zero >= 0.0);
            assert!((r.ratio() - gamma_ratio(w, t).unwrap()).abs() < 1e-14);
        }
        assert!(unruh_rates(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rate_validation() {
        assert!(RateTriple::new(1.0, 1.5, 0.0).is_err());
        assert!(RateTriple::new(1.0, 0.5, -0.6).is_err());
        assert!(RateTriple::new(0.0, 0.0, 0.0).is_err());
        assert!(RateTriple::new(1.0, -1.0, -0.5).is_ok());
    }

    #[test]
    fn kossakowski_cases() {
        let km = kossakowski(&RateTriple::new(1.0, 0.0, -0.5).unwrap()).unwrap();
        let expected = ComplexMatrix3::from_diagonal(&nalgebra::Vector3::new(real(0.5), real(0.5), real(0.0)));
        assert_eq!(km.matrix(), &expected);

        let km = kossakowski(&RateTriple::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        let ev = km.eigenvalues();
        for (got, want) in ev.iter().zip([1.0, 0.5, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let gp = rng.random_range(0.1..3.0);
            let rates = RateTriple::new(gp, rng.random_range(-gp..gp), rng.random_range(-gp / 2.0..2.0)).unwrap();
            let km = kossakowski(&rates).unwrap();
            assert!(crate::qmat::hermiticity_error(km.matrix()) == 0.0);
            let mut ev = km.eigenvalues();
            ev.sort_by(|a, b| b.total_cmp(a));
            let mut want = vec![
                (rates.gamma_plus + rates.gamma_minus.abs()) / 2.0,
                (rates.gamma_plus - rates.gamma_minus.abs()) / 2.0,
                rates.gamma_plus / 2.0 + rates.gamma_zero,
            ];
            want.sort_by(|a, b| b.total_cmp(a));
            for (g, w) in ev.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn collective_form_matches_pairwise_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let params = LindbladParams::unruh(1.3, 0.8, 0.7).unwrap();
        let gen = Generator::new(&params).unwrap();
        let coeffs = *kossakowski(&params.rates).unwrap().matrix();
        let h = collective_operators()[2] * real(params.effective_gap / 2.0);
        for _ in 0..20 {
            let rho = random_density(&mut rng);
            let m = rho.matrix();
            let expected = (h * m - m * h) * c(0.0, -1.0) + pairwise_dissipator(m, &coeffs);
            assert!((gen.apply(m) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn generator_is_traceless_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let params = LindbladParams::new(0.9, RateTriple::new(1.2, 0.4, 0.3).unwrap()).unwrap();
        for _ in 0..50 {
            let out = generator(&random_density(&mut rng), &params).unwrap();
            assert!(out.trace().norm() < 1e-12);
            assert!(crate::qmat::hermiticity_error(&out) < 1e-12);
        }
    }

    #[test]
    fn singlet_is_decoherence_free() {
        for params in [
            LindbladParams::unruh(1.0, 1.0, 1.0).unwrap(),
            LindbladParams::new(2.0, RateTriple::new(3.0, -1.0, 5.0).unwrap()).unwrap(),
        ] {
            assert!(generator(&DensityOperator4::singlet(), &params).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn trajectory_conserves_trace_and_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let params = LindbladParams::unruh(1.0, 0.7, 1.0).unwrap();
        for _ in 0..5 {
            let rho0 = random_density(&mut rng);
            let traj = evolve_strided(&rho0, &params, 5.0, 0.005, 20).unwrap();
            let d0 = delta_of_state(&rho0);
            for rho in &traj.states {
                assert!((rho.matrix().trace() - real(1.0)).norm() < 1e-10);
                assert!((delta_of_state(rho) - d0).abs() < 1e-8);
                assert!(rho.min_eigenvalue() >= -1e-8);
            }
            assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
            assert!((traj.times.last().unwrap() - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singlet_trajectory_is_constant() {
        let params = LindbladParams::unruh(1.0, 1.0, 1.0).unwrap();
        let traj = evolve_strided(&DensityOperator4::singlet(), &params, 10.0, 0.01, 50).unwrap();
        for rho in &traj.states {
            assert!(rho.trace_distance(&DensityOperator4::singlet()) < 1e-10);
        }
    }

    #[test]
    fn product00_relaxes_to_closed_form() {
        let params = LindbladParams::unruh(1.0, 1.0, 1.0).unwrap();
        let traj = evolve_strided(
            &DensityOperator4::basis_state(0),
            &params,
            params.default_tau_max(),
            params.default_dt(),
            100,
        )
        .unwrap();
        let target = coeffs_to_density(&steady_state_coeffs(1.0, 0.5f64.tanh()).unwrap());
        assert!(traj.last().trace_distance(&target) <= 1e-6);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let params = LindbladParams::unruh(1.0, 1.0, 1.0).unwrap();
        let err = evolve(&DensityOperator4::basis_state(0), &params, 50.0, 2.0).unwrap_err();
        match err {
            LindbladError::StepTooLarge { suggested_dt, .. } => assert!(suggested_dt < 2.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            evolve(&DensityOperator4::basis_state(0), &params, 0.1, 0.2),
            Err(LindbladError::InvalidTimeGrid { .. })
        ));
    }

    #[test]
    fn rk4_is_fourth_order() {
        let params = LindbladParams::unruh(1.0, 1.0, 1.0).unwrap();
        let rho0 = DensityOperator4::basis_state(0);
        let tau = 2.0;
        let run = |dt: f64| *evolve(&rho0, &params, tau, dt).unwrap().last().matrix();
        let reference = run(0.1 / 16.0);
        let coarse = (run(0.1) - reference).norm();
        let fine = (run(0.05) - reference).norm();
        let ratio = coarse / fine;
        assert!((ratio - 16.0).abs() <= 0.3 * 16.0, "ratio {ratio}");
    }

    #[test]
    fn null_space_cases() {
        let params = LindbladParams::unruh(1.0, 1.0, 1.0).unwrap();
        let singlet = steady_state_numeric(&params, -3.0).unwrap();
        assert!(singlet.state.trace_distance(&DensityOperator4::singlet()) < 1e-10);
        assert_eq!(singlet.kernel_dimension, 2);

        let hot = LindbladParams::unruh(1.0, 1e8, 1e-8).unwrap();
        let mixed = steady_state_numeric(&hot, 0.0).unwrap();
        assert!(mixed.state.trace_distance(&DensityOperator4::maximally_mixed()) < 1e-7);

        let ns = steady_state_numeric(&params, 0.5).unwrap();
        let target = coeffs_to_density(&steady_state_coeffs(0.5, 0.5f64.tanh()).unwrap());
        assert!((ns.state.matrix() - target.matrix()).iter().all(|z| z.norm() < 1e-8));
        assert!(steady_state_numeric(&params, 1.5).is_err());
    }
}
