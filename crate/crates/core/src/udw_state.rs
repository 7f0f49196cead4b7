//! Steady state of two collectively coupled Unruh–DeWitt detectors.
//!
//! The asymptotic two-detector state is an X-state fixed by the initial
//! correlation invariant Δ₀ = Σᵢ tr[ρ σᵢ⊗σᵢ] and the ratio
//! γ = tanh(ω / 2T) of the antisymmetric and symmetric transition rates.

use std::f64::consts::PI;

use thiserror::Error;

use crate::qmat::{kron, paulis, real, ComplexMatrix4, DensityOperator4};

/// Beyond this value of ω/2T, tanh rounds to exactly 1 in double precision.
const TANH_SATURATION: f64 = 19.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("omega must be positive and finite, got {0}")]
    InvalidOmega(f64),
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("acceleration must be positive and finite, got {0}")]
    InvalidAcceleration(f64),
    #[error("delta0 must lie in [-3, 1], got {0}")]
    Delta0OutOfRange(f64),
    #[error("gamma must lie in [0, 1], got {0}")]
    GammaOutOfRange(f64),
    #[error("X-state coefficients violate {0}")]
    InvalidCoeffs(&'static str),
}

fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

pub fn check_delta0(delta0: f64) -> Result<f64, StateError> {
    if (-3.0..=1.0).contains(&delta0) {
        Ok(delta0)
    } else {
        Err(StateError::Delta0OutOfRange(delta0))
    }
}

/// γ = tanh(ω / 2T).
pub fn gamma_ratio(omega: f64, temperature: f64) -> Result<f64, StateError> {
    if !positive_finite(omega) {
        return Err(StateError::InvalidOmega(omega));
    }
    if !positive_finite(temperature) {
        return Err(StateError::InvalidTemperature(temperature));
    }
    let x = omega / (2.0 * temperature);
    Ok(if x > TANH_SATURATION { 1.0 } else { x.tanh() })
}

/// Unruh temperature T = a / 2π.
pub fn acceleration_to_temperature(acceleration: f64) -> Result<f64, StateError> {
    if !positive_finite(acceleration) {
        return Err(StateError::InvalidAcceleration(acceleration));
    }
    Ok(acceleration / (2.0 * PI))
}

/// Physical inputs of the detector model in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub temperature: f64,
    pub delta0: f64,
}

impl ModelParams {
    pub fn new(omega: f64, temperature: f64, delta0: f64) -> Result<Self, StateError> {
        if !positive_finite(omega) {
            return Err(StateError::InvalidOmega(omega));
        }
        if !positive_finite(temperature) {
            return Err(StateError::InvalidTemperature(temperature));
        }
        check_delta0(delta0)?;
        Ok(Self { omega, temperature, delta0 })
    }

    pub fn from_acceleration(omega: f64, acceleration: f64, delta0: f64) -> Result<Self, StateError> {
        Self::new(omega, acceleration_to_temperature(acceleration)?, delta0)
    }

    pub fn gamma(&self) -> f64 {
        gamma_ratio(self.omega, self.temperature).expect("validated at construction")
    }

    pub fn steady_state(&self) -> XStateCoeffs {
        steady_state_coeffs(self.delta0, self.gamma()).expect("validated at construction")
    }
}

/// Populations and coherence of the X-shaped steady state:
/// `a_pop` on |00⟩, `b_pop` on |11⟩, `c_pop` on |01⟩ and |10⟩, `d_coh`
/// between |01⟩ and |10⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateCoeffs {
    pub a_pop: f64,
    pub b_pop: f64,
    pub c_pop: f64,
    pub d_coh: f64,
}

const COEFF_TOL: f64 = 1e-12;

impl XStateCoeffs {
    pub fn new(a_pop: f64, b_pop: f64, c_pop: f64, d_coh: f64) -> Result<Self, StateError> {
        if ![a_pop, b_pop, c_pop, d_coh].iter().all(|v| v.is_finite()) {
            return Err(StateError::InvalidCoeffs("finiteness"));
        }
        if (a_pop + b_pop + 2.0 * c_pop - 1.0).abs() > COEFF_TOL {
            return Err(StateError::InvalidCoeffs("unit trace"));
        }
        if a_pop < -COEFF_TOL || b_pop < -COEFF_TOL || c_pop < -COEFF_TOL {
            return Err(StateError::InvalidCoeffs("non-negative populations"));
        }
        if c_pop - d_coh.abs() < -COEFF_TOL {
            return Err(StateError::InvalidCoeffs("|D| <= C"));
        }
        Ok(Self { a_pop, b_pop, c_pop, d_coh })
    }

    /// Block eigenvalues A, B, C + |D|, C − |D|.
    pub fn eigenvalues(&self) -> [f64; 4] {
        [self.a_pop, self.b_pop, self.c_pop + self.d_coh.abs(), self.c_pop - self.d_coh.abs()]
    }

    /// Σᵢ tr[ρ σᵢ⊗σᵢ] evaluated directly from the coefficients.
    pub fn delta(&self) -> f64 {
        4.0 * self.d_coh + self.a_pop + self.b_pop - 2.0 * self.c_pop
    }

    pub fn to_matrix(&self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        m[(0, 0)] = real(self.a_pop);
        m[(1, 1)] = real(self.c_pop);
        m[(2, 2)] = real(self.c_pop);
        m[(3, 3)] = real(self.b_pop);
        m[(1, 2)] = real(self.d_coh);
        m[(2, 1)] = real(self.d_coh);
        m
    }
}

/// Closed-form steady-state coefficients for initial invariant `delta0` and
/// rate ratio `gamma` (γ = 0 is the infinite-temperature limit, γ = 1 zero temperature).
pub fn steady_state_coeffs(delta0: f64, gamma: f64) -> Result<XStateCoeffs, StateError> {
    check_delta0(delta0)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(StateError::GammaOutOfRange(gamma));
    }
    let g2 = gamma * gamma;
    let den = 3.0 + g2;
    let a_pop = (3.0 + delta0) * (gamma - 1.0).powi(2) / (4.0 * den);
    let b_pop = (3.0 + delta0) * (gamma + 1.0).powi(2) / (4.0 * den);
    let c_pop = (3.0 - delta0 - (delta0 + 1.0) * g2) / (4.0 * den);
    let d_coh = (delta0 - g2) / (2.0 * den);
    XStateCoeffs::new(a_pop, b_pop, c_pop, d_coh)
}

pub fn coeffs_to_density(coeffs: &XStateCoeffs) -> DensityOperator4 {
    DensityOperator4::from_matrix_unchecked(coeffs.to_matrix())
}

/// Σᵢ tr[ρ (σᵢ ⊗ σᵢ)].
pub fn delta_of_state(rho: &DensityOperator4) -> f64 {
    delta_of_matrix(rho.matrix())
}

pub fn delta_of_matrix(m: &ComplexMatrix4) -> f64 {
    paulis().iter().map(|s| (m * kron(s, s)).trace().re).sum()
}

/// Σᵢ σᵢ ⊗ σᵢ, the observable whose expectation is Δ.
pub fn delta_observable() -> ComplexMatrix4 {
    paulis().iter().map(|s| kron(s, s)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::validate_density;
    use proptest::prelude::*;

    #[test]
    fn gamma_values() {
        // tanh(1) and tanh(3) to 16 digits
        assert!((gamma_ratio(1.0, 0.5).unwrap() - 0.761_594_155_955_764_9).abs() < 1e-15);
        assert!((gamma_ratio(3.0, 0.5).unwrap() - 0.995_054_753_686_730_5).abs() < 1e-15);
        assert!((gamma_ratio(1.0, 1e9).unwrap() - 5e-10).abs() < 1e-20);
        assert_eq!(gamma_ratio(1e4, 0.5).unwrap(), 1.0);
        assert_eq!(gamma_ratio(1.0, 1e-300).unwrap(), 1.0);
        assert!(gamma_ratio(0.0, 1.0).is_err());
        assert!(gamma_ratio(1.0, -1.0).is_err());
        assert!(gamma_ratio(f64::NAN, 1.0).is_err());
        assert!(gamma_ratio(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn acceleration_conversion() {
        assert!((acceleration_to_temperature(2.0 * PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((acceleration_to_temperature(4.0 * PI).unwrap() - 2.0).abs() < 1e-15);
        assert!(acceleration_to_temperature(0.0).is_err());
        for a in [0.01, 0.7, 3.3, 125.0] {
            let beta = 1.0 / acceleration_to_temperature(a).unwrap();
            assert!((beta - 2.0 * PI / a).abs() <= 1e-14 * beta);
        }
    }

    #[test]
    fn named_coefficient_cases() {
        let singlet = steady_state_coeffs(-3.0, 0.7).unwrap();
        assert_eq!((singlet.a_pop, singlet.b_pop), (0.0, 0.0));
        assert!((singlet.c_pop - 0.5).abs() < 1e-15 && (singlet.d_coh + 0.5).abs() < 1e-15);

        let mixed = steady_state_coeffs(0.0, 0.0).unwrap();
        assert_eq!(mixed, XStateCoeffs { a_pop: 0.25, b_pop: 0.25, c_pop: 0.25, d_coh: 0.0 });

        let ground = steady_state_coeffs(1.0, 1.0).unwrap();
        assert_eq!(ground, XStateCoeffs { a_pop: 0.0, b_pop: 1.0, c_pop: 0.0, d_coh: 0.0 });

        assert!(steady_state_coeffs(1.01, 0.5).is_err());
        assert!(steady_state_coeffs(-3.01, 0.5).is_err());
        assert!(steady_state_coeffs(0.0, 1.01).is_err());
        assert!(steady_state_coeffs(0.0, -0.01).is_err());
    }

    #[test]
    fn density_matrix_layout() {
        let rho = coeffs_to_density(&steady_state_coeffs(-3.0, 0.4).unwrap());
        assert!((rho.matrix() - DensityOperator4::singlet().matrix()).norm() < 1e-15);
        let rho = coeffs_to_density(&steady_state_coeffs(0.0, 0.0).unwrap());
        assert_eq!(rho, DensityOperator4::maximally_mixed());
        assert!(XStateCoeffs::new(0.5, 0.5, 0.0, 0.1).is_err());
        assert!(XStateCoeffs::new(0.5, 0.6, 0.0, 0.0).is_err());
    }

    #[test]
    fn delta_of_named_states() {
        assert!((delta_of_state(&DensityOperator4::singlet()) + 3.0).abs() < 1e-15);
        assert!(delta_of_state(&DensityOperator4::maximally_mixed()).abs() < 1e-15);
        assert!((delta_of_state(&DensityOperator4::basis_state(0)) - 1.0).abs() < 1e-15);
        assert!((delta_of_state(&DensityOperator4::basis_state(3)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn steady_delta_limits() {
        for g in [0.0, 0.2, 0.9, 1.0] {
            let rho = coeffs_to_density(&steady_state_coeffs(-3.0, g).unwrap());
            assert!((delta_of_state(&rho) + 3.0).abs() < 1e-14);
        }
        for d0 in [-2.5, -1.0, 0.0, 0.4, 1.0] {
            let rho = coeffs_to_density(&steady_state_coeffs(d0, 0.0).unwrap());
            assert!((delta_of_state(&rho) - d0).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn steady_state_is_a_density(d0 in -3.0f64..=1.0, g in 0.0f64..=1.0) {
            let coeffs = steady_state_coeffs(d0, g).unwrap();
            prop_assert!((coeffs.a_pop + coeffs.b_pop + 2.0 * coeffs.c_pop - 1.0).abs() < 1e-12);
            prop_assert!(coeffs.eigenvalues().iter().all(|&l| l >= -1e-12));
            let rho = coeffs_to_density(&coeffs);
            prop_assert!(validate_density(rho.matrix()).is_ok());
            let marginal = crate::qmat::partial_trace(&rho, crate::qmat::Side::A);
            prop_assert!(validate_density(marginal.matrix()).is_ok());
        }

        #[test]
        fn steady_delta_matches_matrix_trace(d0 in -3.0f64..=1.0, g in 0.0f64..=1.0) {
            let coeffs = steady_state_coeffs(d0, g).unwrap();
            let rho = coeffs_to_density(&coeffs);
            prop_assert!((delta_of_state(&rho) - coeffs.delta()).abs() < 1e-13);
            // the closed form carries Δ₀ through unchanged for every γ
            prop_assert!((coeffs.delta() - d0).abs() < 1e-13);
        }

        #[test]
        fn populations_shift_to_ground_as_gamma_grows(
            d0 in -2.99f64..=1.0, g in 0.0f64..0.99, step in 0.001f64..0.01,
        ) {
            let lo = steady_state_coeffs(d0, g).unwrap();
            let hi = steady_state_coeffs(d0, g + step).unwrap();
            prop_assert!(hi.a_pop < lo.a_pop);
            prop_assert!(hi.b_pop > lo.b_pop);
        }
    }
}
