//! Fast self-check suite behind `udw-steering check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lindblad::{evolve, LindbladParams};
use crate::qmat::{validate_density, DensityOperator4};
use crate::steering::{msc_closed_form, msc_numeric, AngleGrid};
use crate::sweep::{monotonicity_report, threshold_temperature, FigureDefaults, Monotonicity};
use crate::udw_state::{coeffs_to_density, delta_of_state, steady_state_coeffs, XStateCoeffs};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// Numeric search against `closed_form` on random non-degenerate steady states.
pub fn oracle_agreement<F>(closed_form: F, samples: usize, seed: u64) -> CheckOutcome
where
    F: Fn(&XStateCoeffs) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = AngleGrid::default();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let d0 = rng.random_range(-3.0..=1.0);
        let g = rng.random_range(0.02..=0.99);
        let coeffs = steady_state_coeffs(d0, g).expect("sampled inside the domain");
        let numeric = msc_numeric(&coeffs_to_density(&coeffs), &grid).map(|r| r.value).unwrap_or(f64::NAN);
        let diff = (numeric - closed_form(&coeffs)).abs();
        worst = if diff.is_nan() { f64::INFINITY } else { worst.max(diff) };
    }
    CheckOutcome {
        name: "oracle agreement",
        passed: worst <= 1e-6,
        detail: format!("{samples} points, max |numeric - closed form| = {worst:.3e} (tol 1e-6)"),
    }
}

pub fn delta_conservation() -> CheckOutcome {
    let params = LindbladParams::unruh(1.0, 1.0, 1.0).expect("valid parameters");
    let singlet = DensityOperator4::singlet();
    let rho0 = DensityOperator4::from_matrix_unchecked(
        singlet.matrix() * nalgebra::Complex::new(0.5, 0.0)
            + DensityOperator4::basis_state(0).matrix() * nalgebra::Complex::new(0.5, 0.0),
    );
    let d0 = delta_of_state(&rho0);
    let result = evolve(&rho0, &params, 2.0, params.default_dt());
    match result {
        Ok(traj) => {
            let drift = traj.states.iter().map(|r| (delta_of_state(r) - d0).abs()).fold(0.0, f64::max);
            CheckOutcome {
                name: "delta conservation",
                passed: drift <= 1e-8,
                detail: format!("{} steps, max drift {drift:.3e} (tol 1e-8)", traj.states.len() - 1),
            }
        }
        Err(e) => CheckOutcome { name: "delta conservation", passed: false, detail: e.to_string() },
    }
}

pub fn psd_grid() -> CheckOutcome {
    let mut failures = 0;
    let mut count = 0;
    for i in 0..=40 {
        let d0 = -3.0 + 0.1 * i as f64;
        for j in 0..=20 {
            let g = 0.05 * j as f64;
            count += 1;
            let ok = steady_state_coeffs(d0, g)
                .map(|c| validate_density(coeffs_to_density(&c).matrix()).is_ok())
                .unwrap_or(false);
            if !ok {
                failures += 1;
            }
        }
    }
    CheckOutcome {
        name: "steady state PSD grid",
        passed: failures == 0,
        detail: format!("{count} points, {failures} invalid"),
    }
}

pub fn threshold_coincidence() -> CheckOutcome {
    let grid = FigureDefaults::default().temperature.values();
    let mut worst = 0.0f64;
    let mut misclassified = 0;
    for d0 in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for w in [1.0, 3.0, 5.0] {
            let expected = threshold_temperature(d0, w).expect("0 < delta0 < 1");
            match monotonicity_report(d0, w, &grid) {
                Ok(Monotonicity::DipThenRise { t_min }) => worst = worst.max((t_min - expected).abs()),
                _ => misclassified += 1,
            }
        }
    }
    CheckOutcome {
        name: "threshold coincidence",
        passed: misclassified == 0 && worst <= 1e-4,
        detail: format!("max |dip - threshold| = {worst:.3e} (tol 1e-4), {misclassified} misclassified"),
    }
}

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        oracle_agreement(|c| msc_closed_form(c).map(|r| r.value).unwrap_or(f64::NAN), 60, 2024),
        delta_conservation(),
        psd_grid(),
        threshold_coincidence(),
    ]
}
