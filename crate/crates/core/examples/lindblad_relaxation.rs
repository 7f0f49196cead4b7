//! RK4 integration of the collective master equation from each named
//! initial state, printing the approach to the thermal steady state.

use udw_steering::cli::InitialState;
use udw_steering::lindblad::{evolve_strided, LindbladParams};
use udw_steering::udw_state::{coeffs_to_density, delta_of_state, gamma_ratio, steady_state_coeffs};

fn main() {
    let (omega, temperature) = (1.0, 1.0);
    let params = LindbladParams::unruh(omega, temperature, 1.0).unwrap();
    let gamma = gamma_ratio(omega, temperature).unwrap();
    let tau_max = params.default_tau_max();
    println!(
        "gamma+ = {:.6}, gamma- = {:.6}, gamma0 = {:.6}, tau_max = {tau_max:.3}",
        params.rates.gamma_plus, params.rates.gamma_minus, params.rates.gamma_zero
    );

    for name in ["singlet", "product00", "product11", "mixed", "werner:0.5"] {
        let initial: InitialState = name.parse().unwrap();
        let rho0 = initial.density();
        let steady = coeffs_to_density(&steady_state_coeffs(initial.delta0(), gamma).unwrap());
        let traj = evolve_strided(&rho0, &params, tau_max, params.default_dt(), 250).unwrap();
        println!("\n{name} (delta0 = {})", delta_of_state(&rho0));
        for (tau, rho) in traj.times.iter().zip(&traj.states).step_by(2) {
            println!(
                "  tau = {tau:>7.3}  dist = {:.3e}  delta = {:+.12}  min eig = {:+.2e}",
                rho.trace_distance(&steady),
                delta_of_state(rho),
                rho.min_eigenvalue()
            );
        }
    }
}
