//! Fixed point of the generator found from its null space, one per
//! Δ-sector, and its independence of the dephasing rate γ₀.

use udw_steering::lindblad::{steady_state_numeric, LindbladParams};
use udw_steering::udw_state::{coeffs_to_density, gamma_ratio, steady_state_coeffs};

fn main() {
    let (omega, temperature) = (2.0, 0.7);
    let params = LindbladParams::unruh(omega, temperature, 1.0).unwrap();
    let gamma = gamma_ratio(omega, temperature).unwrap();
    for d0 in [-3.0, -1.0, 0.0, 0.5, 1.0] {
        let fixed = steady_state_numeric(&params, d0).unwrap();
        let exact = coeffs_to_density(&steady_state_coeffs(d0, gamma).unwrap());
        println!(
            "delta0 = {d0:>4}: kernel dim {}, residual {:.1e}, distance to closed form {:.1e}",
            fixed.kernel_dimension,
            fixed.residual,
            fixed.state.trace_distance(&exact)
        );
    }

    let reference = steady_state_numeric(&params, -1.0).unwrap().state;
    for factor in [0.0, 0.45, 2.0] {
        let rates = params.rates.with_gamma_zero(factor * params.rates.gamma_plus).unwrap();
        let shifted = LindbladParams::new(params.effective_gap, rates).unwrap();
        let state = steady_state_numeric(&shifted, -1.0).unwrap().state;
        println!("gamma0 = {factor} gamma+: shift {:.1e}", state.trace_distance(&reference));
    }
}
