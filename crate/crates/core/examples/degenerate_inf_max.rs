//! At γ = 0 Bob's marginal is I/2, so every basis is an eigenbasis. The
//! MSC is then the infimum over bases of the maximum over measurements.

use udw_steering::qmat::bloch_vector;
use udw_steering::steering::{msc_numeric, AngleGrid};
use udw_steering::udw_state::{coeffs_to_density, steady_state_coeffs};

fn main() {
    let grid = AngleGrid::default();
    for d0 in [-3.0, -1.5, 0.3, 0.6, 0.9] {
        let rho = coeffs_to_density(&steady_state_coeffs(d0, 0.0).unwrap());
        let r = msc_numeric(&rho, &grid).unwrap();
        let v = r.basis_used.vectors[0];
        let axis = bloch_vector(&(v * v.adjoint()));
        println!(
            "delta0 = {d0:>5}: inf-max = {:.8} (|delta0|/3 = {:.8}), worst basis axis = ({:.3}, {:.3}, {:.3})",
            r.value,
            d0.abs() / 3.0,
            axis[0],
            axis[1],
            axis[2]
        );
    }
}
