//! Brute-force maximization over Alice's projective measurements, compared
//! with the closed form on a handful of steady states.

use udw_steering::steering::{msc_closed_form, msc_numeric, AngleGrid};
use udw_steering::udw_state::{coeffs_to_density, steady_state_coeffs};

fn main() {
    let grid = AngleGrid::default();
    println!("{:>7} {:>6} {:>16} {:>16} {:>10}", "delta0", "gamma", "closed", "numeric", "|diff|");
    for (d0, g) in [(-2.5, 0.2), (-1.0, 0.5), (-0.5, 0.9), (0.5, 0.3), (0.9, 0.95)] {
        let coeffs = steady_state_coeffs(d0, g).unwrap();
        let closed = msc_closed_form(&coeffs).unwrap();
        let numeric = msc_numeric(&coeffs_to_density(&coeffs), &grid).unwrap();
        println!(
            "{d0:>7} {g:>6} {:>16.12} {:>16.12} {:>10.2e}",
            closed.value,
            numeric.value,
            (closed.value - numeric.value).abs()
        );
        println!(
            "        optimal theta: closed {:.6}, numeric {:.6}",
            closed.optimal_theta, numeric.optimal_theta
        );
    }
}
