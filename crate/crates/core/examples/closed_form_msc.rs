//! Closed-form MSC of the steady state, from either a bath temperature or a
//! proper acceleration.
//!
//!     cargo run --example closed_form_msc -- -1 1 0.5

use udw_steering::steering::{msc_closed_form, steered_ellipsoid};
use udw_steering::udw_state::ModelParams;

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (delta0, omega, temperature) = match args[..] {
        [d, w, t] => (d, w, t),
        _ => (-1.0, 1.0, 0.5),
    };

    let params = ModelParams::new(omega, temperature, delta0).expect("parameters in range");
    let coeffs = params.steady_state();
    let msc = msc_closed_form(&coeffs).expect("valid steady state");
    println!("delta0 = {delta0}, omega = {omega}, T = {temperature}, gamma = {:.6}", params.gamma());
    println!(
        "A = {:.6}  B = {:.6}  C = {:.6}  D = {:.6}",
        coeffs.a_pop, coeffs.b_pop, coeffs.c_pop, coeffs.d_coh
    );
    println!("MSC = {:.12} at theta = {:.6} (any phi)", msc.value, msc.optimal_theta);
    let (equatorial, polar) = steered_ellipsoid(&coeffs);
    println!("steering ellipsoid semi-axes: {equatorial:.6} (x, y), {polar:.6} (z)");

    // the same point reached through acceleration, T = a / 2π
    let accel = 2.0 * std::f64::consts::PI * temperature;
    let via_accel = ModelParams::from_acceleration(omega, accel, delta0).unwrap();
    println!(
        "acceleration {accel:.6} gives MSC = {:.12}",
        msc_closed_form(&via_accel.steady_state()).unwrap().value
    );
}
