//! How the MSC responds to heating: monotone decay, a dip to zero at the
//! threshold temperature, or monotone growth, depending on Δ₀.

use udw_steering::sweep::{
    asymptotic_msc, monotonicity_report, msc_at, threshold_temperature, LinearRange, Monotonicity,
};

fn main() {
    let grid = LinearRange::new(0.05, 10.0, 0.05).unwrap().values();
    for omega in [1.0, 3.0, 5.0] {
        for d0 in [-1.0, 0.5, 1.0] {
            let regime = monotonicity_report(d0, omega, &grid).unwrap();
            let extra = match regime {
                Monotonicity::DipThenRise { t_min } => {
                    format!(" (threshold formula {:.8})", threshold_temperature(d0, omega).unwrap())
                        + &format!(", MSC at dip {:.1e}", msc_at(d0, omega, t_min).unwrap().msc)
                }
                _ => String::new(),
            };
            println!("omega = {omega}, delta0 = {d0:>4}: {regime:?}{extra}");
        }
    }
    for d0 in [-3.0, -1.0, 0.5] {
        println!(
            "delta0 = {d0:>4}: MSC at T = 1e4 is {:.8}, limit |delta0|/3 = {:.8}",
            msc_at(d0, 1.0, 1e4).unwrap().msc,
            asymptotic_msc(d0).unwrap()
        );
    }
}
