//! Random two-outcome POVMs on Alice never steer more coherence than the
//! best projective measurement.

use udw_steering::steering::{msc_closed_form, povm_sample_msc, ReferenceBasis};
use udw_steering::udw_state::{coeffs_to_density, steady_state_coeffs};

fn main() {
    for (d0, g) in [(-3.0, 0.3), (-1.0, 0.7), (0.5, 0.1), (0.9, 0.9)] {
        let coeffs = steady_state_coeffs(d0, g).unwrap();
        let projective = msc_closed_form(&coeffs).unwrap().value;
        let sample = povm_sample_msc(&coeffs_to_density(&coeffs), &ReferenceBasis::computational(), 20_000, 11);
        println!(
            "delta0 = {d0:>4}, gamma = {g}: projective {projective:.8}, best of {} POVMs {:.8}",
            sample.samples, sample.best_value
        );
    }
}
