//! Maximal steered coherence (MSC) of two uniformly accelerated
//! Unruh–DeWitt detectors.
//!
//! * [`qmat`]: one- and two-qubit complex matrix kernel.
//! * [`udw_state`]: the X-shaped steady state as a function of Δ₀ and γ = tanh(ω/2T).
//! * [`steering`]: steered states, l1 coherence, closed-form and numerical MSC.
//! * [`lindblad`]: collective Kossakowski–Lindblad generator, RK4 integration
//!   and a null-space fixed-point solver.
//! * [`sweep`]: parameter grids, threshold temperatures, monotonicity regimes
//!   and figure data.
//! * [`cli`]: the `udw-steering` command line front end and its file formats.

pub mod check;
pub mod cli;
pub mod lindblad;
pub mod optimize;
pub mod output;
pub mod qmat;
pub mod steering;
pub mod sweep;
pub mod udw_state;

pub use lindblad::{evolve, steady_state_numeric, LindbladParams, RateTriple, Trajectory};
pub use qmat::{DensityOperator2, DensityOperator4};
pub use steering::{msc_closed_form, msc_numeric, AngleGrid, MscResult};
pub use udw_state::{gamma_ratio, steady_state_coeffs, ModelParams, XStateCoeffs};
