//! Steering of detector B by projective measurements on detector A and the
//! maximal steered coherence (MSC).
//!
//! Coherence is the l1 norm of the off-diagonal part of B's steered state in
//! the eigenbasis of B's marginal. When that marginal is degenerate the
//! basis is not unique and MSC is the infimum over bases of the maximum over
//! measurements.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::optimize::golden_section_max;
use crate::qmat::{
    c, eigensystem2, fix_phase, hermitize, kron, partial_trace_matrix, paulis, real,
    ComplexMatrix2, DensityOperator2, DensityOperator4, Ket2, QmatError, Side,
    DEFAULT_DEGENERACY_TOL,
};
use crate::udw_state::XStateCoeffs;

/// Outcomes less likely than this are treated as unreachable.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteeringError {
    #[error("measurement angles out of range: theta = {theta}, phi = {phi}")]
    InvalidDirection { theta: f64, phi: f64 },
    #[error("unreachable outcome: probability {0:e} is below the floor")]
    UnreachableOutcome(f64),
    #[error("marginal of B has zero population in a basis state, MSC undefined")]
    DegenerateMarginal,
    #[error("every measurement outcome on the grid is below the probability floor")]
    NoReachableOutcome,
    #[error(transparent)]
    Matrix(#[from] QmatError),
}

/// Polar and azimuthal angle of the Bloch direction m⃗.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self, SteeringError> {
        if !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(SteeringError::InvalidDirection { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Folds arbitrary angles back onto θ ∈ [0, π], φ ∈ [0, 2π).
    pub fn wrapped(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let phi = phi.rem_euclid(TAU);
        Self { theta, phi: if phi >= TAU { 0.0 } else { phi } }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Rank-one projector (I + m⃗·σ)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    matrix: ComplexMatrix2,
}

impl ProjectiveMeasurement {
    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.matrix
    }
}

pub fn bloch_projector(direction: &MeasurementDirection) -> ProjectiveMeasurement {
    ProjectiveMeasurement { matrix: povm_element(0.5, scaled(direction.unit_vector(), 0.5)) }
}

fn scaled(v: [f64; 3], s: f64) -> [f64; 3] {
    v.map(|x| x * s)
}

/// e₀ I + e⃗·σ.
fn povm_element(e0: f64, e: [f64; 3]) -> ComplexMatrix2 {
    ComplexMatrix2::new(
        real(e0 + e[2]),
        c(e[0], -e[1]),
        c(e[0], e[1]),
        real(e0 - e[2]),
    )
}

/// B's conditional state after outcome M on A, with its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeredOutcome {
    pub state: DensityOperator2,
    pub probability: f64,
}

/// Applies `m ⊗ I` to `rho` and traces out A.
pub fn steer(rho: &DensityOperator4, m: &ProjectiveMeasurement) -> Result<SteeredOutcome, SteeringError> {
    let unnormalized = partial_trace_matrix(&(kron(m.matrix(), &ComplexMatrix2::identity()) * rho.matrix()), Side::A);
    let probability = unnormalized.trace().re;
    if probability <= PROB_FLOOR {
        return Err(SteeringError::UnreachableOutcome(probability));
    }
    let state = hermitize(&unnormalized) * real(1.0 / probability);
    Ok(SteeredOutcome { state: DensityOperator2::from_matrix_unchecked(state), probability })
}

/// Orthonormal pair {|ξ₁⟩, |ξ₂⟩} in which coherence is measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBasis {
    pub vectors: [Ket2; 2],
    pub degenerate: bool,
}

impl ReferenceBasis {
    pub fn computational() -> Self {
        Self {
            vectors: [Ket2::new(real(1.0), real(0.0)), Ket2::new(real(0.0), real(1.0))],
            degenerate: false,
        }
    }

    /// Eigenbasis of `(I + n⃗·σ)/2` for a unit axis n⃗.
    pub fn from_axis(polar: f64, azimuth: f64) -> Self {
        let (s, cth) = (0.5 * polar).sin_cos();
        let up = Ket2::new(real(cth), c(azimuth.cos() * s, azimuth.sin() * s));
        let down = Ket2::new(-up[1].conj(), up[0].conj());
        Self { vectors: [fix_phase(up), fix_phase(down)], degenerate: false }
    }

    /// Eigenbasis of B's marginal, flagged when the spectrum is degenerate.
    pub fn eigenbasis_of(state: &ComplexMatrix2, degeneracy_tol: f64) -> Result<Self, SteeringError> {
        let es = eigensystem2(state, degeneracy_tol)?;
        Ok(Self { vectors: es.eigenvectors, degenerate: es.degenerate })
    }

    fn off_diagonal(&self, m: &ComplexMatrix2) -> f64 {
        (self.vectors[0].adjoint() * m * self.vectors[1])[(0, 0)].norm()
    }
}

/// Σ_{i≠j} |⟨ξᵢ|ρ|ξⱼ⟩|.
pub fn coherence(state: &DensityOperator2, basis: &ReferenceBasis) -> f64 {
    coherence_of_matrix(state.matrix(), basis)
}

pub fn coherence_of_matrix(m: &ComplexMatrix2, basis: &ReferenceBasis) -> f64 {
    let upper = (basis.vectors[0].adjoint() * m * basis.vectors[1])[(0, 0)].norm();
    let lower = (basis.vectors[1].adjoint() * m * basis.vectors[0])[(0, 0)].norm();
    upper + lower
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MscResult {
    pub value: f64,
    pub optimal_theta: f64,
    /// `None` when the value does not depend on the azimuth.
    pub optimal_phi: Option<f64>,
    pub basis_used: ReferenceBasis,
    pub method: Method,
}

/// |D| / √((A+C)(C+B)), attained at cos θ = (B−A)/(A+2C+B) for every φ.
pub fn msc_closed_form(coeffs: &XStateCoeffs) -> Result<MscResult, SteeringError> {
    let XStateCoeffs { a_pop, b_pop, c_pop, d_coh } = *coeffs;
    let denom = (a_pop + c_pop) * (c_pop + b_pop);
    // A + C = 0 or C + B = 0 forces C = D = 0: a pure product state with nothing to steer
    let value = if denom > 0.0 {
        d_coh.abs() / denom.sqrt()
    } else if denom == 0.0 && d_coh.abs() <= 1e-12 {
        0.0
    } else {
        return Err(SteeringError::DegenerateMarginal);
    };
    let cos_theta = ((b_pop - a_pop) / (a_pop + 2.0 * c_pop + b_pop)).clamp(-1.0, 1.0);
    let mut basis_used = ReferenceBasis::computational();
    basis_used.degenerate = (a_pop - b_pop).abs() <= DEFAULT_DEGENERACY_TOL;
    Ok(MscResult {
        value,
        optimal_theta: cos_theta.acos(),
        optimal_phi: None,
        basis_used,
        method: Method::ClosedForm,
    })
}

/// Semi-axes (equatorial, polar) of the ellipsoid of Bloch vectors B can be
/// steered to. For a symmetric X-state with marginal Bloch component
/// a = A − B these are 2|D|/√(1−a²) and |A+B−2C − a²|/(1−a²).
pub fn steered_ellipsoid(coeffs: &XStateCoeffs) -> (f64, f64) {
    let XStateCoeffs { a_pop, b_pop, c_pop, d_coh } = *coeffs;
    let a = a_pop - b_pop;
    let one_minus = 1.0 - a * a;
    if one_minus <= 1e-15 {
        // pure product state: every outcome leaves B unchanged
        return (0.0, 0.0);
    }
    let t_xy = 2.0 * d_coh;
    let t_zz = a_pop + b_pop - 2.0 * c_pop;
    (t_xy.abs() / one_minus.sqrt(), (t_zz - a * a).abs() / one_minus)
}

/// Precomputed partial traces tr_A[(σₖ ⊗ I)ρ] so that the unnormalized
/// steered state of any POVM element e₀I + e⃗·σ is e₀K₀ + Σ eₖKₖ.
#[derive(Debug, Clone)]
pub struct SteeringMap {
    marginal: ComplexMatrix2,
    components: [ComplexMatrix2; 3],
}

impl SteeringMap {
    pub fn new(rho: &DensityOperator4) -> Self {
        let id = ComplexMatrix2::identity();
        let components = paulis().map(|s| partial_trace_matrix(&(kron(&s, &id) * rho.matrix()), Side::A));
        Self { marginal: partial_trace_matrix(rho.matrix(), Side::A), components }
    }

    /// B's reduced state.
    pub fn marginal(&self) -> &ComplexMatrix2 {
        &self.marginal
    }

    /// Unnormalized steered state for POVM element e₀I + e⃗·σ.
    pub fn unnormalized(&self, e0: f64, e: [f64; 3]) -> ComplexMatrix2 {
        self.marginal * real(e0)
            + self.components[0] * real(e[0])
            + self.components[1] * real(e[1])
            + self.components[2] * real(e[2])
    }

    /// Coherence of the steered state, or `None` for an unreachable outcome.
    pub fn steered_coherence(&self, e0: f64, e: [f64; 3], basis: &ReferenceBasis) -> Option<f64> {
        let m = self.unnormalized(e0, e);
        let p = m.trace().re;
        (p > PROB_FLOOR).then(|| 2.0 * basis.off_diagonal(&m) / p)
    }

    fn projector_coherence(&self, theta: f64, phi: f64, basis: &ReferenceBasis) -> f64 {
        let m = MeasurementDirection::wrapped(theta, phi).unit_vector();
        self.steered_coherence(0.5, scaled(m, 0.5), basis).unwrap_or(f64::NEG_INFINITY)
    }

    pub fn steered_bloch_vector(&self, direction: &MeasurementDirection) -> Option<[f64; 3]> {
        let m = self.unnormalized(0.5, scaled(direction.unit_vector(), 0.5));
        let p = m.trace().re;
        (p > PROB_FLOOR).then(|| crate::qmat::bloch_vector(&m).map(|x| x / p))
    }
}

/// Resolution of the measurement-angle search in [`msc_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleGrid {
    /// Points on θ ∈ [0, π], endpoints included.
    pub theta_points: usize,
    /// Points on φ ∈ [0, 2π).
    pub phi_points: usize,
    /// Angular tolerance of the golden-section refinement.
    pub refine_tol: f64,
    pub refine_rounds: usize,
    /// Axes on the Fibonacci sphere for the outer search in the degenerate case.
    pub basis_points: usize,
    /// Grid used for each inner maximization of the degenerate search.
    pub inner_theta_points: usize,
    pub inner_phi_points: usize,
}

impl Default for AngleGrid {
    fn default() -> Self {
        Self {
            theta_points: 181,
            phi_points: 24,
            refine_tol: 1e-10,
            refine_rounds: 6,
            basis_points: 400,
            inner_theta_points: 25,
            inner_phi_points: 12,
        }
    }
}

struct InnerMax {
    value: f64,
    theta: f64,
    phi: f64,
}

fn maximize_over_measurements(
    map: &SteeringMap,
    basis: &ReferenceBasis,
    theta_points: usize,
    phi_points: usize,
    grid: &AngleGrid,
) -> Result<InnerMax, SteeringError> {
    let theta_step = PI / (theta_points.max(2) - 1) as f64;
    let phi_step = TAU / phi_points.max(1) as f64;
    let mut best = InnerMax { value: f64::NEG_INFINITY, theta: 0.0, phi: 0.0 };
    // θ-major scan with strict improvement keeps the smallest (θ, φ) on ties
    for i in 0..theta_points.max(2) {
        let theta = i as f64 * theta_step;
        for j in 0..phi_points.max(1) {
            let phi = j as f64 * phi_step;
            let value = map.projector_coherence(theta, phi, basis);
            if value > best.value {
                best = InnerMax { value, theta, phi };
            }
        }
    }
    if !best.value.is_finite() {
        return Err(SteeringError::NoReachableOutcome);
    }

    let (mut half_theta, mut half_phi) = (theta_step, phi_step);
    for _ in 0..grid.refine_rounds {
        let before = best.value;
        let lo = (best.theta - half_theta).max(0.0);
        let hi = (best.theta + half_theta).min(PI);
        let phi = best.phi;
        let (theta, value) = golden_section_max(|t| map.projector_coherence(t, phi, basis), lo, hi, grid.refine_tol);
        if value > best.value {
            best.theta = theta;
            best.value = value;
        }
        let theta = best.theta;
        let (phi, value) = golden_section_max(
            |p| map.projector_coherence(theta, p, basis),
            best.phi - half_phi,
            best.phi + half_phi,
            grid.refine_tol,
        );
        if value > best.value {
            best.phi = phi.rem_euclid(TAU);
            best.value = value;
        }
        // diagonal line searches follow ridges that run obliquely to the axes
        for sign in [1.0, -1.0] {
            let (t0, p0) = (best.theta, best.phi);
            let along = |s: f64| {
                let t = t0 + s * half_theta;
                if (0.0..=PI).contains(&t) {
                    map.projector_coherence(t, p0 + sign * s * half_phi, basis)
                } else {
                    f64::NEG_INFINITY
                }
            };
            let (s, value) = golden_section_max(along, -1.0, 1.0, grid.refine_tol);
            if value > best.value {
                best.theta = t0 + s * half_theta;
                best.phi = (p0 + sign * s * half_phi).rem_euclid(TAU);
                best.value = value;
            }
        }
        if best.value - before <= 1e-15 {
            break;
        }
        half_theta *= 0.5;
        half_phi *= 0.5;
    }
    let wrapped = MeasurementDirection::wrapped(best.theta, best.phi);
    Ok(InnerMax { value: best.value, theta: wrapped.theta, phi: wrapped.phi })
}

/// `n` nearly uniform points on the unit sphere as (polar, azimuth) pairs.
pub fn fibonacci_sphere(n: usize) -> Vec<(f64, f64)> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            (z.clamp(-1.0, 1.0).acos(), (k as f64 * golden_angle).rem_euclid(TAU))
        })
        .collect()
}

/// MSC by direct search over projective measurements on A.
///
/// With a non-degenerate marginal the search runs in B's eigenbasis. With a
/// degenerate marginal it returns the infimum over reference-basis axes of
/// the maximum over measurements.
pub fn msc_numeric(rho: &DensityOperator4, grid: &AngleGrid) -> Result<MscResult, SteeringError> {
    let map = SteeringMap::new(rho);
    let basis = ReferenceBasis::eigenbasis_of(map.marginal(), DEFAULT_DEGENERACY_TOL)?;
    if !basis.degenerate {
        let best = maximize_over_measurements(&map, &basis, grid.theta_points, grid.phi_points, grid)?;
        return Ok(MscResult {
            value: best.value,
            optimal_theta: best.theta,
            optimal_phi: Some(best.phi),
            basis_used: basis,
            method: Method::Numeric,
        });
    }
    inf_max(&map, grid)
}

fn inf_max(map: &SteeringMap, grid: &AngleGrid) -> Result<MscResult, SteeringError> {
    let inner = |polar: f64, azimuth: f64| {
        let basis = ReferenceBasis::from_axis(polar, azimuth);
        maximize_over_measurements(map, &basis, grid.inner_theta_points, grid.inner_phi_points, grid)
    };

    let mut best_axis = (0.0, 0.0);
    let mut best = f64::INFINITY;
    for (polar, azimuth) in fibonacci_sphere(grid.basis_points.max(1)) {
        let value = inner(polar, azimuth)?.value;
        if value < best {
            best = value;
            best_axis = (polar, azimuth);
        }
    }

    // local refinement of the axis by coordinate descent
    let mut half = (4.0 * PI / grid.basis_points.max(1) as f64).sqrt();
    let outer_tol = 1e-6;
    for _ in 0..3 {
        let before = best;
        let (_, azimuth) = best_axis;
        let (polar, value) = golden_section_max(
            |p| inner(p, azimuth).map(|r| -r.value).unwrap_or(f64::NEG_INFINITY),
            (best_axis.0 - half).max(0.0),
            (best_axis.0 + half).min(PI),
            outer_tol,
        );
        if -value < best {
            best = -value;
            best_axis.0 = polar;
        }
        let (polar, _) = best_axis;
        let (azimuth, value) = golden_section_max(
            |a| inner(polar, a).map(|r| -r.value).unwrap_or(f64::NEG_INFINITY),
            best_axis.1 - half,
            best_axis.1 + half,
            outer_tol,
        );
        if -value < best {
            best = -value;
            best_axis.1 = azimuth.rem_euclid(TAU);
        }
        if before - best <= 1e-12 {
            break;
        }
        half *= 0.5;
    }

    let mut basis_used = ReferenceBasis::from_axis(best_axis.0, best_axis.1);
    let inner_best = maximize_over_measurements(map, &basis_used, grid.theta_points, grid.phi_points, grid)?;
    basis_used.degenerate = true;
    Ok(MscResult {
        value: inner_best.value,
        optimal_theta: inner_best.theta,
        optimal_phi: Some(inner_best.phi),
        basis_used,
        method: Method::Numeric,
    })
}

/// Best steered coherence seen over random two-outcome POVMs.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSample {
    pub best_value: f64,
    pub samples: usize,
}

/// Samples random POVMs {E, I − E} on A and records the largest coherence of
/// B's steered state in `basis`. Used to compare against the projective
/// optimum; projectors are extremal so no improvement is expected.
pub fn povm_sample_msc(rho: &DensityOperator4, basis: &ReferenceBasis, samples: usize, seed: u64) -> PovmSample {
    let map = SteeringMap::new(rho);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_value = 0.0f64;
    for _ in 0..samples {
        let polar = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let azimuth = TAU * rng.random::<f64>();
        let length = 0.5 * rng.random::<f64>();
        let e0 = length + (1.0 - 2.0 * length) * rng.random::<f64>();
        let dir = MeasurementDirection::wrapped(polar, azimuth).unit_vector();
        let e = scaled(dir, length);
        let outcomes = [(e0, e), (1.0 - e0, scaled(e, -1.0))];
        for (w, v) in outcomes {
            if let Some(value) = map.steered_coherence(w, v, basis) {
                best_value = best_value.max(value);
            }
        }
    }
    PovmSample { best_value, samples }
}
