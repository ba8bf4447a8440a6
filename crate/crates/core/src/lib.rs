//! Imaginary-time evolution of finite-dimensional pure states and its
//! geometric quantum speed limit.
//!
//! The normalized state `φ(t) = ψ(t)/‖ψ(t)‖` of `dψ/dt = −Hψ` moves with
//! speed `ΔH(t)` in the Fubini–Study metric, so the angle it opens up from the
//! initial state obeys `Θ(T) ≤ ∫₀ᵀ ΔH dt`, i.e. `T ≥ Θ(T)/v̄`.
//!
//! - [`qstate`]: vectors, Hermitian operators, spectra, moments.
//! - [`ite`]: exact and RK4 propagators producing [`ite::Trajectory`] values.
//! - [`geometry`]: angle, path length, [`geometry::QslReport`], saturation
//!   and rate diagnostics.
//! - [`models`]: two-level and Grover closed forms.

pub mod error;
pub mod geometry;
pub mod ite;
pub mod models;
pub mod qstate;
pub mod quadrature;

pub use error::{Error, Result};
pub use geometry::{
    angle, path_length, qsl_report, qsl_report_with, rate_check, saturation_certificate,
    saturation_certificate_with, QslReport, RateCheck, SaturationCertificate, Tolerances,
};
pub use ite::{
    fidelity_to, infidelity_to, propagate, propagate_exact, propagate_rk4, ExactPropagator, FnSchedule,
    HamiltonianSchedule, TimeGrid, Trajectory, TrajectorySample,
};
pub use qstate::{
    dispersion, eig, expectation, inner, make_state, normalize, validate_hermitian, Complex64,
    HermitianOperator, SpectralDecomposition, StateVector,
};
