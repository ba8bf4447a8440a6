//! Fubini–Study geometry of a normalized imaginary-time trajectory.
//!
//! The angle `Θ(t) = arccos|⟨ψ₀|φ(t)⟩|` can never exceed the length of the
//! path travelled, `L = ∫ΔH dt`, because the speed of the normalized state is
//! exactly `ΔH`. Hence `T ≥ Θ(T)/v̄` with `v̄ = L/T`. Equality needs the
//! velocity to point along the geodesic at (almost) every instant;
//! [`saturation_certificate`] measures how far each sample is from that.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ite::{HamiltonianSchedule, Trajectory};
use crate::qstate::{dot, moments, scaled_norm, Complex64, StateVector};
use crate::quadrature::simpson;

/// Tolerances used by the diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// A run counts as saturated when `slack ≤ saturation·(1 + L)`.
    pub saturation: f64,
    /// Certificate residual below which a sample is saturating.
    pub residual: f64,
    /// Allowed quadrature error on `Θ(T) ≤ L`, relative to `1 + L`.
    pub quadrature: f64,
    /// Samples with `sin Θ` below this are not certified.
    pub angle_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            saturation: 1e-6,
            residual: 1e-8,
            quadrature: 1e-8,
            angle_floor: 1e-6,
        }
    }
}

/// `(⟨ψ₀|φ⟩, ‖ψ₀ − ⟨φ|ψ₀⟩φ‖)`, i.e. overlap and `sin Θ`.
pub(crate) fn overlap_and_sine(psi0: &StateVector, phi: &StateVector) -> Result<(Complex64, f64)> {
    let z = psi0.inner(phi)?;
    let a = psi0.amplitudes();
    let p = phi.amplitudes();
    let zc = z.conj();
    let perp: Vec<Complex64> = a.iter().zip(p).map(|(x, y)| x - y * zc).collect();
    Ok((z, scaled_norm(&perp)))
}

/// `Θ = arccos|⟨ψ₀|φ⟩| ∈ [0, π/2]` for normalized arguments.
///
/// Evaluated as `atan2(sin Θ, cos Θ)`, which agrees with the arccos form but
/// keeps full relative accuracy for small angles and never leaves the domain.
pub fn angle(psi0: &StateVector, phi: &StateVector) -> Result<f64> {
    let (z, sine) = overlap_and_sine(psi0, phi)?;
    Ok(sine.atan2(z.norm().min(1.0)))
}

/// `L = ∫₀ᵀ ΔH dt` by composite Simpson on the trajectory samples.
pub fn path_length(traj: &Trajectory) -> Result<f64> {
    if traj.samples.len() < 3 {
        return Err(Error::GridTooCoarse {
            samples: traj.samples.len(),
        });
    }
    Ok(simpson(&traj.delta_hs(), traj.grid.step())?.max(0.0))
}

/// Summary of the speed limit along one trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QslReport {
    pub theta_t: f64,
    pub path_length: f64,
    pub avg_speed: f64,
    pub bound_time: f64,
    pub actual_time: f64,
    pub slack: f64,
    pub saturated: bool,
}

impl QslReport {
    /// `Θ(T) ≤ L` up to `tol·(1 + L)`.
    pub fn bound_holds(&self, tol: f64) -> bool {
        self.theta_t <= self.path_length + tol * (1.0 + self.path_length)
    }
}

/// Path lengths below this count as a stationary ray.
const STATIONARY_LENGTH: f64 = 1e-12;

pub fn qsl_report(traj: &Trajectory) -> Result<QslReport> {
    qsl_report_with(traj, &Tolerances::default())
}

pub fn qsl_report_with(traj: &Trajectory, tol: &Tolerances) -> Result<QslReport> {
    let length = path_length(traj)?;
    let theta_t = traj.last().theta;
    let actual_time = traj.horizon();
    let bound_time = if length > STATIONARY_LENGTH {
        theta_t * actual_time / length
    } else if theta_t <= tol.quadrature {
        0.0
    } else {
        return Err(Error::DegenerateTrajectory { theta_t });
    };
    let slack = length - theta_t;
    Ok(QslReport {
        theta_t,
        path_length: length,
        avg_speed: length / actual_time,
        bound_time,
        actual_time,
        slack,
        saturated: slack <= tol.saturation * (1.0 + length),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Checked,
    SkippedNearZeroAngle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSample {
    pub t: f64,
    pub residual: f64,
    pub lambda: Option<f64>,
    pub sin_theta: f64,
    pub status: SampleStatus,
}

/// Per-sample test of `P_⊥(−H+⟨H⟩)φ = −λ·P_⊥ψ₀/‖P_⊥ψ₀‖` with `λ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationCertificate {
    pub samples: Vec<CertificateSample>,
}

impl SaturationCertificate {
    fn checked(&self) -> impl Iterator<Item = &CertificateSample> {
        self.samples
            .iter()
            .filter(|s| s.status == SampleStatus::Checked)
    }

    /// Largest residual over checked samples (0 if none were checked).
    pub fn max_residual(&self) -> f64 {
        self.checked().map(|s| s.residual).fold(0.0, f64::max)
    }

    pub fn min_lambda(&self) -> Option<f64> {
        self.checked().filter_map(|s| s.lambda).reduce(f64::min)
    }

    pub fn fraction_skipped(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let skipped = self.samples.len() - self.checked().count();
        skipped as f64 / self.samples.len() as f64
    }

    /// Checked samples where `λ < −tol`; the sign condition fails there.
    pub fn negative_lambda_samples(&self, tol: f64) -> Vec<f64> {
        self.checked()
            .filter(|s| s.lambda.is_some_and(|l| l < -tol))
            .map(|s| s.t)
            .collect()
    }

    /// Every checked sample within `residual_tol` and with `λ ≥ −residual_tol`.
    pub fn is_saturating(&self, residual_tol: f64) -> bool {
        self.checked().all(|s| s.residual <= residual_tol)
            && self.negative_lambda_samples(residual_tol).is_empty()
    }
}

pub fn saturation_certificate<S: HamiltonianSchedule + ?Sized>(
    traj: &Trajectory,
    sched: &S,
) -> Result<SaturationCertificate> {
    saturation_certificate_with(traj, sched, Tolerances::default().angle_floor)
}

pub fn saturation_certificate_with<S: HamiltonianSchedule + ?Sized>(
    traj: &Trajectory,
    sched: &S,
    angle_floor: f64,
) -> Result<SaturationCertificate> {
    let psi0 = &traj.psi0;
    let mut samples = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let (z, sin_theta) = overlap_and_sine(psi0, &s.phi)?;
        if sin_theta < angle_floor {
            samples.push(CertificateSample {
                t: s.t,
                residual: 0.0,
                lambda: None,
                sin_theta,
                status: SampleStatus::SkippedNearZeroAngle,
            });
            continue;
        }
        let h = sched.at(s.t)?;
        // gauge ⟨ψ₀|φ⟩ ≥ 0
        let r = z.norm();
        let gauge = if r > 0.0 { z.conj() / r } else { Complex64::new(1.0, 0.0) };
        let phi: Vec<Complex64> = s.phi.amplitudes().iter().map(|a| a * gauge).collect();

        let mean = moments(&h, &phi)?.mean;
        let hv = h.apply_slice(&phi);
        let gen: Vec<Complex64> = hv.iter().zip(&phi).map(|(a, b)| b * mean - a).collect();
        let u = project_out(&gen, &phi);
        let p0 = project_out(psi0.amplitudes(), &phi);
        let p0_norm = scaled_norm(&p0);
        let w: Vec<Complex64> = p0.iter().map(|x| x / p0_norm).collect();

        let lambda = -dot(&w, &u).re;
        let miss: Vec<Complex64> = u.iter().zip(&w).map(|(a, b)| a + b * lambda).collect();
        let floor = 1e-12 * (1.0 + h.frobenius_norm());
        let residual = scaled_norm(&miss) / scaled_norm(&u).max(floor);
        samples.push(CertificateSample {
            t: s.t,
            residual,
            lambda: Some(lambda),
            sin_theta,
            status: SampleStatus::Checked,
        });
    }
    Ok(SaturationCertificate { samples })
}

/// `(I − |φ⟩⟨φ|)v` for unit `φ`.
fn project_out(v: &[Complex64], phi: &[Complex64]) -> Vec<Complex64> {
    let c = dot(phi, v);
    v.iter().zip(phi).map(|(a, p)| a - p * c).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub t: f64,
    pub dtheta_dt: f64,
    pub delta_h: f64,
    pub margin: f64,
}

/// Finite-difference check of `|dΘ/dt| ≤ ΔH(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    pub samples: Vec<RateSample>,
    /// Allowed negative margin from discretization error.
    pub tolerance: f64,
}

impl RateCheck {
    pub fn min_margin(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.margin)
            .fold(f64::INFINITY, f64::min)
    }

    /// Interior samples only.
    pub fn min_interior_margin(&self) -> f64 {
        let n = self.samples.len();
        self.samples[1..n - 1]
            .iter()
            .map(|s| s.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.min_interior_margin() >= -self.tolerance
    }
}

/// Differentiates `Θ` on the grid (second-order differences everywhere) and
/// compares against `ΔH`. The tolerance is `2·C·h² + 1e−8` with `C` the
/// leading error constant implied by the largest sampled third difference.
pub fn rate_check(traj: &Trajectory) -> Result<RateCheck> {
    let n = traj.samples.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { samples: n });
    }
    let h = traj.grid.step();
    let theta = traj.thetas();
    let last = n - 1;
    let mut samples = Vec::with_capacity(n);
    for (k, s) in traj.samples.iter().enumerate() {
        let d = if k == 0 {
            (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h)
        } else if k == last {
            (3.0 * theta[last] - 4.0 * theta[last - 1] + theta[last - 2]) / (2.0 * h)
        } else {
            (theta[k + 1] - theta[k - 1]) / (2.0 * h)
        };
        samples.push(RateSample {
            t: s.t,
            dtheta_dt: d,
            delta_h: s.delta_h,
            margin: s.delta_h - d.abs(),
        });
    }
    let third = theta
        .windows(4)
        .map(|w| ((w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]) / (h * h * h)).abs())
        .fold(0.0, f64::max);
    // centered error h²/6·Θ''', one-sided h²/3·Θ'''
    let c = third / 3.0;
    Ok(RateCheck {
        samples,
        tolerance: 2.0 * c * h * h + 1e-8,
    })
}
