//! Closed-form two-level and Grover imaginary-time models.
//!
//! Two-level: `H = E|0⟩⟨0|`, `ψ₀ = cos θ|0⟩ + sin θ|1⟩`. The normalized state
//! stays on the real great circle, so its angle to `ψ₀` grows as
//! `arctan(tan θ·e^{Et}) − θ` and the path length equals the angle: the speed
//! limit is saturated for every `θ ∈ (0, π/2)`.
//!
//! Grover: `H = E_w|w⟩⟨w| + E_⊥(I − |w⟩⟨w|)` with the uniform initial state,
//! so `tan θ(t) = √(N−1)·e^{−gt}` with `g = E_⊥ − E_w`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ite::ExactPropagator;
use crate::qstate::{Complex64, HermitianOperator, StateVector};

/// Largest dimension for which the Grover model is embedded by default.
pub const EMBED_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub theta0: f64,
    pub energy: f64,
    pub horizon: f64,
}

impl TwoLevelParams {
    pub fn new(theta0: f64, energy: f64, horizon: f64) -> Result<Self> {
        let p = Self {
            theta0,
            energy,
            horizon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta0.is_finite() && self.theta0 > 0.0 && self.theta0 < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "theta0 must lie in (0, pi/2), got {}",
                self.theta0
            )));
        }
        if !(self.energy.is_finite() && self.energy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "energy must be positive, got {}",
                self.energy
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// `diag(E, 0)` and `cos θ|0⟩ + sin θ|1⟩`.
pub fn two_level_hamiltonian(p: &TwoLevelParams) -> Result<(HermitianOperator, StateVector)> {
    let h = HermitianOperator::diagonal(&[p.energy, 0.0])?;
    let psi0 = StateVector::from_real(&[p.theta0.cos(), p.theta0.sin()])?;
    Ok((h, psi0))
}

/// `Θ(t) = arccos[(cos²θ e^{−Et} + sin²θ)/√(cos²θ e^{−2Et} + sin²θ)]`.
///
/// The sine of the same angle is `sin θ cos θ (1 − e^{−Et})/√(…)`, so the
/// value is taken as an `atan2` of the two numerators, which avoids the
/// cancellation in `arccos` near zero.
pub fn two_level_theta(p: &TwoLevelParams, t: f64) -> f64 {
    let (s, c) = p.theta0.sin_cos();
    let x = (-p.energy * t).exp();
    let one_minus_x = -(-p.energy * t).exp_m1();
    let cosine = c * c * x + s * s;
    let sine = s * c * one_minus_x;
    sine.atan2(cosine)
}

/// `ΔH(t) = E sin θ cos θ e^{−Et}/(cos²θ e^{−2Et} + sin²θ)`.
pub fn two_level_dispersion(p: &TwoLevelParams, t: f64) -> f64 {
    let (s, c) = p.theta0.sin_cos();
    let x = (-p.energy * t).exp();
    p.energy * s * c * x / (c * c * x * x + s * s)
}

/// `∫₀ᵀ ΔH dt = arctan(cot θ) − arctan(e^{−ET} cot θ)`, with
/// `arctan(cot θ) = π/2 − θ` on `(0, π/2)`.
pub fn two_level_dispersion_integral(p: &TwoLevelParams) -> f64 {
    let (s, c) = p.theta0.sin_cos();
    let cot = c / s;
    (FRAC_PI_2 - p.theta0) - ((-p.energy * p.horizon).exp() * cot).atan()
}

/// `∫₀ᵀ ΔH dt − Θ(T)` from the closed forms.
pub fn two_level_saturation_gap(p: &TwoLevelParams) -> f64 {
    two_level_dispersion_integral(p) - two_level_theta(p, p.horizon)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroverParams {
    pub dimension: usize,
    pub e_w: f64,
    pub e_perp: f64,
    pub horizon: f64,
    /// Threshold on `r(T) = tan θ(T)`.
    pub epsilon: f64,
}

impl GroverParams {
    pub fn new(dimension: usize, e_w: f64, e_perp: f64, horizon: f64, epsilon: f64) -> Result<Self> {
        let p = Self {
            dimension,
            e_w,
            e_perp,
            horizon,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::DimensionTooSmall {
                dimension: self.dimension,
            });
        }
        if !(self.e_w.is_finite() && self.e_perp.is_finite()) {
            return Err(Error::InvalidParameter("energies must be finite".into()));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// `g = E_⊥ − E_w`.
    pub fn gap(&self) -> f64 {
        self.e_perp - self.e_w
    }

    /// `θ(0) = arctan √(N−1)`.
    pub fn theta0(&self) -> f64 {
        ((self.dimension - 1) as f64).sqrt().atan()
    }
}

/// Grover Hamiltonian, initial state and marked state in one basis.
#[derive(Clone, Debug)]
pub struct GroverModel {
    pub hamiltonian: HermitianOperator,
    pub psi0: StateVector,
    pub marked: StateVector,
    pub embedded: bool,
}

impl GroverModel {
    /// `r = |component orthogonal to w| / |⟨w|φ⟩|`.
    pub fn tangent_ratio(&self, phi: &StateVector) -> Result<f64> {
        let a = self.marked.inner(phi)?;
        let rest: Vec<Complex64> = phi
            .amplitudes()
            .iter()
            .zip(self.marked.amplitudes())
            .map(|(x, w)| x - w * a)
            .collect();
        let perp = crate::qstate::scaled_norm(&rest);
        Ok(perp / a.norm())
    }
}

/// Builds the model in the reduced `{|w⟩, |w_⊥⟩}` basis, or embedded in
/// dimension `N` with `|w⟩ = |0⟩` when `embed` is set.
pub fn grover_model(p: &GroverParams, embed: bool) -> Result<GroverModel> {
    p.validate()?;
    let n = p.dimension as f64;
    if embed {
        let mut diag = vec![p.e_perp; p.dimension];
        diag[0] = p.e_w;
        let hamiltonian = HermitianOperator::diagonal(&diag)?;
        let psi0 = StateVector::from_real(&vec![1.0 / n.sqrt(); p.dimension])?.normalize();
        let marked = StateVector::basis(p.dimension, 0)?;
        Ok(GroverModel {
            hamiltonian,
            psi0,
            marked,
            embedded: true,
        })
    } else {
        let hamiltonian = HermitianOperator::diagonal(&[p.e_w, p.e_perp])?;
        let psi0 = StateVector::from_real(&[(1.0 / n).sqrt(), ((n - 1.0) / n).sqrt()])?;
        let marked = StateVector::basis(2, 0)?;
        Ok(GroverModel {
            hamiltonian,
            psi0,
            marked,
            embedded: false,
        })
    }
}

/// `θ(t) = arctan(√(N−1)·e^{−gt})`.
pub fn grover_theta(p: &GroverParams, t: f64) -> f64 {
    (((p.dimension - 1) as f64).sqrt() * (-p.gap() * t).exp()).atan()
}

/// `r(t) = tan θ(t)`.
pub fn grover_tangent(p: &GroverParams, t: f64) -> f64 {
    ((p.dimension - 1) as f64).sqrt() * (-p.gap() * t).exp()
}

/// `ΔH(t) = |g| sin θ(t) cos θ(t)`.
pub fn grover_dispersion(p: &GroverParams, t: f64) -> f64 {
    let th = grover_theta(p, t);
    p.gap().abs() * th.sin() * th.cos()
}

/// First time with `r(t) = ε`: `(1/g)(½ ln(N−1) + ln(1/ε))`.
pub fn grover_runtime(p: &GroverParams) -> Result<f64> {
    let g = p.gap();
    if g <= 0.0 {
        return Err(Error::NonPositiveGap { gap: g });
    }
    Ok((0.5 * ((p.dimension - 1) as f64).ln() - p.epsilon.ln()) / g)
}

/// Large-`N` form `(1/g)(½ ln N + ln(1/ε))`.
pub fn grover_runtime_large_n(p: &GroverParams) -> Result<f64> {
    let g = p.gap();
    if g <= 0.0 {
        return Err(Error::NonPositiveGap { gap: g });
    }
    Ok((0.5 * (p.dimension as f64).ln() - p.epsilon.ln()) / g)
}

/// Bisection on the simulated `r(t)` for the first time it reaches `ε`
/// within `[0, p.horizon]`; `None` if it never does.
pub fn grover_crossing_time(p: &GroverParams, embed: bool) -> Result<Option<f64>> {
    let g = p.gap();
    if g <= 0.0 {
        return Err(Error::NonPositiveGap { gap: g });
    }
    let model = grover_model(p, embed)?;
    let prop = ExactPropagator::new(&model.hamiltonian, &model.psi0)?;
    let excess = |t: f64| -> Result<f64> {
        let (phi, _) = prop.state_at(t)?;
        Ok(model.tangent_ratio(&phi)? - p.epsilon)
    };
    let mut lo = 0.0;
    let mut hi = p.horizon;
    if excess(lo)? <= 0.0 {
        return Ok(Some(0.0));
    }
    if excess(hi)? > 0.0 {
        return Ok(None);
    }
    // r(t) is monotone for g > 0
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// `1 − F(t) ≤ (‖χ‖²/|α|²)·e^{−2Δt}` for `F = |⟨w|φ(t)⟩|²`.
pub fn fidelity_convergence_bound(alpha_sq: f64, chi_sq: f64, gap: f64, t: f64) -> Result<f64> {
    if alpha_sq == 0.0 {
        return Err(Error::ZeroOverlap);
    }
    if !(alpha_sq > 0.0 && alpha_sq <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "alpha_sq must lie in (0, 1], got {alpha_sq}"
        )));
    }
    if chi_sq.is_nan() || chi_sq < 0.0 {
        return Err(Error::InvalidParameter(format!("chi_sq must be >= 0, got {chi_sq}")));
    }
    if gap <= 0.0 {
        return Err(Error::NonPositiveGap { gap });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("t must be >= 0, got {t}")));
    }
    Ok(chi_sq / alpha_sq * (-2.0 * gap * t).exp())
}

/// Exact Grover fidelity `F(t) = |α|²e^{−2E_w t}/(|α|²e^{−2E_w t} + ‖χ‖²e^{−2E_⊥ t})`.
pub fn grover_fidelity(p: &GroverParams, t: f64) -> f64 {
    let alpha_sq = 1.0 / p.dimension as f64;
    let chi_sq = 1.0 - alpha_sq;
    let ratio = chi_sq / alpha_sq * (-2.0 * p.gap() * t).exp();
    1.0 / (1.0 + ratio)
}
