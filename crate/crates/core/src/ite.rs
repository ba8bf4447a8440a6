//! Imaginary-time propagation `d|ψ⟩/dt = −H(t)|ψ⟩`.
//!
//! Trajectories never store the raw `ψ(t)`: each sample keeps the normalized
//! state `φ = ψ/‖ψ‖` and `ln‖ψ‖` separately, so runs deep into the decay
//! regime neither underflow nor overflow.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::geometry;
use crate::qstate::{moments, scaled_norm, Complex64, HermitianOperator, SpectralDecomposition, StateVector};

/// Initial states must be normalized to this tolerance.
pub const INITIAL_NORM_TOL: f64 = 1e-10;

/// RK4 steps whose renormalization correction exceeds this are rejected.
pub const MAX_RENORMALIZATION: f64 = 1e-2;

/// Uniform grid `t_k = k·T/n`, `k = 0..=n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    num_steps: usize,
}

impl TimeGrid {
    /// `num_steps` must be even and at least 2 so Simpson quadrature applies.
    pub fn new(t_end: f64, num_steps: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::InvalidGrid(format!("horizon must be positive, got {t_end}")));
        }
        if num_steps < 2 || !num_steps.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "step count must be even and >= 2, got {num_steps}"
            )));
        }
        Ok(Self { t_end, num_steps })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.num_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.t_end / self.num_steps as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.num_steps).map(|k| self.time(k))
    }
}

/// A Hamiltonian of fixed dimension as a function of time.
pub trait HamiltonianSchedule: Sync {
    fn dimension(&self) -> usize;

    fn at(&self, t: f64) -> Result<Cow<'_, HermitianOperator>>;

    /// `Some` when the schedule does not depend on time.
    fn as_constant(&self) -> Option<&HermitianOperator> {
        None
    }
}

impl HamiltonianSchedule for HermitianOperator {
    fn dimension(&self) -> usize {
        HermitianOperator::dimension(self)
    }

    fn at(&self, _t: f64) -> Result<Cow<'_, HermitianOperator>> {
        Ok(Cow::Borrowed(self))
    }

    fn as_constant(&self) -> Option<&HermitianOperator> {
        Some(self)
    }
}

/// Schedule backed by a closure.
pub struct FnSchedule<F> {
    dimension: usize,
    f: F,
}

impl<F> FnSchedule<F>
where
    F: Fn(f64) -> Result<HermitianOperator> + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> HamiltonianSchedule for FnSchedule<F>
where
    F: Fn(f64) -> Result<HermitianOperator> + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn at(&self, t: f64) -> Result<Cow<'_, HermitianOperator>> {
        let h = (self.f)(t)?;
        if h.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: h.dimension(),
            });
        }
        Ok(Cow::Owned(h))
    }
}

#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    /// Normalized state.
    pub phi: StateVector,
    /// `ln‖ψ(t)‖` of the unnormalized state.
    pub log_norm: f64,
    /// Angle to the initial state, in `[0, π/2]`.
    pub theta: f64,
    /// Energy standard deviation `ΔH(t)`.
    pub delta_h: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub psi0: StateVector,
    pub grid: TimeGrid,
}

impl Trajectory {
    pub fn horizon(&self) -> f64 {
        self.grid.t_end()
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.theta).collect()
    }

    pub fn delta_hs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.delta_h).collect()
    }

    pub fn log_norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.log_norm).collect()
    }
}

fn check_initial(psi0: &StateVector, dimension: usize) -> Result<()> {
    if psi0.dimension() != dimension {
        return Err(Error::DimensionMismatch {
            expected: dimension,
            found: psi0.dimension(),
        });
    }
    if !psi0.is_normalized(INITIAL_NORM_TOL) {
        return Err(Error::InvalidParameter(format!(
            "initial state must be normalized (norm {})",
            psi0.norm()
        )));
    }
    Ok(())
}

fn initial_sample(psi0: &StateVector, h: &HermitianOperator) -> Result<TrajectorySample> {
    Ok(TrajectorySample {
        t: 0.0,
        phi: psi0.clone(),
        log_norm: 0.0,
        theta: 0.0,
        delta_h: moments(h, psi0.amplitudes())?.dispersion,
    })
}

fn sample(
    t: f64,
    phi: StateVector,
    log_norm: f64,
    psi0: &StateVector,
    h: &HermitianOperator,
) -> Result<TrajectorySample> {
    let theta = geometry::angle(psi0, &phi)?;
    let delta_h = moments(h, phi.amplitudes())?.dispersion;
    Ok(TrajectorySample {
        t,
        phi,
        log_norm,
        theta,
        delta_h,
    })
}

/// Evaluates `e^{−Ht}|ψ₀⟩` at arbitrary times from one eigendecomposition.
///
/// Each eigencomponent is weighted in the log domain and the largest weight
/// is factored out, which is the ground-energy shift `H → H − λ_ref` with
/// `λ_ref` the lowest level that `ψ₀` actually populates.
#[derive(Clone, Debug)]
pub struct ExactPropagator {
    spectrum: SpectralDecomposition,
    phases: Vec<Complex64>,
    log_weights: Vec<f64>,
    psi0: StateVector,
}

impl ExactPropagator {
    pub fn new(h: &HermitianOperator, psi0: &StateVector) -> Result<Self> {
        check_initial(psi0, h.dimension())?;
        let spectrum = h.eig()?;
        Ok(Self::with_spectrum(spectrum, psi0))
    }

    pub(crate) fn with_spectrum(spectrum: SpectralDecomposition, psi0: &StateVector) -> Self {
        let mut phases = Vec::with_capacity(spectrum.eigenvalues.len());
        let mut log_weights = Vec::with_capacity(spectrum.eigenvalues.len());
        for v in &spectrum.eigenvectors {
            let c = v.inner(psi0).expect("dimensions checked");
            let r = c.norm();
            if r > 0.0 {
                phases.push(c / r);
                log_weights.push(r.ln());
            } else {
                phases.push(Complex64::new(0.0, 0.0));
                log_weights.push(f64::NEG_INFINITY);
            }
        }
        Self {
            spectrum,
            phases,
            log_weights,
            psi0: psi0.clone(),
        }
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Normalized `φ(t)` and `ln‖e^{−Ht}ψ₀‖`.
    pub fn state_at(&self, t: f64) -> Result<(StateVector, f64)> {
        if t == 0.0 {
            return Ok((self.psi0.clone(), 0.0));
        }
        let exponents: Vec<f64> = self
            .log_weights
            .iter()
            .zip(&self.spectrum.eigenvalues)
            .map(|(lw, lambda)| lw - lambda * t)
            .collect();
        let reference = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !reference.is_finite() {
            return Err(Error::VanishingState { t });
        }
        let d = self.psi0.dimension();
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        let mut norm_sq = 0.0;
        for ((e, phase), v) in exponents.iter().zip(&self.phases).zip(&self.spectrum.eigenvectors) {
            let w = (e - reference).exp();
            if w == 0.0 {
                continue;
            }
            norm_sq += w * w;
            let coeff = phase * w;
            for (a, x) in amps.iter_mut().zip(v.amplitudes()) {
                *a += coeff * x;
            }
        }
        let log_norm = reference + 0.5 * norm_sq.ln();
        let phi = StateVector::from_trusted(amps)
            .map_err(|_| Error::VanishingState { t })?
            .normalize();
        if !log_norm.is_finite() {
            return Err(Error::VanishingState { t });
        }
        Ok((phi, log_norm))
    }
}

/// Exact spectral propagation of a time-independent Hamiltonian.
pub fn propagate_exact(h: &HermitianOperator, psi0: &StateVector, grid: TimeGrid) -> Result<Trajectory> {
    let propagator = ExactPropagator::new(h, psi0)?;
    let mut samples = Vec::with_capacity(grid.num_steps() + 1);
    samples.push(initial_sample(psi0, h)?);
    for k in 1..=grid.num_steps() {
        let t = grid.time(k);
        let (phi, log_norm) = propagator.state_at(t)?;
        samples.push(sample(t, phi, log_norm, psi0, h)?);
    }
    Ok(Trajectory {
        samples,
        psi0: psi0.clone(),
        grid,
    })
}

/// Right-hand side of the normalized equation, `(−H + ⟨H⟩)φ`, together with `⟨H⟩`.
fn normalized_rhs(h: &HermitianOperator, phi: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    let mean = moments(h, phi)?.mean;
    let hv = h.apply_slice(phi);
    let rhs = hv.iter().zip(phi).map(|(a, b)| b * mean - a).collect();
    Ok((rhs, mean))
}

fn axpy(base: &[Complex64], scale: f64, dir: &[Complex64]) -> Vec<Complex64> {
    base.iter().zip(dir).map(|(b, d)| b + d * scale).collect()
}

/// Classical RK4 on `dφ/dt = (−H + ⟨H⟩_t)φ`, renormalizing after each step.
///
/// `ln‖ψ‖` is carried as an extra component with `d ln‖ψ‖/dt = −⟨H⟩_t`;
/// because that right-hand side does not depend on the log-norm itself, the
/// RK4 update for it is Simpson's rule over the step.
pub fn propagate_rk4<S: HamiltonianSchedule + ?Sized>(
    sched: &S,
    psi0: &StateVector,
    grid: TimeGrid,
) -> Result<Trajectory> {
    check_initial(psi0, sched.dimension())?;
    let h_step = grid.step();
    let mut samples = Vec::with_capacity(grid.num_steps() + 1);
    let mut h_now = sched.at(0.0)?.into_owned();
    samples.push(initial_sample(psi0, &h_now)?);

    let mut phi: Vec<Complex64> = psi0.amplitudes().to_vec();
    let mut log_norm = 0.0;
    for k in 0..grid.num_steps() {
        let t = grid.time(k);
        let h_mid = sched.at(t + 0.5 * h_step)?.into_owned();
        let h_next = sched.at(grid.time(k + 1))?.into_owned();

        let (k1, m1) = normalized_rhs(&h_now, &phi)?;
        let (k2, m2) = normalized_rhs(&h_mid, &axpy(&phi, 0.5 * h_step, &k1))?;
        let (k3, m3) = normalized_rhs(&h_mid, &axpy(&phi, 0.5 * h_step, &k2))?;
        let (k4, m4) = normalized_rhs(&h_next, &axpy(&phi, h_step, &k3))?;

        let next: Vec<Complex64> = (0..phi.len())
            .map(|i| phi[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h_step / 6.0))
            .collect();
        let norm = scaled_norm(&next);
        let correction = (norm - 1.0).abs();
        let t_next = grid.time(k + 1);
        if !norm.is_finite() || correction > MAX_RENORMALIZATION {
            return Err(Error::StepSizeTooLarge {
                t: t_next,
                correction,
            });
        }
        phi = next.iter().map(|a| a / norm).collect();
        log_norm -= h_step / 6.0 * (m1 + 2.0 * (m2 + m3) + m4);

        let state = StateVector::from_trusted(phi.clone())?;
        samples.push(sample(t_next, state, log_norm, psi0, &h_next)?);
        h_now = h_next;
    }
    Ok(Trajectory {
        samples,
        psi0: psi0.clone(),
        grid,
    })
}

/// Exact propagation for constant schedules, RK4 otherwise.
pub fn propagate<S: HamiltonianSchedule + ?Sized>(
    sched: &S,
    psi0: &StateVector,
    grid: TimeGrid,
) -> Result<Trajectory> {
    match sched.as_constant() {
        Some(h) => propagate_exact(h, psi0, grid),
        None => propagate_rk4(sched, psi0, grid),
    }
}

/// `F(t_k) = |⟨target|φ(t_k)⟩|²` along a trajectory.
pub fn fidelity_to(trajectory: &Trajectory, target: &StateVector) -> Result<Vec<(f64, f64)>> {
    trajectory
        .samples
        .iter()
        .map(|s| {
            let z = target.inner(&s.phi)?;
            Ok((s.t, z.norm_sqr().min(1.0)))
        })
        .collect()
}

/// `1 − F(t_k)`, computed as `‖φ − ⟨target|φ⟩ target‖²` so it keeps full
/// relative accuracy as `F → 1`.
pub fn infidelity_to(trajectory: &Trajectory, target: &StateVector) -> Result<Vec<(f64, f64)>> {
    trajectory
        .samples
        .iter()
        .map(|s| {
            let z = target.inner(&s.phi)?;
            let rest: Vec<Complex64> = s
                .phi
                .amplitudes()
                .iter()
                .zip(target.amplitudes())
                .map(|(p, w)| p - w * z)
                .collect();
            Ok((s.t, scaled_norm(&rest).powi(2).min(1.0)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn two_level(theta: f64, e: f64) -> (HermitianOperator, StateVector) {
        (
            HermitianOperator::diagonal(&[e, 0.0]).unwrap(),
            StateVector::from_real(&[theta.cos(), theta.sin()]).unwrap(),
        )
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(1.0, 3).is_err());
        assert!(TimeGrid::new(0.0, 4).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
        let g = TimeGrid::new(2.0, 4).unwrap();
        assert_eq!(g.times().collect::<Vec<_>>(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn exact_two_level_state() {
        let (h, psi0) = two_level(FRAC_PI_4, 1.0);
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(1.0, 2).unwrap()).unwrap();
        let phi = &traj.last().phi;
        let d = (1.0 + (-2.0f64).exp()).sqrt();
        assert!((phi.amplitudes()[0].norm() - (-1.0f64).exp() / d).abs() < 1e-15);
        assert!((phi.amplitudes()[1].norm() - 1.0 / d).abs() < 1e-15);
        // ln‖ψ(1)‖ = ln sqrt((e^{-2} + 1)/2)
        let want = (0.5 * ((-2.0f64).exp() + 1.0)).sqrt().ln();
        assert!((traj.last().log_norm - want).abs() < 1e-14);
    }

    #[test]
    fn first_sample_is_identity() {
        let (h, psi0) = two_level(0.3, 2.0);
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(1.0, 4).unwrap()).unwrap();
        let s0 = &traj.samples[0];
        assert_eq!(s0.phi, psi0);
        assert_eq!(s0.log_norm, 0.0);
        assert_eq!(s0.theta, 0.0);
    }

    #[test]
    fn eigenstate_is_stationary() {
        let h = HermitianOperator::diagonal(&[0.7, -0.4, 2.0]).unwrap();
        let psi0 = StateVector::basis(3, 0).unwrap();
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(3.0, 6).unwrap()).unwrap();
        for s in &traj.samples {
            assert!(s.phi.distance(&psi0).unwrap() < 1e-14);
            assert_eq!(s.theta, 0.0);
            assert!((s.log_norm + 0.7 * s.t).abs() < 1e-13);
            assert_eq!(s.delta_h, 0.0);
        }
    }

    #[test]
    fn long_horizon_does_not_underflow() {
        // ‖ψ(2000)‖ = e^{-2000·…} is far below f64 range.
        let h = HermitianOperator::diagonal(&[5.0, 3.0]).unwrap();
        let psi0 = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(2000.0, 4).unwrap()).unwrap();
        let s = traj.last();
        assert!((s.log_norm - (0.8f64.ln() - 3.0 * 2000.0)).abs() < 1e-9);
        assert!((s.phi.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
        // negative energies would overflow without the shift
        let h = HermitianOperator::diagonal(&[-5.0, -3.0]).unwrap();
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(2000.0, 4).unwrap()).unwrap();
        assert!((traj.last().log_norm - (0.6f64.ln() + 5.0 * 2000.0)).abs() < 1e-9);
    }

    #[test]
    fn rk4_rejects_coarse_grid() {
        let (h, psi0) = two_level(FRAC_PI_4, 50.0);
        let err = propagate_rk4(&h, &psi0, TimeGrid::new(10.0, 10).unwrap()).unwrap_err();
        assert!(matches!(err, Error::StepSizeTooLarge { .. }), "{err:?}");
    }

    #[test]
    fn rejects_unnormalized_initial_state() {
        let h = HermitianOperator::diagonal(&[1.0, 0.0]).unwrap();
        let psi0 = StateVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(propagate_exact(&h, &psi0, TimeGrid::new(1.0, 2).unwrap()).is_err());
    }

    #[test]
    fn dispatch_uses_exact_path_for_constant() {
        let (h, psi0) = two_level(0.4, 1.0);
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let a = propagate(&h, &psi0, grid).unwrap();
        let b = propagate_exact(&h, &psi0, grid).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.phi, y.phi);
        }
    }

    #[test]
    fn fidelity_examples() {
        let (h, psi0) = two_level(FRAC_PI_4, 1.0);
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(40.0, 4).unwrap()).unwrap();
        let f0 = fidelity_to(&traj, &psi0).unwrap();
        assert!((f0[0].1 - 1.0).abs() < 1e-15);
        let ground = StateVector::basis(2, 1).unwrap();
        let f = fidelity_to(&traj, &ground).unwrap();
        assert!(f.last().unwrap().1 >= 1.0 - 1e-12);
        let wrong = StateVector::basis(3, 1).unwrap();
        assert!(fidelity_to(&traj, &wrong).is_err());
        let inf = infidelity_to(&traj, &ground).unwrap();
        for ((_, f), (_, q)) in f.iter().zip(&inf) {
            assert!((1.0 - f - q).abs() < 1e-15);
        }
        // e^{-80} is far below the resolution of 1 − F
        assert!((inf[4].1 - (-80.0f64).exp() / (1.0 + (-80.0f64).exp())).abs() < 1e-45);
    }
}
