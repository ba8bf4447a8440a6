mod common;

use common::*;
use itqsl::qstate::spectral_bounds;
use itqsl::{Complex64, HermitianOperator, StateVector};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn state_strategy(d: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), d).prop_filter_map("nonzero", |v| {
        StateVector::new(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).ok()
    })
}

proptest! {
    #[test]
    fn self_inner_is_norm_squared(v in state_strategy(5)) {
        let z = v.inner(&v).unwrap();
        let n2 = v.norm() * v.norm();
        prop_assert!(z.im.abs() <= 1e-12 * n2);
        prop_assert!((z.re - n2).abs() <= 1e-12 * n2);
    }

    #[test]
    fn inner_is_conjugate_symmetric(a in state_strategy(4), b in state_strategy(4)) {
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn normalize_gives_unit_norm(v in state_strategy(6), scale in -200i32..200) {
        let s = v.scaled(Complex64::new(10f64.powi(scale), 0.0));
        if let Ok(s) = s {
            prop_assert!(s.normalize().is_normalized(1e-12));
        }
    }

    #[test]
    fn expectation_is_phase_invariant(seed in 0u64..10_000, phase in 0.0f64..6.3) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, 5);
        let phi = random_state(&mut r, 5);
        let a = h.expectation(&phi).unwrap();
        let b = h.expectation(&phi.with_global_phase(phase)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn moments_are_consistent(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let d = 2 + (seed % 7) as usize;
        let h = random_hermitian(&mut r, d);
        let phi = random_state(&mut r, d);
        let mean = h.expectation(&phi).unwrap();
        let dh = h.dispersion(&phi).unwrap();
        let second = squared(&h).expectation(&phi).unwrap();
        prop_assert!((dh * dh + mean * mean - second).abs() <= 1e-10 * (1.0 + second));
        let (lo, hi) = spectral_bounds(&h).unwrap();
        prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
    }
}

fn reconstruct(s: &itqsl::SpectralDecomposition) -> DMatrix<Complex64> {
    let d = s.eigenvectors.len();
    let mut m = DMatrix::zeros(d, d);
    for (lambda, v) in s.eigenvalues.iter().zip(&s.eigenvectors) {
        let col = nalgebra::DVector::from_column_slice(v.amplitudes());
        m += (&col * col.adjoint()).map(|z| z * *lambda);
    }
    m
}

/// Residual and orthonormality checked directly, independent of the solver.
fn check_spectrum(h: &HermitianOperator) {
    let s = h.eig().unwrap();
    assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    for (lambda, v) in s.eigenvalues.iter().zip(&s.eigenvectors) {
        let hv = h.apply(v).unwrap();
        let res: f64 = hv
            .iter()
            .zip(v.amplitudes())
            .map(|(a, b)| (a - b * *lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res <= 1e-9 * (1.0 + lambda.abs()), "residual {res}");
    }
    for j in 0..s.eigenvectors.len() {
        for k in 0..s.eigenvectors.len() {
            let z = s.eigenvectors[j].inner(&s.eigenvectors[k]).unwrap();
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(want, 0.0)).norm() <= 1e-10);
        }
    }
    let max_lambda = s.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let diff = (reconstruct(&s) - h.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-9 * (1.0 + max_lambda), "reconstruction {diff}");
}

#[test]
fn random_hermitian_spectra_pass_residual_oracle() {
    let mut r = rng(7);
    for d in [2, 3, 6, 6, 6, 8, 16] {
        check_spectrum(&random_hermitian(&mut r, d));
    }
}

#[test]
fn degenerate_spectrum_is_orthonormal() {
    // Grover projector conjugated by a random unitary so the degenerate
    // block is not already diagonal.
    let mut r = rng(11);
    let d = 6;
    let basis = random_hermitian(&mut r, d).eig().unwrap().eigenvectors;
    let mut m = DMatrix::zeros(d, d);
    for (k, v) in basis.iter().enumerate() {
        let e = if k == 0 { 0.0 } else { 1.0 };
        let col = nalgebra::DVector::from_column_slice(v.amplitudes());
        m += (&col * col.adjoint()).map(|z| z * e);
    }
    let h = HermitianOperator::from_matrix(m, 1e-10).unwrap();
    check_spectrum(&h);
    let s = h.eig().unwrap();
    assert!(s.eigenvalues[0].abs() < 1e-12);
    assert!(s.eigenvalues[1..].iter().all(|l| (l - 1.0).abs() < 1e-12));
}

#[test]
fn dispersion_of_eigenstates_vanishes() {
    let mut r = rng(3);
    let h = random_hermitian(&mut r, 5);
    for v in h.eig().unwrap().eigenvectors {
        assert!(h.dispersion(&v).unwrap() < 1e-12);
    }
}
