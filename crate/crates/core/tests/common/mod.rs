#![allow(dead_code)]

use itqsl::{Complex64, HermitianOperator, StateVector};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut TestRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `(A + A†)/2` with i.i.d. complex Gaussian `A`.
pub fn random_hermitian(rng: &mut TestRng, d: usize) -> HermitianOperator {
    let a = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let h = (&a + a.adjoint()).map(|z| z * 0.5);
    HermitianOperator::from_matrix(h, 1e-10).unwrap()
}

pub fn random_state(rng: &mut TestRng, d: usize) -> StateVector {
    StateVector::new((0..d).map(|_| gaussian(rng)).collect())
        .unwrap()
        .normalize()
}

pub fn uniform(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// `H` times itself, for second-moment oracles.
pub fn squared(h: &HermitianOperator) -> HermitianOperator {
    let m = h.matrix() * h.matrix();
    HermitianOperator::from_matrix(m, 1e-8).unwrap()
}
