//! Seeded random instances.

use itqsl::{Complex64, HermitianOperator, StateVector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut InstanceRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `(A + A†)/2` with i.i.d. complex Gaussian `A`.
pub fn random_hermitian(rng: &mut InstanceRng, d: usize) -> HermitianOperator {
    let a = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let h = (&a + a.adjoint()).map(|z| z * 0.5);
    HermitianOperator::from_matrix(h, 1e-10).expect("symmetrized by construction")
}

pub fn random_state(rng: &mut InstanceRng, d: usize) -> StateVector {
    StateVector::new((0..d).map(|_| gaussian(rng)).collect())
        .expect("nonzero with probability one")
        .normalize()
}

pub fn uniform(rng: &mut InstanceRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
