//! Seeded random vectors, states and operators.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{kron, ComplexMatrix, C64};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector distributed uniformly on the sphere of `C^d`.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::projector(&haar_vector(rng, d))
}

/// Hilbert-Schmidt random density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let rho = &g * &g.dagger();
    let tr = rho.trace().re;
    hermitize(&rho.scale_real(1.0 / tr))
}

/// `rho_A (x) rho_B` with independent random factors.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R, d1: usize, d2: usize) -> ComplexMatrix {
    let a = random_density_matrix(rng, d1);
    let b = random_density_matrix(rng, d2);
    hermitize(&kron(&a, &b))
}

/// `(G + G^dagger) / 2` with Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    hermitize(&g)
}

/// Arbitrary complex matrix with Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// Exact Hermitian part.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.dagger()).scale_real(0.5)
}
