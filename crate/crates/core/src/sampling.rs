//! Reproducible random quantum objects.
//!
//! Every generator is a ChaCha stream selected by `(seed, stream)`, so
//! independent tasks (see-saw restarts, sampled table cells) draw from
//! disjoint keystreams regardless of scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::quantum::{DensityMatrix, Effect, StateVector};

/// Generator for stream `stream` under key `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for a 2-D cell index.
pub fn cell_stream(a: usize, b: usize) -> u64 {
    ((a as u64) << 32) | (b as u64 & 0xffff_ffff)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized standard complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Ginibre matrix `G` with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::from_vec(dim, entries).expect("dim² entries")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    (&g + &g.adjoint()).scale(0.5)
}

/// Random mixed state `G G† / tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_matrix(w.scale(1.0 / tr)).expect("Wishart matrix is a valid state")
}

/// Random `outcomes`-element POVM: `E_b = S^{-1/2} G_b G_b† S^{-1/2}` with
/// `S = Σ G_b G_b†`.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Vec<Effect> {
    let positives: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(rng, dim);
            &g * &g.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(dim);
    for p in &positives {
        s = &s + p;
    }
    let eig = eig_hermitian(&s).expect("sum of positives is Hermitian");
    let mut inv_sqrt = ComplexMatrix::zeros(dim);
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        inv_sqrt = &inv_sqrt + &ComplexMatrix::outer(v).scale(1.0 / lambda.sqrt());
    }
    positives
        .iter()
        .map(|p| {
            let m = &(&inv_sqrt * p) * &inv_sqrt;
            // restore exact Hermiticity lost to rounding
            let m = (&m + &m.adjoint()).scale(0.5);
            Effect::new(m).expect("normalized positive operator is an effect")
        })
        .collect()
}
