//! Seeded random states and observables for property sweeps.
//!
//! All generators take a `ChaCha8Rng` so that sweeps are bit-reproducible
//! from a `u64` seed on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkernel::ComplexMatrix;
use crate::quantum::{BipartiteState, DensityMatrix, Observable};

pub type SweepRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 mix of `(seed, index)`, giving each trial its own stream.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian_complex(rng: &mut SweepRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_vector(dim: usize, rng: &mut SweepRng) -> Vec<Complex64> {
    (0..dim).map(|_| gaussian_complex(rng)).collect()
}

/// Haar-random unitary: Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary(dim: usize, rng: &mut SweepRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = random_vector(dim, rng);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vk, uk) in v.iter_mut().zip(u) {
                *vk -= proj * uk;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

pub fn random_pure_state(dim: usize, rng: &mut SweepRng) -> DensityMatrix {
    loop {
        if let Ok(rho) = DensityMatrix::pure(&random_vector(dim, rng)) {
            return rho;
        }
    }
}

/// Mixture of `n_pure` random pure states with uniformly drawn weights.
pub fn random_mixture(dim: usize, n_pure: usize, rng: &mut SweepRng) -> DensityMatrix {
    let weights: Vec<f64> = (0..n_pure).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let components: Vec<(f64, DensityMatrix)> = weights
        .iter()
        .map(|w| (w / total, random_pure_state(dim, rng)))
        .collect();
    DensityMatrix::mixture(&components).expect("convex mixture of pure states")
}

/// Random state of random rank in `1..=dim`.
pub fn random_density_matrix(dim: usize, rng: &mut SweepRng) -> DensityMatrix {
    let rank = rng.gen_range(1..=dim);
    random_mixture(dim, rank, rng)
}

pub fn random_bipartite(d_a: usize, d_b: usize, rng: &mut SweepRng) -> BipartiteState {
    let n = d_a * d_b;
    let rank = rng.gen_range(1..=n);
    BipartiteState::new(random_mixture(n, rank, rng), (d_a, d_b)).expect("dims agree")
}

/// Observable `U diag(1, 2, ..., d) U†` with a Haar-random eigenbasis.
pub fn random_observable(dim: usize, rng: &mut SweepRng) -> Observable {
    let u = random_unitary(dim, rng);
    let spectrum: Vec<Complex64> = (1..=dim).map(|k| Complex64::new(k as f64, 0.0)).collect();
    let m = u
        .matmul(&ComplexMatrix::diagonal(&spectrum))
        .matmul(&u.adjoint());
    Observable::new(m.hermitian_part()).expect("Hermitian by construction")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, rng: &mut SweepRng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in r..dim {
            let z = if r == c {
                Complex64::new(rng.sample(StandardNormal), 0.0)
            } else {
                gaussian_complex(rng)
            };
            m[(r, c)] = z;
            m[(c, r)] = if r == c { z } else { z.conj() };
        }
    }
    m
}
