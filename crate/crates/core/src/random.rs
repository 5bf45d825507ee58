//! Seeded random states, unitaries and channels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{eig_hermitian, spectral_map, ComplexMatrix, DensityMatrix, StateVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `index` of a seeded run.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random Hermitian matrix `(G + G^dagger)/2` with Ginibre `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| g[(i, j)]).collect();
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random mixed state `G G^dagger / Tr` with a `dim x rank` Ginibre factor.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scale_real(1.0 / tr))
}

/// Random trace-preserving Kraus set `K_k = G_k S^{-1/2}` with `S = Σ G_k^dagger G_k`.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<ComplexMatrix> {
    let gs: Vec<ComplexMatrix> = (0..count).map(|_| ginibre(rng, dim, dim)).collect();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for g in &gs {
        s = &s + &g.adjoint().matmul(g);
    }
    let s = (&s + &s.adjoint()).scale_real(0.5);
    let (vals, vecs) = eig_hermitian(&s).expect("Gram matrix is Hermitian");
    let inv_sqrt = spectral_map(&vals, &vecs, |x| C64::new(1.0 / x.sqrt(), 0.0));
    gs.iter().map(|g| g.matmul(&inv_sqrt)).collect()
}

/// Applies `rho -> Σ K rho K^dagger`.
pub fn apply_kraus(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let n = rho.rows();
    kraus
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &k.matmul(rho).matmul(&k.adjoint()))
}
