//! Seeded generators for states, unitaries and measurements.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::eigen::{eigh, SUPPORT_TOL};
use super::matrix::{CMatrix, HermitianMatrix};
use super::measurement::Measurement;
use super::state::DensityMatrix;
use crate::error::{invalid, Result};

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Rank-`rank` density matrix `G G† / tr(G G†)` with `G` a `dim × rank`
/// matrix of standard complex Gaussians drawn from the seeded stream.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(invalid(format!(
            "rank must lie in 1..={dim}, got {rank}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Complex64> = (0..dim * rank).map(|_| complex_gaussian(&mut rng)).collect();
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rank {
                acc += g[i * rank + r] * g[j * rank + r].conj();
            }
            m[(i, j)] = acc;
        }
    }
    DensityMatrix::from_unnormalized(m)
}

/// Haar-random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
        // twice is enough for orthogonality at machine precision
        for _ in 0..2 {
            for c in &cols {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = CMatrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Random Hermitian matrix with independent Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..dim {
            let z = complex_gaussian(&mut rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

/// Random `outcomes`-element POVM `E_k = S^{-1/2} G_k S^{-1/2}` with
/// `G_k` Wishart and `S = Σ G_k`.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Measurement> {
    if outcomes == 0 {
        return Err(invalid("POVM needs at least one outcome"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::with_capacity(outcomes);
    let mut total = CMatrix::zeros(dim);
    for _ in 0..outcomes {
        let a: Vec<Complex64> = (0..dim * dim).map(|_| complex_gaussian(&mut rng)).collect();
        let a = CMatrix::from_rows(dim, a)?;
        let g = &a * &a.adjoint();
        total = &total + &g;
        parts.push(g);
    }
    let inv_root = eigh(&HermitianMatrix::from_computed(total))?
        .apply(|x| 1.0 / x.sqrt(), SUPPORT_TOL)?;
    let effects = parts
        .iter()
        .map(|g| HermitianMatrix::from_computed(&(inv_root.matrix() * g) * inv_root.matrix()))
        .collect();
    Measurement::from_effects(effects)
}

/// Point on the probability simplex with all entries at least `floor`.
pub fn random_simplex_point<R: Rng>(rng: &mut R, k: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    let free = 1.0 - floor * k as f64;
    raw.iter().map(|x| floor + free * x / total).collect()
}

/// Commuting full-rank pair diagonal in a shared random basis, with the
/// projective measurement onto that basis.
pub fn random_commuting_pair(
    dim: usize,
    seed: u64,
) -> Result<(DensityMatrix, DensityMatrix, Measurement)> {
    let u = random_unitary(dim, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let p = random_simplex_point(&mut rng, dim, 1e-3);
    let q = random_simplex_point(&mut rng, dim, 1e-3);
    let rho = DensityMatrix::diagonal(&p)?.conjugate_by(&u)?;
    let sigma = DensityMatrix::diagonal(&q)?.conjugate_by(&u)?;
    Ok((rho, sigma, Measurement::from_orthonormal_basis(&u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_one_is_the_unit_matrix() {
        let rho = random_density(1, 1, 42).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_two_in_dim_four() {
        let rho = random_density(4, 2, 7).unwrap();
        assert!((rho.hermitian().trace() - 1.0).abs() < 1e-12);
        let above = rho
            .spectrum()
            .eigenvalues
            .iter()
            .filter(|&&l| l > 1e-12)
            .count();
        assert_eq!(above, 2);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_density(5, 3, 11).unwrap();
        let b = random_density(5, 3, 11).unwrap();
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
    }

    #[test]
    fn rank_out_of_range() {
        assert!(random_density(3, 0, 1).is_err());
        assert!(random_density(3, 4, 1).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        for dim in 1..9 {
            let u = random_unitary(dim, dim as u64);
            let gram = &u.adjoint() * &u;
            assert!((&gram - &CMatrix::identity(dim)).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn commuting_pair_commutes() {
        let (rho, sigma, m) = random_commuting_pair(5, 3).unwrap();
        assert!(rho.commutator_norm(&sigma).unwrap() < 1e-12);
        assert!(m.is_projective(1e-12));
    }
}
