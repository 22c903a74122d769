//! Seeded generators for test data.
//!
//! Every generator has a `seed` entry point and a `*_with` variant taking an
//! explicit RNG, so callers can split one root seed across many draws.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, Functional, WStarAlgebra};
use crate::CMatrix;

pub type WRng = ChaCha8Rng;

pub fn rng(seed: u64) -> WRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for draw `index` under `root`; distinct indices use distinct
/// ChaCha streams of the same key.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(root);
    r.set_stream(index);
    r.next_u64()
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal of `R` rotated to the positive reals.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_element_with<R: Rng + ?Sized>(alg: &WStarAlgebra, rng: &mut R) -> AlgebraElement {
    AlgebraElement::from_blocks(alg.sizes().iter().map(|&n| gaussian_matrix(rng, n, n)).collect())
}

pub fn random_selfadjoint_with<R: Rng + ?Sized>(alg: &WStarAlgebra, rng: &mut R) -> AlgebraElement {
    let x = random_element_with(alg, rng);
    AlgebraElement::from_blocks(
        x.blocks
            .iter()
            .map(|m| (m + m.adjoint()) * Complex64::new(0.5, 0.0))
            .collect(),
    )
}

pub fn random_unitary_with<R: Rng + ?Sized>(alg: &WStarAlgebra, rng: &mut R) -> AlgebraElement {
    AlgebraElement::from_blocks(alg.sizes().iter().map(|&n| haar_unitary(rng, n)).collect())
}

pub fn random_functional_with<R: Rng + ?Sized>(alg: &WStarAlgebra, rng: &mut R) -> Functional {
    random_element_with(alg, rng).to_functional()
}

pub fn random_element(alg: &WStarAlgebra, seed: u64) -> AlgebraElement {
    random_element_with(alg, &mut rng(seed))
}

pub fn random_selfadjoint(alg: &WStarAlgebra, seed: u64) -> AlgebraElement {
    random_selfadjoint_with(alg, &mut rng(seed))
}

pub fn random_unitary(alg: &WStarAlgebra, seed: u64) -> AlgebraElement {
    random_unitary_with(alg, &mut rng(seed))
}

pub fn random_functional(alg: &WStarAlgebra, seed: u64) -> Functional {
    random_functional_with(alg, &mut rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitaries_are_unitary() {
        let a = WStarAlgebra::from_sizes(&[4, 3, 1]).unwrap();
        for seed in 0..25 {
            let u = random_unitary(&a, seed);
            let dev = u.adjoint().mul(&u).unwrap().sub(a.unit()).unwrap().op_norm();
            assert!(dev <= 1e-12, "seed {seed}: {dev}");
        }
    }

    #[test]
    fn same_seed_same_element() {
        let a = WStarAlgebra::from_sizes(&[2, 1]).unwrap();
        assert_eq!(random_element(&a, 17), random_element(&a, 17));
        assert_ne!(random_element(&a, 17), random_element(&a, 18));
        assert_eq!(random_unitary(&a, 5), random_unitary(&a, 5));
    }

    #[test]
    fn selfadjoint_is_selfadjoint() {
        let a = WStarAlgebra::from_sizes(&[3, 2]).unwrap();
        let x = random_selfadjoint(&a, 4);
        assert_eq!(x, x.adjoint());
    }

    #[test]
    fn derived_seeds_differ_by_index() {
        let s: Vec<u64> = (0..16).map(|i| derive_seed(42, i)).collect();
        let mut dedup = s.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), s.len());
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
