//! Seeded pseudorandom jets with small exact coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{GradedPoly, HomPoly};
use crate::rational::{rat, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` with `|p| <= 4` and `1 <= q <= 3`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-4..=4), rng.random_range(1..=3))
}

pub fn random_hom_poly<R: Rng>(rng: &mut R, degree: usize) -> HomPoly {
    HomPoly::from_coeffs((0..=degree).map(|_| small_rational(rng)).collect())
}

/// Random components in every degree of `lo..=hi`.
pub fn random_graded<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> GradedPoly {
    GradedPoly::from_components((lo..=hi).map(|n| random_hom_poly(rng, n)))
}
