//! Seeded random received words and lattice points.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{CVector, GVector, GaussianInt, QComplex};
use crate::lattice::{generator_matrix, BWPoint};

const DENOMINATORS: [i64; 3] = [1, 2, 4];

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator in `[-8, 8]`, denominator in `{1, 2, 4}`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let num = rng.random_range(-8i64..=8);
    let den = DENOMINATORS[rng.random_range(0..DENOMINATORS.len())];
    BigRational::new(num.into(), den.into())
}

pub fn random_word<R: Rng + ?Sized>(n: u32, rng: &mut R) -> CVector {
    let coords = (0..1usize << n)
        .map(|_| QComplex::new(random_rational(rng), random_rational(rng)))
        .collect();
    CVector::new(coords).expect("power-of-two length")
}

/// `x W` for generator coefficients with parts in `[-bound, bound]`.
pub fn random_member<R: Rng + ?Sized>(n: u32, bound: i64, rng: &mut R) -> BWPoint {
    let coeffs = (0..1usize << n)
        .map(|_| {
            GaussianInt::new(
                BigInt::from(rng.random_range(-bound..=bound)),
                BigInt::from(rng.random_range(-bound..=bound)),
            )
        })
        .collect();
    let x = GVector::new(coeffs).expect("power-of-two length");
    let w = generator_matrix(n).combine(&x).expect("matching length");
    BWPoint::new(w).expect("generator combinations are members")
}
