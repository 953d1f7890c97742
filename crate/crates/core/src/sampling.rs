//! Seeded random inputs for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadics::Tensor3;
use crate::fields::{Monomial, PolyField, Polynomial};
use crate::ga::{Multivector, Vec3};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar(rng: &mut impl Rng) -> f64 {
    rng.random_range(-1.0..1.0)
}

pub fn vector(rng: &mut impl Rng) -> Vec3 {
    Vec3::new(scalar(rng), scalar(rng), scalar(rng))
}

/// A unit vector, uniformly distributed on the sphere.
pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = vector(rng);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

pub fn multivector(rng: &mut impl Rng) -> Multivector {
    Multivector::from_coefficients(std::array::from_fn(|_| scalar(rng)))
}

pub fn tensor(rng: &mut impl Rng) -> Tensor3 {
    Tensor3::from_fn(|_, _| scalar(rng))
}

/// A k-blade built as the outer product of `k` random vectors.
pub fn blade(rng: &mut impl Rng, k: usize) -> Multivector {
    (0..k).fold(Multivector::scalar(1.0), |acc, _| {
        acc.wedge(&Multivector::vector(vector(rng)))
    })
}

/// All exponent triples of total degree at most `degree`.
pub fn exponents_up_to(degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// A polynomial with every monomial up to `degree` given a random coefficient.
pub fn polynomial(rng: &mut impl Rng, degree: u32) -> Polynomial {
    Polynomial::new(
        exponents_up_to(degree)
            .into_iter()
            .map(|p| Monomial::new(scalar(rng), p)),
    )
}

/// A dense random cubic vector field.
pub fn cubic_field(rng: &mut impl Rng) -> PolyField {
    PolyField::new(std::array::from_fn(|_| polynomial(rng, 3)))
}

/// A divergence-free quadratic field, built as the curl of a random cubic
/// vector potential.
pub fn solenoidal_field(rng: &mut impl Rng) -> PolyField {
    let a: [Polynomial; 3] = std::array::from_fn(|_| polynomial(rng, 3));
    let d = |k: usize, axis: usize| a[k].derivative(axis);
    PolyField::new([
        &d(2, 1) - &d(1, 2),
        &d(0, 2) - &d(2, 0),
        &d(1, 0) - &d(0, 1),
    ])
}
