//! Multivariate polynomials in `x, y, z` with symbolic differentiation.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ga::Vec3;

/// Exponents of `x`, `y`, `z`.
pub type Powers = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: Powers,
}

impl Monomial {
    pub fn new(coeff: f64, powers: Powers) -> Self {
        Monomial { coeff, powers }
    }

    pub fn eval(&self, x: Vec3) -> f64 {
        let mut value = self.coeff;
        for (axis, &p) in self.powers.iter().enumerate() {
            if p > 0 {
                value *= x[axis].powi(p as i32);
            }
        }
        value
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().sum()
    }

    /// `∂/∂x_axis`, or `None` when the monomial does not depend on that axis.
    pub fn derivative(&self, axis: usize) -> Option<Monomial> {
        let p = self.powers[axis];
        if p == 0 {
            return None;
        }
        let mut powers = self.powers;
        powers[axis] -= 1;
        Some(Monomial::new(self.coeff * f64::from(p), powers))
    }
}

/// A polynomial in canonical form: terms sorted by exponent triple, no two
/// sharing an exponent triple, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new([Monomial::new(c, [0, 0, 0])])
    }

    /// The coordinate function `x_axis`.
    pub fn coordinate(axis: usize) -> Self {
        let mut powers = [0; 3];
        powers[axis] = 1;
        Polynomial::new([Monomial::new(1.0, powers)])
    }

    /// Merges like terms and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut merged: BTreeMap<Powers, f64> = BTreeMap::new();
        for m in terms {
            *merged.entry(m.powers).or_insert(0.0) += m.coeff;
        }
        Polynomial {
            terms: merged
                .into_iter()
                .filter(|&(_, c)| c != 0.0)
                .map(|(powers, coeff)| Monomial { coeff, powers })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: Vec3) -> f64 {
        self.terms.iter().map(|m| m.eval(x)).sum()
    }

    pub fn derivative(&self, axis: usize) -> Polynomial {
        Polynomial::new(self.terms.iter().filter_map(|m| m.derivative(axis)))
    }

    /// The three partial derivatives `(∂_x p, ∂_y p, ∂_z p)`.
    pub fn gradient(&self) -> [Polynomial; 3] {
        std::array::from_fn(|axis| self.derivative(axis))
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.terms.iter().map(|m| Monomial::new(m.coeff * s, m.powers)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        Polynomial::new(self.terms.iter().chain(&o.terms).copied())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        Polynomial::new(self.terms.iter().flat_map(|a| {
            o.terms.iter().map(move |b| {
                Monomial::new(
                    a.coeff * b.coeff,
                    [
                        a.powers[0] + b.powers[0],
                        a.powers[1] + b.powers[1],
                        a.powers[2] + b.powers[2],
                    ],
                )
            })
        }))
    }
}
