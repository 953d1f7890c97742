//! Geometric algebra of three-dimensional Euclidean space.
//!
//! A [`Multivector`] stores eight coefficients over the canonical blade basis
//! `{1, e1, e2, e3, e12, e13, e23, e123}`. Products are computed on blade
//! bitmasks, with the sign given by the number of transpositions needed to
//! bring the concatenated index list into increasing order.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GaError;

/// A vector of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Unit vector along axis `i` (0-based).
    ///
    /// # Panics
    /// Panics if `i > 2`.
    pub fn unit(i: usize) -> Self {
        let mut a = [0.0; 3];
        a[i] = 1.0;
        a.into()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Canonical basis blades, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Blade {
    Scalar,
    E1,
    E2,
    E3,
    E12,
    E13,
    E23,
    E123,
}

impl Blade {
    pub const ALL: [Blade; 8] = [
        Blade::Scalar,
        Blade::E1,
        Blade::E2,
        Blade::E3,
        Blade::E12,
        Blade::E13,
        Blade::E23,
        Blade::E123,
    ];

    /// Position of the blade in the coefficient array.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Set of basis vectors in the blade, as a bitmask (bit 0 = e1).
    pub fn mask(self) -> u8 {
        MASK_OF_SLOT[self.index()]
    }

    pub fn from_mask(mask: u8) -> Blade {
        Blade::ALL[SLOT_OF_MASK[mask as usize]]
    }

    pub fn grade(self) -> usize {
        self.mask().count_ones() as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Blade::Scalar => "1",
            Blade::E1 => "e1",
            Blade::E2 => "e2",
            Blade::E3 => "e3",
            Blade::E12 => "e12",
            Blade::E13 => "e13",
            Blade::E23 => "e23",
            Blade::E123 => "e123",
        }
    }
}

const MASK_OF_SLOT: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
const SLOT_OF_MASK: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// Sign picked up when the blade `a` is multiplied by the blade `b` and the
/// result is sorted into increasing index order. The metric is Euclidean,
/// so repeated vectors contract to +1.
fn product_sign(a: u8, b: u8) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// An element of G(ℝ³).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    coefficients: [f64; 8],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector {
        coefficients: [0.0; 8],
    };

    pub fn from_coefficients(coefficients: [f64; 8]) -> Self {
        Multivector { coefficients }
    }

    pub fn coefficients(&self) -> [f64; 8] {
        self.coefficients
    }

    pub fn scalar(s: f64) -> Self {
        Multivector::ZERO.with(Blade::Scalar, s)
    }

    pub fn vector(v: Vec3) -> Self {
        Multivector::ZERO
            .with(Blade::E1, v.x)
            .with(Blade::E2, v.y)
            .with(Blade::E3, v.z)
    }

    /// Bivector `b12 e12 + b13 e13 + b23 e23`.
    pub fn bivector(b12: f64, b13: f64, b23: f64) -> Self {
        Multivector::ZERO
            .with(Blade::E12, b12)
            .with(Blade::E13, b13)
            .with(Blade::E23, b23)
    }

    pub fn pseudoscalar(s: f64) -> Self {
        Multivector::ZERO.with(Blade::E123, s)
    }

    pub fn basis(blade: Blade) -> Self {
        Multivector::ZERO.with(blade, 1.0)
    }

    /// Basis vector `e_{i+1}` (0-based axis).
    pub fn e(i: usize) -> Self {
        Multivector::vector(Vec3::unit(i))
    }

    pub fn with(mut self, blade: Blade, value: f64) -> Self {
        self.coefficients[blade.index()] = value;
        self
    }

    pub fn get(&self, blade: Blade) -> f64 {
        self.coefficients[blade.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// The grade-1 coefficients as a vector (other grades are ignored).
    pub fn vector_part(&self) -> Vec3 {
        Vec3::new(self.get(Blade::E1), self.get(Blade::E2), self.get(Blade::E3))
    }

    /// Grade-`k` selection.
    pub fn grade(&self, k: usize) -> Result<Multivector, GaError> {
        if k > 3 {
            return Err(GaError::GradeOutOfRange(k));
        }
        Ok(self.grade_part(k))
    }

    fn grade_part(&self, k: usize) -> Multivector {
        let mut out = Multivector::ZERO;
        for blade in Blade::ALL.into_iter().filter(|b| b.grade() == k) {
            out.coefficients[blade.index()] = self.coefficients[blade.index()];
        }
        out
    }

    /// True when every nonzero coefficient sits on a grade-`k` blade.
    pub fn is_homogeneous(&self, k: usize) -> bool {
        Blade::ALL
            .iter()
            .all(|b| b.grade() == k || self.coefficients[b.index()] == 0.0)
    }

    pub fn geometric_product(&self, other: &Multivector) -> Multivector {
        let mut out = [0.0; 8];
        for a in Blade::ALL {
            let ca = self.coefficients[a.index()];
            if ca == 0.0 {
                continue;
            }
            for b in Blade::ALL {
                let cb = other.coefficients[b.index()];
                if cb == 0.0 {
                    continue;
                }
                let sign = product_sign(a.mask(), b.mask());
                let slot = Blade::from_mask(a.mask() ^ b.mask()).index();
                out[slot] += sign * ca * cb;
            }
        }
        Multivector::from_coefficients(out)
    }

    /// Generalised inner product: for a j-blade and k-blade, the grade
    /// `|k - j|` part of their geometric product, extended bilinearly.
    pub fn dot(&self, other: &Multivector) -> Multivector {
        self.graded_product(other, |j, k| Some(j.abs_diff(k)))
    }

    /// Outer product: the grade `j + k` part of the geometric product of a
    /// j-blade and a k-blade, extended bilinearly.
    pub fn wedge(&self, other: &Multivector) -> Multivector {
        self.graded_product(other, |j, k| Some(j + k).filter(|&g| g <= 3))
    }

    fn graded_product(
        &self,
        other: &Multivector,
        target: impl Fn(usize, usize) -> Option<usize>,
    ) -> Multivector {
        let mut out = Multivector::ZERO;
        for j in 0..=3 {
            let lhs = self.grade_part(j);
            if lhs.is_zero() {
                continue;
            }
            for k in 0..=3 {
                let rhs = other.grade_part(k);
                if rhs.is_zero() {
                    continue;
                }
                if let Some(g) = target(j, k) {
                    out = out + lhs.geometric_product(&rhs).grade_part(g);
                }
            }
        }
        out
    }

    /// Right-handed dual of a pure bivector: the `w` with
    /// `b = w1 e23 + w2 e31 + w3 e12`.
    pub fn vector_dual(&self) -> Result<Vec3, GaError> {
        if !self.is_homogeneous(2) {
            return Err(GaError::NotBivector);
        }
        Ok(Vec3::new(
            self.get(Blade::E23),
            -self.get(Blade::E13),
            self.get(Blade::E12),
        ))
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, o: Multivector) -> Multivector {
        for (a, b) in self.coefficients.iter_mut().zip(o.coefficients) {
            *a += b;
        }
        self
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, o: Multivector) -> Multivector {
        self + (-o)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Multivector {
        for c in self.coefficients.iter_mut() {
            *c *= s;
        }
        self
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, o: Multivector) -> Multivector {
        self.geometric_product(&o)
    }
}

impl From<Vec3> for Multivector {
    fn from(v: Vec3) -> Self {
        Multivector::vector(v)
    }
}

/// Renders as `a0 + a1 e1 + ... + a123 e123`, skipping zero terms.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for blade in Blade::ALL {
            let c = self.get(blade);
            if c == 0.0 {
                continue;
            }
            let magnitude = c.abs();
            match (first, c < 0.0) {
                (true, false) => write!(f, "{magnitude}")?,
                (true, true) => write!(f, "-{magnitude}")?,
                (false, false) => write!(f, " + {magnitude}")?,
                (false, true) => write!(f, " - {magnitude}")?,
            }
            if blade != Blade::Scalar {
                write!(f, " {}", blade.name())?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Multivector {
        Multivector::e(i)
    }

    #[test]
    fn unit_vectors_square_to_one() {
        for i in 0..3 {
            assert_eq!(e(i) * e(i), Multivector::scalar(1.0));
        }
    }

    #[test]
    fn perpendicular_vectors_anticommute() {
        assert_eq!(e(0) * e(1), -(e(1) * e(0)));
        assert_eq!(e(0) * e(1), Multivector::basis(Blade::E12));
        assert_eq!(e(2) * e(0), -Multivector::basis(Blade::E13));
    }

    #[test]
    fn pseudoscalar_squares_to_minus_one() {
        let i = Multivector::basis(Blade::E123);
        assert_eq!(i * i, Multivector::scalar(-1.0));
    }

    #[test]
    fn worked_product_sign() {
        // e1 (e2 + e3) e1 e2: the e1 e3 e1 e2 term reduces to +e23.
        let lhs = e(0) * (e(1) + e(2)) * e(0) * e(1);
        assert_eq!(lhs, Multivector::scalar(-1.0) + Multivector::basis(Blade::E23));
    }

    #[test]
    fn grade_selection_of_mixed_multivector() {
        let m = Multivector::scalar(1.0)
            + e(2)
            + (e(0) + e(2)) * e(1)
            + e(0) * e(1) * e(2);
        assert_eq!(m.grade(0).unwrap(), Multivector::scalar(1.0));
        assert_eq!(m.grade(1).unwrap(), e(2));
        assert_eq!(m.grade(2).unwrap(), Multivector::bivector(1.0, 0.0, -1.0));
        assert_eq!(m.grade(3).unwrap(), Multivector::pseudoscalar(1.0));
        assert!(matches!(m.grade(4), Err(GaError::GradeOutOfRange(4))));
    }

    #[test]
    fn grade_of_zero_is_zero() {
        for k in 0..=3 {
            assert!(Multivector::ZERO.grade(k).unwrap().is_zero());
        }
    }

    #[test]
    fn dot_and_wedge_of_parallel_vectors() {
        assert_eq!(e(0).dot(&e(0)), Multivector::scalar(1.0));
        assert!(e(0).wedge(&e(0)).is_zero());
    }

    #[test]
    fn bivector_dot_vector() {
        let b = e(0).wedge(&e(1));
        assert_eq!(b.dot(&e(1)), e(0));
        assert_eq!(e(1).dot(&b), -e(0));
    }

    #[test]
    fn scalar_dot_is_scaling() {
        let m = Multivector::from_coefficients([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(Multivector::scalar(2.0).dot(&m), m * 2.0);
    }

    #[test]
    fn dual_of_basis_bivectors() {
        assert_eq!(
            Multivector::basis(Blade::E12).vector_dual().unwrap(),
            Vec3::new(0.0, 0.0, 1.0)
        );
        assert_eq!(
            Multivector::basis(Blade::E23).vector_dual().unwrap(),
            Vec3::new(1.0, 0.0, 0.0)
        );
        // e31 = -e13
        assert_eq!(
            Multivector::basis(Blade::E13).vector_dual().unwrap(),
            Vec3::new(0.0, -1.0, 0.0)
        );
        assert!(matches!(e(0).vector_dual(), Err(GaError::NotBivector)));
    }

    #[test]
    fn rendering() {
        let m = Multivector::scalar(-1.0) + Multivector::basis(Blade::E23);
        assert_eq!(m.to_string(), "-1 + 1 e23");
        assert_eq!(Multivector::ZERO.to_string(), "0");
        let m = Multivector::from_coefficients([0.5, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
        assert_eq!(m.to_string(), "0.5 - 2 e2 + 3 e123");
    }

    #[test]
    fn vec3_serializes_as_array() {
        let v = Vec3::new(1.0, -2.5, 0.0);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.0,-2.5,0.0]");
        assert_eq!(serde_json::from_str::<Vec3>(&s).unwrap(), v);
    }
}
