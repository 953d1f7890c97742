//! Velocity-gradient kinematics: the rate-of-strain / rate-of-rotation
//! decomposition of `∇⊗v`, the bivector form of the rotation, the
//! compressibility split and the bidirectional-gradient identities.
//!
//! Matrix quantities use the Gibbs convention throughout. `Ω` is stored for
//! use as a postfactor (`dr · Ω`); its prefactor form is `Ω†`.
//!
//! The GA quantities here are assembled from products of multivectors
//! rather than read off the matrices, so the two routes check each other.

use serde::{Deserialize, Serialize};

use crate::dyadics::Tensor3;
use crate::error::FieldError;
use crate::fields::{PolyField, VectorField};
use crate::ga::{Blade, Multivector, Vec3};

/// Stokes–Gibbs split of `∇⊗v` into symmetric and antisymmetric parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// Rate of strain `½[∇⊗v + (∇⊗v)†]`.
    pub d: Tensor3,
    /// Rate of rotation `½[∇⊗v − (∇⊗v)†]`, postfactor convention.
    pub omega: Tensor3,
}

pub fn decompose<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<Decomposition, FieldError> {
    let g = f.grad_gibbs(x)?;
    Ok(Decomposition {
        d: g.sym(),
        omega: g.antisym(),
    })
}

/// `dv = dr · (∇⊗v)`.
pub fn dv_postfactor<F: VectorField + ?Sized>(f: &F, x: Vec3, dr: Vec3) -> Result<Vec3, FieldError> {
    Ok(Tensor3::postfactor(dr, &f.grad_gibbs(x)?))
}

/// `dv = (∇⊗v)† · dr`.
pub fn dv_prefactor<F: VectorField + ?Sized>(f: &F, x: Vec3, dr: Vec3) -> Result<Vec3, FieldError> {
    Ok(Tensor3::prefactor(&f.grad_gibbs(x)?.transpose(), dr))
}

/// The partial derivatives `∂_i v` as multivectors.
fn partials<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<[Multivector; 3], FieldError> {
    let g = f.grad_gibbs(x)?;
    Ok(std::array::from_fn(|i| Multivector::vector(g.row(i))))
}

/// `∇∧v = Σ_i e_i ∧ ∂_i v`.
pub fn wedge_gradient<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<Multivector, FieldError> {
    let dv = partials(f, x)?;
    Ok((0..3).fold(Multivector::ZERO, |acc, i| acc + Multivector::e(i).wedge(&dv[i])))
}

/// `Ω = ½ ∇∧v`, a pure bivector.
pub fn omega_bivector<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<Multivector, FieldError> {
    Ok(wedge_gradient(f, x)? * 0.5)
}

/// Vorticity vector `∇×v`, the dual of `∇∧v`.
pub fn vorticity<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<Vec3, FieldError> {
    Ok(wedge_gradient(f, x)?
        .vector_dual()
        .expect("wedge of two vectors is a bivector"))
}

/// `dv = dx(∇·v) + ∇·(dx∧v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainSplit {
    /// `dx (∇·v)`, vanishes for incompressible flow.
    pub compressive: Vec3,
    /// `∇·(dx∧v)`.
    pub incompressive: Vec3,
}

impl StrainSplit {
    pub fn total(&self) -> Vec3 {
        self.compressive + self.incompressive
    }
}

pub fn strain_split<F: VectorField + ?Sized>(
    f: &F,
    x: Vec3,
    dx: Vec3,
) -> Result<StrainSplit, FieldError> {
    let dv = partials(f, x)?;
    let dx_mv = Multivector::vector(dx);
    let divergence: f64 = (0..3)
        .map(|i| Multivector::e(i).dot(&dv[i]).get(Blade::Scalar))
        .sum();
    let incompressive = (0..3).fold(Multivector::ZERO, |acc, i| {
        acc + Multivector::e(i).dot(&dx_mv.wedge(&dv[i]))
    });
    Ok(StrainSplit {
        compressive: dx * divergence,
        incompressive: incompressive.vector_part(),
    })
}

/// `⟨∇ dx v⟩₁ = Σ_i ⟨e_i dx ∂_i v⟩₁`, with `dx` held constant.
pub fn bidi_forward<F: VectorField + ?Sized>(f: &F, x: Vec3, dx: Vec3) -> Result<Vec3, FieldError> {
    let dv = partials(f, x)?;
    let dx_mv = Multivector::vector(dx);
    let sum = (0..3).fold(Multivector::ZERO, |acc, i| acc + Multivector::e(i) * dx_mv * dv[i]);
    Ok(sum.vector_part())
}

/// `⟨dx v ∇⟩₁ = Σ_i ⟨dx ∂_i v e_i⟩₁`.
pub fn bidi_reverse<F: VectorField + ?Sized>(f: &F, x: Vec3, dx: Vec3) -> Result<Vec3, FieldError> {
    let dv = partials(f, x)?;
    let dx_mv = Multivector::vector(dx);
    let sum = (0..3).fold(Multivector::ZERO, |acc, i| acc + dx_mv * dv[i] * Multivector::e(i));
    Ok(sum.vector_part())
}

/// Strain and rotation contributions in plain vector-calculus form,
/// `½[(dx·∇)v ± ∇(dx·v)]`, built from exact polynomial derivatives.
pub fn vector_calculus_split(field: &PolyField, x: Vec3, dx: Vec3) -> (Vec3, Vec3) {
    let advective = field.directional_derivative(dx).value(x);
    let grad_dot: [f64; 3] = field.dot_constant(dx).gradient().map(|p| p.eval(x));
    let grad_dot = Vec3::from(grad_dot);
    ((advective + grad_dot) * 0.5, (advective - grad_dot) * 0.5)
}

/// Every derived quantity at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicsReport {
    pub point: Vec3,
    pub grad_gibbs: Tensor3,
    pub grad_alt: Tensor3,
    pub d: Tensor3,
    pub omega: Tensor3,
    #[serde(with = "bivector_json")]
    pub omega_bivector: Multivector,
    pub vorticity: Vec3,
    pub divergence: f64,
}

pub fn report<F: VectorField + ?Sized>(f: &F, x: Vec3) -> Result<KinematicsReport, FieldError> {
    let g = f.grad_gibbs(x)?;
    let omega_bv = omega_bivector(f, x)?;
    Ok(KinematicsReport {
        point: x,
        grad_gibbs: g,
        grad_alt: g.transpose(),
        d: g.sym(),
        omega: g.antisym(),
        omega_bivector: omega_bv,
        vorticity: vorticity(f, x)?,
        divergence: g.trace(),
    }
    .without_negative_zeros())
}

impl KinematicsReport {
    /// Replaces `-0.0` by `0.0` so serialized output does not depend on
    /// the sign of vanishing products.
    fn without_negative_zeros(self) -> Self {
        let t = |m: Tensor3| Tensor3::from_fn(|i, j| m.get(i, j) + 0.0);
        let v = |u: Vec3| Vec3::new(u.x + 0.0, u.y + 0.0, u.z + 0.0);
        KinematicsReport {
            point: v(self.point),
            grad_gibbs: t(self.grad_gibbs),
            grad_alt: t(self.grad_alt),
            d: t(self.d),
            omega: t(self.omega),
            omega_bivector: Multivector::from_coefficients(
                self.omega_bivector.coefficients().map(|c| c + 0.0),
            ),
            vorticity: v(self.vorticity),
            divergence: self.divergence + 0.0,
        }
    }
}

mod bivector_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::ga::{Blade, Multivector};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Bivector {
        e12: f64,
        e13: f64,
        e23: f64,
    }

    pub fn serialize<S: Serializer>(m: &Multivector, s: S) -> Result<S::Ok, S::Error> {
        Bivector {
            e12: m.get(Blade::E12),
            e13: m.get(Blade::E13),
            e23: m.get(Blade::E23),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Multivector, D::Error> {
        let b = Bivector::deserialize(d)?;
        Ok(Multivector::bivector(b.e12, b.e13, b.e23))
    }
}
