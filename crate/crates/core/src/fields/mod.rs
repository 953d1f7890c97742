//! Vector fields `v: ℝ³ → ℝ³` and their gradients.
//!
//! Polynomial fields differentiate symbolically. Black-box fields use
//! central differences with a configurable step. Both expose `∇⊗v` in the
//! Gibbs convention (row `i` holds `∂v/∂x_i`) and in the alternative,
//! transposed convention.

mod poly;
pub mod spec;

pub use poly::{Monomial, Polynomial, Powers};

use std::fmt;
use std::sync::Arc;

use crate::dyadics::Tensor3;
use crate::error::FieldError;
use crate::ga::Vec3;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A differentiable vector field.
///
/// Implementations must be deterministic and free of side effects for the
/// duration of a derivative computation; they may be evaluated from several
/// threads at once.
pub trait VectorField {
    fn eval(&self, x: Vec3) -> Result<Vec3, FieldError>;

    /// `∇⊗v` at `x`: entry `(i, j)` is `∂v_j/∂x_i`.
    fn grad_gibbs(&self, x: Vec3) -> Result<Tensor3, FieldError>;

    /// `(∇⊗v)†` at `x`: entry `(i, j)` is `∂v_i/∂x_j`.
    fn grad_alt(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        Ok(self.grad_gibbs(x)?.transpose())
    }

    fn divergence(&self, x: Vec3) -> Result<f64, FieldError> {
        Ok(self.grad_gibbs(x)?.trace())
    }
}

/// A vector field whose components are polynomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyField {
    components: [Polynomial; 3],
}

impl PolyField {
    pub fn new(components: [Polynomial; 3]) -> Self {
        PolyField { components }
    }

    pub fn constant(c: Vec3) -> Self {
        PolyField::new(std::array::from_fn(|k| Polynomial::constant(c[k])))
    }

    /// The position field `v = r`.
    pub fn position() -> Self {
        PolyField::new(std::array::from_fn(Polynomial::coordinate))
    }

    /// `v(x) = A · x` (A applied as a prefactor).
    pub fn linear(a: &Tensor3) -> Self {
        PolyField::new(std::array::from_fn(|row| {
            Polynomial::new((0..3).map(|col| {
                let mut powers = [0; 3];
                powers[col] = 1;
                Monomial::new(a.get(row, col), powers)
            }))
        }))
    }

    /// Rigid rotation `v = ω × r`.
    pub fn rigid_rotation(omega: Vec3) -> Self {
        let skew = Tensor3::from_rows([
            [0.0, -omega.z, omega.y],
            [omega.z, 0.0, -omega.x],
            [-omega.y, omega.x, 0.0],
        ]);
        PolyField::linear(&skew)
    }

    pub fn components(&self) -> &[Polynomial; 3] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Polynomial {
        &self.components[k]
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn value(&self, x: Vec3) -> Vec3 {
        Vec3::new(
            self.components[0].eval(x),
            self.components[1].eval(x),
            self.components[2].eval(x),
        )
    }

    /// `∂v/∂x_axis` as a new polynomial field.
    pub fn partial(&self, axis: usize) -> PolyField {
        PolyField::new(std::array::from_fn(|k| self.components[k].derivative(axis)))
    }

    /// Exact `∇⊗v` at `x`.
    pub fn gradient(&self, x: Vec3) -> Tensor3 {
        Tensor3::from_row_vectors(std::array::from_fn(|i| self.partial(i).value(x)))
    }

    /// The scalar field `c · v` for a constant vector `c`.
    pub fn dot_constant(&self, c: Vec3) -> Polynomial {
        (0..3).fold(Polynomial::zero(), |acc, k| &acc + &self.components[k].scale(c[k]))
    }

    /// The field `(c · ∇) v` for a constant vector `c`.
    pub fn directional_derivative(&self, c: Vec3) -> PolyField {
        PolyField::new(std::array::from_fn(|k| {
            (0..3).fold(Polynomial::zero(), |acc, i| {
                &acc + &self.components[k].derivative(i).scale(c[i])
            })
        }))
    }
}

impl VectorField for PolyField {
    fn eval(&self, x: Vec3) -> Result<Vec3, FieldError> {
        Ok(self.value(x))
    }

    fn grad_gibbs(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        Ok(self.gradient(x))
    }
}

type Evaluator = dyn Fn(Vec3) -> Result<Vec3, String> + Send + Sync;

/// A field known only through point evaluations; gradients by central
/// differences.
#[derive(Clone)]
pub struct BlackBoxField {
    evaluator: Arc<Evaluator>,
    step: f64,
}

impl BlackBoxField {
    pub fn new(
        step: f64,
        f: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static,
    ) -> Result<Self, FieldError> {
        BlackBoxField::try_new(step, move |x| Ok(f(x)))
    }

    /// Like [`BlackBoxField::new`], for evaluators that can fail.
    pub fn try_new(
        step: f64,
        f: impl Fn(Vec3) -> Result<Vec3, String> + Send + Sync + 'static,
    ) -> Result<Self, FieldError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(FieldError::InvalidStep(step));
        }
        Ok(BlackBoxField {
            evaluator: Arc::new(f),
            step,
        })
    }

    /// Wraps any other field, discarding its analytic derivatives.
    pub fn wrap<F>(field: F, step: f64) -> Result<Self, FieldError>
    where
        F: VectorField + Send + Sync + 'static,
    {
        BlackBoxField::try_new(step, move |x| field.eval(x).map_err(|e| e.to_string()))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Central-difference `∇⊗v`: entry `(i, j)` is
    /// `[v_j(x + h e_i) − v_j(x − h e_i)] / 2h`.
    pub fn fd_grad(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        let h = self.step;
        let mut rows = [Vec3::ZERO; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            let offset = Vec3::unit(i) * h;
            let forward = self.eval(x + offset)?;
            let backward = self.eval(x - offset)?;
            *row = (forward - backward) * (1.0 / (2.0 * h));
        }
        Ok(Tensor3::from_row_vectors(rows))
    }
}

impl VectorField for BlackBoxField {
    fn eval(&self, x: Vec3) -> Result<Vec3, FieldError> {
        (self.evaluator)(x).map_err(|message| FieldError::Evaluation {
            point: x.to_array(),
            message,
        })
    }

    fn grad_gibbs(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        self.fd_grad(x)
    }
}

impl fmt::Debug for BlackBoxField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxField")
            .field("step", &self.step)
            .finish_non_exhaustive()
    }
}

impl<F: VectorField + ?Sized> VectorField for &F {
    fn eval(&self, x: Vec3) -> Result<Vec3, FieldError> {
        (**self).eval(x)
    }

    fn grad_gibbs(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        (**self).grad_gibbs(x)
    }
}

impl<F: VectorField + ?Sized> VectorField for Box<F> {
    fn eval(&self, x: Vec3) -> Result<Vec3, FieldError> {
        (**self).eval(x)
    }

    fn grad_gibbs(&self, x: Vec3) -> Result<Tensor3, FieldError> {
        (**self).grad_gibbs(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PolyField {
        // v = (x^2, x y, z)
        PolyField::new([
            Polynomial::new([Monomial::new(1.0, [2, 0, 0])]),
            Polynomial::new([Monomial::new(1.0, [1, 1, 0])]),
            Polynomial::coordinate(2),
        ])
    }

    #[test]
    fn eval_examples() {
        let c = Vec3::new(1.0, -2.0, 3.5);
        assert_eq!(PolyField::constant(c).value(Vec3::new(9.0, 8.0, 7.0)), c);
        assert_eq!(sample().value(Vec3::new(1.0, 2.0, 3.0)), Vec3::new(1.0, 2.0, 3.0));
        let rot = PolyField::rigid_rotation(Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(rot.value(Vec3::new(1.0, 0.0, 0.0)), Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn constant_field_has_zero_gradient() {
        let f = PolyField::constant(Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(f.gradient(Vec3::new(0.3, 0.1, -4.0)), Tensor3::ZERO);
        assert_eq!(f.grad_alt(Vec3::ZERO).unwrap(), Tensor3::ZERO);
    }

    #[test]
    fn linear_field_gradients() {
        let a = Tensor3::from_rows([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
        let f = PolyField::linear(&a);
        let x = Vec3::new(0.5, -1.0, 2.0);
        assert_eq!(f.grad_gibbs(x).unwrap(), a.transpose());
        assert_eq!(f.grad_alt(x).unwrap(), a);
    }

    #[test]
    fn divergence_examples() {
        let x = Vec3::new(1.0, 1.0, 1.0);
        assert_eq!(PolyField::position().divergence(x).unwrap(), 3.0);
        let rot = PolyField::rigid_rotation(Vec3::new(0.3, -1.2, 2.0));
        assert_eq!(rot.divergence(x).unwrap(), 0.0);
        assert_eq!(sample().divergence(x).unwrap(), 4.0);
    }

    #[test]
    fn fd_grad_exact_on_linear_fields() {
        let a = Tensor3::from_rows([[1.0, -2.0, 0.5], [0.0, 3.0, 1.0], [2.0, 0.0, -1.0]]);
        let f = BlackBoxField::wrap(PolyField::linear(&a), 0.25).unwrap();
        let g = f.grad_gibbs(Vec3::new(0.0, 1.0, -1.0)).unwrap();
        assert!((g - a.transpose()).max_abs() < 1e-14);
    }

    #[test]
    fn fd_grad_quadratic_entry() {
        let f = BlackBoxField::new(1e-4, |x| Vec3::new(x.x * x.x, 0.0, 0.0)).unwrap();
        let g = f.fd_grad(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((g.get(0, 0) - 2.0).abs() < 1e-8);
    }

    #[test]
    fn black_box_rejects_bad_step() {
        assert!(matches!(
            BlackBoxField::new(0.0, |x| x),
            Err(FieldError::InvalidStep(_))
        ));
        assert!(BlackBoxField::new(f64::NAN, |x| x).is_err());
    }

    #[test]
    fn black_box_propagates_evaluator_failure() {
        let f = BlackBoxField::try_new(1e-3, |x| {
            if x.x > 0.0 {
                Err("outside domain".to_string())
            } else {
                Ok(x)
            }
        })
        .unwrap();
        assert!(f.eval(Vec3::new(-1.0, 0.0, 0.0)).is_ok());
        match f.grad_gibbs(Vec3::ZERO) {
            Err(FieldError::Evaluation { message, .. }) => assert_eq!(message, "outside domain"),
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn dot_constant_and_directional_derivative() {
        let f = sample();
        let c = Vec3::new(1.0, 2.0, -1.0);
        let x = Vec3::new(0.5, 1.5, 2.0);
        assert!((f.dot_constant(c).eval(x) - c.dot(f.value(x))).abs() < 1e-15);
        let expected = Tensor3::postfactor(c, &f.gradient(x));
        assert!((f.directional_derivative(c).value(x) - expected).max_abs() < 1e-15);
    }
}
