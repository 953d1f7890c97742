//! Evaluation of notation expressions against a concrete field and point.
//!
//! Scalar and vector subexpressions carry their spatial gradient alongside
//! their value (the field `v` contributes `∇⊗v`, bound vectors are
//! constants), so `∇` can act on composite operands such as `∇(dr · v)`.
//! Results of `∇` itself and of tensor or multivector operations carry no
//! gradient: second derivatives are not supported.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};
use thiserror::Error;

use super::parser::{BinaryOp, Expr};
#[cfg(doc)]
use super::parser::Span;
use crate::dyadics::Tensor3;
use crate::error::FieldError;
use crate::fields::VectorField;
use crate::format;
use crate::ga::{Blade, Multivector, Vec3};
use crate::kinematics;

/// The name the field is bound to.
pub const FIELD_NAME: &str = "v";
/// Names of the derived tensors available in every context.
pub const STRAIN_NAME: &str = "d";
pub const ROTATION_NAMES: [&str; 3] = ["Ω", "Omega", "omega"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Scalar,
    Vector,
    Tensor,
    Multivector,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Scalar => "scalar",
            Kind::Vector => "vector",
            Kind::Tensor => "tensor",
            Kind::Multivector => "multivector",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Scalar(f64),
    Vector(Vec3),
    Tensor(Tensor3),
    Multivector(Multivector),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Scalar(_) => Kind::Scalar,
            Value::Vector(_) => Kind::Vector,
            Value::Tensor(_) => Kind::Tensor,
            Value::Multivector(_) => Kind::Multivector,
        }
    }

    /// JSON form: `{"kind": ..., "value": ...}` at full precision, with
    /// `-0.0` written as `0.0`.
    pub fn to_json(&self) -> Json {
        let z = |x: f64| x + 0.0;
        let value = match self {
            Value::Scalar(s) => json!(z(*s)),
            Value::Vector(v) => json!(v.to_array().map(z)),
            Value::Tensor(t) => json!(t.rows().map(|r| r.map(z))),
            Value::Multivector(m) => {
                let mut obj = serde_json::Map::new();
                for blade in Blade::ALL {
                    let key = if blade == Blade::Scalar { "scalar" } else { blade.name() };
                    obj.insert(key.to_string(), json!(z(m.get(blade))));
                }
                Json::Object(obj)
            }
        };
        json!({ "kind": self.kind().to_string(), "value": value })
    }
}

/// Text form with six significant digits for scalars, vectors and tensors.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => f.write_str(&format::sig(*s, 6)),
            Value::Vector(v) => write!(
                f,
                "({}, {}, {})",
                format::sig(v.x, 6),
                format::sig(v.y, 6),
                format::sig(v.z, 6)
            ),
            Value::Tensor(t) => f.write_str(&t.render(6)),
            Value::Multivector(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound name {0:?}")]
    Unbound(String),
    #[error("name {0:?} is reserved and cannot be rebound")]
    Reserved(String),
    #[error("cannot apply {op} to {lhs} and {rhs}")]
    KindMismatch {
        op: &'static str,
        lhs: Kind,
        rhs: Kind,
    },
    #[error("cannot {op} a {kind}")]
    UnaryKindMismatch { op: &'static str, kind: Kind },
    #[error("∇ must be the left operand of ⊗, ·, ∧, × or be applied as ∇(scalar)")]
    MisplacedNabla,
    #[error("cannot differentiate this {0} operand (only the field and its products with constants are differentiable)")]
    NotDifferentiable(Kind),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An evaluation error with the child-index path of the subexpression that
/// raised it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{error}")]
pub struct TracedError {
    pub error: EvalError,
    pub path: Vec<usize>,
}

impl From<EvalError> for TracedError {
    fn from(error: EvalError) -> Self {
        TracedError {
            error,
            path: Vec::new(),
        }
    }
}

impl From<FieldError> for TracedError {
    fn from(error: FieldError) -> Self {
        EvalError::from(error).into()
    }
}

/// Field, point, and named constant vectors for evaluation.
pub struct EvalContext<'a> {
    field: &'a dyn VectorField,
    point: Vec3,
    bindings: BTreeMap<String, Vec3>,
}

impl<'a> EvalContext<'a> {
    pub fn new(field: &'a dyn VectorField, point: Vec3) -> Self {
        EvalContext {
            field,
            point,
            bindings: BTreeMap::new(),
        }
    }

    /// Binds a constant vector. `v`, `d` and the rotation names are reserved.
    pub fn bind(mut self, name: &str, value: Vec3) -> Result<Self, EvalError> {
        if is_reserved(name) {
            return Err(EvalError::Reserved(name.to_string()));
        }
        self.bindings.insert(name.to_string(), value);
        Ok(self)
    }

    pub fn point(&self) -> Vec3 {
        self.point
    }

    pub fn evaluate(&self, expr: &Expr) -> Result<Value, EvalError> {
        self.evaluate_traced(expr).map_err(|e| e.error)
    }

    /// Like [`evaluate`](Self::evaluate), but a failure also reports which
    /// subexpression raised it, as a path usable with [`Span::locate`].
    pub fn evaluate_traced(&self, expr: &Expr) -> Result<Value, TracedError> {
        self.eval(expr).map(|jet| jet.value).map_err(|mut e| {
            e.path.reverse();
            e
        })
    }

    fn eval(&self, expr: &Expr) -> Result<Jet, TracedError> {
        match expr {
            Expr::Nabla => Err(EvalError::MisplacedNabla.into()),
            Expr::Scalar(s) => Ok(Jet::scalar(*s, Some(Vec3::ZERO))),
            Expr::Var(name) => Ok(self.lookup(name)?),
            Expr::Transpose(inner) => match self.child(0, inner)?.value {
                Value::Tensor(t) => Ok(Jet::plain(Value::Tensor(t.transpose()))),
                other => Err(EvalError::UnaryKindMismatch {
                    op: "transpose",
                    kind: other.kind(),
                }
                .into()),
            },
            Expr::Negate(inner) => Ok(self.child(0, inner)?.scale(-1.0)),
            Expr::Grad(inner) => {
                let operand = self.child(0, inner)?;
                match (operand.value, operand.grad) {
                    (Value::Scalar(_), Some(Grad::Scalar(g))) => Ok(Jet::plain(Value::Vector(g))),
                    (Value::Scalar(_), _) => Err(EvalError::NotDifferentiable(Kind::Scalar).into()),
                    (other, _) => Err(EvalError::UnaryKindMismatch {
                        op: "take the gradient ∇(…) of",
                        kind: other.kind(),
                    }
                    .into()),
                }
            }
            Expr::Binary { op, lhs, rhs } if **lhs == Expr::Nabla => {
                let operand = self.child(1, rhs)?;
                Ok(nabla(*op, operand)?)
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = self.child(0, lhs)?;
                let b = self.child(1, rhs)?;
                Ok(binary(*op, a, b)?)
            }
        }
    }

    fn child(&self, index: usize, expr: &Expr) -> Result<Jet, TracedError> {
        self.eval(expr).map_err(|mut e| {
            e.path.push(index);
            e
        })
    }

    fn lookup(&self, name: &str) -> Result<Jet, EvalError> {
        if name == FIELD_NAME {
            let value = self.field.eval(self.point)?;
            let grad = self.field.grad_gibbs(self.point)?;
            return Ok(Jet::vector(value, Some(grad)));
        }
        if name == STRAIN_NAME || ROTATION_NAMES.contains(&name) {
            let dec = kinematics::decompose(self.field, self.point)?;
            let t = if name == STRAIN_NAME { dec.d } else { dec.omega };
            return Ok(Jet::plain(Value::Tensor(t)));
        }
        self.bindings
            .get(name)
            .map(|&v| Jet::vector(v, Some(Tensor3::ZERO)))
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    }
}

/// `∇` applied through `op` to an already evaluated operand.
fn nabla(op: BinaryOp, rhs: Jet) -> Result<Jet, EvalError> {
    let grad = match (rhs.value, rhs.grad) {
        (Value::Vector(_), Some(Grad::Vector(g))) => g,
        (Value::Vector(_), _) => return Err(EvalError::NotDifferentiable(Kind::Vector)),
        (other, _) => {
            return Err(EvalError::KindMismatch {
                op: op.symbol(),
                lhs: Kind::Vector,
                rhs: other.kind(),
            })
        }
    };
    let value = match op {
        BinaryOp::Dyad => Value::Tensor(grad),
        BinaryOp::Dot => Value::Scalar(grad.trace()),
        BinaryOp::Wedge => Value::Multivector(wedge_of_gradient(&grad)),
        BinaryOp::Cross => Value::Vector(
            wedge_of_gradient(&grad)
                .vector_dual()
                .expect("wedge of vectors is a bivector"),
        ),
        BinaryOp::Add | BinaryOp::Sub | BinaryOp::ScalarMul => {
            return Err(EvalError::MisplacedNabla)
        }
    };
    Ok(Jet::plain(value))
}

fn is_reserved(name: &str) -> bool {
    name == FIELD_NAME || name == STRAIN_NAME || ROTATION_NAMES.contains(&name)
}

/// `Σ_i e_i ∧ ∂_i v` from the Gibbs-convention gradient.
fn wedge_of_gradient(grad: &Tensor3) -> Multivector {
    (0..3).fold(Multivector::ZERO, |acc, i| {
        acc + Multivector::e(i).wedge(&Multivector::vector(grad.row(i)))
    })
}

/// Spatial gradient of a scalar (`∇s`) or vector (`∇⊗a`) subexpression.
#[derive(Debug, Clone, Copy)]
enum Grad {
    Scalar(Vec3),
    Vector(Tensor3),
}

#[derive(Debug, Clone, Copy)]
struct Jet {
    value: Value,
    grad: Option<Grad>,
}

impl Jet {
    fn plain(value: Value) -> Self {
        Jet { value, grad: None }
    }

    fn scalar(s: f64, grad: Option<Vec3>) -> Self {
        Jet {
            value: Value::Scalar(s),
            grad: grad.map(Grad::Scalar),
        }
    }

    fn vector(v: Vec3, grad: Option<Tensor3>) -> Self {
        Jet {
            value: Value::Vector(v),
            grad: grad.map(Grad::Vector),
        }
    }

    fn scalar_grad(&self) -> Option<Vec3> {
        match self.grad {
            Some(Grad::Scalar(g)) => Some(g),
            _ => None,
        }
    }

    fn vector_grad(&self) -> Option<Tensor3> {
        match self.grad {
            Some(Grad::Vector(g)) => Some(g),
            _ => None,
        }
    }

    fn scale(self, s: f64) -> Jet {
        let value = match self.value {
            Value::Scalar(x) => Value::Scalar(x * s),
            Value::Vector(v) => Value::Vector(v * s),
            Value::Tensor(t) => Value::Tensor(t * s),
            Value::Multivector(m) => Value::Multivector(m * s),
        };
        let grad = self.grad.map(|g| match g {
            Grad::Scalar(v) => Grad::Scalar(v * s),
            Grad::Vector(t) => Grad::Vector(t * s),
        });
        Jet { value, grad }
    }
}

fn both<A, B, U>(a: Option<A>, b: Option<B>, f: impl FnOnce(A, B) -> U) -> Option<U> {
    Some(f(a?, b?))
}

fn binary(op: BinaryOp, a: Jet, b: Jet) -> Result<Jet, EvalError> {
    use Value::*;

    let mismatch = || EvalError::KindMismatch {
        op: op.symbol(),
        lhs: a.value.kind(),
        rhs: b.value.kind(),
    };

    let jet = match op {
        BinaryOp::Add | BinaryOp::Sub => {
            let sign = if op == BinaryOp::Add { 1.0 } else { -1.0 };
            match (a.value, b.value) {
                (Scalar(x), Scalar(y)) => Jet::scalar(
                    x + sign * y,
                    both(a.scalar_grad(), b.scalar_grad(), |g, h| g + h * sign),
                ),
                (Vector(x), Vector(y)) => Jet::vector(
                    x + y * sign,
                    both(a.vector_grad(), b.vector_grad(), |g, h| g + h * sign),
                ),
                (Tensor(x), Tensor(y)) => Jet::plain(Tensor(x + y * sign)),
                (Multivector(x), Multivector(y)) => Jet::plain(Multivector(x + y * sign)),
                _ => return Err(mismatch()),
            }
        }
        BinaryOp::ScalarMul => match (a.value, b.value) {
            (Scalar(s), Scalar(t)) => Jet::scalar(
                s * t,
                both(a.scalar_grad(), b.scalar_grad(), |g, h| g * t + h * s),
            ),
            (Scalar(s), Vector(u)) => Jet::vector(
                u * s,
                both(a.scalar_grad(), b.vector_grad(), |g, h| Tensor3::dyad(g, u) + h * s),
            ),
            (Vector(u), Scalar(s)) => Jet::vector(
                u * s,
                both(b.scalar_grad(), a.vector_grad(), |g, h| Tensor3::dyad(g, u) + h * s),
            ),
            (Scalar(s), other) | (other, Scalar(s)) => Jet::plain(other).scale(s),
            _ => return Err(mismatch()),
        },
        BinaryOp::Dot => match (a.value, b.value) {
            (Vector(u), Vector(w)) => Jet::scalar(
                u.dot(w),
                both(a.vector_grad(), b.vector_grad(), |g, h| {
                    Tensor3::prefactor(&g, w) + Tensor3::prefactor(&h, u)
                }),
            ),
            (Vector(c), Tensor(t)) => Jet::plain(Vector(Tensor3::postfactor(c, &t))),
            (Tensor(t), Vector(c)) => Jet::plain(Vector(Tensor3::prefactor(&t, c))),
            (Tensor(s), Tensor(t)) => Jet::plain(Tensor(s.dot(&t))),
            (x, y) => match (as_multivector(x), as_multivector(y)) {
                (Some(m), Some(n)) if x.kind() == Kind::Multivector || y.kind() == Kind::Multivector => {
                    Jet::plain(Multivector(m.dot(&n)))
                }
                _ => return Err(mismatch()),
            },
        },
        BinaryOp::Dyad => match (a.value, b.value) {
            (Vector(u), Vector(w)) => Jet::plain(Tensor(Tensor3::dyad(u, w))),
            _ => return Err(mismatch()),
        },
        BinaryOp::Wedge => match (as_multivector(a.value), as_multivector(b.value)) {
            (Some(m), Some(n)) if a.value.kind() != Kind::Scalar && b.value.kind() != Kind::Scalar => {
                Jet::plain(Multivector(m.wedge(&n)))
            }
            _ => return Err(mismatch()),
        },
        BinaryOp::Cross => match (a.value, b.value) {
            (Vector(u), Vector(w)) => Jet::vector(
                u.cross(w),
                both(a.vector_grad(), b.vector_grad(), |g, h| {
                    Tensor3::from_row_vectors(std::array::from_fn(|i| {
                        g.row(i).cross(w) + u.cross(h.row(i))
                    }))
                }),
            ),
            _ => return Err(mismatch()),
        },
    };
    Ok(jet)
}

fn as_multivector(v: Value) -> Option<Multivector> {
    match v {
        Value::Vector(u) => Some(Multivector::vector(u)),
        Value::Multivector(m) => Some(m),
        Value::Scalar(_) | Value::Tensor(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Monomial, PolyField, Polynomial};
    use crate::notation::parse_str;

    fn shear() -> PolyField {
        PolyField::new([
            Polynomial::new([Monomial::new(1.0, [0, 1, 0])]),
            Polynomial::zero(),
            Polynomial::zero(),
        ])
    }

    fn eval(field: &PolyField, src: &str, dr: Vec3) -> Result<Value, EvalError> {
        EvalContext::new(field, Vec3::new(0.4, -1.0, 2.0))
            .bind("dr", dr)?
            .evaluate(&parse_str(src).unwrap())
    }

    #[test]
    fn postfactor_gradient_on_shear() {
        let v = eval(&shear(), "dr · (∇⊗v)", Vec3::unit(1)).unwrap();
        assert_eq!(v, Value::Vector(Vec3::new(1.0, 0.0, 0.0)));
        let w = eval(&shear(), "(∇⊗v)† · dr", Vec3::unit(1)).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn divergence_of_position_field() {
        let v = eval(&PolyField::position(), "∇ · v", Vec3::ZERO).unwrap();
        assert_eq!(v, Value::Scalar(3.0));
    }

    #[test]
    fn curl_and_wedge_of_rotation() {
        let f = PolyField::rigid_rotation(Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(
            eval(&f, "∇ × v", Vec3::ZERO).unwrap(),
            Value::Vector(Vec3::new(0.0, 0.0, 2.0))
        );
        assert_eq!(
            eval(&f, "0.5 * (∇ ∧ v)", Vec3::ZERO).unwrap(),
            Value::Multivector(Multivector::bivector(1.0, 0.0, 0.0))
        );
    }

    #[test]
    fn gradient_of_scalar_product() {
        // ∇(dr · v) = (∇⊗v) · dr
        let f = PolyField::new([
            Polynomial::new([Monomial::new(1.0, [1, 1, 0])]),
            Polynomial::new([Monomial::new(2.0, [0, 0, 2])]),
            Polynomial::new([Monomial::new(-1.0, [3, 0, 0])]),
        ]);
        let dr = Vec3::new(1.0, 2.0, 3.0);
        let lhs = eval(&f, "∇(dr · v)", dr).unwrap();
        let rhs = eval(&f, "(∇⊗v) · dr", dr).unwrap();
        assert_eq!(lhs, rhs);
        // ∇(2 * (v · v)) = 4 (∇⊗v) · v
        let lhs = eval(&f, "∇(2 * (v · v))", dr).unwrap();
        let rhs = eval(&f, "4 * ((∇⊗v) · v)", dr).unwrap();
        let (Value::Vector(a), Value::Vector(b)) = (lhs, rhs) else { panic!() };
        assert!((a - b).max_abs() < 1e-12);
    }

    #[test]
    fn derived_tensors() {
        let f = shear();
        assert_eq!(
            eval(&f, "d + Ω", Vec3::ZERO).unwrap(),
            eval(&f, "∇⊗v", Vec3::ZERO).unwrap()
        );
        assert_eq!(
            eval(&f, "Omega", Vec3::ZERO).unwrap(),
            eval(&f, "-(Ω†)", Vec3::ZERO).unwrap()
        );
    }

    #[test]
    fn kind_errors() {
        let f = shear();
        assert!(matches!(
            eval(&f, "(dr · v)'", Vec3::ZERO),
            Err(EvalError::UnaryKindMismatch { kind: Kind::Scalar, .. })
        ));
        assert!(matches!(
            eval(&f, "dr + (∇⊗v)", Vec3::ZERO),
            Err(EvalError::KindMismatch { lhs: Kind::Vector, rhs: Kind::Tensor, .. })
        ));
        assert!(matches!(eval(&f, "2 · dr", Vec3::ZERO), Err(EvalError::KindMismatch { .. })));
        assert!(matches!(eval(&f, "dr · ∇", Vec3::ZERO), Err(EvalError::MisplacedNabla)));
        assert!(matches!(eval(&f, "∇", Vec3::ZERO), Err(EvalError::MisplacedNabla)));
        assert!(matches!(eval(&f, "∇ + v", Vec3::ZERO), Err(EvalError::MisplacedNabla)));
        assert!(matches!(
            eval(&f, "∇ · (∇⊗v)", Vec3::ZERO),
            Err(EvalError::KindMismatch { .. })
        ));
        assert!(matches!(
            eval(&f, "∇ ⊗ (∇ × v)", Vec3::ZERO),
            Err(EvalError::NotDifferentiable(Kind::Vector))
        ));
        assert!(matches!(eval(&f, "∇(v)", Vec3::ZERO), Err(EvalError::UnaryKindMismatch { .. })));
    }

    #[test]
    fn binding_errors() {
        let f = shear();
        assert_eq!(eval(&f, "w · v", Vec3::ZERO), Err(EvalError::Unbound("w".into())));
        assert!(matches!(
            EvalContext::new(&f, Vec3::ZERO).bind("v", Vec3::ZERO),
            Err(EvalError::Reserved(_))
        ));
    }

    #[test]
    fn value_rendering() {
        assert_eq!(Value::Vector(Vec3::new(-1.0, 0.0, 0.5)).to_string(), "(-1, 0, 0.5)");
        assert_eq!(
            Value::Vector(Vec3::new(-1.0, 0.0, 0.5)).to_json(),
            json!({"kind": "vector", "value": [-1.0, 0.0, 0.5]})
        );
        assert_eq!(
            Value::Multivector(Multivector::bivector(1.0, 0.0, 0.0)).to_json()["value"]["e12"],
            json!(1.0)
        );
    }

    #[test]
    fn traced_errors_locate_the_failing_node() {
        let f = shear();
        let ctx = EvalContext::new(&f, Vec3::ZERO);
        let cases = [
            ("v + (dr · v)", 5),
            ("v · v†", 6),
            ("-(v ⊗ v) · 2", 11),
            ("∇ · (∇ ⊗ v)", 4),
        ];
        for (src, offset) in cases {
            let (expr, span) = crate::notation::parse_spanned(src).unwrap();
            let err = ctx.evaluate_traced(&expr).unwrap_err();
            assert_eq!(span.locate(&err.path), offset, "{src}: {err}");
        }
    }
}
