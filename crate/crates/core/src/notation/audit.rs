use serde::{Deserialize, Serialize};

use crate::dyadics::Tensor3;
use crate::error::FieldError;
use crate::fields::VectorField;
use crate::ga::Vec3;

/// Relative tolerance for matching a tensor against either convention.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Matches `∇⊗v` (row `i` holds `∂v/∂x_i`).
    Gibbs,
    /// Matches the transpose `(∇⊗v)†`.
    Alternative,
    /// The gradient is symmetric, so the two conventions cannot be told apart.
    SymmetricAmbiguous,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditResult {
    pub verdict: Verdict,
    pub max_abs_deviation_gibbs: f64,
    pub max_abs_deviation_alt: f64,
}

/// Decides which gradient convention the matrix `t` follows for field `f`
/// at `x`.
pub fn audit_convention<F: VectorField + ?Sized>(
    t: &Tensor3,
    f: &F,
    x: Vec3,
) -> Result<AuditResult, FieldError> {
    let gibbs = f.grad_gibbs(x)?;
    let alt = gibbs.transpose();
    let scale = gibbs.max_abs().max(t.max_abs());
    let tol = AUDIT_TOLERANCE * scale;

    let dev_gibbs = (*t - gibbs).max_abs();
    let dev_alt = (*t - alt).max_abs();
    let verdict = if (gibbs - alt).max_abs() <= tol {
        Verdict::SymmetricAmbiguous
    } else if dev_gibbs <= tol {
        Verdict::Gibbs
    } else if dev_alt <= tol {
        Verdict::Alternative
    } else {
        Verdict::Neither
    };
    Ok(AuditResult {
        verdict,
        max_abs_deviation_gibbs: dev_gibbs,
        max_abs_deviation_alt: dev_alt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Monomial, PolyField, Polynomial};

    fn shear() -> PolyField {
        PolyField::new([
            Polynomial::new([Monomial::new(1.0, [0, 1, 0])]),
            Polynomial::zero(),
            Polynomial::zero(),
        ])
    }

    #[test]
    fn verdicts() {
        let x = Vec3::new(1.0, 2.0, 3.0);
        let f = shear();
        let g = f.grad_gibbs(x).unwrap();
        assert_eq!(audit_convention(&g, &f, x).unwrap().verdict, Verdict::Gibbs);
        assert_eq!(
            audit_convention(&g.transpose(), &f, x).unwrap().verdict,
            Verdict::Alternative
        );
        assert_eq!(
            audit_convention(&Tensor3::IDENTITY, &f, x).unwrap().verdict,
            Verdict::Neither
        );
        let r = PolyField::position();
        for t in [Tensor3::IDENTITY, Tensor3::ZERO, g] {
            assert_eq!(
                audit_convention(&t, &r, x).unwrap().verdict,
                Verdict::SymmetricAmbiguous
            );
        }
    }

    #[test]
    fn deviations_and_json() {
        let x = Vec3::ZERO;
        let f = shear();
        let g = f.grad_gibbs(x).unwrap();
        let result = audit_convention(&g.transpose(), &f, x).unwrap();
        assert_eq!(result.max_abs_deviation_gibbs, 1.0);
        assert_eq!(result.max_abs_deviation_alt, 0.0);
        assert_eq!(
            serde_json::to_value(result).unwrap(),
            serde_json::json!({
                "verdict": "alternative",
                "max_abs_deviation_gibbs": 1.0,
                "max_abs_deviation_alt": 0.0
            })
        );
        let sym = serde_json::to_value(Verdict::SymmetricAmbiguous).unwrap();
        assert_eq!(sym, "symmetric-ambiguous");
    }
}
