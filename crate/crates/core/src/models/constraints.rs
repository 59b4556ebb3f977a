//! Symmetry-constraint checkers.
//!
//! A continuous symmetry of the loss pins its derivatives. Differentiating
//! `l(psi(g, theta)) = l(theta)` in the group parameter at the identity
//! element gives local constraints on the gradient and (through the
//! action's second derivatives) on the Hessian. These checkers evaluate
//! the constraint residuals; they are detectors, so residuals are
//! reported rather than asserted.

use crate::error::{Error, Result};
use crate::geometry::{FactorPair, TangentPair};
use crate::numerics::dot;

/// Residual of the GL generator constraint `G^T dG = dH^T H`, which is
/// zero in exact arithmetic for any GL-symmetric loss.
pub fn check_gl_gradient_constraint(point: &FactorPair, grad: &TangentPair) -> Result<f64> {
    if point.g.shape() != grad.g.shape() || point.h.shape() != grad.h.shape() {
        return Err(Error::ShapeMismatch(
            "gradient shapes must match the factor pair".into(),
        ));
    }
    let lhs = point.g.tr_matmul(&grad.g);
    let rhs = grad.h.tr_matmul(&point.h);
    Ok(lhs.sub(&rhs).frobenius_norm())
}

/// Diagonal specialization: `max_i |u_i dL/du_i - v_i dL/dv_i|`.
pub fn check_gl_gradient_constraint_diag(
    u: &[f64],
    v: &[f64],
    g_u: &[f64],
    g_v: &[f64],
) -> Result<f64> {
    if u.len() != v.len() || g_u.len() != u.len() || g_v.len() != u.len() {
        return Err(Error::ShapeMismatch(
            "diagonal gradient constraint length mismatch".into(),
        ));
    }
    Ok(u.iter()
        .zip(v)
        .zip(g_u.iter().zip(g_v))
        .map(|((&ui, &vi), (&gui, &gvi))| (ui * gui - vi * gvi).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// Shift a masked parameter subset by a common value.
    Translation,
    /// Scale a masked subset by a positive factor.
    Scale,
    /// Scale one subset and inversely scale a disjoint one.
    Rescale,
}

/// Constraint residuals evaluated at the identity element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    /// First-order constraint: the gradient is orthogonal to the action's
    /// generator.
    pub gradient: f64,
    /// Hessian-times-generator constraint (max-abs residual).
    pub hessian_vector: f64,
    /// Quadratic-form constraint; zero for translation where it is
    /// implied by the vector constraint.
    pub hessian_quadratic: f64,
}

/// Evaluate the local symmetry constraints for a masked parameter vector.
///
/// `masks` selects the affected coordinates: translation and scale use
/// `masks.0` only; rescale uses both, and they must be disjoint. `hvp`
/// is the Euclidean Hessian-vector product at `params`.
///
/// Residuals per kind (theta_A is the masked parameter vector):
/// - translation: `<grad_A, 1>` and `||H 1_A||_inf`
/// - scale: `<grad_A, theta_A>`, `||H theta_A + grad_A||_inf`,
///   `theta_A^T H theta_A`
/// - rescale: the same three with the signed generator
///   `theta_A1 - theta_A2` and the extra `+ 2 <grad_A2, theta_A2>` term
///   in the quadratic constraint.
pub fn check_local_constraints(
    kind: SymmetryKind,
    params: &[f64],
    masks: (&[usize], &[usize]),
    grad: &[f64],
    hvp: &mut dyn FnMut(&[f64]) -> Vec<f64>,
) -> Result<ConstraintReport> {
    let dim = params.len();
    if grad.len() != dim {
        return Err(Error::ShapeMismatch(
            "gradient length must match parameters".into(),
        ));
    }
    let (mask_a, mask_b) = masks;
    for &i in mask_a.iter().chain(mask_b) {
        if i >= dim {
            return Err(Error::InapplicableMask(format!(
                "mask index {i} out of range for {dim} parameters"
            )));
        }
    }
    match kind {
        SymmetryKind::Translation | SymmetryKind::Scale => {
            if !mask_b.is_empty() {
                return Err(Error::InapplicableMask(
                    "translation/scale use a single mask".into(),
                ));
            }
        }
        SymmetryKind::Rescale => {
            let overlap = mask_a.iter().any(|i| mask_b.contains(i));
            if overlap {
                return Err(Error::InapplicableMask(
                    "rescale masks must be disjoint".into(),
                ));
            }
        }
    }
    if mask_a.is_empty() && mask_b.is_empty() {
        return Ok(ConstraintReport {
            gradient: 0.0,
            hessian_vector: 0.0,
            hessian_quadratic: 0.0,
        });
    }

    // The generator direction J_alpha psi at the identity.
    let mut generator = vec![0.0; dim];
    match kind {
        SymmetryKind::Translation => {
            for &i in mask_a {
                generator[i] = 1.0;
            }
        }
        SymmetryKind::Scale => {
            for &i in mask_a {
                generator[i] = params[i];
            }
        }
        SymmetryKind::Rescale => {
            for &i in mask_a {
                generator[i] = params[i];
            }
            for &i in mask_b {
                generator[i] = -params[i];
            }
        }
    }

    let gradient = dot(grad, &generator).abs();
    let h_gen = hvp(&generator);

    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (hessian_vector, hessian_quadratic) = match kind {
        SymmetryKind::Translation => (max_abs(&h_gen), 0.0),
        SymmetryKind::Scale => {
            let mut resid = h_gen.clone();
            for &i in mask_a {
                resid[i] += grad[i];
            }
            (max_abs(&resid), dot(&generator, &h_gen).abs())
        }
        SymmetryKind::Rescale => {
            let mut resid = h_gen.clone();
            for &i in mask_a {
                resid[i] += grad[i];
            }
            for &i in mask_b {
                resid[i] -= grad[i];
            }
            let quad = dot(&generator, &h_gen)
                + 2.0 * mask_b.iter().map(|&i| grad[i] * params[i]).sum::<f64>();
            (max_abs(&resid), quad.abs())
        }
    };

    Ok(ConstraintReport {
        gradient,
        hessian_vector,
        hessian_quadratic,
    })
}
