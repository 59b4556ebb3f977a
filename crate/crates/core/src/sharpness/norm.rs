//! Group-wise norm combination for mixed parameter collections: factor
//! pairs measure their tangents in their own metric, everything else uses
//! the `|w|`-scaled elementwise norm, and the groups combine as a root
//! sum of squares.

use crate::error::{Error, Result};
use crate::geometry::{metric_inner, FactorPair, Metric, TangentPair};

pub enum NormGroup<'a> {
    FactorPair {
        metric: Metric,
        point: &'a FactorPair,
        tangent: &'a TangentPair,
    },
    Elementwise {
        weights: &'a [f64],
        tangent: &'a [f64],
    },
}

/// `sqrt( sum_g ||xi_g||_g^2 )`
pub fn group_norm(groups: &[NormGroup]) -> Result<f64> {
    let mut total = 0.0;
    for group in groups {
        match group {
            NormGroup::FactorPair {
                metric,
                point,
                tangent,
            } => {
                total += metric_inner(metric, point, tangent, tangent)?;
            }
            NormGroup::Elementwise { weights, tangent } => {
                if weights.len() != tangent.len() {
                    return Err(Error::ShapeMismatch(
                        "elementwise group weight/tangent length mismatch".into(),
                    ));
                }
                for (&w, &t) in weights.iter().zip(*tangent) {
                    if w == 0.0 {
                        return Err(Error::DivisionByZero("group_norm elementwise weight"));
                    }
                    let s = t / w.abs();
                    total += s * s;
                }
            }
        }
    }
    Ok(total.max(0.0).sqrt())
}
