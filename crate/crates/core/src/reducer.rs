//! The reduction map: divide a module by a shortest vector of its metric
//! lattice and canonicalize. The output is always a reduced ideal on which
//! the three 1-reducedness tests answer yes; anything else is an internal
//! defect and is reported as such.

use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::field::QElem;
use crate::ideal::{is_one_minimal, normalize_module, CanonicalForm, IdealForm, Module2};
use crate::lattice::{shortest_vector, Metric};

#[derive(Debug, Error, PartialEq)]
pub enum ReduceError {
    #[error("module generators are linearly dependent")]
    DegenerateModule,
    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),
}

/// Outcome of one reduction step.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// The shortest vector the module was divided by.
    pub chosen: QElem,
    pub output: IdealForm,
    /// Sup-norm distance diagnostic on logarithmic coordinates; approximate,
    /// never used in any decision.
    pub distance: f64,
}

/// Computes a shortest vector `f` of `(m, u)`, scales by `f^{-1}`, and
/// canonicalizes the result to `(a, b)` form. Primitivity of 1 and
/// reducedness of the output are asserted; both are guaranteed, so a failure
/// surfaces as [`ReduceError::InternalInvariantViolation`].
pub fn reduce_ideal(m: &Module2, u: &Metric) -> Result<ReductionResult, ReduceError> {
    let f = shortest_vector(m, u).map_err(|_| ReduceError::DegenerateModule)?;
    let f_inv = f.inv().expect("shortest vector is nonzero");
    let scaled = m.scale(&f_inv).expect("nonzero scalar");
    let (scale, form) =
        normalize_module(&scaled).map_err(|_| ReduceError::DegenerateModule)?;
    if !scale.numer().is_one() || !scale.denom().is_one() {
        return Err(ReduceError::InternalInvariantViolation(format!(
            "1 is not primitive in the scaled module (canonical scale {scale})"
        )));
    }
    let output = match form {
        CanonicalForm::Ideal(ideal) => ideal,
        // modules that are ideals of a sub-order surface under the larger
        // discriminant 4 q^2 D
        CanonicalForm::Raw(raw) => raw.reinterpret().map_err(|e| {
            ReduceError::InternalInvariantViolation(format!(
                "scaled module is not a reduced ideal in any quadratic context: {e}"
            ))
        })?,
    };
    match is_one_minimal(&output.module()) {
        Ok(true) => {}
        other => {
            return Err(ReduceError::InternalInvariantViolation(format!(
                "output failed the reducedness box check: {other:?}"
            )))
        }
    }
    let distance = distance_diag(u, &f, &output);
    Ok(ReductionResult { chosen: f, output, distance })
}

/// `max_i |log(u_i |sigma_i(f)|) - log(N(J)^{-1/2})|` with the metric
/// normalized to `N(u) = 1` first (making the value invariant under metric
/// scaling). Purely diagnostic.
pub fn distance_diag(u: &Metric, f: &QElem, output: &IdealForm) -> f64 {
    let (w1, w2) = u.weights_sq_approx();
    let n_u = (w1 * w2).sqrt();
    let (w1, w2) = (w1 / n_u, w2 / n_u);
    let s1 = f.approx().abs();
    let s2 = f.approx_conj().abs();
    // N(J)^{-1/2} = sqrt(a)
    let target = 0.5 * output.a().to_f64().unwrap_or(f64::INFINITY).ln();
    let t1 = (w1.sqrt() * s1).ln() - target;
    let t2 = (w2.sqrt() * s2).ln() - target;
    t1.abs().max(t2.abs())
}
