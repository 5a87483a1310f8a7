use serde::{Deserialize, Serialize};

/// Outcome of checking one identity over a set of sample points.
///
/// `pass` is true exactly when `max_abs_residual <= tolerance`. A sample whose
/// evaluation failed contributes an infinite residual (serialized as `null`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub q: f64,
    pub samples: usize,
    pub max_abs_residual: f64,
    /// Arguments at the worst sample, one `[re, im]` pair per argument.
    pub argmax_input: Vec<[f64; 2]>,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn single(id: &str, q: f64, residual: f64, input: Vec<[f64; 2]>, tolerance: f64) -> Self {
        Self::from_samples(id, q, tolerance, std::iter::once((residual, input)))
            .expect("one sample")
    }

    /// Folds `(residual, input)` samples in order; the first worst sample wins ties.
    /// Returns `None` when there are no samples.
    pub fn from_samples<I>(id: &str, q: f64, tolerance: f64, samples: I) -> Option<Self>
    where
        I: IntoIterator<Item = (f64, Vec<[f64; 2]>)>,
    {
        let mut count = 0;
        let mut worst: Option<(f64, Vec<[f64; 2]>)> = None;
        for (residual, input) in samples {
            count += 1;
            let residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual.abs()
            };
            if worst.as_ref().is_none_or(|(w, _)| residual > *w) {
                worst = Some((residual, input));
            }
        }
        let (max_abs_residual, argmax_input) = worst?;
        Some(IdentityReport {
            identity_id: id.to_string(),
            q,
            samples: count,
            max_abs_residual,
            argmax_input,
            tolerance,
            pass: max_abs_residual <= tolerance,
        })
    }
}
