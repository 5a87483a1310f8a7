//! Truncated power-series evaluation with adaptive stopping.
//!
//! A series is described by a coefficient rule `n -> a_n`. [`evaluate`] sums
//! `a_n z^n`; [`evaluate_with_powers`] replaces `z^n` by an arbitrary sequence,
//! which is how functions are evaluated at formal q-sums such as
//! `x (+)_q y`, whose n-th power is a Gaussian-weighted expansion rather than
//! an ordinary power.
//!
//! Stopping rule: summation ends at the first degree `N` where the last
//! `tail_run` terms are all below `max(abs_tol, rel_tol * |partial sum|)`.
//! The reported error estimate is the sum of those tail magnitudes.
//!
//! Coefficient rules must be reentrant: the engine may be driven from several
//! threads with the same [`SeriesSpec`].

use std::collections::VecDeque;

use num_complex::Complex;

use crate::error::{QError, Result};
use crate::scalar::{is_finite, Scalar};

/// Degree after which sustained growth counts as divergence.
const DIVERGENCE_START: usize = 10;

/// Fraction of the radius hint beyond which [`evaluate`] refuses to sum.
const RADIUS_GUARD: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_terms: usize,
    /// Consecutive small terms required before stopping.
    pub tail_run: usize,
    /// Growth factor over `tail_run` consecutive nonzero terms that signals divergence.
    pub divergence_growth: T,
    /// Minimum denominator magnitude for quotient functions.
    pub pole_tol: T,
}

impl<T: Scalar> Default for EvalConfig<T> {
    fn default() -> Self {
        EvalConfig {
            abs_tol: T::lit(1e-14),
            rel_tol: T::lit(1e-12),
            max_terms: 512,
            tail_run: 3,
            divergence_growth: T::one(),
            pole_tol: T::lit(1e-8),
        }
    }
}

impl<T: Scalar> EvalConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.abs_tol) || !positive(self.rel_tol) || !positive(self.pole_tol) {
            return Err(QError::Config(
                "tolerances must be positive and finite".into(),
            ));
        }
        if self.tail_run == 0 || self.max_terms < self.tail_run {
            return Err(QError::Config(format!(
                "need 1 <= tail_run <= max_terms, got tail_run = {} and max_terms = {}",
                self.tail_run, self.max_terms
            )));
        }
        if self.divergence_growth.is_nan() || self.divergence_growth < T::one() {
            return Err(QError::Config("divergence_growth must be >= 1".into()));
        }
        Ok(())
    }
}

/// A value together with an estimate of its truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueWithError<T> {
    pub value: Complex<T>,
    pub error_estimate: T,
    pub terms_used: usize,
}

impl<T: Scalar> ValueWithError<T> {
    pub fn exact(value: Complex<T>) -> Self {
        ValueWithError {
            value,
            error_estimate: T::zero(),
            terms_used: 0,
        }
    }
}

/// Power series `sum a_n z^n` given by its coefficient rule.
#[derive(Clone, Debug)]
pub struct SeriesSpec<T, F> {
    coefficient_at: F,
    radius_hint: Option<T>,
}

impl<T: Scalar, F: Fn(usize) -> Complex<T>> SeriesSpec<T, F> {
    pub fn new(coefficient_at: F) -> Self {
        SeriesSpec {
            coefficient_at,
            radius_hint: None,
        }
    }

    /// Declares the radius of convergence; [`evaluate`] rejects
    /// `|z| >= 0.95 * radius` with a domain error.
    pub fn with_radius_hint(mut self, radius: T) -> Self {
        self.radius_hint = Some(radius);
        self
    }

    pub fn radius_hint(&self) -> Option<T> {
        self.radius_hint
    }

    #[inline]
    pub fn coefficient(&self, n: usize) -> Complex<T> {
        (self.coefficient_at)(n)
    }
}

/// Sums `a_n z^n`.
pub fn evaluate<T, F>(
    series: &SeriesSpec<T, F>,
    z: Complex<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>>
where
    T: Scalar,
    F: Fn(usize) -> Complex<T>,
{
    if !is_finite(z) {
        return Err(QError::NonFinite);
    }
    let mut detect_divergence = true;
    if let Some(radius) = series.radius_hint {
        let limit = T::lit(RADIUS_GUARD) * radius;
        if z.norm() >= limit {
            return Err(QError::Domain(format!(
                "|z| = {} is not below 0.95 * radius = {}",
                z.norm(),
                limit
            )));
        }
        detect_divergence = false;
    }
    let powers = std::iter::successors(Some(Complex::new(T::one(), T::zero())), |&p| Some(p * z));
    sum_series(series, powers, cfg, detect_divergence)
}

/// Sums `a_n p_n` where `powers` yields `p_0, p_1, ...` in order.
///
/// The iterator is consumed lazily; an exhausted iterator before convergence
/// is reported as [`QError::NonConvergent`].
pub fn evaluate_with_powers<T, F, P>(
    series: &SeriesSpec<T, F>,
    powers: P,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>>
where
    T: Scalar,
    F: Fn(usize) -> Complex<T>,
    P: IntoIterator<Item = Complex<T>>,
{
    sum_series(series, powers, cfg, true)
}

fn sum_series<T, F, P>(
    series: &SeriesSpec<T, F>,
    powers: P,
    cfg: &EvalConfig<T>,
    detect_divergence: bool,
) -> Result<ValueWithError<T>>
where
    T: Scalar,
    F: Fn(usize) -> Complex<T>,
    P: IntoIterator<Item = Complex<T>>,
{
    cfg.validate()?;
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut tail: VecDeque<T> = VecDeque::with_capacity(cfg.tail_run + 1);
    let mut growth: VecDeque<T> = VecDeque::with_capacity(cfg.tail_run + 2);
    let mut powers = powers.into_iter();

    for n in 0..cfg.max_terms {
        let Some(power) = powers.next() else {
            return Err(QError::NonConvergent { terms: n });
        };
        let coefficient = series.coefficient(n);
        let term = if coefficient == Complex::new(T::zero(), T::zero()) {
            coefficient
        } else {
            coefficient * power
        };
        if !is_finite(term) {
            return Err(QError::Divergent { degree: n });
        }
        sum = sum + term;
        let magnitude = term.norm();

        tail.push_back(magnitude);
        if tail.len() > cfg.tail_run {
            tail.pop_front();
        }
        let threshold = cfg.abs_tol.max(cfg.rel_tol * sum.norm());
        if tail.len() == cfg.tail_run && tail.iter().all(|&m| m < threshold) {
            let error_estimate = tail.iter().fold(T::zero(), |acc, &m| acc + m);
            return Ok(ValueWithError {
                value: sum,
                error_estimate,
                terms_used: n + 1,
            });
        }

        if detect_divergence && n > DIVERGENCE_START && magnitude > T::zero() {
            growth.push_back(magnitude);
            if growth.len() > cfg.tail_run + 1 {
                growth.pop_front();
            }
            let sustained = growth.len() == cfg.tail_run + 1
                && growth
                    .iter()
                    .zip(growth.iter().skip(1))
                    .all(|(&prev, &next)| next >= cfg.divergence_growth * prev);
            if sustained {
                return Err(QError::Divergent { degree: n });
            }
        }
    }
    Err(QError::NonConvergent {
        terms: cfg.max_terms,
    })
}
