//! Jackson q-derivative and q-integral.
//!
//! `D_q f(x) = (f(x) - f(qx)) / ((1-q) x)` and
//! `int_0^x f d_q t = (1-q) sum_k f(q^k x) q^k x`.
//!
//! The integral of `D_q f` telescopes to `f(x) - f(0)`; the residual checks
//! here use that form, with the `f(0)` term that vanishes only when
//! `f(0) = 0`. The uncorrected variants are kept as `*_uncorrected_*`
//! functions so their failure can be demonstrated.

use num_complex::Complex;

use crate::error::{QError, Result};
use crate::qcore::QParam;
use crate::qfunctions::QFunction;
use crate::qfunctions::QFunctionKind;
use crate::report::IdentityReport;
use crate::scalar::{is_finite, real, Scalar};
use crate::series::{EvalConfig, ValueWithError};

/// Consecutive negligible summands required to stop the q-integral.
const QUADRATURE_TAIL_RUN: usize = 3;

/// A function that can be sampled at complex points.
///
/// Implementations must be deterministic and reentrant.
pub trait Evaluable<T: Scalar>: Sync {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>>;

    /// Radius of the disc on which `eval` is defined, if bounded.
    fn domain_radius(&self) -> Option<T> {
        None
    }
}

impl<T: Scalar, F> Evaluable<T> for F
where
    F: Fn(Complex<T>) -> Result<Complex<T>> + Sync,
{
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self(z)
    }
}

impl<T: Scalar> Evaluable<T> for QFunction<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        QFunction::eval(self, z).map(|v| v.value)
    }

    fn domain_radius(&self) -> Option<T> {
        match self.kind() {
            QFunctionKind::BigExpQ => None,
            _ => Some(self.q().series_radius()),
        }
    }
}

/// Wraps an infallible closure as an [`Evaluable`].
pub fn total<T, F>(f: F) -> impl Evaluable<T>
where
    T: Scalar,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    move |z: Complex<T>| -> Result<Complex<T>> { Ok(f(z)) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T> {
    /// Summand magnitude below which a point counts as negligible.
    pub tail_tol: T,
    pub max_points: usize,
}

impl<T: Scalar> Default for QuadratureConfig<T> {
    fn default() -> Self {
        QuadratureConfig {
            tail_tol: T::lit(1e-14),
            max_points: 2048,
        }
    }
}

impl<T: Scalar> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > T::zero() && self.tail_tol.is_finite()) {
            return Err(QError::Config("tail_tol must be positive".into()));
        }
        if self.max_points < 8 {
            return Err(QError::Config("max_points must be at least 8".into()));
        }
        Ok(())
    }
}

/// `D_q f(x)`. Undefined at `x = 0`.
pub fn jackson_derivative<T: Scalar>(
    f: &dyn Evaluable<T>,
    x: Complex<T>,
    q: QParam<T>,
) -> Result<Complex<T>> {
    if !is_finite(x) {
        return Err(QError::NonFinite);
    }
    if x == real(T::zero()) {
        return Err(QError::Domain(
            "the Jackson derivative is undefined at x = 0".into(),
        ));
    }
    let qx = x * q.value();
    Ok((f.eval(x)? - f.eval(qx)?) / (x * q.complement()))
}

/// `int_0^x f(t) d_q t` for real `x >= 0`.
pub fn jackson_integral<T: Scalar>(
    f: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<ValueWithError<T>> {
    integral_parts(f, x, q, cfg).map(|p| p.value)
}

struct IntegralParts<T> {
    value: ValueWithError<T>,
    /// Sum of summand magnitudes, for rounding bounds.
    abs_sum: T,
}

fn integral_parts<T: Scalar>(
    f: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralParts<T>> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(QError::NonFinite);
    }
    if x < T::zero() {
        return Err(QError::Domain(format!(
            "q-integral upper limit {x} is negative"
        )));
    }
    if x == T::zero() {
        return Ok(IntegralParts {
            value: ValueWithError::exact(real(T::zero())),
            abs_sum: T::zero(),
        });
    }
    let mut sum = real(T::zero());
    let mut abs_sum = T::zero();
    let mut point = x;
    let mut run = 0;
    for k in 0..cfg.max_points {
        let summand = f.eval(real(point))? * (point * q.complement());
        if !is_finite(summand) {
            return Err(QError::NonFinite);
        }
        sum = sum + summand;
        let mag = summand.norm();
        abs_sum = abs_sum + mag;
        if mag < cfg.tail_tol {
            run += 1;
            if run >= QUADRATURE_TAIL_RUN {
                let tail = mag * q.value() / q.complement();
                return Ok(IntegralParts {
                    value: ValueWithError {
                        value: sum,
                        error_estimate: tail,
                        terms_used: k + 1,
                    },
                    abs_sum,
                });
            }
        } else {
            run = 0;
        }
        point = point * q.value();
    }
    Err(QError::NonConvergent {
        terms: cfg.max_points,
    })
}

/// Rounding allowance for a residual assembled from quantities of total magnitude `scale`.
fn rounding<T: Scalar>(scale: T, points: usize) -> T {
    T::lit(8.0) * T::epsilon() * T::from_usize_lossy(points + 4) * scale
}

/// Jackson derivative as an [`Evaluable`].
struct Derivative<'a, T: Scalar> {
    f: &'a dyn Evaluable<T>,
    q: QParam<T>,
}

impl<T: Scalar> Evaluable<T> for Derivative<'_, T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        jackson_derivative(self.f, z, self.q)
    }
}

/// `int_0^x D_q f d_q t - (f(x) - f(0))`.
///
/// The error estimate combines the quadrature tail with a rounding bound.
pub fn fundamental_theorem_check<T: Scalar>(
    f: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<ValueWithError<T>> {
    let integral = integral_parts(&Derivative { f, q }, x, q, cfg)?;
    let fx = f.eval(real(x))?;
    let f0 = f.eval(real(T::zero()))?;
    let residual = integral.value.value - (fx - f0);
    let scale = integral.abs_sum + fx.norm() + f0.norm();
    Ok(ValueWithError {
        value: residual,
        error_estimate: integral.value.error_estimate + rounding(scale, integral.value.terms_used),
        terms_used: integral.value.terms_used,
    })
}

/// `int_0^x D_q f d_q t - f(x)`: the fundamental theorem without the `f(0)`
/// term. Equals `-f(0)` up to quadrature error.
pub fn fundamental_theorem_uncorrected_residual<T: Scalar>(
    f: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let integral = jackson_integral(&Derivative { f, q }, x, q, cfg)?;
    Ok(integral.value - f.eval(real(x))?)
}

/// `D_q(fg)(x) - [f(x) D_q g(x) + g(qx) D_q f(x)]`.
pub fn product_rule_residual<T: Scalar>(
    f: &dyn Evaluable<T>,
    g: &dyn Evaluable<T>,
    x: Complex<T>,
    q: QParam<T>,
) -> Result<Complex<T>> {
    let fg = |z: Complex<T>| -> Result<Complex<T>> { Ok(f.eval(z)? * g.eval(z)?) };
    let lhs = jackson_derivative(&fg, x, q)?;
    let rhs = f.eval(x)? * jackson_derivative(g, x, q)?
        + g.eval(x * q.value())? * jackson_derivative(f, x, q)?;
    Ok(lhs - rhs)
}

/// `D_q(f/g)(x) - [D_q f(x) g(qx) - f(qx) D_q g(x)] / (g(x) g(qx))`.
pub fn quotient_rule_residual<T: Scalar>(
    f: &dyn Evaluable<T>,
    g: &dyn Evaluable<T>,
    x: Complex<T>,
    q: QParam<T>,
    pole_tol: T,
) -> Result<Complex<T>> {
    let qx = x * q.value();
    let (gx, gqx) = (g.eval(x)?, g.eval(qx)?);
    if gx.norm() < pole_tol || gqx.norm() < pole_tol {
        return Err(QError::Pole(format!(
            "denominator below pole_tol near x = {x}"
        )));
    }
    let ratio = |z: Complex<T>| -> Result<Complex<T>> { Ok(f.eval(z)? / g.eval(z)?) };
    let lhs = jackson_derivative(&ratio, x, q)?;
    let rhs = (jackson_derivative(f, x, q)? * gqx - f.eval(qx)? * jackson_derivative(g, x, q)?)
        / (gx * gqx);
    Ok(lhs - rhs)
}

/// `int f D_q g - [f(x)g(x) - f(0)g(0) - int g(qt) D_q f]`, integrals over `[0, x]`.
pub fn integration_by_parts_residual<T: Scalar>(
    f: &dyn Evaluable<T>,
    g: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<ValueWithError<T>> {
    let (lhs, rhs_integral) = by_parts_integrals(f, g, x, q, cfg)?;
    let boundary = f.eval(real(x))? * g.eval(real(x))?;
    let origin = f.eval(real(T::zero()))? * g.eval(real(T::zero()))?;
    let residual = lhs.value.value - (boundary - origin - rhs_integral.value.value);
    let scale = lhs.abs_sum + rhs_integral.abs_sum + boundary.norm() + origin.norm();
    let points = lhs.value.terms_used.max(rhs_integral.value.terms_used);
    Ok(ValueWithError {
        value: residual,
        error_estimate: lhs.value.error_estimate
            + rhs_integral.value.error_estimate
            + rounding(scale, points),
        terms_used: lhs.value.terms_used + rhs_integral.value.terms_used,
    })
}

/// Integration by parts without the `f(0)g(0)` boundary term.
pub fn integration_by_parts_uncorrected_residual<T: Scalar>(
    f: &dyn Evaluable<T>,
    g: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let (lhs, rhs_integral) = by_parts_integrals(f, g, x, q, cfg)?;
    let boundary = f.eval(real(x))? * g.eval(real(x))?;
    Ok(lhs.value.value - (boundary - rhs_integral.value.value))
}

fn by_parts_integrals<T: Scalar>(
    f: &dyn Evaluable<T>,
    g: &dyn Evaluable<T>,
    x: T,
    q: QParam<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<(IntegralParts<T>, IntegralParts<T>)> {
    let f_dg =
        |t: Complex<T>| -> Result<Complex<T>> { Ok(f.eval(t)? * jackson_derivative(g, t, q)?) };
    let gq_df = |t: Complex<T>| -> Result<Complex<T>> {
        Ok(g.eval(t * q.value())? * jackson_derivative(f, t, q)?)
    };
    Ok((
        integral_parts(&f_dg, x, q, cfg)?,
        integral_parts(&gq_df, x, q, cfg)?,
    ))
}

/// Residual tolerance of every entry in [`qtrig_derivative_suite`].
pub const DERIVATIVE_SUITE_TOLERANCE: f64 = 1e-8;

/// Checks the q-trigonometric derivative and antiderivative formulas at one point.
///
/// Reports, at `x != 0`: `D_q sin_q = cos_q`, `D_q cos_q = -sin_q`,
/// `D_q tan_q = 1 + tan_q x tan_q(qx)`; at every `x >= 0`:
/// `int sin_q = 1 - cos_q x`, `int cos_q = sin_q x`,
/// `int (1 + tan_q t tan_q(qt)) = tan_q x`.
pub fn qtrig_derivative_suite<T: Scalar>(
    x: T,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<Vec<IdentityReport>> {
    let sin = QFunction::new(QFunctionKind::SinQ, q, *cfg)?;
    let cos = QFunction::new(QFunctionKind::CosQ, q, *cfg)?;
    let tan = QFunction::new(QFunctionKind::TanQ, q, *cfg)?;
    let quad = QuadratureConfig {
        tail_tol: cfg.abs_tol,
        ..QuadratureConfig::default()
    };
    let z = real(x);
    let one = real(T::one());
    let value = |f: &QFunction<T>, z: Complex<T>| f.eval(z).map(|v| v.value);
    let mut residuals: Vec<(&'static str, Complex<T>)> = Vec::new();

    if x != T::zero() {
        residuals.push((
            "D_q sin_q = cos_q",
            jackson_derivative(&sin, z, q)? - value(&cos, z)?,
        ));
        residuals.push((
            "D_q cos_q = -sin_q",
            jackson_derivative(&cos, z, q)? + value(&sin, z)?,
        ));
        let tan_rhs = one + value(&tan, z)? * value(&tan, z * q.value())?;
        residuals.push((
            "D_q tan_q = 1 + tan_q(x) tan_q(qx)",
            jackson_derivative(&tan, z, q)? - tan_rhs,
        ));
    }
    let int_sin = jackson_integral(&sin, x, q, &quad)?.value;
    residuals.push(("int sin_q = 1 - cos_q", int_sin - (one - value(&cos, z)?)));
    let int_cos = jackson_integral(&cos, x, q, &quad)?.value;
    residuals.push(("int cos_q = sin_q", int_cos - value(&sin, z)?));
    let tan_integrand = |t: Complex<T>| -> Result<Complex<T>> {
        Ok(one + value(&tan, t)? * value(&tan, t * q.value())?)
    };
    let int_tan = jackson_integral(&tan_integrand, x, q, &quad)?.value;
    residuals.push((
        "int (1 + tan_q(t) tan_q(qt)) = tan_q",
        int_tan - value(&tan, z)?,
    ));

    let q64 = q.value().to_f64().unwrap_or(f64::NAN);
    let x64 = x.to_f64().unwrap_or(f64::NAN);
    Ok(residuals
        .into_iter()
        .map(|(id, r)| {
            IdentityReport::single(
                id,
                q64,
                r.norm().to_f64().unwrap_or(f64::NAN),
                vec![[x64, 0.0]],
                DERIVATIVE_SUITE_TOLERANCE,
            )
        })
        .collect())
}
