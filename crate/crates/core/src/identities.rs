//! Seeded numerical sweeps over every q-identity, producing [`IdentityReport`]s.
//!
//! Each `*_residual` function checks one identity at one point and is public so
//! callers can drive their own sampling. The sweeps draw samples sequentially
//! from a ChaCha8 stream (so a seed fixes every input), evaluate them in
//! parallel and fold the results in input order.

use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QError, Result};
use crate::qcalculus::{
    fundamental_theorem_check, fundamental_theorem_uncorrected_residual,
    integration_by_parts_residual, integration_by_parts_uncorrected_residual, jackson_derivative,
    jackson_integral, product_rule_residual, quotient_rule_residual, total, Evaluable,
    QuadratureConfig,
};
use crate::qcore::{q_integer, QParam};
use crate::qfunctions::{
    big_e_q, daehee_constant, daehee_sequence_term, e_q, e_q_product, fn_at_qsum,
    fn_at_scaled_qdiff, QFunction, QFunctionKind, QSign, SeriesKind,
};
use crate::report::IdentityReport;
use crate::series::EvalConfig;

type C = Complex<f64>;

const I: C = Complex { re: 0.0, im: 1.0 };
const ONE: C = Complex { re: 1.0, im: 0.0 };

/// Largest fraction of pole-skipped samples a sweep tolerates.
pub const MAX_POLE_SKIP_FRACTION: f64 = 0.05;

pub mod tolerance {
    pub const DAEHEE_FORMULA: f64 = 1e-10;
    pub const EXPONENTIAL_PAIR: f64 = 1e-10;
    pub const ADDITION: f64 = 1e-8;
    pub const PYTHAGOREAN: f64 = 1e-8;
    pub const RECIPROCAL: f64 = 1e-10;
    pub const DERIVATIVE_MONOMIAL: f64 = 1e-12;
    pub const DERIVATIVE_SERIES: f64 = 1e-9;
    pub const INTEGRAL_MONOMIAL: f64 = 1e-10;
    pub const INTEGRAL_TRIG: f64 = 1e-8;
    pub const CALCULUS_RULES: f64 = 1e-9;
    pub const DAEHEE_LIMIT: f64 = 1e-3;
    pub const ERRATUM_LEMMA: f64 = 1e-9;
    pub const ERRATUM_COROLLARY: f64 = 1e-8;
}

fn real(x: f64) -> C {
    Complex::new(x, 0.0)
}

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

/// `|a - b| / (1 + |a|)`.
fn scaled(a: C, b: C) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

fn value(f: &QFunction<f64>, z: C) -> Result<C> {
    f.eval(z).map(|v| v.value)
}

/// Scaled residual of `e_q(ix) = cos_q x + i sin_q x`.
pub fn daehee_formula_residual(x: f64, q: QParam<f64>, cfg: &EvalConfig<f64>) -> Result<f64> {
    let lhs = e_q(I * x, q, cfg)?.value;
    let rhs = crate::qfunctions::cos_q(real(x), q, cfg)?.value
        + I * crate::qfunctions::sin_q(real(x), q, cfg)?.value;
    Ok(scaled(lhs, rhs))
}

/// `|e_q(z) E_q(-z) - 1|`.
pub fn exponential_pair_residual(z: C, q: QParam<f64>, cfg: &EvalConfig<f64>) -> Result<f64> {
    Ok((e_q(z, q, cfg)?.value * big_e_q(-z, q, cfg)?.value - ONE).norm())
}

/// Scaled difference between the series and product forms of `e_q(z)`.
pub fn exponential_forms_residual(z: C, q: QParam<f64>, cfg: &EvalConfig<f64>) -> Result<f64> {
    Ok(scaled(e_q(z, q, cfg)?.value, e_q_product(z, q, cfg)?.value))
}

/// `|d_n - e_q(1)|` where `d_n` is the n-th Daehee sequence term.
pub fn daehee_gap(n: usize, q: QParam<f64>, cfg: &EvalConfig<f64>) -> Result<f64> {
    Ok((daehee_sequence_term(n, q)?.value - daehee_constant(q, cfg)?.value.re).abs())
}

/// Which q-sum identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdditionIdentity {
    /// `e_q(x) e_q(y) = e_q(x (+)_q y)`
    Exp,
    /// `cos_q(x (+)_q y) = cos_q x cos_q y - sin_q x sin_q y`
    Cos,
    /// `sin_q(x (+)_q y) = sin_q x cos_q y + cos_q x sin_q y`
    Sin,
}

pub fn addition_residual(
    which: AdditionIdentity,
    x: f64,
    y: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
) -> Result<f64> {
    let (x, y) = (real(x), real(y));
    let e = |z| e_q(z, q, cfg).map(|v| v.value);
    let s = |z| crate::qfunctions::sin_q(z, q, cfg).map(|v| v.value);
    let c = |z| crate::qfunctions::cos_q(z, q, cfg).map(|v| v.value);
    let (kind, rhs) = match which {
        AdditionIdentity::Exp => (SeriesKind::ExpQ, e(x)? * e(y)?),
        AdditionIdentity::Cos => (SeriesKind::CosQ, c(x)? * c(y)? - s(x)? * s(y)?),
        AdditionIdentity::Sin => (SeriesKind::SinQ, s(x)? * c(y)? + c(x)? * s(y)?),
    };
    Ok((fn_at_qsum(kind, x, y, q, cfg)?.value - rhs).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PythagoreanIdentity {
    /// `cos_q^2 x + sin_q^2 x = cos_q(x (1 (-)_q 1))`
    SumOfSquares,
    /// `cos_q^2 x - sin_q^2 x = cos_q(x (1 (+)_q 1))`
    DifferenceOfSquares,
    /// `2 sin_q x cos_q x = sin_q(x (1 (+)_q 1))`
    DoubleSine,
    /// `1 + tan_q^2 x = cos_q(x (1 (-)_q 1)) sec_q^2 x`, scaled by `1 + |lhs|`
    Tangent,
    /// `1 + cot_q^2 x = cos_q(x (1 (-)_q 1)) csc_q^2 x`, scaled by `1 + |lhs|`
    Cotangent,
    /// `tan_q x cot_q x = 1`
    TanCot,
    /// `sec_q x cos_q x = 1`
    SecCos,
}

pub fn pythagorean_residual(
    which: PythagoreanIdentity,
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
) -> Result<f64> {
    use crate::qfunctions::{cos_q, cot_q, csc_q, sec_q, sin_q, tan_q};
    let z = real(x);
    let s = || sin_q(z, q, cfg).map(|v| v.value);
    let c = || cos_q(z, q, cfg).map(|v| v.value);
    let scaled_arg = |kind, sign| fn_at_scaled_qdiff(kind, z, q, sign, cfg).map(|v| v.value);
    Ok(match which {
        PythagoreanIdentity::SumOfSquares => {
            let (s, c) = (s()?, c()?);
            (c * c + s * s - scaled_arg(SeriesKind::CosQ, QSign::Minus)?).norm()
        }
        PythagoreanIdentity::DifferenceOfSquares => {
            let (s, c) = (s()?, c()?);
            (c * c - s * s - scaled_arg(SeriesKind::CosQ, QSign::Plus)?).norm()
        }
        PythagoreanIdentity::DoubleSine => {
            (s()? * c()? * 2.0 - scaled_arg(SeriesKind::SinQ, QSign::Plus)?).norm()
        }
        PythagoreanIdentity::Tangent => {
            let t = tan_q(z, q, cfg)?.value;
            let sec = sec_q(z, q, cfg)?.value;
            scaled(
                ONE + t * t,
                scaled_arg(SeriesKind::CosQ, QSign::Minus)? * sec * sec,
            )
        }
        PythagoreanIdentity::Cotangent => {
            let t = cot_q(z, q, cfg)?.value;
            let csc = csc_q(z, q, cfg)?.value;
            scaled(
                ONE + t * t,
                scaled_arg(SeriesKind::CosQ, QSign::Minus)? * csc * csc,
            )
        }
        PythagoreanIdentity::TanCot => {
            (tan_q(z, q, cfg)?.value * cot_q(z, q, cfg)?.value - ONE).norm()
        }
        PythagoreanIdentity::SecCos => (sec_q(z, q, cfg)?.value * c()? - ONE).norm(),
    })
}

/// `|sin_q(-x) + sin_q x| + |cos_q(-x) - cos_q x|`.
pub fn parity_residual(x: f64, q: QParam<f64>, cfg: &EvalConfig<f64>) -> Result<f64> {
    use crate::qfunctions::{cos_q, sin_q};
    let (p, m) = (real(x), real(-x));
    Ok((sin_q(m, q, cfg)?.value + sin_q(p, q, cfg)?.value).norm()
        + (cos_q(m, q, cfg)?.value - cos_q(p, q, cfg)?.value).norm())
}

/// Relative residual of `D_q t^n = [n]_q t^(n-1)` (absolute for `n = 0`).
pub fn monomial_derivative_residual(n: usize, x: f64, q: QParam<f64>) -> Result<f64> {
    let f = total(move |z: C| z.powu(n as u32));
    let d = jackson_derivative(&f, real(x), q)?;
    if n == 0 {
        return Ok(d.norm());
    }
    let expected = q_integer(n, q) * x.powi(n as i32 - 1);
    Ok((d.re - expected).abs().max(d.im.abs()) / expected.abs())
}

/// `|D_q e_q(lambda x) - lambda e_q(lambda x)|`.
pub fn exp_derivative_residual(
    lambda: f64,
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
) -> Result<f64> {
    let f = move |z: C| e_q(z * lambda, q, cfg).map(|v| v.value);
    let d = jackson_derivative(&f, real(x), q)?;
    Ok((d - f(real(x))? * lambda).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigDerivative {
    Sin,
    Cos,
    Tan,
}

/// Residuals of `D_q sin_q = cos_q`, `D_q cos_q = -sin_q` and
/// `D_q tan_q = 1 + tan_q x tan_q(qx)`.
pub fn trig_derivative_residual(
    which: TrigDerivative,
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
) -> Result<f64> {
    let sin = QFunction::new(QFunctionKind::SinQ, q, *cfg)?;
    let cos = QFunction::new(QFunctionKind::CosQ, q, *cfg)?;
    let z = real(x);
    Ok(match which {
        TrigDerivative::Sin => (jackson_derivative(&sin, z, q)? - value(&cos, z)?).norm(),
        TrigDerivative::Cos => (jackson_derivative(&cos, z, q)? + value(&sin, z)?).norm(),
        TrigDerivative::Tan => {
            let tan = QFunction::new(QFunctionKind::TanQ, q, *cfg)?;
            let rhs = ONE + value(&tan, z)? * value(&tan, z * q.value())?;
            (jackson_derivative(&tan, z, q)? - rhs).norm()
        }
    })
}

/// `|int_0^x t^n d_q t - x^(n+1)/[n+1]_q|`.
pub fn monomial_integral_residual(
    n: usize,
    x: f64,
    q: QParam<f64>,
    quad: &QuadratureConfig<f64>,
) -> Result<f64> {
    let f = total(move |z: C| z.powu(n as u32));
    let v = jackson_integral(&f, x, q, quad)?.value;
    Ok((v - real(x.powi(n as i32 + 1) / q_integer(n + 1, q))).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigIntegral {
    /// `int sin_q = 1 - cos_q x`
    Sin,
    /// `int cos_q = sin_q x`
    Cos,
    /// `int (1 + tan_q t tan_q(qt)) d_q t = tan_q x`
    Tan,
}

pub fn trig_integral_residual(
    which: TrigIntegral,
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
    quad: &QuadratureConfig<f64>,
) -> Result<f64> {
    let sin = QFunction::new(QFunctionKind::SinQ, q, *cfg)?;
    let cos = QFunction::new(QFunctionKind::CosQ, q, *cfg)?;
    let z = real(x);
    Ok(match which {
        TrigIntegral::Sin => {
            (jackson_integral(&sin, x, q, quad)?.value - (ONE - value(&cos, z)?)).norm()
        }
        TrigIntegral::Cos => (jackson_integral(&cos, x, q, quad)?.value - value(&sin, z)?).norm(),
        TrigIntegral::Tan => {
            let tan = QFunction::new(QFunctionKind::TanQ, q, *cfg)?;
            let integrand =
                |t: C| -> Result<C> { Ok(ONE + value(&tan, t)? * value(&tan, t * q.value())?) };
            (jackson_integral(&integrand, x, q, quad)?.value - value(&tan, z)?).norm()
        }
    })
}

/// `int_0^x cos_q t d_q t + sin_q x`: the antiderivative with the wrong sign.
/// Equals `2 sin_q x`.
pub fn uncorrected_cos_integral_residual(
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
    quad: &QuadratureConfig<f64>,
) -> Result<C> {
    let cos = QFunction::new(QFunctionKind::CosQ, q, *cfg)?;
    let sin = QFunction::new(QFunctionKind::SinQ, q, *cfg)?;
    Ok(jackson_integral(&cos, x, q, quad)?.value + value(&sin, real(x))?)
}

/// `int_0^x sin_q t d_q t + cos_q x`: the antiderivative without the constant.
/// Equals 1.
pub fn uncorrected_sin_integral_residual(
    x: f64,
    q: QParam<f64>,
    cfg: &EvalConfig<f64>,
    quad: &QuadratureConfig<f64>,
) -> Result<C> {
    let cos = QFunction::new(QFunctionKind::CosQ, q, *cfg)?;
    let sin = QFunction::new(QFunctionKind::SinQ, q, *cfg)?;
    Ok(jackson_integral(&sin, x, q, quad)?.value + value(&cos, real(x))?)
}

/// Identity groups selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentitySet {
    All,
    Daehee,
    Addition,
    Pythagorean,
    Calculus,
    Errata,
}

impl FromStr for IdentitySet {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => IdentitySet::All,
            "daehee" => IdentitySet::Daehee,
            "addition" => IdentitySet::Addition,
            "pythagorean" => IdentitySet::Pythagorean,
            "calculus" => IdentitySet::Calculus,
            "errata" => IdentitySet::Errata,
            other => return Err(QError::Domain(format!("unknown identity set {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub q: f64,
    pub seed: u64,
    /// Base sampling radius; defaults to half the series radius, `0.5/(1-q)`.
    pub radius: f64,
    pub random_samples: usize,
    pub grid_steps: usize,
    pub eval: EvalConfig<f64>,
    pub quad: QuadratureConfig<f64>,
}

impl SweepConfig {
    pub fn new(q: f64, seed: u64) -> Self {
        SweepConfig {
            q,
            seed,
            radius: 0.5 / (1.0 - q),
            random_samples: 100,
            grid_steps: 20,
            eval: EvalConfig::default(),
            quad: QuadratureConfig::default(),
        }
    }
}

struct Sweeper {
    cfg: SweepConfig,
    q: QParam<f64>,
}

impl Sweeper {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn uniform(&self, salt: u64, lo: f64, hi: f64) -> Vec<f64> {
        let mut rng = self.rng(salt);
        (0..self.cfg.random_samples.max(1))
            .map(|_| rng.gen_range(lo..=hi))
            .collect()
    }

    fn disc(&self, salt: u64, radius: f64) -> Vec<C> {
        let mut rng = self.rng(salt);
        (0..self.cfg.random_samples.max(1))
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                C::from_polar(r, theta)
            })
            .collect()
    }

    /// Evaluates `residual` at each input in parallel; folds in input order.
    /// Pole errors are skipped when `skip_poles` is set and reported via a
    /// companion `<id>/pole-skips` entry.
    fn sweep<In, F>(
        &self,
        id: &str,
        tolerance: f64,
        inputs: &[In],
        describe: fn(&In) -> Vec<[f64; 2]>,
        skip_poles: bool,
        residual: F,
    ) -> Vec<IdentityReport>
    where
        In: Sync,
        F: Fn(&In) -> Result<f64> + Sync,
    {
        let results: Vec<Result<f64>> = inputs.par_iter().map(&residual).collect();
        let mut skipped = 0usize;
        let samples: Vec<(f64, Vec<[f64; 2]>)> = inputs
            .iter()
            .zip(results)
            .filter_map(|(input, r)| match r {
                Ok(v) => Some((v, describe(input))),
                Err(QError::Pole(_)) if skip_poles => {
                    skipped += 1;
                    None
                }
                Err(_) => Some((f64::INFINITY, describe(input))),
            })
            .collect();
        let mut out = Vec::new();
        match IdentityReport::from_samples(id, self.cfg.q, tolerance, samples) {
            Some(r) => out.push(r),
            None => out.push(IdentityReport::single(
                id,
                self.cfg.q,
                f64::INFINITY,
                vec![],
                tolerance,
            )),
        }
        if skip_poles {
            let fraction = skipped as f64 / inputs.len().max(1) as f64;
            out.push(IdentityReport::single(
                &format!("{id}/pole-skips"),
                self.cfg.q,
                fraction,
                vec![],
                MAX_POLE_SKIP_FRACTION,
            ));
        }
        out
    }

    fn daehee(&self) -> Vec<IdentityReport> {
        let (q, e) = (self.q, &self.cfg.eval);
        let radius = self.cfg.radius;
        let xs = self.uniform(1, -radius, radius);
        let d1: fn(&f64) -> Vec<[f64; 2]> = |x| vec![[*x, 0.0]];
        let dz: fn(&C) -> Vec<[f64; 2]> = |z| vec![pair(*z)];
        let mut out = Vec::new();
        out.extend(self.sweep(
            "daehee-formula",
            tolerance::DAEHEE_FORMULA,
            &xs,
            d1,
            false,
            |&x| daehee_formula_residual(x, q, e),
        ));
        out.extend(self.sweep(
            "cos-from-exponentials",
            tolerance::DAEHEE_FORMULA,
            &xs,
            d1,
            false,
            |&x| {
                let c = crate::qfunctions::cos_q(real(x), q, e)?.value;
                Ok(scaled(
                    c,
                    (e_q(I * x, q, e)?.value + e_q(-I * x, q, e)?.value) / 2.0,
                ))
            },
        ));
        out.extend(self.sweep(
            "sin-from-exponentials",
            tolerance::DAEHEE_FORMULA,
            &xs,
            d1,
            false,
            |&x| {
                let s = crate::qfunctions::sin_q(real(x), q, e)?.value;
                Ok(scaled(
                    s,
                    (e_q(I * x, q, e)?.value - e_q(-I * x, q, e)?.value) / (I * 2.0),
                ))
            },
        ));
        out.extend(self.sweep("parity", 0.0, &xs, d1, false, |&x| parity_residual(x, q, e)));
        let zs = self.disc(2, radius);
        out.extend(self.sweep(
            "exp-pair",
            tolerance::EXPONENTIAL_PAIR,
            &zs,
            dz,
            false,
            |&z| exponential_pair_residual(z, q, e),
        ));
        out.extend(self.sweep(
            "exp-series-vs-product",
            tolerance::EXPONENTIAL_PAIR,
            &zs,
            dz,
            false,
            |&z| exponential_forms_residual(z, q, e),
        ));
        let limit = daehee_gap(50, q, e).unwrap_or(f64::INFINITY);
        out.push(IdentityReport::single(
            "daehee-limit",
            self.cfg.q,
            limit,
            vec![[50.0, 0.0]],
            tolerance::DAEHEE_LIMIT,
        ));
        let trend = daehee_gap(10, q, e)
            .map(|g10| (limit - g10).max(0.0))
            .unwrap_or(f64::INFINITY);
        out.push(IdentityReport::single(
            "daehee-limit-trend",
            self.cfg.q,
            trend,
            vec![[10.0, 0.0], [50.0, 0.0]],
            0.0,
        ));
        out
    }

    fn grid(&self) -> Vec<(f64, f64)> {
        let steps = self.cfg.grid_steps.max(1);
        let half = self.cfg.radius / 2.0;
        let point = |i: usize| {
            if steps == 1 {
                0.0
            } else {
                -half + self.cfg.radius * i as f64 / (steps - 1) as f64
            }
        };
        (0..steps)
            .flat_map(|i| (0..steps).map(move |j| (i, j)))
            .map(|(i, j)| (point(i), point(j)))
            .collect()
    }

    fn addition(&self) -> Vec<IdentityReport> {
        let (q, e) = (self.q, &self.cfg.eval);
        let grid = self.grid();
        let d: fn(&(f64, f64)) -> Vec<[f64; 2]> = |(x, y)| vec![[*x, 0.0], [*y, 0.0]];
        [
            ("exp-qsum", AdditionIdentity::Exp),
            ("cos-qsum", AdditionIdentity::Cos),
            ("sin-qsum", AdditionIdentity::Sin),
        ]
        .into_iter()
        .flat_map(|(id, which)| {
            self.sweep(id, tolerance::ADDITION, &grid, d, false, |&(x, y)| {
                addition_residual(which, x, y, q, e)
            })
        })
        .collect()
    }

    fn pythagorean(&self) -> Vec<IdentityReport> {
        let (q, e) = (self.q, &self.cfg.eval);
        let half = self.cfg.radius / 2.0;
        let xs = self.uniform(3, -half, half);
        let d1: fn(&f64) -> Vec<[f64; 2]> = |x| vec![[*x, 0.0]];
        use PythagoreanIdentity as P;
        [
            (
                "cos2-plus-sin2",
                P::SumOfSquares,
                tolerance::PYTHAGOREAN,
                false,
            ),
            (
                "cos2-minus-sin2",
                P::DifferenceOfSquares,
                tolerance::PYTHAGOREAN,
                false,
            ),
            ("double-sin", P::DoubleSine, tolerance::PYTHAGOREAN, false),
            ("tan-pythagorean", P::Tangent, tolerance::PYTHAGOREAN, true),
            (
                "cot-pythagorean",
                P::Cotangent,
                tolerance::PYTHAGOREAN,
                true,
            ),
            ("tan-cot-reciprocal", P::TanCot, tolerance::RECIPROCAL, true),
            ("sec-cos-reciprocal", P::SecCos, tolerance::RECIPROCAL, true),
        ]
        .into_iter()
        .flat_map(|(id, which, tol, poles)| {
            self.sweep(id, tol, &xs, d1, poles, |&x| {
                pythagorean_residual(which, x, q, e)
            })
        })
        .collect()
    }

    fn calculus(&self) -> Vec<IdentityReport> {
        let (q, e, quad) = (self.q, &self.cfg.eval, &self.cfg.quad);
        let half = self.cfg.radius / 2.0;
        let d1: fn(&f64) -> Vec<[f64; 2]> = |x| vec![[*x, 0.0]];
        let dn: fn(&(usize, f64)) -> Vec<[f64; 2]> = |(n, x)| vec![[*n as f64, 0.0], [*x, 0.0]];
        let mut out = Vec::new();

        let monomial_points: Vec<(usize, f64)> = (0..=10)
            .flat_map(|n| [0.2, 0.7, 1.3].map(|x| (n, x)))
            .collect();
        out.extend(self.sweep(
            "derivative-monomial",
            tolerance::DERIVATIVE_MONOMIAL,
            &monomial_points,
            dn,
            false,
            |&(n, x)| monomial_derivative_residual(n, x, q),
        ));

        let xs = self.uniform(4, half / 5.0, half);
        let mut rng = self.rng(5);
        let lambdas: Vec<(f64, f64)> = xs.iter().map(|&x| (rng.gen_range(-1.0..=1.0), x)).collect();
        let dl: fn(&(f64, f64)) -> Vec<[f64; 2]> = |(l, x)| vec![[*l, 0.0], [*x, 0.0]];
        out.extend(self.sweep(
            "derivative-exp",
            tolerance::DERIVATIVE_SERIES,
            &lambdas,
            dl,
            false,
            |&(l, x)| exp_derivative_residual(l, x, q, e),
        ));
        for (id, which, poles) in [
            ("derivative-sin", TrigDerivative::Sin, false),
            ("derivative-cos", TrigDerivative::Cos, false),
            ("derivative-tan", TrigDerivative::Tan, true),
        ] {
            out.extend(
                self.sweep(id, tolerance::DERIVATIVE_SERIES, &xs, d1, poles, |&x| {
                    trig_derivative_residual(which, x, q, e)
                }),
            );
        }

        let integral_points: Vec<(usize, f64)> = (0..=8)
            .flat_map(|n| [0.25, 1.0, 1.75].map(|x| (n, x)))
            .collect();
        out.extend(self.sweep(
            "integral-monomial",
            tolerance::INTEGRAL_MONOMIAL,
            &integral_points,
            dn,
            false,
            |&(n, x)| monomial_integral_residual(n, x, q, quad),
        ));
        let ixs = self.uniform(6, 0.0, half);
        for (id, which, poles) in [
            ("integral-sin", TrigIntegral::Sin, false),
            ("integral-cos", TrigIntegral::Cos, false),
            ("integral-tan", TrigIntegral::Tan, true),
        ] {
            out.extend(
                self.sweep(id, tolerance::INTEGRAL_TRIG, &ixs, d1, poles, |&x| {
                    trig_integral_residual(which, x, q, e, quad)
                }),
            );
        }

        let sin = QFunction::new(QFunctionKind::SinQ, q, *e);
        let cos = QFunction::new(QFunctionKind::CosQ, q, *e);
        let (Ok(sin), Ok(cos)) = (sin, cos) else {
            out.push(IdentityReport::single(
                "calculus-config",
                self.cfg.q,
                f64::INFINITY,
                vec![],
                0.0,
            ));
            return out;
        };
        let square = total(|z: C| z * z);
        let shifted_square = total(|z: C| z * z + ONE);
        let cube = total(|z: C| z * z * z);
        let exp_half = move |z: C| e_q(z * 0.5, q, e).map(|v| v.value);
        let basket: [&dyn Evaluable<f64>; 5] = [&square, &shifted_square, &exp_half, &sin, &cos];
        out.extend(self.sweep(
            "fundamental-theorem",
            tolerance::CALCULUS_RULES,
            &ixs,
            d1,
            false,
            |&x| {
                basket.iter().try_fold(0.0f64, |acc, f| {
                    Ok(acc.max(fundamental_theorem_check(*f, x, q, quad)?.value.norm()))
                })
            },
        ));
        let pairs: [(&dyn Evaluable<f64>, &dyn Evaluable<f64>); 2] =
            [(&square, &cube), (&sin, &cos)];
        out.extend(self.sweep(
            "product-rule",
            tolerance::CALCULUS_RULES,
            &xs,
            d1,
            false,
            |&x| {
                pairs.iter().try_fold(0.0f64, |acc, (f, g)| {
                    Ok(acc.max(product_rule_residual(*f, *g, real(x), q)?.norm()))
                })
            },
        ));
        out.extend(self.sweep(
            "quotient-rule",
            tolerance::CALCULUS_RULES,
            &xs,
            d1,
            true,
            |&x| {
                pairs.iter().try_fold(0.0f64, |acc, (f, g)| {
                    Ok(acc.max(quotient_rule_residual(*f, *g, real(x), q, e.pole_tol)?.norm()))
                })
            },
        ));
        let one_plus = total(|z: C| ONE + z);
        let by_parts: [(&dyn Evaluable<f64>, &dyn Evaluable<f64>); 2] =
            [(&one_plus, &one_plus), (&cos, &sin)];
        out.extend(self.sweep(
            "integration-by-parts",
            tolerance::CALCULUS_RULES,
            &ixs,
            d1,
            false,
            |&x| {
                by_parts.iter().try_fold(0.0f64, |acc, (f, g)| {
                    Ok(acc.max(
                        integration_by_parts_residual(*f, *g, x, q, quad)?
                            .value
                            .norm(),
                    ))
                })
            },
        ));
        out
    }

    /// Each entry passes when the uncorrected statement is confirmed false by the
    /// predicted margin.
    fn errata(&self) -> Vec<IdentityReport> {
        let (q, e, quad) = (self.q, &self.cfg.eval, &self.cfg.quad);
        let qv = self.cfg.q;
        let x = 0.4;
        let shifted_square = total(|z: C| z * z + ONE);
        let one_plus = total(|z: C| ONE + z);
        let lemma = fundamental_theorem_uncorrected_residual(&shifted_square, x, q, quad)
            .map(|r| (r.norm() - 1.0).abs());
        let sin_x = crate::qfunctions::sin_q(real(x), q, e).map(|v| v.value.norm());
        let cos_form = uncorrected_cos_integral_residual(x, q, e, quad)
            .and_then(|r| Ok((r.norm() - 2.0 * sin_x.clone()?).abs()));
        let sin_form =
            uncorrected_sin_integral_residual(x, q, e, quad).map(|r| (r.norm() - 1.0).abs());
        let by_parts =
            integration_by_parts_uncorrected_residual(&one_plus, &one_plus, 0.5, q, quad)
                .map(|r| (r.norm() - 1.0).abs());
        let finite = |r: Result<f64>| r.unwrap_or(f64::INFINITY);
        vec![
            IdentityReport::single(
                "errata/fundamental-theorem-without-f0",
                qv,
                finite(lemma),
                vec![[x, 0.0]],
                tolerance::ERRATUM_LEMMA,
            ),
            IdentityReport::single(
                "errata/cos-integral-negative-sin",
                qv,
                finite(cos_form),
                vec![[x, 0.0]],
                tolerance::ERRATUM_COROLLARY,
            ),
            IdentityReport::single(
                "errata/sin-integral-negative-cos",
                qv,
                finite(sin_form),
                vec![[x, 0.0]],
                tolerance::ERRATUM_COROLLARY,
            ),
            IdentityReport::single(
                "errata/by-parts-without-f0g0",
                qv,
                finite(by_parts),
                vec![[0.5, 0.0]],
                tolerance::ERRATUM_LEMMA,
            ),
        ]
    }
}

/// Runs one identity group. Fails only on an invalid `q` or configuration;
/// evaluation failures show up as failing reports.
pub fn run(set: IdentitySet, cfg: &SweepConfig) -> Result<Vec<IdentityReport>> {
    cfg.eval.validate()?;
    cfg.quad.validate()?;
    if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
        return Err(QError::Config(format!(
            "sweep radius {} must be positive",
            cfg.radius
        )));
    }
    let sweeper = Sweeper {
        cfg: *cfg,
        q: QParam::new(cfg.q)?,
    };
    Ok(match set {
        IdentitySet::Daehee => sweeper.daehee(),
        IdentitySet::Addition => sweeper.addition(),
        IdentitySet::Pythagorean => sweeper.pythagorean(),
        IdentitySet::Calculus => sweeper.calculus(),
        IdentitySet::Errata => sweeper.errata(),
        IdentitySet::All => {
            let mut all = sweeper.daehee();
            all.extend(sweeper.addition());
            all.extend(sweeper.pythagorean());
            all.extend(sweeper.calculus());
            all.extend(sweeper.errata());
            all
        }
    })
}
