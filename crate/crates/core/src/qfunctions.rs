//! q-exponentials, q-trigonometric functions and the Daehee constant.
//!
//! `e_q(z) = sum z^n/[n]_q!` converges for `|z| < 1/(1-q)`; `E_q(z) =
//! sum q^(n(n-1)/2) z^n/[n]_q!` is entire. The q-sine and q-cosine are the odd
//! and even parts of `e_q(ix)`, so `e_q(ix) = cos_q x + i sin_q x` holds
//! termwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{QError, Result};
use crate::qcore::{
    pochhammer_infinite_tracked, q_integer, reciprocal_q_factorials, unit_qsum_powers,
    ExactGaussianRows, QParam, QSumPowers,
};
use crate::scalar::{is_finite, real, Scalar};
use crate::series::{evaluate, evaluate_with_powers, EvalConfig, SeriesSpec, ValueWithError};

/// Fraction of the series radius that bounds admissible arguments.
const GUARD: f64 = 0.95;

/// Functions with a direct power-series representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    ExpQ,
    SinQ,
    CosQ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QFunctionKind {
    /// `e_q`
    ExpQ,
    /// `E_q`
    BigExpQ,
    SinQ,
    CosQ,
    TanQ,
    SecQ,
    CscQ,
    CotQ,
}

impl QFunctionKind {
    pub const ALL: [QFunctionKind; 8] = [
        QFunctionKind::ExpQ,
        QFunctionKind::BigExpQ,
        QFunctionKind::SinQ,
        QFunctionKind::CosQ,
        QFunctionKind::TanQ,
        QFunctionKind::SecQ,
        QFunctionKind::CscQ,
        QFunctionKind::CotQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QFunctionKind::ExpQ => "eq",
            QFunctionKind::BigExpQ => "Eq",
            QFunctionKind::SinQ => "sinq",
            QFunctionKind::CosQ => "cosq",
            QFunctionKind::TanQ => "tanq",
            QFunctionKind::SecQ => "secq",
            QFunctionKind::CscQ => "cscq",
            QFunctionKind::CotQ => "cotq",
        }
    }
}

impl fmt::Display for QFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QFunctionKind {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        QFunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| QError::Domain(format!("unknown function {s:?}")))
    }
}

impl From<SeriesKind> for QFunctionKind {
    fn from(kind: SeriesKind) -> Self {
        match kind {
            SeriesKind::ExpQ => QFunctionKind::ExpQ,
            SeriesKind::SinQ => QFunctionKind::SinQ,
            SeriesKind::CosQ => QFunctionKind::CosQ,
        }
    }
}

/// Operation inside a scaled argument `x (1 (+)_q 1)` or `x (1 (-)_q 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QSign {
    Plus,
    Minus,
}

/// Precomputed `1/[n]_q!` for one `q`, shared by all series of that `q`.
#[derive(Clone, Debug)]
struct CoefficientTable<T> {
    q: QParam<T>,
    reciprocal_factorials: Arc<[T]>,
}

impl<T: Scalar> CoefficientTable<T> {
    fn new(q: QParam<T>, len: usize) -> Self {
        CoefficientTable {
            q,
            reciprocal_factorials: reciprocal_q_factorials(q, len).into(),
        }
    }

    fn spec(&self, kind: SeriesKind) -> SeriesSpec<T, impl Fn(usize) -> Complex<T> + '_> {
        let table = &self.reciprocal_factorials;
        SeriesSpec::new(move |n: usize| {
            let r = table[n];
            let c = match kind {
                SeriesKind::ExpQ => r,
                SeriesKind::SinQ if n % 2 == 1 => alternate(r, (n - 1) / 2),
                SeriesKind::CosQ if n.is_multiple_of(2) => alternate(r, n / 2),
                _ => T::zero(),
            };
            real(c)
        })
        .with_radius_hint(self.q.series_radius())
    }

    fn big_exp_spec(&self) -> SeriesSpec<T, impl Fn(usize) -> Complex<T> + '_> {
        let table = &self.reciprocal_factorials;
        let q = self.q.value();
        // q^(n(n-1)/2) via the exponent as a float avoids an O(n) product per term.
        SeriesSpec::new(move |n: usize| {
            let n_t = T::from_usize_lossy(n);
            let weight = q.powf(n_t * (n_t - T::one()) / T::lit(2.0));
            real(weight * table[n])
        })
        .with_radius_hint(T::infinity())
    }

    fn eval(
        &self,
        kind: SeriesKind,
        z: Complex<T>,
        cfg: &EvalConfig<T>,
    ) -> Result<ValueWithError<T>> {
        evaluate(&self.spec(kind), z, cfg)
    }
}

fn alternate<T: Scalar>(v: T, half: usize) -> T {
    if half.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// A q-function with its `q` and evaluation settings fixed.
#[derive(Clone, Debug)]
pub struct QFunction<T> {
    kind: QFunctionKind,
    cfg: EvalConfig<T>,
    table: CoefficientTable<T>,
}

impl<T: Scalar> QFunction<T> {
    pub fn new(kind: QFunctionKind, q: QParam<T>, cfg: EvalConfig<T>) -> Result<Self> {
        cfg.validate()?;
        Ok(QFunction {
            kind,
            cfg,
            table: CoefficientTable::new(q, cfg.max_terms),
        })
    }

    pub fn kind(&self) -> QFunctionKind {
        self.kind
    }

    pub fn q(&self) -> QParam<T> {
        self.table.q
    }

    pub fn config(&self) -> &EvalConfig<T> {
        &self.cfg
    }

    pub fn eval(&self, z: Complex<T>) -> Result<ValueWithError<T>> {
        if !is_finite(z) {
            return Err(QError::NonFinite);
        }
        let cfg = &self.cfg;
        match self.kind {
            QFunctionKind::ExpQ => self.table.eval(SeriesKind::ExpQ, z, cfg),
            QFunctionKind::BigExpQ => evaluate(&self.table.big_exp_spec(), z, cfg),
            QFunctionKind::SinQ => self.table.eval(SeriesKind::SinQ, z, cfg),
            QFunctionKind::CosQ => self.table.eval(SeriesKind::CosQ, z, cfg),
            QFunctionKind::TanQ => {
                let (s, c) = self.sin_cos(z)?;
                quotient(s, c, cfg.pole_tol, "cos_q")
            }
            QFunctionKind::SecQ => {
                let c = self.table.eval(SeriesKind::CosQ, z, cfg)?;
                quotient(
                    ValueWithError::exact(real(T::one())),
                    c,
                    cfg.pole_tol,
                    "cos_q",
                )
            }
            QFunctionKind::CscQ => {
                let s = self.table.eval(SeriesKind::SinQ, z, cfg)?;
                quotient(
                    ValueWithError::exact(real(T::one())),
                    s,
                    cfg.pole_tol,
                    "sin_q",
                )
            }
            QFunctionKind::CotQ => {
                let (s, c) = self.sin_cos(z)?;
                quotient(c, s, cfg.pole_tol, "sin_q")
            }
        }
    }

    fn sin_cos(&self, z: Complex<T>) -> Result<(ValueWithError<T>, ValueWithError<T>)> {
        Ok((
            self.table.eval(SeriesKind::SinQ, z, &self.cfg)?,
            self.table.eval(SeriesKind::CosQ, z, &self.cfg)?,
        ))
    }
}

fn quotient<T: Scalar>(
    num: ValueWithError<T>,
    den: ValueWithError<T>,
    pole_tol: T,
    den_name: &str,
) -> Result<ValueWithError<T>> {
    let d = den.value.norm();
    if d < pole_tol {
        return Err(QError::Pole(format!(
            "|{den_name}| = {d} is below pole_tol"
        )));
    }
    let value = num.value / den.value;
    Ok(ValueWithError {
        value,
        error_estimate: (num.error_estimate + value.norm() * den.error_estimate) / d,
        terms_used: num.terms_used + den.terms_used,
    })
}

fn eval_kind<T: Scalar>(
    kind: QFunctionKind,
    z: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    QFunction::new(kind, q, *cfg)?.eval(z)
}

/// `e_q(z)` by its power series; requires `|z| < 0.95/(1-q)`.
pub fn e_q<T: Scalar>(
    z: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::ExpQ, z, q, cfg)
}

/// `e_q(z) = 1/(z(1-q):q)_inf`, valid away from the poles `z = q^-k/(1-q)`.
pub fn e_q_product<T: Scalar>(
    z: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    let tracked = pochhammer_infinite_tracked(z * q.complement(), q, cfg)?;
    if tracked.min_factor < cfg.abs_tol {
        return Err(QError::Pole(format!(
            "e_q product factor of magnitude {} at z = {z}",
            tracked.min_factor
        )));
    }
    let p = tracked.value;
    let mag = p.value.norm();
    Ok(ValueWithError {
        value: Complex::new(T::one(), T::zero()) / p.value,
        error_estimate: p.error_estimate / (mag * mag),
        terms_used: p.terms_used,
    })
}

/// `E_q(z)` by its (entire) power series.
pub fn big_e_q<T: Scalar>(
    z: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::BigExpQ, z, q, cfg)
}

/// `E_q(z) = (-z(1-q):q)_inf`.
pub fn big_e_q_product<T: Scalar>(
    z: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    crate::qcore::q_pochhammer_infinite(-z * q.complement(), q, cfg)
}

pub fn sin_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::SinQ, x, q, cfg)
}

pub fn cos_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::CosQ, x, q, cfg)
}

pub fn tan_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::TanQ, x, q, cfg)
}

pub fn sec_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::SecQ, x, q, cfg)
}

pub fn csc_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::CscQ, x, q, cfg)
}

pub fn cot_q<T: Scalar>(
    x: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    eval_kind(QFunctionKind::CotQ, x, q, cfg)
}

/// The Daehee constant `e_q(1) = sum 1/[k]_q!`.
pub fn daehee_constant<T: Scalar>(q: QParam<T>, cfg: &EvalConfig<T>) -> Result<ValueWithError<T>> {
    e_q(real(T::one()), q, cfg)
}

/// One term `(1 (+)_q 1/[n]_q)^n` of the sequence converging to the Daehee constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DaeheeSequenceTerm<T> {
    pub n: usize,
    pub value: T,
}

fn daehee_value<T: Scalar>(row: &[crate::qcore::QPolynomial], n: usize, q: QParam<T>) -> T {
    let inv = T::one() / q_integer(n, q);
    let mut scale = T::one();
    let mut sum = T::zero();
    for p in row {
        sum = sum + p.eval(q.value()) * scale;
        scale = scale * inv;
    }
    sum
}

/// `sum_k (n k)_q [n]_q^-k` with exact Gaussian coefficients.
pub fn daehee_sequence_term<T: Scalar>(n: usize, q: QParam<T>) -> Result<DaeheeSequenceTerm<T>> {
    if n == 0 {
        return Err(QError::Index("the Daehee sequence starts at n = 1".into()));
    }
    let row = crate::qcore::q_binomial_row(n);
    Ok(DaeheeSequenceTerm {
        n,
        value: daehee_value(&row, n, q),
    })
}

/// Yields the Daehee sequence for `n = 1, 2, ...`, reusing each exact
/// Gaussian row to build the next.
#[derive(Clone, Debug)]
pub struct DaeheeSequence<T> {
    q: QParam<T>,
    rows: ExactGaussianRows,
    n: usize,
}

impl<T: Scalar> DaeheeSequence<T> {
    pub fn new(q: QParam<T>) -> Self {
        let mut rows = ExactGaussianRows::new();
        rows.next();
        DaeheeSequence { q, rows, n: 0 }
    }
}

impl<T: Scalar> Iterator for DaeheeSequence<T> {
    type Item = DaeheeSequenceTerm<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let row = self.rows.next()?;
        self.n += 1;
        Some(DaeheeSequenceTerm {
            n: self.n,
            value: daehee_value(&row, self.n, self.q),
        })
    }
}

/// Evaluates `kind` at the formal q-sum `x (+)_q y`, i.e. `sum a_n (x (+)_q y)^n`.
///
/// Requires `|x| + |y| < 0.95/(1-q)`, which dominates every power of the q-sum.
pub fn fn_at_qsum<T: Scalar>(
    kind: SeriesKind,
    x: Complex<T>,
    y: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    if !is_finite(x) || !is_finite(y) {
        return Err(QError::NonFinite);
    }
    cfg.validate()?;
    let limit = T::lit(GUARD) * q.series_radius();
    if x.norm() + y.norm() >= limit {
        return Err(QError::Domain(format!(
            "|x| + |y| = {} is not below 0.95/(1-q) = {limit}",
            x.norm() + y.norm()
        )));
    }
    let table = CoefficientTable::new(q, cfg.max_terms);
    let spec = table.spec(kind);
    evaluate_with_powers(&spec, QSumPowers::new(x, y, q), cfg)
}

/// Evaluates `kind` at `x (1 (+)_q 1)` or `x (1 (-)_q 1)`, whose n-th power is
/// `x^n (1 (+-)_q 1)^n`.
pub fn fn_at_scaled_qdiff<T: Scalar>(
    kind: SeriesKind,
    x: Complex<T>,
    q: QParam<T>,
    sign: QSign,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    if !is_finite(x) {
        return Err(QError::NonFinite);
    }
    cfg.validate()?;
    let units = unit_qsum_powers(sign == QSign::Minus, q, cfg.max_terms);
    let scale = units
        .iter()
        .enumerate()
        .skip(1)
        .fold(T::zero(), |acc, (n, u)| {
            acc.max(u.abs().powf(T::one() / T::from_usize_lossy(n)))
        });
    let limit = T::lit(GUARD) * q.series_radius();
    if x.norm() * scale >= limit {
        return Err(QError::Domain(format!(
            "|x| * {scale} is not below 0.95/(1-q) = {limit}"
        )));
    }
    let table = CoefficientTable::new(q, cfg.max_terms);
    let powers = units
        .into_iter()
        .zip(std::iter::successors(Some(real(T::one())), move |&p| {
            Some(p * x)
        }))
        .map(|(u, p)| p * u);
    let spec = table.spec(kind);
    evaluate_with_powers(&spec, powers, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QParam<f64> {
        QParam::new(v).unwrap()
    }

    fn r(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    #[test]
    fn values_at_zero() {
        let qv = q(0.5);
        assert_eq!(e_q(r(0.0), qv, &cfg()).unwrap().value, r(1.0));
        assert_eq!(e_q_product(r(0.0), qv, &cfg()).unwrap().value, r(1.0));
        assert_eq!(big_e_q(r(0.0), qv, &cfg()).unwrap().value, r(1.0));
        assert_eq!(sin_q(r(0.0), qv, &cfg()).unwrap().value, r(0.0));
        assert_eq!(cos_q(r(0.0), qv, &cfg()).unwrap().value, r(1.0));
        assert_eq!(tan_q(r(0.0), qv, &cfg()).unwrap().value, r(0.0));
        assert_eq!(sec_q(r(0.0), qv, &cfg()).unwrap().value, r(1.0));
        assert!(matches!(csc_q(r(0.0), qv, &cfg()), Err(QError::Pole(_))));
        assert!(matches!(cot_q(r(0.0), qv, &cfg()), Err(QError::Pole(_))));
    }

    #[test]
    fn e_q_matches_brute_force_partial_sum() {
        let qv = q(0.5);
        let mut fact = 1.0;
        let mut oracle = 1.0;
        for n in 1..200 {
            fact *= (1.0 - 0.5f64.powi(n)) / 0.5;
            oracle += 1.0 / fact;
        }
        let v = e_q(r(1.0), qv, &cfg()).unwrap();
        assert!((v.value.re - oracle).abs() < 1e-12);
        let d = daehee_constant(qv, &cfg()).unwrap();
        assert_eq!(d, v);
    }

    #[test]
    fn e_q_classical_limit() {
        let v = e_q(r(1.0), q(0.999), &cfg()).unwrap();
        assert!((v.value.re - std::f64::consts::E).abs() < 1e-2);
    }

    #[test]
    fn guard_rejects_near_radius() {
        let qv = q(0.5);
        assert!(matches!(e_q(r(3.0), qv, &cfg()), Err(QError::Domain(_))));
        assert!(matches!(sin_q(r(1.9), qv, &cfg()), Err(QError::Domain(_))));
        assert!(sin_q(r(1.8), qv, &cfg()).is_ok());
        // E_q is entire
        assert!(big_e_q(r(50.0), qv, &cfg()).is_ok());
    }

    #[test]
    fn e_q_product_pole_and_continuation() {
        let qv = q(0.5);
        assert!(matches!(
            e_q_product(r(2.0), qv, &cfg()),
            Err(QError::Pole(_))
        ));
        assert!(matches!(
            e_q_product(r(4.0), qv, &cfg()),
            Err(QError::Pole(_))
        ));
        // continuation beyond the series radius
        assert!(e_q_product(r(3.0), qv, &cfg())
            .unwrap()
            .value
            .re
            .is_finite());
    }

    #[test]
    fn big_e_q_product_matches_series() {
        for &qv in &[0.3, 0.6, 0.9] {
            let z = Complex::new(0.4 / (1.0 - qv), -0.1);
            let s = big_e_q(z, q(qv), &cfg()).unwrap().value;
            let p = big_e_q_product(z, q(qv), &cfg()).unwrap().value;
            assert!((s - p).norm() < 1e-10 * s.norm().max(1.0), "q={qv}");
        }
    }

    #[test]
    fn parity() {
        let qv = q(0.6);
        for &x in &[0.1, 0.7, 1.9] {
            let s = sin_q(r(x), qv, &cfg()).unwrap().value;
            let sm = sin_q(r(-x), qv, &cfg()).unwrap().value;
            let c = cos_q(r(x), qv, &cfg()).unwrap().value;
            let cm = cos_q(r(-x), qv, &cfg()).unwrap().value;
            assert_eq!(s, -sm);
            assert_eq!(c, cm);
        }
    }

    #[test]
    fn function_names_round_trip() {
        for k in QFunctionKind::ALL {
            assert_eq!(k.name().parse::<QFunctionKind>().unwrap(), k);
        }
        assert!("exp".parse::<QFunctionKind>().is_err());
    }

    #[test]
    fn daehee_sequence_first_term_is_two() {
        for &qv in &[0.2, 0.5, 0.95] {
            let t = daehee_sequence_term(1, q(qv)).unwrap();
            assert!((t.value - 2.0).abs() < 1e-15);
        }
        assert!(daehee_sequence_term(0, q(0.5)).is_err());
        let streamed: Vec<_> = DaeheeSequence::new(q(0.7)).take(12).collect();
        let direct = daehee_sequence_term(12, q(0.7)).unwrap();
        assert_eq!(streamed[11], direct);
    }

    #[test]
    fn qsum_with_zero_second_argument() {
        let qv = q(0.5);
        let x = r(0.7);
        for kind in [SeriesKind::ExpQ, SeriesKind::SinQ, SeriesKind::CosQ] {
            let a = fn_at_qsum(kind, x, r(0.0), qv, &cfg()).unwrap().value;
            let b = eval_kind(kind.into(), x, qv, &cfg()).unwrap().value;
            assert!((a - b).norm() < 1e-15, "{kind:?}");
        }
        assert!(matches!(
            fn_at_qsum(SeriesKind::ExpQ, r(1.0), r(0.95), qv, &cfg()),
            Err(QError::Domain(_))
        ));
    }

    #[test]
    fn scaled_argument_at_zero() {
        let qv = q(0.5);
        let v = fn_at_scaled_qdiff(SeriesKind::CosQ, r(0.0), qv, QSign::Minus, &cfg()).unwrap();
        assert_eq!(v.value, r(1.0));
        assert!(matches!(
            fn_at_scaled_qdiff(SeriesKind::CosQ, r(0.95), qv, QSign::Plus, &cfg()),
            Err(QError::Domain(_))
        ));
    }

    #[test]
    fn generic_over_f32() {
        let q32 = QParam::new(0.5f32).unwrap();
        let cfg32 = EvalConfig::<f32>::default();
        let c32 = cos_q(Complex::new(0.7f32, 0.0), q32, &cfg32)
            .unwrap()
            .value
            .re;
        let c64 = cos_q(r(0.7), q(0.5), &cfg()).unwrap().value.re;
        assert!((c32 as f64 - c64).abs() < 1e-6);
    }
}
