//! q-combinatorics: q-integers, q-factorials, q-shifted factorials, Gaussian
//! binomial coefficients and the q-addition power expansion.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QError, Result};
use crate::scalar::{is_finite, Scalar};
use crate::series::{EvalConfig, ValueWithError};

/// Deformation parameter, restricted to the real interval `0 < q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct QParam<T>(T);

impl<T: Scalar> QParam<T> {
    /// Rejects `q` outside `(0, 1)` and `q` within `1e-12` of 1.
    pub fn new(q: T) -> Result<Self> {
        let ok = q > T::zero() && q < T::one() && T::one() - q > T::lit(1e-12);
        if ok {
            Ok(QParam(q))
        } else {
            Err(QError::InvalidQ(q.to_f64().unwrap_or(f64::NAN)))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// `1 - q`, always positive.
    #[inline]
    pub fn complement(self) -> T {
        T::one() - self.0
    }

    /// Radius of convergence `1/(1-q)` of `e_q` and the q-trigonometric series.
    pub fn series_radius(self) -> T {
        T::one() / self.complement()
    }
}

/// Generalized q-number `(1 - q^y)/(1 - q)` for real `y`.
///
/// Evaluated as `expm1(y ln q) / expm1(ln q)`, which keeps full relative
/// precision when `q` is close to 1.
pub fn q_number<T: Scalar>(y: T, q: QParam<T>) -> T {
    if y == T::zero() {
        return T::zero();
    }
    let log_q = (q.value() - T::one()).ln_1p();
    (y * log_q).exp_m1() / log_q.exp_m1()
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_integer<T: Scalar>(n: usize, q: QParam<T>) -> T {
    q_number(T::from_usize_lossy(n), q)
}

/// `[n]_q! = [n]_q [n-1]_q ... [1]_q`, with `[0]_q! = 1`.
pub fn q_factorial<T: Scalar>(n: usize, q: QParam<T>) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * q_integer(k, q))
}

/// `1/[n]_q!` for `n = 0..len`, built by successive division.
pub fn reciprocal_q_factorials<T: Scalar>(q: QParam<T>, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    let mut acc = T::one();
    for n in 0..len {
        if n > 0 {
            acc = acc / q_integer(n, q);
        }
        out.push(acc);
    }
    out
}

/// `(a:q)_k = (1-a)(1-aq)...(1-aq^(k-1))`.
pub fn q_shifted_factorial<T: Scalar>(a: Complex<T>, q: QParam<T>, k: usize) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let mut prod = one;
    let mut power = T::one();
    for _ in 0..k {
        prod = prod * (one - a * power);
        power = power * q.value();
    }
    prod
}

pub(crate) struct TrackedProduct<T> {
    pub value: ValueWithError<T>,
    /// Smallest factor magnitude `|1 - a q^j|` seen in the included factors.
    pub min_factor: T,
}

pub(crate) fn pochhammer_infinite_tracked<T: Scalar>(
    a: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<TrackedProduct<T>> {
    if !is_finite(a) {
        return Err(QError::NonFinite);
    }
    cfg.validate()?;
    let one = Complex::new(T::one(), T::zero());
    let mut prod = one;
    let mut power = T::one();
    let mut min_factor = T::infinity();
    for k in 0..cfg.max_terms {
        let shifted = a * power;
        let dev = shifted.norm();
        if dev < cfg.abs_tol {
            // log|tail| is bounded by the sum of the remaining deviations.
            let error_estimate = prod.norm() * dev / q.complement();
            return Ok(TrackedProduct {
                value: ValueWithError {
                    value: prod,
                    error_estimate,
                    terms_used: k,
                },
                min_factor,
            });
        }
        let factor = one - shifted;
        min_factor = min_factor.min(factor.norm());
        prod = prod * factor;
        power = power * q.value();
    }
    Err(QError::NonConvergent {
        terms: cfg.max_terms,
    })
}

/// `(a:q)_inf`, truncated once `|a q^k|` drops below `cfg.abs_tol`.
pub fn q_pochhammer_infinite<T: Scalar>(
    a: Complex<T>,
    q: QParam<T>,
    cfg: &EvalConfig<T>,
) -> Result<ValueWithError<T>> {
    pochhammer_infinite_tracked(a, q, cfg).map(|p| p.value)
}

/// Polynomial in `q` with arbitrary-precision integer coefficients.
///
/// `coefficients()[i]` is the coefficient of `q^i`. Trailing zeros are never
/// stored, so the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        QPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Value at `q = 1`, i.e. the coefficient sum.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `q^k * self`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    /// Horner evaluation at a floating-point `q`.
    pub fn eval<T: Scalar>(&self, q: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| {
            acc * q + T::lit(c.to_f64().unwrap_or(f64::INFINITY))
        })
    }

    /// Exact Horner evaluation at a rational `q`.
    pub fn eval_rational(&self, q: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * q + BigRational::from_integer(c.clone())
            })
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coefficient(i) + rhs.coefficient(i))
            .collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;

    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coefficient(i) - rhs.coefficient(i))
            .collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.abs();
            match power {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}")?,
            }
            match power {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{power}")?,
            }
        }
        Ok(())
    }
}

/// Advances an exact Gaussian row `n-1 -> n` in place, keeping columns `0..=max_k`.
fn advance_exact_row(row: &mut Vec<QPolynomial>, n: usize, max_k: usize) {
    let width = n.min(max_k) + 1;
    if row.len() < width {
        row.push(QPolynomial::zero());
    }
    for k in (1..width).rev() {
        row[k] = &row[k].shifted(k) + &row[k - 1];
    }
}

/// Full row `(n choose k)_q`, `k = 0..=n`, by the Pascal-type recurrence
/// `(n k)_q = q^k (n-1 k)_q + (n-1 k-1)_q`.
pub fn q_binomial_row(n: usize) -> Vec<QPolynomial> {
    let mut row = vec![QPolynomial::one()];
    for m in 1..=n {
        advance_exact_row(&mut row, m, n);
    }
    row
}

/// Exact Gaussian binomial coefficient `(n choose k)_q`.
pub fn q_binomial_poly(n: usize, k: usize) -> Result<QPolynomial> {
    if k > n {
        return Err(QError::Index(format!("k = {k} exceeds n = {n}")));
    }
    let mut row = vec![QPolynomial::one()];
    for m in 1..=n {
        advance_exact_row(&mut row, m, k);
    }
    Ok(row.swap_remove(k))
}

/// Streams exact Gaussian rows `n = 0, 1, 2, ...`.
#[derive(Clone, Debug, Default)]
pub struct ExactGaussianRows {
    row: Vec<QPolynomial>,
    n: usize,
}

impl ExactGaussianRows {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for ExactGaussianRows {
    type Item = Vec<QPolynomial>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.row.is_empty() {
            self.row.push(QPolynomial::one());
        } else {
            self.n += 1;
            advance_exact_row(&mut self.row, self.n, self.n);
        }
        Some(self.row.clone())
    }
}

/// Gaussian rows evaluated at a fixed floating-point `q`.
///
/// Uses the same Pascal recurrence as the exact rows; every step adds
/// nonnegative quantities, so no cancellation occurs.
#[derive(Clone, Debug)]
pub struct GaussianRows<T> {
    q: T,
    q_powers: Vec<T>,
    row: Vec<T>,
}

impl<T: Scalar> GaussianRows<T> {
    pub fn new(q: QParam<T>) -> Self {
        GaussianRows {
            q: q.value(),
            q_powers: vec![T::one()],
            row: Vec::new(),
        }
    }

    /// Advances to the next row and returns it; the first call yields row 0.
    pub fn advance(&mut self) -> &[T] {
        if self.row.is_empty() {
            self.row.push(T::one());
            return &self.row;
        }
        let n = self.row.len();
        while self.q_powers.len() < n {
            let last = *self.q_powers.last().unwrap();
            self.q_powers.push(last * self.q);
        }
        for k in (1..n).rev() {
            self.row[k] = self.q_powers[k] * self.row[k] + self.row[k - 1];
        }
        self.row.push(T::one());
        &self.row
    }
}

/// `[z^0, z^1, ..., z^n]` by repeated multiplication.
pub fn complex_powers<T: Scalar>(z: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..=n {
        out.push(acc);
        acc = acc * z;
    }
    out
}

/// `(x (+)_q y)^n = sum_k (n k)_q x^k y^(n-k)`, with exact Gaussian coefficients.
pub fn q_add_power<T: Scalar>(x: Complex<T>, y: Complex<T>, n: usize, q: QParam<T>) -> Complex<T> {
    let row = q_binomial_row(n);
    let xs = complex_powers(x, n);
    let ys = complex_powers(y, n);
    row.iter()
        .enumerate()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (k, c)| {
            acc + xs[k] * ys[n - k] * c.eval(q.value())
        })
}

/// `(x (-)_q y)^n = sum_k (n k)_q (-1)^(n-k) x^k y^(n-k)`.
pub fn q_sub_power<T: Scalar>(x: Complex<T>, y: Complex<T>, n: usize, q: QParam<T>) -> Complex<T> {
    q_add_power(x, -y, n, q)
}

/// Streams `(x (+)_q y)^n` for `n = 0, 1, 2, ...` in `O(n)` work per item.
#[derive(Clone, Debug)]
pub struct QSumPowers<T> {
    rows: GaussianRows<T>,
    x: Complex<T>,
    y: Complex<T>,
    xs: Vec<Complex<T>>,
    ys: Vec<Complex<T>>,
}

impl<T: Scalar> QSumPowers<T> {
    pub fn new(x: Complex<T>, y: Complex<T>, q: QParam<T>) -> Self {
        QSumPowers {
            rows: GaussianRows::new(q),
            x,
            y,
            xs: Vec::new(),
            ys: Vec::new(),
        }
    }
}

impl<T: Scalar> Iterator for QSumPowers<T> {
    type Item = Complex<T>;

    fn next(&mut self) -> Option<Complex<T>> {
        let one = Complex::new(T::one(), T::zero());
        let next_x = self.xs.last().map_or(one, |&p| p * self.x);
        let next_y = self.ys.last().map_or(one, |&p| p * self.y);
        self.xs.push(next_x);
        self.ys.push(next_y);
        let row = self.rows.advance();
        let n = row.len() - 1;
        let sum = row
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (k, &c)| {
                acc + self.xs[k] * self.ys[n - k] * c
            });
        Some(sum)
    }
}

/// `(1 (+)_q 1)^n` or `(1 (-)_q 1)^n` for `n = 0..len`.
pub fn unit_qsum_powers<T: Scalar>(subtract: bool, q: QParam<T>, len: usize) -> Vec<T> {
    let mut rows = GaussianRows::new(q);
    (0..len)
        .map(|_| {
            let row = rows.advance();
            let n = row.len() - 1;
            row.iter().enumerate().fold(T::zero(), |acc, (k, &c)| {
                if subtract && (n - k) % 2 == 1 {
                    acc - c
                } else {
                    acc + c
                }
            })
        })
        .collect()
}

/// Generalized Gaussian binomial for real upper index:
/// `prod_{j<k} (1 - q^(x-j)) / ([k]_q! (1-q)^k)`.
pub fn q_binomial_numeric<T: Scalar>(x: T, k: usize, q: QParam<T>) -> T {
    (0..k).fold(T::one(), |acc, j| {
        let j = T::from_usize_lossy(j);
        acc * q_number(x - j, q) / q_number(j + T::one(), q)
    })
}
