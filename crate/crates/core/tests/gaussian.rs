use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qtrig::qcore::{
    q_binomial_numeric, q_binomial_poly, q_binomial_row, q_factorial, q_integer, q_number,
};
use qtrig::{QParam64, QPolynomial};

fn classical_binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Coefficient list of `(n k)_q` by counting k-subsets of `{0..n}` by
/// `sum - k(k-1)/2`.
fn subset_count_coefficients(n: usize, k: usize) -> Vec<BigInt> {
    let degree = k * (n - k);
    let mut counts = vec![BigInt::zero(); degree + 1];
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let sum: usize = (0..n).filter(|i| mask & (1 << i) != 0).sum();
        counts[sum - k * (k.saturating_sub(1)) / 2] += 1;
    }
    counts
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_pow(q: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * q)
}

fn nk() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=30).prop_flat_map(|n| (Just(n), 0..=n))
}

proptest! {
    #[test]
    fn coefficients_are_palindromic_and_nonnegative((n, k) in nk()) {
        let p = q_binomial_poly(n, k).unwrap();
        prop_assert!(p.is_palindromic());
        prop_assert!(p.is_nonnegative());
        prop_assert_eq!(p.degree(), Some(k * (n - k)));
        prop_assert_eq!(p.value_at_one(), classical_binomial(n, k));
    }

    #[test]
    fn symmetric_in_k((n, k) in nk()) {
        prop_assert_eq!(q_binomial_poly(n, k).unwrap(), q_binomial_poly(n, n - k).unwrap());
    }

    #[test]
    fn pascal_recurrence((n, k) in (2usize..=30).prop_flat_map(|n| (Just(n), 1..n))) {
        let lhs = q_binomial_poly(n, k).unwrap();
        let rhs = &q_binomial_poly(n - 1, k).unwrap().shifted(k) + &q_binomial_poly(n - 1, k - 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_matches_exact_evaluation((n, k) in nk(), qi in 0usize..5) {
        let qv = [0.1, 0.3, 0.5, 0.7, 0.9][qi];
        let q = QParam64::new(qv).unwrap();
        let exact = q_binomial_poly(n, k).unwrap().eval(qv);
        let numeric = q_binomial_numeric(n as f64, k, q);
        prop_assert!(((numeric - exact) / exact).abs() <= 1e-12, "{} vs {}", numeric, exact);
    }
}

#[test]
fn matches_subset_enumeration() {
    for n in 0..=12 {
        for (k, p) in q_binomial_row(n).iter().enumerate() {
            assert_eq!(
                p.coefficients(),
                subset_count_coefficients(n, k).as_slice(),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn alternating_row_sums_follow_gauss() {
    for q in [ratio(1, 3), ratio(2, 5), ratio(7, 9)] {
        for n in 0..=24 {
            let sum =
                q_binomial_row(n)
                    .iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (k, p)| {
                        let v = p.eval_rational(&q);
                        if (n - k) % 2 == 1 {
                            acc - v
                        } else {
                            acc + v
                        }
                    });
            let expected = if n % 2 == 1 {
                BigRational::zero()
            } else {
                (1..=n / 2).fold(BigRational::one(), |acc, j| {
                    acc * (BigRational::one() - rational_pow(&q, 2 * j - 1))
                })
            };
            assert_eq!(sum, expected, "n={n} q={q}");
        }
    }
}

#[test]
fn documented_row_four() {
    let p = q_binomial_poly(4, 2).unwrap();
    assert_eq!(p, QPolynomial::from_i64(&[1, 1, 2, 1, 1]));
    assert_eq!(p.value_at_one(), BigInt::from(6));
    assert_eq!(p.to_string(), "1 + q + 2q^2 + q^3 + q^4");
    assert_eq!(q_binomial_poly(7, 0).unwrap(), QPolynomial::one());
    assert!(q_binomial_poly(3, 4).is_err());
}

#[test]
fn generalized_binomial_large_upper_index() {
    for qv in [0.3, 0.5, 0.8] {
        let q = QParam64::new(qv).unwrap();
        for k in 0..6 {
            let pochhammer: f64 = (1..=k).map(|j| 1.0 - qv.powi(j as i32)).product();
            let x = 400.0;
            let b = q_binomial_numeric(x, k, q);
            assert!(
                (b - 1.0 / pochhammer).abs() <= 1e-12 * b.abs(),
                "q={qv} k={k}"
            );
            let normalized = b / q_number(x, q).powi(k as i32);
            assert!(
                (normalized - 1.0 / q_factorial(k, q)).abs() <= 1e-12,
                "q={qv} k={k}"
            );
        }
        assert_eq!(q_binomial_numeric(3.7, 0, q), 1.0);
        assert!((q_binomial_numeric(1.0, 1, q) - q_integer(1, q)).abs() < 1e-15);
    }
}
