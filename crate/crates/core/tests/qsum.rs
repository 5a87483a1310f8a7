use proptest::prelude::*;
use qtrig::qcore::{q_add_power, q_integer, q_sub_power, unit_qsum_powers};
use qtrig::{Complex64, QParam64};

fn power_by_multiplication(z: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn zero_partner_gives_plain_power(x in complex(), n in 0usize..24, qv in 0.05f64..0.95) {
        let q = QParam64::new(qv).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        prop_assert_eq!(q_add_power(x, zero, n, q), power_by_multiplication(x, n));
        prop_assert_eq!(q_add_power(zero, x, n, q), power_by_multiplication(x, n));
    }

    #[test]
    fn odd_unit_differences_vanish(m in 0usize..20, qv in 0.05f64..0.95) {
        let q = QParam64::new(qv).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let n = 2 * m + 1;
        let scale = q_add_power(one, one, n, q).norm();
        prop_assert!(q_sub_power(one, one, n, q).norm() <= 1e-14 * scale);
    }

    #[test]
    fn subtraction_absorbs_sign(x in complex(), y in complex(), n in 0usize..16, qv in 0.05f64..0.95) {
        let q = QParam64::new(qv).unwrap();
        prop_assert_eq!(q_sub_power(x, y, n, q), q_add_power(x, -y, n, q));
    }
}

#[test]
fn low_degree_rows() {
    let q = QParam64::new(0.5).unwrap();
    let x = Complex64::new(0.3, -1.1);
    let y = Complex64::new(-0.7, 0.4);
    assert_eq!(q_add_power(x, y, 0, q), Complex64::new(1.0, 0.0));
    assert!((q_add_power(x, y, 1, q) - (x + y)).norm() < 1e-15);
    assert!((q_sub_power(x, y, 1, q) - (x - y)).norm() < 1e-15);
    let one = Complex64::new(1.0, 0.0);
    assert!((q_add_power(one, one, 2, q).re - (2.0 + q_integer(2, q))).abs() < 1e-15);
    assert!((q_sub_power(one, one, 2, q).re - 0.5).abs() < 1e-15);
}

#[test]
fn unit_powers_agree_with_exact_rows() {
    let q = QParam64::new(0.7).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let plus = unit_qsum_powers(false, q, 30);
    let minus = unit_qsum_powers(true, q, 30);
    for n in 0..30 {
        let a = q_add_power(one, one, n, q).re;
        let s = q_sub_power(one, one, n, q).re;
        assert!((plus[n] - a).abs() <= 1e-12 * a.abs(), "n={n}");
        assert!((minus[n] - s).abs() <= 1e-12, "n={n}");
    }
}

#[test]
fn approaches_newton_binomial_near_one() {
    let x = Complex64::new(0.6, 0.2);
    let y = Complex64::new(-0.3, 0.5);
    let classical = power_by_multiplication(x + y, 6);
    let far = (q_add_power(x, y, 6, QParam64::new(0.99).unwrap()) - classical).norm();
    let near = (q_add_power(x, y, 6, QParam64::new(0.9999).unwrap()) - classical).norm();
    assert!(near < 1e-3);
    assert!(near < far);
}
