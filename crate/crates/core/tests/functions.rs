use proptest::prelude::*;
use qtrig::qcore::q_factorial;
use qtrig::qfunctions::{
    big_e_q, big_e_q_product, cos_q, cot_q, daehee_constant, daehee_sequence_term, e_q,
    e_q_product, fn_at_qsum, fn_at_scaled_qdiff, sec_q, sin_q, tan_q, DaeheeSequence,
};
use qtrig::{
    Complex32, Complex64, EvalConfig32, EvalConfig64, QError, QFunction, QFunctionKind, QParam32,
    QParam64, QSign, SeriesKind,
};

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn q(v: f64) -> QParam64 {
    QParam64::new(v).unwrap()
}

fn cfg() -> EvalConfig64 {
    EvalConfig64::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn daehee_formula(qv in 0.1f64..0.9, t in -1.0f64..1.0) {
        let q = q(qv);
        let x = t * 0.5 / (1.0 - qv);
        let lhs = e_q(Complex64::new(0.0, x), q, &cfg()).unwrap().value;
        let c = cos_q(r(x), q, &cfg()).unwrap().value;
        let s = sin_q(r(x), q, &cfg()).unwrap().value;
        let rhs = c + Complex64::i() * s;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn exponential_pair(qi in 0usize..3, rho in 0.0f64..1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let qv = [0.3, 0.6, 0.9][qi];
        let z = Complex64::from_polar(rho * 0.5 / (1.0 - qv), theta);
        let a = e_q(z, q(qv), &cfg()).unwrap().value;
        let b = big_e_q(-z, q(qv), &cfg()).unwrap().value;
        prop_assert!((a * b - 1.0).norm() <= 1e-10);
        let p = e_q_product(z, q(qv), &cfg()).unwrap().value;
        prop_assert!((a - p).norm() <= 1e-10 * (1.0 + a.norm()));
        let big_p = big_e_q_product(-z, q(qv), &cfg()).unwrap().value;
        prop_assert!((b - big_p).norm() <= 1e-10 * (1.0 + b.norm()));
    }

    #[test]
    fn reciprocal_pairs(qv in 0.2f64..0.9, t in -1.0f64..1.0) {
        let q = q(qv);
        let x = r(t * 0.5 / (1.0 - qv));
        if let (Ok(tan), Ok(cot)) = (tan_q(x, q, &cfg()), cot_q(x, q, &cfg())) {
            prop_assert!((tan.value * cot.value - 1.0).norm() <= 1e-10);
        }
        if let Ok(sec) = sec_q(x, q, &cfg()) {
            let cos = cos_q(x, q, &cfg()).unwrap().value;
            prop_assert!((sec.value * cos - 1.0).norm() <= 1e-10);
        }
    }

    #[test]
    fn evaluation_is_deterministic(qv in 0.1f64..0.9, t in -1.0f64..1.0) {
        let x = r(t * 0.5 / (1.0 - qv));
        for kind in QFunctionKind::ALL {
            let f = QFunction::new(kind, q(qv), cfg()).unwrap();
            let a = f.eval(x).map(|v| (v.value.re.to_bits(), v.value.im.to_bits(), v.terms_used));
            let b = f.eval(x).map(|v| (v.value.re.to_bits(), v.value.im.to_bits(), v.terms_used));
            prop_assert_eq!(a.ok(), b.ok());
        }
    }
}

#[test]
fn classical_limit_gets_closer() {
    let xs: Vec<f64> = (0..=40).map(|i| -1.0 + 0.05 * i as f64).collect();
    let worst = |qv: f64| {
        xs.iter().fold(0.0f64, |m, &x| {
            let s = (sin_q(r(x), q(qv), &cfg()).unwrap().value.re - x.sin()).abs();
            let c = (cos_q(r(x), q(qv), &cfg()).unwrap().value.re - x.cos()).abs();
            let e = (e_q(r(x), q(qv), &cfg()).unwrap().value.re - x.exp()).abs();
            m.max(s).max(c).max(e)
        })
    };
    let coarse = worst(1.0 - 1e-3);
    let fine = worst(1.0 - 1e-4);
    assert!(coarse <= 1e-2, "{coarse}");
    assert!(fine < coarse, "{fine} vs {coarse}");
}

#[test]
fn daehee_constant_matches_direct_sum() {
    let direct: f64 = (0..100).map(|k| 1.0 / q_factorial(k, q(0.5))).sum();
    let v = daehee_constant(q(0.5), &cfg()).unwrap().value.re;
    assert!((v - direct).abs() <= 1e-12);
    let near_one = daehee_constant(q(0.999), &cfg()).unwrap().value.re;
    assert!((near_one - std::f64::consts::E).abs() <= 1e-2);
}

#[test]
fn daehee_sequence_converges() {
    for qv in [0.3, 0.5, 0.7] {
        let limit = daehee_constant(q(qv), &cfg()).unwrap().value.re;
        let gap = |n: usize| (daehee_sequence_term(n, q(qv)).unwrap().value - limit).abs();
        assert!(gap(50) < 1e-3, "q={qv}");
        assert!(gap(50) < gap(10), "q={qv}");
    }
    let limit = daehee_constant(q(0.7), &cfg()).unwrap().value.re;
    let gaps: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&n| (daehee_sequence_term(n, q(0.7)).unwrap().value - limit).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(matches!(
        daehee_sequence_term(0, q(0.7)),
        Err(QError::Index(_))
    ));
}

#[test]
fn streamed_sequence_matches_single_terms() {
    let streamed: Vec<f64> = DaeheeSequence::new(q(0.4))
        .take(12)
        .map(|t| t.value)
        .collect();
    for (i, v) in streamed.iter().enumerate() {
        let single = daehee_sequence_term(i + 1, q(0.4)).unwrap().value;
        assert_eq!(*v, single);
    }
    assert_eq!(streamed[0], 2.0);
}

#[test]
fn exponential_at_qsum_factorizes() {
    let qv = 0.6;
    let (x, y) = (r(0.4), r(-0.7));
    let lhs = fn_at_qsum(SeriesKind::ExpQ, x, y, q(qv), &cfg())
        .unwrap()
        .value;
    let rhs = e_q(x, q(qv), &cfg()).unwrap().value * e_q(y, q(qv), &cfg()).unwrap().value;
    assert!((lhs - rhs).norm() <= 1e-8);
    let sin = fn_at_qsum(SeriesKind::SinQ, x, y, q(qv), &cfg())
        .unwrap()
        .value;
    let s = |z| sin_q(z, q(qv), &cfg()).unwrap().value;
    let c = |z| cos_q(z, q(qv), &cfg()).unwrap().value;
    assert!((sin - (s(x) * c(y) + c(x) * s(y))).norm() <= 1e-8);
}

#[test]
fn scaled_differences() {
    let qv = 0.5;
    let x = r(0.6);
    let s = sin_q(x, q(qv), &cfg()).unwrap().value;
    let c = cos_q(x, q(qv), &cfg()).unwrap().value;
    let sum_sq = fn_at_scaled_qdiff(SeriesKind::CosQ, x, q(qv), QSign::Minus, &cfg())
        .unwrap()
        .value;
    assert!((sum_sq - (c * c + s * s)).norm() <= 1e-8);
    let double = fn_at_scaled_qdiff(SeriesKind::SinQ, x, q(qv), QSign::Plus, &cfg())
        .unwrap()
        .value;
    assert!((double - 2.0 * s * c).norm() <= 1e-8);
}

#[test]
fn poles_and_domain_guards() {
    assert!(matches!(
        e_q(r(3.0), q(0.5), &cfg()),
        Err(QError::Domain(_))
    ));
    assert!(matches!(
        e_q_product(r(2.0), q(0.5), &cfg()),
        Err(QError::Pole(_))
    ));
    let csc = QFunction::new(QFunctionKind::CscQ, q(0.5), cfg()).unwrap();
    assert!(matches!(csc.eval(r(0.0)), Err(QError::Pole(_))));
}

#[test]
fn single_precision_instantiation() {
    let q = QParam32::new(0.5).unwrap();
    let cfg = EvalConfig32 {
        abs_tol: 1e-7,
        rel_tol: 1e-6,
        ..EvalConfig32::default()
    };
    let x = Complex32::new(0.3, 0.0);
    let s = sin_q(x, q, &cfg).unwrap().value;
    let c = cos_q(x, q, &cfg).unwrap().value;
    let e = e_q(Complex32::new(0.0, 0.3), q, &cfg).unwrap().value;
    assert!((e - (c + Complex32::i() * s)).norm() < 1e-5);
    let wide = sin_q(
        r(0.3),
        QParam64::new(0.5).unwrap(),
        &EvalConfig64::default(),
    )
    .unwrap()
    .value
    .re;
    assert!((s.re as f64 - wide).abs() < 1e-5);
}
