use proptest::prelude::*;

use pqbd_core::kernel::{basis_terms, stancu_argument};
use pqbd_core::pq::{pq_binomial, pq_exponential, pq_int, pq_rising_power};
use pqbd_core::smoothness::{empirical_modulus, empirical_modulus2, weighted_modulus};
use pqbd_core::sum::NeumaierSum;
use pqbd_core::{
    ExpKind, GridSpec, LogValue, Operator, PqParams, RealFunction, StancuParams, TruncationConfig,
};

fn params() -> impl Strategy<Value = PqParams> {
    (0.5f64..=1.0, 0.05f64..0.95).prop_map(|(p, frac)| PqParams::new(p, p * frac).unwrap())
}

fn operator_params() -> impl Strategy<Value = PqParams> {
    (0.85f64..=1.0, 0.8f64..0.95).prop_map(|(p, frac)| PqParams::new(p, p * frac).unwrap())
}

fn stancu() -> impl Strategy<Value = StancuParams> {
    (0.0f64..1.0, 0.0f64..1.0).prop_map(|(a, extra)| StancuParams::new(a, a + extra).unwrap())
}

proptest! {
    #[test]
    fn log_value_round_trips(m in 1.0f64..10.0, e in -30i32..30, negative in any::<bool>()) {
        let v = if negative { -m } else { m } * 10f64.powi(e);
        let back = LogValue::from_f64(v).value();
        prop_assert!((back - v).abs() <= 1e-14 * v.abs());
    }

    #[test]
    fn log_value_round_trip_error_grows_with_exponent(v in -1e300f64..1e300) {
        prop_assume!(v != 0.0);
        let back = LogValue::from_f64(v).value();
        let bound = 4.0 * f64::EPSILON * (1.0 + v.abs().ln().abs());
        prop_assert!((back - v).abs() <= bound * v.abs());
    }

    #[test]
    fn compensated_sum_of_integers_is_exact(xs in proptest::collection::vec(-1_000_000i64..1_000_000, 0..200)) {
        let s: NeumaierSum = xs.iter().map(|&x| x as f64).collect();
        prop_assert_eq!(s.value(), xs.iter().sum::<i64>() as f64);
    }

    #[test]
    fn integer_recurrence(a in params(), n in 0u32..300) {
        let next = a.p() * pq_int(n, &a) + a.q().powi(n as i32);
        prop_assert!((pq_int(n + 1, &a) - next).abs() <= 1e-12 * next.max(1e-300));
    }

    #[test]
    fn binomial_is_symmetric(a in params(), n in 0u32..80, k in 0u32..80) {
        prop_assume!(k <= n);
        let l = pq_binomial(n, k, &a).unwrap();
        let r = pq_binomial(n, n - k, &a).unwrap();
        prop_assert!((l - r).abs() <= 1e-12 * l);
    }

    #[test]
    fn rising_power_is_positive(a in params(), x in 0.0f64..1e3, n in 0u32..500) {
        let v = pq_rising_power(x, n, &a).unwrap();
        prop_assert_eq!(v.sign(), 1);
        prop_assert!(v.ln_magnitude().is_finite());
    }

    #[test]
    fn exponentials_are_reciprocal(a in params(), x in 0.0f64..5.0) {
        let cfg = TruncationConfig::default();
        prop_assume!(x * (1.0 - a.ratio()) < 0.9);
        let e = pq_exponential(x, ExpKind::SmallE, &a, &cfg).unwrap();
        let big = pq_exponential(-x, ExpKind::BigE, &a, &cfg).unwrap();
        prop_assert!((e * big - 1.0).abs() < 1e-9);
    }

    #[test]
    fn basis_is_a_partition_of_unity(a in operator_params(), n in 1u32..60, x in 0.0f64..3.0) {
        let terms = basis_terms(n, x, &a, &TruncationConfig::default()).unwrap();
        prop_assert!(terms.iter().all(|t| t.weight.sign() >= 0));
        let s: f64 = terms.iter().map(|t| t.weight.value()).sum();
        prop_assert!((s - 1.0).abs() < 1e-8);
    }

    #[test]
    fn stancu_argument_is_monotone(a in params(), st in stancu(), n in 1u32..50, k in 0u32..50, t in 0.0f64..10.0, dt in 0.0f64..1.0) {
        let lo = stancu_argument(n, k, t, &a, &st).unwrap();
        let hi = stancu_argument(n, k, t + dt, &a, &st).unwrap();
        prop_assert!(lo >= 0.0 && hi >= lo);
    }

    #[test]
    fn moduli_are_nonnegative_and_monotone(d1 in 0.01f64..0.5, d2 in 0.01f64..0.5, c in -3.0f64..3.0) {
        let f = RealFunction::bounded(move |x| (c * x).sin() + 0.5 * (x * x).cos(), 1.5).unwrap();
        let g = GridSpec::new(0.0, 3.0, 0.01).unwrap();
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        for m in [empirical_modulus, empirical_modulus2, weighted_modulus] {
            let a = m(&f, lo, &g).unwrap().value;
            let b = m(&f, hi, &g).unwrap().value;
            prop_assert!(a >= 0.0 && b >= a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_is_linear_positive_and_monotone(
        a in operator_params(),
        st in stancu(),
        n in 1u32..30,
        x in 0.0f64..3.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let op = Operator::new(n, &a, &st, &TruncationConfig::default()).unwrap();
        let f = RealFunction::cos_x_squared();
        let g = RealFunction::monomial(2).unwrap();
        let combo = RealFunction::linear_combination(c1, &f, c2, &g).unwrap();
        let (bf, bg, bc) = (op.apply(&f, x).unwrap(), op.apply(&g, x).unwrap(), op.apply(&combo, x).unwrap());
        let want = c1 * bf + c2 * bg;
        prop_assert!((bc - want).abs() <= 1e-10 * (c1.abs() * bf.abs() + c2.abs() * bg.abs()).max(1e-12));

        let nonneg = RealFunction::bounded(|t| 1.0 + (t * t).cos(), 2.0).unwrap();
        prop_assert!(op.apply(&nonneg, x).unwrap() >= -1e-9);

        // cos t^2 <= 1 <= 1 + t^2
        let upper = RealFunction::quadratic(|t| 1.0 + t * t, 1.0).unwrap();
        prop_assert!(bf <= op.apply(&upper, x).unwrap() + 1e-9);
    }
}
