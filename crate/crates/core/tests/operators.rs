use pqbd_core::kernel::{basis_terms, baskakov_basis, durrmeyer_weight, stancu_argument};
use pqbd_core::moments::{closed_moment_base, closed_moment_stancu, operator_moment_stancu};
use pqbd_core::operators::{apply_auxiliary, apply_base, apply_stancu};
use pqbd_core::pq::pq_int;
use pqbd_core::{KernelVariant, Operator, PqParams, RealFunction, StancuParams, TruncationConfig};

fn pq(p: f64, q: f64) -> PqParams {
    PqParams::new(p, q).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn figure_stancu() -> StancuParams {
    StancuParams::new(0.1, 0.5).unwrap()
}

#[test]
fn stancu_params_validate() {
    assert!(StancuParams::new(0.6, 0.5).is_err());
    assert!(StancuParams::new(-0.1, 0.5).is_err());
    assert!(StancuParams::new(0.0, 0.0).unwrap().is_none());
}

#[test]
fn basis_at_origin() {
    let a = pq(0.9, 0.8);
    assert!(baskakov_basis(3, 1, 0.0, &a).unwrap().is_zero());
    assert_eq!(baskakov_basis(3, 0, 0.0, &a).unwrap().value(), 1.0);
}

#[test]
fn basis_extended_precision_oracle() {
    // n = 100, k = 40, x = 1, p = 0.9, q = 0.8; 50-digit reference
    let b = baskakov_basis(100, 40, 1.0, &pq(0.9, 0.8)).unwrap();
    assert!((b.ln_magnitude() - -87.30481545019053837576732).abs() < 1e-9);
}

#[test]
fn partition_of_unity() {
    let cfg = TruncationConfig::default();
    for (p, q) in [(1.0, 0.9), (0.9, 0.8)] {
        let a = pq(p, q);
        for n in [2, 5, 10, 50] {
            for x in [0.0, 0.5, 1.0, 2.0, 3.0] {
                let s: f64 = basis_terms(n, x, &a, &cfg)
                    .unwrap()
                    .iter()
                    .map(|t| t.weight.value())
                    .sum();
                assert!((s - 1.0).abs() < 1e-8, "p={p} n={n} x={x} sum={s}");
            }
        }
    }
}

#[test]
fn durrmeyer_weight_oracle() {
    let w = durrmeyer_weight(5, 2, 0.1, &pq(0.9, 0.8), KernelVariant::Gamma).unwrap();
    assert!(rel(w.value(), 0.02397076580639631693529753) < 1e-9);
    let at_zero = durrmeyer_weight(5, 0, 0.0, &pq(0.9, 0.8), KernelVariant::Gamma).unwrap();
    assert_eq!(at_zero.value(), 1.0);
}

#[test]
fn each_kernel_integrates_to_one() {
    let cfg = TruncationConfig::default();
    for (p, q) in [(1.0, 0.9), (0.9, 0.8), (0.95, 0.9)] {
        let a = pq(p, q);
        let n = pq_int(5, &a);
        let lattice = pqbd_core::ExpLattice::new(q * n, &a, &cfg).unwrap();
        for k in 0..=10u32 {
            let ln_scale =
                n.ln() + KernelVariant::Gamma.ln_normalization(k, &a) + f64::from(k) * n.ln();
            let v = lattice
                .integrate(k, ln_scale, |_| Ok(1.0), |_| 1.0, 1e-14)
                .unwrap();
            assert!((v - 1.0).abs() < 1e-7, "p={p} k={k} v={v}");
        }
    }
}

#[test]
fn stancu_argument_examples() {
    let a = pq(0.9, 0.8);
    assert_eq!(
        stancu_argument(2, 3, 0.0, &a, &StancuParams::NONE).unwrap(),
        0.0
    );
    let v = stancu_argument(2, 0, 0.0, &a, &figure_stancu()).unwrap();
    assert!(rel(v, 0.1 / 2.2) < 1e-14);
    let v = stancu_argument(4, 1, 0.3, &a, &StancuParams::NONE).unwrap();
    assert!(rel(v, 0.9f64.powi(4) * 0.3) < 1e-14);
}

#[test]
fn base_operator_examples() {
    let cfg = TruncationConfig::default();
    let a = pq(0.9, 0.8);
    let one = apply_base(&RealFunction::constant(1.0), 5, 1.3, &a, &cfg).unwrap();
    assert!((one - 1.0).abs() < 1e-7);
    let t = apply_base(&RealFunction::monomial(1).unwrap(), 5, 1.0, &a, &cfg).unwrap();
    assert!(
        rel(
            t,
            operator_moment_stancu(1, 5, 1.0, &a, &StancuParams::NONE)
        ) < 1e-10
    );
}

#[test]
fn matches_published_moments_at_p_one() {
    let cfg = TruncationConfig::default();
    let a = pq(1.0, 0.9);
    for order in 0..=2u32 {
        let f = RealFunction::monomial(order).unwrap();
        let b = apply_base(&f, 10, 0.5, &a, &cfg).unwrap();
        assert!(rel(b, closed_moment_base(order, 10, 0.5, &a).unwrap()) < 1e-6);
        let s = apply_stancu(&f, 5, 1.0, &a, &figure_stancu(), &cfg).unwrap();
        assert!(
            rel(
                s,
                closed_moment_stancu(order, 5, 1.0, &a, &figure_stancu()).unwrap()
            ) < 1e-6
        );
    }
}

#[test]
fn stancu_operator_examples() {
    let cfg = TruncationConfig::default();
    let a = pq(0.9, 0.8);
    let one = apply_stancu(
        &RealFunction::constant(1.0),
        98,
        2.0,
        &a,
        &figure_stancu(),
        &cfg,
    )
    .unwrap();
    assert!((one - 1.0).abs() < 1e-6);
    let f = RealFunction::cos_x_squared();
    let base = apply_base(&f, 6, 0.7, &a, &cfg).unwrap();
    let none = apply_stancu(&f, 6, 0.7, &a, &StancuParams::NONE, &cfg).unwrap();
    assert_eq!(base.to_bits(), none.to_bits());
}

#[test]
fn auxiliary_operator_fixes_affine_functions() {
    let cfg = TruncationConfig::default();
    for (p, q) in [(1.0, 0.9), (0.9, 0.8)] {
        let a = pq(p, q);
        for x in [0.0, 1.0, 2.5] {
            let one = apply_auxiliary(
                &RealFunction::constant(1.0),
                5,
                x,
                &a,
                &figure_stancu(),
                &cfg,
            )
            .unwrap();
            assert!((one - 1.0).abs() < 1e-9);
            let t = apply_auxiliary(
                &RealFunction::monomial(1).unwrap(),
                5,
                x,
                &a,
                &figure_stancu(),
                &cfg,
            )
            .unwrap();
            assert!((t - x).abs() < 1e-9, "x={x} got {t}");
        }
    }
}

#[test]
fn auxiliary_on_square_composes() {
    let cfg = TruncationConfig::default();
    let a = pq(0.9, 0.8);
    let st = figure_stancu();
    let sq = RealFunction::monomial(2).unwrap();
    let aux = apply_auxiliary(&sq, 5, 1.0, &a, &st, &cfg).unwrap();
    let m1 = operator_moment_stancu(1, 5, 1.0, &a, &st);
    let direct = apply_stancu(&sq, 5, 1.0, &a, &st, &cfg).unwrap() + 1.0 - m1 * m1;
    assert!((aux - direct).abs() < 1e-12);
}

#[test]
fn classical_limit_first_moment() {
    let cfg = TruncationConfig::default().for_lattice(&pq(1.0, 0.9999));
    let a = pq(1.0, 0.9999);
    let x = 0.8;
    let m1 = apply_base(&RealFunction::monomial(1).unwrap(), 10, x, &a, &cfg).unwrap();
    assert!((m1 - (x + 0.1)).abs() < 1e-2);
}

#[test]
fn literal_kernel_breaks_constants() {
    let cfg = TruncationConfig::default();
    let a = pq(0.9, 0.8);
    let op =
        Operator::with_variant(5, &a, &StancuParams::NONE, &cfg, KernelVariant::Literal).unwrap();
    let v = op.apply(&RealFunction::constant(1.0), 1.0).unwrap();
    assert!((v - 1.0).abs() > 1e-2, "{v}");
}

#[test]
fn operator_is_shareable_across_threads() {
    let a = pq(0.9, 0.8);
    let op = Operator::new(8, &a, &figure_stancu(), &TruncationConfig::default()).unwrap();
    let f = RealFunction::cos_x_squared();
    let serial: Vec<f64> = (0..4)
        .map(|i| op.apply(&f, 0.5 * f64::from(i)).unwrap())
        .collect();
    let threaded: Vec<f64> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let (op, f) = (&op, &f);
                s.spawn(move || op.apply(f, 0.5 * f64::from(i)).unwrap())
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, threaded);
}
