use num_bigint::BigInt;
use num_rational::BigRational;
use orbsurf_core::contact::*;
use proptest::prelude::*;

const T: usize = 24;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, len)
}

fn series(len: usize) -> impl Strategy<Value = Series> {
    coeffs(len).prop_map(|c| Series::from_integers(&c, T).unwrap())
}

/// Unit series: nonzero constant term.
fn unit() -> impl Strategy<Value = Vec<i64>> {
    (prop_oneof![-3i64..=-1, 1i64..=3], coeffs(8)).prop_map(|(c0, mut rest)| {
        rest.insert(0, c0);
        rest
    })
}

fn shifted(k: usize, c: &[i64], trunc: usize) -> Series {
    let mut v = vec![0; k];
    v.extend_from_slice(c);
    Series::from_integers(&v, trunc).unwrap()
}

fn poly() -> impl Strategy<Value = Polynomial2> {
    proptest::collection::vec(((0u32..4, 0u32..4), -3i64..=3), 1..6)
        .prop_map(|terms| Polynomial2::from_integers(&terms))
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_laws(a in series(10), b in series(10), c in series(10)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.pow(3), a.mul(&a).unwrap().mul(&a).unwrap());
        prop_assert_eq!(a.sub(&a).unwrap(), Series::zero(T).unwrap());
    }

    #[test]
    fn order_is_additive(k in 0usize..10, l in 0usize..10, u in unit(), v in unit()) {
        let a = shifted(k, &u, T);
        let b = shifted(l, &v, T);
        prop_assert_eq!(a.mul(&b).unwrap().order_of_vanishing(), Order::Exact(k + l));
    }

    #[test]
    fn pullback_identity_against_constructed_orders(
        k in 1usize..8,
        m in 2u64..=7,
        u in unit(),
        x in coeffs(6),
    ) {
        // w = t^k · unit, so the downstairs order is exactly m·k when it fits.
        let h = CurveGerm::new(Series::from_integers(&x, T).unwrap(), shifted(k, &u, T)).unwrap();
        let rec = fibration_pullback_check(&h, m).unwrap();
        prop_assert_eq!(rec.upstairs_order, Order::Exact(k));
        if (m as usize) * k < T {
            prop_assert_eq!(rec.downstairs_order, Order::Exact(m as usize * k));
            prop_assert_eq!(rec.identity_holds, Verdict::Yes);
            prop_assert_eq!(rec.classical_m_tangent, Verdict::Yes);
        } else {
            prop_assert_eq!(rec.downstairs_order, Order::AtLeast(T));
            prop_assert_eq!(rec.identity_holds, Verdict::Indeterminate);
        }
    }

    #[test]
    fn contact_with_graph_is_the_deviation_order(
        d in 1u32..4,
        c in -3i64..=3,
        e_extra in 1usize..12,
        u in unit(),
    ) {
        // y = c·t^d + t^e·unit against f = y - c·x^d with x = t.
        let e = d as usize + e_extra;
        let mut y = shifted(e, &u, T);
        y = y.add(&Series::monomial(q(c), d as usize, T).unwrap()).unwrap();
        let h = CurveGerm::new(Series::from_integers(&[0, 1], T).unwrap(), y).unwrap();
        let f = Polynomial2::from_integers(&[((0, 1), 1), ((d, 0), -c)]);
        let expected = if e < T { Order::Exact(e) } else { Order::AtLeast(T) };
        prop_assert_eq!(contact_order(&h, &f).unwrap(), expected);
    }

    #[test]
    fn reparametrization_preserves_contact(
        x in coeffs(8),
        y in coeffs(8),
        f in poly(),
        lin in prop_oneof![-3i64..=-1, 1i64..=3],
        higher in coeffs(5),
    ) {
        prop_assume!(x.iter().any(|&c| c != 0) || y.iter().any(|&c| c != 0));
        let h = CurveGerm::from_integers(&x, &y, T).unwrap();
        let mut tau = vec![0, lin];
        tau.extend(higher);
        let tau = Series::from_integers(&tau, T).unwrap();
        let moved = h.reparametrize(&tau).unwrap();
        prop_assert_eq!(contact_order(&h, &f).unwrap(), contact_order(&moved, &f).unwrap());
    }

    #[test]
    fn verdicts_never_overclaim(
        x in coeffs(6),
        y in coeffs(6),
        f in poly(),
        m in 2u64..=7,
    ) {
        prop_assume!(x.iter().any(|&c| c != 0) || y.iter().any(|&c| c != 0));
        // Same polynomial germ at a much longer truncation decides the truth.
        let short = CurveGerm::from_integers(&x, &y, 12).unwrap();
        let long = CurveGerm::from_integers(&x, &y, 96).unwrap();
        for mode in [TangencyMode::Classical, TangencyMode::Nonclassical] {
            let a = is_m_tangent(&short, &f, m, mode).unwrap();
            let b = is_m_tangent(&long, &f, m, mode).unwrap();
            if let Some(v) = a.m_tangent.as_bool() {
                prop_assert_eq!(Some(v), b.m_tangent.as_bool());
            }
            if a.classical_m_tangent == Verdict::Yes {
                prop_assert_eq!(a.nonclassical_m_tangent, Verdict::Yes);
            }
        }
    }
}

#[test]
fn cusp_and_tacnode_examples() {
    // (t², t³) meets y = 0 to order 3 and x = 0 to order 2.
    let cusp = CurveGerm::from_integers(&[0, 0, 1], &[0, 0, 0, 1], T).unwrap();
    let y = Polynomial2::y();
    let x = Polynomial2::from_integers(&[((1, 0), 1)]);
    assert_eq!(contact_order(&cusp, &y).unwrap(), Order::Exact(3));
    assert_eq!(contact_order(&cusp, &x).unwrap(), Order::Exact(2));
    let rec = is_m_tangent(&cusp, &y, 3, TangencyMode::Classical).unwrap();
    assert_eq!(rec.m_tangent, Verdict::Yes);
    let rec = is_m_tangent(&cusp, &y, 2, TangencyMode::Classical).unwrap();
    assert_eq!(rec.m_tangent, Verdict::No);
    assert_eq!(rec.nonclassical_m_tangent, Verdict::Yes);
    // The curve y = x² lies on y - x² = 0.
    let par = CurveGerm::from_integers(&[0, 1], &[0, 0, 1], T).unwrap();
    let f = Polynomial2::from_integers(&[((0, 1), 1), ((2, 0), -1)]);
    let rec = is_m_tangent(&par, &f, 5, TangencyMode::Nonclassical).unwrap();
    assert_eq!(rec.order, Order::AtLeast(T));
    assert_eq!(rec.m_tangent, Verdict::Indeterminate);
}
