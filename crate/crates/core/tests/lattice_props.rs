mod common;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use orbsurf_core::SurfaceModel;
use proptest::prelude::*;

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear(
        (s, classes) in common::surface_with_classes(3),
        a in -5i64..=5,
        b in -5i64..=5,
    ) {
        let (x, y, z) = (&classes[0], &classes[1], &classes[2]);
        prop_assert_eq!(s.intersect(x, y).unwrap(), s.intersect(y, x).unwrap());
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let combo = &(&a * x) + &(&b * y);
        prop_assert_eq!(
            s.intersect(&combo, z).unwrap(),
            &a * s.intersect(x, z).unwrap() + &b * s.intersect(y, z).unwrap()
        );
    }

    #[test]
    fn constructed_surfaces_satisfy_noether(s in common::surface()) {
        prop_assert_eq!((s.c1_sq() + s.c2()) % BigInt::from(12), BigInt::from(0));
        prop_assert_eq!(s.c1_sq(), &s.self_intersection(s.canonical()).unwrap());
    }

    #[test]
    fn blowup_bookkeeping(
        (s, classes) in common::surface_with_classes(2),
        n in 0i64..=6,
    ) {
        let (b, map) = s.blowup(n).unwrap();
        prop_assert_eq!(b.rank(), s.rank() + n as usize);
        prop_assert_eq!(b.c1_sq() + b.c2(), s.c1_sq() + s.c2());
        prop_assert_eq!(b.chi_o(), s.chi_o());
        prop_assert_eq!(b.c1_sq(), &(s.c1_sq() - BigInt::from(n)));
        let expected_k = &map.pullback(s.canonical()).unwrap() + &map.exceptional_sum();
        prop_assert_eq!(b.canonical(), &expected_k);

        let (x, y) = (&classes[0], &classes[1]);
        let (px, py) = (map.pullback(x).unwrap(), map.pullback(y).unwrap());
        prop_assert_eq!(b.intersect(&px, &py).unwrap(), s.intersect(x, y).unwrap());
        for i in 0..n as usize {
            let ei = map.exceptional(i);
            prop_assert_eq!(b.self_intersection(&ei).unwrap(), BigInt::from(-1));
            prop_assert_eq!(b.intersect(&ei, &px).unwrap(), BigInt::from(0));
            prop_assert_eq!(b.canonical_degree(&ei).unwrap(), BigInt::from(-1));
            for j in 0..i {
                prop_assert_eq!(b.intersect(&ei, &map.exceptional(j)).unwrap(), BigInt::from(0));
            }
        }
    }

    #[test]
    fn blowup_equals_iterated_single_blowups(s in common::surface(), n in 0i64..=5) {
        let (all_at_once, _) = s.blowup(n).unwrap();
        let mut step = s.clone();
        for _ in 0..n {
            step = step.blowup(1).unwrap().0;
        }
        prop_assert_eq!(all_at_once.c1_sq(), step.c1_sq());
        prop_assert_eq!(all_at_once.c2(), step.c2());
        prop_assert_eq!(all_at_once.gram(), step.gram());
        prop_assert_eq!(all_at_once.canonical(), step.canonical());
    }

    #[test]
    fn strict_transform_through_pencil_points_keeps_genus(
        (s, classes) in common::surface_with_classes(1),
    ) {
        let d0 = &classes[0];
        let n = s.self_intersection(d0).unwrap();
        prop_assume!(n >= BigInt::from(0) && n <= BigInt::from(40));
        let (b, map) = s.blowup(n.to_i64().unwrap()).unwrap();
        let d = map.strict_transform(d0).unwrap();
        prop_assert_eq!(b.self_intersection(&d).unwrap(), BigInt::from(0));
        prop_assert_eq!(b.genus_of(&d).unwrap(), s.genus_of(d0).unwrap());
    }
}

#[test]
fn many_point_blowup_of_base_family() {
    // 4ab² points for (a, b) = (36, 1): c1² goes 0 → -144 and c2 60 → 204.
    let (b0, l0) = orbsurf_core::covers::double_cover_quadric(3, 36, 1).unwrap();
    let n = b0.self_intersection(&l0).unwrap();
    assert_eq!(n, BigInt::from(144));
    let (b, _) = b0.blowup(144).unwrap();
    assert_eq!(b.c1_sq(), &BigInt::from(-144));
    assert_eq!(b.c2(), &BigInt::from(12 * 5 + 144));

    let mut step: SurfaceModel = b0.clone();
    for _ in 0..144 {
        step = step.blowup(1).unwrap().0;
    }
    assert_eq!((step.c1_sq(), step.c2()), (b.c1_sq(), b.c2()));
}
