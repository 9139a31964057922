#![allow(dead_code)]

use num_bigint::BigInt;
use orbsurf_core::{DivisorClass, SurfaceModel};
use proptest::prelude::*;

/// Random surface model of rank 1..=4 with small entries; `c2` is chosen so
/// that Noether integrality holds.
pub fn surface() -> impl Strategy<Value = SurfaceModel> {
    (1usize..=4).prop_flat_map(|rank| {
        (
            proptest::collection::vec(-3i64..=3, rank * rank),
            proptest::collection::vec(-3i64..=3, rank),
            -4i64..=6,
        )
            .prop_map(move |(entries, k, chi)| build(rank, &entries, &k, chi))
    })
}

pub fn build(rank: usize, entries: &[i64], k: &[i64], chi: i64) -> SurfaceModel {
    let mut gram = vec![vec![BigInt::from(0); rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let v = BigInt::from(entries[i * rank + j]);
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let mut c1_sq = BigInt::from(0);
    for i in 0..rank {
        for j in 0..rank {
            c1_sq += &gram[i][j] * k[i] * k[j];
        }
    }
    let canonical = DivisorClass::from_i64s(k);
    let c2 = BigInt::from(12 * chi) - c1_sq;
    SurfaceModel::new("random", labels(rank), &gram, canonical, c2)
        .expect("consistent by construction")
}

fn labels(rank: usize) -> Vec<String> {
    (0..rank).map(|i| format!("v{i}")).collect()
}

pub fn class_of_rank(rank: usize, bound: i64) -> impl Strategy<Value = DivisorClass> {
    proptest::collection::vec(-bound..=bound, rank).prop_map(|v| DivisorClass::from_i64s(&v))
}

/// Surface together with `count` classes in its lattice.
pub fn surface_with_classes(
    count: usize,
) -> impl Strategy<Value = (SurfaceModel, Vec<DivisorClass>)> {
    surface().prop_flat_map(move |s| {
        let r = s.rank();
        (
            Just(s),
            proptest::collection::vec(class_of_rank(r, 4), count),
        )
    })
}
