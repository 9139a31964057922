//! Chern numbers of cyclic branched covers.
//!
//! For a degree `m` cyclic cover `r: S' → S` branched along a smooth
//! `D ∈ |mL|` the ramification formula gives `K_{S'} = r*(K_S + (m-1)L)`,
//! and the Euler number follows from `χ_top(S') = m·χ_top(S) - (m-1)·χ_top(D)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::assumptions::Assumption;
use crate::exact::{json_int, json_opt_rat, json_rat};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::{Error, Result};

/// Chern numbers of a cyclic cover; wire form `{m, c1_sq, c2, diff, assumptions}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub m: i64,
    #[serde(rename = "c1_sq", with = "json_int")]
    pub c1_sq_cover: BigInt,
    #[serde(rename = "c2", with = "json_int")]
    pub c2_cover: BigInt,
    #[serde(rename = "diff", with = "json_int")]
    pub difference: BigInt,
    #[serde(with = "json_rat")]
    pub chi_o: BigRational,
    pub assumptions: Vec<Assumption>,
}

impl CoverResult {
    pub fn canonical_pullback_note(&self) -> &'static str {
        Assumption::CoverCanonicalFormula.statement()
    }
}

fn check_degree(m: i64) -> Result<BigInt> {
    if m <= 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "cover degree must be at least 1",
        });
    }
    Ok(BigInt::from(m))
}

/// `(c1², c2, c1² - c2)` of the degree `m` cyclic cover of `s` branched in `|mL|`.
///
/// With `smooth_branch_asserted` the caller vouches for a smooth branch
/// curve; the assertion is recorded and the cover must then satisfy Noether
/// integrality, otherwise the numbers cannot come from a real cover.
pub fn cyclic_cover_invariants(
    s: &SurfaceModel,
    l: &DivisorClass,
    m: i64,
    smooth_branch_asserted: bool,
) -> Result<CoverResult> {
    let mb = check_degree(m)?;
    let kl = s.canonical_degree(l)?;
    let ll = s.self_intersection(l)?;
    let m1 = &mb - BigInt::one();

    let c1_sq_cover = &mb * (s.c1_sq() + &m1 * (BigInt::from(2) * &kl + &m1 * &ll));
    let c2_cover = &mb * (s.c2() + &m1 * (&kl + &mb * &ll));
    let difference = &mb * (s.c1_sq_minus_c2() + &m1 * (&kl - &ll));
    assert_eq!(
        difference,
        &c1_sq_cover - &c2_cover,
        "cover identity c1^2 - c2 must hold"
    );

    let chi_o = BigRational::new(&c1_sq_cover + &c2_cover, BigInt::from(12));
    let mut assumptions = vec![Assumption::CoverCanonicalFormula];
    if smooth_branch_asserted {
        if !chi_o.is_integer() {
            return Err(Error::NoetherIntegrality {
                lattice: format!("degree {m} cover of {}", s.name()),
                sum: (&c1_sq_cover + &c2_cover).to_string(),
            });
        }
        assumptions.insert(0, Assumption::SmoothBranchDivisor);
    }

    Ok(CoverResult {
        m,
        c1_sq_cover,
        c2_cover,
        difference,
        chi_o,
        assumptions,
    })
}

/// The double cover `B0 → P¹×P¹` branched along a smooth curve in
/// `|O(2(k+2), 4)|`, together with `L0 = s*O(b, ab)`.
///
/// The lattice of `B0` is the pullback of the quadric's lattice, so every
/// pairing is doubled; `K_{B0} = s*O(k, 0)`.
pub fn double_cover_quadric(k: i64, a: i64, b: i64) -> Result<(SurfaceModel, DivisorClass)> {
    for (name, v) in [("k", k), ("a", a), ("b", b)] {
        if v < 1 {
            return Err(Error::InvalidParameter {
                name,
                value: v.to_string(),
                reason: "must be a positive integer",
            });
        }
    }
    let quadric = SurfaceModel::quadric();
    let half_branch = quadric.class(&[k + 2, 2])?;
    let cover = cyclic_cover_invariants(&quadric, &half_branch, 2, true)?;

    let doubled: Vec<Vec<BigInt>> = quadric
        .gram()
        .iter()
        .map(|row| row.iter().map(|x| BigInt::from(2) * x).collect())
        .collect();
    let b0 = SurfaceModel::new(
        format!("B0(k={k})"),
        vec!["s*f1".into(), "s*f2".into()],
        &doubled,
        DivisorClass::from_i64s(&[k, 0]),
        cover.c2_cover.clone(),
    )?;
    assert_eq!(
        b0.c1_sq(),
        &cover.c1_sq_cover,
        "K_B0^2 from the lattice and the cover formula agree"
    );

    let l0 = b0.class(&[b, a * b])?;
    Ok((b0, l0))
}

/// Outcome of the two sufficient conditions for `c1²(S') - c2(S') > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1P2Record {
    pub m: i64,
    #[serde(with = "json_int")]
    pub k_dot_l: BigInt,
    #[serde(with = "json_int")]
    pub l_sq: BigInt,
    pub p1: bool,
    pub p2: bool,
    /// `1 - (c1² - c2)/(K·L - L²)`, present only when P1 holds.
    #[serde(with = "json_opt_rat")]
    pub p2_threshold: Option<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Checks `P1: K·L > L²` and `P2: m > 1 - (c1² - c2)/(K·L - L²)`.
///
/// When both hold the cover difference is recomputed and must be positive.
pub fn p1p2_check(s: &SurfaceModel, l: &DivisorClass, m: i64) -> Result<P1P2Record> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "P1/P2 need a cover degree of at least 2",
        });
    }
    let kl = s.canonical_degree(l)?;
    let ll = s.self_intersection(l)?;
    let gap = &kl - &ll;
    let p1 = gap.is_positive();

    let (p2, p2_threshold, reason) = if p1 {
        let threshold = BigRational::one() - BigRational::new(s.c1_sq_minus_c2(), gap.clone());
        let p2 = BigRational::from_integer(BigInt::from(m)) > threshold;
        let reason = (!p2).then(|| format!("P2 fails: m = {m} is not above {threshold}"));
        (p2, Some(threshold), reason)
    } else if gap.is_zero() {
        (
            false,
            None,
            Some("P1 fails (degenerate denominator)".to_string()),
        )
    } else {
        (
            false,
            None,
            Some(format!("P1 fails: K.L = {kl} < L^2 = {ll}")),
        )
    };

    if p1 && p2 {
        let cover = cyclic_cover_invariants(s, l, m, false)?;
        assert!(
            cover.difference.is_positive(),
            "P1 and P2 must force a positive cover difference"
        );
    }

    Ok(P1P2Record {
        m,
        k_dot_l: kl,
        l_sq: ll,
        p1,
        p2,
        p2_threshold,
        reason,
    })
}

/// Smallest integer `m ≥ 2` satisfying P2, if P1 holds.
pub fn minimal_p2_degree(threshold: &BigRational) -> BigInt {
    let candidate = threshold.floor().to_integer() + BigInt::one();
    candidate.max(BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn plane_double_cover_is_the_quadric() {
        let p2 = SurfaceModel::projective_plane();
        let h = p2.class(&[1]).unwrap();
        let c = cyclic_cover_invariants(&p2, &h, 2, true).unwrap();
        assert_eq!(
            (c.c1_sq_cover.clone(), c.c2_cover.clone()),
            (int(8), int(4))
        );
        assert_eq!(c.difference, int(4));
        assert_eq!(c.chi_o, rat(1, 1));
        assert_eq!(
            c.assumptions,
            vec![
                Assumption::SmoothBranchDivisor,
                Assumption::CoverCanonicalFormula
            ]
        );
    }

    #[test]
    fn degree_one_cover_is_identity() {
        let s = SurfaceModel::quadric();
        let l = s.class(&[3, -1]).unwrap();
        let c = cyclic_cover_invariants(&s, &l, 1, false).unwrap();
        assert_eq!(&c.c1_sq_cover, s.c1_sq());
        assert_eq!(&c.c2_cover, s.c2());
    }

    #[test]
    fn non_positive_degree_is_rejected() {
        let s = SurfaceModel::quadric();
        let l = s.class(&[1, 1]).unwrap();
        assert!(cyclic_cover_invariants(&s, &l, 0, false).is_err());
        assert!(cyclic_cover_invariants(&s, &l, -3, false).is_err());
    }

    #[test]
    fn quadric_double_cover_family() {
        let s = SurfaceModel::quadric();
        for k in 1..=20 {
            let l = s.class(&[k + 2, 2]).unwrap();
            let c = cyclic_cover_invariants(&s, &l, 2, true).unwrap();
            assert_eq!(c.c1_sq_cover, int(0));
            assert_eq!(c.c2_cover, int(12 * (k + 2)));
        }
    }

    #[test]
    fn double_cover_numbers() {
        let (b0, _) = double_cover_quadric(1, 1, 1).unwrap();
        assert_eq!((b0.c1_sq().clone(), b0.c2().clone()), (int(0), int(36)));

        let (b0, l0) = double_cover_quadric(3, 1, 1).unwrap();
        assert_eq!(b0.canonical_degree(&l0).unwrap(), int(6));
        assert_eq!(b0.self_intersection(&l0).unwrap(), int(4));

        for k in 1..=20 {
            let (b0, _) = double_cover_quadric(k, 2, 3).unwrap();
            assert_eq!(b0.chi_o(), int(k + 2));
            assert_eq!(b0.chi_o_rational(), rat(k + 2, 1));
        }
    }

    #[test]
    fn double_cover_pairing_is_doubled() {
        let p = SurfaceModel::quadric();
        let (b0, _) = double_cover_quadric(4, 1, 1).unwrap();
        for x in [[1, 0], [0, 1], [2, -3], [5, 7]] {
            for y in [[1, 1], [-2, 4], [0, 3]] {
                let lhs = b0
                    .intersect(&b0.class(&x).unwrap(), &b0.class(&y).unwrap())
                    .unwrap();
                let rhs = p
                    .intersect(&p.class(&x).unwrap(), &p.class(&y).unwrap())
                    .unwrap();
                assert_eq!(lhs, int(2) * rhs);
            }
        }
    }

    #[test]
    fn double_cover_rejects_bad_parameters() {
        assert!(double_cover_quadric(0, 1, 1).is_err());
        assert!(double_cover_quadric(1, -1, 1).is_err());
        assert!(double_cover_quadric(1, 1, 0).is_err());
    }

    #[test]
    fn p1p2_on_small_base() {
        let (b0, l0) = double_cover_quadric(3, 1, 1).unwrap();
        let r32 = p1p2_check(&b0, &l0, 32).unwrap();
        assert!(r32.p1);
        assert_eq!(r32.p2_threshold, Some(rat(31, 1)));
        assert!(r32.p2);
        let r31 = p1p2_check(&b0, &l0, 31).unwrap();
        assert!(r31.p1 && !r31.p2);
        assert_eq!(minimal_p2_degree(&rat(31, 1)), int(32));
        assert_eq!(minimal_p2_degree(&rat(-7, 2)), int(2));
    }

    #[test]
    fn p1p2_degenerate_denominator() {
        // L = 0 has K·L = L² = 0.
        let s = SurfaceModel::quadric();
        let l = s.class(&[0, 0]).unwrap();
        let r = p1p2_check(&s, &l, 5).unwrap();
        assert!(!r.p1 && !r.p2);
        assert_eq!(
            r.reason.as_deref(),
            Some("P1 fails (degenerate denominator)")
        );
        assert!(p1p2_check(&s, &l, 1).is_err());
    }

    #[test]
    fn nonnegative_difference_passes_for_every_degree() {
        // c1² - c2 = 4 ≥ 0 on P1xP1; K·L > L² for L = (1, -1): K·L = 0, L² = -2.
        let s = SurfaceModel::quadric();
        let l = s.class(&[1, -1]).unwrap();
        for m in 2..30 {
            let r = p1p2_check(&s, &l, m).unwrap();
            assert!(r.p1 && r.p2, "m = {m}");
        }
    }
}
