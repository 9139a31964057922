//! Geometric facts that a numerical model cannot check and that every
//! certificate records explicitly.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// A smooth member of |mL| exists and the cover is branched along it.
    SmoothBranchDivisor,
    /// K_{S'} = r^*(K_S + (m-1)L) for the cyclic cover r: S' -> S.
    CoverCanonicalFormula,
    /// The branch curve R in |O(2(k+2), 4)| on P¹×P¹ is smooth.
    SmoothQuadricBranchCurve,
    /// Two members of |L0| meet transversally in exactly L0² points.
    TransversePencil,
    /// |L0| is base-point free and L0 is ample.
    AmpleBasePointFreePencil,
    /// Lattice-level divisibility of L0 by m holds in Pic(B0).
    PicardDivisibility,
    /// The branch divisor D is a smooth irreducible curve.
    DivisorSmoothIrreducible,
    /// O_D(D) is trivial.
    NormalBundleTrivial,
    /// The surface has Kodaira dimension one.
    KodairaDimensionOne,
    /// h²(Sym^M Ω¹(log D)) ≤ 1 + g(D).
    H2BoundOnePlusGenus,
    /// The same h² bound holds after twisting by A^{-1}.
    TwistedH2Bound,
    /// h⁰ of the quotient sheaf does not increase after twisting by A^{-1}.
    TwistedQuotientBound,
    /// Simple connectivity of B - D and the fibration X -> B are not modelled.
    FundamentalGroupNotModelled,
}

impl Assumption {
    pub fn id(self) -> &'static str {
        match self {
            Assumption::SmoothBranchDivisor => "smooth-branch-divisor",
            Assumption::CoverCanonicalFormula => "cover-canonical-formula",
            Assumption::SmoothQuadricBranchCurve => "smooth-quadric-branch-curve",
            Assumption::TransversePencil => "transverse-pencil",
            Assumption::AmpleBasePointFreePencil => "ample-base-point-free-pencil",
            Assumption::PicardDivisibility => "picard-divisibility",
            Assumption::DivisorSmoothIrreducible => "divisor-smooth-irreducible",
            Assumption::NormalBundleTrivial => "normal-bundle-trivial",
            Assumption::KodairaDimensionOne => "kodaira-dimension-one",
            Assumption::H2BoundOnePlusGenus => "h2-bound-one-plus-genus",
            Assumption::TwistedH2Bound => "twisted-h2-bound",
            Assumption::TwistedQuotientBound => "twisted-quotient-bound",
            Assumption::FundamentalGroupNotModelled => "fundamental-group-not-modelled",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Assumption::SmoothBranchDivisor => {
                "a smooth member of |mL| exists and is the branch locus"
            }
            Assumption::CoverCanonicalFormula => "K_S' = r*(K_S + (m-1)L)",
            Assumption::SmoothQuadricBranchCurve => "the branch curve in |O(2(k+2),4)| is smooth",
            Assumption::TransversePencil => {
                "two general members of |L0| meet transversally in L0^2 points"
            }
            Assumption::AmpleBasePointFreePencil => "L0 is ample and |L0| is base-point free",
            Assumption::PicardDivisibility => "lattice divisibility of L0 by m holds in Pic(B0)",
            Assumption::DivisorSmoothIrreducible => "D is smooth and irreducible",
            Assumption::NormalBundleTrivial => "O_D(D) is trivial",
            Assumption::KodairaDimensionOne => "kappa(B) = 1",
            Assumption::H2BoundOnePlusGenus => "h2(Sym^M Omega^1_B(log D)) <= 1 + g(D)",
            Assumption::TwistedH2Bound => "h2(Sym^M Omega^1_B(log D) (x) A^-1) <= 1 + g(D)",
            Assumption::TwistedQuotientBound => "h0(Q (x) A^-1) <= h0(Q) for the quotient sheaf Q",
            Assumption::FundamentalGroupNotModelled => {
                "simple connectivity of B - D and the fibration over B are not checked"
            }
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Sorted, duplicate-free union of assumption lists.
pub fn merge(lists: &[&[Assumption]]) -> Vec<Assumption> {
    let mut out: Vec<Assumption> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    out.sort();
    out.dedup();
    out
}
