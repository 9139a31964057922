//! Certified search over the `(k, a, b, m)` family.
//!
//! `B0 → P¹×P¹` is the double cover branched in `|O(2(k+2), 4)|`, `L0 =
//! s*O(b, ab)`. Two general members of `|L0|` meet in `L0² = 4ab²` points;
//! blowing them up gives `B` with the strict transform `D = L0 - ΣE_i`, a
//! fibre of the resulting pencil, so `D² = 0`. The orbifold pair is
//! `(B, (1 - 1/m)·D)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::assumptions::{self, Assumption};
use crate::covers::{
    cyclic_cover_invariants, double_cover_quadric, p1p2_check, CoverResult, P1P2Record,
};
use crate::exact::{as_integer, json_int, json_rat};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::orbdiff::{alpha, log_chern, Multiplicity, OrbifoldPair, PairFlags};
use crate::{Error, Result};

/// Which class the degree-`m` cover of `B0` is branched in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchClassMode {
    /// Branched along `D0 ∈ |L0|`, which requires `L0 = m·L`; the cover
    /// formulas use `L = L0/m`.
    PencilClassOverM,
    /// Branched in `|m·L0|`; the cover formulas use `L = L0`.
    PencilClass,
}

impl fmt::Display for BranchClassMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchClassMode::PencilClassOverM => "pencil-class-over-m",
            BranchClassMode::PencilClass => "pencil-class",
        })
    }
}

impl FromStr for BranchClassMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('_', "-").as_str() {
            "pencil-class-over-m" => Ok(BranchClassMode::PencilClassOverM),
            "pencil-class" => Ok(BranchClassMode::PencilClass),
            _ => Err(Error::InvalidParameter {
                name: "mode",
                value: s.to_string(),
                reason: "expected `pencil-class` or `pencil-class-over-m`",
            }),
        }
    }
}

/// The blown-up surface and its pencil fibre, independent of `m`.
#[derive(Clone, Debug)]
pub struct BtGeometry {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub b0: SurfaceModel,
    pub l0: DivisorClass,
    pub surface: SurfaceModel,
    pub divisor: DivisorClass,
}

/// Builds `B0`, `L0`, `B = Bl_{L0²}(B0)` and `D = L0 - ΣE_i`.
pub fn bt_geometry(k: i64, a: i64, b: i64) -> Result<BtGeometry> {
    let (b0, l0) = double_cover_quadric(k, a, b)?;
    let points = b0.self_intersection(&l0)?;
    let n = points.to_i64().ok_or_else(|| Error::InvalidParameter {
        name: "a",
        value: a.to_string(),
        reason: "L0^2 does not fit a blowup count",
    })?;
    let (surface, map) = b0.blowup(n)?;
    let divisor = map.strict_transform(&l0)?;
    Ok(BtGeometry {
        k,
        a,
        b,
        surface: surface.with_name(format!("B(k={k},a={a},b={b})")),
        b0,
        l0,
        divisor,
    })
}

impl BtGeometry {
    /// The orbifold pair `(B, (1 - 1/m)·D)` with every geometric hypothesis
    /// flagged as assumed.
    pub fn orbifold_pair(&self, m: Multiplicity) -> Result<OrbifoldPair> {
        OrbifoldPair::new(
            self.surface.clone(),
            self.divisor.clone(),
            m,
            PairFlags::all(),
        )
    }
}

/// Named certificates of one configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BtChecks {
    pub p1: bool,
    pub p2_exact: bool,
    pub p2_paper_display: bool,
    pub bt5_divisibility: bool,
    pub bt6_cover_positive: bool,
    pub alpha_positive: bool,
}

impl BtChecks {
    pub fn all(&self) -> bool {
        self.p1
            && self.p2_exact
            && self.p2_paper_display
            && self.bt5_divisibility
            && self.bt6_cover_positive
            && self.alpha_positive
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [
            ("p1", self.p1),
            ("p2_exact", self.p2_exact),
            ("p2_paper_display", self.p2_paper_display),
            ("bt5_divisibility", self.bt5_divisibility),
            ("bt6_cover_positive", self.bt6_cover_positive),
            ("alpha_positive", self.alpha_positive),
        ]
        .into_iter()
        .filter_map(|(name, ok)| (!ok).then_some(name))
        .collect()
    }
}

/// One configuration with all derived invariants.
#[derive(Clone, Debug)]
pub struct BtConfig {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub mode: BranchClassMode,
    pub geometry: BtGeometry,
    pub g_d: BigInt,
    pub d_sq: BigInt,
    pub k_dot_d: BigInt,
    pub c1_sq_minus_c2: BigInt,
    pub alpha: BigRational,
    pub branch_class: Option<DivisorClass>,
    pub cover: Option<CoverResult>,
    pub p1p2: Option<P1P2Record>,
    pub checks: BtChecks,
    pub reasons: Vec<String>,
    pub assumptions: Vec<Assumption>,
}

/// `(m-1)·a > 12(k+2)/(k-2b)` with `k > 2b`, the sufficient condition shown
/// for the family (stronger than P2 with `L = L0`).
pub fn p2_paper_display(k: i64, a: i64, b: i64, m: i64) -> bool {
    if k <= 2 * b {
        return false;
    }
    let lhs = BigRational::from_integer(BigInt::from(m - 1) * BigInt::from(a));
    let rhs = BigRational::new(BigInt::from(12 * (k + 2)), BigInt::from(k - 2 * b));
    lhs > rhs
}

/// Assembles and certifies one configuration.
pub fn build_config(k: i64, a: i64, b: i64, m: i64, mode: BranchClassMode) -> Result<BtConfig> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "the orbifold multiplicity must be at least 2",
        });
    }
    let geometry = bt_geometry(k, a, b)?;
    let mb = BigInt::from(m);
    let mut reasons = Vec::new();

    let branch_class = match mode {
        BranchClassMode::PencilClass => Some(geometry.l0.clone()),
        BranchClassMode::PencilClassOverM => geometry.l0.div_exact(&mb),
    };
    let bt5_divisibility = match mode {
        BranchClassMode::PencilClass => true,
        BranchClassMode::PencilClassOverM => branch_class.is_some(),
    };
    if !bt5_divisibility {
        reasons.push(format!(
            "L0 = {} is not divisible by m = {m} in the lattice",
            geometry.l0
        ));
    }
    if k <= 2 * b {
        reasons.push(format!("k = {k} <= 2b = {}: P1 fails for L = L0", 2 * b));
    }

    let (cover, p1p2) = match &branch_class {
        Some(l) => (
            Some(cyclic_cover_invariants(&geometry.b0, l, m, true)?),
            Some(p1p2_check(&geometry.b0, l, m)?),
        ),
        None => (None, None),
    };
    if let Some(reason) = p1p2.as_ref().and_then(|r| r.reason.clone()) {
        reasons.push(reason);
    }

    let pair = geometry.orbifold_pair(Multiplicity::Finite(m as u64))?;
    let alpha = alpha(&pair)?;
    let s = &geometry.surface;
    let d_sq = s.self_intersection(&geometry.divisor)?;
    let k_dot_d = s.canonical_degree(&geometry.divisor)?;
    let g_d = pair.genus().clone();

    let checks = BtChecks {
        p1: p1p2.as_ref().is_some_and(|r| r.p1),
        p2_exact: p1p2.as_ref().is_some_and(|r| r.p2),
        p2_paper_display: p2_paper_display(k, a, b, m),
        bt5_divisibility,
        bt6_cover_positive: cover.as_ref().is_some_and(|c| c.difference.is_positive()),
        alpha_positive: alpha.is_positive(),
    };
    if !checks.alpha_positive {
        reasons.push(format!("alpha = {alpha} is not positive"));
    }
    if g_d < BigInt::from(2) {
        reasons.push(format!("g(D) = {g_d} < 2"));
    }

    let mut assumption_lists: Vec<&[Assumption]> = vec![&[
        Assumption::SmoothQuadricBranchCurve,
        Assumption::AmpleBasePointFreePencil,
        Assumption::TransversePencil,
        Assumption::DivisorSmoothIrreducible,
        Assumption::NormalBundleTrivial,
        Assumption::KodairaDimensionOne,
        Assumption::FundamentalGroupNotModelled,
    ]];
    if let Some(c) = &cover {
        assumption_lists.push(&c.assumptions);
    }
    if mode == BranchClassMode::PencilClassOverM {
        assumption_lists.push(&[Assumption::PicardDivisibility]);
    }
    let assumptions = assumptions::merge(&assumption_lists);

    Ok(BtConfig {
        k,
        a,
        b,
        m,
        mode,
        c1_sq_minus_c2: s.c1_sq_minus_c2(),
        geometry,
        g_d,
        d_sq,
        k_dot_d,
        alpha,
        branch_class,
        cover,
        p1p2,
        checks,
        reasons,
        assumptions,
    })
}

impl BtConfig {
    pub fn certified(&self) -> bool {
        self.checks.all() && self.g_d >= BigInt::from(2)
    }

    pub fn orbifold_pair(&self) -> Result<OrbifoldPair> {
        self.geometry
            .orbifold_pair(Multiplicity::Finite(self.m as u64))
    }

    /// Structural invariants every configuration satisfies. Returns the
    /// names of violated ones.
    pub fn invariant_violations(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let g = &self.geometry;
        let (k, a, b) = (
            BigInt::from(self.k),
            BigInt::from(self.a),
            BigInt::from(self.b),
        );
        if !self.d_sq.is_zero() {
            bad.push(format!("D.D = {} != 0", self.d_sq));
        }
        let expected_g = BigInt::one() + &k * &a * &b + BigInt::from(2) * &a * &b * &b;
        if self.g_d != expected_g {
            bad.push(format!(
                "g_D = {} != 1 + kab + 2ab^2 = {expected_g}",
                self.g_d
            ));
        }
        let expected_kd = BigInt::from(2) * &k * &a * &b + BigInt::from(4) * &a * &b * &b;
        if self.k_dot_d != expected_kd {
            bad.push(format!(
                "K_B.D = {} != 2kab + 4ab^2 = {expected_kd}",
                self.k_dot_d
            ));
        }
        let g_b0 = g.b0.genus_of(&g.l0)?;
        if as_integer(&g_b0).as_ref() != Some(&self.g_d) {
            bad.push(format!(
                "genus on B0 = {g_b0} differs from genus on B = {}",
                self.g_d
            ));
        }
        if g.b0.chi_o() != g.surface.chi_o() {
            bad.push("chi(O) changed under blowup".into());
        }

        let pair = self.orbifold_pair()?;
        let lc = log_chern(&pair)?;
        let m = BigInt::from(self.m);
        let lhs = &self.alpha * BigRational::from_integer(m.pow(3));
        let rhs = BigRational::from_integer(
            &lc.diff * m.pow(3) - BigInt::from(2) * (&self.g_d - BigInt::one()) * m.pow(2),
        );
        if lhs != rhs {
            bad.push(format!(
                "alpha m^3 = {lhs} != (e1^2 - e2) m^3 - 2(g-1) m^2 = {rhs}"
            ));
        }
        Ok(bad)
    }

    /// Recomputes the cover certificates through the covers module.
    pub fn reverify(&self) -> Result<bool> {
        let Some(l) = &self.branch_class else {
            return Ok(!self.checks.bt6_cover_positive && !self.checks.p1);
        };
        let cover = cyclic_cover_invariants(&self.geometry.b0, l, self.m, true)?;
        let p1p2 = p1p2_check(&self.geometry.b0, l, self.m)?;
        Ok(Some(&cover) == self.cover.as_ref()
            && Some(&p1p2) == self.p1p2.as_ref()
            && cover.difference.is_positive() == self.checks.bt6_cover_positive)
    }

    pub fn record(&self) -> BtRecord {
        let s = &self.geometry.surface;
        BtRecord {
            k: self.k,
            a: self.a,
            b: self.b,
            m: self.m,
            branch_class_mode: self.mode,
            b0: self.geometry.b0.clone(),
            l0: self.geometry.l0.clone(),
            blown_up_points: s.rank() - self.geometry.b0.rank(),
            b_c1_sq: s.c1_sq().clone(),
            b_c2: s.c2().clone(),
            b_chi_o: s.chi_o(),
            d_sq: self.d_sq.clone(),
            k_dot_d: self.k_dot_d.clone(),
            g_d: self.g_d.clone(),
            c1_sq_minus_c2: self.c1_sq_minus_c2.clone(),
            alpha: self.alpha.clone(),
            branch_class: self.branch_class.clone(),
            cover: self.cover.clone(),
            p1p2: self.p1p2.clone(),
            checks: self.checks,
            certified: self.certified(),
            reasons: self.reasons.clone(),
            assumptions: self.assumptions.clone(),
        }
    }
}

/// Serializable view of a [`BtConfig`]; the blown-up lattice is summarised
/// by its rank and Chern numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BtRecord {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub branch_class_mode: BranchClassMode,
    pub b0: SurfaceModel,
    pub l0: DivisorClass,
    pub blown_up_points: usize,
    #[serde(with = "json_int")]
    pub b_c1_sq: BigInt,
    #[serde(with = "json_int")]
    pub b_c2: BigInt,
    #[serde(with = "json_int")]
    pub b_chi_o: BigInt,
    #[serde(with = "json_int")]
    pub d_sq: BigInt,
    #[serde(with = "json_int")]
    pub k_dot_d: BigInt,
    #[serde(with = "json_int")]
    pub g_d: BigInt,
    #[serde(with = "json_int")]
    pub c1_sq_minus_c2: BigInt,
    #[serde(with = "json_rat")]
    pub alpha: BigRational,
    pub branch_class: Option<DivisorClass>,
    pub cover: Option<CoverResult>,
    pub p1p2: Option<P1P2Record>,
    pub checks: BtChecks,
    pub certified: bool,
    pub reasons: Vec<String>,
    pub assumptions: Vec<Assumption>,
}

/// Inclusive integer range `lo..=hi`; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    pub fn single(v: i64) -> Self {
        IntRange { lo: v, hi: v }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    /// `"lo..hi"` (inclusive) or a single integer.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| t.trim().to_string());
        match s.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                Ok(IntRange::new(parse(lo)?, parse(hi)?))
            }
            None => parse(s).map(IntRange::single),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchRanges {
    pub k: IntRange,
    pub a: IntRange,
    pub b: IntRange,
    pub m: IntRange,
}

impl SearchRanges {
    /// Grid points in lexicographic `(k, a, b, m)` order.
    pub fn cells(&self) -> Vec<(i64, i64, i64, i64)> {
        let mut out = Vec::new();
        for k in self.k.iter() {
            for a in self.a.iter() {
                for b in self.b.iter() {
                    for m in self.m.iter() {
                        out.push((k, a, b, m));
                    }
                }
            }
        }
        out
    }
}

/// Grid point where the displayed sufficient condition and exact P2 differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P2Disagreement {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub p2_exact: bool,
    pub p2_paper_display: bool,
    #[serde(serialize_with = "crate::exact::json_opt_rat::serialize")]
    pub p2_threshold: Option<BigRational>,
}

/// Grid point that did not certify.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub m: i64,
    #[serde(with = "json_int")]
    pub g_d: BigInt,
    #[serde(with = "json_int")]
    pub k_dot_d: BigInt,
    #[serde(with = "json_rat")]
    pub alpha: BigRational,
    pub failed: Vec<&'static str>,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub ranges: SearchRanges,
    pub mode: BranchClassMode,
    pub cells_evaluated: usize,
    pub certified: Vec<BtRecord>,
    pub disagreements: Vec<P2Disagreement>,
    pub rejected: Vec<Rejection>,
}

/// Evaluates every grid cell. Cells may run on the current rayon pool; the
/// report is in lexicographic order regardless of scheduling.
pub fn search(ranges: &SearchRanges, mode: BranchClassMode) -> Result<SearchReport> {
    let cells = ranges.cells();
    let configs: Vec<BtConfig> = cells
        .par_iter()
        .map(|&(k, a, b, m)| build_config(k, a, b, m, mode))
        .collect::<Result<_>>()?;

    let mut certified = Vec::new();
    let mut disagreements = Vec::new();
    let mut rejected = Vec::new();
    for c in &configs {
        if c.checks.p2_exact != c.checks.p2_paper_display {
            disagreements.push(P2Disagreement {
                k: c.k,
                a: c.a,
                b: c.b,
                m: c.m,
                p2_exact: c.checks.p2_exact,
                p2_paper_display: c.checks.p2_paper_display,
                p2_threshold: c.p1p2.as_ref().and_then(|r| r.p2_threshold.clone()),
            });
        }
        if c.certified() {
            let violations = c.invariant_violations()?;
            assert!(
                violations.is_empty(),
                "certified config violates invariants: {violations:?}"
            );
            assert!(c.reverify()?, "cover certificates reproduce");
            certified.push(c.record());
        } else {
            let mut failed = c.checks.failed();
            if c.g_d < BigInt::from(2) {
                failed.push("genus_at_least_two");
            }
            rejected.push(Rejection {
                k: c.k,
                a: c.a,
                b: c.b,
                m: c.m,
                g_d: c.g_d.clone(),
                k_dot_d: c.k_dot_d.clone(),
                alpha: c.alpha.clone(),
                failed,
                reasons: c.reasons.clone(),
            });
        }
    }
    Ok(SearchReport {
        ranges: *ranges,
        mode,
        cells_evaluated: configs.len(),
        certified,
        disagreements,
        rejected,
    })
}
