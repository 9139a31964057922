//! Orbifold symmetric differentials on a pair `(B, Δ)`, `Δ = (1 - 1/m)·D`.
//!
//! Near a point of `D = {y = 0}` a section of the integral part
//! `[Sym^N](Ω¹_{(B/Δ)})` is `Σ a_j · y^{e(j,m)} · (dy/y)^j ⊗ dx^{N-j}` with
//! `e(j, m) = ⌊j/m⌋ + ε(j, m)`, `ε = 0` iff `m | j`. Everything here is the
//! numerical side of that sheaf: its exponents, the dimension of its
//! quotient inside `Sym^N Ω¹(log D)`, the Chern numbers of `Ω¹(log D)`, the
//! Riemann–Roch polynomial of its symmetric powers, and the resulting
//! certified lower bound for `h⁰`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::assumptions::Assumption;
use crate::exact::{as_integer, json_int, json_rat, rat_from_int};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::poly::BoundPolynomial;
use crate::{Error, Result};

/// Orbifold multiplicity `m ≥ 2`, or `∞` for the logarithmic case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(m: i64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m.to_string(),
                reason: "orbifold multiplicity must be at least 2",
            });
        }
        Ok(Multiplicity::Finite(m as u64))
    }

    pub fn value(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Multiplicity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Multiplicity::Infinite);
        }
        let m: i64 = s.parse().map_err(|_| Error::InvalidParameter {
            name: "m",
            value: s.to_string(),
            reason: "expected an integer or `inf`",
        })?;
        Multiplicity::finite(m)
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `e(j, m) = ⌊j/m⌋ + ε(j, m)`, i.e. `⌈j/m⌉`; zero for `m = ∞`.
///
/// `e(j, m) = k` exactly when `(k-1)m + 1 ≤ j ≤ km`.
pub fn exponent(j: u64, m: Multiplicity) -> u64 {
    match m {
        Multiplicity::Finite(m) => {
            let eps = u64::from(!j.is_multiple_of(m));
            j / m + eps
        }
        Multiplicity::Infinite => 0,
    }
}

/// Pole order `j - e(j, m) = ⌊(1 - 1/m)·j⌋` of the `(dy)^j` term along `D`.
pub fn pole_order(j: u64, m: Multiplicity) -> u64 {
    j - exponent(j, m)
}

/// `r(j, k; m) = e(j) + e(k) - e(j + k)`, the power of `y` picked up when
/// multiplying the `j`- and `k`-th terms. Never negative.
pub fn mult_defect(j: u64, k: u64, m: Multiplicity) -> i64 {
    exponent(j, m) as i64 + exponent(k, m) as i64 - exponent(j + k, m) as i64
}

fn check_genus(g: &BigInt) -> Result<()> {
    if g < &BigInt::from(2) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g.to_string(),
            reason: "bounds on a curve need genus at least 2",
        });
    }
    Ok(())
}

/// `h⁰(D, K_D^{⊗n})` on a curve of genus `g ≥ 2`.
pub fn h0_canonical_power(n: i64, g: &BigInt) -> Result<BigInt> {
    check_genus(g)?;
    Ok(match n {
        n if n < 0 => BigInt::zero(),
        0 => BigInt::one(),
        1 => g.clone(),
        n => BigInt::from(2 * n - 1) * (g - BigInt::one()),
    })
}

fn check_qm(q: u64, m: u64) -> Result<()> {
    if q < 1 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q.to_string(),
            reason: "q must be at least 1",
        });
    }
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "orbifold multiplicity must be at least 2",
        });
    }
    Ok(())
}

/// Upper bound for `h⁰(D, Q)`, `Q = S^{qm}(∞)/S^{qm}(m)`, by direct summation
/// over the filtration of `Q`.
///
/// The graded piece at `j = (h-1)m + k` (`1 ≤ h ≤ q`, `1 ≤ k ≤ m`) has rank
/// `h` and contributes `h · h⁰(K_D^{(q-h+1)m - k})`, using the true values of
/// `h⁰` for the exponents 0 and 1. A constant 1 is added on top, as in the
/// displayed majorization this refines.
pub fn quotient_bound_exact(q: u64, m: u64, g: &BigInt) -> Result<BigInt> {
    check_qm(q, m)?;
    check_genus(g)?;
    let mut total = BigInt::one();
    for h in 1..=q {
        let mut inner = BigInt::zero();
        for k in 1..=m {
            let n = ((q - h + 1) * m - k) as i64;
            inner += h0_canonical_power(n, g)?;
        }
        total += BigInt::from(h) * inner;
    }
    Ok(total)
}

/// Closed form of [`quotient_bound_exact`] as a polynomial in `q`, valid for
/// every `q ≥ 1`:
/// `1 + q(g+1) + (g-1)m·[m·q(q+1)(q+2)/3 - (m+2)·q(q+1)/2]`.
pub fn quotient_bound_exact_polynomial(m: u64, g: &BigInt) -> Result<BoundPolynomial> {
    check_qm(1, m)?;
    check_genus(g)?;
    let mr = BigRational::from_integer(BigInt::from(m));
    let gr = rat_from_int(g);
    let one = BigRational::one();
    let q = BoundPolynomial::identity();
    let q012 = BoundPolynomial::from_linear_factors(&[
        BigRational::zero(),
        one.clone(),
        BigRational::from_integer(2.into()),
    ]);
    let q01 = BoundPolynomial::from_linear_factors(&[BigRational::zero(), one.clone()]);

    let cubic = q012.scale(&(&mr / BigRational::from_integer(3.into())));
    let quad = q01.scale(
        &((&mr + BigRational::from_integer(2.into())) / BigRational::from_integer(2.into())),
    );
    let main = (&cubic - &quad).scale(&((&gr - &one) * &mr));
    let small = &BoundPolynomial::constant(one.clone()) + &q.scale(&(&gr + &one));
    Ok(&main + &small)
}

/// The displayed majorization `Σ_{h=1}^{q} m·h·(2(q-h+1)m - 1)(g-1)`.
pub fn quotient_bound_paper(q: u64, m: u64, g: &BigInt) -> Result<BigInt> {
    check_qm(q, m)?;
    check_genus(g)?;
    let g1 = g - BigInt::one();
    Ok((1..=q)
        .map(|h| BigInt::from(m * h) * BigInt::from(2 * (q - h + 1) * m - 1) * &g1)
        .sum())
}

/// [`quotient_bound_paper`] as a polynomial in `q`:
/// `(g-1)m·[m·q(q+1)(q+2)/3 - q(q+1)/2]`, cubic coefficient `(g-1)m²/3`.
pub fn quotient_bound_paper_polynomial(m: u64, g: &BigInt) -> Result<BoundPolynomial> {
    check_qm(1, m)?;
    check_genus(g)?;
    let mr = BigRational::from_integer(BigInt::from(m));
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let q012 =
        BoundPolynomial::from_linear_factors(&[BigRational::zero(), one.clone(), two.clone()]);
    let q01 = BoundPolynomial::from_linear_factors(&[BigRational::zero(), one.clone()]);
    let cubic = q012.scale(&(&mr / BigRational::from_integer(3.into())));
    let quad = q01.scale(&(one.clone() / two));
    Ok((&cubic - &quad).scale(&((rat_from_int(g) - one) * mr)))
}

/// Excess of the exact summation over the `(2n-1)(g-1)` formula from the
/// terms `n = 0` (true value 1) and `n = 1` (true value `g`), plus the
/// leading constant: `1 + q(g+1)`.
///
/// `quotient_bound_exact ≤ quotient_bound_paper + small_exponent_correction`.
pub fn small_exponent_correction(q: u64, g: &BigInt) -> BigInt {
    BigInt::one() + BigInt::from(q) * (g + BigInt::one())
}

/// Hypothesis flags that cannot be read off the lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairFlags {
    pub divisor_smooth_irreducible: bool,
    pub normal_bundle_trivial: bool,
    pub kodaira_dimension_one: bool,
}

impl PairFlags {
    pub fn all() -> Self {
        PairFlags {
            divisor_smooth_irreducible: true,
            normal_bundle_trivial: true,
            kodaira_dimension_one: true,
        }
    }
}

/// A surface with an orbifold divisor `Δ = (1 - 1/m)·D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldPair {
    surface: SurfaceModel,
    divisor: DivisorClass,
    multiplicity: Multiplicity,
    genus: BigInt,
    flags: PairFlags,
}

impl OrbifoldPair {
    /// Fails if `D` is not in the lattice, if its adjunction genus is not an
    /// integer, or if `normal_bundle_trivial` is set while `D·D ≠ 0`.
    pub fn new(
        surface: SurfaceModel,
        divisor: DivisorClass,
        multiplicity: Multiplicity,
        flags: PairFlags,
    ) -> Result<Self> {
        let genus = surface.genus_of(&divisor)?;
        let genus = as_integer(&genus).ok_or_else(|| Error::NonIntegralGenus(genus.to_string()))?;
        if flags.normal_bundle_trivial {
            let d_sq = surface.self_intersection(&divisor)?;
            if !d_sq.is_zero() {
                return Err(Error::NontrivialNormalBundle {
                    d_sq: d_sq.to_string(),
                });
            }
        }
        Ok(OrbifoldPair {
            surface,
            divisor,
            multiplicity,
            genus,
            flags,
        })
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn divisor(&self) -> &DivisorClass {
        &self.divisor
    }

    pub fn multiplicity(&self) -> Multiplicity {
        self.multiplicity
    }

    pub fn genus(&self) -> &BigInt {
        &self.genus
    }

    pub fn flags(&self) -> PairFlags {
        self.flags
    }

    pub fn with_multiplicity(&self, m: Multiplicity) -> OrbifoldPair {
        OrbifoldPair {
            multiplicity: m,
            ..self.clone()
        }
    }

    /// `K_B·D`.
    pub fn k_dot_d(&self) -> BigInt {
        self.surface
            .canonical_degree(&self.divisor)
            .expect("divisor rank checked at construction")
    }

    fn finite_m(&self) -> Result<u64> {
        self.multiplicity.value().ok_or(Error::InfiniteMultiplicity)
    }

    fn require_trivial_normal_bundle(&self) -> Result<()> {
        if !self.flags.normal_bundle_trivial {
            return Err(Error::UnmetHypotheses(vec!["O_D(D) trivial".into()]));
        }
        let d_sq = self.surface.self_intersection(&self.divisor)?;
        if !d_sq.is_zero() {
            return Err(Error::NontrivialNormalBundle {
                d_sq: d_sq.to_string(),
            });
        }
        Ok(())
    }

    /// Hypotheses of the existence statement for orbifold differentials:
    /// finite `m`, `κ(B) = 1`, `g(D) > 1`, `O_D(D)` trivial, `D` smooth
    /// irreducible.
    pub fn certify_hypotheses(&self) -> Result<()> {
        let mut unmet = Vec::new();
        if self.multiplicity.value().is_none() {
            unmet.push("m finite".to_string());
        }
        if !self.flags.kodaira_dimension_one {
            unmet.push("kappa(B) = 1".to_string());
        }
        if self.genus < BigInt::from(2) {
            unmet.push(format!("g(D) > 1 (g(D) = {})", self.genus));
        }
        if !self.flags.normal_bundle_trivial {
            unmet.push("O_D(D) trivial".to_string());
        }
        if !self.flags.divisor_smooth_irreducible {
            unmet.push("D smooth irreducible".to_string());
        }
        if unmet.is_empty() {
            Ok(())
        } else {
            Err(Error::UnmetHypotheses(unmet))
        }
    }
}

/// Chern data of `Ω¹_B(log D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogChern {
    pub e1_class: DivisorClass,
    #[serde(with = "json_int")]
    pub e1_sq: BigInt,
    #[serde(with = "json_int")]
    pub e2: BigInt,
    #[serde(with = "json_int")]
    pub diff: BigInt,
}

/// `e1 = K + D`, `e1² = c1² + 2K·D`, `e2 = c2 + K·D`, `e1² - e2 = c1² - c2 + K·D`.
pub fn log_chern(p: &OrbifoldPair) -> Result<LogChern> {
    p.require_trivial_normal_bundle()?;
    let s = &p.surface;
    let kd = p.k_dot_d();
    let e1_class = s.canonical() + &p.divisor;
    let e1_sq = s.c1_sq() + BigInt::from(2) * &kd;
    assert_eq!(
        s.self_intersection(&e1_class)?,
        e1_sq,
        "lattice pairing of e1 agrees with c1^2 + 2K.D"
    );
    let e2 = s.c2() + &kd;
    let diff = s.c1_sq_minus_c2() + &kd;
    debug_assert_eq!(diff, &e1_sq - &e2);
    Ok(LogChern {
        e1_class,
        e1_sq,
        e2,
        diff,
    })
}

/// `α = (c1² - c2) + (1 - 1/m)·K·D`.
pub fn alpha(p: &OrbifoldPair) -> Result<BigRational> {
    let m = BigInt::from(p.finite_m()?);
    let kd = p.k_dot_d();
    let c = p.surface.c1_sq_minus_c2();
    let a = rat_from_int(&c)
        + (BigRational::one() - BigRational::new(BigInt::one(), m.clone())) * rat_from_int(&kd);
    let m2 = &m * &m;
    let m3 = &m2 * &m;
    assert_eq!(
        &a * rat_from_int(&m3),
        rat_from_int(&((c + &kd) * &m3 - kd * m2)),
        "alpha m^3 = (e1^2 - e2) m^3 - (K.D) m^2"
    );
    Ok(a)
}

/// `χ(B, Sym^N E)` as a polynomial in `N` for a rank-2 bundle `E` with first
/// Chern class `c1` (a lattice class) and second Chern number `c2`.
///
/// The Chern roots of `Sym^N E` are `i·a + (N-i)·b`, so
/// `c1(Sym^N) = N(N+1)/2 · c1` and
/// `ch2(Sym^N) = [(c1² - 2c2)·S2(N) + 2c2·S11(N)]/2` with
/// `S2 = N(N+1)(2N+1)/6`, `S11 = (N-1)N(N+1)/6`. Riemann–Roch then reads
/// `χ = (N+1)χ(O) - c1(Sym^N)·K/2 + ch2(Sym^N)`.
pub fn chi_symmetric_power(
    s: &SurfaceModel,
    c1: &DivisorClass,
    c2: &BigInt,
) -> Result<BoundPolynomial> {
    let c1k = rat_from_int(&s.intersect(c1, s.canonical())?);
    let c1_sq = rat_from_int(&s.self_intersection(c1)?);
    let c2 = rat_from_int(c2);
    let chi = s.chi_o_rational();

    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let n01 = BoundPolynomial::from_linear_factors(&[r(0, 1), r(1, 1)]);
    let s2 = (&n01 * &BoundPolynomial::new(vec![r(1, 1), r(2, 1)])).scale(&r(1, 6));
    let s11 = BoundPolynomial::from_linear_factors(&[r(-1, 1), r(0, 1), r(1, 1)]).scale(&r(1, 6));

    let rank = BoundPolynomial::new(vec![r(1, 1), r(1, 1)]);
    let ch2 = &s2.scale(&((&c1_sq - &c2 * r(2, 1)) / r(2, 1))) + &s11.scale(&c2);
    let degree_term = n01.scale(&(c1k / r(4, 1)));
    Ok(&(&rank.scale(&chi) - &degree_term) + &ch2)
}

/// `χ(B, Sym^N Ω¹_B(log D))` as a polynomial in `N`.
pub fn chi_sym_log(p: &OrbifoldPair) -> Result<BoundPolynomial> {
    let lc = log_chern(p)?;
    let poly = chi_symmetric_power(&p.surface, &lc.e1_class, &lc.e2)?;
    debug_assert_eq!(poly.coefficient(0), p.surface.chi_o_rational());
    debug_assert_eq!(
        poly.coefficient(3),
        BigRational::new(lc.diff.clone(), BigInt::from(6))
    );
    Ok(poly)
}

/// `χ(E_N) - χ(E_N ⊗ A^{-1})` for `E_N = Sym^N Ω¹_B(log D)`, a quadratic in `N`:
/// `N(N+1)/2 · (e1·A) - (N+1)(A² + K·A)/2`.
pub fn twist_penalty(p: &OrbifoldPair, twist: &DivisorClass) -> Result<BoundPolynomial> {
    let lc = log_chern(p)?;
    let s = &p.surface;
    let e1a = rat_from_int(&s.intersect(&lc.e1_class, twist)?);
    let a2_ka = rat_from_int(&(s.self_intersection(twist)? + s.canonical_degree(twist)?));
    let r = |n: i64| BigRational::from_integer(n.into());
    let n01 = BoundPolynomial::from_linear_factors(&[r(0), r(1)]);
    let rank = BoundPolynomial::new(vec![r(1), r(1)]);
    Ok(&n01.scale(&(e1a / r(2))) - &rank.scale(&(a2_ka / r(2))))
}

/// One row of the bound table, all entries at `N = qm`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub q: u64,
    #[serde(with = "json_int")]
    pub chi: BigInt,
    #[serde(with = "json_int")]
    pub quotient_exact: BigInt,
    #[serde(with = "json_int")]
    pub twist_penalty: BigInt,
    #[serde(rename = "LB", with = "json_int")]
    pub lb: BigInt,
}

fn integral(r: BigRational) -> Result<BigInt> {
    as_integer(&r).ok_or_else(|| Error::NonIntegral(r.to_string()))
}

/// `LB(q) = χ(Sym^{qm} Ω¹(log D)) - (1 + g) - quotient_bound_exact(q, m, g)`,
/// minus the twist penalty at `N = qm` when `A` is given. Evaluated by direct
/// summation.
pub fn bound_row(p: &OrbifoldPair, q: u64, twist: Option<&DivisorClass>) -> Result<BoundRow> {
    p.certify_hypotheses()?;
    let m = p.finite_m()?;
    let n = BigRational::from_integer(BigInt::from(q * m));
    let chi = integral(chi_sym_log(p)?.eval(&n))?;
    let quotient_exact = quotient_bound_exact(q, m, &p.genus)?;
    let twist_penalty = match twist {
        Some(a) => integral(twist_penalty(p, a)?.eval(&n))?,
        None => BigInt::zero(),
    };
    let lb = &chi - (BigInt::one() + &p.genus) - &quotient_exact - &twist_penalty;
    Ok(BoundRow {
        q,
        chi,
        quotient_exact,
        twist_penalty,
        lb,
    })
}

/// Certified lower bound for `h⁰(B, [Sym^{qm}](Ω¹_{(B/Δ)}))` (twisted by
/// `A^{-1}` when given).
pub fn section_lower_bound(
    p: &OrbifoldPair,
    q: u64,
    twist: Option<&DivisorClass>,
) -> Result<BigInt> {
    Ok(bound_row(p, q, twist)?.lb)
}

/// `LB` as a polynomial in `q`, built from the closed forms.
pub fn lower_bound_polynomial(
    p: &OrbifoldPair,
    twist: Option<&DivisorClass>,
) -> Result<BoundPolynomial> {
    p.certify_hypotheses()?;
    let m = p.finite_m()?;
    let mr = BigRational::from_integer(BigInt::from(m));
    let chi_q = chi_sym_log(p)?.scale_argument(&mr);
    let h2 = BoundPolynomial::constant(rat_from_int(&(BigInt::one() + &p.genus)));
    let quotient = quotient_bound_exact_polynomial(m, &p.genus)?;
    let mut lb = &(&chi_q - &h2) - &quotient;
    if let Some(a) = twist {
        lb = &lb - &twist_penalty(p, a)?.scale_argument(&mr);
    }
    Ok(lb)
}

/// Certificate for the smallest `q ≤ q_max` with a positive lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdCertificate {
    pub m: Multiplicity,
    #[serde(with = "json_int")]
    pub genus: BigInt,
    #[serde(with = "json_rat")]
    pub alpha: BigRational,
    /// Cubic coefficient of `LB(q)`; equals `α·m³/6`.
    #[serde(with = "json_rat")]
    pub leading_coeff: BigRational,
    pub lb_polynomial: BoundPolynomial,
    pub q_max: u64,
    pub threshold: Option<u64>,
    #[serde(serialize_with = "ser_opt_int")]
    pub lb_at_threshold: Option<BigInt>,
    pub twist: Option<DivisorClass>,
    pub assumptions: Vec<Assumption>,
}

fn ser_opt_int<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => match x.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&x.to_string()),
        },
        None => s.serialize_none(),
    }
}

/// Assumptions a section-count certificate rests on.
pub fn bound_assumptions(twisted: bool) -> Vec<Assumption> {
    let mut a = vec![
        Assumption::DivisorSmoothIrreducible,
        Assumption::NormalBundleTrivial,
        Assumption::KodairaDimensionOne,
        Assumption::H2BoundOnePlusGenus,
    ];
    if twisted {
        a.push(Assumption::TwistedH2Bound);
        a.push(Assumption::TwistedQuotientBound);
    }
    a
}

/// Least `q ∈ 1..=q_max` with `LB(q) > 0`.
///
/// The scan runs on the closed-form polynomial; the reported value is
/// re-evaluated by direct summation and must agree.
pub fn threshold(
    p: &OrbifoldPair,
    q_max: u64,
    twist: Option<&DivisorClass>,
) -> Result<ThresholdCertificate> {
    p.certify_hypotheses()?;
    if let Some(a) = twist {
        p.surface.check_rank(a)?;
    }
    let m = p.finite_m()?;
    let alpha = alpha(p)?;
    let lb_polynomial = lower_bound_polynomial(p, twist)?;
    let leading_coeff = lb_polynomial.coefficient(3);
    let m3 = BigRational::from_integer(BigInt::from(m).pow(3));
    assert_eq!(
        leading_coeff,
        &alpha * &m3 / BigRational::from_integer(6.into()),
        "cubic coefficient of LB equals alpha m^3 / 6"
    );

    let found = (1..=q_max).find(|&q| lb_polynomial.eval_int(q as i64).is_positive());
    let lb_at_threshold = match found {
        Some(q) => {
            let direct = section_lower_bound(p, q, twist)?;
            assert_eq!(
                rat_from_int(&direct),
                lb_polynomial.eval_int(q as i64),
                "closed form and direct summation agree at q = {q}"
            );
            Some(direct)
        }
        None => None,
    };

    Ok(ThresholdCertificate {
        m: p.multiplicity,
        genus: p.genus.clone(),
        alpha,
        leading_coeff,
        lb_polynomial,
        q_max,
        threshold: found,
        lb_at_threshold,
        twist: twist.cloned(),
        assumptions: bound_assumptions(twist.is_some()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn fin(m: u64) -> Multiplicity {
        Multiplicity::Finite(m)
    }

    #[test]
    fn exponent_table() {
        for m in 2..20 {
            assert_eq!(exponent(0, fin(m)), 0);
            for j in 1..=m {
                assert_eq!(exponent(j, fin(m)), 1);
            }
        }
        assert_eq!(exponent(11, fin(5)), 3);
        assert_eq!(exponent(10, fin(5)), 2);
        assert_eq!(exponent(7, Multiplicity::Infinite), 0);
        assert_eq!(pole_order(7, Multiplicity::Infinite), 7);
        assert_eq!(pole_order(7, fin(3)), 4);
    }

    #[test]
    fn multiplicity_parsing() {
        assert_eq!(
            "inf".parse::<Multiplicity>().unwrap(),
            Multiplicity::Infinite
        );
        assert_eq!("32".parse::<Multiplicity>().unwrap(), fin(32));
        assert!("1".parse::<Multiplicity>().is_err());
        assert!("x".parse::<Multiplicity>().is_err());
    }

    #[test]
    fn multiplication_defect_examples() {
        for m in 2..10 {
            for k in 0..30 {
                assert_eq!(mult_defect(0, k, fin(m)), 0);
            }
            assert_eq!(mult_defect(m, m, fin(m)), 0);
        }
        assert_eq!(mult_defect(1, 1, fin(2)), 1);
    }

    #[test]
    fn canonical_powers() {
        let g = int(4);
        assert_eq!(h0_canonical_power(-1, &g).unwrap(), int(0));
        assert_eq!(h0_canonical_power(0, &g).unwrap(), int(1));
        assert_eq!(h0_canonical_power(1, &g).unwrap(), int(4));
        assert_eq!(h0_canonical_power(3, &g).unwrap(), int(15));
        assert!(h0_canonical_power(3, &int(1)).is_err());
    }

    #[test]
    fn paper_sum_single_term() {
        assert_eq!(quotient_bound_paper(1, 2, &int(2)).unwrap(), int(6));
        assert_eq!(quotient_bound_exact(1, 2, &int(2)).unwrap(), int(4));
    }

    #[test]
    fn closed_forms_match_summation() {
        for m in 2..6 {
            for g in 2..5 {
                let g = int(g);
                let pe = quotient_bound_exact_polynomial(m, &g).unwrap();
                let pp = quotient_bound_paper_polynomial(m, &g).unwrap();
                for q in 1..12 {
                    assert_eq!(
                        pe.eval_int(q as i64),
                        rat_from_int(&quotient_bound_exact(q, m, &g).unwrap())
                    );
                    assert_eq!(
                        pp.eval_int(q as i64),
                        rat_from_int(&quotient_bound_paper(q, m, &g).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn quotient_domain_errors() {
        assert!(quotient_bound_exact(0, 2, &int(2)).is_err());
        assert!(quotient_bound_exact(1, 1, &int(2)).is_err());
        assert!(quotient_bound_paper(1, 2, &int(1)).is_err());
    }

    fn toy_pair(m: Multiplicity) -> OrbifoldPair {
        // P1xP1 blown up at the 2 base points of |O(1,1)|; D = strict transform.
        let s = SurfaceModel::quadric();
        let d0 = s.class(&[1, 1]).unwrap();
        let (b, map) = s.blowup(2).unwrap();
        let d = map.strict_transform(&d0).unwrap();
        OrbifoldPair::new(b, d, m, PairFlags::all()).unwrap()
    }

    #[test]
    fn log_chern_without_poles() {
        let s = SurfaceModel::quadric();
        let flags = PairFlags {
            normal_bundle_trivial: true,
            ..PairFlags::default()
        };
        let p = OrbifoldPair::new(s.clone(), DivisorClass::zero(2), fin(3), flags).unwrap();
        let lc = log_chern(&p).unwrap();
        assert_eq!((&lc.e1_sq, &lc.e2), (s.c1_sq(), s.c2()));
        assert_eq!(alpha(&p).unwrap(), rat_from_int(&s.c1_sq_minus_c2()));
    }

    #[test]
    fn nontrivial_normal_bundle_is_rejected() {
        let s = SurfaceModel::quadric();
        let d = s.class(&[1, 1]).unwrap();
        let err = OrbifoldPair::new(s.clone(), d.clone(), fin(2), PairFlags::all()).unwrap_err();
        assert!(err.to_string().contains("trivial normal bundle required"));
        let loose = OrbifoldPair::new(s, d, fin(2), PairFlags::default()).unwrap();
        assert!(log_chern(&loose).is_err());
    }

    #[test]
    fn alpha_requires_finite_multiplicity() {
        let p = toy_pair(Multiplicity::Infinite);
        assert_eq!(alpha(&p).unwrap_err(), Error::InfiniteMultiplicity);
        assert!(log_chern(&p).is_ok());
    }

    #[test]
    fn chi_polynomial_shape() {
        let p = toy_pair(fin(3));
        let lc = log_chern(&p).unwrap();
        let chi = chi_sym_log(&p).unwrap();
        assert_eq!(chi.degree(), Some(3));
        assert_eq!(
            chi.coefficient(3),
            BigRational::new(lc.diff.clone(), int(6))
        );
        assert_eq!(chi.eval_int(0), p.surface().chi_o_rational());
        let s = p.surface();
        let n1 = BigRational::new(&lc.e1_sq - int(2) * &lc.e2, int(2))
            - BigRational::new(s.intersect(s.canonical(), &lc.e1_class).unwrap(), int(2))
            + rat(2, 1) * s.chi_o_rational();
        assert_eq!(chi.eval_int(1), n1);
    }

    #[test]
    fn missing_flags_are_listed() {
        let s = SurfaceModel::quadric();
        let d0 = s.class(&[1, 1]).unwrap();
        let (b, map) = s.blowup(2).unwrap();
        let d = map.strict_transform(&d0).unwrap();
        let flags = PairFlags {
            normal_bundle_trivial: true,
            ..PairFlags::default()
        };
        let p = OrbifoldPair::new(b, d, fin(2), flags).unwrap();
        match threshold(&p, 10, None).unwrap_err() {
            Error::UnmetHypotheses(list) => {
                assert!(list.iter().any(|s| s == "kappa(B) = 1"));
                assert!(list.iter().any(|s| s.starts_with("g(D) > 1")));
                assert!(list.iter().any(|s| s == "D smooth irreducible"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn zero_divisor_fails_genus_precondition() {
        let s = SurfaceModel::quadric();
        let p = OrbifoldPair::new(s, DivisorClass::zero(2), fin(2), PairFlags::all()).unwrap();
        assert_eq!(p.genus(), &int(1));
        assert!(matches!(
            section_lower_bound(&p, 1, None),
            Err(Error::UnmetHypotheses(_))
        ));
    }
}
