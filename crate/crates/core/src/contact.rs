//! Truncated power series and contact orders of curve germs.
//!
//! A germ `h(t) = (x(t), y(t))` is known modulo `t^T`. The contact order
//! with a divisor `{f = 0}` is the order of vanishing of `f(x(t), y(t))`,
//! which is determined only when it is below `T`; otherwise the answer is
//! [`Order::AtLeast`]`(T)` and anything derived from it is indeterminate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Power series `Σ_{i<T} c_i tⁱ + O(t^T)` with exact rational coefficients.
///
/// Stored as integer numerators over one positive denominator, kept in
/// lowest terms, so products avoid a gcd per coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Series {
    /// Coefficients at indices `≥ trunc` are discarded.
    pub fn new(mut coeffs: Vec<BigRational>, trunc: usize) -> Result<Self> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        coeffs.resize(trunc, BigRational::zero());
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Series::normalized(num, den))
    }

    pub fn from_integers(coeffs: &[i64], trunc: usize) -> Result<Self> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        let mut num: Vec<BigInt> = coeffs
            .iter()
            .take(trunc)
            .map(|&c| BigInt::from(c))
            .collect();
        num.resize(trunc, BigInt::zero());
        Ok(Series {
            num,
            den: BigInt::one(),
        })
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Series {
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        if !den.is_one() {
            let g = num
                .iter()
                .fold(den.clone(), |g, c| if c.is_zero() { g } else { g.gcd(c) });
            if !g.is_one() {
                num.iter_mut().for_each(|c| *c /= &g);
                den /= &g;
            }
        }
        Series { num, den }
    }

    pub fn zero(trunc: usize) -> Result<Self> {
        Series::from_integers(&[], trunc)
    }

    /// `c·t^e`.
    pub fn monomial(c: BigRational, e: usize, trunc: usize) -> Result<Self> {
        let mut s = Series::zero(trunc)?;
        if e < trunc {
            s.num[e] = c.numer().clone();
            s.den = c.denom().clone();
        }
        Ok(s)
    }

    pub fn truncation(&self) -> usize {
        self.num.len()
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.truncation()).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        match self.num.get(i) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn order_of_vanishing(&self) -> Order {
        match self.num.iter().position(|c| !c.is_zero()) {
            Some(i) => Order::Exact(i),
            None => Order::AtLeast(self.truncation()),
        }
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch(
                self.truncation(),
                other.truncation(),
            ));
        }
        Ok(())
    }

    fn combine(&self, other: &Series, sign: i8) -> Result<Series> {
        self.check_compatible(other)?;
        let den = self.den.lcm(&other.den);
        let (fa, fb) = (&den / &self.den, &den / &other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if sign > 0 {
                    a * &fa + b * &fb
                } else {
                    a * &fa - b * &fb
                }
            })
            .collect();
        Ok(Series::normalized(num, den))
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        let num = self.num.iter().map(|a| a * c.numer()).collect();
        Series::normalized(num, &self.den * c.denom())
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let t = self.truncation();
        let mut out = vec![BigInt::zero(); t];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num[..t - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Series::normalized(out, &self.den * &other.den))
    }

    /// `selfᵉ`. Writing `self = t^v·u`, only `uᵉ` modulo `t^{T - ev}` is
    /// computed.
    pub fn pow(&self, e: u32) -> Series {
        let t = self.truncation();
        let one = Series::monomial(BigRational::one(), 0, t).expect("positive truncation");
        if e == 0 {
            return one;
        }
        let v = match self.order_of_vanishing() {
            Order::Exact(v) => v,
            Order::AtLeast(_) => return Series::zero(t).expect("positive truncation"),
        };
        let shift = v.saturating_mul(e as usize);
        if shift >= t {
            return Series::zero(t).expect("positive truncation");
        }
        let width = t - shift;
        let end = (v + width).min(t);
        let mut unit_num = self.num[v..end].to_vec();
        unit_num.resize(width, BigInt::zero());
        let unit = Series {
            num: unit_num,
            den: self.den.clone(),
        };

        let mut acc = Series::monomial(BigRational::one(), 0, width).expect("positive width");
        let mut base = unit;
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same truncation");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same truncation");
            }
        }
        let mut num = vec![BigInt::zero(); shift];
        num.extend(acc.num);
        Series { num, den: acc.den }
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        self.check_compatible(inner)?;
        if !inner.num[0].is_zero() {
            return Err(Error::NonzeroConstantTerm(
                inner.constant_term().to_string(),
            ));
        }
        let t = self.truncation();
        let mut acc = Series::zero(t)?;
        for i in (0..t).rev() {
            acc = acc.mul(inner)?;
            acc = acc.add(&Series::monomial(self.coeff(i), 0, t)?)?;
        }
        Ok(acc)
    }
}

/// Order of vanishing of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Exact(usize),
    /// All coefficients below the truncation order vanish.
    AtLeast(usize),
}

impl Order {
    pub fn exact(self) -> Option<usize> {
        match self {
            Order::Exact(n) => Some(n),
            Order::AtLeast(_) => None,
        }
    }

    pub fn is_determinate(self) -> bool {
        matches!(self, Order::Exact(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact(n) => write!(f, "{n}"),
            Order::AtLeast(t) => write!(f, ">={t}"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Exact(n) => s.serialize_u64(*n as u64),
            Order::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// A yes/no answer that truncation may leave open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Indeterminate => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Yes => s.serialize_bool(true),
            Verdict::No => s.serialize_bool(false),
            Verdict::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

/// Polynomial in `(x, y)` with exact rational coefficients, used as a local
/// equation of a divisor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial2 {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Polynomial2 {
    /// Zero coefficients are dropped; repeated monomials add up.
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut map: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (mono, c) in terms {
            *map.entry(mono).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial2 { terms: map }
    }

    pub fn from_integers(terms: &[((u32, u32), i64)]) -> Self {
        Polynomial2::new(
            terms
                .iter()
                .map(|&(mono, c)| (mono, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    /// The coordinate function `y`.
    pub fn y() -> Self {
        Polynomial2::from_integers(&[((0, 1), 1)])
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f(x(t), y(t))` modulo `t^T`.
    pub fn eval_series(&self, x: &Series, y: &Series) -> Result<Series> {
        x.check_compatible(y)?;
        let t = x.truncation();
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let powers = |s: &Series, n: u32| -> Result<Vec<Series>> {
            let mut out = vec![Series::monomial(BigRational::one(), 0, t)?];
            for _ in 0..n {
                let next = out.last().expect("nonempty").mul(s)?;
                out.push(next);
            }
            Ok(out)
        };
        let xp = powers(x, max_i)?;
        let yp = powers(y, max_j)?;
        let mut acc = Series::zero(t)?;
        for (&(i, j), c) in &self.terms {
            let term = xp[i as usize].mul(&yp[j as usize])?.scale(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Holomorphic germ `t ↦ (x(t), y(t))` known modulo `t^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGerm {
    x: Series,
    y: Series,
}

impl CurveGerm {
    pub fn new(x: Series, y: Series) -> Result<Self> {
        x.check_compatible(&y)?;
        let t = x.truncation();
        if !x.order_of_vanishing().is_determinate() && !y.order_of_vanishing().is_determinate() {
            return Err(Error::DegenerateGerm(t));
        }
        Ok(CurveGerm { x, y })
    }

    pub fn from_coeffs(x: Vec<BigRational>, y: Vec<BigRational>, trunc: usize) -> Result<Self> {
        CurveGerm::new(Series::new(x, trunc)?, Series::new(y, trunc)?)
    }

    pub fn from_integers(x: &[i64], y: &[i64], trunc: usize) -> Result<Self> {
        CurveGerm::new(
            Series::from_integers(x, trunc)?,
            Series::from_integers(y, trunc)?,
        )
    }

    pub fn x(&self) -> &Series {
        &self.x
    }

    pub fn y(&self) -> &Series {
        &self.y
    }

    pub fn truncation(&self) -> usize {
        self.x.truncation()
    }

    /// `h ∘ τ` for a reparametrization `τ` with `τ(0) = 0`.
    pub fn reparametrize(&self, tau: &Series) -> Result<CurveGerm> {
        CurveGerm::new(self.x.compose(tau)?, self.y.compose(tau)?)
    }
}

/// Contact order of the germ with `{f = 0}`: `ord_t f(x(t), y(t))`.
pub fn contact_order(h: &CurveGerm, f: &Polynomial2) -> Result<Order> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.eval_series(&h.x, &h.y)?.order_of_vanishing())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TangencyMode {
    /// Contact order divisible by `m`.
    Classical,
    /// Contact order zero or at least `m`.
    Nonclassical,
}

impl FromStr for TangencyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "classical" => Ok(TangencyMode::Classical),
            "nonclassical" | "non-classical" => Ok(TangencyMode::Nonclassical),
            other => Err(Error::InvalidParameter {
                name: "mode",
                value: other.to_string(),
                reason: "expected `classical` or `nonclassical`",
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactRecord {
    pub order: Order,
    pub m: u64,
    pub mode: TangencyMode,
    pub classical_m_tangent: Verdict,
    pub nonclassical_m_tangent: Verdict,
    /// The answer for `mode`.
    pub m_tangent: Verdict,
}

/// m-tangency of a germ with `{f = 0}` at `h(0)`.
pub fn is_m_tangent(
    h: &CurveGerm,
    f: &Polynomial2,
    m: u64,
    mode: TangencyMode,
) -> Result<ContactRecord> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "tangency multiplicity must be at least 2",
        });
    }
    let order = contact_order(h, f)?;
    let (classical, nonclassical) = match order {
        Order::Exact(n) => (
            Verdict::from_bool((n as u64).is_multiple_of(m)),
            Verdict::from_bool(n == 0 || n as u64 >= m),
        ),
        Order::AtLeast(_) => (Verdict::Indeterminate, Verdict::Indeterminate),
    };
    Ok(ContactRecord {
        order,
        m,
        mode,
        classical_m_tangent: classical,
        nonclassical_m_tangent: nonclassical,
        m_tangent: match mode {
            TangencyMode::Classical => classical,
            TangencyMode::Nonclassical => nonclassical,
        },
    })
}

/// Result of comparing contact orders through the local model of a
/// multiple fibre, `φ(u, w) = (u, w^m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackCheck {
    pub m: u64,
    /// `ord_t w(t)`, the contact of `h` with `H = {w = 0}`.
    pub upstairs_order: Order,
    /// `ord_t (φ∘h)^*(y)`, the contact of `φ∘h` with `D = {y = 0}`.
    pub downstairs_order: Order,
    /// `downstairs = m · upstairs`.
    pub identity_holds: Verdict,
    /// Classical m-tangency of `φ∘h` to `D`.
    pub classical_m_tangent: Verdict,
}

/// Checks `ord (φ∘h)*(D) = m · ord h*(H)` for `h = (u(t), w(t))`.
pub fn fibration_pullback_check(h: &CurveGerm, m: u64) -> Result<PullbackCheck> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m.to_string(),
            reason: "fibre multiplicity must be at least 2",
        });
    }
    let w = Polynomial2::y();
    let upstairs_order = contact_order(h, &w)?;
    let pushed = CurveGerm::new(h.x.clone(), h.y.pow(m as u32))?;
    let downstairs_order = contact_order(&pushed, &Polynomial2::y())?;
    let identity_holds = match (upstairs_order, downstairs_order) {
        (Order::Exact(up), Order::Exact(down)) => Verdict::from_bool(down as u64 == m * up as u64),
        _ => Verdict::Indeterminate,
    };
    let classical_m_tangent = match downstairs_order {
        Order::Exact(n) => Verdict::from_bool((n as u64).is_multiple_of(m)),
        Order::AtLeast(_) => Verdict::Indeterminate,
    };
    Ok(PullbackCheck {
        m,
        upstairs_order,
        downstairs_order,
        identity_holds,
        classical_m_tangent,
    })
}
