//! Exact intersection theory on a numerical model of a surface.
//!
//! A [`SurfaceModel`] is a finitely generated lattice of divisor classes with
//! an integral symmetric pairing, a canonical class and the two Chern numbers
//! `c1² = K·K` and `c2` (topological Euler number). Nothing about the surface
//! beyond these numbers is represented.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{json_int, json_int_matrix, json_int_vec};
use crate::{Error, Result};

/// Integer coefficient vector over the basis of some [`SurfaceModel`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "json_int_vec")] Vec<BigInt>);

impl DivisorClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![BigInt::zero(); rank])
    }

    /// The `i`-th basis vector of a lattice of rank `rank`.
    pub fn basis_vector(rank: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); rank];
        v[i] = BigInt::one();
        DivisorClass(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// True if every coefficient is divisible by `m`.
    pub fn is_divisible_by(&self, m: &BigInt) -> bool {
        !m.is_zero() && self.0.iter().all(|c| c.is_multiple_of(m))
    }

    /// `self / m`, provided every coefficient is divisible by `m`.
    pub fn div_exact(&self, m: &BigInt) -> Option<DivisorClass> {
        self.is_divisible_by(m)
            .then(|| DivisorClass(self.0.iter().map(|c| c / m).collect()))
    }

    /// Zero-pads the class to a lattice of larger rank.
    pub fn extend_to(&self, rank: usize) -> DivisorClass {
        let mut v = self.0.clone();
        v.resize(rank.max(v.len()), BigInt::zero());
        DivisorClass(v)
    }

    fn zip_with(
        &self,
        other: &DivisorClass,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> DivisorClass {
        assert_eq!(
            self.rank(),
            other.rank(),
            "divisor classes of different rank"
        );
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul<&DivisorClass> for &BigInt {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.iter().map(|c| self * c).collect())
    }
}

/// Symmetric integer matrix stored by its nonzero upper-triangular entries.
///
/// Blowups append a diagonal block of `-1`s, so the pairing on a surface
/// blown up at hundreds of points stays linear in the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Gram {
    rank: usize,
    upper: BTreeMap<(usize, usize), BigInt>,
}

impl Gram {
    fn from_dense(lattice: &str, rows: &[Vec<BigInt>]) -> Result<Self> {
        let rank = rows.len();
        let mut upper = BTreeMap::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::NotSquare {
                    lattice: lattice.to_string(),
                    rows: rank,
                    row: i,
                    len: row.len(),
                });
            }
            for j in i..rank {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric {
                        lattice: lattice.to_string(),
                        i,
                        j,
                    });
                }
                if !rows[i][j].is_zero() {
                    upper.insert((i, j), rows[i][j].clone());
                }
            }
        }
        Ok(Gram { rank, upper })
    }

    fn entry(&self, i: usize, j: usize) -> BigInt {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.upper.get(&key).cloned().unwrap_or_default()
    }

    fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.rank]; self.rank];
        for (&(i, j), v) in &self.upper {
            out[i][j] = v.clone();
            out[j][i] = v.clone();
        }
        out
    }

    fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (&(i, j), g) in &self.upper {
            if i == j {
                if !x[i].is_zero() && !y[i].is_zero() {
                    acc += g * &x[i] * &y[i];
                }
            } else {
                let cross = &x[i] * &y[j] + &x[j] * &y[i];
                if !cross.is_zero() {
                    acc += g * cross;
                }
            }
        }
        acc
    }
}

/// Numerical model of a smooth projective surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceJson", into = "SurfaceJson")]
pub struct SurfaceModel {
    name: String,
    basis: Vec<String>,
    gram: Gram,
    canonical: DivisorClass,
    c1_sq: BigInt,
    c2: BigInt,
}

/// Wire form `{basis, gram, canonical, c1_sq, c2}`.
#[derive(Serialize, Deserialize)]
struct SurfaceJson {
    basis: Vec<String>,
    #[serde(with = "json_int_matrix")]
    gram: Vec<Vec<BigInt>>,
    canonical: DivisorClass,
    #[serde(with = "json_int")]
    c1_sq: BigInt,
    #[serde(with = "json_int")]
    c2: BigInt,
}

impl From<SurfaceModel> for SurfaceJson {
    fn from(s: SurfaceModel) -> Self {
        SurfaceJson {
            gram: s.gram.to_dense(),
            basis: s.basis,
            canonical: s.canonical,
            c1_sq: s.c1_sq,
            c2: s.c2,
        }
    }
}

impl TryFrom<SurfaceJson> for SurfaceModel {
    type Error = Error;

    fn try_from(j: SurfaceJson) -> Result<Self> {
        let s = SurfaceModel::new("custom", j.basis, &j.gram, j.canonical, j.c2)?;
        if s.c1_sq != j.c1_sq {
            return Err(Error::CanonicalMismatch {
                lattice: s.name,
                stored: j.c1_sq.to_string(),
                computed: s.c1_sq.to_string(),
            });
        }
        Ok(s)
    }
}

impl SurfaceModel {
    /// Builds a surface model, computing `c1² = K·K` from the pairing.
    ///
    /// Fails if the gram matrix is not square and symmetric, if the label
    /// count or canonical class rank is wrong, or if `c1² + c2` is not
    /// divisible by 12.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        gram: &[Vec<BigInt>],
        canonical: DivisorClass,
        c2: BigInt,
    ) -> Result<Self> {
        let name = name.into();
        let gram = Gram::from_dense(&name, gram)?;
        if basis.len() != gram.rank {
            return Err(Error::LabelCount {
                lattice: name,
                labels: basis.len(),
                rank: gram.rank,
            });
        }
        if canonical.rank() != gram.rank {
            return Err(Error::RankMismatch {
                lattice: name,
                expected: gram.rank,
                found: canonical.rank(),
            });
        }
        let c1_sq = gram.pair(canonical.coeffs(), canonical.coeffs());
        let s = SurfaceModel {
            name,
            basis,
            gram,
            canonical,
            c1_sq,
            c2,
        };
        s.check_noether()?;
        Ok(s)
    }

    /// P² with basis `(h)`, `h² = 1`, `K = -3h`.
    pub fn projective_plane() -> Self {
        SurfaceModel::new(
            "P2",
            vec!["h".into()],
            &[vec![BigInt::one()]],
            DivisorClass::from_i64s(&[-3]),
            BigInt::from(3),
        )
        .expect("P2 model is consistent")
    }

    /// P¹×P¹ with basis of the two rulings, `f1·f2 = 1`, `K = (-2, -2)`.
    pub fn quadric() -> Self {
        SurfaceModel::new(
            "P1xP1",
            vec!["f1".into(), "f2".into()],
            &[
                vec![BigInt::zero(), BigInt::one()],
                vec![BigInt::one(), BigInt::zero()],
            ],
            DivisorClass::from_i64s(&[-2, -2]),
            BigInt::from(4),
        )
        .expect("P1xP1 model is consistent")
    }

    fn check_noether(&self) -> Result<()> {
        let sum = &self.c1_sq + &self.c2;
        if !sum.is_multiple_of(&BigInt::from(12)) {
            return Err(Error::NoetherIntegrality {
                lattice: self.name.clone(),
                sum: sum.to_string(),
            });
        }
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.gram.rank
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> BigInt {
        self.gram.entry(i, j)
    }

    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        self.gram.to_dense()
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn c1_sq(&self) -> &BigInt {
        &self.c1_sq
    }

    pub fn c2(&self) -> &BigInt {
        &self.c2
    }

    pub fn c1_sq_minus_c2(&self) -> BigInt {
        &self.c1_sq - &self.c2
    }

    /// χ(O) = (c1² + c2)/12, always an integer for a constructed model.
    pub fn chi_o(&self) -> BigInt {
        (&self.c1_sq + &self.c2) / BigInt::from(12)
    }

    pub fn chi_o_rational(&self) -> BigRational {
        BigRational::new(&self.c1_sq + &self.c2, BigInt::from(12))
    }

    /// A class in this lattice from small coefficients.
    pub fn class(&self, coeffs: &[i64]) -> Result<DivisorClass> {
        let d = DivisorClass::from_i64s(coeffs);
        self.check_rank(&d)?;
        Ok(d)
    }

    pub fn check_rank(&self, x: &DivisorClass) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::RankMismatch {
                lattice: self.name.clone(),
                expected: self.rank(),
                found: x.rank(),
            });
        }
        Ok(())
    }

    /// The pairing `xᵀ·G·y`.
    pub fn intersect(&self, x: &DivisorClass, y: &DivisorClass) -> Result<BigInt> {
        self.check_rank(x)?;
        self.check_rank(y)?;
        Ok(self.gram.pair(x.coeffs(), y.coeffs()))
    }

    pub fn self_intersection(&self, x: &DivisorClass) -> Result<BigInt> {
        self.intersect(x, x)
    }

    /// `K·x`.
    pub fn canonical_degree(&self, x: &DivisorClass) -> Result<BigInt> {
        self.intersect(&self.canonical, x)
    }

    /// Arithmetic genus `1 + (D·D + K·D)/2` by adjunction.
    ///
    /// Non-integral values are returned as they are; they occur for classes
    /// that cannot be represented by a curve.
    pub fn genus_of(&self, d: &DivisorClass) -> Result<BigRational> {
        let dd = self.self_intersection(d)?;
        let kd = self.canonical_degree(d)?;
        Ok(BigRational::one() + BigRational::new(dd + kd, BigInt::from(2)))
    }

    /// Blows up `n` distinct points.
    ///
    /// The new lattice is the old one plus `n` exceptional classes `E_i` with
    /// `E_i² = -1`, orthogonal to each other and to pulled-back classes. The
    /// canonical class becomes `β*K + ΣE_i`, so `c1²` drops by `n` and `c2`
    /// grows by `n`. `n = 0` returns an identical copy.
    pub fn blowup(&self, n: i64) -> Result<(SurfaceModel, BlowupMap)> {
        if n < 0 {
            return Err(Error::NegativeBlowupCount(n));
        }
        let n = n as usize;
        let old = self.rank();
        let rank = old + n;

        let mut upper = self.gram.upper.clone();
        for i in old..rank {
            upper.insert((i, i), -BigInt::one());
        }

        let taken: BTreeSet<&str> = self.basis.iter().map(String::as_str).collect();
        let mut basis = self.basis.clone();
        let mut idx = 1usize;
        while basis.len() < rank {
            let label = format!("E{idx}");
            if !taken.contains(label.as_str()) {
                basis.push(label);
            }
            idx += 1;
        }

        let mut canonical = self.canonical.extend_to(rank);
        for c in &mut canonical.0[old..] {
            *c = BigInt::one();
        }

        let nb = BigInt::from(n);
        let blown = SurfaceModel {
            name: if n == 0 {
                self.name.clone()
            } else {
                format!("Bl_{n}({})", self.name)
            },
            basis,
            gram: Gram { rank, upper },
            canonical,
            c1_sq: &self.c1_sq - &nb,
            c2: &self.c2 + &nb,
        };
        debug_assert_eq!(
            blown
                .gram
                .pair(blown.canonical.coeffs(), blown.canonical.coeffs()),
            blown.c1_sq
        );
        Ok((
            blown,
            BlowupMap {
                source_rank: old,
                count: n,
            },
        ))
    }
}

/// Pullback of classes along a point blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlowupMap {
    source_rank: usize,
    count: usize,
}

impl BlowupMap {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn target_rank(&self) -> usize {
        self.source_rank + self.count
    }

    pub fn pullback(&self, x: &DivisorClass) -> Result<DivisorClass> {
        if x.rank() != self.source_rank {
            return Err(Error::RankMismatch {
                lattice: "blowup source".into(),
                expected: self.source_rank,
                found: x.rank(),
            });
        }
        Ok(x.extend_to(self.target_rank()))
    }

    /// The exceptional class `E_i`, `0 ≤ i < count`.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(i < self.count, "exceptional index {i} out of range");
        DivisorClass::basis_vector(self.target_rank(), self.source_rank + i)
    }

    /// `ΣE_i`.
    pub fn exceptional_sum(&self) -> DivisorClass {
        let mut v = vec![BigInt::zero(); self.target_rank()];
        for c in &mut v[self.source_rank..] {
            *c = BigInt::one();
        }
        DivisorClass(v)
    }

    /// Strict transform `β*x - ΣE_i` of a curve through every blown-up point
    /// with multiplicity one.
    pub fn strict_transform(&self, x: &DivisorClass) -> Result<DivisorClass> {
        Ok(&self.pullback(x)? - &self.exceptional_sum())
    }
}
