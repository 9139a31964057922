//! Seeded invariant suite behind `orbsurf verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use orbsurf_core::btsearch::{build_config, BranchClassMode};
use orbsurf_core::contact::{fibration_pullback_check, CurveGerm, Order, Series, Verdict};
use orbsurf_core::covers::{cyclic_cover_invariants, double_cover_quadric, p1p2_check};
use orbsurf_core::orbdiff::{
    exponent, mult_defect, quotient_bound_exact, quotient_bound_exact_polynomial,
    quotient_bound_paper_polynomial, threshold, Multiplicity,
};
use orbsurf_core::{DivisorClass, SurfaceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::VerifyArgs;
use crate::manifest::RunManifest;
use crate::{CliError, Outcome};

const DEFAULT_SEED: u64 = 0x5eed;
const DEFAULT_SAMPLES: usize = 2000;

#[derive(Default, Serialize)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Random lattice with `c2` chosen so that Noether's formula holds.
pub fn random_surface(rng: &mut impl Rng) -> SurfaceModel {
    let rank = rng.gen_range(1..=4);
    let mut gram = vec![vec![BigInt::zero(); rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let v = BigInt::from(rng.gen_range(-3..=3));
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let k: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
    let mut c1_sq = BigInt::zero();
    for i in 0..rank {
        for j in 0..rank {
            c1_sq += &gram[i][j] * k[i] * k[j];
        }
    }
    let chi = BigInt::from(rng.gen_range(-5..=10));
    let c2 = BigInt::from(12) * chi - c1_sq;
    let basis = (0..rank).map(|i| format!("e{}", i + 1)).collect();
    SurfaceModel::new("random", basis, &gram, DivisorClass::from_i64s(&k), c2)
        .expect("random lattice is valid")
}

pub fn random_class(rng: &mut impl Rng, rank: usize) -> DivisorClass {
    let c: Vec<i64> = (0..rank).map(|_| rng.gen_range(-4..=4)).collect();
    DivisorClass::from_i64s(&c)
}

fn covers(t: &mut Tally, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), CliError> {
    for k in 1..=20i64 {
        let (b0, _) = double_cover_quadric(k, 1, 1)?;
        t.check(
            b0.c1_sq().is_zero() && *b0.c2() == BigInt::from(12 * (k + 2)),
            || format!("B0 Chern numbers at k = {k}"),
        );
        t.check(b0.chi_o() == BigInt::from(k + 2), || {
            format!("chi(O_B0) at k = {k}")
        });
    }
    let p2 = SurfaceModel::projective_plane();
    let c = cyclic_cover_invariants(&p2, &p2.class(&[1])?, 2, true)?;
    t.check(
        c.c1_sq_cover == BigInt::from(8) && c.c2_cover == BigInt::from(4),
        || "double plane along a line".into(),
    );

    for _ in 0..samples {
        let s = random_surface(rng);
        let l = random_class(rng, s.rank());
        let m = rng.gen_range(1..=25i64);
        let r = cyclic_cover_invariants(&s, &l, m, false)?;
        let mb = BigInt::from(m);
        // K' = pullback of K + (m-1)L, and χ_top(S') = m·χ_top(S) - (m-1)·χ_top(D) for D ∈ |mL|.
        let kk = &(s.canonical() + &(&(&mb - 1) * &l));
        let k_sq = &mb * s.self_intersection(kk)?;
        let d = &mb * &l;
        let chi_top_d = -(s.self_intersection(&d)? + s.canonical_degree(&d)?);
        let c2 = &mb * s.c2() - (&mb - 1) * chi_top_d;
        t.check(r.c1_sq_cover == k_sq && r.c2_cover == c2, || {
            format!("cover oracle on {:?}, m = {m}", l.coeffs())
        });
        t.check(r.difference == &r.c1_sq_cover - &r.c2_cover, || {
            "cover difference".into()
        });
        if m == 1 {
            t.check(r.c1_sq_cover == *s.c1_sq() && r.c2_cover == *s.c2(), || {
                "identity cover".into()
            });
        }
        if m >= 2 {
            let p = p1p2_check(&s, &l, m)?;
            if p.p1 && p.p2 {
                t.check(r.difference.is_positive(), || {
                    format!("P1 and P2 without positivity, m = {m}")
                });
            }
        }
    }
    Ok(())
}

fn exponents(t: &mut Tally) {
    for m in 2..=30u64 {
        let fm = Multiplicity::Finite(m);
        for j in 1..=600u64 {
            let e = exponent(j, fm);
            t.check((e - 1) * m < j && j <= e * m, || {
                format!("exponent({j}, {m})")
            });
        }
        for j in 0..=60u64 {
            for k in 0..=60u64 {
                t.check(mult_defect(j, k, fm) >= 0, || {
                    format!("mult_defect({j}, {k}, {m})")
                });
            }
        }
    }
}

fn quotients(t: &mut Tally) -> Result<(), CliError> {
    for m in 2..=8u64 {
        for g in 2..=6i64 {
            let g = BigInt::from(g);
            let closed = quotient_bound_exact_polynomial(m, &g)?;
            for q in 1..=20u64 {
                let direct = BigRational::from_integer(quotient_bound_exact(q, m, &g)?);
                t.check(closed.eval_int(q as i64) == direct, || {
                    format!("quotient closed form q={q} m={m} g={g}")
                });
            }
            let lead = BigRational::new((&g - 1) * BigInt::from(m * m), 3.into());
            let paper = quotient_bound_paper_polynomial(m, &g)?;
            t.check(paper.coefficient(3) == lead, || {
                format!("majorization cubic m={m} g={g}")
            });
        }
    }
    Ok(())
}

fn certificates(t: &mut Tally) -> Result<(), CliError> {
    let good = build_config(3, 36, 1, 32, BranchClassMode::PencilClass)?;
    t.check(good.alpha == BigRational::new(3.into(), 4.into()), || {
        "alpha of (3,36,1,32)".into()
    });
    t.check(good.certified(), || "(3,36,1,32) certifies".into());
    let cert = threshold(&good.orbifold_pair()?, 200, None)?;
    t.check(
        cert.leading_coeff == BigRational::from_integer(4096.into()),
        || "cubic coefficient 4096".into(),
    );
    t.check(cert.threshold.is_some(), || {
        "threshold found for (3,36,1,32)".into()
    });
    let bad = build_config(3, 1, 1, 32, BranchClassMode::PencilClass)?;
    t.check(bad.alpha.is_negative(), || {
        "alpha of (3,1,1,32) negative".into()
    });
    let cert = threshold(&bad.orbifold_pair()?, 200, None)?;
    t.check(cert.threshold.is_none(), || {
        "no threshold for (3,1,1,32)".into()
    });
    Ok(())
}

fn germs(t: &mut Tally, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), CliError> {
    const T: usize = 64;
    for _ in 0..samples {
        let m = rng.gen_range(2..=7u64);
        let k = rng.gen_range(0..=12usize);
        let mut w = vec![0i64; k];
        w.push(
            *[-2i64, -1, 1, 2, 3]
                .get(rng.gen_range(0..5))
                .expect("in range"),
        );
        w.extend((0..6).map(|_| rng.gen_range(-3..=3i64)));
        let x: Vec<i64> = (0..6).map(|_| rng.gen_range(-3..=3)).collect();
        let h = CurveGerm::new(Series::from_integers(&x, T)?, Series::from_integers(&w, T)?)?;
        let rec = fibration_pullback_check(&h, m)?;
        let fits = (m as usize) * k < T;
        let expected = if fits {
            Verdict::Yes
        } else {
            Verdict::Indeterminate
        };
        t.check(rec.identity_holds == expected, || {
            format!("pullback identity k={k} m={m}")
        });
        if fits {
            t.check(rec.downstairs_order == Order::Exact(m as usize * k), || {
                "downstairs order".into()
            });
            t.check(rec.classical_m_tangent == Verdict::Yes, || {
                "pullback is m-tangent".into()
            });
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutputs<'a> {
    seed: u64,
    samples: usize,
    checks: usize,
    failures: &'a [String],
}

pub fn run(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    covers(&mut t, &mut rng, samples)?;
    exponents(&mut t);
    quotients(&mut t)?;
    certificates(&mut t)?;
    germs(&mut t, &mut rng, samples)?;

    let certified = t.failures.is_empty();
    let text = if args.format.json {
        RunManifest::new(
            "verify",
            args,
            Vec::new(),
            VerifyOutputs {
                seed,
                samples,
                checks: t.checks,
                failures: &t.failures,
            },
        )
        .to_json()
    } else {
        let mut s = format!(
            "{} checks executed, {} failed\n",
            t.checks,
            t.failures.len()
        );
        for f in &t.failures {
            s.push_str(&format!("FAILED: {f}\n"));
        }
        s
    };
    Ok(Outcome { text, certified })
}
