use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use orbsurf_core::btsearch::{
    bt_geometry, search, BranchClassMode, BtRecord, IntRange, SearchRanges,
};
use orbsurf_core::contact::{
    fibration_pullback_check, is_m_tangent, CurveGerm, Polynomial2, TangencyMode,
};
use orbsurf_core::covers::{
    cyclic_cover_invariants, double_cover_quadric, minimal_p2_degree, p1p2_check,
};
use orbsurf_core::exact::{fmt_rat, parse_rat};
use orbsurf_core::orbdiff::{bound_row, threshold, BoundRow, Multiplicity};
use orbsurf_core::{assumptions, Assumption, DivisorClass, SurfaceModel};
use serde::Serialize;
use serde_json::Value;

use crate::args::{BoundArgs, CoverArgs, Format, SearchArgs, TangencyArgs};
use crate::manifest::RunManifest;
use crate::{CliError, Outcome};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn render<I: Serialize, O: Serialize>(
    format: &Format,
    manifest: RunManifest<I, O>,
    csv: impl FnOnce() -> String,
) -> String {
    if format.csv {
        csv()
    } else {
        manifest.to_json()
    }
}

/// Comma-separated integers, e.g. `1,-2,0`.
fn parse_class(text: &str, flag: &str) -> Result<DivisorClass, CliError> {
    let coeffs = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| usage(format!("--{flag}: `{}` is not an integer", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DivisorClass::new(coeffs))
}

fn read_json_arg(text: &str, flag: &str) -> Result<Value, CliError> {
    let trimmed = text.trim_start();
    let body = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        text.to_string()
    } else {
        std::fs::read_to_string(Path::new(text))
            .map_err(|e| usage(format!("--{flag}: cannot read {text}: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| usage(format!("--{flag}: invalid JSON: {e}")))
}

fn bt_params(
    k: &Option<i64>,
    a: &Option<i64>,
    b: &Option<i64>,
) -> Result<(i64, i64, i64), CliError> {
    Ok((required(k, "k")?, required(a, "a")?, required(b, "b")?))
}

/// Surface and optional default branch class named by `--surface`/`--surface-file`.
fn resolve_surface(args: &CoverArgs) -> Result<(SurfaceModel, Option<DivisorClass>), CliError> {
    if let Some(path) = &args.surface_file {
        let text = std::fs::read_to_string(path).map_err(|e| {
            usage(format!(
                "--surface-file: cannot read {}: {e}",
                path.display()
            ))
        })?;
        let s: SurfaceModel =
            serde_json::from_str(&text).map_err(|e| usage(format!("--surface-file: {e}")))?;
        return Ok((s, None));
    }
    let name = required(&args.surface, "surface")?;
    match name.to_ascii_lowercase().as_str() {
        "p2" => Ok((SurfaceModel::projective_plane(), None)),
        "p1xp1" | "quadric" => Ok((SurfaceModel::quadric(), None)),
        "b0" => {
            let (k, a, b) = bt_params(&args.k, &args.a, &args.b)?;
            let (b0, l0) = double_cover_quadric(k, a, b)?;
            Ok((b0, Some(l0)))
        }
        "b" => {
            let (k, a, b) = bt_params(&args.k, &args.a, &args.b)?;
            let geo = bt_geometry(k, a, b)?;
            Ok((geo.surface, Some(geo.divisor)))
        }
        other => Err(usage(format!(
            "--surface: unknown surface `{other}` (expected p2, p1xp1, b0, b or --surface-file)"
        ))),
    }
}

fn resolve_branch(args: &CoverArgs) -> Result<(SurfaceModel, DivisorClass, i64), CliError> {
    let (s, default_l) = resolve_surface(args)?;
    let l = match (&args.l, default_l) {
        (Some(text), _) => parse_class(text, "L")?,
        (None, Some(l)) => l,
        (None, None) => return Err(usage("missing required flag --L")),
    };
    s.check_rank(&l)?;
    Ok((s, l, required(&args.m, "m")?))
}

#[derive(Serialize)]
struct CoverOutputs<'a> {
    surface: &'a SurfaceModel,
    #[serde(rename = "L")]
    l: &'a DivisorClass,
    #[serde(flatten)]
    cover: &'a orbsurf_core::covers::CoverResult,
}

pub fn cover(args: &CoverArgs) -> Result<Outcome, CliError> {
    let (s, l, m) = resolve_branch(args)?;
    let c = cyclic_cover_invariants(&s, &l, m, args.smooth_branch)?;
    let manifest = RunManifest::new(
        "cover",
        args,
        c.assumptions.clone(),
        CoverOutputs {
            surface: &s,
            l: &l,
            cover: &c,
        },
    );
    let text = render(&args.format, manifest, || {
        csv_text(
            &["m", "c1_sq", "c2", "diff", "chi_o"],
            [vec![
                c.m.to_string(),
                c.c1_sq_cover.to_string(),
                c.c2_cover.to_string(),
                c.difference.to_string(),
                fmt_rat(&c.chi_o),
            ]],
        )
    });
    Ok(Outcome {
        text,
        certified: true,
    })
}

#[derive(Serialize)]
struct P1P2Outputs<'a> {
    surface: &'a SurfaceModel,
    #[serde(rename = "L")]
    l: &'a DivisorClass,
    #[serde(flatten)]
    record: &'a orbsurf_core::covers::P1P2Record,
    #[serde(serialize_with = "ser_opt_big")]
    minimal_p2_degree: Option<BigInt>,
    cover: &'a orbsurf_core::covers::CoverResult,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub fn p1p2(args: &CoverArgs) -> Result<Outcome, CliError> {
    let (s, l, m) = resolve_branch(args)?;
    let rec = p1p2_check(&s, &l, m)?;
    let c = cyclic_cover_invariants(&s, &l, m, args.smooth_branch)?;
    let certified = rec.p1 && rec.p2;
    let manifest = RunManifest::new(
        "p1p2",
        args,
        c.assumptions.clone(),
        P1P2Outputs {
            surface: &s,
            l: &l,
            record: &rec,
            minimal_p2_degree: rec.p2_threshold.as_ref().map(minimal_p2_degree),
            cover: &c,
        },
    );
    let text = render(&args.format, manifest, || {
        csv_text(
            &["m", "k_dot_l", "l_sq", "p1", "p2", "p2_threshold", "diff"],
            [vec![
                rec.m.to_string(),
                rec.k_dot_l.to_string(),
                rec.l_sq.to_string(),
                rec.p1.to_string(),
                rec.p2.to_string(),
                rec.p2_threshold.as_ref().map(fmt_rat).unwrap_or_default(),
                c.difference.to_string(),
            ]],
        )
    });
    Ok(Outcome { text, certified })
}

fn parse_range(v: &Option<String>, flag: &str) -> Result<IntRange, CliError> {
    let text = required(v, flag)?;
    text.parse::<IntRange>().map_err(|tok| {
        usage(format!(
            "--{flag}: malformed range `{text}` (offending token `{tok}`)"
        ))
    })
}

type Cell = (i64, i64, i64, i64);

#[derive(Serialize)]
struct SearchOutputs<'a> {
    cells_evaluated: usize,
    configs: &'a [BtRecord],
    disagreements: &'a [orbsurf_core::btsearch::P2Disagreement],
    rejected: &'a [orbsurf_core::btsearch::Rejection],
}

pub fn bt_search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let ranges = SearchRanges {
        k: parse_range(&args.k, "k")?,
        a: parse_range(&args.a, "a")?,
        b: parse_range(&args.b, "b")?,
        m: parse_range(&args.m, "m")?,
    };
    let mode_text = required(&args.mode, "mode")?;
    let mode: BranchClassMode = mode_text.parse()?;
    let report = search(&ranges, mode)?;

    let lists: Vec<&[Assumption]> = report
        .certified
        .iter()
        .map(|r| r.assumptions.as_slice())
        .collect();
    let manifest = RunManifest::new(
        "bt-search",
        args,
        assumptions::merge(&lists),
        SearchOutputs {
            cells_evaluated: report.cells_evaluated,
            configs: &report.certified,
            disagreements: &report.disagreements,
            rejected: &report.rejected,
        },
    );
    let text = render(&args.format, manifest, || {
        // One row per grid cell, in the canonical order.
        let mut rows: Vec<(Cell, Vec<String>)> = Vec::new();
        for r in &report.certified {
            rows.push((
                (r.k, r.a, r.b, r.m),
                vec![
                    r.g_d.to_string(),
                    r.k_dot_d.to_string(),
                    fmt_rat(&r.alpha),
                    "true".into(),
                    String::new(),
                ],
            ));
        }
        for r in &report.rejected {
            rows.push((
                (r.k, r.a, r.b, r.m),
                vec![
                    r.g_d.to_string(),
                    r.k_dot_d.to_string(),
                    fmt_rat(&r.alpha),
                    "false".into(),
                    r.failed.join(";"),
                ],
            ));
        }
        rows.sort_by_key(|(key, _)| *key);
        csv_text(
            &[
                "k",
                "a",
                "b",
                "m",
                "g_d",
                "k_dot_d",
                "alpha",
                "certified",
                "failed",
            ],
            rows.into_iter().map(|((k, a, b, m), rest)| {
                let mut row = vec![k.to_string(), a.to_string(), b.to_string(), m.to_string()];
                row.extend(rest);
                row
            }),
        )
    });
    Ok(Outcome {
        text,
        certified: !report.certified.is_empty(),
    })
}

#[derive(Serialize)]
struct BoundOutputs<'a> {
    certificate: &'a orbsurf_core::orbdiff::ThresholdCertificate,
    table: &'a [BoundRow],
}

pub fn bound(args: &BoundArgs) -> Result<Outcome, CliError> {
    let (k, a, b) = bt_params(&args.k, &args.a, &args.b)?;
    let m = required(&args.m, "m")?;
    let q_max = required(&args.q_max, "q-max")?;
    let geo = bt_geometry(k, a, b)?;
    let mult = Multiplicity::finite(
        i64::try_from(m).map_err(|_| usage(format!("--m: {m} is too large")))?,
    )?;
    let pair = geo.orbifold_pair(mult)?;
    let twist = match args.twist.as_deref().map(str::trim) {
        None => None,
        Some("K") | Some("canonical") => Some(geo.surface.canonical().clone()),
        // Trailing coefficients (usually the exceptional curves) may be omitted.
        Some(text) => Some(parse_class(text, "twist")?.extend_to(geo.surface.rank())),
    };
    let cert = threshold(&pair, q_max, twist.as_ref())?;
    let table = (1..=q_max)
        .map(|q| bound_row(&pair, q, twist.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;

    let manifest = RunManifest::new(
        "bound",
        args,
        cert.assumptions.clone(),
        BoundOutputs {
            certificate: &cert,
            table: &table,
        },
    );
    let text = render(&args.format, manifest, || {
        csv_text(
            &["q", "chi", "quotient_exact", "twist_penalty", "LB"],
            table.iter().map(|r| {
                vec![
                    r.q.to_string(),
                    r.chi.to_string(),
                    r.quotient_exact.to_string(),
                    r.twist_penalty.to_string(),
                    r.lb.to_string(),
                ]
            }),
        )
    });
    Ok(Outcome {
        text,
        certified: cert.threshold.is_some(),
    })
}

/// Integer JSON number or exact rational string such as `"-3/4"`.
fn json_rational(v: &Value, what: &str) -> Result<BigRational, CliError> {
    let parsed = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n
            .to_string()
            .parse::<BigInt>()
            .ok()
            .map(BigRational::from_integer),
        Value::String(s) => parse_rat(s),
        _ => None,
    };
    parsed.ok_or_else(|| {
        usage(format!(
            "{what}: `{v}` is not an integer or \"p/q\" rational"
        ))
    })
}

fn parse_germ(v: &Value) -> Result<CurveGerm, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| usage("--germ: expected an object {x, y, T}"))?;
    let series = |key: &str| -> Result<Vec<BigRational>, CliError> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| usage(format!("--germ: missing array `{key}`")))?
            .iter()
            .map(|c| json_rational(c, &format!("--germ.{key}")))
            .collect()
    };
    let t = obj
        .get("T")
        .and_then(Value::as_u64)
        .ok_or_else(|| usage("--germ: missing positive integer `T`"))?;
    Ok(CurveGerm::from_coeffs(
        series("x")?,
        series("y")?,
        t as usize,
    )?)
}

fn parse_divisor(v: &Value) -> Result<Polynomial2, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| usage("--divisor: expected an object {\"i,j\": coeff}"))?;
    let mut terms = Vec::new();
    for (key, c) in obj {
        let (i, j) = key
            .split_once(',')
            .and_then(|(i, j)| Some((i.trim().parse::<u32>().ok()?, j.trim().parse::<u32>().ok()?)))
            .ok_or_else(|| {
                usage(format!(
                    "--divisor: malformed exponent key `{key}` (expected \"i,j\")"
                ))
            })?;
        terms.push(((i, j), json_rational(c, &format!("--divisor[{key}]"))?));
    }
    Ok(Polynomial2::new(terms))
}

#[derive(Serialize)]
struct TangencyOutputs {
    contact: orbsurf_core::contact::ContactRecord,
    pullback: orbsurf_core::contact::PullbackCheck,
}

pub fn tangency(args: &TangencyArgs) -> Result<Outcome, CliError> {
    let germ = parse_germ(&read_json_arg(&required(&args.germ, "germ")?, "germ")?)?;
    let f = parse_divisor(&read_json_arg(
        &required(&args.divisor, "divisor")?,
        "divisor",
    )?)?;
    let m = required(&args.m, "m")?;
    let mode: TangencyMode = args.mode.as_deref().unwrap_or("classical").parse()?;
    let contact = is_m_tangent(&germ, &f, m, mode)?;
    let pullback = fibration_pullback_check(&germ, m)?;
    let certified = contact.m_tangent.as_bool() == Some(true);
    let csv_row = vec![
        contact.order.to_string(),
        m.to_string(),
        verdict_text(contact.classical_m_tangent),
        verdict_text(contact.nonclassical_m_tangent),
        verdict_text(contact.m_tangent),
        pullback.upstairs_order.to_string(),
        pullback.downstairs_order.to_string(),
        verdict_text(pullback.identity_holds),
    ];
    let manifest = RunManifest::new(
        "tangency",
        args,
        Vec::new(),
        TangencyOutputs { contact, pullback },
    );
    let text = render(&args.format, manifest, || {
        csv_text(
            &[
                "order",
                "m",
                "classical_m_tangent",
                "nonclassical_m_tangent",
                "m_tangent",
                "upstairs_order",
                "downstairs_order",
                "pullback_identity",
            ],
            [csv_row],
        )
    });
    Ok(Outcome { text, certified })
}

fn verdict_text(v: orbsurf_core::contact::Verdict) -> String {
    match v.as_bool() {
        Some(b) => b.to_string(),
        None => "indeterminate".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_parse_with_spaces_and_signs() {
        assert_eq!(
            parse_class(" 1, -2 ,0", "L").unwrap(),
            DivisorClass::from_i64s(&[1, -2, 0])
        );
        assert!(matches!(parse_class("1,x", "L"), Err(CliError::Usage(m)) if m.contains("`x`")));
    }

    #[test]
    fn coefficients_are_integers_or_exact_rationals() {
        assert_eq!(
            json_rational(&Value::from(-3), "c").unwrap(),
            BigRational::from_integer((-3).into())
        );
        assert_eq!(
            json_rational(&Value::from("6/4"), "c").unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert!(json_rational(&Value::from(0.5), "c").is_err());
    }

    #[test]
    fn divisor_keys_are_exponent_pairs() {
        let v: Value = serde_json::from_str(r#"{"0,1": 1, "2, 0": "-1"}"#).unwrap();
        let f = parse_divisor(&v).unwrap();
        assert_eq!(f, Polynomial2::from_integers(&[((0, 1), 1), ((2, 0), -1)]));
        let bad: Value = serde_json::from_str(r#"{"01": 1}"#).unwrap();
        assert!(parse_divisor(&bad).is_err());
    }

    #[test]
    fn ranges_report_offending_token() {
        let err = parse_range(&Some("2..=z".into()), "m").unwrap_err();
        assert!(err.to_string().contains("`z`"));
        assert_eq!(
            parse_range(&Some("2..=5".into()), "m").unwrap(),
            IntRange::new(2, 5)
        );
    }
}
