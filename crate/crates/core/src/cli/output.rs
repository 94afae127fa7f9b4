//! Report files and console summaries.
//!
//! Every JSON document carries `schema_version`. Nothing time- or
//! machine-dependent is written, so equal configs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::checks::FixtureCheck;
use super::pipeline::{RunOutput, SideOutput};
use super::{CliError, RunConfig};
use crate::binet::{format_real, ladder_closed_form, Precision};
use crate::shift_poly::ShiftPoly;

pub const SCHEMA_VERSION: u32 = 1;

fn doc(kind: &str, out: &RunOutput, body: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "family": out.spec.name,
    });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn matrix(m: &[Vec<ShiftPoly>]) -> Value {
    to_value(
        &m.iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

fn per_side(out: &RunOutput, f: impl Fn(&SideOutput) -> Value) -> Value {
    json!({
        "numerator": f(&out.numerator),
        "denominator": f(&out.denominator),
    })
}

fn side_header(s: &SideOutput) -> Value {
    json!({ "handle": s.handle.label(), "min_size": s.handle.min_size() })
}

pub fn ledger_json(out: &RunOutput) -> Value {
    doc(
        "ledger",
        out,
        per_side(out, |s| {
            let mut v = side_header(s);
            v["expansion"] = s.expansion.as_ref().map(to_value).unwrap_or(Value::Null);
            if let Some(e) = &s.expansion {
                v["events"] = json!(e.event_count());
                v["families"] = json!(e.family_count());
            }
            v["error"] = to_value(&s.expansion_error);
            v
        }),
    )
}

pub fn q_json(out: &RunOutput) -> Value {
    doc(
        "identity_system",
        out,
        per_side(out, |s| {
            let mut v = side_header(s);
            if let Some(e) = &s.expansion {
                let q = e.identity_system();
                v["size"] = json!(q.len());
                v["support"] = json!(q.support());
                v["Q"] = matrix(&q.q);
            }
            v
        }),
    )
}

pub fn r_json(out: &RunOutput) -> Value {
    doc(
        "reduced_system",
        out,
        per_side(out, |s| {
            let mut v = side_header(s);
            if let Some(r) = &s.reduced {
                v["support"] = json!(r.support);
                v["R"] = matrix(&r.r);
                v["R_support_block"] = matrix(&r.restricted());
            }
            if let Some(a) = &s.annihilation {
                v["annihilator_raw"] = json!(a.raw.to_string());
                v["annihilator_normalized"] = json!(a.normalized.to_string());
            }
            v
        }),
    )
}

pub fn recurrence_json(out: &RunOutput) -> Value {
    let mut v = doc(
        "recurrence",
        out,
        per_side(out, |s| {
            json!({
                "handle": s.handle.label(),
                "annihilator": s.annihilator.as_ref().map(|a| a.to_string()),
                "source": to_value(&s.source),
                "minimal": to_value(&s.recurrence),
            })
        }),
    );
    v["subsequences"] = to_value(&out.subsequences);
    v["joint_annihilator"] = to_value(&out.joint);
    v
}

pub fn binet_json(out: &RunOutput) -> Value {
    doc(
        "binet",
        out,
        per_side(out, |s| {
            json!({
                "handle": s.handle.label(),
                "start_shift": s.start_shift,
                "form": to_value(&s.binet),
                "asymptotic": match &s.asymptotic {
                    Some(Ok(f)) => to_value(f),
                    Some(Err(e)) => json!({ "error": e }),
                    None => Value::Null,
                },
                "ratios": s.ratios.iter().map(|(n, r)| json!({ "n": n, "asymptotic_over_exact": r })).collect::<Vec<_>>(),
            })
        }),
    )
}

fn resistance_csv(out: &RunOutput) -> String {
    let mut s = String::from("n,exact,decimal,oracle_agrees\n");
    if let Some(r) = &out.resistance {
        for e in &r.exact {
            let _ = writeln!(s, "{},{},{},{}", e.n, e.value, e.decimal, e.oracle_agrees);
        }
    }
    s
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::write(dir.join(name), contents).map_err(CliError::Io)
}

/// Write the run directory.
pub fn write_all(
    cfg: &RunConfig,
    out: &RunOutput,
    checks: &[FixtureCheck],
) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out).map_err(CliError::Io)?;
    write(&cfg.out, "ledger.json", &pretty(&ledger_json(out)))?;
    write(&cfg.out, "Q.json", &pretty(&q_json(out)))?;
    write(&cfg.out, "R.json", &pretty(&r_json(out)))?;
    write(&cfg.out, "recurrence.json", &pretty(&recurrence_json(out)))?;
    write(&cfg.out, "binet.json", &pretty(&binet_json(out)))?;
    write(&cfg.out, "resistance.csv", &resistance_csv(out))?;
    write(&cfg.out, "report.txt", &report_text(cfg, out, checks))?;
    Ok(())
}

/// The stdout document for `--format json`.
pub fn summary_json(_cfg: &RunConfig, out: &RunOutput, checks: &[FixtureCheck]) -> String {
    let v = doc(
        "summary",
        out,
        json!({
            "stages": out.stages,
            "numerator": side_summary(&out.numerator),
            "denominator": side_summary(&out.denominator),
            "joint_annihilator": to_value(&out.joint),
            "resistance": to_value(&out.resistance),
            "asymptotic_differences": out.asymptotic_differences,
            "checks": checks,
            "warnings": out.warnings,
        }),
    );
    serde_json::to_string(&v).expect("json values serialize")
}

fn side_summary(s: &SideOutput) -> Value {
    json!({
        "handle": s.handle.label(),
        "events": s.expansion.as_ref().map(|e| e.event_count()),
        "families": s.expansion.as_ref().map(|e| e.family_count()),
        "support": s.reduced.as_ref().map(|r| r.support.clone()),
        "annihilator": s.annihilator.as_ref().map(|a| a.to_string()),
        "minimal": to_value(&s.recurrence),
    })
}

fn side_text(r: &mut String, name: &str, s: &SideOutput) {
    let _ = writeln!(r, "[{name}] {}", s.handle.label());
    if let Some(e) = &s.expansion {
        let _ = writeln!(
            r,
            "  expansion: {} expansions, {} families",
            e.event_count(),
            e.family_count()
        );
    }
    if let Some(e) = &s.expansion_error {
        let _ = writeln!(r, "  expansion: {e}");
    }
    if let Some(red) = &s.reduced {
        let _ = writeln!(r, "  reduced support: {:?}", red.support);
    }
    if let Some(a) = &s.annihilator {
        let src = s.source.map(|x| format!(" ({x:?})")).unwrap_or_default();
        let _ = writeln!(r, "  annihilator{src}: {a}");
    }
    if let Some(rec) = &s.recurrence {
        let _ = writeln!(
            r,
            "  minimal: {}   [X-form {}]",
            rec.annihilator,
            rec.annihilator.to_char()
        );
        let _ = writeln!(
            r,
            "  validity index: {}   tested {}..{}",
            rec.validity_index, rec.tested_range.0, rec.tested_range.1
        );
    }
    if let Some(bf) = &s.binet {
        let _ = writeln!(r, "  binet form, index shift {}:", bf.start_shift);
        let primed = bf.primed_coeffs();
        for (root, cs) in bf.roots.iter().zip(&primed) {
            let cs: Vec<String> = cs
                .iter()
                .map(|c| crate::binet::format_complex(c, 12))
                .collect();
            let _ = writeln!(
                r,
                "    root {} (mult {}): {}",
                crate::binet::format_complex(&root.value, 12),
                root.multiplicity,
                cs.join(", ")
            );
        }
    }
    match &s.asymptotic {
        Some(Ok(a)) => {
            if let Some(root) = a.dominant_root() {
                let _ = writeln!(
                    r,
                    "  dominant root: {}",
                    crate::binet::format_complex(&root.value, 12)
                );
            }
        }
        Some(Err(e)) => {
            let _ = writeln!(r, "  asymptotic form: {e}");
        }
        None => {}
    }
    if !s.ratios.is_empty() {
        let cells: Vec<String> = s.ratios.iter().map(|(n, x)| format!("{n}:{x}")).collect();
        let _ = writeln!(r, "  asymptotic/exact: {}", cells.join(" "));
    }
}

/// Plain-text report, also written as `report.txt`.
pub fn report_text(cfg: &RunConfig, out: &RunOutput, checks: &[FixtureCheck]) -> String {
    let mut r = String::new();
    let stages: Vec<String> = out
        .stages
        .iter()
        .map(|s| format!("{s:?}").to_lowercase())
        .collect();
    let _ = writeln!(r, "family: {}", out.spec.name);
    let _ = writeln!(r, "stages: {}", stages.join(","));
    let _ = writeln!(r, "precision: {} digits", cfg.precision);
    side_text(&mut r, "numerator", &out.numerator);
    side_text(&mut r, "denominator", &out.denominator);
    for sub in &out.subsequences {
        let _ = writeln!(
            r,
            "[stride {} residue {}] {}: lifted {}, minimal {} from {}",
            sub.stride,
            sub.residue,
            sub.minimal.family,
            sub.power,
            sub.minimal.annihilator,
            sub.minimal.validity_index
        );
    }
    if let Some(j) = &out.joint {
        let _ = writeln!(r, "joint annihilator: {j}");
    }
    if let Some(res) = &out.resistance {
        let _ = writeln!(r, "[resistance] r(1,n) = numerator(n-2) / denominator(n-1)");
        for e in &res.exact {
            let ok = if e.oracle_agrees {
                ""
            } else {
                "   (grounded solve disagrees)"
            };
            let _ = writeln!(r, "  n={:<3} {:<24} {}{ok}", e.n, e.decimal, e.value);
        }
        if let Some(a) = &res.asymptotic {
            let _ = writeln!(
                r,
                "  numerator constants: {}",
                a.numerator_coeffs.join(", ")
            );
            let _ = writeln!(
                r,
                "  denominator constants: {}",
                a.denominator_coeffs.join(", ")
            );
        }
        if let Some(l) = &res.limit_estimate {
            let _ = writeln!(r, "  difference limit: {l}");
        }
    }
    if let (Some(first), Some(last)) = (
        out.asymptotic_differences.first(),
        out.asymptotic_differences.last(),
    ) {
        let _ = writeln!(r, "  asymptotic difference n={}: {}", first.0, first.1);
        let _ = writeln!(r, "  asymptotic difference n={}: {}", last.0, last.1);
    }
    if !out.exact_differences.is_empty() {
        let p = Precision::new(cfg.precision);
        for (n, d) in &out.exact_differences {
            let _ = writeln!(
                r,
                "  exact r(1,{})-r(1,{n}) = {}",
                n + 1,
                format_real(&p.rational(d), 20)
            );
        }
    }
    notes(&mut r, cfg, out);
    if !checks.is_empty() {
        let _ = writeln!(r, "[checks]");
        for c in checks {
            let tag = match (c.pass, c.soft) {
                (true, _) => "PASS",
                (false, true) => "WARN",
                (false, false) => "FAIL",
            };
            let _ = writeln!(r, "  {tag} {}: {}", c.name, c.detail);
        }
    }
    for w in &out.warnings {
        let _ = writeln!(r, "warning: {w}");
    }
    r
}

fn notes(r: &mut String, cfg: &RunConfig, out: &RunOutput) {
    match out.spec.name.as_str() {
        "path" if out.numerator.recurrence.is_some() => {
            let _ = writeln!(
                r,
                "note: a commonly quoted statement gives two different minimal annihilators for the \
                 same path minor; the oracle determinants give (Y - 1)^2 for L({{1,n}}|{{1,n}}) and \
                 Y - 1 for L(1|1), whose determinant is identically 1."
            );
        }
        "ladder" if out.resistance.is_some() => {
            let p = Precision::new(cfg.precision);
            let _ = writeln!(
                r,
                "note: closed form -1 - sqrt(3) + 2*sqrt(3)/(1 - (2 - sqrt(3))^(2m)) is the resistance \
                 between the two end vertices of one rung, r(1,2) on 2m vertices:"
            );
            for m in 3..=6 {
                let _ = writeln!(r, "  m={m}: {}", format_real(&ladder_closed_form(m, p), 20));
            }
        }
        _ => {}
    }
}
