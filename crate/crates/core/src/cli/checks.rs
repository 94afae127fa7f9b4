//! Itemized comparison of a run against the bundled published values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::pipeline::{RunOutput, SideOutput};
use crate::binet::{
    fan_formula_product, fan_formula_sum, ladder_closed_form, resistance_exact, two_tree_formula,
    wheel_formula, BinetForm,
};
use crate::families::{FamilySpec, Mode};
use crate::fixtures::*;
use crate::shift_poly::ShiftPoly;

#[derive(Debug, Clone, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub pass: bool,
    /// A failing soft check warns instead of failing the run.
    pub soft: bool,
    pub detail: String,
}

impl FixtureCheck {
    fn hard(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        FixtureCheck {
            name: name.into(),
            pass,
            soft: false,
            detail: detail.into(),
        }
    }

    fn soft(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        FixtureCheck {
            soft: true,
            ..Self::hard(name, pass, detail)
        }
    }

    pub fn is_failure(&self) -> bool {
        !self.pass && !self.soft
    }
}

fn poly(s: &str) -> ShiftPoly {
    s.parse().expect("fixture polynomial")
}

fn same_up_to_unit(a: &ShiftPoly, b: &ShiftPoly) -> bool {
    a.normalized() == b.normalized()
}

fn mode_tag(m: Option<Mode>) -> &'static str {
    match m {
        Some(Mode::Row) => "R",
        Some(Mode::Column) => "C",
        None => "0",
    }
}

fn check_minimal(out: &mut Vec<FixtureCheck>, label: &str, side: &SideOutput, want: &ShiftPoly) {
    if let Some(rec) = &side.recurrence {
        let pass = same_up_to_unit(&rec.annihilator, want);
        out.push(FixtureCheck::hard(
            format!("{label} minimal annihilator"),
            pass,
            format!(
                "got {}, expected {}",
                rec.annihilator.to_char(),
                want.to_char()
            ),
        ));
    }
}

fn check_validity(out: &mut Vec<FixtureCheck>, label: &str, side: &SideOutput, want: i64) {
    if let Some(rec) = &side.recurrence {
        out.push(FixtureCheck::hard(
            format!("{label} validity index"),
            rec.validity_index == want,
            format!("got {}, expected {want}", rec.validity_index),
        ));
    }
}

fn check_formula(
    out: &mut Vec<FixtureCheck>,
    name: &str,
    spec: &FamilySpec,
    sizes: std::ops::RangeInclusive<usize>,
    formula: impl Fn(i64) -> BigRational,
) {
    let mut bad = Vec::new();
    for n in sizes.clone() {
        match resistance_exact(spec, n) {
            Ok(r) if r == formula(n as i64) => {}
            Ok(r) => bad.push(format!("n={n}: exact {r}, formula {}", formula(n as i64))),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    let detail = if bad.is_empty() {
        format!("exact for n={}..{}", sizes.start(), sizes.end())
    } else {
        format!("{} mismatches, first {}", bad.len(), bad[0])
    };
    out.push(FixtureCheck::hard(name, bad.is_empty(), detail));
}

fn f64_of(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

/// The tables are printed to six significant digits with trailing zeros dropped.
fn check_ratios(
    out: &mut Vec<FixtureCheck>,
    label: &str,
    side: &SideOutput,
    table: (i64, &[&str]),
) {
    if side.ratios.is_empty() {
        return;
    }
    let mut bad = Vec::new();
    for (k, printed) in table.1.iter().enumerate() {
        let n = table.0 + k as i64;
        match side.ratios.iter().find(|(m, _)| *m == n) {
            Some((_, got)) if matches_printed(f64_of(got), printed, 6) => {}
            Some((_, got)) => bad.push(format!("n={n}: {got} vs {printed}")),
            None => bad.push(format!("n={n}: missing")),
        }
    }
    let detail = if bad.is_empty() {
        "all printed digits match".to_string()
    } else {
        bad.join("; ")
    };
    out.push(FixtureCheck::hard(
        format!("{label} ratio table"),
        bad.is_empty(),
        detail,
    ));
}

fn asymptotic(side: &SideOutput) -> Option<&BinetForm> {
    match &side.asymptotic {
        Some(Ok(f)) => Some(f),
        _ => None,
    }
}

pub fn check_fixtures(run: &RunOutput) -> Vec<FixtureCheck> {
    let mut out = Vec::new();
    let spec = &run.spec;
    let (num, den) = (&run.numerator, &run.denominator);
    match spec.name.as_str() {
        "ladder" => ladder(&mut out, run),
        "path" => {
            let (n, d) = PATH_MINIMAL;
            check_minimal(&mut out, "numerator", num, &x_product(n).to_shift());
            check_minimal(&mut out, "denominator", den, &x_product(d).to_shift());
            check_validity(&mut out, "numerator", num, PATH_VALIDITY.0);
            check_validity(&mut out, "denominator", den, PATH_VALIDITY.1);
            if run.resistance.is_some() {
                check_formula(&mut out, "r(1,n) = n - 1", spec, 3..=50, |n| {
                    BigRational::from_integer((n - 1).into())
                });
            }
        }
        "linear2tree" => {
            let (n, d) = TWO_TREE_MINIMAL;
            check_minimal(&mut out, "numerator", num, &x_product(n).to_shift());
            check_minimal(&mut out, "denominator", den, &x_product(d).to_shift());
            check_validity(&mut out, "numerator", num, TWO_TREE_VALIDITY.0);
            check_validity(&mut out, "denominator", den, TWO_TREE_VALIDITY.1);
            if run.resistance.is_some() {
                check_formula(
                    &mut out,
                    "Fibonacci-Lucas resistance formula",
                    spec,
                    6..=25,
                    two_tree_formula,
                );
            }
        }
        "fan" => {
            let m = x_product(FAN_MINIMAL).to_shift();
            check_minimal(&mut out, "numerator", num, &m);
            check_minimal(&mut out, "denominator", den, &m);
            check_validity(&mut out, "numerator", num, FAN_VALIDITY.0);
            check_validity(&mut out, "denominator", den, FAN_VALIDITY.1);
            if run.resistance.is_some() {
                check_formula(
                    &mut out,
                    "fan resistance, printed sum form",
                    spec,
                    5..=20,
                    |k| fan_formula_sum(1, k),
                );
                check_formula(
                    &mut out,
                    "fan resistance, product form",
                    spec,
                    5..=20,
                    |k| fan_formula_product(1, k),
                );
            }
        }
        "wheel" => {
            check_minimal(
                &mut out,
                "numerator",
                num,
                &x_product(FAN_MINIMAL).to_shift(),
            );
            check_validity(&mut out, "numerator", num, WHEEL_NUMERATOR_VALIDITY);
            check_minimal(
                &mut out,
                "denominator",
                den,
                &x_product(WHEEL_DENOMINATOR).to_shift(),
            );
            check_validity(&mut out, "denominator", den, WHEEL_DENOMINATOR_VALIDITY);
            if run.resistance.is_some() {
                check_formula(
                    &mut out,
                    "wheel resistance formula",
                    spec,
                    5..=20,
                    wheel_formula,
                );
            }
        }
        "linear3tree" => three_tree(&mut out, run),
        "corrugated2tree" => {
            if let Some(e) = &num.expansion {
                let (ev, fam, sup) = CORRUGATED_SOFT;
                out.push(FixtureCheck::soft(
                    "expansion events",
                    e.event_count() == ev,
                    format!("got {}, expected {ev}", e.event_count()),
                ));
                out.push(FixtureCheck::soft(
                    "families",
                    e.family_count() == fam,
                    format!("got {}, expected {fam}", e.family_count()),
                ));
                if let Some(r) = &num.reduced {
                    out.push(FixtureCheck::soft(
                        "reduced support",
                        r.support.len() == sup,
                        format!("got {}, expected {sup}", r.support.len()),
                    ));
                }
            }
        }
        _ => {}
    }
    if let Some(r) = &run.resistance {
        out.push(FixtureCheck::hard(
            "determinant ratio equals grounded solve",
            r.all_agree(),
            format!("{} sizes", r.exact.len()),
        ));
    }
    out
}

fn ladder(out: &mut Vec<FixtureCheck>, run: &RunOutput) {
    let (num, den) = (&run.numerator, &run.denominator);
    if let Some(e) = &num.expansion {
        let got: Vec<_> = e
            .ledger
            .iter()
            .map(|r| {
                (
                    r.id,
                    r.pending as u8,
                    mode_tag(r.mode),
                    r.parent,
                    r.del_row,
                    r.del_col,
                    r.coeff.clone(),
                )
            })
            .collect();
        let want: Vec<_> = LADDER_P
            .iter()
            .map(|&(a, b, c, d, e, f, g)| (a, b, c, d, e, f, poly(g)))
            .collect();
        let first_diff = got.iter().zip(&want).position(|(a, b)| a != b);
        let pass = got == want;
        let detail = match first_diff {
            _ if pass => format!("{} rows", want.len()),
            Some(i) => format!("row {} differs", i + 1),
            None => format!("got {} rows, expected {}", got.len(), want.len()),
        };
        out.push(FixtureCheck::hard("expansion ledger P", pass, detail));

        let q = e.identity_system();
        let mut want_q = vec![vec![ShiftPoly::zero(); LADDER_Q_SIZE]; LADDER_Q_SIZE];
        for &(i, j, c) in LADDER_Q {
            want_q[i - 1][j - 1] = poly(c);
        }
        out.push(FixtureCheck::hard(
            "identity system Q",
            q.q == want_q,
            format!("{}x{}", q.len(), q.len()),
        ));
    }
    if let Some(r) = &num.reduced {
        let pass_support = r.support == LADDER_R_SUPPORT;
        out.push(FixtureCheck::hard(
            "reduced support",
            pass_support,
            format!("{:?}", r.support),
        ));
        if pass_support {
            let pass = r.r.len() == LADDER_R.len()
                && LADDER_R.iter().enumerate().all(|(i, row)| {
                    row.iter()
                        .zip(LADDER_R_SUPPORT)
                        .all(|(c, &j)| *r.get(i + 1, j) == poly(c))
                });
            out.push(FixtureCheck::hard(
                "reduced system R",
                pass,
                "support columns",
            ));
        }
    }
    if let Some(a) = &num.annihilation {
        let want = -&y_product(LADDER_ANNIHILATOR);
        out.push(FixtureCheck::hard(
            "elimination result",
            a.raw == want || same_up_to_unit(&a.raw, &want),
            format!("{}", a.raw),
        ));
    }
    let m = y_product(LADDER_MINIMAL);
    check_minimal(out, "numerator", num, &m);
    check_minimal(out, "denominator", den, &m);
    check_validity(out, "numerator", num, LADDER_VALIDITY.0);
    check_validity(out, "denominator", den, LADDER_VALIDITY.1);
    if let Some(joint) = &run.joint {
        out.push(FixtureCheck::hard(
            "joint annihilator",
            same_up_to_unit(joint, &m),
            format!("{joint}"),
        ));
    }
    if run.resistance.is_some() {
        let p = crate::binet::Precision::new(50);
        let tol = p.tenth_pow(40);
        let bad: Vec<i64> = (3..=7)
            .filter(
                |&m| match crate::oracle::resistance_solve(&run.spec, 2 * m as usize, 1, 2) {
                    Ok(r) => {
                        crate::binet::precision::abs(&(ladder_closed_form(m, p) - p.rational(&r)))
                            > tol
                    }
                    Err(_) => true,
                },
            )
            .collect();
        out.push(FixtureCheck::hard(
            "rung closed form equals r(1,2)",
            bad.is_empty(),
            if bad.is_empty() {
                "m=3..7".to_string()
            } else {
                format!("fails at m={bad:?}")
            },
        ));
    }
    let want = y_product(LADDER_STRIDE2);
    for (label, sub) in ["numerator", "denominator"].iter().zip(&run.subsequences) {
        out.push(FixtureCheck::hard(
            format!("{label} stride-{} annihilator", sub.stride),
            same_up_to_unit(&sub.minimal.annihilator, &want),
            format!("got {}, expected {want}", sub.minimal.annihilator),
        ));
    }
}

fn three_tree(out: &mut Vec<FixtureCheck>, run: &RunOutput) {
    let (num, den) = (&run.numerator, &run.denominator);
    if let Some(e) = &num.expansion {
        out.push(FixtureCheck::soft(
            "expansion events",
            e.event_count() == THREE_TREE_EVENTS,
            format!("got {}, expected {THREE_TREE_EVENTS}", e.event_count()),
        ));
        out.push(FixtureCheck::soft(
            "families",
            e.family_count() == THREE_TREE_FAMILIES,
            format!("got {}, expected {THREE_TREE_FAMILIES}", e.family_count()),
        ));
    }
    if let Some(r) = &num.reduced {
        out.push(FixtureCheck::hard(
            "reduced support has 3 columns",
            r.support.len() == 3,
            format!("{:?}", r.support),
        ));
        if r.support == THREE_TREE_SUPPORT {
            let want: Vec<Vec<ShiftPoly>> = THREE_TREE_R
                .iter()
                .map(|row| row.iter().map(|c| poly(c)).collect())
                .collect();
            out.push(FixtureCheck::hard(
                "reduced block",
                r.restricted() == want,
                "3x3 on the support",
            ));
        }
    }
    if let Some(a) = &num.annihilation {
        let want = -&y_product(THREE_TREE_ANNIHILATOR);
        out.push(FixtureCheck::hard(
            "elimination result",
            same_up_to_unit(&a.raw, &want),
            format!("{}", a.raw),
        ));
    }
    let (n, d) = THREE_TREE_MINIMAL;
    check_minimal(out, "numerator", num, &x_product(n).to_shift());
    check_minimal(out, "denominator", den, &x_product(d).to_shift());
    check_validity(out, "numerator", num, THREE_TREE_VALIDITY.0);
    check_validity(out, "denominator", den, THREE_TREE_VALIDITY.1);
    if let Some(seq) = &num.sequence {
        let pass = THREE_TREE_SEQUENCE
            .iter()
            .enumerate()
            .all(|(k, &v)| seq.get(THREE_TREE_SEQUENCE_START + k as i64) == Some(&BigInt::from(v)));
        out.push(FixtureCheck::hard(
            "numerator determinants",
            pass,
            format!("{} values", THREE_TREE_SEQUENCE.len()),
        ));
    }
    if let (Some(an), Some(ad)) = (asymptotic(num), asymptotic(den)) {
        let root = crate::binet::precision::to_f64(&an.roots[0].value.re);
        out.push(FixtureCheck::hard(
            "dominant root",
            matches_printed(root, &THREE_TREE_ROOT.to_string(), 6),
            format!("{root}"),
        ));
        let cn = an.primed_coeffs();
        let cd = ad.primed_coeffs();
        let re = |z: Option<&crate::binet::Complex>| {
            z.map(|z| crate::binet::precision::to_f64(&z.re))
                .unwrap_or(f64::NAN)
        };
        for (name, got, want) in [
            ("C'num,1", re(cn[0].first()), THREE_TREE_C_NUM_1),
            ("C'num,2", re(cn[0].get(1)), THREE_TREE_C_NUM_2),
            ("C'den", re(cd[0].first()), THREE_TREE_C_DEN),
        ] {
            out.push(FixtureCheck::hard(
                name,
                matches_printed(got, &want.to_string(), 6),
                format!("got {got}, expected {want}"),
            ));
        }
    }
    check_ratios(out, "numerator", num, THREE_TREE_NUM_RATIOS);
    check_ratios(out, "denominator", den, THREE_TREE_DEN_RATIOS);
    if !run.asymptotic_differences.is_empty() {
        let worst = run
            .asymptotic_differences
            .iter()
            .map(|(_, d)| (f64_of(d) - 1.0 / 14.0).abs())
            .fold(0.0, f64::max);
        out.push(FixtureCheck::hard(
            "difference to 1/14",
            worst < 1e-9,
            format!("max deviation {worst:e}"),
        ));
    }
    if run.exact_differences.len() > 1 {
        let fourteenth = BigRational::new(1.into(), 14.into());
        let dev: Vec<BigRational> = run
            .exact_differences
            .iter()
            .map(|(_, d)| (d - &fourteenth).abs())
            .collect();
        let broken = dev.windows(2).position(|w| w[1] > w[0]);
        let (lo, hi) = (
            run.exact_differences[0].0,
            run.exact_differences.last().map(|d| d.0).unwrap_or(0),
        );
        out.push(FixtureCheck::hard(
            "exact differences approach 1/14 monotonically",
            broken.is_none(),
            match broken {
                None => format!("n={lo}..{hi}"),
                Some(i) => format!("deviation grows at n={}", run.exact_differences[i + 1].0),
            },
        ));
    }
}
