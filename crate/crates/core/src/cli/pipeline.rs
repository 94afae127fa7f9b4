use std::sync::Arc;

use num_rational::BigRational;

use super::{CliError, RunConfig, Stage};
use crate::binet::{
    asymptotic_form, binet_fit, exact_differences, format_real, ratio_table,
    resistance_asymptotic_difference, resistance_report, BinetForm, Precision, ResistanceReport,
};
use crate::expansion::{laplace_expand, ExpandConfig, Expansion, ExpansionError};
use crate::families::{bapat_handles, FamilyHandle, FamilySpec};
use crate::recurrence::{
    joint_annihilator, minimal_recurrence_of, oracle_sequence, subsequence_annihilator, Recurrence,
    SubsequenceRecurrence,
};
use crate::reduction::{
    solve_identity_system, system_reduce, wheel_denominator_fixture, Annihilation, ReducedSystem,
    DEFAULT_SUPPORT_CAP,
};
use crate::shift_poly::{Sequence, ShiftPoly};

/// Where an annihilator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Expansion,
    /// The expansion did not close; the numerator's operator is reused.
    SharedWithNumerator,
    /// Hand-derived operator for the wheel's `L(n|n)`.
    Fixture,
}

#[derive(Debug, Clone)]
pub struct SideOutput {
    pub handle: FamilyHandle,
    pub expansion: Option<Expansion>,
    pub expansion_error: Option<String>,
    pub reduced: Option<ReducedSystem>,
    pub annihilation: Option<Annihilation>,
    pub annihilator: Option<ShiftPoly>,
    pub source: Option<Source>,
    pub recurrence: Option<Recurrence>,
    pub sequence: Option<Sequence>,
    pub binet: Option<BinetForm>,
    pub asymptotic: Option<Result<BinetForm, String>>,
    pub ratios: Vec<(i64, String)>,
    pub start_shift: i64,
}

impl SideOutput {
    fn new(handle: FamilyHandle, start_shift: i64) -> Self {
        SideOutput {
            handle,
            expansion: None,
            expansion_error: None,
            reduced: None,
            annihilation: None,
            annihilator: None,
            source: None,
            recurrence: None,
            sequence: None,
            binet: None,
            asymptotic: None,
            ratios: Vec::new(),
            start_shift,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub spec: Arc<FamilySpec>,
    pub stages: Vec<Stage>,
    pub min_size: usize,
    pub numerator: SideOutput,
    pub denominator: SideOutput,
    pub subsequences: Vec<SubsequenceRecurrence>,
    pub joint: Option<ShiftPoly>,
    pub resistance: Option<ResistanceReport>,
    pub asymptotic_differences: Vec<(i64, String)>,
    pub exact_differences: Vec<(usize, BigRational)>,
    pub warnings: Vec<String>,
}

/// Built-in index shifts under which published constants are quoted.
pub fn default_shifts(name: &str) -> (i64, i64) {
    match name {
        "linear3tree" => (8, 11),
        _ => (0, 0),
    }
}

/// Stride of the subsequence on which a family is a genuine graph.
pub fn default_stride(name: &str) -> usize {
    match name {
        "ladder" => 2,
        _ => 1,
    }
}

/// Graph sizes at which the pattern is the intended Laplacian.
pub fn graph_sizes(spec: &FamilySpec, max: usize) -> Vec<usize> {
    let from = spec.min_size.max(3);
    match spec.name.as_str() {
        "ladder" => (from..=max).filter(|n| n % 2 == 0).collect(),
        "corrugated2tree" => crate::families::corrugated_sizes(max)
            .filter(|&n| n >= from)
            .collect(),
        _ => (from..=max).collect(),
    }
}

pub fn run_pipeline(cfg: &RunConfig, spec: FamilySpec) -> Result<RunOutput, CliError> {
    let spec = Arc::new(spec);
    let denom = cfg.denominator.resolve(spec.denominator);
    let (num_h, den_h) = bapat_handles(&spec, denom);
    let min_size = cfg.min_size.unwrap_or(spec.min_size);
    let shifts = cfg.shifts.unwrap_or_else(|| default_shifts(&spec.name));
    let precision = Precision::new(cfg.precision);
    let mut out = RunOutput {
        spec: Arc::clone(&spec),
        stages: cfg.stages.clone(),
        min_size,
        numerator: SideOutput::new(num_h, shifts.0),
        denominator: SideOutput::new(den_h, shifts.1),
        subsequences: Vec::new(),
        joint: None,
        resistance: None,
        asymptotic_differences: Vec::new(),
        exact_differences: Vec::new(),
        warnings: Vec::new(),
    };
    let has = |s: Stage| cfg.stages.contains(&s);

    let expand_cfg = ExpandConfig {
        min_size,
        family_cap: cfg.family_cap,
        dedup: Default::default(),
        order: Default::default(),
    };
    if has(Stage::Expand) {
        match laplace_expand(&out.numerator.handle, &expand_cfg) {
            Ok(e) => out.numerator.expansion = Some(e),
            Err(e @ ExpansionError::CapExceeded { .. }) => {
                return Err(CliError::CapExceeded(e.to_string()))
            }
            Err(e) => return Err(CliError::Pipeline(e.to_string())),
        }
        match laplace_expand(&out.denominator.handle, &expand_cfg) {
            Ok(e) => out.denominator.expansion = Some(e),
            Err(e @ ExpansionError::CapExceeded { .. }) => {
                out.warnings.push(format!("denominator: {e}"));
                out.denominator.expansion_error = Some(e.to_string());
            }
            Err(e) => return Err(CliError::Pipeline(e.to_string())),
        }
    }

    if has(Stage::Reduce) {
        for side in [&mut out.numerator, &mut out.denominator] {
            if let Some(e) = &side.expansion {
                side.reduced = Some(system_reduce(&e.identity_system()));
            }
        }
    }

    if has(Stage::Annihilate) {
        for side in [&mut out.numerator, &mut out.denominator] {
            if let Some(r) = &side.reduced {
                let a = solve_identity_system(r, DEFAULT_SUPPORT_CAP)
                    .map_err(|e| CliError::Pipeline(e.to_string()))?;
                side.annihilator = Some(a.normalized.clone());
                side.annihilation = Some(a);
                side.source = Some(Source::Expansion);
            }
        }
        if out.denominator.annihilator.is_none() {
            if spec.name == "wheel" {
                let f = wheel_denominator_fixture();
                out.warnings
                    .push(format!("denominator: using the wheel fixture ({})", f.note));
                out.denominator.annihilator = Some(f.annihilator);
                out.denominator.source = Some(Source::Fixture);
            } else if spec.is_banded() {
                out.warnings
                    .push("denominator: reusing the numerator annihilator (banded pattern)".into());
                out.denominator.annihilator = out.numerator.annihilator.clone();
                out.denominator.source = Some(Source::SharedWithNumerator);
            } else {
                return Err(CliError::CapExceeded(
                    out.denominator.expansion_error.clone().unwrap_or_default(),
                ));
            }
        }
    }

    if has(Stage::Minimal) {
        for side in [&mut out.numerator, &mut out.denominator] {
            let a = side.annihilator.clone().expect("annihilate stage ran");
            let (rec, _) = minimal_recurrence_of(&side.handle, &a)
                .map_err(|e| CliError::Pipeline(e.to_string()))?;
            side.recurrence = Some(rec);
        }
        let stride = cfg.stride.unwrap_or_else(|| default_stride(&spec.name));
        if stride > 1 {
            for side in [&out.numerator, &out.denominator] {
                let rec = side.recurrence.as_ref().expect("minimal ran");
                let from = side.handle.min_size();
                let len = stride * (3 * rec.degree() + 12) + rec.validity_index.max(0) as usize;
                let seq = oracle_sequence(&side.handle, from, from + len)
                    .map_err(|e| CliError::Pipeline(e.to_string()))?;
                let residue = subsequence_residue(&spec, &side.handle, stride);
                let sub = subsequence_annihilator(
                    &rec.annihilator,
                    stride,
                    residue,
                    &seq,
                    &side.handle.label(),
                )
                .map_err(|e| CliError::Pipeline(e.to_string()))?;
                out.subsequences.push(sub);
            }
        }
        let ops: Vec<&ShiftPoly> = [&out.numerator, &out.denominator]
            .iter()
            .filter_map(|s| s.recurrence.as_ref().map(|r| &r.annihilator))
            .collect();
        out.joint = Some(joint_annihilator(ops));
    }

    if has(Stage::Binet) {
        for side in [&mut out.numerator, &mut out.denominator] {
            let rec = side.recurrence.as_ref().expect("minimal ran");
            let from = side.handle.min_size();
            let to = (rec.validity_index.max(from as i64) as usize) + rec.degree() + 30;
            let seq = oracle_sequence(&side.handle, from, to)
                .map_err(|e| CliError::Pipeline(e.to_string()))?;
            let bf = binet_fit(rec, &seq, precision, side.start_shift)
                .map_err(|e| CliError::Pipeline(e.to_string()))?;
            let asym = asymptotic_form(&bf).map_err(|e| e.to_string());
            if let Ok(a) = &asym {
                let hi = (rec.validity_index + 10).min(seq.end());
                side.ratios = ratio_table(a, &seq, seq.start, hi)
                    .into_iter()
                    .map(|(n, r)| (n, format_real(&r, 12)))
                    .collect();
            }
            side.binet = Some(bf);
            side.asymptotic = Some(asym);
            side.sequence = Some(seq);
        }
    }

    if has(Stage::Resistance) {
        let sizes = graph_sizes(&spec, cfg.max_size);
        let forms = match (&out.numerator.asymptotic, &out.denominator.asymptotic) {
            (Some(Ok(n)), Some(Ok(d))) => Some((n, d)),
            _ => None,
        };
        let report = resistance_report(&spec, &sizes, forms, cfg.precision)
            .map_err(|e| CliError::Pipeline(e.to_string()))?;
        if let Some((n, d)) = forms {
            let (lo, hi) = cfg.difference_range;
            out.asymptotic_differences = resistance_asymptotic_difference(n, d, lo, hi)
                .into_iter()
                .map(|(k, v)| (k, format_real(&v, cfg.precision)))
                .collect();
        }
        if spec.name != "ladder" && spec.name != "corrugated2tree" {
            let (lo, hi) = cfg.exact_difference_range;
            out.exact_differences =
                exact_differences(&spec, lo, hi).map_err(|e| CliError::Pipeline(e.to_string()))?;
        }
        out.resistance = Some(report);
    }
    Ok(out)
}

/// Residue of the minor dimension at which the graph has a genuine size.
pub fn subsequence_residue(spec: &FamilySpec, h: &FamilyHandle, stride: usize) -> i64 {
    let offset = match h {
        FamilyHandle::Root { offset, .. } => *offset as i64,
        FamilyHandle::Derived { .. } => 0,
    };
    let size = graph_sizes(spec, spec.min_size + 2 * stride)
        .first()
        .copied()
        .unwrap_or(0) as i64;
    (size - offset).rem_euclid(stride as i64)
}
