//! Declarative Laplacian families and the minor algebra on top of them.
//!
//! A [`FamilySpec`] produces the `N x N` member of a banded matrix family from
//! per-diagonal patterns. A [`FamilyHandle`] names a family of square minors
//! indexed by their dimension `n`: either a fixed deletion from the spec, or a
//! single row/column deletion from a parent handle one size up.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("size {n} is below the minimum {min} for family {family}")]
    SizeTooSmall {
        family: String,
        n: usize,
        min: usize,
    },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("invalid family spec {name:?}: {reason}")]
    InvalidSpec { name: String, reason: String },
    #[error("cannot read family config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse family config: {0}")]
    Json(#[from] serde_json::Error),
}

/// Values along one diagonal: `head` overrides the first entries, `tail` the
/// last, and `core` repeats in between, phase-anchored at the end of `head`.
/// Where head and tail overlap on short diagonals, head wins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandPattern {
    #[serde(default)]
    pub head: Vec<i64>,
    pub core: Vec<i64>,
    #[serde(default)]
    pub tail: Vec<i64>,
}

impl BandPattern {
    pub fn new(head: &[i64], core: &[i64], tail: &[i64]) -> Self {
        BandPattern {
            head: head.to_vec(),
            core: core.to_vec(),
            tail: tail.to_vec(),
        }
    }

    pub fn constant(v: i64) -> Self {
        Self::new(&[], &[v], &[])
    }

    /// Entry `i` (zero-based) of a diagonal of length `len`.
    pub fn value(&self, i: usize, len: usize) -> i64 {
        debug_assert!(i < len);
        if i < self.head.len() {
            return self.head[i];
        }
        if i + self.tail.len() >= len {
            return self.tail[i + self.tail.len() - len];
        }
        self.core[(i - self.head.len()) % self.core.len()]
    }
}

/// Position counted from either end, one-based: `Head(1)` is the first
/// row/column, `Tail(1)` the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    Head(usize),
    Tail(usize),
}

impl Anchor {
    /// Zero-based index in a dimension of size `n`, if it lies inside.
    pub fn resolve(self, n: usize) -> Option<usize> {
        match self {
            Anchor::Head(k) if k >= 1 && k <= n => Some(k - 1),
            Anchor::Tail(k) if k >= 1 && k <= n => Some(n - k),
            _ => None,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Head(1) => write!(f, "1"),
            Anchor::Head(k) => write!(f, "{k}"),
            Anchor::Tail(1) => write!(f, "n"),
            Anchor::Tail(k) => write!(f, "n-{}", k - 1),
        }
    }
}

/// Dense last row and column, with corner entry `corner_scale·N + corner_offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Border {
    pub value: i64,
    pub corner_scale: i64,
    pub corner_offset: i64,
}

/// A single symmetric off-band entry placed after bands and border.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraEntry {
    pub row: Anchor,
    pub col: Anchor,
    pub value: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DenomChoice {
    #[default]
    First,
    Last,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub diag: BandPattern,
    /// Offset `k` to the pattern of the `k`-th superdiagonal, mirrored below.
    #[serde(default)]
    pub offdiags: BTreeMap<usize, BandPattern>,
    #[serde(default)]
    pub border: Option<Border>,
    #[serde(default)]
    pub extras: Vec<ExtraEntry>,
    /// Default probe size for the expansion engine.
    pub min_size: usize,
    #[serde(default)]
    pub denominator: DenomChoice,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<(), FamilyError> {
        let bad = |reason: &str| {
            Err(FamilyError::InvalidSpec {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if self.name.is_empty() {
            return bad("empty name");
        }
        if self.diag.core.is_empty() || self.offdiags.values().any(|p| p.core.is_empty()) {
            return bad("every band needs a nonempty periodic core");
        }
        if self.offdiags.contains_key(&0) {
            return bad("offset 0 is the main diagonal");
        }
        if self.min_size == 0 {
            return bad("min_size must be positive");
        }
        Ok(())
    }

    /// No dense border and no off-band extras.
    pub fn is_banded(&self) -> bool {
        self.border.is_none() && self.extras.is_empty()
    }

    /// Entry `(r, c)` (zero-based) of the `size x size` member.
    pub fn entry(&self, size: usize, r: usize, c: usize) -> i64 {
        debug_assert!(r < size && c < size);
        for e in self.extras.iter().rev() {
            if let (Some(er), Some(ec)) = (e.row.resolve(size), e.col.resolve(size)) {
                if er != ec && ((er, ec) == (r, c) || (ec, er) == (r, c)) {
                    return e.value;
                }
            }
        }
        if let Some(b) = &self.border {
            let last = size - 1;
            if r == last && c == last {
                return b.corner_scale * size as i64 + b.corner_offset;
            }
            if r == last || c == last {
                return b.value;
            }
        }
        if r == c {
            return self.diag.value(r, size);
        }
        let (lo, k) = if r < c { (r, c - r) } else { (c, r - c) };
        match self.offdiags.get(&k) {
            Some(p) => p.value(lo, size - k),
            None => 0,
        }
    }

    pub fn instantiate(&self, size: usize) -> Result<IntMatrix, FamilyError> {
        if size == 0 {
            return Err(FamilyError::SizeTooSmall {
                family: self.name.clone(),
                n: 0,
                min: 1,
            });
        }
        let mut m = IntMatrix::zeros(size, size);
        for r in 0..size {
            for c in 0..size {
                m.set(r, c, self.entry(size, r, c));
            }
        }
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self, FamilyError> {
        let spec: FamilySpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, FamilyError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Family of square minors indexed by dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyHandle {
    /// `n ↦ spec(n + offset)` with `rows` and `cols` deleted.
    Root {
        spec: Arc<FamilySpec>,
        rows: Vec<Anchor>,
        cols: Vec<Anchor>,
        offset: usize,
    },
    /// `n ↦ parent(n + 1)` with one-based row `row` and column `col` deleted.
    Derived {
        parent: Arc<FamilyHandle>,
        row: usize,
        col: usize,
    },
}

impl FamilyHandle {
    pub fn root(
        spec: Arc<FamilySpec>,
        rows: Vec<Anchor>,
        cols: Vec<Anchor>,
    ) -> Result<Self, FamilyError> {
        if rows.len() != cols.len() {
            return Err(FamilyError::InvalidSpec {
                name: spec.name.clone(),
                reason: "a square minor deletes as many rows as columns".into(),
            });
        }
        let offset = rows.len();
        Ok(FamilyHandle::Root {
            spec,
            rows,
            cols,
            offset,
        })
    }

    /// The whole matrix: `n ↦ spec(n)`.
    pub fn full(spec: Arc<FamilySpec>) -> Self {
        FamilyHandle::Root {
            spec,
            rows: Vec::new(),
            cols: Vec::new(),
            offset: 0,
        }
    }

    pub fn derived(parent: &Arc<FamilyHandle>, row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "deletions are one-based");
        FamilyHandle::Derived {
            parent: Arc::clone(parent),
            row,
            col,
        }
    }

    pub fn spec(&self) -> &Arc<FamilySpec> {
        match self {
            FamilyHandle::Root { spec, .. } => spec,
            FamilyHandle::Derived { parent, .. } => parent.spec(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FamilyHandle::Root { .. } => 0,
            FamilyHandle::Derived { parent, .. } => parent.depth() + 1,
        }
    }

    /// Smallest dimension at which every deletion in the chain is in range.
    pub fn min_size(&self) -> usize {
        match self {
            FamilyHandle::Root {
                rows, cols, offset, ..
            } => (1..)
                .find(|&n| {
                    let size = n + offset;
                    distinct_in_range(rows, size) && distinct_in_range(cols, size)
                })
                .expect("anchors eventually separate"),
            FamilyHandle::Derived { parent, row, col } => {
                let need = (*row.max(col)).max(parent.min_size());
                need.saturating_sub(1).max(1)
            }
        }
    }

    /// Root spec size plus the surviving (zero-based) spec rows and columns
    /// of the dimension-`n` member, in order.
    pub fn index_maps(&self, n: usize) -> (usize, Vec<usize>, Vec<usize>) {
        match self {
            FamilyHandle::Root {
                rows, cols, offset, ..
            } => {
                let size = n + offset;
                let dr: Vec<usize> = rows.iter().filter_map(|a| a.resolve(size)).collect();
                let dc: Vec<usize> = cols.iter().filter_map(|a| a.resolve(size)).collect();
                (
                    size,
                    (0..size).filter(|i| !dr.contains(i)).collect(),
                    (0..size).filter(|i| !dc.contains(i)).collect(),
                )
            }
            FamilyHandle::Derived { parent, row, col } => {
                let (size, mut r, mut c) = parent.index_maps(n + 1);
                r.remove(row - 1);
                c.remove(col - 1);
                (size, r, c)
            }
        }
    }

    pub fn instantiate(&self, n: usize) -> Result<IntMatrix, FamilyError> {
        let min = self.min_size();
        if n < min {
            return Err(FamilyError::SizeTooSmall {
                family: self.label(),
                n,
                min,
            });
        }
        let spec = self.spec();
        let (size, rows, cols) = self.index_maps(n);
        let mut m = IntMatrix::zeros(n, n);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, spec.entry(size, r, c));
            }
        }
        Ok(m)
    }

    /// Short description such as `ladder L({1,n}|{1,n})` or `…(1|3)(2|1)`.
    pub fn label(&self) -> String {
        match self {
            FamilyHandle::Root {
                spec, rows, cols, ..
            } => {
                if rows.is_empty() {
                    spec.name.clone()
                } else {
                    format!("{} L({}|{})", spec.name, anchor_set(rows), anchor_set(cols))
                }
            }
            FamilyHandle::Derived { parent, row, col } => {
                format!("{}({row}|{col})", parent.label())
            }
        }
    }
}

fn distinct_in_range(anchors: &[Anchor], size: usize) -> bool {
    let idx: Vec<Option<usize>> = anchors.iter().map(|a| a.resolve(size)).collect();
    idx.iter().all(Option::is_some) && (0..idx.len()).all(|i| (0..i).all(|j| idx[i] != idx[j]))
}

fn anchor_set(a: &[Anchor]) -> String {
    if a.len() == 1 {
        a[0].to_string()
    } else {
        let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for FamilyHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Numerator `L({1,n}|{1,n})` and denominator `L(1|1)` or `L(n|n)`.
pub fn bapat_handles(spec: &Arc<FamilySpec>, denom: DenomChoice) -> (FamilyHandle, FamilyHandle) {
    let ends = vec![Anchor::Head(1), Anchor::Tail(1)];
    let num = FamilyHandle::root(Arc::clone(spec), ends.clone(), ends).expect("square");
    let d = match denom {
        DenomChoice::First => Anchor::Head(1),
        DenomChoice::Last => Anchor::Tail(1),
    };
    let den = FamilyHandle::root(Arc::clone(spec), vec![d], vec![d]).expect("square");
    (num, den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "R")]
    Row,
    #[serde(rename = "C")]
    Column,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Row => "R",
            Mode::Column => "C",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineProfile {
    pub row_nonzeros: usize,
    pub col_nonzeros: usize,
    pub row: Vec<i64>,
    pub col: Vec<i64>,
}

impl LineProfile {
    /// Column when it has strictly fewer nonzeros than the row.
    pub fn mode(&self) -> Mode {
        if self.col_nonzeros < self.row_nonzeros {
            Mode::Column
        } else {
            Mode::Row
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.row_nonzeros == 0 && self.col_nonzeros == 0
    }

    /// The line expansion runs along.
    pub fn line(&self) -> &[i64] {
        match self.mode() {
            Mode::Row => &self.row,
            Mode::Column => &self.col,
        }
    }
}

pub fn first_line_profile(h: &FamilyHandle, probe_size: usize) -> Result<LineProfile, FamilyError> {
    let m = h.instantiate(probe_size)?;
    Ok(profile_of(&m))
}

pub fn profile_of(m: &IntMatrix) -> LineProfile {
    LineProfile {
        row_nonzeros: m.row_nnz(0),
        col_nonzeros: m.col_nnz(0),
        row: m.row(0).to_vec(),
        col: m.col(0),
    }
}

/// Instances agree at `min_size..=min_size+3`, all directly or all transposed.
pub fn families_equal(a: &FamilyHandle, b: &FamilyHandle, min_size: usize) -> bool {
    let probe = |h: &FamilyHandle| -> Option<Vec<IntMatrix>> {
        (min_size..min_size + 4)
            .map(|n| h.instantiate(n).ok())
            .collect()
    };
    match (probe(a), probe(b)) {
        (Some(x), Some(y)) => instances_equal(&x, &y),
        _ => false,
    }
}

pub fn instances_equal(x: &[IntMatrix], y: &[IntMatrix]) -> bool {
    x.len() == y.len()
        && (x.iter().zip(y).all(|(p, q)| p == q)
            || x.iter().zip(y).all(|(p, q)| *p == q.transpose()))
}

// ---------------------------------------------------------------------------
// Built-in families

pub const BUILTIN_NAMES: &[&str] = &[
    "path",
    "linear2tree",
    "linear3tree",
    "ladder",
    "fan",
    "wheel",
    "corrugated2tree",
];

/// The six Laplacian families with closed resistance results.
pub const LAPLACIAN_BUILTINS: &[&str] = &[
    "path",
    "linear2tree",
    "linear3tree",
    "ladder",
    "fan",
    "wheel",
];

fn bands(entries: &[(usize, BandPattern)]) -> BTreeMap<usize, BandPattern> {
    entries.iter().cloned().collect()
}

pub fn builtin(name: &str) -> Result<FamilySpec, FamilyError> {
    let neg = BandPattern::constant(-1);
    let spec = match name {
        "path" => FamilySpec {
            name: "path".into(),
            diag: BandPattern::new(&[1], &[2], &[1]),
            offdiags: bands(&[(1, neg)]),
            border: None,
            extras: vec![],
            min_size: 3,
            denominator: DenomChoice::First,
        },
        "linear2tree" | "2tree" => FamilySpec {
            name: "linear2tree".into(),
            diag: BandPattern::new(&[2, 3], &[4], &[3, 2]),
            offdiags: bands(&[(1, neg.clone()), (2, neg)]),
            border: None,
            extras: vec![],
            min_size: 5,
            denominator: DenomChoice::First,
        },
        "linear3tree" | "3tree" => FamilySpec {
            name: "linear3tree".into(),
            diag: BandPattern::new(&[3, 4, 5], &[6], &[5, 4, 3]),
            offdiags: bands(&[(1, neg.clone()), (2, neg.clone()), (3, neg)]),
            border: None,
            extras: vec![],
            min_size: 8,
            denominator: DenomChoice::First,
        },
        "ladder" => FamilySpec {
            name: "ladder".into(),
            diag: BandPattern::new(&[2, 2], &[3], &[2, 2]),
            offdiags: bands(&[(1, BandPattern::new(&[], &[-1, 0], &[])), (2, neg)]),
            border: None,
            extras: vec![],
            min_size: 5,
            denominator: DenomChoice::First,
        },
        "fan" => FamilySpec {
            name: "fan".into(),
            diag: BandPattern::new(&[2], &[3], &[2, 0]),
            offdiags: bands(&[(1, neg)]),
            border: Some(Border {
                value: -1,
                corner_scale: 1,
                corner_offset: -1,
            }),
            extras: vec![],
            min_size: 4,
            denominator: DenomChoice::Last,
        },
        "wheel" => FamilySpec {
            name: "wheel".into(),
            diag: BandPattern::new(&[3], &[3], &[3, 0]),
            offdiags: bands(&[(1, neg)]),
            border: Some(Border {
                value: -1,
                corner_scale: 1,
                corner_offset: -1,
            }),
            extras: vec![ExtraEntry {
                row: Anchor::Head(1),
                col: Anchor::Tail(2),
                value: -1,
            }],
            min_size: 4,
            denominator: DenomChoice::Last,
        },
        "corrugated2tree" => FamilySpec {
            name: "corrugated2tree".into(),
            diag: BandPattern::new(&[2, 3, 5], &[3, 6, 3], &[5, 3, 3, 2]),
            offdiags: bands(&[
                (1, neg),
                (2, BandPattern::new(&[-1, -1, -1], &[0, -1, 0], &[])),
                (3, BandPattern::new(&[0, 0, -1], &[0, -1, 0], &[])),
                (4, BandPattern::new(&[0, 0, 0], &[0, -1, 0], &[])),
            ]),
            border: None,
            extras: vec![],
            min_size: 9,
            denominator: DenomChoice::First,
        },
        other => return Err(FamilyError::UnknownFamily(other.to_string())),
    };
    Ok(spec)
}

/// Corrugated 2-tree sizes `3m + 2` for which the pattern is a true Laplacian.
pub fn corrugated_sizes(max: usize) -> impl Iterator<Item = usize> {
    (2..).map(|m| 3 * m + 2).take_while(move |&n| n <= max)
}
