//! Iterated first-line cofactor expansion over matrix families.
//!
//! Expanding family `M(p)` along its first row (or column) at a probe size
//! gives `Det(M(p), n) = Σ_i (−1)^(i+1)·e_i·Det(M(p)(1|i), n−1)`, which is the
//! identity `Det(M(p)) = Σ_i (−1)^(i+1)·e_i·Y·Det(M(child_i))` over all sizes,
//! provided every child family is the same pattern at every size. Each child
//! is either recognized as an earlier family or registered as a new one and
//! queued. The record of these events is the ledger; collecting coefficients
//! by (parent, child) gives the identity system.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::families::{instances_equal, profile_of, FamilyError, FamilyHandle, Mode};
use crate::linalg::IntMatrix;
use crate::shift_poly::ShiftPoly;

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("expansion registered more than {cap} families without closing; raise the cap or the probe size")]
    CapExceeded { cap: usize },
    #[error("root family cannot be probed at size {probe}: {source}")]
    Probe {
        probe: usize,
        #[source]
        source: FamilyError,
    },
    #[error("family cap must be at least 1")]
    ZeroCap,
}

/// Which earlier families a new child is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupPolicy {
    /// Candidates are families with id up to the parent's; a row-mode child
    /// from a position past the first is always registered as new.
    #[default]
    ParentBounded,
    /// Every child is compared against every family registered so far.
    Exhaustive,
}

/// Which pending family is expanded next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueueOrder {
    #[default]
    Oldest,
    Newest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandConfig {
    pub min_size: usize,
    pub family_cap: usize,
    pub dedup: DedupPolicy,
    #[serde(default)]
    pub order: QueueOrder,
}

pub const DEFAULT_FAMILY_CAP: usize = 2048;

impl ExpandConfig {
    pub fn new(min_size: usize) -> Self {
        ExpandConfig {
            min_size,
            family_cap: DEFAULT_FAMILY_CAP,
            dedup: DedupPolicy::ParentBounded,
            order: QueueOrder::Oldest,
        }
    }
}

/// One ledger row: `id, pending, mode, parent, deleted row, deleted column, coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub id: usize,
    #[serde(serialize_with = "flag", deserialize_with = "unflag")]
    pub pending: bool,
    /// `None` on alias rows.
    pub mode: Option<Mode>,
    pub parent: usize,
    pub del_row: usize,
    pub del_col: usize,
    pub coeff: ShiftPoly,
}

fn flag<S: Serializer>(b: &bool, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u8(u8::from(*b))
}

fn unflag<'de, D: serde::Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
    Ok(u8::deserialize(d)? != 0)
}

impl LedgerRow {
    pub fn is_alias(&self) -> bool {
        self.mode.is_none() && self.parent != 0
    }
}

/// Square system `Det(M(i)) = Σ_j q[i][j]·Det(M(j))`, zero-based storage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySystem {
    pub q: Vec<Vec<ShiftPoly>>,
}

impl IdentitySystem {
    pub fn zeros(n: usize) -> Self {
        IdentitySystem {
            q: vec![vec![ShiftPoly::zero(); n]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// One-based access, matching the ledger ids.
    pub fn get(&self, i: usize, j: usize) -> &ShiftPoly {
        &self.q[i - 1][j - 1]
    }

    /// One-based column ids with a nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.q.iter().any(|row| !row[j].is_zero()))
            .map(|j| j + 1)
            .collect()
    }

    /// Aligned rows of entries in Y-form.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .q
            .iter()
            .map(|row| row.iter().map(|p| p.to_string()).collect())
            .collect();
        aligned(&cells)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Expansion {
    pub ledger: Vec<LedgerRow>,
    #[serde(skip)]
    pub families: Vec<Arc<FamilyHandle>>,
    pub family_labels: Vec<String>,
    pub modes: Vec<Mode>,
    /// One-based ids of families whose first row and column vanish at the
    /// probe size; their determinants are taken as zero.
    pub degenerate: Vec<usize>,
    pub config: ExpandConfig,
}

impl Expansion {
    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    /// Ledger rows, the root row included: one per expansion event.
    pub fn event_count(&self) -> usize {
        self.ledger.len()
    }

    pub fn identity_system(&self) -> IdentitySystem {
        ledger_to_q(&self.ledger, self.families.len())
    }

    pub fn ledger_text(&self) -> String {
        ledger_text(&self.ledger)
    }

    pub fn family(&self, id: usize) -> &Arc<FamilyHandle> {
        &self.families[id - 1]
    }
}

struct Entry {
    handle: Arc<FamilyHandle>,
    probes: Vec<IntMatrix>,
}

fn probe_all(h: &FamilyHandle, min_size: usize) -> Result<Vec<IntMatrix>, FamilyError> {
    (min_size..min_size + 4).map(|n| h.instantiate(n)).collect()
}

pub fn laplace_expand(
    root: &FamilyHandle,
    cfg: &ExpandConfig,
) -> Result<Expansion, ExpansionError> {
    if cfg.family_cap == 0 {
        return Err(ExpansionError::ZeroCap);
    }
    let ms = cfg.min_size;
    let root = Arc::new(root.clone());
    let probes =
        probe_all(&root, ms).map_err(|source| ExpansionError::Probe { probe: ms, source })?;
    let mut entries = vec![Entry {
        handle: Arc::clone(&root),
        probes,
    }];
    let mut modes = vec![profile_of(&entries[0].probes[0]).mode()];
    let mut degenerate = Vec::new();
    let mut ledger = vec![LedgerRow {
        id: 1,
        pending: true,
        mode: Some(modes[0]),
        parent: 0,
        del_row: 0,
        del_col: 0,
        coeff: ShiftPoly::zero(),
    }];
    // ledger row that introduced each family
    let mut intro_row = vec![0usize];
    let mut pending: std::collections::BTreeSet<usize> = [0].into_iter().collect();

    let next = |p: &mut std::collections::BTreeSet<usize>| match cfg.order {
        QueueOrder::Oldest => p.pop_first(),
        QueueOrder::Newest => p.pop_last(),
    };
    while let Some(par) = next(&mut pending) {
        let first = entries[par].probes[0].clone();
        let profile = profile_of(&first);
        let mode = modes[par];
        if profile.is_degenerate() {
            degenerate.push(par + 1);
        }
        let line = profile.line().to_vec();
        let parent_handle = Arc::clone(&entries[par].handle);
        for (i, &e) in line.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (dr, dc) = match mode {
                Mode::Row => (1, i + 1),
                Mode::Column => (i + 1, 1),
            };
            let child = FamilyHandle::derived(&parent_handle, dr, dc);
            let child_probes = match probe_all(&child, ms) {
                Ok(p) => p,
                Err(source) => return Err(ExpansionError::Probe { probe: ms, source }),
            };
            let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
            let coeff = ShiftPoly::monomial(BigInt::from(sign * e), 1);
            let candidates = match cfg.dedup {
                DedupPolicy::Exhaustive => entries.len(),
                DedupPolicy::ParentBounded if mode == Mode::Row && i > 0 => 0,
                DedupPolicy::ParentBounded => par + 1,
            };
            let found =
                (0..candidates).find(|&j| instances_equal(&child_probes, &entries[j].probes));
            match found {
                Some(j) => ledger.push(LedgerRow {
                    id: j + 1,
                    pending: false,
                    mode: None,
                    parent: par + 1,
                    del_row: dr,
                    del_col: dc,
                    coeff,
                }),
                None => {
                    if entries.len() >= cfg.family_cap {
                        return Err(ExpansionError::CapExceeded {
                            cap: cfg.family_cap,
                        });
                    }
                    let child_mode = profile_of(&child_probes[0]).mode();
                    entries.push(Entry {
                        handle: Arc::new(child),
                        probes: child_probes,
                    });
                    modes.push(child_mode);
                    let id = entries.len();
                    pending.insert(id - 1);
                    intro_row.push(ledger.len());
                    ledger.push(LedgerRow {
                        id,
                        pending: true,
                        mode: Some(child_mode),
                        parent: par + 1,
                        del_row: dr,
                        del_col: dc,
                        coeff,
                    });
                }
            }
        }
        ledger[intro_row[par]].pending = false;
    }

    let families: Vec<Arc<FamilyHandle>> = entries.into_iter().map(|e| e.handle).collect();
    Ok(Expansion {
        family_labels: families.iter().map(|f| f.label()).collect(),
        ledger,
        families,
        modes,
        degenerate,
        config: cfg.clone(),
    })
}

/// `Q[parent][child] += coeff` over every non-root ledger row.
pub fn ledger_to_q(ledger: &[LedgerRow], families: usize) -> IdentitySystem {
    let mut sys = IdentitySystem::zeros(families);
    for row in ledger.iter().filter(|r| r.parent != 0) {
        sys.q[row.parent - 1][row.id - 1] += &row.coeff;
    }
    sys
}

/// The seven ledger columns, right-aligned.
pub fn ledger_text(ledger: &[LedgerRow]) -> String {
    let cells: Vec<Vec<String>> = ledger
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                u8::from(r.pending).to_string(),
                r.mode.map_or("0".to_string(), |m| m.to_string()),
                r.parent.to_string(),
                r.del_row.to_string(),
                r.del_col.to_string(),
                r.coeff.to_string(),
            ]
        })
        .collect();
    aligned(&cells)
}

pub(crate) fn aligned(cells: &[Vec<String>]) -> String {
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            cells
                .iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:>w$}", w = widths[c]))
            .collect();
        let _ = writeln!(out, "{}", line.join("  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bapat_handles, builtin, DenomChoice};

    fn expand(name: &str) -> Expansion {
        let spec = Arc::new(builtin(name).unwrap());
        let (num, _) = bapat_handles(&spec, DenomChoice::First);
        laplace_expand(&num, &ExpandConfig::new(spec.min_size)).unwrap()
    }

    #[test]
    fn path_ledger() {
        let e = expand("path");
        assert_eq!(e.ledger.len(), 4);
        assert_eq!(e.family_count(), 2);
        let q = e.identity_system();
        assert_eq!(q.get(1, 1), &"2*Y".parse().unwrap());
        assert_eq!(q.get(1, 2), &"Y".parse().unwrap());
        assert_eq!(q.get(2, 1), &"-Y".parse().unwrap());
        assert!(q.get(2, 2).is_zero());
    }

    #[test]
    fn ladder_first_rows() {
        let e = expand("ladder");
        let r = &e.ledger;
        assert_eq!(
            (r[1].id, r[1].parent, r[1].del_row, r[1].del_col),
            (2, 1, 1, 1)
        );
        assert_eq!(r[1].coeff.to_string(), "2*Y");
        assert_eq!(
            (r[2].id, r[2].mode, r[2].del_col),
            (3, Some(Mode::Column), 3)
        );
        assert_eq!(r[2].coeff.to_string(), "-Y");
        assert!(r.iter().all(|x| !x.pending));
    }

    #[test]
    fn cap_is_enforced() {
        let spec = Arc::new(builtin("ladder").unwrap());
        let (num, _) = bapat_handles(&spec, DenomChoice::First);
        let cfg = ExpandConfig {
            family_cap: 3,
            ..ExpandConfig::new(5)
        };
        assert!(matches!(
            laplace_expand(&num, &cfg),
            Err(ExpansionError::CapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn queue_order_keeps_the_determinant() {
        let spec = Arc::new(builtin("ladder").unwrap());
        let (num, _) = bapat_handles(&spec, DenomChoice::First);
        let cfg = ExpandConfig {
            order: QueueOrder::Newest,
            ..ExpandConfig::new(5)
        };
        let e = laplace_expand(&num, &cfg).unwrap();
        assert!(e.ledger.iter().all(|x| !x.pending));
        let sizes: Vec<usize> = (6..=11).collect();
        let bad =
            crate::oracle::check_identities(&e.families, &e.identity_system().q, &sizes).unwrap();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(expand("linear2tree").ledger, expand("linear2tree").ledger);
    }
}
