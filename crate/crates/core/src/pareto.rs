//! Bicriteria (maximum lateness, makespan) point sets.

use crate::model::JobId;
use crate::time::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoEntry {
    pub sequence: Vec<JobId>,
    pub lmax: Rational,
    pub cmax: Rational,
}

impl ParetoEntry {
    /// No worse in both objectives and strictly better in one.
    pub fn dominates(&self, other: &ParetoEntry) -> bool {
        self.lmax <= other.lmax
            && self.cmax <= other.cmax
            && (self.lmax < other.lmax || self.cmax < other.cmax)
    }
}

/// Mutually non-dominated entries, one per objective pair, sorted by
/// increasing makespan.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParetoSet {
    entries: Vec<ParetoEntry>,
}

impl ParetoSet {
    /// Filters `candidates` down to its non-dominated objective pairs. When
    /// several candidates share a pair, the first one is kept.
    pub fn from_candidates(candidates: impl IntoIterator<Item = ParetoEntry>) -> Self {
        let mut all: Vec<(usize, ParetoEntry)> = candidates.into_iter().enumerate().collect();
        // makespan ascending, then lateness ascending, then first seen
        all.sort_by(|(ia, a), (ib, b)| {
            a.cmax
                .cmp(&b.cmax)
                .then(a.lmax.cmp(&b.lmax))
                .then(ia.cmp(ib))
        });
        let mut entries: Vec<ParetoEntry> = Vec::new();
        for (_, e) in all {
            // every kept entry has cmax <= e.cmax; e survives only with a
            // strictly smaller lateness than all of them
            match entries.last() {
                Some(last) if last.lmax <= e.lmax => continue,
                _ => entries.push(e),
            }
        }
        ParetoSet { entries }
    }

    pub fn entries(&self) -> &[ParetoEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Objective pairs as `(cmax, lmax)`.
    pub fn points(&self) -> Vec<(Rational, Rational)> {
        self.entries.iter().map(|e| (e.cmax, e.lmax)).collect()
    }

    /// An entry with `cmax <= cmax_target` and the smallest lateness among
    /// those, if any.
    pub fn best_within_makespan(&self, cmax_target: Rational) -> Option<&ParetoEntry> {
        self.entries
            .iter()
            .filter(|e| e.cmax <= cmax_target)
            .min_by_key(|e| e.lmax)
    }

    pub fn is_dominance_free(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, a)| {
            self.entries
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || (!a.dominates(b) && (a.lmax, a.cmax) != (b.lmax, b.cmax)))
        })
    }
}
