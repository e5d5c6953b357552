//! Turning job sequences into timed schedules.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Instance, JobId, Timeline};
use crate::time::{display, Rational};

/// One job placed on the timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledJob {
    pub id: JobId,
    pub start: Rational,
    pub completion: Rational,
}

/// A sequence of jobs with exact start and completion times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    timeline: Timeline,
    entries: Vec<ScheduledJob>,
    lmax: Rational,
    cmax: Rational,
}

impl Schedule {
    /// Builds a schedule from explicit start times, in the given order.
    /// Values are computed but not checked; see [`Schedule::check`].
    pub fn from_starts(
        instance: &Instance,
        timeline: Timeline,
        starts: &[(JobId, Rational)],
    ) -> Result<Self> {
        let index = instance.index();
        let mut entries = Vec::with_capacity(starts.len());
        let mut lmax = None;
        let mut cmax = None;
        for &(id, start) in starts {
            let job = &instance.jobs()[*index.get(&id).ok_or(Error::UnknownJob(id))?];
            let completion = start + job.p;
            entries.push(ScheduledJob {
                id,
                start,
                completion,
            });
            lmax = Some(lmax.map_or(completion + job.q, |l: Rational| l.max(completion + job.q)));
            cmax = Some(cmax.map_or(completion, |c: Rational| c.max(completion)));
        }
        match (lmax, cmax) {
            (Some(lmax), Some(cmax)) => Ok(Schedule {
                timeline,
                entries,
                lmax,
                cmax,
            }),
            _ => Err(Error::EmptySubset),
        }
    }

    pub fn timeline(&self) -> Timeline {
        self.timeline
    }

    pub fn entries(&self) -> &[ScheduledJob] {
        &self.entries
    }

    pub fn sequence(&self) -> Vec<JobId> {
        self.entries.iter().map(|e| e.id).collect()
    }

    pub fn lmax(&self) -> Rational {
        self.lmax
    }

    pub fn cmax(&self) -> Rational {
        self.cmax
    }

    pub fn entry(&self, id: JobId) -> Option<&ScheduledJob> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn start_of(&self, id: JobId) -> Option<Rational> {
        self.entry(id).map(|e| e.start)
    }

    pub fn completion_of(&self, id: JobId) -> Option<Rational> {
        self.entry(id).map(|e| e.completion)
    }

    /// Verifies every schedule invariant against `instance`: each job
    /// scheduled once, heads respected, no overlap, window rules of the
    /// schedule's timeline, and the stored objective values.
    pub fn check(&self, instance: &Instance) -> std::result::Result<(), Violation> {
        if self.entries.len() != instance.len() {
            return Err(Violation::Coverage);
        }
        let index = instance.index();
        let mut seen = vec![false; instance.len()];
        let mut lmax = None::<Rational>;
        let mut cmax = None::<Rational>;
        for e in &self.entries {
            let i = *index.get(&e.id).ok_or(Violation::Coverage)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Violation::Coverage);
            }
            let job = &instance.jobs()[i];
            if e.start < job.r {
                return Err(Violation::BeforeRelease(e.id));
            }
            if e.completion != e.start + job.p {
                return Err(Violation::Duration(e.id));
            }
            if !self.timeline.admits(e.start, job.p) {
                return Err(Violation::Window(e.id));
            }
            lmax = Some(lmax.map_or(e.completion + job.q, |l| l.max(e.completion + job.q)));
            cmax = Some(cmax.map_or(e.completion, |c| c.max(e.completion)));
        }
        let mut by_start: Vec<_> = self.entries.iter().collect();
        by_start.sort_by_key(|e| e.start);
        for pair in by_start.windows(2) {
            if pair[1].start < pair[0].completion {
                return Err(Violation::Overlap(pair[0].id, pair[1].id));
            }
        }
        if lmax != Some(self.lmax) || cmax != Some(self.cmax) {
            return Err(Violation::Objective);
        }
        Ok(())
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "job {:>4}  [{}, {}]",
                e.id,
                display(e.start),
                display(e.completion)
            )?;
        }
        write!(f, "lmax={} cmax={}", display(self.lmax), display(self.cmax))
    }
}

/// A broken schedule invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Coverage,
    BeforeRelease(JobId),
    Duration(JobId),
    Window(JobId),
    Overlap(JobId, JobId),
    Objective,
}

/// Places the jobs of `sequence` one after another, each at its smallest
/// start that is not before the previous completion, not before its head
/// and admissible on `timeline`.
pub fn evaluate_sequence(
    instance: &Instance,
    sequence: &[JobId],
    timeline: Timeline,
) -> Result<Schedule> {
    let order = positions(instance, sequence)?;
    Ok(evaluate_positions(instance, &order, timeline))
}

/// Converts ids into positions, checking that they form a permutation.
pub(crate) fn positions(instance: &Instance, sequence: &[JobId]) -> Result<Vec<usize>> {
    if sequence.len() != instance.len() {
        return Err(Error::NotAPermutation);
    }
    let index: HashMap<JobId, usize> = instance.index();
    let mut seen = vec![false; instance.len()];
    sequence
        .iter()
        .map(|id| {
            let i = *index.get(id).ok_or(Error::NotAPermutation)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation);
            }
            Ok(i)
        })
        .collect()
}

/// Same as [`evaluate_sequence`] for a sequence given by job positions.
pub(crate) fn evaluate_positions(
    instance: &Instance,
    order: &[usize],
    timeline: Timeline,
) -> Schedule {
    let jobs = instance.jobs();
    let mut entries = Vec::with_capacity(order.len());
    let mut clock: Option<Rational> = None;
    let mut lmax: Option<Rational> = None;
    for &i in order {
        let job = &jobs[i];
        let earliest = clock.map_or(job.r, |c| c.max(job.r));
        let start = timeline.earliest_start(earliest, job.p);
        let completion = start + job.p;
        entries.push(ScheduledJob {
            id: job.id,
            start,
            completion,
        });
        clock = Some(completion);
        lmax = Some(lmax.map_or(completion + job.q, |l| l.max(completion + job.q)));
    }
    Schedule {
        timeline,
        entries,
        lmax: lmax.expect("evaluated sequence is nonempty"),
        cmax: clock.expect("evaluated sequence is nonempty"),
    }
}

/// Objective values of a sequence given by positions, without building a
/// schedule. Returns `(lmax, cmax)`.
#[inline]
pub(crate) fn objectives(
    p: &[Rational],
    r: &[Rational],
    q: &[Rational],
    order: &[usize],
    timeline: Timeline,
) -> (Rational, Rational) {
    let mut clock = r[order[0]];
    let mut lmax = None::<Rational>;
    for &i in order {
        let earliest = clock.max(r[i]);
        let start = timeline.earliest_start(earliest, p[i]);
        clock = start + p[i];
        let late = clock + q[i];
        lmax = Some(match lmax {
            Some(l) if l >= late => l,
            _ => late,
        });
    }
    (lmax.expect("nonempty order"), clock)
}

/// `min r + sum p + min q` over the subset, a lower bound on the optimal
/// maximum lateness of the whole instance.
pub fn lower_bound_subset(instance: &Instance, subset: &[JobId]) -> Result<Rational> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let index = instance.index();
    let mut min_r = None::<Rational>;
    let mut min_q = None::<Rational>;
    let mut total = Rational::from_integer(0);
    for id in subset {
        let job = &instance.jobs()[*index.get(id).ok_or(Error::UnknownJob(*id))?];
        min_r = Some(min_r.map_or(job.r, |m| m.min(job.r)));
        min_q = Some(min_q.map_or(job.q, |m| m.min(job.q)));
        total += job.p;
    }
    Ok(min_r.unwrap() + total + min_q.unwrap())
}
