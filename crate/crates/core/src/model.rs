//! Jobs, instances, timelines and scenario data.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::time::{display, Rational};

/// Identifier of a job, unique within an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JobId(pub u32);

impl fmt::Display for JobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A job with processing time `p`, head (release time) `r` and tail
/// (delivery time) `q`. Its lateness when completed at `C` is `C + q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Job {
    pub id: JobId,
    pub p: Rational,
    pub r: Rational,
    pub q: Rational,
}

impl Job {
    pub fn new(id: u32, p: i64, r: i64, q: i64) -> Self {
        Job {
            id: JobId(id),
            p: Rational::from_integer(p),
            r: Rational::from_integer(r),
            q: Rational::from_integer(q),
        }
    }
}

/// An ordered list of jobs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    jobs: Vec<Job>,
}

impl Instance {
    /// Builds an instance after checking every job invariant.
    pub fn new(jobs: Vec<Job>) -> Result<Self> {
        let instance = Instance { jobs };
        instance.validate()?;
        Ok(instance)
    }

    /// Builds an instance from `(p, r, q)` triples with ids `1..=n`.
    pub fn from_triples(triples: &[(i64, i64, i64)]) -> Result<Self> {
        let jobs = triples
            .iter()
            .enumerate()
            .map(|(i, &(p, r, q))| Job::new(i as u32 + 1, p, r, q))
            .collect();
        Instance::new(jobs)
    }

    /// Sub-instances produced by the solvers may be empty and skip the
    /// checks; every job they contain comes from a validated instance.
    pub(crate) fn from_parts(jobs: Vec<Job>) -> Self {
        Instance { jobs }
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn ids(&self) -> Vec<JobId> {
        self.jobs.iter().map(|j| j.id).collect()
    }

    pub fn job(&self, id: JobId) -> Option<&Job> {
        self.jobs.iter().find(|j| j.id == id)
    }

    /// Total processing time `P`.
    pub fn total_p(&self) -> Rational {
        self.jobs.iter().map(|j| j.p).sum()
    }

    /// Total processing time of the given subset.
    pub fn p_of(&self, subset: &[JobId]) -> Result<Rational> {
        let index = self.index();
        subset
            .iter()
            .map(|id| {
                index
                    .get(id)
                    .map(|&i| self.jobs[i].p)
                    .ok_or(Error::UnknownJob(*id))
            })
            .sum()
    }

    pub(crate) fn index(&self) -> HashMap<JobId, usize> {
        self.jobs
            .iter()
            .enumerate()
            .map(|(i, j)| (j.id, i))
            .collect()
    }

    /// Copy of the instance restricted to `keep`, preserving order.
    pub(crate) fn filtered(&self, mut keep: impl FnMut(&Job) -> bool) -> Instance {
        Instance::from_parts(self.jobs.iter().copied().filter(|j| keep(j)).collect())
    }

    pub(crate) fn map_jobs(&self, f: impl FnMut(&Job) -> Job) -> Instance {
        Instance::from_parts(self.jobs.iter().map(f).collect())
    }

    fn validate(&self) -> Result<()> {
        if self.jobs.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let mut seen = HashSet::with_capacity(self.jobs.len());
        for job in &self.jobs {
            if !seen.insert(job.id) {
                return Err(Error::DuplicateId(job.id));
            }
            if !job.p.is_positive() {
                return Err(Error::NonPositiveProcessing(job.id));
            }
            if job.r.is_negative() || job.q.is_negative() {
                return Err(Error::NegativeTime(job.id));
            }
        }
        Ok(())
    }
}

/// Open interval `]t1, t2[` during which the machine or the operator is
/// unavailable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub t1: Rational,
    pub t2: Rational,
}

impl Window {
    pub fn new(t1: Rational, t2: Rational) -> Result<Self> {
        let window = Window { t1, t2 };
        window.validate()?;
        Ok(window)
    }

    pub fn from_ints(t1: i64, t2: i64) -> Result<Self> {
        Window::new(Rational::from_integer(t1), Rational::from_integer(t2))
    }

    fn validate(&self) -> Result<()> {
        if self.t1.is_negative() || self.t1 > self.t2 {
            return Err(Error::BadWindow {
                t1: display(self.t1),
                t2: display(self.t2),
            });
        }
        Ok(())
    }

    /// `true` when `t` lies strictly inside the window.
    #[inline]
    pub fn contains(&self, t: Rational) -> bool {
        self.t1 < t && t < self.t2
    }

    /// `true` when the closed execution interval `[start, end]` meets the
    /// open window.
    #[inline]
    pub fn intersects(&self, start: Rational, end: Rational) -> bool {
        self.t1 < self.t2 && start < self.t2 && end > self.t1
    }

    pub fn is_empty(&self) -> bool {
        self.t1 == self.t2
    }

    pub fn length(&self) -> Rational {
        self.t2 - self.t1
    }
}

/// What the timeline forbids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timeline {
    Unrestricted,
    /// Machine non-availability: no processing may meet the window.
    Machine(Window),
    /// Operator non-availability: no job may start or complete inside the
    /// window, but a job may span it.
    Operator(Window),
}

impl Timeline {
    pub fn window(&self) -> Option<Window> {
        match *self {
            Timeline::Unrestricted => None,
            Timeline::Machine(w) | Timeline::Operator(w) => Some(w),
        }
    }

    /// Earliest feasible start for a job of length `p` that cannot start
    /// before `earliest`.
    #[inline]
    pub fn earliest_start(&self, earliest: Rational, p: Rational) -> Rational {
        match *self {
            Timeline::Unrestricted => earliest,
            Timeline::Machine(w) => {
                if w.intersects(earliest, earliest + p) {
                    w.t2
                } else {
                    earliest
                }
            }
            Timeline::Operator(w) => {
                if !w.contains(earliest) && !w.contains(earliest + p) {
                    earliest
                } else {
                    let spanning = w.t2 - p;
                    if spanning >= earliest && spanning <= w.t1 {
                        spanning
                    } else {
                        w.t2
                    }
                }
            }
        }
    }

    /// Whether a job occupying `[start, start + p]` respects the timeline.
    pub fn admits(&self, start: Rational, p: Rational) -> bool {
        match *self {
            Timeline::Unrestricted => true,
            Timeline::Machine(w) => !w.intersects(start, start + p),
            Timeline::Operator(w) => !w.contains(start) && !w.contains(start + p),
        }
    }
}

/// Timeline plus an optional common deadline on every completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub timeline: Timeline,
    pub deadline: Option<Rational>,
}

impl ScenarioSpec {
    pub fn unrestricted() -> Self {
        ScenarioSpec {
            timeline: Timeline::Unrestricted,
            deadline: None,
        }
    }
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec::unrestricted()
    }
}

/// Checks job invariants, id uniqueness, the window ordering and the
/// deadline sign.
pub fn validate_instance(instance: &Instance, spec: &ScenarioSpec) -> Result<()> {
    instance.validate()?;
    if let Some(w) = spec.timeline.window() {
        w.validate()?;
    }
    if let Some(d) = spec.deadline {
        if d < Rational::zero() {
            return Err(Error::NegativeDeadline);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::int;

    #[test]
    fn single_job_is_valid() {
        let inst = Instance::from_triples(&[(5, 3, 2)]).unwrap();
        assert!(validate_instance(&inst, &ScenarioSpec::unrestricted()).is_ok());
    }

    #[test]
    fn duplicate_id_rejected() {
        let jobs = vec![Job::new(1, 2, 0, 0), Job::new(1, 3, 0, 0)];
        assert_eq!(Instance::new(jobs), Err(Error::DuplicateId(JobId(1))));
    }

    #[test]
    fn bad_inputs_rejected() {
        assert_eq!(Instance::new(vec![]), Err(Error::EmptyInstance));
        assert_eq!(
            Instance::new(vec![Job::new(4, 0, 0, 0)]),
            Err(Error::NonPositiveProcessing(JobId(4)))
        );
        assert_eq!(
            Instance::new(vec![Job::new(2, 1, -1, 0)]),
            Err(Error::NegativeTime(JobId(2)))
        );
        assert_eq!(
            Instance::new(vec![Job::new(2, 1, 0, -3)]),
            Err(Error::NegativeTime(JobId(2)))
        );
    }

    #[test]
    fn reversed_window_rejected() {
        assert!(matches!(
            Window::from_ints(8, 5),
            Err(Error::BadWindow { .. })
        ));
        let inst = Instance::from_triples(&[(5, 3, 2)]).unwrap();
        let spec = ScenarioSpec {
            timeline: Timeline::Machine(Window {
                t1: int(8),
                t2: int(5),
            }),
            deadline: None,
        };
        assert!(matches!(
            validate_instance(&inst, &spec),
            Err(Error::BadWindow { .. })
        ));
        let spec = ScenarioSpec {
            timeline: Timeline::Unrestricted,
            deadline: Some(int(-1)),
        };
        assert_eq!(
            validate_instance(&inst, &spec),
            Err(Error::NegativeDeadline)
        );
    }

    #[test]
    fn totals() {
        let inst = Instance::from_triples(&[(2, 0, 5), (3, 1, 7), (2, 2, 1)]).unwrap();
        assert_eq!(inst.total_p(), int(7));
        assert_eq!(inst.p_of(&[JobId(1), JobId(3)]).unwrap(), int(4));
        assert_eq!(inst.p_of(&[JobId(9)]), Err(Error::UnknownJob(JobId(9))));
    }

    #[test]
    fn window_boundaries_are_open() {
        let w = Window::from_ints(5, 8).unwrap();
        let mna = Timeline::Machine(w);
        assert!(mna.admits(int(2), int(3)));
        assert!(mna.admits(int(8), int(3)));
        assert!(!mna.admits(int(3), int(3)));
        let ona = Timeline::Operator(w);
        assert!(ona.admits(int(5), int(3)));
        assert!(ona.admits(int(4), int(4)));
        assert!(!ona.admits(int(4), int(2)));
        assert!(!ona.admits(int(6), int(3)));
        let empty = Timeline::Machine(Window::from_ints(5, 5).unwrap());
        assert!(empty.admits(int(3), int(4)));
    }
}
