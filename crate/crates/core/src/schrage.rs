//! Schrage's rule (extended Jackson rule) and the critical-path analysis of
//! its schedule.
//!
//! Whenever the machine becomes free, Schrage's rule starts the released job
//! with the largest tail. The resulting schedule minimizes the makespan and
//! its maximum lateness is attained by a *critical job* `c` closing an
//! idle-free *critical block* that starts with a job `a`. If some job of the
//! block before `c` has a smaller tail than `c`, the latest such job is the
//! *interference job* `b`, and the schedule is off the optimum by less than
//! `p_b`. Without an interference job the schedule is optimal.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::{Instance, JobId, Timeline};
use crate::schedule::{evaluate_positions, Schedule};
use crate::time::Rational;

/// Runs Schrage's rule on an unrestricted timeline. Ties between equal
/// tails go to the smallest id.
pub fn schrage(instance: &Instance) -> Schedule {
    let jobs = instance.jobs();
    let p: Vec<_> = jobs.iter().map(|j| j.p).collect();
    let r: Vec<_> = jobs.iter().map(|j| j.r).collect();
    let q: Vec<_> = jobs.iter().map(|j| j.q).collect();
    let ids: Vec<_> = jobs.iter().map(|j| j.id).collect();
    let order = schrage_order(&p, &r, &q, &ids);
    evaluate_positions(instance, &order, Timeline::Unrestricted)
}

/// Schrage's rule on column data, returning job positions in run order.
pub(crate) fn schrage_order(
    p: &[Rational],
    r: &[Rational],
    q: &[Rational],
    ids: &[JobId],
) -> Vec<usize> {
    let n = p.len();
    let mut by_release: Vec<usize> = (0..n).collect();
    by_release.sort_by(|&a, &b| r[a].cmp(&r[b]).then(ids[a].cmp(&ids[b])));
    let mut ready: BinaryHeap<(Rational, Reverse<JobId>, usize)> = BinaryHeap::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    let mut next = 0;
    let mut free = None::<Rational>;
    while order.len() < n {
        let t = match (free, ready.is_empty()) {
            (Some(f), false) => f,
            (Some(f), true) => f.max(r[by_release[next]]),
            (None, _) => r[by_release[next]],
        };
        while next < n && r[by_release[next]] <= t {
            let i = by_release[next];
            ready.push((q[i], Reverse(ids[i]), i));
            next += 1;
        }
        let (_, _, i) = ready
            .pop()
            .expect("some job is released at the decision time");
        free = Some(t.max(r[i]) + p[i]);
        order.push(i);
    }
    order
}

/// Critical block of a Schrage schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalAnalysis {
    /// Jobs `a, ..., c` in schedule order.
    pub block: Vec<JobId>,
    pub first: JobId,
    pub critical: JobId,
    /// Interference job `b` and its position inside `block`.
    pub interference: Option<Interference>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interference {
    pub job: JobId,
    pub position: usize,
    pub p: Rational,
    /// Jobs of the block processed after `b`, up to and including `c`.
    pub after: Vec<JobId>,
}

/// Finds the critical job (latest completion among the jobs attaining the
/// maximum lateness), the first job of its idle-free block, and the latest
/// job of the block before `c` whose tail is smaller than `q_c`.
///
/// `schedule` must be a schedule of `instance`, normally [`schrage`]'s.
pub fn critical_analysis(schedule: &Schedule, instance: &Instance) -> CriticalAnalysis {
    let entries = schedule.entries();
    let tail = |id: JobId| {
        instance
            .job(id)
            .expect("schedule job belongs to instance")
            .q
    };

    let mut c = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.completion + tail(e.id) == schedule.lmax() && e.completion >= entries[c].completion {
            c = i;
        }
    }
    let mut a = c;
    while a > 0 && entries[a - 1].completion == entries[a].start {
        a -= 1;
    }
    let block: Vec<JobId> = entries[a..=c].iter().map(|e| e.id).collect();
    let q_c = tail(entries[c].id);
    let interference = (a..c).rev().find(|&i| tail(entries[i].id) < q_c).map(|i| {
        let id = entries[i].id;
        Interference {
            job: id,
            position: i - a,
            p: instance.job(id).unwrap().p,
            after: entries[i + 1..=c].iter().map(|e| e.id).collect(),
        }
    });
    CriticalAnalysis {
        block,
        first: entries[a].id,
        critical: entries[c].id,
        interference,
    }
}

/// `Some(p_b)` when an interference job exists: Schrage's maximum lateness
/// then exceeds the optimum by strictly less than `p_b`. `None` certifies
/// that the schedule is optimal.
pub fn absolute_error_bound(analysis: &CriticalAnalysis) -> Option<Rational> {
    analysis.interference.as_ref().map(|b| b.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::int;

    fn example() -> Instance {
        Instance::from_triples(&[(2, 0, 5), (3, 1, 7), (2, 2, 1)]).unwrap()
    }

    #[test]
    fn worked_example() {
        let inst = example();
        let s = schrage(&inst);
        assert_eq!(s.sequence(), vec![JobId(1), JobId(2), JobId(3)]);
        let starts: Vec<_> = s.entries().iter().map(|e| e.start).collect();
        assert_eq!(starts, vec![int(0), int(2), int(5)]);
        assert_eq!(s.lmax(), int(12));
        assert_eq!(s.cmax(), int(7));

        let a = critical_analysis(&s, &inst);
        assert_eq!(a.critical, JobId(2));
        assert_eq!(a.first, JobId(1));
        assert_eq!(a.block, vec![JobId(1), JobId(2)]);
        let b = a.interference.as_ref().unwrap();
        assert_eq!(b.job, JobId(1));
        assert_eq!(b.position, 0);
        assert_eq!(b.after, vec![JobId(2)]);
        assert_eq!(absolute_error_bound(&a), Some(int(2)));
    }

    #[test]
    fn single_job() {
        let inst = Instance::from_triples(&[(5, 3, 2)]).unwrap();
        let s = schrage(&inst);
        assert_eq!(s.lmax(), int(10));
        let a = critical_analysis(&s, &inst);
        assert_eq!(a.first, a.critical);
        assert_eq!(a.interference, None);
        assert_eq!(absolute_error_bound(&a), None);
    }

    #[test]
    fn larger_tail_goes_first() {
        let inst = Instance::from_triples(&[(1, 0, 0), (1, 0, 9)]).unwrap();
        let s = schrage(&inst);
        assert_eq!(s.sequence(), vec![JobId(2), JobId(1)]);
        assert_eq!(s.lmax(), int(10));
        let a = critical_analysis(&s, &inst);
        assert_eq!(a.critical, JobId(2));
        assert_eq!(a.block, vec![JobId(2)]);
        assert!(a.interference.is_none());
    }

    #[test]
    fn equal_tails_break_by_id() {
        let inst = Instance::new(vec![
            crate::model::Job::new(7, 1, 0, 3),
            crate::model::Job::new(2, 1, 0, 3),
        ])
        .unwrap();
        assert_eq!(schrage(&inst).sequence(), vec![JobId(2), JobId(7)]);
    }

    #[test]
    fn idle_time_splits_blocks() {
        // J2 released after J1 completes: block of c starts at c.
        let inst = Instance::from_triples(&[(2, 0, 0), (1, 5, 4)]).unwrap();
        let s = schrage(&inst);
        let a = critical_analysis(&s, &inst);
        assert_eq!(a.critical, JobId(2));
        assert_eq!(a.block, vec![JobId(2)]);
    }

    #[test]
    fn unit_interference_means_optimal() {
        // J1 (p=1) blocks J2; bound p_b = 1 forces an integral gap of 0.
        let inst = Instance::from_triples(&[(1, 0, 0), (2, 1, 5)]).unwrap();
        let s = schrage(&inst);
        let a = critical_analysis(&s, &inst);
        assert_eq!(absolute_error_bound(&a), Some(int(1)));
        assert_eq!(s.lmax(), int(8));
    }
}
