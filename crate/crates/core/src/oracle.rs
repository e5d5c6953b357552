//! Exact reference solvers for small instances.
//!
//! For a fixed order and timeline the earliest-start placement of
//! [`evaluate_sequence`](crate::schedule::evaluate_sequence) is optimal, so
//! enumerating orders is exhaustive. Orders are visited in lexicographic id
//! order and the first optimal one is the witness.

use crate::error::{Error, Result};
use crate::model::{Instance, JobId, Timeline};
use crate::pareto::{ParetoEntry, ParetoSet};
use crate::schedule::{evaluate_positions, objectives, Schedule};
use crate::time::Rational;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 9;
pub const DEFAULT_BRANCH_BOUND_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// `None` when a deadline excludes every order.
    pub optimum: Option<Optimum>,
    /// Complete orders evaluated.
    pub explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub lmax: Rational,
    pub witness: Schedule,
}

impl OracleResult {
    pub fn lmax(&self) -> Option<Rational> {
        self.optimum.as_ref().map(|o| o.lmax)
    }
}

fn check_cap(instance: &Instance, cap: usize) -> Result<()> {
    if instance.len() > cap {
        Err(Error::InstanceTooLarge {
            n: instance.len(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Positions of the jobs sorted by id; permutations of this vector in
/// lexicographic order are id-lexicographic.
fn sorted_positions(instance: &Instance) -> Vec<usize> {
    let mut pos: Vec<usize> = (0..instance.len()).collect();
    pos.sort_by_key(|&i| instance.jobs()[i].id);
    pos
}

/// Rank-based next permutation; `order` holds ranks into `base`.
fn next_permutation(order: &mut [usize]) -> bool {
    let n = order.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && order[i - 1] >= order[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while order[j] <= order[i - 1] {
        j -= 1;
    }
    order.swap(i - 1, j);
    order[i..].reverse();
    true
}

fn for_each_order(instance: &Instance, mut visit: impl FnMut(&[usize])) -> u64 {
    let base = sorted_positions(instance);
    let mut ranks: Vec<usize> = (0..base.len()).collect();
    let mut order = base.clone();
    let mut count = 0;
    loop {
        for (slot, &rank) in order.iter_mut().zip(&ranks) {
            *slot = base[rank];
        }
        visit(&order);
        count += 1;
        if !next_permutation(&mut ranks) {
            return count;
        }
    }
}

fn columns(instance: &Instance) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let jobs = instance.jobs();
    (
        jobs.iter().map(|j| j.p).collect(),
        jobs.iter().map(|j| j.r).collect(),
        jobs.iter().map(|j| j.q).collect(),
    )
}

/// Minimum maximum lateness over all orders on `timeline`, optionally
/// restricted to makespan `<= deadline`.
pub fn exact_lmax(
    instance: &Instance,
    timeline: Timeline,
    deadline: Option<Rational>,
    cap: usize,
) -> Result<OracleResult> {
    check_cap(instance, cap)?;
    let (p, r, q) = columns(instance);
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let explored = for_each_order(instance, |order| {
        let (lmax, cmax) = objectives(&p, &r, &q, order, timeline);
        if deadline.is_some_and(|d| cmax > d) {
            return;
        }
        if best.as_ref().is_none_or(|(l, _)| lmax < *l) {
            best = Some((lmax, order.to_vec()));
        }
    });
    Ok(OracleResult {
        optimum: best.map(|(lmax, order)| Optimum {
            lmax,
            witness: evaluate_positions(instance, &order, timeline),
        }),
        explored,
    })
}

/// Minimum makespan over all orders on an unrestricted timeline.
pub fn exact_cmax(instance: &Instance, cap: usize) -> Result<Rational> {
    check_cap(instance, cap)?;
    let (p, r, q) = columns(instance);
    let mut best = None::<Rational>;
    for_each_order(instance, |order| {
        let (_, cmax) = objectives(&p, &r, &q, order, Timeline::Unrestricted);
        best = Some(best.map_or(cmax, |b| b.min(cmax)));
    });
    Ok(best.expect("at least one order"))
}

/// Exact (cmax, lmax) Pareto frontier on an unrestricted timeline, one
/// witness sequence per point.
pub fn exact_pareto(instance: &Instance, cap: usize) -> Result<ParetoSet> {
    check_cap(instance, cap)?;
    let (p, r, q) = columns(instance);
    let ids = instance.ids();
    let mut candidates = Vec::new();
    for_each_order(instance, |order| {
        let (lmax, cmax) = objectives(&p, &r, &q, order, Timeline::Unrestricted);
        candidates.push(ParetoEntry {
            sequence: order.iter().map(|&i| ids[i]).collect(),
            lmax,
            cmax,
        });
    });
    Ok(ParetoSet::from_candidates(candidates))
}

struct BranchBound<'a> {
    p: &'a [Rational],
    r: &'a [Rational],
    q: &'a [Rational],
    base: Vec<usize>,
    timeline: Timeline,
    deadline: Option<Rational>,
    used: Vec<bool>,
    prefix: Vec<usize>,
    best: Option<(Rational, Vec<usize>)>,
    explored: u64,
}

impl BranchBound<'_> {
    /// `clock` is the completion of the prefix, `late` its lateness.
    fn descend(&mut self, clock: Option<Rational>, late: Option<Rational>, remaining_p: Rational) {
        let n = self.base.len();
        if self.prefix.len() == n {
            self.explored += 1;
            let late = late.expect("nonempty");
            if self.best.as_ref().is_none_or(|(l, _)| late < *l) {
                self.best = Some((late, self.prefix.clone()));
            }
            return;
        }
        if let (Some(d), Some(c)) = (self.deadline, clock) {
            if c + remaining_p > d {
                return;
            }
        }
        if let Some((best, _)) = &self.best {
            let bound = self.bound(clock, remaining_p);
            let bound = late.map_or(bound, |l| l.max(bound));
            if bound >= *best {
                return;
            }
        }
        for slot in 0..n {
            let i = self.base[slot];
            if self.used[i] {
                continue;
            }
            let earliest = clock.map_or(self.r[i], |c| c.max(self.r[i]));
            let start = self.timeline.earliest_start(earliest, self.p[i]);
            let done = start + self.p[i];
            let l = late.map_or(done + self.q[i], |l| l.max(done + self.q[i]));
            self.used[i] = true;
            self.prefix.push(i);
            self.descend(Some(done), Some(l), remaining_p - self.p[i]);
            self.prefix.pop();
            self.used[i] = false;
        }
    }

    /// Lower bound on the lateness of the unscheduled jobs: the subset bound
    /// `min r + sum p + min q` with heads lifted to the current clock, and
    /// each job on its own.
    fn bound(&self, clock: Option<Rational>, remaining_p: Rational) -> Rational {
        let mut min_r = None::<Rational>;
        let mut min_q = None::<Rational>;
        let mut single = None::<Rational>;
        for (i, &used) in self.used.iter().enumerate() {
            if used {
                continue;
            }
            let head = clock.map_or(self.r[i], |c| c.max(self.r[i]));
            min_r = Some(min_r.map_or(head, |m| m.min(head)));
            min_q = Some(min_q.map_or(self.q[i], |m| m.min(self.q[i])));
            let own = head + self.p[i] + self.q[i];
            single = Some(single.map_or(own, |s| s.max(own)));
        }
        let subset = min_r.unwrap() + remaining_p + min_q.unwrap();
        subset.max(single.unwrap())
    }
}

/// Depth-first search over orders pruned by the subset lower bound. Returns
/// the same optimum and witness as [`exact_lmax`].
pub fn exact_lmax_branch_bound(
    instance: &Instance,
    timeline: Timeline,
    deadline: Option<Rational>,
    cap: usize,
) -> Result<OracleResult> {
    check_cap(instance, cap)?;
    let (p, r, q) = columns(instance);
    let mut search = BranchBound {
        p: &p,
        r: &r,
        q: &q,
        base: sorted_positions(instance),
        timeline,
        deadline,
        used: vec![false; instance.len()],
        prefix: Vec::with_capacity(instance.len()),
        best: None,
        explored: 0,
    };
    search.descend(None, None, instance.total_p());
    let explored = search.explored;
    Ok(OracleResult {
        optimum: search.best.map(|(lmax, order)| Optimum {
            lmax,
            witness: evaluate_positions(instance, &order, timeline),
        }),
        explored,
    })
}

/// Whether some job of `schedule` starts no later than `t1` and completes no
/// earlier than `t2`, i.e. spans a nonempty window.
pub fn straddles(schedule: &Schedule, t1: Rational, t2: Rational) -> Option<JobId> {
    if t1 >= t2 {
        return None;
    }
    schedule
        .entries()
        .iter()
        .find(|e| e.start <= t1 && e.completion >= t2)
        .map(|e| e.id)
}
