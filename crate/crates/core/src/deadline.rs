//! Approximation schemes built on Schrage's rule over modified instances:
//! lateness under a common deadline, its unconstrained special case, and the
//! (lateness, makespan) Pareto frontier.
//!
//! A job is *large* when `p_j >= eps * L_Sc / 2`, where `L_Sc` is the maximum
//! lateness of Schrage's schedule on the original instance; there are at most
//! `2 / eps` of them. Every large job `i` gets each combination of a head
//! from `R(i)` (distinct heads `>= r_i`) and a tail from `Q(i)` (distinct
//! tails `>= q_i`). Schrage's rule runs on every such modified instance and
//! each resulting sequence is re-timed on the original instance.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::model::{Instance, Job, JobId, Timeline};
use crate::pareto::{ParetoEntry, ParetoSet};
use crate::schedule::{evaluate_positions, objectives, Schedule};
use crate::schrage::{schrage, schrage_order};
use crate::time::{int, Rational};

/// Upper limit on the number of guesses a single enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessBudget(pub u64);

impl GuessBudget {
    pub const DEFAULT: GuessBudget = GuessBudget(10_000_000);

    pub(crate) fn admit(self, needed: u128) -> Result<u64> {
        if needed > self.0 as u128 {
            Err(Error::GuessBudgetExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(needed as u64)
        }
    }
}

impl Default for GuessBudget {
    fn default() -> Self {
        GuessBudget::DEFAULT
    }
}

/// A schedule together with the number of guesses examined to find it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub schedule: Schedule,
    pub guesses: u64,
}

/// Large-job classification for a given accuracy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtasConfig {
    pub epsilon: Rational,
    pub schrage_lmax: Rational,
    pub large_threshold: Rational,
    /// Large jobs in instance order.
    pub large: Vec<JobId>,
}

impl PtasConfig {
    pub fn k(&self) -> usize {
        self.large.len()
    }
}

pub(crate) fn check_epsilon(epsilon: Rational) -> Result<()> {
    if epsilon.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon)
    }
}

/// Classifies the jobs with `p_j >= eps * lmax(schrage) / 2` as large.
pub fn large_jobs(instance: &Instance, epsilon: Rational) -> Result<PtasConfig> {
    check_epsilon(epsilon)?;
    Ok(config_with(instance, epsilon, schrage(instance).lmax()))
}

fn config_with(instance: &Instance, epsilon: Rational, schrage_lmax: Rational) -> PtasConfig {
    let large_threshold = epsilon * schrage_lmax / int(2);
    let large = instance
        .jobs()
        .iter()
        .filter(|j| j.p >= large_threshold)
        .map(|j| j.id)
        .collect();
    PtasConfig {
        epsilon,
        schrage_lmax,
        large_threshold,
        large,
    }
}

/// Head and tail choices of one large job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guess {
    pub job: JobId,
    pub r: Rational,
    pub q: Rational,
}

/// An instance whose large jobs carry guessed heads and tails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedInstance {
    pub guess: Vec<Guess>,
    pub instance: Instance,
}

/// Candidate heads and tails of every large job.
struct GuessSpace {
    positions: Vec<usize>,
    heads: Vec<Vec<Rational>>,
    tails: Vec<Vec<Rational>>,
}

impl GuessSpace {
    fn new(instance: &Instance, config: &PtasConfig) -> Self {
        let mut all_r: Vec<Rational> = instance.jobs().iter().map(|j| j.r).collect();
        let mut all_q: Vec<Rational> = instance.jobs().iter().map(|j| j.q).collect();
        all_r.sort();
        all_r.dedup();
        all_q.sort();
        all_q.dedup();
        let index = instance.index();
        let mut space = GuessSpace {
            positions: vec![],
            heads: vec![],
            tails: vec![],
        };
        for id in &config.large {
            let i = index[id];
            let job = &instance.jobs()[i];
            space.positions.push(i);
            space
                .heads
                .push(all_r.iter().copied().filter(|&r| r >= job.r).collect());
            space
                .tails
                .push(all_q.iter().copied().filter(|&q| q >= job.q).collect());
        }
        space
    }

    fn count(&self) -> u128 {
        self.heads
            .iter()
            .zip(&self.tails)
            .fold(1u128, |acc, (h, t)| {
                acc.saturating_mul(h.len() as u128 * t.len() as u128)
            })
    }

    /// Visits every guess in lexicographic order of
    /// `(r_1, q_1, r_2, q_2, ...)`, writing it into `r` and `q`.
    fn for_each(
        &self,
        r: &mut [Rational],
        q: &mut [Rational],
        mut visit: impl FnMut(&[Rational], &[Rational]),
    ) {
        let k = self.positions.len();
        let mut digits = vec![0usize; 2 * k];
        for (slot, &i) in self.positions.iter().enumerate() {
            r[i] = self.heads[slot][0];
            q[i] = self.tails[slot][0];
        }
        loop {
            visit(r, q);
            // advance the odometer, last digit fastest
            let mut d = 2 * k;
            loop {
                if d == 0 {
                    return;
                }
                d -= 1;
                let slot = d / 2;
                let i = self.positions[slot];
                let values = if d.is_multiple_of(2) {
                    &self.heads[slot]
                } else {
                    &self.tails[slot]
                };
                digits[d] += 1;
                if digits[d] < values.len() {
                    if d.is_multiple_of(2) {
                        r[i] = values[digits[d]];
                    } else {
                        q[i] = values[digits[d]];
                    }
                    break;
                }
                digits[d] = 0;
                if d.is_multiple_of(2) {
                    r[i] = values[0];
                } else {
                    q[i] = values[0];
                }
            }
        }
    }
}

struct Columns {
    ids: Vec<JobId>,
    p: Vec<Rational>,
    r: Vec<Rational>,
    q: Vec<Rational>,
}

impl Columns {
    fn of(instance: &Instance) -> Self {
        let jobs = instance.jobs();
        Columns {
            ids: jobs.iter().map(|j| j.id).collect(),
            p: jobs.iter().map(|j| j.p).collect(),
            r: jobs.iter().map(|j| j.r).collect(),
            q: jobs.iter().map(|j| j.q).collect(),
        }
    }
}

/// Lists every distinct modified instance in lexicographic guess order. With
/// no large job the single element is the unmodified instance.
pub fn enumerate_modified_instances(
    instance: &Instance,
    config: &PtasConfig,
    budget: GuessBudget,
) -> Result<Vec<ModifiedInstance>> {
    let space = GuessSpace::new(instance, config);
    budget.admit(space.count())?;
    let cols = Columns::of(instance);
    let (mut r, mut q) = (cols.r.clone(), cols.q.clone());
    let mut out = Vec::new();
    space.for_each(&mut r, &mut q, |r, q| {
        let guess = space
            .positions
            .iter()
            .map(|&i| Guess {
                job: cols.ids[i],
                r: r[i],
                q: q[i],
            })
            .collect();
        let jobs = instance
            .jobs()
            .iter()
            .enumerate()
            .map(|(i, j)| Job {
                r: r[i],
                q: q[i],
                ..*j
            })
            .collect();
        out.push(ModifiedInstance {
            guess,
            instance: Instance::from_parts(jobs),
        });
    });
    Ok(out)
}

/// Runs Schrage's rule on every modified instance and hands each sequence,
/// with its original-instance `(lmax, cmax)`, to `visit`. Returns the number
/// of modified instances.
fn scan(
    instance: &Instance,
    epsilon: Rational,
    schrage_lmax: Rational,
    budget: GuessBudget,
    mut visit: impl FnMut(&[usize], Rational, Rational),
) -> Result<u64> {
    let config = config_with(instance, epsilon, schrage_lmax);
    let space = GuessSpace::new(instance, &config);
    let count = budget.admit(space.count())?;
    let cols = Columns::of(instance);
    let (mut r, mut q) = (cols.r.clone(), cols.q.clone());
    space.for_each(&mut r, &mut q, |r_mod, q_mod| {
        let order = schrage_order(&cols.p, r_mod, q_mod, &cols.ids);
        let (lmax, cmax) = objectives(&cols.p, &cols.r, &cols.q, &order, Timeline::Unrestricted);
        visit(&order, lmax, cmax);
    });
    Ok(count)
}

/// Best sequence with makespan at most `deadline` (if any) over all modified
/// instances; `Ok(None)` when Schrage's schedule, which has the minimum
/// makespan, already misses the deadline.
fn best_sequence(
    instance: &Instance,
    deadline: Option<Rational>,
    epsilon: Rational,
    budget: GuessBudget,
) -> Result<Option<Solution>> {
    check_epsilon(epsilon)?;
    let base = schrage(instance);
    if deadline.is_some_and(|d| base.cmax() > d) {
        return Ok(None);
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let guesses = scan(
        instance,
        epsilon,
        base.lmax(),
        budget,
        |order, lmax, cmax| {
            if deadline.is_some_and(|d| cmax > d) {
                return;
            }
            if best.as_ref().is_none_or(|(l, _)| lmax < *l) {
                best = Some((lmax, order.to_vec()));
            }
        },
    )?;
    let (_, order) = best.expect("the unmodified instance is among the guesses");
    Ok(Some(Solution {
        schedule: evaluate_positions(instance, &order, Timeline::Unrestricted),
        guesses,
    }))
}

/// Maximum lateness subject to `cmax <= deadline`. Returns `Ok(None)` when no
/// schedule meets the deadline; otherwise the lateness is within a factor
/// `1 + eps` of the best deadline-feasible lateness.
pub fn ptas1(
    instance: &Instance,
    deadline: Rational,
    epsilon: Rational,
    budget: GuessBudget,
) -> Result<Option<Solution>> {
    best_sequence(instance, Some(deadline), epsilon, budget)
}

/// [`ptas1`] without a deadline.
pub fn ptas0(instance: &Instance, epsilon: Rational, budget: GuessBudget) -> Result<Solution> {
    Ok(best_sequence(instance, None, epsilon, budget)?.expect("no deadline, always feasible"))
}

/// Approximate Pareto frontier: for every efficient point `(c*, l*)` the
/// returned set has an entry with `cmax <= c*` and `lmax <= (1 + eps) l*`.
pub fn ptas2(
    instance: &Instance,
    epsilon: Rational,
    budget: GuessBudget,
) -> Result<(ParetoSet, u64)> {
    check_epsilon(epsilon)?;
    let base = schrage(instance);
    let ids = instance.ids();
    let mut candidates = Vec::new();
    let guesses = scan(
        instance,
        epsilon,
        base.lmax(),
        budget,
        |order, lmax, cmax| {
            candidates.push(ParetoEntry {
                sequence: order.iter().map(|&i| ids[i]).collect(),
                lmax,
                cmax,
            });
        },
    )?;
    Ok((ParetoSet::from_candidates(candidates), guesses))
}
