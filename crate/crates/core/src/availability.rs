//! Approximation schemes for a single unavailability window `]T1, T2[`.
//!
//! Machine non-availability: after lifting heads of jobs that cannot finish
//! by `T1` to `T2`, every job either fits before the window (set `X`) or is
//! released after it (set `Y`). Tails are rounded up to multiples of
//! `q̄ / f` with `f = 1/eps`. Jobs of `X` longer than `delta = eps² P / 4` are
//! big; the remaining small jobs are grouped by rounded tail into families
//! sorted by head, and only head-ordered prefixes of each family whose
//! processing is at most `z * delta` are candidates for running before the
//! window. Every choice of big jobs and prefix sizes splits the instance into
//! a deadline-`T1` part and a part released at `T2`, each solved with the
//! deadline scheme.
//!
//! Operator non-availability additionally allows one job, the straddling
//! job, to span the window. Its start is guessed on a grid between
//! `T2 - p_s` and `T1`, and the remaining jobs then face a machine window
//! covering the straddling job.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::deadline::{ptas0, ptas1, GuessBudget, Solution};
use crate::error::{Error, Result};
use crate::model::{Instance, Job, JobId, Timeline, Window};
use crate::schedule::{evaluate_sequence, Schedule};
use crate::time::{ceil_int, display, frac, int, unit_fraction_denominator, Rational};

/// `f` with `eps = 1/f`.
pub fn unit_denominator(epsilon: Rational) -> Result<i64> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    unit_fraction_denominator(epsilon)
        .ok_or_else(|| Error::EpsilonNotUnitFraction(display(epsilon)))
}

/// Lifts to `T2` the head of every job that cannot complete by `T1`: heads
/// inside `[T1, T2)` and heads before `T1` with `r + p > T1`.
pub fn normalize_heads_mna(instance: &Instance, window: Window) -> Instance {
    instance.map_jobs(|j| {
        let inside = j.r >= window.t1 && j.r < window.t2;
        let overruns = j.r < window.t1 && j.r + j.p > window.t1;
        if inside || overruns {
            Job { r: window.t2, ..*j }
        } else {
            *j
        }
    })
}

/// Rounds every tail up to the next multiple of `q̄ / f`, and zero tails to
/// `q̄ / f`. Leaves the instance unchanged when all tails are zero.
pub fn round_tails(instance: &Instance, f: i64) -> Instance {
    let qbar = instance
        .jobs()
        .iter()
        .map(|j| j.q)
        .max()
        .unwrap_or_else(Rational::zero);
    if qbar.is_zero() {
        return instance.clone();
    }
    let step = qbar / int(f);
    instance.map_jobs(|j| {
        let k = ceil_int(j.q / step).max(1);
        Job {
            q: step * int(k),
            ..*j
        }
    })
}

/// Small jobs sharing one rounded tail, with their head-ordered prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// Family index `k`, the rounded tail being `k * q̄ / f`.
    pub k: i64,
    pub tail: Rational,
    /// Members sorted by `(r, id)`.
    pub jobs: Vec<JobId>,
    /// `ceil(p(S(k)) / delta)`.
    pub m: usize,
    /// `prefix_len[z]` is `e(z)` for `0 <= z <= m`.
    pub prefix_len: Vec<usize>,
}

impl Family {
    /// `S_{k,z}`.
    pub fn prefix(&self, z: usize) -> &[JobId] {
        &self.jobs[..self.prefix_len[z]]
    }
}

/// Partition of a normalized, tail-rounded instance used to guess which jobs
/// run before the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyStructure {
    pub f: i64,
    pub window: Window,
    pub qbar: Rational,
    /// Jobs with `r + p <= T1`.
    pub x: Vec<JobId>,
    /// Jobs with `r >= T2`.
    pub y: Vec<JobId>,
    pub delta: Rational,
    /// Jobs of `X` with `p > delta`.
    pub big: Vec<JobId>,
    pub families: Vec<Family>,
}

/// One split of `X`: big jobs `B1` and prefix sizes `z_k` go before the
/// window, the rest of `X` after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityGuess {
    pub big_before: Vec<JobId>,
    pub z: Vec<usize>,
    pub before: Vec<JobId>,
    pub after: Vec<JobId>,
}

impl FamilyStructure {
    /// `2^|B| * prod_k (m(k) + 1)`.
    pub fn guess_count(&self) -> u128 {
        let big = if self.big.len() >= 127 {
            u128::MAX
        } else {
            1u128 << self.big.len()
        };
        self.families
            .iter()
            .fold(big, |acc, fam| acc.saturating_mul(fam.m as u128 + 1))
    }

    /// All splits, big-job subsets outermost (bitmask order, bit `i` for
    /// `big[i]`), then prefix-size vectors in lexicographic order.
    pub fn guesses(&self) -> impl Iterator<Item = AvailabilityGuess> + '_ {
        let subsets = 1u64 << self.big.len();
        (0..subsets).flat_map(move |mask| {
            PrefixOdometer::new(self.families.iter().map(|f| f.m).collect())
                .map(move |z| self.guess(mask, z))
        })
    }

    fn guess(&self, mask: u64, z: Vec<usize>) -> AvailabilityGuess {
        let big_before: Vec<JobId> = self
            .big
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &id)| id)
            .collect();
        let mut before = big_before.clone();
        for (fam, &zk) in self.families.iter().zip(&z) {
            before.extend_from_slice(fam.prefix(zk));
        }
        before.sort();
        let after = self
            .x
            .iter()
            .copied()
            .filter(|id| before.binary_search(id).is_err())
            .collect();
        AvailabilityGuess {
            big_before,
            z,
            before,
            after,
        }
    }
}

/// Every vector `z` with `0 <= z[k] <= max[k]`, last position fastest.
struct PrefixOdometer {
    max: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl PrefixOdometer {
    fn new(max: Vec<usize>) -> Self {
        let next = Some(vec![0; max.len()]);
        PrefixOdometer { max, next }
    }
}

impl Iterator for PrefixOdometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut following = current.clone();
        for d in (0..following.len()).rev() {
            if following[d] < self.max[d] {
                following[d] += 1;
                self.next = Some(following);
                return Some(current);
            }
            following[d] = 0;
        }
        Some(current)
    }
}

/// Builds the X/Y split, big-job set and small-job families of an instance
/// that is already head-normalized for `window` and tail-rounded with
/// `f = 1/eps`.
pub fn build_structure(
    instance: &Instance,
    window: Window,
    epsilon: Rational,
) -> Result<FamilyStructure> {
    let f = unit_denominator(epsilon)?;
    let jobs = instance.jobs();
    let qbar = jobs
        .iter()
        .map(|j| j.q)
        .max()
        .unwrap_or_else(Rational::zero);
    let delta = epsilon * epsilon * instance.total_p() / int(4);
    let x: Vec<&Job> = jobs.iter().filter(|j| j.r + j.p <= window.t1).collect();
    let y = jobs
        .iter()
        .filter(|j| j.r >= window.t2)
        .map(|j| j.id)
        .collect();
    let big = x.iter().filter(|j| j.p > delta).map(|j| j.id).collect();

    let step = if qbar.is_zero() {
        None
    } else {
        Some(qbar / int(f))
    };
    let family_count = if step.is_some() { f } else { 1 };
    let mut members: Vec<Vec<&Job>> = vec![Vec::new(); family_count as usize];
    for job in x.iter().filter(|j| j.p <= delta) {
        let k = match step {
            Some(step) => (job.q / step).to_integer(),
            None => 1,
        };
        debug_assert!(
            (1..=family_count).contains(&k),
            "tails must be rounded first"
        );
        members[(k - 1) as usize].push(job);
    }

    let families = members
        .into_iter()
        .enumerate()
        .map(|(slot, mut fam)| {
            fam.sort_by(|a, b| a.r.cmp(&b.r).then(a.id.cmp(&b.id)));
            let k = slot as i64 + 1;
            let total: Rational = fam.iter().map(|j| j.p).sum();
            let m = ceil_int(total / delta) as usize;
            let mut prefix_len = Vec::with_capacity(m + 1);
            let mut len = 0;
            let mut sum = Rational::zero();
            for z in 0..=m {
                let cap = delta * int(z as i64);
                while len < fam.len() && sum + fam[len].p <= cap {
                    sum += fam[len].p;
                    len += 1;
                }
                prefix_len.push(len);
            }
            prefix_len[m] = fam.len();
            Family {
                k,
                tail: step.map_or(Rational::zero(), |s| s * int(k)),
                jobs: fam.iter().map(|j| j.id).collect(),
                m,
                prefix_len,
            }
        })
        .collect();

    Ok(FamilyStructure {
        f,
        window,
        qbar,
        x: x.iter().map(|j| j.id).collect(),
        y,
        delta,
        big,
        families,
    })
}

fn subset(instance: &Instance, ids: &[JobId]) -> Instance {
    instance.filtered(|j| ids.binary_search(&j.id).is_ok())
}

/// Machine non-availability on `]T1, T2[`, `eps = 1/f`. The lateness is at
/// most `1 + eps` times the optimum. The returned schedule lives on the
/// original instance with a machine-window timeline.
pub fn ptas3(
    instance: &Instance,
    window: Window,
    epsilon: Rational,
    budget: GuessBudget,
) -> Result<Solution> {
    let f = unit_denominator(epsilon)?;
    let timeline = Timeline::Machine(window);
    if window.is_empty() {
        // nothing is forbidden; lifting heads would not be a relaxation here
        let sol = ptas0(instance, epsilon, budget)?;
        let schedule = evaluate_sequence(instance, &sol.schedule.sequence(), timeline)?;
        return Ok(Solution {
            schedule,
            guesses: sol.guesses,
        });
    }

    let normalized = normalize_heads_mna(instance, window);
    let rounded = round_tails(&normalized, f);
    let structure = build_structure(&rounded, window, epsilon)?;
    let mut guesses = budget.admit(structure.guess_count())?;

    let before_eps = frac(3, 5) * epsilon;
    let after_eps = epsilon / int(3);
    let mut before_memo: HashMap<Vec<JobId>, Option<Vec<JobId>>> = HashMap::new();
    let mut after_memo: HashMap<Vec<JobId>, Vec<JobId>> = HashMap::new();
    let mut best: Option<Schedule> = None;

    for guess in structure.guesses() {
        let first = match before_memo.get(&guess.before) {
            Some(hit) => hit.clone(),
            None => {
                let seq = if guess.before.is_empty() {
                    Some(Vec::new())
                } else {
                    let part = subset(&rounded, &guess.before);
                    let sol = ptas1(&part, window.t1, before_eps, budget)?;
                    guesses += sol.as_ref().map_or(0, |s| s.guesses);
                    sol.map(|s| s.schedule.sequence())
                };
                before_memo.insert(guess.before.clone(), seq.clone());
                seq
            }
        };
        let Some(first) = first else { continue };

        let second = match after_memo.get(&guess.after) {
            Some(hit) => hit.clone(),
            None => {
                let lifted: Vec<JobId> = guess
                    .after
                    .iter()
                    .copied()
                    .chain(structure.y.iter().copied())
                    .collect();
                let mut key = lifted.clone();
                key.sort();
                let seq = if key.is_empty() {
                    Vec::new()
                } else {
                    let part = subset(&rounded, &key).map_jobs(|j| {
                        if guess.after.contains(&j.id) {
                            Job { r: window.t2, ..*j }
                        } else {
                            *j
                        }
                    });
                    let sol = ptas0(&part, after_eps, budget)?;
                    guesses += sol.guesses;
                    sol.schedule.sequence()
                };
                after_memo.insert(guess.after.clone(), seq.clone());
                seq
            }
        };

        let merged: Vec<JobId> = first.into_iter().chain(second).collect();
        let schedule = evaluate_sequence(instance, &merged, timeline)?;
        if best.as_ref().is_none_or(|b| schedule.lmax() < b.lmax()) {
            best = Some(schedule);
        }
    }

    let schedule =
        best.expect("empty before-set with everything after the window is always feasible");
    Ok(Solution { schedule, guesses })
}

/// Jobs that could span the window: `p_j >= T2 - T1` and `r_j <= T1`.
pub fn straddling_candidates(instance: &Instance, window: Window) -> Vec<JobId> {
    instance
        .jobs()
        .iter()
        .filter(|j| j.p >= window.length() && j.r <= window.t1)
        .map(|j| j.id)
        .collect()
}

/// Start-time grid of one straddling candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraddleGrid {
    pub job: JobId,
    pub p: Rational,
    /// `t_h = T2 - p + h (T1 - T2 + p) / steps` for `h = 0..=steps`, or the
    /// single point `T1` when `T2 - p = T1`.
    pub points: Vec<Rational>,
}

impl StraddleGrid {
    pub fn new(job: &Job, window: Window, steps: i64) -> Self {
        let lowest = window.t2 - job.p;
        let span = window.t1 - lowest;
        let points = if span.is_zero() {
            vec![window.t1]
        } else {
            (0..=steps)
                .map(|h| lowest + span * frac(h, steps))
                .collect()
        };
        StraddleGrid {
            job: job.id,
            p: job.p,
            points,
        }
    }

    /// Interval `]t, t + p[` the other jobs must avoid when the straddling
    /// job starts at `t`.
    pub fn shifted_window(&self, t: Rational) -> Window {
        Window {
            t1: t,
            t2: t + self.p,
        }
    }
}

/// Grids of all straddling candidates with `steps = ceil(1/eps)`.
pub fn straddling_enumeration(
    instance: &Instance,
    window: Window,
    epsilon: Rational,
) -> Result<Vec<StraddleGrid>> {
    let steps = unit_denominator(epsilon)?;
    Ok(straddling_candidates(instance, window)
        .into_iter()
        .map(|id| StraddleGrid::new(instance.job(id).unwrap(), window, steps))
        .collect())
}

/// Operator non-availability on `]T1, T2[`, `eps = 1/f`. Takes the best of
/// the machine-window schedule and, for every straddling candidate and grid
/// start, the machine-window schedule of the other jobs around it. The
/// returned schedule lives on the original instance with an operator-window
/// timeline.
pub fn ptas4(
    instance: &Instance,
    window: Window,
    epsilon: Rational,
    budget: GuessBudget,
) -> Result<Solution> {
    unit_denominator(epsilon)?;
    let timeline = Timeline::Operator(window);
    let base = ptas3(instance, window, epsilon, budget)?;
    let mut guesses = base.guesses;
    let mut best = evaluate_sequence(instance, &base.schedule.sequence(), timeline)?;
    if window.is_empty() {
        return Ok(Solution {
            schedule: best,
            guesses,
        });
    }

    for grid in straddling_enumeration(instance, window, epsilon)? {
        let job = *instance.job(grid.job).unwrap();
        let rest = instance.filtered(|j| j.id != job.id);
        for &t in &grid.points {
            if t < job.r {
                continue;
            }
            let mut starts: Vec<(JobId, Rational)> = vec![(job.id, t)];
            if !rest.is_empty() {
                let sol = ptas3(&rest, grid.shifted_window(t), epsilon, budget)?;
                guesses += sol.guesses;
                starts.extend(sol.schedule.entries().iter().map(|e| (e.id, e.start)));
            }
            starts.sort_by_key(|s| s.1);
            let assembled = Schedule::from_starts(instance, timeline, &starts)?;
            if assembled.check(instance).is_err() {
                continue;
            }
            let order: Vec<JobId> = starts.iter().map(|s| s.0).collect();
            let schedule = evaluate_sequence(instance, &order, timeline)?;
            debug_assert!(schedule.lmax() <= assembled.lmax());
            if schedule.lmax() < best.lmax() {
                best = schedule;
            }
        }
    }
    Ok(Solution {
        schedule: best,
        guesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t1: i64, t2: i64) -> Window {
        Window::from_ints(t1, t2).unwrap()
    }

    fn heads(inst: &Instance) -> Vec<Rational> {
        inst.jobs().iter().map(|j| j.r).collect()
    }

    fn tails(inst: &Instance) -> Vec<Rational> {
        inst.jobs().iter().map(|j| j.q).collect()
    }

    #[test]
    fn head_normalization() {
        let inst = Instance::from_triples(&[(3, 4, 0), (2, 6, 0), (2, 3, 0), (1, 9, 0), (1, 8, 0)])
            .unwrap();
        let norm = normalize_heads_mna(&inst, w(5, 8));
        assert_eq!(heads(&norm), vec![int(8), int(8), int(3), int(9), int(8)]);
    }

    #[test]
    fn tail_rounding() {
        let inst = Instance::from_triples(&[(1, 0, 5), (1, 0, 7), (1, 0, 1), (1, 0, 0)]).unwrap();
        assert_eq!(
            tails(&round_tails(&inst, 2)),
            vec![int(7), int(7), frac(7, 2), frac(7, 2)]
        );
        let inst = Instance::from_triples(&[(1, 0, 4), (1, 0, 2), (1, 0, 0)]).unwrap();
        assert_eq!(tails(&round_tails(&inst, 2)), vec![int(4), int(2), int(2)]);
        let flat = Instance::from_triples(&[(1, 0, 6), (2, 0, 6)]).unwrap();
        assert_eq!(round_tails(&flat, 3), flat);
        let zero = Instance::from_triples(&[(1, 0, 0), (2, 0, 0)]).unwrap();
        assert_eq!(round_tails(&zero, 3), zero);
    }

    #[test]
    fn structure_delta_and_prefixes() {
        // P = 20, eps = 1/2 -> delta = 5/4. Small family of three unit jobs.
        let inst = Instance::from_triples(&[(1, 0, 4), (1, 1, 4), (1, 2, 4), (17, 30, 4)]).unwrap();
        let s = build_structure(&inst, w(10, 12), frac(1, 2)).unwrap();
        assert_eq!(s.delta, frac(5, 4));
        assert_eq!(s.x, vec![JobId(1), JobId(2), JobId(3)]);
        assert_eq!(s.y, vec![JobId(4)]);
        assert!(s.big.is_empty());
        let fam = &s.families[1];
        assert_eq!(fam.jobs, vec![JobId(1), JobId(2), JobId(3)]);
        assert_eq!(fam.m, 3);
        assert_eq!(fam.prefix_len, vec![0, 1, 2, 3]);
        assert!(s.families[0].jobs.is_empty());
        assert_eq!(s.guess_count(), 4);
        assert_eq!(s.guesses().count(), 4);
        assert!(matches!(
            build_structure(&inst, w(10, 12), frac(2, 3)),
            Err(Error::EpsilonNotUnitFraction(_))
        ));
    }

    #[test]
    fn structure_without_small_jobs() {
        let inst = Instance::from_triples(&[(3, 0, 2), (2, 0, 4), (2, 9, 0)]).unwrap();
        let rounded = round_tails(&normalize_heads_mna(&inst, w(5, 8)), 2);
        let s = build_structure(&rounded, w(5, 8), frac(1, 2)).unwrap();
        assert_eq!(s.big, vec![JobId(1), JobId(2)]);
        assert!(s.families.iter().all(|f| f.jobs.is_empty() && f.m == 0));
        assert_eq!(s.guess_count(), 4);
        let all: Vec<_> = s.guesses().map(|g| g.before).collect();
        assert_eq!(
            all,
            vec![
                vec![],
                vec![JobId(1)],
                vec![JobId(2)],
                vec![JobId(1), JobId(2)]
            ]
        );
    }

    #[test]
    fn ptas3_example() {
        let inst = Instance::from_triples(&[(3, 0, 2), (2, 0, 4), (2, 9, 0)]).unwrap();
        let sol = ptas3(&inst, w(5, 8), frac(1, 2), GuessBudget::DEFAULT).unwrap();
        let s = &sol.schedule;
        assert_eq!(s.sequence(), vec![JobId(2), JobId(1), JobId(3)]);
        assert_eq!(s.start_of(JobId(2)), Some(int(0)));
        assert_eq!(s.start_of(JobId(1)), Some(int(2)));
        assert_eq!(s.start_of(JobId(3)), Some(int(9)));
        assert_eq!(s.lmax(), int(11));
        assert!(s.check(&inst).is_ok());
    }

    #[test]
    fn ptas3_everything_after_window() {
        let inst = Instance::from_triples(&[(3, 9, 2), (2, 10, 4)]).unwrap();
        // rounding leaves these tails alone; X is empty, one guess, and the
        // after-window part is solved at accuracy eps/3
        let rounded = round_tails(&normalize_heads_mna(&inst, w(5, 8)), 2);
        assert_eq!(rounded, inst);
        assert_eq!(
            build_structure(&rounded, w(5, 8), frac(1, 2))
                .unwrap()
                .guess_count(),
            1
        );
        let sol = ptas3(&inst, w(5, 8), frac(1, 2), GuessBudget::DEFAULT).unwrap();
        let plain = ptas0(&inst, frac(1, 6), GuessBudget::DEFAULT).unwrap();
        assert_eq!(sol.schedule.lmax(), plain.schedule.lmax());
        assert_eq!(sol.schedule.lmax(), int(17));
    }

    #[test]
    fn ptas3_rejects_non_unit_epsilon() {
        let inst = Instance::from_triples(&[(3, 0, 2)]).unwrap();
        assert!(matches!(
            ptas3(&inst, w(5, 8), frac(2, 3), GuessBudget::DEFAULT),
            Err(Error::EpsilonNotUnitFraction(_))
        ));
    }

    #[test]
    fn candidates_rule() {
        let inst = Instance::from_triples(&[(4, 0, 0), (2, 0, 0), (4, 6, 0), (3, 5, 0)]).unwrap();
        assert_eq!(
            straddling_candidates(&inst, w(5, 8)),
            vec![JobId(1), JobId(4)]
        );
        assert_eq!(
            straddling_candidates(&inst, w(5, 5)),
            vec![JobId(1), JobId(2), JobId(4)]
        );
    }

    #[test]
    fn grid_endpoints() {
        let job = Job::new(1, 4, 0, 0);
        let g = StraddleGrid::new(&job, w(5, 8), 2);
        assert_eq!(g.points, vec![int(4), frac(9, 2), int(5)]);
        assert_eq!(g.shifted_window(int(4)), w(4, 8));
        let tight = Job::new(2, 3, 0, 0);
        assert_eq!(StraddleGrid::new(&tight, w(5, 8), 2).points, vec![int(5)]);
    }

    #[test]
    fn ptas4_example() {
        let inst = Instance::from_triples(&[(4, 0, 0), (3, 0, 0)]).unwrap();
        let window = w(5, 8);
        let sol = ptas4(&inst, window, frac(1, 2), GuessBudget::DEFAULT).unwrap();
        assert_eq!(sol.schedule.lmax(), int(8));
        assert!(sol.schedule.check(&inst).is_ok());
        let mna = ptas3(&inst, window, frac(1, 2), GuessBudget::DEFAULT).unwrap();
        assert_eq!(mna.schedule.lmax(), int(11));
    }

    #[test]
    fn ptas4_without_candidates_matches_ptas3() {
        let inst = Instance::from_triples(&[(2, 0, 3), (1, 1, 0), (2, 9, 1)]).unwrap();
        let window = w(5, 8);
        assert!(straddling_candidates(&inst, window).is_empty());
        let a = ptas4(&inst, window, frac(1, 2), GuessBudget::DEFAULT).unwrap();
        let b = ptas3(&inst, window, frac(1, 2), GuessBudget::DEFAULT).unwrap();
        assert_eq!(a.schedule.lmax(), b.schedule.lmax());
    }
}
