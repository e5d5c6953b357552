//! Scenario dispatch shared by `solve`, `oracle` and `compare`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use latesched_core::oracle::{
    exact_lmax, exact_lmax_branch_bound, exact_pareto, Optimum, DEFAULT_BRUTE_FORCE_CAP,
};
use latesched_core::time::{display, frac, int, unit_fraction_denominator, ParsedRational};
use latesched_core::{
    ptas0, ptas1, ptas2, ptas3, ptas4, Error, GuessBudget, Instance, ParetoSet, Rational, Schedule,
    Timeline, Window,
};

use crate::instance_file::{parse_instance, ParsedInstance, WindowKind};
use crate::report::{ReportRow, Status};
use crate::{exit, CliError, Scenario};

/// Command-line overrides applied on top of an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub scenario: Option<Scenario>,
    pub epsilon: ParsedRational,
    pub deadline: Option<i64>,
    pub t1: Option<i64>,
    pub t2: Option<i64>,
    pub budget: GuessBudget,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            scenario: None,
            epsilon: ParsedRational {
                value: frac(1, 2),
                decimal: false,
            },
            deadline: None,
            t1: None,
            t2: None,
            budget: GuessBudget::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub epsilon: Rational,
    pub deadline: Option<Rational>,
    pub timeline: Timeline,
}

/// Combines file contents and overrides into a runnable scenario.
///
/// Without `--scenario` the file decides: a window selects its kind, a
/// deadline selects `deadline`, anything else is `p0`.
pub fn resolve(parsed: &ParsedInstance, settings: &Settings) -> Result<Resolved, CliError> {
    let scenario = settings
        .scenario
        .unwrap_or(match (parsed.window_kind, parsed.file.deadline) {
            (Some(WindowKind::Mna), _) => Scenario::Mna,
            (Some(WindowKind::Ona), _) => Scenario::Ona,
            (None, Some(_)) => Scenario::Deadline,
            (None, None) => Scenario::P0,
        });
    let epsilon = settings.epsilon.value;
    if epsilon <= int(0) {
        return Err(Error::NonPositiveEpsilon.into());
    }
    let mut deadline = None;
    let mut timeline = Timeline::Unrestricted;
    match scenario {
        Scenario::P0 | Scenario::Pareto => {}
        Scenario::Deadline => {
            let d = settings.deadline.or(parsed.file.deadline).ok_or_else(|| {
                CliError::Usage(
                    "scenario deadline needs --deadline or a deadline in the file".into(),
                )
            })?;
            if d < 0 {
                return Err(Error::NegativeDeadline.into());
            }
            deadline = Some(int(d));
        }
        Scenario::Mna | Scenario::Ona => {
            if settings.epsilon.decimal {
                return Err(CliError::Usage(format!(
                    "scenario {scenario} takes the accuracy as a fraction 1/f, not a decimal"
                )));
            }
            if unit_fraction_denominator(epsilon).is_none() {
                return Err(Error::EpsilonNotUnitFraction(display(epsilon)).into());
            }
            let file_window = parsed.file.window;
            let t1 = settings.t1.or(file_window.map(|w| w.t1));
            let t2 = settings.t2.or(file_window.map(|w| w.t2));
            let (Some(t1), Some(t2)) = (t1, t2) else {
                return Err(CliError::Usage(format!(
                    "scenario {scenario} needs --t1 and --t2 or a window in the file"
                )));
            };
            let window = Window::from_ints(t1, t2)?;
            timeline = if scenario == Scenario::Mna {
                Timeline::Machine(window)
            } else {
                Timeline::Operator(window)
            };
        }
    }
    Ok(Resolved {
        scenario,
        epsilon,
        deadline,
        timeline,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Schedule(Schedule),
    Frontier(ParetoSet),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutput {
    pub answer: Answer,
    pub guesses: u64,
    pub wall: Duration,
}

impl SolveOutput {
    /// Objective reported in CSV rows: the schedule's lateness, or the
    /// smallest lateness on the frontier.
    pub fn lmax(&self) -> Option<Rational> {
        match &self.answer {
            Answer::Schedule(s) => Some(s.lmax()),
            Answer::Frontier(set) => set.entries().iter().map(|e| e.lmax).min(),
            Answer::Infeasible => None,
        }
    }
}

pub fn solve(
    instance: &Instance,
    resolved: &Resolved,
    budget: GuessBudget,
) -> Result<SolveOutput, Error> {
    let clock = Instant::now();
    let eps = resolved.epsilon;
    let (answer, guesses) = match (resolved.scenario, resolved.timeline) {
        (Scenario::Deadline, _) => {
            let d = resolved.deadline.expect("resolved deadline scenario");
            match ptas1(instance, d, eps, budget)? {
                Some(sol) => (Answer::Schedule(sol.schedule), sol.guesses),
                None => (Answer::Infeasible, 0),
            }
        }
        (Scenario::Pareto, _) => {
            let (set, guesses) = ptas2(instance, eps, budget)?;
            (Answer::Frontier(set), guesses)
        }
        (Scenario::Mna, Timeline::Machine(w)) => {
            let sol = ptas3(instance, w, eps, budget)?;
            (Answer::Schedule(sol.schedule), sol.guesses)
        }
        (Scenario::Ona, Timeline::Operator(w)) => {
            let sol = ptas4(instance, w, eps, budget)?;
            (Answer::Schedule(sol.schedule), sol.guesses)
        }
        _ => {
            let sol = ptas0(instance, eps, budget)?;
            (Answer::Schedule(sol.schedule), sol.guesses)
        }
    };
    Ok(SolveOutput {
        answer,
        guesses,
        wall: clock.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// `None` when no order meets the deadline.
    Lmax(Option<Optimum>),
    Frontier(ParetoSet),
}

/// Exact reference answer. Brute force up to its own cap, branch and bound
/// beyond it, both limited by `cap`.
pub fn oracle(instance: &Instance, resolved: &Resolved, cap: usize) -> Result<OracleAnswer, Error> {
    if instance.len() > cap {
        return Err(Error::InstanceTooLarge {
            n: instance.len(),
            cap,
        });
    }
    if resolved.scenario == Scenario::Pareto {
        return Ok(OracleAnswer::Frontier(exact_pareto(instance, cap)?));
    }
    let result = if instance.len() <= DEFAULT_BRUTE_FORCE_CAP {
        exact_lmax(instance, resolved.timeline, resolved.deadline, cap)?
    } else {
        exact_lmax_branch_bound(instance, resolved.timeline, resolved.deadline, cap)?
    };
    Ok(OracleAnswer::Lmax(result.optimum))
}

pub fn format_schedule(schedule: &Schedule) -> String {
    let mut out = String::new();
    let seq: Vec<String> = schedule
        .sequence()
        .iter()
        .map(|id| id.to_string())
        .collect();
    writeln!(out, "sequence: {}", seq.join(" ")).unwrap();
    for e in schedule.entries() {
        writeln!(
            out,
            "job {} start {} completion {}",
            e.id,
            display(e.start),
            display(e.completion)
        )
        .unwrap();
    }
    writeln!(out, "lmax: {}", display(schedule.lmax())).unwrap();
    writeln!(out, "cmax: {}", display(schedule.cmax())).unwrap();
    out
}

pub fn format_frontier(set: &ParetoSet) -> String {
    let mut out = String::new();
    for e in set.entries() {
        let seq: Vec<String> = e.sequence.iter().map(|id| id.to_string()).collect();
        writeln!(
            out,
            "cmax {} lmax {} sequence {}",
            display(e.cmax),
            display(e.lmax),
            seq.join(" ")
        )
        .unwrap();
    }
    out
}

/// Runs the scheme and the oracle on one instance and grades the result.
pub fn compare_instance(
    name: &str,
    parsed: &ParsedInstance,
    settings: &Settings,
    cap: usize,
) -> ReportRow {
    let eps = settings.epsilon.value;
    let scenario_guess = settings.scenario.unwrap_or(Scenario::P0);
    let resolved = match resolve(parsed, settings) {
        Ok(r) => r,
        Err(_) => return ReportRow::new(name, scenario_guess, eps, Status::Invalid),
    };
    let mut row = ReportRow::new(name, resolved.scenario, eps, Status::Ok);
    if parsed.instance.len() > cap {
        row.status = Status::Skipped;
        return row;
    }
    let out = match solve(&parsed.instance, &resolved, settings.budget) {
        Ok(out) => out,
        Err(Error::GuessBudgetExceeded { .. }) => {
            row.status = Status::BudgetExceeded;
            return row;
        }
        Err(_) => {
            row.status = Status::Invalid;
            return row;
        }
    };
    row.guesses = Some(out.guesses);
    row.wall = Some(out.wall);
    let bound = int(1) + eps;
    match oracle(&parsed.instance, &resolved, cap) {
        Err(Error::InstanceTooLarge { .. }) => row.status = Status::Skipped,
        Err(_) => row.status = Status::Invalid,
        Ok(OracleAnswer::Frontier(exact)) => {
            let Answer::Frontier(approx) = &out.answer else {
                unreachable!("pareto scenario")
            };
            row.algorithm_lmax = out.lmax();
            row.oracle_lmax = exact.entries().iter().map(|e| e.lmax).min();
            let mut worst: Option<(Rational, Rational, Rational)> = None;
            for (c, l) in exact.points() {
                match approx.best_within_makespan(c) {
                    None => {
                        row.status = Status::Violation;
                        row.algorithm_lmax = None;
                        row.oracle_lmax = Some(l);
                        return row;
                    }
                    Some(hit) => {
                        let ratio = hit.lmax / l;
                        if worst.is_none_or(|(r, _, _)| ratio > r) {
                            worst = Some((ratio, hit.lmax, l));
                        }
                    }
                }
            }
            if let Some((ratio, a, o)) = worst {
                row.algorithm_lmax = Some(a);
                row.oracle_lmax = Some(o);
                if ratio > bound {
                    row.status = Status::Violation;
                }
            }
        }
        Ok(OracleAnswer::Lmax(optimum)) => {
            row.algorithm_lmax = out.lmax();
            row.oracle_lmax = optimum.as_ref().map(|o| o.lmax);
            row.status = match (&out.answer, optimum) {
                (Answer::Infeasible, None) => Status::Infeasible,
                (Answer::Infeasible, Some(_)) | (_, None) => Status::Violation,
                (Answer::Schedule(s), Some(opt)) => {
                    let feasible = s.check(&parsed.instance).is_ok()
                        && resolved.deadline.is_none_or(|d| s.cmax() <= d);
                    if feasible && s.lmax() <= bound * opt.lmax {
                        Status::Ok
                    } else {
                        Status::Violation
                    }
                }
                (Answer::Frontier(_), Some(_)) => unreachable!("frontier only for pareto"),
            };
        }
    }
    row
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareOutcome {
    pub rows: Vec<ReportRow>,
}

impl CompareOutcome {
    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    /// Ratio violations first, then budget overruns, then invalid files.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Violation) > 0 {
            exit::RATIO_VIOLATION
        } else if self.count(Status::BudgetExceeded) > 0 {
            exit::GUESS_BUDGET
        } else if self.count(Status::Invalid) > 0 {
            exit::SCHEMA
        } else {
            exit::SUCCESS
        }
    }
}

/// Grades every `*.json` file of `dir` in file-name order. Rows are named
/// after the file stem.
pub fn compare_corpus(
    dir: &Path,
    settings: &Settings,
    cap: usize,
) -> Result<CompareOutcome, CliError> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(CliError::io(dir))? {
        let path = entry.map_err(CliError::io(dir))?.path();
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&path).map_err(CliError::io(&path))?;
        rows.push(match parse_instance(&text) {
            Ok(parsed) => compare_instance(&name, &parsed, settings, cap),
            Err(_) => ReportRow::new(
                name,
                settings.scenario.unwrap_or(Scenario::P0),
                settings.epsilon.value,
                Status::Invalid,
            ),
        });
    }
    Ok(CompareOutcome { rows })
}
