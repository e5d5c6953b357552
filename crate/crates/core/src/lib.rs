//! Single-machine scheduling with heads and tails: minimize the maximum
//! lateness `max_j (C_j + q_j)` under a common deadline, as a (lateness,
//! makespan) Pareto frontier, or around one machine or operator
//! unavailability window.
//!
//! The solvers are polynomial-time approximation schemes built on Schrage's
//! rule. The [`oracle`] module holds exhaustive reference solvers used to
//! certify their `1 + eps` guarantees on small instances. All arithmetic is
//! exact rational.

pub mod availability;
pub mod deadline;
pub mod error;
pub mod model;
pub mod oracle;
pub mod pareto;
pub mod schedule;
pub mod schrage;
pub mod time;

pub use availability::{
    build_structure, normalize_heads_mna, ptas3, ptas4, round_tails, straddling_candidates,
    straddling_enumeration, AvailabilityGuess, Family, FamilyStructure, StraddleGrid,
};
pub use deadline::{
    enumerate_modified_instances, large_jobs, ptas0, ptas1, ptas2, Guess, GuessBudget,
    ModifiedInstance, PtasConfig, Solution,
};
pub use error::{Error, Result};
pub use model::{validate_instance, Instance, Job, JobId, ScenarioSpec, Timeline, Window};
pub use pareto::{ParetoEntry, ParetoSet};
pub use schedule::{evaluate_sequence, lower_bound_subset, Schedule, ScheduledJob, Violation};
pub use schrage::{
    absolute_error_bound, critical_analysis, schrage, CriticalAnalysis, Interference,
};
pub use time::Rational;
