use thiserror::Error;

use crate::model::JobId;

/// Errors raised by validation, evaluation and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no jobs")]
    EmptyInstance,
    #[error("job id {0} appears more than once")]
    DuplicateId(JobId),
    #[error("job {0} has a non-positive processing time")]
    NonPositiveProcessing(JobId),
    #[error("job {0} has a negative head or tail")]
    NegativeTime(JobId),
    #[error("window is malformed: T1={t1}, T2={t2}")]
    BadWindow { t1: String, t2: String },
    #[error("deadline must be nonnegative")]
    NegativeDeadline,
    #[error("sequence is not a permutation of the instance's job ids")]
    NotAPermutation,
    #[error("job subset is empty")]
    EmptySubset,
    #[error("job {0} is not part of the instance")]
    UnknownJob(JobId),
    #[error("accuracy must be positive")]
    NonPositiveEpsilon,
    #[error("accuracy {0} is not of the form 1/f for a positive integer f")]
    EpsilonNotUnitFraction(String),
    #[error("search needs {needed} guesses, budget is {budget}")]
    GuessBudgetExceeded { needed: u128, budget: u64 },
    #[error("instance has {n} jobs, oracle cap is {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
