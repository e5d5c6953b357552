//! Seeded random instances.

use latesched_core::{schrage, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance_file::{InstanceFile, JobRecord, Metadata, WindowKind, WindowRecord};
use crate::Scenario;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BadParams {
    #[error("number of jobs must be at least 1")]
    NoJobs,
    #[error("p_max must be at least 1")]
    ProcessingMax,
    #[error("r_max and q_max must be nonnegative")]
    NegativeRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub seed: u64,
    pub p_max: i64,
    pub r_max: i64,
    pub q_max: i64,
    pub scenario: Scenario,
}

impl GenParams {
    pub fn new(n: usize, seed: u64, scenario: Scenario) -> Self {
        GenParams {
            n,
            seed,
            p_max: 10,
            r_max: 20,
            q_max: 15,
            scenario,
        }
    }
}

/// Draws an instance file. Identical parameters give identical files.
///
/// Deadline scenarios receive a feasible deadline: the Schrage makespan
/// plus a random slack of at most `p_max`.
pub fn gen_random(params: &GenParams) -> Result<InstanceFile, BadParams> {
    if params.n == 0 {
        return Err(BadParams::NoJobs);
    }
    if params.p_max < 1 {
        return Err(BadParams::ProcessingMax);
    }
    if params.r_max < 0 || params.q_max < 0 {
        return Err(BadParams::NegativeRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let jobs: Vec<JobRecord> = (1..=params.n as u32)
        .map(|id| JobRecord {
            id,
            p: rng.gen_range(1..=params.p_max),
            r: rng.gen_range(0..=params.r_max),
            q: rng.gen_range(0..=params.q_max),
        })
        .collect();
    let mut file = InstanceFile {
        jobs,
        deadline: None,
        window: None,
        metadata: Some(Metadata {
            name: Some(format!("rand-n{}-s{}", params.n, params.seed)),
            seed: Some(params.seed),
        }),
    };
    let horizon = params.r_max + params.p_max;
    match params.scenario {
        Scenario::P0 | Scenario::Pareto => {}
        Scenario::Deadline => {
            let triples: Vec<_> = file.jobs.iter().map(|j| (j.p, j.r, j.q)).collect();
            let cmax =
                schrage(&Instance::from_triples(&triples).expect("generated jobs are valid"))
                    .cmax();
            file.deadline = Some(cmax.to_integer() + rng.gen_range(0..=params.p_max));
        }
        Scenario::Mna | Scenario::Ona => {
            let t1 = rng.gen_range(0..=horizon);
            let t2 = rng.gen_range(t1..=horizon);
            let kind = if params.scenario == Scenario::Mna {
                WindowKind::Mna
            } else {
                WindowKind::Ona
            };
            file.window = Some(WindowRecord { kind, t1, t2 });
        }
    }
    Ok(file)
}
