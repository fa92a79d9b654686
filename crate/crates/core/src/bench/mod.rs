//! Seeded, reproducible verification runs and experiment sweeps.
//!
//! Every task (a suite or experiment at one prime) draws from its own ChaCha8
//! stream, `seed` fixed and the stream set to the task index, so results do
//! not depend on scheduling. Tasks run on a rayon pool and are collected in
//! task order.

pub mod config;
mod experiments;
pub mod report;
mod verify;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{Experiment, ExperimentConfig};
pub use report::{object_csv, CatalogComparison, CheckRecord, ExperimentReport, Measurement, Tally, SCHEMA_VERSION};

use crate::error::{Error, Result};
use crate::fpcore::{PrimeField, ResidueSet};

/// The generator for task `stream` of a run seeded with `seed`.
pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniformly random `size`-subset of `F_p`.
pub fn random_subset(field: PrimeField, size: usize, rng: &mut ChaCha8Rng) -> ResidueSet {
    let size = size.min(field.size());
    ResidueSet::new(field, sample(rng, field.size(), size).into_iter().map(|i| i as u64))
}

/// A uniformly random `size`-subset of `F_p \ {0}`.
pub fn random_nonzero_subset(field: PrimeField, size: usize, rng: &mut ChaCha8Rng) -> ResidueSet {
    let size = size.min(field.size() - 1);
    ResidueSet::new(field, sample(rng, field.size() - 1, size).into_iter().map(|i| i as u64 + 1))
}

fn in_pool<T: Send>(config: &ExperimentConfig, job: impl FnOnce() -> T + Send) -> Result<T> {
    match config.threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Runs every invariant suite at every configured prime.
pub fn run_verify(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let fields = config.fields();
    let tasks: Vec<(PrimeField, &str)> =
        fields.iter().flat_map(|&f| verify::SUITES.iter().map(move |&s| (f, s))).collect();
    let checks = in_pool(config, || {
        tasks
            .par_iter()
            .enumerate()
            .map(|(i, &(field, suite))| {
                let mut rng = task_rng(config.seed, i as u64);
                verify::run_suite(suite, field, &mut rng, config.instances)
            })
            .collect::<Vec<_>>()
    })?;
    Ok(ExperimentReport::assemble(config, Vec::new(), Vec::new(), checks.into_iter().flatten().collect()))
}

/// Runs the configured experiments at every configured prime.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if config.experiments.is_empty() {
        return Err(Error::Config("no experiments configured".into()));
    }
    let fields = config.fields();
    let tasks: Vec<(usize, PrimeField)> =
        (0..config.experiments.len()).flat_map(|e| fields.iter().map(move |&f| (e, f))).collect();
    let outputs = in_pool(config, || {
        tasks
            .par_iter()
            .enumerate()
            .map(|(i, &(e, field))| {
                let mut rng = task_rng(config.seed, i as u64);
                experiments::run(&config.experiments[e], field, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut measurements = Vec::new();
    let mut comparisons = Vec::new();
    let mut checks = Vec::new();
    let mut next_instance = vec![0usize; config.experiments.len()];
    for (&(e, _), out) in tasks.iter().zip(outputs) {
        let offset = next_instance[e];
        next_instance[e] += out.measurements.len();
        measurements.extend(out.measurements.into_iter().map(|m| Measurement { instance: m.instance + offset, ..m }));
        comparisons.extend(out.comparisons.into_iter().map(|c| CatalogComparison { instance: c.instance + offset, ..c }));
        checks.extend(out.checks);
    }
    Ok(ExperimentReport::assemble(config, measurements, comparisons, checks))
}
