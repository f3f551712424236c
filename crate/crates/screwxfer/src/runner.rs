//! Parallel benchmark runs.

use rayon::prelude::*;

use screwxfer_core::bench::{
    aggregate, run_instance, sample_instances, BenchContext, BenchError, BenchReport, Cell,
    InstanceOutcome,
};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SCREWXFER_THREADS";

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

/// Sample `per_cell` instances in each of the 16 cells and compare both
/// methods on all of them, using `threads` workers (all cores if `None`).
///
/// Every instance is independent and results are collected in sampling
/// order, so the report does not depend on the worker count.
pub fn run_bench(
    ctx: &BenchContext,
    seed: u64,
    per_cell: usize,
    threads: Option<usize>,
) -> Result<BenchReport, BenchError> {
    let mut jobs = Vec::new();
    for cell in Cell::all() {
        for (index, task) in sample_instances(&cell, per_cell, seed, &ctx.config)?
            .into_iter()
            .enumerate()
        {
            jobs.push((cell, index, task));
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| BenchError::InfeasibleBounds(format!("thread pool: {e}")))?;
    let outcomes: Vec<InstanceOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|(cell, index, task)| InstanceOutcome {
                cell: *cell,
                index: *index,
                outcome: run_instance(ctx, task),
            })
            .collect()
    });
    Ok(aggregate(seed, per_cell, ctx.config, &outcomes))
}
