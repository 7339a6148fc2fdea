//! Replicate loops with results gathered in replicate order.

use crate::error::Result;

/// Evaluates `f(0), …, f(reps-1)` and returns the results in order.
///
/// With the `parallel` feature the work is spread over a pool of `threads`
/// workers (all cores when `None`). The output does not depend on the thread
/// count; when several replicates fail, the error of the lowest replicate is
/// returned.
pub fn run_replicates<R, F>(reps: usize, threads: Option<usize>, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(u64) -> Result<R> + Sync,
{
    let outcomes = evaluate(reps, threads, &f);
    outcomes.into_iter().collect()
}

#[cfg(feature = "parallel")]
fn evaluate<R, F>(reps: usize, threads: Option<usize>, f: &F) -> Vec<Result<R>>
where
    R: Send,
    F: Fn(u64) -> Result<R> + Sync,
{
    use rayon::prelude::*;

    if threads == Some(1) || reps <= 1 {
        return (0..reps as u64).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build();
    match pool {
        Ok(pool) => pool.install(|| (0..reps as u64).into_par_iter().map(f).collect()),
        Err(_) => (0..reps as u64).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn evaluate<R, F>(reps: usize, _threads: Option<usize>, f: &F) -> Vec<Result<R>>
where
    R: Send,
    F: Fn(u64) -> Result<R> + Sync,
{
    (0..reps as u64).map(f).collect()
}
