//! Trial execution. Each trial owns its own seeded stream, so running trials
//! in parallel yields exactly the sequential results; reductions are done
//! afterwards in trial order.

use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Sequential,
    Parallel,
}

/// `f(0), f(1), ..., f(n - 1)` in index order.
pub fn run_trials<T, F>(n: usize, mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Mode::Sequential => (0..n).map(f).collect(),
        Mode::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i * i) as u64;
        assert_eq!(run_trials(100, Mode::Sequential, f), run_trials(100, Mode::Parallel, f));
    }
}
