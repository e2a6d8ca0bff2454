//! Run ensembles for the Monte Carlo experiments.
//!
//! Every run `r` of an experiment draws from its own ChaCha8 stream: the key
//! comes from the master seed and a purpose tag, the stream number is `r`.
//! A run therefore sees the same random numbers whatever the worker count,
//! and adding runs never reshuffles the earlier ones.
//!
//! Runs are mapped in parallel on a rayon pool (feature `parallel`, on by
//! default) or one after another. Results always come back in run order and
//! are reduced sequentially, so outputs are bit-identical across worker
//! counts. The environment variable `QNL_THREADS` caps the pool size.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Environment variable holding the worker cap.
pub const THREADS_ENV: &str = "QNL_THREADS";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Master seed plus a purpose tag; hands out one RNG stream per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    key: u64,
}

impl Streams {
    pub fn new(master_seed: u64, tag: &str) -> Self {
        let tag_hash = tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
        });
        Self {
            key: splitmix64(master_seed ^ splitmix64(tag_hash)),
        }
    }

    /// Independent sub-family, e.g. the `k`-th process merged inside a run.
    pub fn child(&self, k: u64) -> Self {
        Self {
            key: splitmix64(self.key ^ splitmix64(k.wrapping_add(1))),
        }
    }

    pub fn rng(&self, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        rng.set_stream(run);
        rng
    }
}

/// How runs are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel {
        threads: usize,
    },
}

impl Execution {
    /// Parallel on all available cores (capped by `QNL_THREADS`) when the
    /// `parallel` feature is on, sequential otherwise.
    pub fn from_env() -> Self {
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        Self::with_cap(cap)
    }

    #[cfg(feature = "parallel")]
    pub fn with_cap(cap: Option<usize>) -> Self {
        let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
        let threads = cap.unwrap_or(avail);
        Execution::Parallel { threads }
    }

    #[cfg(not(feature = "parallel"))]
    pub fn with_cap(_cap: Option<usize>) -> Self {
        Execution::Sequential
    }

    pub fn workers(&self) -> usize {
        match self {
            Execution::Sequential => 1,
            #[cfg(feature = "parallel")]
            Execution::Parallel { threads } => *threads,
        }
    }

    /// `(0..n).map(f)` with results in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel { threads } => {
                use rayon::prelude::*;
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(*threads)
                    .build()
                    .expect("failed to build worker pool");
                pool.install(|| (0..n).into_par_iter().map(f).collect())
            }
        }
    }
}

/// [`Execution::from_env`] followed by [`Execution::map`].
pub fn map_runs<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    Execution::from_env().map(n, f)
}

/// Delete-one jackknife over runs.
///
/// Each run contributes a vector of additive statistics (sums, counts...).
/// The estimator `f` maps the per-run average of those vectors to the
/// quantities of interest. Returns `(f(mean), jackknife standard errors)`.
pub fn jackknife<F>(per_run: &[Vec<f64>], f: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    assert!(!per_run.is_empty(), "jackknife needs at least one run");
    let r = per_run.len();
    let width = per_run[0].len();
    let mut total = vec![0.0; width];
    for run in per_run {
        for (t, x) in total.iter_mut().zip(run) {
            *t += x;
        }
    }
    let mean: Vec<f64> = total.iter().map(|t| t / r as f64).collect();
    let estimate = f(&mean);
    if r < 2 {
        return (estimate.clone(), vec![f64::INFINITY; estimate.len()]);
    }
    let loo: Vec<Vec<f64>> = per_run
        .iter()
        .map(|run| {
            let m: Vec<f64> = total
                .iter()
                .zip(run)
                .map(|(t, x)| (t - x) / (r - 1) as f64)
                .collect();
            f(&m)
        })
        .collect();
    let k = estimate.len();
    let mut se = vec![0.0; k];
    for i in 0..k {
        let avg = loo.iter().map(|v| v[i]).sum::<f64>() / r as f64;
        let ss: f64 = loo.iter().map(|v| (v[i] - avg).powi(2)).sum();
        se[i] = ((r - 1) as f64 / r as f64 * ss).sqrt();
    }
    (estimate, se)
}

/// Mean and standard error of the mean of scalar per-run values.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
