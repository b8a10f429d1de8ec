//! Seeded replication harness and the regime-dispatching limit experiment.

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{CountResult, GraphIndex, MotifCounter};
use crate::error::{MuxError, Result};
use crate::multiplex::{automorphism_count, Multiplex};
use crate::sampler::{from_theta, sample, ProbTriple, SeedSpec};
use crate::stats::distances::{standardize, tv_to_poisson, w1_to_std_normal};
use crate::stats::moments::{
    exact_mean_copies, exact_mean_extensions, exact_mean_injections, exact_variance_injections,
    VARIANCE_MAX_VERTICES,
};
use crate::submultiplex::Submultiplex;
use crate::threshold::{self, BalanceLabel, ThetaPoint};

/// Runs `f(0), …, f(reps − 1)` on `workers` threads. The output is in
/// replication order and does not depend on `workers`.
pub fn replicate<T, F>(reps: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if reps == 0 {
        return Err(MuxError::InvalidArgument("reps must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| MuxError::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| (0..reps).into_par_iter().map(&f).collect())
}

/// Counts of every motif in `motifs` for each replication; `out[rep][k]`
/// belongs to `motifs[k]`.
pub fn simulate_motifs(
    motifs: &[Multiplex],
    n: u32,
    p: &ProbTriple,
    reps: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<Vec<CountResult>>> {
    let counters: Vec<MotifCounter> = motifs.iter().map(MotifCounter::new).collect::<Result<_>>()?;
    replicate(reps, workers, |rep| {
        let g = sample(n, p, SeedSpec::new(seed, rep));
        let gi = GraphIndex::new(&g);
        Ok(counters.iter().map(|c| c.count(&gi)).collect())
    })
}

/// One count of `h` per replication.
pub fn simulate_counts(
    h: &Multiplex,
    n: u32,
    p: &ProbTriple,
    reps: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<CountResult>> {
    Ok(simulate_motifs(std::slice::from_ref(h), n, p, reps, seed, workers)?
        .into_iter()
        .map(|mut v| v.remove(0))
        .collect())
}

/// Mean, unbiased variance and their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_std_error: f64,
    /// Standard error of the sample variance from the fourth central moment.
    pub variance_std_error: f64,
}

impl SampleSummary {
    pub fn new(xs: &[f64]) -> Self {
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let (mut s2, mut s4) = (0.0, 0.0);
        for x in xs {
            let d = (x - mean) * (x - mean);
            s2 += d;
            s4 += d * d;
        }
        let variance = s2 / (m - 1.0);
        let m4 = s4 / m;
        let var_var = (m4 - variance * variance * (m - 3.0) / (m - 1.0)) / m;
        SampleSummary {
            count: xs.len(),
            mean,
            variance,
            mean_std_error: (variance / m).sqrt(),
            variance_std_error: var_var.max(0.0).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRecord {
    pub rep: u64,
    pub injections: u128,
    pub copies: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distances {
    pub w1_to_normal: Option<f64>,
    pub tv_to_poisson_at_exact_mean: Option<f64>,
}

/// Candidate Poisson limit constants for the copy count; the report lists
/// both without choosing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonConstants {
    pub inverse_vertex_factorial: f64,
    pub inverse_automorphisms: f64,
}

/// Core reduction statistics for the unbalanced regime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreReduction {
    pub core: Submultiplex,
    pub unique_extremal: bool,
    pub exact_mean_extensions: f64,
    pub exact_mean_core_copies: f64,
    pub core_copies: Vec<u128>,
    /// `X(H) / E[ext]` per replication, with `X(H)` the copy count.
    pub scaled: Vec<f64>,
    pub deviation_above_0_1: f64,
    pub deviation_above_0_01: f64,
    pub tv_core_to_poisson: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub motif: Multiplex,
    pub theta: ThetaPoint,
    pub n: u32,
    pub p: ProbTriple,
    pub reps: u64,
    pub seed: u64,
    pub samples: Vec<SampleRecord>,
    pub exact_mean_inj: f64,
    pub exact_var_inj: Option<f64>,
    pub exact_mean_copies: f64,
    pub aut_size: u64,
    pub regime: BalanceLabel,
    pub distances: Distances,
    pub fitted_poisson_mean: f64,
    pub poisson_constants: PoissonConstants,
    pub empirical_positive_fraction: f64,
    pub core_reduction: Option<CoreReduction>,
}

/// Samples `h` at `p = n^{−θ}` and evaluates the reference law of the regime.
pub fn limit_experiment(
    h: &Multiplex,
    theta: &ThetaPoint,
    n: u32,
    reps: u64,
    seed: u64,
    workers: usize,
) -> Result<SimulationReport> {
    theta.require_domain()?;
    let regime = threshold::classify_balance(h, theta)?;
    let p = from_theta(n as u64, theta)?;
    let aut_size = automorphism_count(h)?;

    let core = if regime == BalanceLabel::Unbalanced { Some(threshold::core(h, theta)?) } else { None };
    let mut motifs = vec![h.clone()];
    if let Some(c) = &core {
        motifs.push(c.to_compact().0);
    }
    let counts = simulate_motifs(&motifs, n, &p, reps, seed, workers)?;

    let nn = n as u64;
    let exact_mean_inj = exact_mean_injections(h, nn, &p)?;
    let exact_var_inj = if h.n_vertices() as usize <= VARIANCE_MAX_VERTICES {
        Some(exact_variance_injections(h, nn, &p)?)
    } else {
        None
    };
    let mean_copies = exact_mean_copies(h, nn, &p)?;

    let samples: Vec<SampleRecord> = counts
        .iter()
        .enumerate()
        .map(|(rep, c)| SampleRecord { rep: rep as u64, injections: c[0].injections, copies: c[0].copies })
        .collect();
    let copies: Vec<u64> = samples.iter().map(|s| s.copies as u64).collect();
    let m = reps as f64;
    let fitted_poisson_mean = copies.iter().map(|&c| c as f64).sum::<f64>() / m;
    let empirical_positive_fraction = copies.iter().filter(|&&c| c > 0).count() as f64 / m;

    let mut distances = Distances { w1_to_normal: None, tv_to_poisson_at_exact_mean: None };
    match regime {
        BalanceLabel::InteriorSatisfiable => {
            if let Some(var) = exact_var_inj {
                let xs: Vec<f64> = samples.iter().map(|s| s.injections as f64).collect();
                if xs.len() >= crate::stats::W1_MIN_SAMPLES && var > 0.0 {
                    distances.w1_to_normal = Some(w1_to_std_normal(&standardize(&xs, exact_mean_inj, var))?);
                }
            }
        }
        BalanceLabel::StrictlyBalanced => {
            distances.tv_to_poisson_at_exact_mean = Some(tv_to_poisson(&copies, mean_copies));
        }
        _ => {}
    }

    let core_reduction = match core {
        Some(core) => {
            let unique_extremal = threshold::extremal_set(h, theta)?.len() == 1;
            let (compact, _) = core.to_compact();
            let ext = exact_mean_extensions(&core, h, nn, &p)?;
            let core_mean = exact_mean_copies(&compact, nn, &p)?;
            let core_copies: Vec<u128> = counts.iter().map(|c| c[1].copies).collect();
            let scaled: Vec<f64> = samples.iter().map(|s| s.copies as f64 / ext).collect();
            let dev = |eps: f64| {
                scaled.iter().zip(&core_copies).filter(|(x, &c)| (*x - c as f64).abs() > eps).count() as f64 / m
            };
            let tv = unique_extremal
                .then(|| tv_to_poisson(&core_copies.iter().map(|&c| c as u64).collect::<Vec<_>>(), core_mean));
            Some(CoreReduction {
                unique_extremal,
                exact_mean_extensions: ext,
                exact_mean_core_copies: core_mean,
                deviation_above_0_1: dev(0.1),
                deviation_above_0_01: dev(0.01),
                tv_core_to_poisson: tv,
                core_copies,
                scaled,
                core,
            })
        }
        None => None,
    };

    let v = h.n_vertices() as u64;
    Ok(SimulationReport {
        motif: h.clone(),
        theta: *theta,
        n,
        p,
        reps,
        seed,
        samples,
        exact_mean_inj,
        exact_var_inj,
        exact_mean_copies: mean_copies,
        aut_size,
        regime,
        distances,
        fitted_poisson_mean,
        poisson_constants: PoissonConstants {
            inverse_vertex_factorial: 1.0 / (1..=v).map(|i| i as f64).product::<f64>(),
            inverse_automorphisms: 1.0 / aut_size as f64,
        },
        empirical_positive_fraction,
        core_reduction,
    })
}
