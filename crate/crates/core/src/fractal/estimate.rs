use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::excursion::{time_change, LazyEvaluator, ParameterTree};
use crate::rng::replica_seed;
use crate::structural::DecompositionSpec;

use super::counts::{count_ladder, dyadic_deltas, CountKind, CountLadder};
use super::fit::{dimension_fit, DimensionFit};

/// Settings for a replicated divider-ladder dimension estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DimensionConfig {
    /// Recursion depth of the lazy approximant.
    pub depth: usize,
    /// Grid size is `2^log2_m`.
    pub log2_m: u32,
    /// Ladder `sup/2^k`, `k = 1..=steps`.
    pub steps: usize,
    /// Half-open range of ladder entries used in the fit.
    pub window: (usize, usize),
    /// Sample the grid through `τ_n^{-1}` with this `n` when the law has
    /// distinct distance and length fractions. `None` keeps the uniform grid.
    pub warp_depth: Option<usize>,
}

impl Default for DimensionConfig {
    fn default() -> Self {
        DimensionConfig { depth: 18, log2_m: 16, steps: 10, window: (1, 6), warp_depth: Some(18) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub ladders: Vec<CountLadder>,
    /// Per-replica fits over the window.
    pub fits: Vec<DimensionFit>,
    /// Fit of the replica-averaged `log N` ladder.
    pub pooled: DimensionFit,
}

impl DimensionEstimate {
    pub fn mean_slope(&self) -> f64 {
        self.fits.iter().map(|f| f.slope).sum::<f64>() / self.fits.len() as f64
    }
}

/// Grid points used for one replica.
pub fn sample_grid(pt: &ParameterTree, m: usize, warp_depth: Option<usize>) -> Vec<f64> {
    let uniform = (0..=m).map(|k| k as f64 / m as f64);
    match warp_depth {
        Some(n) if !pt.spec.law.is_shared() => {
            let tau = time_change(pt, n);
            uniform.map(|u| tau.inverse(u)).collect()
        }
        _ => uniform.collect(),
    }
}

pub fn estimate_dimension(spec: &DecompositionSpec, cfg: &DimensionConfig, seed: u64, replicas: u64) -> DimensionEstimate {
    let m = 1usize << cfg.log2_m;
    let ladders: Vec<CountLadder> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let pt = ParameterTree::new(spec.clone(), replica_seed(seed, r));
            let ts = sample_grid(&pt, m, cfg.warp_depth);
            let mut values = LazyEvaluator::excursion(&pt, cfg.depth).eval_many(&ts);
            values[0] = 0.0;
            values[m] = 0.0;
            let deltas = dyadic_deltas(&values, cfg.steps);
            count_ladder(&values, &deltas, CountKind::Divider)
        })
        .collect();
    let fits = ladders.iter().map(|l| dimension_fit(l, cfg.window)).collect();
    DimensionEstimate { pooled: pooled_fit(&ladders, cfg.window), ladders, fits }
}

/// Fits the geometric-mean ladder, with scales normalized per replica.
fn pooled_fit(ladders: &[CountLadder], window: (usize, usize)) -> DimensionFit {
    let n = ladders[0].counts.len();
    let r = ladders.len() as f64;
    let counts: Vec<f64> = (0..n).map(|i| ladders.iter().map(|l| (l.counts[i] as f64).ln()).sum::<f64>() / r).collect();
    let (a, b) = (window.0, window.1.min(n));
    // δ_k = sup/2^k; only the ratio between rungs matters for the slope
    let xs: Vec<f64> = (a..b).map(|k| (k as f64 + 1.0) * std::f64::consts::LN_2).collect();
    let ys = counts[a..b].to_vec();
    let (slope, intercept, stderr) = super::fit::ols(&xs, &ys);
    DimensionFit { slope, intercept, stderr, points: xs.len(), degenerate: ys.windows(2).all(|w| w[0] == w[1]) }
}
