use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fractal::DimensionFit;
use crate::rng::{replica_seed, CounterRng, Domain};

use super::disk::DiskLamination;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaminationModel {
    /// Time counts attempted insertions.
    Recursive,
    /// Time counts insertions.
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Model clock: attempts (recursive) or insertions (homogeneous).
    pub n: u64,
    pub insertions: u64,
    pub mean_height: f64,
    pub max_height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRun {
    pub model: LaminationModel,
    pub k: usize,
    pub seed: u64,
    pub checkpoints: Vec<Checkpoint>,
}

/// Single replica; heights are averaged over `n_eval` uniform points drawn once.
pub fn run_scaling(model: LaminationModel, k: usize, checkpoints: &[u64], n_eval: usize, seed: u64) -> Result<ScalingRun> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints[0] == 0 {
        return Err(invalid("checkpoints must be positive and strictly increasing"));
    }
    let mut disk = DiskLamination::new(k)?;
    let mut rng = CounterRng::from_seed(seed, Domain::Lamination);
    let mut eval_rng = CounterRng::from_seed(seed ^ 0xE7A1, Domain::Sampling);
    let points: Vec<f64> = (0..n_eval).map(|_| eval_rng.random()).collect();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut clock = 0u64;
    for &target in checkpoints {
        while clock < target {
            match model {
                LaminationModel::Recursive => {
                    disk.attempt_recursive(&mut rng);
                }
                LaminationModel::Homogeneous => disk.insert_homogeneous(&mut rng),
            }
            clock += 1;
        }
        let heights: Vec<u32> = points.iter().map(|&s| disk.depth_at(s)).collect();
        out.push(Checkpoint {
            n: clock,
            insertions: disk.insertions(),
            mean_height: heights.iter().map(|&h| h as f64).sum::<f64>() / n_eval.max(1) as f64,
            max_height: heights.iter().copied().max().unwrap_or(0),
        });
    }
    Ok(ScalingRun { model, k, seed, checkpoints: out })
}

/// Replica-averaged checkpoints and log-log fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub model: LaminationModel,
    pub k: usize,
    pub replicas: usize,
    pub n: Vec<u64>,
    pub mean_insertions: Vec<f64>,
    pub mean_height: Vec<f64>,
    pub height_fit: DimensionFit,
    /// Exponent of `N_n` against the attempt clock (recursive model).
    pub count_fit: Option<DimensionFit>,
    /// Height against the insertion count.
    pub height_vs_insertions: DimensionFit,
    /// `mean height / n^{slope}` at the last checkpoint.
    pub height_prefactor: f64,
    pub count_prefactor: Option<f64>,
}

fn loglog(xs: &[f64], ys: &[f64]) -> DimensionFit {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept, stderr) = crate::fractal::fit::ols(&lx, &ly);
    DimensionFit { slope, intercept, stderr, points: xs.len(), degenerate: ly.windows(2).all(|w| w[0] == w[1]) }
}

/// Runs `replicas` independent replicas and fits exponents over checkpoints
/// with `n >= fit_from`.
pub fn run_batch(
    model: LaminationModel,
    k: usize,
    checkpoints: &[u64],
    n_eval: usize,
    seed: u64,
    replicas: usize,
    fit_from: u64,
) -> Result<(ScalingSummary, Vec<ScalingRun>)> {
    if replicas == 0 {
        return Err(invalid("need at least one replica"));
    }
    let runs = (0..replicas as u64)
        .into_par_iter()
        .map(|r| run_scaling(model, k, checkpoints, n_eval, replica_seed(seed, r)))
        .collect::<Result<Vec<_>>>()?;
    let nc = checkpoints.len();
    let rf = replicas as f64;
    let mean_height: Vec<f64> = (0..nc).map(|c| runs.iter().map(|r| r.checkpoints[c].mean_height).sum::<f64>() / rf).collect();
    let mean_insertions: Vec<f64> =
        (0..nc).map(|c| runs.iter().map(|r| r.checkpoints[c].insertions as f64).sum::<f64>() / rf).collect();
    let n: Vec<u64> = checkpoints.to_vec();
    let sel: Vec<usize> = (0..nc).filter(|&c| n[c] >= fit_from && mean_height[c] > 0.0).collect();
    let pick = |v: &[f64]| sel.iter().map(|&c| v[c]).collect::<Vec<f64>>();
    let nf: Vec<f64> = n.iter().map(|&x| x as f64).collect();
    let height_fit = loglog(&pick(&nf), &pick(&mean_height));
    let height_vs_insertions = loglog(&pick(&mean_insertions), &pick(&mean_height));
    let (count_fit, count_prefactor) = if model == LaminationModel::Recursive {
        let f = loglog(&pick(&nf), &pick(&mean_insertions));
        let p = mean_insertions[nc - 1] / nf[nc - 1].powf(f.slope);
        (Some(f), Some(p))
    } else {
        (None, None)
    };
    let height_prefactor = mean_height[nc - 1] / nf[nc - 1].powf(height_fit.slope);
    Ok((
        ScalingSummary {
            model,
            k,
            replicas,
            n,
            mean_insertions,
            mean_height,
            height_fit,
            count_fit,
            height_vs_insertions,
            height_prefactor,
            count_prefactor,
        },
        runs,
    ))
}

/// Geometric checkpoint schedule `lo, lo·r, …` up to `hi` (inclusive).
pub fn geometric_checkpoints(lo: u64, hi: u64, per_decade: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let ratio = 10f64.powf(1.0 / per_decade as f64);
    let mut x = lo as f64;
    while x.round() as u64 <= hi {
        let v = x.round() as u64;
        if out.last() != Some(&v) {
            out.push(v);
        }
        x *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}
