use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::excursion::TimeChange;
use crate::rng::{CounterRng, Domain};
use crate::treemetric::DistanceOracle;

/// Quantiles of `μ(B(ζ, r)) / r^γ` over random centres `ζ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallMassRow {
    pub radius: f64,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, w) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - w) + sorted[i + 1] * w
    } else {
        sorted[i]
    }
}

/// Centres are `τ^{-1}(U)` snapped to the grid; grid point `k` carries the
/// `τ`-mass of its cell `((k-½)/m, (k+½)/m]`.
pub fn ball_mass_profile(
    oracle: &DistanceOracle,
    tau: &TimeChange,
    radii: &[f64],
    gamma: f64,
    centres: usize,
    seed: u64,
) -> Vec<BallMassRow> {
    let m = oracle.len() - 1;
    let mf = m as f64;
    let weights: Vec<f64> = (0..=m)
        .map(|k| {
            let a = ((k as f64 - 0.5) / mf).max(0.0);
            let b = ((k as f64 + 0.5) / mf).min(1.0);
            tau.eval(b) - tau.eval(a)
        })
        .collect();
    let mut rng = CounterRng::from_seed(seed, Domain::Sampling);
    let zs: Vec<usize> = (0..centres).map(|_| (tau.inverse(rng.random::<f64>()) * mf).round() as usize).collect();
    radii
        .iter()
        .map(|&r| {
            let mut ratios: Vec<f64> = zs.iter().map(|&z| ball_mass(oracle, &weights, z, r) / r.powf(gamma)).collect();
            ratios.sort_by(f64::total_cmp);
            BallMassRow { radius: r, q10: quantile(&ratios, 0.1), median: quantile(&ratios, 0.5), q90: quantile(&ratios, 0.9) }
        })
        .collect()
}

/// Weight of grid points at distance `< r` from `z`.
fn ball_mass(o: &DistanceOracle, weights: &[f64], z: usize, r: f64) -> f64 {
    let fz = o.value(z);
    let mut total = 0.0;
    let mut scan = |range: &mut dyn Iterator<Item = usize>| {
        let mut mr = fz;
        for w in range {
            mr = mr.min(o.value(w));
            if fz - mr >= r {
                break;
            }
            if o.value(w) + fz - 2.0 * mr < r {
                total += weights[w];
            }
        }
    };
    scan(&mut (z..o.len()));
    scan(&mut (0..z).rev());
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_ball_masses() {
        // tent of height 1: the tree is a segment, lebesgue mass, radius r ball has mass ≈ 2r
        let m = 4000;
        let f: Vec<f64> = (0..=m).map(|k| 2.0 * (k as f64 / m as f64).min(1.0 - k as f64 / m as f64)).collect();
        let o = DistanceOracle::from_values(f);
        let tau = TimeChange::from_grid((0..=m).map(|k| k as f64 / m as f64).collect());
        let rows = ball_mass_profile(&o, &tau, &[0.05], 1.0, 200, 1);
        // a ball of radius r on the segment holds at most 2r of the height, which is mass 2r
        assert!(rows[0].q90 <= 2.0 * 1.0 + 0.01);
        assert!(rows[0].q10 >= 1.0 - 0.01);
    }
}
