use serde::{Deserialize, Serialize};

use crate::treemetric::DistanceOracle;

/// Minimal number of grid points `0 = t_0 < … < t_{M-1} = 1` such that `f`
/// oscillates by at most `delta` on each `[t_i, t_{i+1}]`, counting both
/// endpoints. Greedy farthest advance is optimal: any valid sequence has its
/// `i`-th point no further right than the greedy one.
pub fn divider_count(values: &[f64], delta: f64) -> usize {
    let last = values.len() - 1;
    let mut count = 1;
    let mut i = 0;
    while i < last {
        let (mut lo, mut hi) = (values[i], values[i]);
        let mut j = i;
        while j < last {
            let v = values[j + 1];
            if hi.max(v) - lo.min(v) > delta {
                break;
            }
            lo = lo.min(v);
            hi = hi.max(v);
            j += 1;
        }
        // a single grid step wider than delta still has to be taken
        i = if j == i { i + 1 } else { j };
        count += 1;
    }
    count
}

/// Minimal number of closed `delta`-balls in the tree covering all grid
/// points: repeatedly take the highest uncovered point `v` and centre a ball
/// on its root path at height `max(f(v) - delta, 0)`.
pub fn covering_count(oracle: &DistanceOracle, delta: f64) -> usize {
    let n = oracle.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| oracle.value(b).total_cmp(&oracle.value(a)).then(a.cmp(&b)));
    let mut covered = vec![false; n];
    let mut balls = 0;
    for v in order {
        if covered[v] {
            continue;
        }
        balls += 1;
        let h = (oracle.value(v) - delta).max(0.0);
        let mut mark = |w: usize, mr: f64| -> bool {
            // distances are at least h - mr beyond this point
            if h - mr > delta {
                return false;
            }
            let d = oracle.value(w) + h - 2.0 * h.min(mr);
            if d <= delta * (1.0 + 1e-12) {
                covered[w] = true;
            }
            true
        };
        let mut mr = oracle.value(v);
        for w in v..n {
            mr = mr.min(oracle.value(w));
            if !mark(w, mr) {
                break;
            }
        }
        let mut mr = oracle.value(v);
        for w in (0..v).rev() {
            mr = mr.min(oracle.value(w));
            if !mark(w, mr) {
                break;
            }
        }
    }
    balls
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Divider,
    Covering,
}

/// Counts along a decreasing sequence of scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountLadder {
    pub kind: CountKind,
    pub deltas: Vec<f64>,
    pub counts: Vec<usize>,
}

/// `sup f / 2^k`, `k = 1..=steps`.
pub fn dyadic_deltas(values: &[f64], steps: usize) -> Vec<f64> {
    let sup = values.iter().cloned().fold(0.0, f64::max);
    (1..=steps).map(|k| sup / f64::powi(2.0, k as i32)).collect()
}

pub fn count_ladder(values: &[f64], deltas: &[f64], kind: CountKind) -> CountLadder {
    let counts = match kind {
        CountKind::Divider => deltas.iter().map(|&d| divider_count(values, d)).collect(),
        CountKind::Covering => {
            let o = DistanceOracle::from_values(values.to_vec());
            deltas.iter().map(|&d| covering_count(&o, d)).collect()
        }
    };
    CountLadder { kind, deltas: deltas.to_vec(), counts }
}
