use rand::Rng;

use crate::rng::{CounterRng, Domain};

use super::oracle::DistanceOracle;

/// Pairwise distances between the root (index 0) and `n` sampled points.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub size: usize,
    pub entries: Vec<f64>,
    /// Grid indices of the points, root first.
    pub indices: Vec<usize>,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }
}

/// Root plus `n` independent points with grid index `round(U m)`.
pub fn sample_distance_matrix(oracle: &DistanceOracle, n: usize, seed: u64) -> DistanceMatrix {
    let m = oracle.len() - 1;
    let mut rng = CounterRng::from_seed(seed, Domain::Sampling);
    let mut indices = vec![0];
    indices.extend((0..n).map(|_| (rng.random::<f64>() * m as f64).round() as usize));
    let size = n + 1;
    let mut entries = vec![0.0; size * size];
    for a in 0..size {
        for b in a + 1..size {
            let d = oracle.distance(indices[a], indices[b]);
            entries[a * size + b] = d;
            entries[b * size + a] = d;
        }
    }
    DistanceMatrix { size, entries, indices }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_row_is_height() {
        let o = DistanceOracle::from_values((0..=100).map(|k| (k as f64 / 100.0 * 3.0).sin().abs()).collect());
        let dm = sample_distance_matrix(&o, 8, 2);
        for i in 1..dm.size {
            assert_eq!(dm.get(0, i), o.value(dm.indices[i]));
            assert_eq!(dm.get(i, i), 0.0);
        }
    }
}
