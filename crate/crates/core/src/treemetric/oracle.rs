use crate::excursion::GridExcursion;

/// `d_f(x, y) = f(x) + f(y) - 2 min_{[x∧y, x∨y]} f` between grid indices,
/// with range minima from a sparse table.
#[derive(Debug, Clone)]
pub struct DistanceOracle {
    values: Vec<f64>,
    levels: Vec<Vec<f64>>,
}

impl DistanceOracle {
    pub fn new(f: &GridExcursion) -> Self {
        Self::from_values(f.values().to_vec())
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len();
        let mut levels = vec![values.clone()];
        let mut span = 1;
        while 2 * span <= n {
            let prev = levels.last().unwrap();
            let next: Vec<f64> = (0..=n - 2 * span).map(|i| prev[i].min(prev[i + span])).collect();
            levels.push(next);
            span *= 2;
        }
        DistanceOracle { values, levels }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Minimum of `f` over indices `i..=j` (either order).
    #[inline]
    pub fn range_min(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let len = b - a + 1;
        let lvl = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let row = &self.levels[lvl];
        row[a].min(row[b + 1 - (1 << lvl)])
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.values[i] + self.values[j] - 2.0 * self.range_min(i, j)).max(0.0)
    }

    /// Distance from `i` to the point at height `h <= f(i)` on its root path.
    #[inline]
    pub fn distance_to_ancestor(&self, i: usize, h: f64) -> f64 {
        (self.values[i] - h).max(0.0)
    }

    /// Diameter of the tree.
    pub fn diameter(&self) -> f64 {
        // farthest point from the root, then farthest from that one
        let n = self.len();
        let far = (0..n).max_by(|&a, &b| self.distance(0, a).total_cmp(&self.distance(0, b))).unwrap();
        (0..n).map(|j| self.distance(far, j)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn metric_axioms(vals in prop::collection::vec(0.0f64..5.0, 2..64), picks in prop::collection::vec(0usize..1000, 3)) {
            let mut v = vals;
            v[0] = 0.0;
            let n = v.len();
            let o = DistanceOracle::from_values(v.clone());
            let (x, y, z) = (picks[0] % n, picks[1] % n, picks[2] % n);
            // brute-force minima
            let bm = |a: usize, b: usize| v[a.min(b)..=a.max(b)].iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert_eq!(o.range_min(x, y), bm(x, y));
            prop_assert_eq!(o.distance(x, x), 0.0);
            prop_assert_eq!(o.distance(x, y), o.distance(y, x));
            prop_assert!(o.distance(x, z) <= o.distance(x, y) + o.distance(y, z) + 1e-12);
            // four-point condition
            let w = (x + y + z) % n;
            let s1 = o.distance(x, y) + o.distance(z, w);
            let s2 = o.distance(x, z) + o.distance(y, w);
            let s3 = o.distance(x, w) + o.distance(y, z);
            let mut s = [s1, s2, s3];
            s.sort_by(f64::total_cmp);
            prop_assert!((s[2] - s[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn tent_distances() {
        let o = DistanceOracle::from_values(vec![0.0, 1.0, 2.0, 1.0, 0.0]);
        assert_eq!(o.distance(1, 3), 0.0);
        assert_eq!(o.distance(0, 2), 2.0);
        assert_eq!(o.diameter(), 2.0);
        let w = DistanceOracle::from_values(vec![0.0, 2.0, 1.0, 3.0, 0.0]);
        assert_eq!(w.distance(1, 3), 3.0);
    }
}
