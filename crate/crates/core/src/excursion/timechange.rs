use crate::rng::NodeKey;

use super::lazy::LazyEvaluator;
use super::params::{pull_back, ParameterTree};

/// Increasing piecewise-linear distribution function on `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    breaks: Vec<f64>,
    cum: Vec<f64>,
}

impl TimeChange {
    /// From values at the grid `k/m`.
    pub fn from_grid(values: Vec<f64>) -> Self {
        let m = values.len() - 1;
        TimeChange { breaks: (0..=m).map(|k| k as f64 / m as f64).collect(), cum: values }
    }

    pub fn n_breaks(&self) -> usize {
        self.breaks.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let i = self.breaks.partition_point(|&b| b <= t);
        if i == 0 {
            return self.cum[0];
        }
        if i == self.breaks.len() {
            return *self.cum.last().unwrap();
        }
        let (a, b) = (self.breaks[i - 1], self.breaks[i]);
        let w = if b > a { (t - a) / (b - a) } else { 1.0 };
        self.cum[i - 1] + w * (self.cum[i] - self.cum[i - 1])
    }

    /// Generalized inverse `inf{t : τ(t) >= u}`.
    pub fn inverse(&self, u: f64) -> f64 {
        let i = self.cum.partition_point(|&c| c < u);
        if i == 0 {
            return self.breaks[0];
        }
        if i == self.cum.len() {
            return *self.breaks.last().unwrap();
        }
        let (ca, cb) = (self.cum[i - 1], self.cum[i]);
        let w = if cb > ca { (u - ca) / (cb - ca) } else { 0.0 };
        self.breaks[i - 1] + w * (self.breaks[i] - self.breaks[i - 1])
    }

    pub fn grid(&self, m: usize) -> Vec<f64> {
        (0..=m).map(|k| self.eval(k as f64 / m as f64)).collect()
    }

    /// `τ`-mass of a finite union of intervals.
    pub fn mass(&self, pieces: &[(f64, f64)]) -> f64 {
        pieces.iter().map(|&(a, b)| self.eval(b) - self.eval(a)).sum()
    }
}

/// `τ_n` from the explicit partition into the nested sets `Λ_σ`, `σ ∈ Θ_n`,
/// with mass `𝒱(σ)` spread uniformly on each.
pub fn time_change(pt: &ParameterTree, n: usize) -> TimeChange {
    let mut cells = Vec::new();
    collect(pt, pt.root_key(), vec![(0.0, 1.0)], 1.0, n, &mut cells);
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut breaks = Vec::with_capacity(2 * cells.len() + 1);
    let mut cum = Vec::with_capacity(2 * cells.len() + 1);
    breaks.push(0.0);
    cum.push(0.0);
    let mut acc = 0.0;
    // both ends of every cell become breaks, so τ(b) − τ(a) on a cell is its
    // assigned mass up to summation rounding, whatever the rounding of the
    // neighbouring endpoints
    for (a, b, mass) in cells {
        let last = *breaks.last().unwrap();
        if a > last {
            breaks.push(a);
            cum.push(acc);
        }
        acc += mass;
        breaks.push(b.max(a.max(last)));
        cum.push(acc);
    }
    TimeChange { breaks, cum }
}

fn collect(pt: &ParameterTree, key: NodeKey, pieces: Vec<(f64, f64)>, v: f64, d: usize, cells: &mut Vec<(f64, f64, f64)>) {
    if d == 0 {
        let len: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        let n = pieces.len() as f64;
        cells.extend(pieces.into_iter().map(|(a, b)| {
            let share = if len > 0.0 { (b - a) / len } else { 1.0 / n };
            (a, b, v * share)
        }));
        return;
    }
    let p = pt.params_at_key(key);
    for j in 1..=pt.spec.k() {
        let sub = pull_back(&pieces, &p.layout.pieces(pt.tree(), j));
        collect(pt, key.child(j), sub, v * p.r[j - 1], d - 1, cells);
    }
}

/// `τ_n` on the grid `k/m` by the recursive distribution-function route.
pub fn time_change_lazy(pt: &ParameterTree, n: usize, m: usize) -> TimeChange {
    let ts: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
    TimeChange::from_grid(LazyEvaluator::time_change(pt, n).eval_many(&ts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    #[test]
    fn two_routes_agree() {
        for preset in [Preset::Crt, Preset::HomogeneousH, Preset::KgonHomogeneous(3)] {
            let pt = ParameterTree::new(preset.spec().unwrap(), 21);
            let exact = time_change(&pt, 5);
            let lazy = time_change_lazy(&pt, 5, 512);
            for (k, v) in lazy.grid(512).iter().enumerate() {
                assert!((exact.eval(k as f64 / 512.0) - v).abs() < 1e-12, "{preset} at {k}");
            }
        }
    }

    #[test]
    fn masses_on_nested_sets() {
        let pt = ParameterTree::new(Preset::HomogeneousH.spec().unwrap(), 8);
        let tau = time_change(&pt, 6);
        for d in 0..=6 {
            for addr in pt.addresses(d) {
                let (v, _) = pt.weights(&addr);
                assert!((tau.mass(&pt.nested_set(&addr)) - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_is_right_inverse() {
        let pt = ParameterTree::new(Preset::HomogeneousH.spec().unwrap(), 8);
        let tau = time_change(&pt, 4);
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            assert!((tau.eval(tau.inverse(u)) - u).abs() < 1e-12);
        }
    }
}
