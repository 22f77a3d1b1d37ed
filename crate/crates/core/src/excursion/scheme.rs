use crate::error::{invalid, Error, Result};
use crate::rng::NodeKey;

use super::grid::GridExcursion;
use super::layout::compose_excursions;
use super::lazy::LazyEvaluator;
use super::params::ParameterTree;

/// Largest number of composed nodes the bottom-up scheme will build.
pub const DEFAULT_NODE_BUDGET: u128 = 1 << 22;

/// `Q_n` on the grid `k/m`, built bottom-up over all `K^n` addresses with
/// children read by interpolation.
pub fn iterate_scheme(pt: &ParameterTree, n: usize, m: usize, budget: u128) -> Result<GridExcursion> {
    if m < 2 {
        return Err(invalid("grid needs m >= 2"));
    }
    let k = pt.spec.k() as u128;
    let needed = (0..=n as u32).try_fold(0u128, |acc, e| k.checked_pow(e).map(|p| acc.saturating_add(p)));
    let needed = needed.unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(build(pt, pt.root_key(), n, m))
}

fn build(pt: &ParameterTree, key: NodeKey, d: usize, m: usize) -> GridExcursion {
    if d == 0 {
        let c = pt.spec.c;
        return GridExcursion::from_fn(m, |t| pt.base.eval(c, t));
    }
    let p = pt.params_at_key(key);
    let kids: Vec<GridExcursion> = (1..=pt.spec.k()).map(|j| build(pt, key.child(j), d - 1, m)).collect();
    compose_excursions(pt.tree(), &kids, &p.r, &p.s, &p.xi, pt.spec.alpha)
}

/// `Q_n(t)` at a single point.
pub fn evaluate_lazy(pt: &ParameterTree, n: usize, t: f64) -> f64 {
    LazyEvaluator::excursion(pt, n).eval(t)
}

/// `Q_n` on the grid `k/m` by lazy descent, exact up to rounding.
pub fn evaluate_grid(pt: &ParameterTree, n: usize, m: usize) -> GridExcursion {
    let ts: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
    let mut v = LazyEvaluator::excursion(pt, n).eval_many(&ts);
    v[0] = 0.0;
    v[m] = 0.0;
    GridExcursion::new(v)
}
