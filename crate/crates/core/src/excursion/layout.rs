use smallvec::SmallVec;

use crate::structural::{Piece, StructuralTree};

use super::grid::GridExcursion;

/// Decomposition of `[0,1]` into `L` intervals `I_1, …, I_L` (right-closed,
/// `I_1 = [0, ends[0]]`).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalLayout {
    /// Right endpoints; the last one is exactly 1.
    pub ends: SmallVec<[f64; 16]>,
}

/// Layout for mass vector `s` and split proportions `u` (both 0-based by node).
pub fn interval_layout(tree: &StructuralTree, s: &[f64], u: &[f64]) -> IntervalLayout {
    let mut ends = SmallVec::with_capacity(tree.n_intervals());
    let mut acc = 0.0;
    for &(i, piece) in tree.layout() {
        acc += match piece {
            Piece::Leaf => s[i - 1],
            Piece::First => u[i - 1] * s[i - 1],
            Piece::Second => (1.0 - u[i - 1]) * s[i - 1],
        };
        ends.push(acc);
    }
    *ends.last_mut().unwrap() = 1.0;
    IntervalLayout { ends }
}

impl IntervalLayout {
    #[inline]
    pub fn start(&self, l: usize) -> f64 {
        if l == 0 {
            0.0
        } else {
            self.ends[l - 1]
        }
    }

    /// Slot containing `t`, with right-closed intervals.
    #[inline]
    pub fn locate(&self, t: f64) -> usize {
        let last = self.ends.len() - 1;
        self.ends[..last].iter().position(|&e| t <= e).unwrap_or(last)
    }

    /// `φ_i(t)` for `t` in slot `l`.
    #[inline]
    pub fn local(&self, tree: &StructuralTree, s: &[f64], u: &[f64], l: usize, t: f64) -> f64 {
        let (i, piece) = tree.layout()[l];
        let x = (t - self.start(l)) / s[i - 1];
        let x = if piece == Piece::Second { u[i - 1] + x } else { x };
        x.clamp(0.0, 1.0)
    }

    /// Pieces of `Λ_i` in increasing order.
    pub fn pieces(&self, tree: &StructuralTree, i: usize) -> Vec<(f64, f64)> {
        let (a, b) = tree.positions(i);
        std::iter::once(a)
            .chain(b)
            .map(|p| (self.start(p - 1), self.ends[p - 1]))
            .collect()
    }
}

/// `Φ(f_1, …, f_K, r, s, u)` evaluated on the grid of `fs[0]`, children read
/// by linear interpolation.
pub fn compose_excursions(
    tree: &StructuralTree,
    fs: &[GridExcursion],
    r: &[f64],
    s: &[f64],
    u: &[f64],
    alpha: f64,
) -> GridExcursion {
    let m = fs[0].m();
    let lay = interval_layout(tree, s, u);
    let w: Vec<f64> = r.iter().map(|x| x.powf(alpha)).collect();
    let anchor: Vec<f64> = (1..=tree.k()).map(|j| w[j - 1] * fs[j - 1].interpolate(u[j - 1])).collect();
    let mut values = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let t = k as f64 / m as f64;
        let l = lay.locate(t);
        let i = tree.layout()[l].0;
        let x = lay.local(tree, s, u, l, t);
        let v = w[i - 1] * fs[i - 1].interpolate(x) + tree.ancestors(i).iter().map(|&j| anchor[j - 1]).sum::<f64>();
        values.push(v);
    }
    values[0] = 0.0;
    values[m] = 0.0;
    GridExcursion::new(values)
}
