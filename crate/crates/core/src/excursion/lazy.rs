use smallvec::{smallvec, SmallVec};

use crate::rng::NodeKey;

use super::params::{NodeParams, ParameterTree};

/// Anchor values `Q^{ϑj}(ξ^ϑ_j)` of one node, filled on first use.
type AnchorCache = SmallVec<[Option<f64>; 8]>;

/// Evaluates `Q_n` (or the time change `τ_n`) at arbitrary points by
/// descending the nested sets from the root. Anchor values are computed once
/// per visited node and shared between its slots.
pub struct LazyEvaluator<'a> {
    pt: &'a ParameterTree,
    depth: usize,
    distribution: bool,
}

impl<'a> LazyEvaluator<'a> {
    pub fn excursion(pt: &'a ParameterTree, depth: usize) -> Self {
        LazyEvaluator { pt, depth, distribution: false }
    }

    /// Distribution-function mode: weights `R_j`, base `τ_0(t) = t`, and
    /// completed earlier nodes contribute their full weight.
    pub fn time_change(pt: &'a ParameterTree, depth: usize) -> Self {
        LazyEvaluator { pt, depth, distribution: true }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    fn weight(&self, p: &NodeParams, j: usize) -> f64 {
        if self.distribution {
            p.r[j - 1]
        } else {
            p.w[j - 1]
        }
    }

    #[inline]
    fn base(&self, t: f64) -> f64 {
        if self.distribution {
            t.clamp(0.0, 1.0)
        } else {
            self.pt.base.eval(self.pt.spec.c, t)
        }
    }

    /// Additive constant for points in slot `l` of a node with parameters `p`.
    fn offset(&self, key: NodeKey, p: &NodeParams, l: usize, d: usize, cache: &mut AnchorCache) -> f64 {
        let tree = self.pt.tree();
        let i = tree.layout()[l].0;
        let mut acc = 0.0;
        for &j in tree.ancestors(i) {
            let a = match cache[j - 1] {
                Some(v) => v,
                None => {
                    let v = self.eval_from(key.child(j), d - 1, p.xi[j - 1]);
                    cache[j - 1] = Some(v);
                    v
                }
            };
            acc += self.weight(p, j) * a;
        }
        if self.distribution {
            for &j in tree.completed_before(l) {
                acc += p.r[j - 1];
            }
        }
        acc
    }

    fn eval_from(&self, mut key: NodeKey, d: usize, mut t: f64) -> f64 {
        let (mut acc, mut scale) = (0.0, 1.0);
        let k = self.pt.spec.k();
        for level in 0..d {
            let p = self.pt.params_at_key(key);
            let l = p.locate(t);
            let i = self.pt.tree().layout()[l].0;
            let mut cache: AnchorCache = smallvec![None; k];
            acc += scale * self.offset(key, &p, l, d - level, &mut cache);
            scale *= self.weight(&p, i);
            t = p.local(self.pt.tree(), l, t);
            key = key.child(i);
        }
        acc + scale * self.base(t)
    }

    /// Value at `t` for the root address.
    pub fn eval(&mut self, t: f64) -> f64 {
        let root = self.pt.root_key();
        self.eval_from(root, self.depth, t)
    }

    /// Values at many points; nodes on shared paths are expanded once.
    pub fn eval_many(&mut self, ts: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; ts.len()];
        let pts: Vec<(usize, f64)> = ts.iter().copied().enumerate().collect();
        let root = self.pt.root_key();
        self.batch(root, self.depth, 1.0, 0.0, pts, &mut out);
        out
    }

    fn batch(&self, key: NodeKey, d: usize, scale: f64, offset: f64, pts: Vec<(usize, f64)>, out: &mut [f64]) {
        if d == 0 {
            for (idx, t) in pts {
                out[idx] = offset + scale * self.base(t);
            }
            return;
        }
        let p = self.pt.params_at_key(key);
        let tree = self.pt.tree();
        let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); tree.n_intervals()];
        for (idx, t) in pts {
            let l = p.locate(t);
            groups[l].push((idx, p.local(tree, l, t)));
        }
        let mut cache: AnchorCache = smallvec![None; tree.k()];
        for (l, g) in groups.into_iter().enumerate() {
            if g.is_empty() {
                continue;
            }
            let i = self.pt.tree().layout()[l].0;
            let add = self.offset(key, &p, l, d, &mut cache);
            let w = self.weight(&p, i);
            self.batch(key.child(i), d - 1, scale * w, offset + scale * add, g, out);
        }
    }
}
