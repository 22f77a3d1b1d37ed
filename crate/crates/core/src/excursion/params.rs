use smallvec::{smallvec, SmallVec};

use crate::rng::{Domain, NodeKey};
use crate::structural::{DecompositionSpec, StructuralTree};

use super::grid::BaseProfile;
use super::layout::{interval_layout, IntervalLayout};

/// Address in the infinite `K`-ary tree: a word over `1..=K`.
pub type Address = Vec<usize>;

/// Per-node vectors; inline for the usual small `K`.
pub type NodeVec = SmallVec<[f64; 8]>;

/// `(R, S, Ξ)` at one address together with derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeParams {
    pub r: NodeVec,
    pub s: NodeVec,
    pub xi: NodeVec,
    /// `R_i^α`
    pub w: NodeVec,
    pub layout: IntervalLayout,
}

impl NodeParams {
    #[inline]
    pub fn locate(&self, t: f64) -> usize {
        self.layout.locate(t)
    }

    #[inline]
    pub fn local(&self, tree: &StructuralTree, l: usize, t: f64) -> f64 {
        self.layout.local(tree, &self.s, &self.xi, l, t)
    }
}

/// Seed-deterministic parameters on all addresses; entries are recomputed on
/// demand from the counter-based stream of each address, so the tree is
/// immutable and freely shared between threads.
#[derive(Debug, Clone)]
pub struct ParameterTree {
    pub spec: DecompositionSpec,
    pub seed: u64,
    pub base: BaseProfile,
}

impl ParameterTree {
    pub fn new(spec: DecompositionSpec, seed: u64) -> Self {
        ParameterTree { spec, seed, base: BaseProfile::default() }
    }

    pub fn with_base(mut self, base: BaseProfile) -> Self {
        self.base = base;
        self
    }

    pub fn tree(&self) -> &StructuralTree {
        &self.spec.tree
    }

    pub fn root_key(&self) -> NodeKey {
        NodeKey::root(self.seed, Domain::Params)
    }

    pub fn key(&self, address: &[usize]) -> NodeKey {
        NodeKey::from_address(self.seed, Domain::Params, address)
    }

    pub fn params_at_key(&self, key: NodeKey) -> NodeParams {
        use rand::Rng;
        let k = self.spec.k();
        let mut rng = key.stream();
        let (mut r, mut s): (NodeVec, NodeVec) = (smallvec![0.0; k], smallvec![0.0; k]);
        self.spec.law.sample(&mut rng, &mut r, &mut s);
        let xi: NodeVec = (0..k)
            .map(|_| loop {
                let u: f64 = rng.random();
                if u > 0.0 {
                    break u;
                }
            })
            .collect();
        let w = r.iter().map(|x| x.powf(self.spec.alpha)).collect();
        let layout = interval_layout(&self.spec.tree, &s, &xi);
        NodeParams { r, s, xi, w, layout }
    }

    pub fn params(&self, address: &[usize]) -> NodeParams {
        self.params_at_key(self.key(address))
    }

    /// `(𝒱(ϑ), ℒ(ϑ))`: products of `R` and `S` along the path to `ϑ`.
    pub fn weights(&self, address: &[usize]) -> (f64, f64) {
        let (mut v, mut l) = (1.0, 1.0);
        let mut key = self.root_key();
        for &j in address {
            let p = self.params_at_key(key);
            v *= p.r[j - 1];
            l *= p.s[j - 1];
            key = key.child(j);
        }
        (v, l)
    }

    /// Pieces of `Λ_σ` (nested sets) in root coordinates.
    pub fn nested_set(&self, address: &[usize]) -> Vec<(f64, f64)> {
        let mut pieces = vec![(0.0, 1.0)];
        let mut key = self.root_key();
        for &j in address {
            let p = self.params_at_key(key);
            let local = p.layout.pieces(self.tree(), j);
            pieces = pull_back(&pieces, &local);
            key = key.child(j);
        }
        pieces
    }

    /// All addresses of length `n`, in lexicographic order.
    pub fn addresses(&self, n: usize) -> Vec<Address> {
        let k = self.spec.k();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|a| {
                    (1..=k).map(move |j| {
                        let mut b = a.clone();
                        b.push(j);
                        b
                    })
                })
                .collect();
        }
        out
    }
}

/// Preimage of local intervals (subsets of `[0,1]`) under the increasing
/// piecewise-linear bijection from `pieces` onto `[0,1]`.
pub(crate) fn pull_back(pieces: &[(f64, f64)], local: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    let mut out = Vec::new();
    for &(lo, hi) in local {
        let (lo, hi) = (lo * total, hi * total);
        let mut offset = 0.0;
        for &(a, b) in pieces {
            let len = b - a;
            let x = lo.max(offset);
            let y = hi.min(offset + len);
            if y > x {
                out.push((a + (x - offset), a + (y - offset)));
            }
            offset += len;
        }
    }
    merge_adjacent(out)
}

fn merge_adjacent(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if (a - last.1).abs() <= 1e-15 => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}
