use rand::Rng;

use crate::rng::{CounterRng, Domain};
use crate::structural::{pick_node, DecompositionSpec, StructuralTree};

/// Relative position of the subtrees holding two sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    Same(usize),
    /// `ancestor ∈ E_descendant`.
    Nested { ancestor: usize, descendant: usize },
    /// Neither is an ancestor of the other; `lca = max(E_i ∩ E_j)`.
    Split { lca: usize, first: usize, second: usize },
}

pub fn classify_pair(tree: &StructuralTree, a: usize, b: usize) -> PairCase {
    if a == b {
        return PairCase::Same(a);
    }
    let (i, j) = (a.min(b), a.max(b));
    if tree.ancestors(j).contains(&i) {
        PairCase::Nested { ancestor: i, descendant: j }
    } else {
        PairCase::Split { lca: tree.lca(i, j), first: i, second: j }
    }
}

struct Draw {
    w: Vec<f64>,
    s: Vec<f64>,
}

fn draw<G: Rng + ?Sized>(spec: &DecompositionSpec, rng: &mut G) -> Draw {
    let k = spec.k();
    let (mut r, mut s) = (vec![0.0; k], vec![0.0; k]);
    spec.law.sample(rng, &mut r, &mut s);
    Draw { w: r.iter().map(|x| x.powf(spec.alpha)).collect(), s }
}

fn height<G: Rng + ?Sized>(spec: &DecompositionSpec, d: usize, rng: &mut G) -> f64 {
    if d == 0 {
        return spec.c;
    }
    let x = draw(spec, rng);
    let j = pick_node(rng, &x.s);
    let mut acc = 0.0;
    for &i in spec.tree.ancestors(j).iter().chain(std::iter::once(&j)) {
        acc += x.w[i - 1] * height(spec, d - 1, rng);
    }
    acc
}

/// Sum of independent scaled heights over the path from just below `above`
/// down to `node`.
fn path_heights<G: Rng + ?Sized>(spec: &DecompositionSpec, x: &Draw, above: usize, node: usize, d: usize, rng: &mut G) -> f64 {
    let mut acc = 0.0;
    for &k in spec.tree.ancestors(node).iter().chain(std::iter::once(&node)) {
        if k > above {
            acc += x.w[k - 1] * height(spec, d, rng);
        }
    }
    acc
}

fn pair<G: Rng + ?Sized>(spec: &DecompositionSpec, d: usize, rng: &mut G) -> f64 {
    if d == 0 {
        return spec.c;
    }
    let x = draw(spec, rng);
    let a = pick_node(rng, &x.s);
    let b = pick_node(rng, &x.s);
    match classify_pair(&spec.tree, a, b) {
        PairCase::Same(i) => x.w[i - 1] * pair(spec, d - 1, rng),
        PairCase::Nested { ancestor, descendant } => {
            path_heights(spec, &x, ancestor, descendant, d - 1, rng) + x.w[ancestor - 1] * pair(spec, d - 1, rng)
        }
        PairCase::Split { lca, first, second } => {
            path_heights(spec, &x, lca, first, d - 1, rng) + path_heights(spec, &x, lca, second, d - 1, rng)
        }
    }
}

/// Height of a mass-distributed point, from the perpetuity truncated at
/// `depth` levels with leaves set to `c`.
pub fn sample_height_perpetuity(spec: &DecompositionSpec, depth: usize, seed: u64) -> f64 {
    let mut rng = CounterRng::from_seed(seed, Domain::Perpetuity);
    height(spec, depth, &mut rng)
}

/// Distance between two independent mass-distributed points, truncated at
/// `depth` with `D_0 = c`; height terms use the remaining depth.
pub fn sample_pair_distance(spec: &DecompositionSpec, depth: usize, seed: u64) -> f64 {
    let mut rng = CounterRng::from_seed(seed ^ 0x5151_5151, Domain::Perpetuity);
    pair(spec, depth, &mut rng)
}
