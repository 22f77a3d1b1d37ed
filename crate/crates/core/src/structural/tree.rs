use crate::error::{Error, Result};

/// Which of the (at most two) intervals of a node a layout slot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    /// The only interval of a leaf.
    Leaf,
    /// First interval of an internal node, before all descendants.
    First,
    /// Second interval of an internal node, after all descendants.
    Second,
}

/// Finite rooted plane tree on labels `1..=K` in depth-first order.
///
/// Per-node tables are indexed by label; slot 0 is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralTree {
    k: usize,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    ancestors: Vec<Vec<usize>>,
    size: Vec<usize>,
    leaves_below: Vec<usize>,
    /// `layout[l]` = owner and piece of interval `I_{l+1}`.
    layout: Vec<(usize, Piece)>,
    /// 1-based positions `V_i`.
    positions: Vec<(usize, Option<usize>)>,
    /// Nodes whose intervals all precede slot `l`.
    completed: Vec<Vec<usize>>,
}

/// Builds the tree from `parents[i] = ϖ_{i+2}` (1-based labels).
pub fn build_structural_tree(parents: &[usize]) -> Result<StructuralTree> {
    if parents.is_empty() {
        return Err(Error::InvalidTree("need at least two nodes".into()));
    }
    let k = parents.len() + 1;
    let mut parent = vec![0; k + 1];
    let mut children = vec![Vec::new(); k + 1];
    let mut ancestors: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for (idx, &p) in parents.iter().enumerate() {
        let node = idx + 2;
        if p == 0 || p >= node {
            return Err(Error::InvalidTree(format!(
                "parent of node {node} is {p}; must lie in 1..={}",
                node - 1
            )));
        }
        // depth-first labels: the parent must sit on the path from the root to node-1
        let prev = node - 1;
        if p != prev && !ancestors[prev].contains(&p) {
            return Err(Error::InvalidTree(format!(
                "parent of node {node} is {p}, which is not on the path to node {prev}; labels must be depth-first"
            )));
        }
        parent[node] = p;
        children[p].push(node);
        let mut anc = ancestors[p].clone();
        anc.push(p);
        ancestors[node] = anc;
    }

    let mut size = vec![1; k + 1];
    let mut leaves_below = vec![0; k + 1];
    for i in (1..=k).rev() {
        if children[i].is_empty() {
            leaves_below[i] = 1;
        }
        if i > 1 {
            size[parent[i]] += size[i];
            leaves_below[parent[i]] += leaves_below[i];
        }
    }
    let n_leaves = leaves_below[1];
    let l = 2 * k - n_leaves;

    let is_leaf = |j: usize| children[j].is_empty();
    let mut layout = vec![(0usize, Piece::Leaf); l];
    let mut positions = vec![(0, None); k + 1];
    for i in 1..=k {
        let v = i + (1..i).filter(|&j| !ancestors[i].contains(&j) && !is_leaf(j)).count();
        if is_leaf(i) {
            layout[v - 1] = (i, Piece::Leaf);
            positions[i] = (v, None);
        } else {
            let w = v + 2 * size[i] - leaves_below[i] - 1;
            layout[v - 1] = (i, Piece::First);
            layout[w - 1] = (i, Piece::Second);
            positions[i] = (v, Some(w));
        }
    }
    debug_assert!(layout.iter().all(|&(i, _)| i != 0));

    let last_slot = |i: usize| positions[i].1.unwrap_or(positions[i].0);
    let completed = (1..=l)
        .map(|pos| (1..=k).filter(|&j| last_slot(j) < pos).collect())
        .collect();

    Ok(StructuralTree { k, parent, children, ancestors, size, leaves_below, layout, positions, completed })
}

impl StructuralTree {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Parent list in the input convention.
    pub fn parents(&self) -> Vec<usize> {
        self.parent[2..].to_vec()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        (i > 1).then(|| self.parent[i])
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// `E_i`: strict ancestors of `i`, increasing.
    pub fn ancestors(&self, i: usize) -> &[usize] {
        &self.ancestors[i]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (1..=self.k).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn internal_nodes(&self) -> Vec<usize> {
        (1..=self.k).filter(|&i| !self.is_leaf(i)).collect()
    }

    /// `|Γ_i|`
    pub fn subtree_size(&self, i: usize) -> usize {
        self.size[i]
    }

    /// `|∂Γ_i|`
    pub fn subtree_leaves(&self, i: usize) -> usize {
        self.leaves_below[i]
    }

    /// Number of intervals `L = 2K - |∂Γ|`.
    pub fn n_intervals(&self) -> usize {
        self.layout.len()
    }

    pub fn layout(&self) -> &[(usize, Piece)] {
        &self.layout
    }

    /// 1-based slot positions `V_i` (second entry absent for leaves).
    pub fn positions(&self, i: usize) -> (usize, Option<usize>) {
        self.positions[i]
    }

    /// Nodes all of whose intervals precede 0-based slot `l`.
    pub fn completed_before(&self, l: usize) -> &[usize] {
        &self.completed[l]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.ancestors[i].len()
    }

    /// Deepest common ancestor of `i` and `j`, counting a node as its own ancestor.
    pub fn lca(&self, i: usize, j: usize) -> usize {
        let on_path = |a: usize, x: usize| a == x || self.ancestors[x].contains(&a);
        let mut best = 1;
        for &a in self.ancestors[i].iter().chain(std::iter::once(&i)) {
            if on_path(a, j) {
                best = best.max(a);
            }
        }
        best
    }
}
