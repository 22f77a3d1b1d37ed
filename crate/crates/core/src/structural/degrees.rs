use std::collections::BTreeSet;

use super::tree::StructuralTree;

/// `𝒟(Γ) = {1 + #children(i)}`.
pub fn degree_set(tree: &StructuralTree) -> BTreeSet<usize> {
    (1..=tree.k()).map(|i| 1 + tree.children(i).len()).collect()
}

/// Degrees of branch points and leaves occurring in the limiting tree.
pub fn predict_degree_set(tree: &StructuralTree) -> BTreeSet<usize> {
    let mut d = degree_set(tree);
    if d == BTreeSet::from([1, 2]) {
        return BTreeSet::from([1, 2, 3]);
    }
    d.insert(2);
    d
}
