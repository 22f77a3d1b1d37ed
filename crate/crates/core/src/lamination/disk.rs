use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{invalid, Result};

/// A face of the current decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    /// Trace on the circle: disjoint arcs `[a, b)`, increasing.
    pub arcs: Vec<(f64, f64)>,
    pub essential: bool,
    pub mass: f64,
    /// Neighbour across the chord towards the point 0.
    pub parent: Option<usize>,
    /// Neighbours away from 0, with the left endpoint of the shared chord.
    pub children: Vec<(usize, f64)>,
}

impl Fragment {
    pub fn representative(&self) -> Option<f64> {
        self.arcs.first().map(|(a, b)| 0.5 * (a + b))
    }

    /// Point at arc-length position `x ∈ [0, mass)` of the trace.
    fn at_length(&self, mut x: f64) -> f64 {
        for &(a, b) in &self.arcs {
            if x < b - a {
                return a + x;
            }
            x -= b - a;
        }
        let (a, b) = *self.arcs.last().unwrap();
        a + 0.5 * (b - a)
    }
}

/// Circle `[0,1)` cut by the endpoints of all inserted polygons. Each maximal
/// arc maps to the fragment whose trace contains it.
#[derive(Debug, Clone)]
pub struct DiskLamination {
    k: usize,
    arcs: BTreeMap<u64, usize>,
    fragments: Vec<Fragment>,
    essential: Vec<usize>,
    edges: Vec<(f64, f64)>,
    attempts: u64,
    insertions: u64,
}

#[inline]
fn key(x: f64) -> u64 {
    x.to_bits()
}

impl DiskLamination {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(invalid(format!("polygon size must be at least 2, got {k}")));
        }
        let root = Fragment { arcs: vec![(0.0, 1.0)], essential: true, mass: 1.0, parent: None, children: Vec::new() };
        Ok(DiskLamination {
            k,
            arcs: BTreeMap::from([(key(0.0), 0)]),
            fragments: vec![root],
            essential: vec![0],
            edges: Vec::new(),
            attempts: 0,
            insertions: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    pub fn edges(&self) -> &[(f64, f64)] {
        &self.edges
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn n_essential(&self) -> usize {
        self.essential.len()
    }

    /// Fragment whose trace contains `s ∈ [0,1)`.
    pub fn fragment_at(&self, s: f64) -> usize {
        *self.arcs.range(..=key(s)).next_back().expect("0 is always a boundary").1
    }

    /// Distance to the root in the dual tree, whose root is the fragment
    /// containing 0.
    pub fn depth_of(&self, mut id: usize) -> u32 {
        let mut d = 0;
        while let Some(p) = self.fragments[id].parent {
            d += 1;
            id = p;
        }
        d
    }

    /// Dual-tree depth of the fragment covering `s`.
    pub fn depth_at(&self, s: f64) -> u32 {
        self.depth_of(self.fragment_at(s))
    }

    /// Number of chords `(p, q)` with `p < s < q`, by scanning all edges.
    pub fn brute_depth(&self, s: f64) -> u32 {
        self.edges.iter().filter(|&&(p, q)| p < s && s < q).count() as u32
    }

    /// Pairwise non-crossing check over all chords, `O(E log E)`.
    pub fn is_non_crossing(&self) -> bool {
        // chords are nested or disjoint iff a stack sweep over endpoints balances
        let mut ends: Vec<(f64, bool, usize)> = Vec::with_capacity(2 * self.edges.len());
        for (i, &(p, q)) in self.edges.iter().enumerate() {
            ends.push((p, true, i));
            ends.push((q, false, i));
        }
        ends.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut stack: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < ends.len() {
            // group equal coordinates: closings first, then openings by decreasing length
            let x = ends[i].0;
            let mut j = i;
            while j < ends.len() && ends[j].0 == x {
                j += 1;
            }
            let mut closing: Vec<usize> = ends[i..j].iter().filter(|e| !e.1).map(|e| e.2).collect();
            let mut opening: Vec<usize> = ends[i..j].iter().filter(|e| e.1).map(|e| e.2).collect();
            // among chords closing here, the innermost (latest opened) closes first
            closing.sort_by(|&a, &b| self.edges[b].0.total_cmp(&self.edges[a].0));
            for c in closing {
                match stack.pop() {
                    Some(top) if top == c => {}
                    _ => return false,
                }
            }
            opening.sort_by(|&a, &b| self.edges[b].1.total_cmp(&self.edges[a].1));
            stack.extend(opening);
            i = j;
        }
        stack.is_empty()
    }

    fn snap(&self, mut x: f64) -> f64 {
        // boundary collisions have probability zero; move off them by one ulp
        while x == 0.0 || self.arcs.contains_key(&key(x)) {
            x = x.next_up();
        }
        x
    }

    /// Inserts the polygon on `points` if they all lie in one fragment.
    pub fn try_insert(&mut self, points: &[f64]) -> Result<bool> {
        if points.len() != self.k {
            return Err(invalid(format!("expected {} points, got {}", self.k, points.len())));
        }
        if points.iter().any(|&x| !(0.0..1.0).contains(&x)) {
            return Err(invalid("points must lie in [0,1)"));
        }
        let mut u: Vec<f64> = points.iter().map(|&x| self.snap(x)).collect();
        u.sort_by(f64::total_cmp);
        if u.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
        let f = self.fragment_at(u[0]);
        if u[1..].iter().any(|&x| self.fragment_at(x) != f) {
            return Ok(false);
        }
        self.split(f, &u);
        Ok(true)
    }

    /// Splits fragment `f` by the polygon on sorted points `u`. The part of
    /// the trace outside `[u_1, u_k)` keeps the id and stays on the root side.
    fn split(&mut self, f: usize, u: &[f64]) {
        let k = self.k;
        let old = std::mem::take(&mut self.fragments[f].arcs);
        let old_children = std::mem::take(&mut self.fragments[f].children);
        let slot_of = |x: f64| u.partition_point(|&y| y <= x);

        let mut pieces = Vec::with_capacity(old.len() + k);
        for (a, b) in old {
            let mut start = a;
            for &x in u.iter().filter(|&&x| a < x && x < b) {
                pieces.push((start, x));
                start = x;
            }
            pieces.push((start, b));
        }

        let polygon = (k > 2).then(|| {
            self.fragments.push(Fragment { arcs: Vec::new(), essential: false, mass: 0.0, parent: Some(f), children: Vec::new() });
            self.fragments.len() - 1
        });
        let first_new = self.fragments.len();
        let inner_parent = polygon.unwrap_or(f);
        for i in 1..k {
            self.fragments.push(Fragment {
                arcs: Vec::new(),
                essential: true,
                mass: 0.0,
                parent: Some(inner_parent),
                children: Vec::new(),
            });
            self.fragments[inner_parent].children.push((first_new + i - 1, u[i - 1]));
        }
        if let Some(p) = polygon {
            self.fragments[f].children.push((p, u[0]));
        }
        let owner = |slot: usize| if slot == 0 || slot == k { f } else { first_new + slot - 1 };

        for (a, b) in pieces {
            let id = owner(slot_of(a));
            self.fragments[id].arcs.push((a, b));
            self.fragments[id].mass += b - a;
            self.arcs.insert(key(a), id);
        }
        self.fragments[f].mass = self.fragments[f].arcs.iter().map(|(a, b)| b - a).sum();
        for (c, a) in old_children {
            let id = owner(slot_of(a));
            self.fragments[c].parent = Some(id);
            self.fragments[id].children.push((c, a));
        }
        self.essential.extend(first_new..self.fragments.len());

        for w in u.windows(2) {
            self.edges.push((w[0], w[1]));
        }
        if k > 2 {
            self.edges.push((u[0], u[k - 1]));
        }
        self.insertions += 1;
    }

    /// One step of the recursive model: `k` uniform points, inserted if compatible.
    pub fn attempt_recursive<G: Rng + ?Sized>(&mut self, rng: &mut G) -> bool {
        self.attempts += 1;
        let pts: Vec<f64> = (0..self.k).map(|_| rng.random::<f64>()).collect();
        self.try_insert(&pts).expect("valid points")
    }

    /// One step of the homogeneous model: a uniformly chosen essential
    /// fragment receives `k` points uniform on its trace.
    pub fn insert_homogeneous<G: Rng + ?Sized>(&mut self, rng: &mut G) {
        self.attempts += 1;
        loop {
            let f = self.essential[rng.random_range(0..self.essential.len())];
            let frag = &self.fragments[f];
            let pts: Vec<f64> = (0..self.k).map(|_| frag.at_length(rng.random::<f64>() * frag.mass)).collect();
            if self.try_insert(&pts).expect("valid points") {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{CounterRng, Domain};

    #[test]
    fn crossing_rejected() {
        let mut d = DiskLamination::new(2).unwrap();
        assert!(d.try_insert(&[0.2, 0.6]).unwrap());
        assert!(!d.try_insert(&[0.3, 0.7]).unwrap());
        assert!(d.try_insert(&[0.3, 0.5]).unwrap());
        assert!(d.try_insert(&[0.1, 0.9]).unwrap());
        assert_eq!(d.depth_at(0.4), 3);
        assert_eq!(d.depth_at(0.55), 2);
        assert_eq!(d.depth_at(0.05), 0);
        assert_eq!(d.depth_at(0.95), 0);
        assert_eq!(d.depth_at(0.15), 1);
        assert!(d.is_non_crossing());
    }

    #[test]
    fn triangle_depths() {
        let mut d = DiskLamination::new(3).unwrap();
        assert!(d.try_insert(&[0.2, 0.5, 0.8]).unwrap());
        assert_eq!(d.depth_at(0.1), 0);
        assert_eq!(d.depth_at(0.3), 2);
        assert_eq!(d.depth_at(0.6), 2);
        assert_eq!(d.depth_at(0.9), 0);
        assert_eq!(d.n_essential(), 3);
        assert_eq!(d.fragments().iter().filter(|f| !f.essential).count(), 1);
        // triangle inside the fragment (0.2, 0.5)
        assert!(d.try_insert(&[0.25, 0.3, 0.45]).unwrap());
        assert_eq!(d.depth_at(0.27), 4);
        assert_eq!(d.depth_at(0.47), 2);
        assert!(!d.try_insert(&[0.1, 0.3, 0.9]).unwrap());
    }

    #[test]
    fn incremental_matches_brute_force() {
        let mut rng = CounterRng::from_seed(1, Domain::Lamination);
        for k in [2, 3, 4] {
            let mut d = DiskLamination::new(k).unwrap();
            for _ in 0..300 {
                d.insert_homogeneous(&mut rng);
            }
            for _ in 0..300 {
                let s: f64 = rng.random();
                assert_eq!(d.depth_at(s), d.brute_depth(s));
            }
            assert!(d.is_non_crossing());
            let mass: f64 = d.fragments().iter().map(|f| f.mass).sum();
            assert!((mass - 1.0).abs() < 1e-12);
            assert_eq!(d.n_essential(), 1 + (k - 1) * 300);
        }
    }

    #[test]
    fn crossing_detector() {
        let mut d = DiskLamination::new(2).unwrap();
        d.edges = vec![(0.1, 0.5), (0.3, 0.7)];
        assert!(!d.is_non_crossing());
        d.edges = vec![(0.1, 0.5), (0.2, 0.4), (0.6, 0.9)];
        assert!(d.is_non_crossing());
    }
}
