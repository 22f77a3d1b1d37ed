use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::rng::{CounterRng, Domain};

use super::law::{pick_node, ScalingLaw};
use super::tree::StructuralTree;

/// Number of distinct exit points and (log of the) remaining mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitChainState {
    pub m: u64,
    /// `ln L`; kept in log form because `L` underflows within a few hundred steps.
    pub log_mass: f64,
}

impl ExitChainState {
    pub fn initial() -> Self {
        ExitChainState { m: 0, log_mass: 0.0 }
    }

    pub fn mass(&self) -> f64 {
        self.log_mass.exp()
    }
}

/// One transition given the mass vector and the selected node `j` (1-based).
pub fn exit_chain_step<G: Rng + ?Sized>(
    tree: &StructuralTree,
    state: ExitChainState,
    s: &[f64],
    j: usize,
    rng: &mut G,
) -> ExitChainState {
    let sj = s[j - 1];
    let kept = if state.m == 0 { 0 } else { Binomial::new(state.m, sj).unwrap().sample(rng) };
    ExitChainState { m: u64::from(!tree.is_leaf(j)) + kept, log_mass: state.log_mass + sj.ln() }
}

/// Trajectory of length `steps + 1` starting from `(0, 1)`.
pub fn simulate_exit_chain(tree: &StructuralTree, law: &ScalingLaw, steps: usize, seed: u64) -> Vec<ExitChainState> {
    let mut rng = CounterRng::from_seed(seed, Domain::Chain);
    let mut s = vec![0.0; tree.k()];
    let mut out = Vec::with_capacity(steps + 1);
    let mut state = ExitChainState::initial();
    out.push(state);
    for _ in 0..steps {
        law.sample_s(&mut rng, &mut s);
        let j = pick_node(&mut rng, &s);
        state = exit_chain_step(tree, state, &s, j, &mut rng);
        out.push(state);
    }
    out
}
