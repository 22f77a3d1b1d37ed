//! Structural trees, scaling laws, the index equation, degree sets and the
//! exit-point chain.

mod alpha;
mod chain;
mod degrees;
mod law;
mod tree;

pub use alpha::{
    index_functional, index_functional_mc, kgon_equation, m_star, solve_alpha, solve_alpha_kgon,
    AlphaSolution, DecompositionSpec, MC_SAMPLES,
};
pub use chain::{exit_chain_step, simulate_exit_chain, ExitChainState};
pub use degrees::{degree_set, predict_degree_set};
pub use law::{pick_node, CustomSampler, ScalingLaw};
pub use tree::{build_structural_tree, Piece, StructuralTree};
