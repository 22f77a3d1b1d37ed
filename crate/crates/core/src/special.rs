//! Special-function helpers.

pub use statrs::function::gamma::{gamma, ln_gamma};

/// `E[prod_k S_k^{p_k}]` for `S ~ Dirichlet(params)`; `powers` may be sparse
/// pairs `(k, p_k)` with distinct `k`.
pub fn dirichlet_moment(params: &[f64], powers: &[(usize, f64)]) -> f64 {
    let a: f64 = params.iter().sum();
    let p: f64 = powers.iter().map(|&(_, p)| p).sum();
    let mut ln = ln_gamma(a) - ln_gamma(a + p);
    for &(k, pk) in powers {
        ln += ln_gamma(params[k] + pk) - ln_gamma(params[k]);
    }
    ln.exp()
}
