use crate::error::{Error, Result};
use crate::rng::{CounterRng, Domain};
use crate::special::ln_gamma;

use super::law::ScalingLaw;
use super::tree::StructuralTree;

/// Sample size for the Monte Carlo index functional.
pub const MC_SAMPLES: usize = 1_000_000;

const LO: f64 = 1e-6;
const HI: f64 = 1.0 - 1e-6;
const MAX_ITER: usize = 200;

/// `S(Γ_i)`: mass of the subtree below node `i`, per node (0-based output).
fn subtree_mass(tree: &StructuralTree, s: &[f64]) -> Vec<f64> {
    let k = tree.k();
    let mut m = s.to_vec();
    for i in (2..=k).rev() {
        let p = tree.parent(i).unwrap();
        m[p - 1] += m[i - 1];
    }
    m
}

/// `F(a) = E[Σ_j S_j Σ_{i ∈ E_j ∪ {j}} R_i^a]` in closed form. `None` for
/// sampler-only laws.
pub fn index_functional(tree: &StructuralTree, law: &ScalingLaw, a: f64) -> Option<f64> {
    let k = tree.k();
    let mut total = 0.0;
    for j in 1..=k {
        for &i in tree.ancestors(j).iter().chain(std::iter::once(&j)) {
            total += law.mixed_moment(j - 1, i - 1, a)?;
        }
    }
    Some(total)
}

/// Common-random-number sample of `(R_i, S(Γ_i))` pairs for the Monte Carlo
/// functional.
pub struct McSample {
    k: usize,
    r: Vec<f64>,
    w: Vec<f64>,
}

impl McSample {
    pub fn draw(tree: &StructuralTree, law: &ScalingLaw, n: usize, seed: u64) -> Self {
        let k = tree.k();
        let mut rng = CounterRng::from_seed(seed, Domain::Sampling);
        let (mut rr, mut ss) = (vec![0.0; k], vec![0.0; k]);
        let mut r = Vec::with_capacity(n * k);
        let mut w = Vec::with_capacity(n * k);
        for _ in 0..n {
            law.sample(&mut rng, &mut rr, &mut ss);
            r.extend_from_slice(&rr);
            w.extend(subtree_mass(tree, &ss));
        }
        McSample { k, r, w }
    }

    fn len(&self) -> usize {
        self.r.len() / self.k
    }

    /// Mean and standard error of `F(a)`.
    pub fn functional(&self, a: f64) -> (f64, f64) {
        let n = self.len();
        let (mut s1, mut s2) = (0.0, 0.0);
        for (r, w) in self.r.chunks_exact(self.k).zip(self.w.chunks_exact(self.k)) {
            let x: f64 = r.iter().zip(w).map(|(ri, wi)| ri.powf(a) * wi).sum();
            s1 += x;
            s2 += x * x;
        }
        let mean = s1 / n as f64;
        let var = (s2 / n as f64 - mean * mean).max(0.0);
        (mean, (var / n as f64).sqrt())
    }
}

/// Monte Carlo estimate `(mean, standard error)` of `F(a)` from `n` fresh samples.
pub fn index_functional_mc(tree: &StructuralTree, law: &ScalingLaw, a: f64, n: usize, seed: u64) -> (f64, f64) {
    McSample::draw(tree, law, n, seed).functional(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub alpha: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
    /// Monte Carlo half-width (95%) of the root; zero for closed-form laws.
    pub mc_half_width: f64,
    pub iterations: usize,
}

fn bisect(f: impl Fn(f64) -> f64, width: f64) -> Result<(f64, f64, usize)> {
    let (mut lo, mut hi) = (LO, HI);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo > 1.0 && f_hi < 1.0) {
        return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
    }
    for it in 1..=MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok((lo, hi, it));
        }
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= width {
            return Ok((lo, hi, it));
        }
    }
    Err(Error::NoConvergence(MAX_ITER))
}

/// Solves `F(α) = 1` by bisection on `[1e-6, 1 - 1e-6]`; requires `|F(α) - 1| <= tol`.
pub fn solve_alpha(tree: &StructuralTree, law: &ScalingLaw, tol: f64) -> Result<AlphaSolution> {
    law.validate(tree.k())?;
    if law.has_analytic_moments() {
        let f = |a: f64| index_functional(tree, law, a).unwrap();
        let (lo, hi, iterations) = bisect(f, 0.0)?;
        let alpha = 0.5 * (lo + hi);
        if (f(alpha) - 1.0).abs() > tol {
            return Err(Error::NoConvergence(iterations));
        }
        return Ok(AlphaSolution { alpha, bracket: (lo, hi), mc_half_width: 0.0, iterations });
    }
    let sample = McSample::draw(tree, law, MC_SAMPLES, 0x0A1F_A000);
    let f = |a: f64| sample.functional(a).0;
    let (lo, hi, iterations) = bisect(f, 1e-7)?;
    let alpha = 0.5 * (lo + hi);
    let (fa, se) = sample.functional(alpha);
    if (fa - 1.0).abs() > tol.max(4.0 * se) {
        return Err(Error::NoConvergence(iterations));
    }
    let h = 1e-3;
    let slope = (f(alpha + h) - f(alpha - h)) / (2.0 * h);
    let mc_half_width = 1.96 * se / slope.abs() + 0.5 * (hi - lo);
    Ok(AlphaSolution { alpha, bracket: (lo, hi), mc_half_width, iterations })
}

/// `g_k(x) = k!Γ(x+2)/Γ(k+x+1) + (k-1)k!Γ(x+2)/Γ(k+x+2)`.
pub fn kgon_equation(k: usize, x: f64) -> f64 {
    let kf = k as f64;
    let lf = ln_gamma(kf + 1.0) + ln_gamma(x + 2.0);
    (lf - ln_gamma(kf + x + 1.0)).exp() + (kf - 1.0) * (lf - ln_gamma(kf + x + 2.0)).exp()
}

/// Root of `g_k(x) = 1` in `(0, 1)`.
pub fn solve_alpha_kgon(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("polygon size must be at least 2, got {k}")));
    }
    let (lo, hi, _) = bisect(|x| kgon_equation(k, x), 0.0)?;
    Ok(0.5 * (lo + hi))
}

/// Smallest `m` with `Σ_i E[R_i^{mα}] < 1`; `1 + ⌊1/α⌋` when moments are unavailable.
pub fn m_star(tree: &StructuralTree, law: &ScalingLaw, alpha: f64) -> u32 {
    if !law.has_analytic_moments() {
        return 1 + (1.0 / alpha).floor() as u32;
    }
    (1u32..)
        .find(|&m| {
            let s: f64 = (0..tree.k()).map(|i| law.r_moment(i, m as f64 * alpha).unwrap()).sum();
            s < 1.0 - 1e-12
        })
        .unwrap()
}

/// Structural tree, scaling law, index and mean height.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSpec {
    pub tree: StructuralTree,
    pub law: ScalingLaw,
    pub alpha: f64,
    pub c: f64,
    pub m_star: u32,
}

impl DecompositionSpec {
    pub fn new(tree: StructuralTree, law: ScalingLaw, c: f64) -> Result<Self> {
        let alpha = solve_alpha(&tree, &law, 1e-9)?.alpha;
        Self::with_alpha(tree, law, alpha, c)
    }

    pub fn with_alpha(tree: StructuralTree, law: ScalingLaw, alpha: f64, c: f64) -> Result<Self> {
        law.validate(tree.k())?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("mean height must be positive, got {c}")));
        }
        let m_star = m_star(&tree, &law, alpha);
        Ok(DecompositionSpec { tree, law, alpha, c, m_star })
    }

    pub fn k(&self) -> usize {
        self.tree.k()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structural::build_structural_tree;

    fn chain() -> StructuralTree {
        build_structural_tree(&[1]).unwrap()
    }

    #[test]
    fn functional_at_zero_chain() {
        let law = ScalingLaw::SharedDirichlet { params: vec![2.0, 1.0] };
        // F(0) = 1 + E[S_2]
        let f0 = index_functional(&chain(), &law, 0.0).unwrap();
        assert!((f0 - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn functional_decreasing() {
        let t = build_structural_tree(&[1, 1]).unwrap();
        let law = ScalingLaw::SharedDirichlet { params: vec![0.5; 3] };
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let v = index_functional(&t, &law, i as f64 / 20.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn uniform_r_index_one_third() {
        let law = ScalingLaw::ProductDirichlet { r_params: vec![1.0, 1.0], s_params: vec![2.0, 1.0] };
        let sol = solve_alpha(&chain(), &law, 1e-12).unwrap();
        assert!((sol.alpha - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(m_star(&chain(), &law, sol.alpha), 4);
    }

    #[test]
    fn mc_matches_closed_form() {
        let law = ScalingLaw::SharedDirichlet { params: vec![2.0, 1.0] };
        let exact = index_functional(&chain(), &law, 0.4).unwrap();
        let (m, se) = index_functional_mc(&chain(), &law, 0.4, 200_000, 5);
        assert!((m - exact).abs() < 4.0 * se, "{m} {exact} {se}");
    }

    #[test]
    fn custom_law_brackets_known_root() {
        // circle gaps with K = 2 have the law of Dirichlet(2,1)
        let law = ScalingLaw::Custom { sampler: crate::structural::CustomSampler::CircleGaps };
        let sol = solve_alpha(&chain(), &law, 1e-9).unwrap();
        let beta = (17f64.sqrt() - 3.0) / 2.0;
        assert!((sol.alpha - beta).abs() < sol.mc_half_width * 2.0 + 1e-4, "{sol:?}");
        assert!(sol.mc_half_width > 0.0 && sol.mc_half_width < 0.01);
    }

    #[test]
    fn kgon_small_cases() {
        let x2 = solve_alpha_kgon(2).unwrap();
        assert!((x2 * x2 + 3.0 * x2 - 2.0).abs() < 1e-12);
        let x3 = solve_alpha_kgon(3).unwrap();
        assert!((x3.powi(3) + 9.0 * x3 * x3 + 20.0 * x3 - 12.0).abs() < 1e-11);
        assert!(solve_alpha_kgon(1).is_err());
    }

    #[test]
    fn spec_rejects_bad_inputs() {
        let law = ScalingLaw::SharedDirichlet { params: vec![2.0, 1.0] };
        assert!(DecompositionSpec::with_alpha(chain(), law.clone(), 1.2, 1.0).is_err());
        assert!(DecompositionSpec::with_alpha(chain(), law.clone(), 0.5, 0.0).is_err());
        let s = DecompositionSpec::new(chain(), law, 1.0).unwrap();
        assert_eq!(s.m_star, 2);
    }
}
