use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::dirichlet_moment;

/// Named samplers for laws without closed-form moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CustomSampler {
    /// `R = S` = the `K` gaps cut by `K` uniform points on the circle, the
    /// gap straddling 0 listed first.
    CircleGaps,
    /// `S` as in `CircleGaps`, `R` independent uniform spacings.
    CircleGapsUniformR,
}

/// Joint law of the distance and mass vectors `(R, S)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalingLaw {
    /// `R = S ~ Dirichlet(params)`.
    SharedDirichlet { params: Vec<f64> },
    /// `R ~ Dirichlet(r_params)` independent of `S ~ Dirichlet(s_params)`.
    ProductDirichlet { r_params: Vec<f64>, s_params: Vec<f64> },
    Custom { sampler: CustomSampler },
}

fn check_params(name: &str, p: &[f64], k: usize) -> Result<()> {
    if p.len() != k {
        return Err(Error::InvalidLaw(format!("{name} has {} entries, tree has {k} nodes", p.len())));
    }
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidLaw(format!("{name} entries must be positive, got {x}")));
    }
    Ok(())
}

/// `Gamma(a, 1)`; small integer and half shapes go through exact identities
/// with exponential and normal variates, which are much cheaper.
#[inline]
fn gamma_draw<G: Rng + ?Sized>(rng: &mut G, a: f64) -> f64 {
    if a == 0.5 {
        let z: f64 = StandardNormal.sample(rng);
        0.5 * z * z
    } else if a.fract() == 0.0 && (1.0..=4.0).contains(&a) {
        (0..a as usize).map(|_| -> f64 { Exp1.sample(rng) }).sum()
    } else {
        Gamma::new(a, 1.0).expect("positive shape").sample(rng)
    }
}

pub(crate) fn sample_dirichlet<G: Rng + ?Sized>(rng: &mut G, params: &[f64], out: &mut [f64]) {
    loop {
        let mut total = 0.0;
        for (o, &a) in out.iter_mut().zip(params) {
            let g = gamma_draw(rng, a);
            *o = g;
            total += g;
        }
        if total > 0.0 && total.is_finite() {
            let mut ok = true;
            for o in out.iter_mut() {
                *o /= total;
                ok &= *o > 0.0;
            }
            if ok {
                return;
            }
        }
    }
}

/// Gaps of `k` uniform points on the circle; the wrap-around gap comes first.
pub(crate) fn sample_circle_gaps<G: Rng + ?Sized>(rng: &mut G, out: &mut [f64]) {
    let k = out.len();
    loop {
        let mut u: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        u.sort_by(f64::total_cmp);
        out[0] = 1.0 - u[k - 1] + u[0];
        for i in 1..k {
            out[i] = u[i] - u[i - 1];
        }
        if out.iter().all(|&g| g > 0.0) {
            return;
        }
    }
}

/// Node label `j` (1-based) drawn with probability `w[j-1]`.
pub fn pick_node<G: Rng + ?Sized>(rng: &mut G, w: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &x) in w.iter().enumerate() {
        acc += x;
        if u < acc {
            return i + 1;
        }
    }
    w.len()
}

impl ScalingLaw {
    pub fn validate(&self, k: usize) -> Result<()> {
        match self {
            ScalingLaw::SharedDirichlet { params } => check_params("params", params, k),
            ScalingLaw::ProductDirichlet { r_params, s_params } => {
                check_params("r_params", r_params, k)?;
                check_params("s_params", s_params, k)
            }
            ScalingLaw::Custom { .. } => Ok(()),
        }
    }

    /// True when `R = S` almost surely.
    pub fn is_shared(&self) -> bool {
        matches!(
            self,
            ScalingLaw::SharedDirichlet { .. } | ScalingLaw::Custom { sampler: CustomSampler::CircleGaps }
        )
    }

    pub fn has_analytic_moments(&self) -> bool {
        !matches!(self, ScalingLaw::Custom { .. })
    }

    /// Draws `(R, S)` into the given buffers, both of length `K`.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G, r: &mut [f64], s: &mut [f64]) {
        match self {
            ScalingLaw::SharedDirichlet { params } => {
                sample_dirichlet(rng, params, s);
                r.copy_from_slice(s);
            }
            ScalingLaw::ProductDirichlet { r_params, s_params } => {
                sample_dirichlet(rng, r_params, r);
                sample_dirichlet(rng, s_params, s);
            }
            ScalingLaw::Custom { sampler: CustomSampler::CircleGaps } => {
                sample_circle_gaps(rng, s);
                r.copy_from_slice(s);
            }
            ScalingLaw::Custom { sampler: CustomSampler::CircleGapsUniformR } => {
                sample_circle_gaps(rng, s);
                let ones = vec![1.0; r.len()];
                sample_dirichlet(rng, &ones, r);
            }
        }
    }

    /// Draws `S` only.
    pub fn sample_s<G: Rng + ?Sized>(&self, rng: &mut G, s: &mut [f64]) {
        match self {
            ScalingLaw::SharedDirichlet { params } => sample_dirichlet(rng, params, s),
            ScalingLaw::ProductDirichlet { s_params, .. } => sample_dirichlet(rng, s_params, s),
            ScalingLaw::Custom { .. } => sample_circle_gaps(rng, s),
        }
    }

    /// `E[S_j R_i^a]` for analytic laws (0-based indices).
    pub fn mixed_moment(&self, j: usize, i: usize, a: f64) -> Option<f64> {
        match self {
            ScalingLaw::SharedDirichlet { params } => Some(if i == j {
                dirichlet_moment(params, &[(i, 1.0 + a)])
            } else {
                dirichlet_moment(params, &[(j, 1.0), (i, a)])
            }),
            ScalingLaw::ProductDirichlet { r_params, s_params } => {
                Some(dirichlet_moment(s_params, &[(j, 1.0)]) * dirichlet_moment(r_params, &[(i, a)]))
            }
            ScalingLaw::Custom { .. } => None,
        }
    }

    /// `E[R_i^a]` for analytic laws (0-based index).
    pub fn r_moment(&self, i: usize, a: f64) -> Option<f64> {
        match self {
            ScalingLaw::SharedDirichlet { params } => Some(dirichlet_moment(params, &[(i, a)])),
            ScalingLaw::ProductDirichlet { r_params, .. } => Some(dirichlet_moment(r_params, &[(i, a)])),
            ScalingLaw::Custom { .. } => None,
        }
    }
}
