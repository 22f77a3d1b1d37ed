//! Parameter choices for the named example processes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::gamma;
use crate::structural::{build_structural_tree, solve_alpha_kgon, DecompositionSpec, ScalingLaw, StructuralTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Brownian continuum random tree: cherry, `R = S ~ Dirichlet(½,½,½)`.
    Crt,
    /// Recursive lamination: chain, `R = S ~ Dirichlet(2,1)`.
    LaminationZ,
    /// Homogeneous lamination: chain, `S ~ Dirichlet(2,1)`, `R ~ Dirichlet(1,1)`.
    HomogeneousH,
    KgonRecursive(usize),
    KgonHomogeneous(usize),
}

impl Preset {
    pub const NAMES: [&'static str; 5] = ["crt", "lamination-z", "homogeneous-h", "kgon-recursive(k)", "kgon-homogeneous(k)"];

    pub fn tree(&self) -> StructuralTree {
        let parents = match *self {
            Preset::Crt => vec![1, 1],
            Preset::LaminationZ | Preset::HomogeneousH => vec![1],
            Preset::KgonRecursive(k) | Preset::KgonHomogeneous(k) => vec![1; k - 1],
        };
        build_structural_tree(&parents).expect("preset trees are valid")
    }

    pub fn law(&self) -> ScalingLaw {
        let polygon = |k: usize| {
            let mut p = vec![1.0; k];
            p[0] = 2.0;
            p
        };
        match *self {
            Preset::Crt => ScalingLaw::SharedDirichlet { params: vec![0.5; 3] },
            Preset::LaminationZ => ScalingLaw::SharedDirichlet { params: vec![2.0, 1.0] },
            Preset::HomogeneousH => ScalingLaw::ProductDirichlet { r_params: vec![1.0, 1.0], s_params: vec![2.0, 1.0] },
            Preset::KgonRecursive(k) => ScalingLaw::SharedDirichlet { params: polygon(k) },
            // urn limit of the visit counts
            Preset::KgonHomogeneous(k) => ScalingLaw::ProductDirichlet {
                r_params: vec![1.0 / (k as f64 - 1.0); k],
                s_params: polygon(k),
            },
        }
    }

    /// Default mean height `c`.
    pub fn mean_height(&self) -> f64 {
        match self {
            Preset::Crt => (2.0 * std::f64::consts::PI).sqrt(),
            Preset::HomogeneousH => 1.0 / gamma(4.0 / 3.0),
            _ => 1.0,
        }
    }

    /// Index in closed form, where one is known.
    pub fn known_alpha(&self) -> Option<f64> {
        match *self {
            Preset::Crt => Some(0.5),
            Preset::LaminationZ => Some((17f64.sqrt() - 3.0) / 2.0),
            Preset::HomogeneousH => Some(1.0 / 3.0),
            Preset::KgonRecursive(k) => solve_alpha_kgon(k).ok(),
            Preset::KgonHomogeneous(k) => Some(1.0 / (k as f64 + 1.0)),
        }
    }

    pub fn spec(&self) -> Result<DecompositionSpec> {
        self.spec_with_c(self.mean_height())
    }

    pub fn spec_with_c(&self, c: f64) -> Result<DecompositionSpec> {
        DecompositionSpec::new(self.tree(), self.law(), c)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Crt => write!(f, "crt"),
            Preset::LaminationZ => write!(f, "lamination-z"),
            Preset::HomogeneousH => write!(f, "homogeneous-h"),
            Preset::KgonRecursive(k) => write!(f, "kgon-recursive({k})"),
            Preset::KgonHomogeneous(k) => write!(f, "kgon-homogeneous({k})"),
        }
    }
}

fn polygon_size(arg: &str, name: &str) -> Result<usize> {
    let k: usize = arg.parse().map_err(|_| Error::InvalidArgument(format!("bad polygon size in preset {name}")))?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("polygon size must be at least 2 in preset {name}")));
    }
    Ok(k)
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `kgon-recursive(3)` as well as `kgon-recursive-3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "crt" => return Ok(Preset::Crt),
            "lamination-z" => return Ok(Preset::LaminationZ),
            "homogeneous-h" => return Ok(Preset::HomogeneousH),
            _ => {}
        }
        for (prefix, make) in [
            ("kgon-recursive", Preset::KgonRecursive as fn(usize) -> Preset),
            ("kgon-homogeneous", Preset::KgonHomogeneous as fn(usize) -> Preset),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let arg = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| rest.strip_prefix('-'));
                if let Some(arg) = arg {
                    return Ok(make(polygon_size(arg, s)?));
                }
            }
        }
        Err(Error::InvalidArgument(format!("unknown preset `{s}`; known: {}", Preset::NAMES.join(", "))))
    }
}
