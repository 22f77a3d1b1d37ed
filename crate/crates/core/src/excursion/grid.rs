use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Starting profile `Q_0` of the iterative scheme, normalized to integrate to `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseProfile {
    /// `(8c/π) √(t(1-t))`
    #[default]
    Semicircle,
    /// `4c min(t, 1-t)`
    Tent,
}

impl BaseProfile {
    #[inline]
    pub fn eval(&self, c: f64, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            BaseProfile::Semicircle => 8.0 * c / std::f64::consts::PI * (t * (1.0 - t)).sqrt(),
            BaseProfile::Tent => 4.0 * c * t.min(1.0 - t),
        }
    }
}

/// Excursion sampled at `t_k = k/m`, `k = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridExcursion {
    values: Vec<f64>,
}

const MAGIC: &[u8; 8] = b"FXTREXC1";

/// Header fields of the binary dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumpHeader {
    pub m: u64,
    pub c: f64,
    pub seed: u64,
    pub spec_hash: u64,
}

impl GridExcursion {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(values.len() >= 2, "grid needs at least two points");
        GridExcursion { values }
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Self {
        GridExcursion::new((0..=m).map(|k| f(k as f64 / m as f64)).collect())
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 / self.m() as f64
    }

    /// Linear interpolation at `x ∈ [0,1]`.
    pub fn interpolate(&self, x: f64) -> f64 {
        let m = self.m();
        let y = x.clamp(0.0, 1.0) * m as f64;
        let k = (y.floor() as usize).min(m - 1);
        let w = y - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,value")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.t(k), v)?;
        }
        Ok(())
    }

    /// Little-endian dump: magic, `m`, `c`, seed, spec hash, then `m+1` values.
    pub fn write_dump<W: Write>(&self, mut w: W, c: f64, seed: u64, spec_hash: u64) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.m() as u64).to_le_bytes())?;
        w.write_all(&c.to_le_bytes())?;
        w.write_all(&seed.to_le_bytes())?;
        w.write_all(&spec_hash.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<(DumpHeader, GridExcursion)> {
        let io_err = |e: io::Error| Error::Dump(e.to_string());
        let mut word = [0u8; 8];
        r.read_exact(&mut word).map_err(io_err)?;
        if &word != MAGIC {
            return Err(Error::Dump("bad magic".into()));
        }
        let mut next = || -> Result<[u8; 8]> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(io_err)?;
            Ok(b)
        };
        let m = u64::from_le_bytes(next()?);
        let c = f64::from_le_bytes(next()?);
        let seed = u64::from_le_bytes(next()?);
        let spec_hash = u64::from_le_bytes(next()?);
        if m == 0 || m > (1 << 32) {
            return Err(Error::Dump(format!("implausible grid size {m}")));
        }
        let values = (0..=m).map(|_| next().map(f64::from_le_bytes)).collect::<Result<Vec<_>>>()?;
        Ok((DumpHeader { m, c, seed, spec_hash }, GridExcursion::new(values)))
    }
}
