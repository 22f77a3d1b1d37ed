use serde::{Deserialize, Serialize};

use super::counts::CountLadder;

/// Least-squares slope of `log N(δ)` against `-log δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points: usize,
    /// Counts constant over the window; the slope is then not informative.
    pub degenerate: bool,
}

/// Fit over ladder entries `window.0 .. window.1` (half-open).
pub fn dimension_fit(ladder: &CountLadder, window: (usize, usize)) -> DimensionFit {
    let (a, b) = (window.0, window.1.min(ladder.counts.len()));
    let xs: Vec<f64> = ladder.deltas[a..b].iter().map(|d| -d.ln()).collect();
    let ys: Vec<f64> = ladder.counts[a..b].iter().map(|&c| (c as f64).ln()).collect();
    let (slope, intercept, stderr) = ols(&xs, &ys);
    let degenerate = ys.windows(2).all(|w| w[0] == w[1]);
    DimensionFit { slope, intercept, stderr, points: xs.len(), degenerate }
}

/// `(slope, intercept, standard error of slope)`.
pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (0.0, ys.first().copied().unwrap_or(0.0), f64::INFINITY);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, my, f64::INFINITY);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if xs.len() > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::CountKind;

    #[test]
    fn exact_power_law() {
        let deltas: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let counts = deltas.iter().map(|d| (3.0 * d.powf(-1.5)).round() as usize).collect();
        let fit = dimension_fit(&CountLadder { kind: CountKind::Divider, deltas, counts }, (2, 8));
        assert!((fit.slope - 1.5).abs() < 0.01);
        assert!(!fit.degenerate);
    }

    #[test]
    fn constant_counts_flagged() {
        let ladder = CountLadder { kind: CountKind::Divider, deltas: vec![0.5, 0.25, 0.125], counts: vec![2, 2, 2] };
        let fit = dimension_fit(&ladder, (0, 3));
        assert_eq!(fit.slope, 0.0);
        assert!(fit.degenerate);
    }
}
