/// `max_{h, x} |f(x+h) - f(x)| / h^γ` over dyadic lags `h = 2^j / m`.
pub fn holder_modulus(values: &[f64], gamma: f64) -> f64 {
    let m = values.len() - 1;
    let mut best = 0.0f64;
    let mut lag = 1;
    while lag <= m {
        let h = lag as f64 / m as f64;
        let osc = values.windows(lag + 1).map(|w| (w[lag] - w[0]).abs()).fold(0.0, f64::max);
        best = best.max(osc / h.powf(gamma));
        lag *= 2;
    }
    best
}
