use serde::Serialize;

/// Mean, sample standard deviation and relative standard deviation (%).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub rsd: f64,
}

impl Stats {
    /// Uses the `n − 1` convention; a single value has zero spread.
    pub fn of(values: &[f64]) -> Stats {
        let n = values.len();
        if n == 0 {
            return Stats {
                mean: f64::NAN,
                std: f64::NAN,
                rsd: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let rsd = if mean != 0.0 {
            100.0 * std / mean.abs()
        } else if std == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Stats { mean, std, rsd }
    }
}
