use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Parameters shared by the experiment subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: usize,
    /// Inclusive `(start, end, step)` sweep over `p`.
    pub p_range: Option<(usize, usize, usize)>,
    /// Distances in radians.
    pub distances: Vec<f64>,
    pub samples_per_curve: usize,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
}

impl ExperimentConfig {
    /// Desk-scale distance-curve experiment on St(40,8).
    pub fn figure1_default() -> Self {
        ExperimentConfig {
            n: 40,
            p: 8,
            p_range: None,
            distances: vec![0.1 * PI, 0.5 * PI, 1.3 * PI],
            samples_per_curve: 51,
            trials: 20,
            seed: 0,
            format: Format::Csv,
        }
    }

    pub fn figure1_paper() -> Self {
        ExperimentConfig {
            n: 200,
            p: 30,
            ..Self::figure1_default()
        }
    }

    /// Length-deviation sweep on St(200,p) at distance π/2.
    pub fn table1_default() -> Self {
        ExperimentConfig {
            n: 200,
            p: 10,
            p_range: Some((10, 50, 10)),
            distances: vec![0.5 * PI],
            samples_per_curve: 51,
            trials: 20,
            seed: 0,
            format: Format::Csv,
        }
    }

    pub fn table1_paper() -> Self {
        ExperimentConfig {
            p_range: Some((10, 100, 10)),
            ..Self::table1_default()
        }
    }

    pub fn bench_default() -> Self {
        ExperimentConfig {
            n: 400,
            p: 20,
            p_range: None,
            distances: vec![0.5 * PI],
            samples_per_curve: 51,
            trials: 5,
            seed: 0,
            format: Format::Csv,
        }
    }

    pub fn bench_paper() -> Self {
        ExperimentConfig {
            n: 1000,
            p: 50,
            p_range: Some((10, 50, 20)),
            ..Self::bench_default()
        }
    }

    /// Values of `p` covered by the configuration.
    pub fn p_values(&self) -> Vec<usize> {
        match self.p_range {
            Some((start, end, step)) => (start..=end).step_by(step.max(1)).collect(),
            None => vec![self.p],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(usage("trials must be at least 1"));
        }
        if self.samples_per_curve < 2 {
            return Err(usage("samples must be at least 2"));
        }
        if self.distances.is_empty() || self.distances.iter().any(|&d| !(d > 0.0 && d.is_finite()))
        {
            return Err(usage("distances must be positive"));
        }
        if let Some((start, end, step)) = self.p_range {
            if start == 0 || step == 0 || start > end {
                return Err(usage(
                    "p range must satisfy 1 <= start <= end and step >= 1",
                ));
            }
        }
        for p in self.p_values() {
            if p == 0 || self.n < 2 * p {
                return Err(CliError::Core(stiefel_qg::Error::DimensionError(format!(
                    "experiments need n >= 2p, got n = {} and p = {p}",
                    self.n
                ))));
            }
        }
        Ok(())
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

/// Parses a distance in radians; a trailing `pi` or `π` multiplies by π,
/// so `0.5pi`, `pi` and `1.3π` are accepted.
pub fn parse_distance(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let (number, factor) = if let Some(head) = t.strip_suffix("pi") {
        (head, PI)
    } else if let Some(head) = t.strip_suffix('π') {
        (head, PI)
    } else {
        (t, 1.0)
    };
    let number = number.trim().trim_end_matches('*');
    let value = if number.is_empty() && factor != 1.0 {
        1.0
    } else {
        number
            .parse::<f64>()
            .map_err(|_| format!("invalid distance `{text}`"))?
    };
    let d = value * factor;
    if !d.is_finite() {
        return Err(format!("invalid distance `{text}`"));
    }
    Ok(d)
}

/// Comma separated list of [`parse_distance`] values.
pub fn parse_distances(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',').map(parse_distance).collect()
}

/// `start:end:step`, with the step optional.
pub fn parse_p_range(text: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid p range `{text}`"))
    };
    match parts[..] {
        [a, b] => Ok((num(a)?, num(b)?, 1)),
        [a, b, s] => Ok((num(a)?, num(b)?, num(s)?)),
        _ => Err(format!("p range must look like A:B:step, got `{text}`")),
    }
}
