use std::fmt::Write as _;

use serde::Serialize;
use stiefel_qg::matio::format_f64;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Sample {
    pub t: f64,
    /// Riemannian distance to the geodesic point; absent when shooting fails.
    pub dist_econ: Option<f64>,
    pub dist_short: Option<f64>,
    pub chordal_econ: f64,
    pub chordal_short: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Trial {
    pub trial: usize,
    pub seed: u64,
    pub d: f64,
    pub length_econ: f64,
    pub length_short: f64,
    pub covaccel_econ: f64,
    pub covaccel_short: f64,
    pub seconds_econ: f64,
    pub seconds_short: f64,
    pub samples: Vec<Figure1Sample>,
}

impl Figure1Trial {
    /// Largest Riemannian deviation over the grid, if every sample has one.
    pub fn max_dist(&self) -> Option<(f64, f64)> {
        let mut econ = 0.0f64;
        let mut short = 0.0f64;
        for s in &self.samples {
            econ = econ.max(s.dist_econ?);
            short = short.max(s.dist_short?);
        }
        Some((econ, short))
    }

    pub fn max_chordal(&self) -> (f64, f64) {
        self.samples.iter().fold((0.0f64, 0.0f64), |(e, s), x| {
            (e.max(x.chordal_econ), s.max(x.chordal_short))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Trial {
    pub trial: usize,
    pub seed: u64,
    pub reldev_short: f64,
    pub reldev_econ: f64,
    pub seconds_econ: f64,
    pub seconds_short: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub p: usize,
    /// Means over the successful trials.
    pub reldev_short: f64,
    pub reldev_econ: f64,
    pub trials: Vec<Table1Trial>,
}

/// Wall-clock seconds per call over the repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Timing {
    pub fn from_samples(mut secs: Vec<f64>) -> Self {
        secs.sort_by(f64::total_cmp);
        let k = secs.len();
        let median = if k % 2 == 1 {
            secs[k / 2]
        } else {
            0.5 * (secs[k / 2 - 1] + secs[k / 2])
        };
        Timing {
            median,
            min: secs[0],
            max: secs[k - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    pub econ: Timing,
    /// Absent when `p > n/2`.
    pub short: Option<Timing>,
    pub full: Timing,
}

/// A trial whose curves could not be constructed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub d: f64,
    pub p: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub figure1: Vec<Figure1Trial>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table1: Vec<Table1Row>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bench: Vec<BenchRow>,
    pub failures: Vec<TrialFailure>,
}

fn opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
            figure1: Vec::new(),
            table1: Vec::new(),
            bench: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// CSV with a leading `#` line echoing the configuration.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let _ = writeln!(
            out,
            "# qgeo {} {} seed={} config={config}",
            self.version, self.experiment, self.seed
        );
        for f in &self.failures {
            let _ = writeln!(
                out,
                "# failed trial={} seed={} p={} d={} error={}",
                f.trial,
                f.seed,
                f.p,
                format_f64(f.d),
                f.error
            );
        }
        match self.experiment.as_str() {
            "figure1" => {
                out.push_str("trial,seed,d,t,dist_econ,dist_short,chordal_econ,chordal_short\n");
                for tr in &self.figure1 {
                    for s in &tr.samples {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{},{}",
                            tr.trial,
                            tr.seed,
                            format_f64(tr.d),
                            format_f64(s.t),
                            opt(s.dist_econ),
                            opt(s.dist_short),
                            format_f64(s.chordal_econ),
                            format_f64(s.chordal_short)
                        );
                    }
                }
            }
            "table1" => {
                out.push_str("p,reldev_short,reldev_econ\n");
                for row in &self.table1 {
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        row.p,
                        format_f64(row.reldev_short),
                        format_f64(row.reldev_econ)
                    );
                }
            }
            _ => {
                out.push_str(
                    "n,p,reps,econ_median,econ_min,econ_max,short_median,short_min,short_max,full_median,full_min,full_max\n",
                );
                for row in &self.bench {
                    let short = |f: fn(&Timing) -> f64| opt(row.short.as_ref().map(f));
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        row.n,
                        row.p,
                        row.reps,
                        format_f64(row.econ.median),
                        format_f64(row.econ.min),
                        format_f64(row.econ.max),
                        short(|t| t.median),
                        short(|t| t.min),
                        short(|t| t.max),
                        format_f64(row.full.median),
                        format_f64(row.full.min),
                        format_f64(row.full.max)
                    );
                }
            }
        }
        out
    }
}
