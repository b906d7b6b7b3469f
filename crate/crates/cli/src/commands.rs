use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use stiefel_qg::oracle::{
    econ_full_block, full_qg_eval, riemannian_dist, stiefel_log_shooting, FullFrame, ShootingConfig,
};
use stiefel_qg::{
    matio, random_tangent, stiefel_exp, Curve, EconQuasiGeodesic, Error, Geodesic, RngSeed,
    ShortQuasiGeodesic, StiefelPoint, TangentVector,
};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::report::{
    BenchRow, ExperimentReport, Figure1Sample, Figure1Trial, Table1Row, Table1Trial, Timing,
    TrialFailure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Econ,
    Short,
    GeodesicShooting,
}

/// Samples a curve between the frames stored in two matrix files.
/// Row `i` holds the point at `t = i/(samples − 1)` flattened row by row.
pub fn cmd_connect(
    start: &Path,
    end: &Path,
    curve: CurveKind,
    samples: usize,
) -> Result<DMatrix<f64>> {
    let text_u = read_text(start)?;
    let text_target = read_text(end)?;
    let mu = matio::parse_matrix(&text_u)?;
    let mt = matio::parse_matrix(&text_target)?;
    if mu.shape() != mt.shape() {
        return Err(Error::ParseError(format!(
            "frames differ in shape: {}x{} and {}x{}",
            mu.nrows(),
            mu.ncols(),
            mt.nrows(),
            mt.ncols()
        ))
        .into());
    }
    let u = StiefelPoint::new(mu)?;
    let target = StiefelPoint::new(mt)?;
    connect_points(&u, &target, curve, samples)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn connect_points(
    u: &StiefelPoint,
    target: &StiefelPoint,
    curve: CurveKind,
    samples: usize,
) -> Result<DMatrix<f64>> {
    if samples < 2 {
        return Err(CliError::Usage("samples must be at least 2".into()));
    }
    let curve: Box<dyn Curve> = match curve {
        CurveKind::Econ => Box::new(EconQuasiGeodesic::connect(u, target)?),
        CurveKind::Short => Box::new(ShortQuasiGeodesic::connect(u, target)?),
        CurveKind::GeodesicShooting => {
            let cfg = ShootingConfig {
                tol: 1e-12,
                max_iter: 500,
                step: 1.0,
            };
            Box::new(Geodesic::new(stiefel_log_shooting(u, target, None, &cfg)?))
        }
    };
    let (n, p) = (u.n(), u.p());
    let mut out = DMatrix::zeros(samples, n * p);
    for (i, t) in grid(samples).enumerate() {
        let x = curve.point(t);
        for r in 0..n {
            for c in 0..p {
                out[(i, r * p + c)] = x.matrix()[(r, c)];
            }
        }
    }
    Ok(out)
}

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| {
        if i + 1 == samples {
            1.0
        } else {
            i as f64 / last
        }
    })
}

/// Seed of trial `trial` within experiment group `group`.
pub fn trial_seed(base: u64, group: u64, trial: usize) -> RngSeed {
    RngSeed(base).derive(group).derive(trial as u64)
}

/// `(U, Δ, Exp_U(Δ))` with `‖Δ‖ = d`.
pub fn constructed_pair(
    n: usize,
    p: usize,
    d: f64,
    seed: RngSeed,
) -> Result<(StiefelPoint, TangentVector, StiefelPoint)> {
    let u = StiefelPoint::random(n, p, seed.derive(0));
    let delta = random_tangent(&u, d, seed.derive(1))?;
    let target = stiefel_exp(&delta, 1.0);
    Ok((u, delta, target))
}

/// Riemannian distance between nearby points by shooting, to a tolerance
/// relative to their chordal distance.
pub fn shooting_distance(x: &StiefelPoint, y: &StiefelPoint) -> Option<f64> {
    let chord = x.frobenius_distance(y);
    if chord == 0.0 {
        return Some(0.0);
    }
    let cfg = ShootingConfig {
        tol: (1e-6 * chord).max(5e-14),
        max_iter: 200,
        step: 1.0,
    };
    riemannian_dist(x, y, &cfg).ok()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn figure1_trial(
    cfg: &ExperimentConfig,
    group: usize,
    d: f64,
    trial: usize,
) -> Result<Figure1Trial> {
    let seed = trial_seed(cfg.seed, group as u64, trial);
    let (u, delta, target) = constructed_pair(cfg.n, cfg.p, d, seed)?;
    let (gamma, seconds_econ) = timed(|| EconQuasiGeodesic::connect(&u, &target));
    let gamma = gamma?;
    let (rho, seconds_short) = timed(|| ShortQuasiGeodesic::connect(&u, &target));
    let rho = rho?;
    let samples = grid(cfg.samples_per_curve)
        .map(|t| {
            let geo = stiefel_exp(&delta, t);
            let e = gamma.point(t);
            let s = rho.point(t);
            Figure1Sample {
                t,
                dist_econ: shooting_distance(&e, &geo),
                dist_short: shooting_distance(&s, &geo),
                chordal_econ: e.frobenius_distance(&geo),
                chordal_short: s.frobenius_distance(&geo),
            }
        })
        .collect();
    Ok(Figure1Trial {
        trial,
        seed: seed.0,
        d,
        length_econ: gamma.length(),
        length_short: rho.length(),
        covaccel_econ: gamma.covariant_acceleration_norm(),
        covaccel_short: rho.covariant_acceleration_norm(),
        seconds_econ,
        seconds_short,
        samples,
    })
}

/// Distance from both quasi-geodesics to the geodesic along a grid, for every
/// configured distance and trial.
pub fn cmd_figure1(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut report = ExperimentReport::new("figure1", cfg);
    for (group, &d) in cfg.distances.iter().enumerate() {
        let trials: Vec<Result<Figure1Trial>> = (0..cfg.trials)
            .into_par_iter()
            .map(|k| figure1_trial(cfg, group, d, k))
            .collect();
        for (k, trial) in trials.into_iter().enumerate() {
            match trial {
                Ok(t) => report.figure1.push(t),
                Err(e) => report.failures.push(failure(
                    e,
                    k,
                    trial_seed(cfg.seed, group as u64, k),
                    d,
                    cfg.p,
                )?),
            }
        }
    }
    Ok(report)
}

/// Numerical failures are recorded per trial; anything else aborts the run.
fn failure(e: CliError, trial: usize, seed: RngSeed, d: f64, p: usize) -> Result<TrialFailure> {
    match &e {
        CliError::Core(core) if !core.is_validation() => Ok(TrialFailure {
            trial,
            seed: seed.0,
            d,
            p,
            error: core.name().to_string(),
        }),
        _ => Err(e),
    }
}

fn table1_trial(cfg: &ExperimentConfig, p: usize, d: f64, trial: usize) -> Result<Table1Trial> {
    let seed = trial_seed(cfg.seed, p as u64, trial);
    let (u, _, target) = constructed_pair(cfg.n, p, d, seed)?;
    let (gamma, seconds_econ) = timed(|| EconQuasiGeodesic::connect(&u, &target));
    let (rho, seconds_short) = timed(|| ShortQuasiGeodesic::connect(&u, &target));
    Ok(Table1Trial {
        trial,
        seed: seed.0,
        reldev_short: relative_deviation(rho?.length(), d),
        reldev_econ: relative_deviation(gamma?.length(), d),
        seconds_econ,
        seconds_short,
    })
}

pub fn relative_deviation(length: f64, d: f64) -> f64 {
    (length - d).abs() / d
}

/// Relative length deviation of both curves at the first configured distance
/// for each `p`, averaged over trials.
pub fn cmd_table1(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let d = cfg.distances[0];
    let mut report = ExperimentReport::new("table1", cfg);
    for p in cfg.p_values() {
        let results: Vec<Result<Table1Trial>> = (0..cfg.trials)
            .into_par_iter()
            .map(|k| table1_trial(cfg, p, d, k))
            .collect();
        let mut trials = Vec::new();
        for (k, trial) in results.into_iter().enumerate() {
            match trial {
                Ok(t) => trials.push(t),
                Err(e) => {
                    report
                        .failures
                        .push(failure(e, k, trial_seed(cfg.seed, p as u64, k), d, p)?)
                }
            }
        }
        if trials.is_empty() {
            return Err(CliError::Core(Error::NoConvergence {
                iterations: 0,
                residual: f64::NAN,
            }));
        }
        let count = trials.len() as f64;
        report.table1.push(Table1Row {
            p,
            reldev_short: trials.iter().map(|t| t.reldev_short).sum::<f64>() / count,
            reldev_econ: trials.iter().map(|t| t.reldev_econ).sum::<f64>() / count,
            trials,
        });
    }
    Ok(report)
}

fn time_reps<T>(reps: usize, mut f: impl FnMut() -> T) -> Timing {
    std::hint::black_box(f());
    Timing::from_samples(
        (0..reps)
            .map(|_| timed(|| std::hint::black_box(f())).1)
            .collect(),
    )
}

/// Median wall-clock time of the economy connect, the short connect and the
/// `n×n` evaluation, with `trials` repetitions per `(n, p)`.
pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let d = cfg
        .distances
        .first()
        .copied()
        .unwrap_or(0.5 * std::f64::consts::PI);
    let mut report = ExperimentReport::new("bench", cfg);
    for p in cfg.p_values() {
        if p == 0 || p >= cfg.n {
            return Err(
                Error::DimensionError(format!("bench needs 1 <= p < n, got p = {p}")).into(),
            );
        }
        let seed = trial_seed(cfg.seed, p as u64, 0);
        let u = StiefelPoint::random(cfg.n, p, seed.derive(0));
        let target = if 2 * p <= cfg.n {
            constructed_pair(cfg.n, p, d, seed)?.2
        } else {
            // Random tangents need p <= n − p; a nearby point still works.
            let m = u.matrix()
                + stiefel_qg::SeededRng::from_seed(seed.derive(1)).gaussian_matrix(cfg.n, p) * 0.1;
            StiefelPoint::new(m.qr().q())?
        };
        let econ = time_reps(cfg.trials, || EconQuasiGeodesic::connect(&u, &target));
        let short = if 2 * p <= cfg.n {
            Some(time_reps(cfg.trials, || {
                ShortQuasiGeodesic::connect(&u, &target)
            }))
        } else {
            None
        };
        let gamma = EconQuasiGeodesic::connect(&u, &target)?;
        let frame = FullFrame::complete(&u)?;
        let b_full = econ_full_block(&frame, &gamma);
        let full = time_reps(cfg.trials, || full_qg_eval(&frame, gamma.a(), &b_full, 1.0));
        report.bench.push(BenchRow {
            n: cfg.n,
            p,
            reps: cfg.trials,
            econ,
            short,
            full,
        });
    }
    Ok(report)
}
