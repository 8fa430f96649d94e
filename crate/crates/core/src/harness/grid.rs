use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{DriverKind, ExperimentConfig};
use crate::error::{Error, Result};
use crate::estimator::ZerothOrderOracle;
use crate::kernel::build_kernel;
use crate::objectives::ObjectiveCertificate;
use crate::optimizer::{pl_schedule, run_pl, run_sc, sc_schedule, ScheduleParams};
use crate::rng::derive_seed;

/// Result of one `(T, replication)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub driver: DriverKind,
    pub objective: String,
    pub d: usize,
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub replication: usize,
    pub seed: u64,
    /// `f(x_out) - f*`; NaN for aborted runs.
    pub error: f64,
    /// Oracle calls spent, `2T` unless aborted.
    pub queries: usize,
    pub wall_ms: f64,
    pub aborted: bool,
}

/// Certificate and resolved inputs shared by every cell of a grid.
#[derive(Debug, Clone)]
pub struct GridSetup {
    pub certificate: ObjectiveCertificate,
    pub x1: Vec<f64>,
    pub sigma2: f64,
}

/// Certify the configured objective and resolve the start point.
pub fn prepare(config: &ExperimentConfig) -> Result<GridSetup> {
    config.validate()?;
    let obj = config.objective_id()?.build(config.d)?;
    let kernel = build_kernel(config.beta)?;
    let sigma2 = config.sigma2();

    // Provisional constants only size the query excursion used for G.
    let mut excursion: f64 = 0.0;
    let provisional = obj.certify(config.beta, config.driver.curvature(), &config.feasible_set, 0.0)?;
    for &t in &config.horizons {
        let p = params(config, &provisional, sigma2, t, &kernel)?;
        let h1 = match config.driver {
            DriverKind::Pl => pl_schedule(1, &p)?.h,
            DriverKind::Sc => sc_schedule(1, &p)?.h,
        };
        excursion = excursion.max(h1 * (config.d as f64).sqrt());
    }
    let certificate = obj.certify(config.beta, config.driver.curvature(), &config.feasible_set, excursion)?;
    Ok(GridSetup {
        certificate,
        x1: config.start()?,
        sigma2,
    })
}

fn params(
    config: &ExperimentConfig,
    cert: &ObjectiveCertificate,
    sigma2: f64,
    horizon: usize,
    kernel: &crate::kernel::Kernel,
) -> Result<ScheduleParams> {
    Ok(
        ScheduleParams::new(cert.alpha, cert.lbar, cert.holder_l, sigma2, config.d, horizon, kernel)?
            .with_h_multiplier(config.h_multiplier)?
            .with_sc_step(config.sc_step),
    )
}

/// Run every `(T, replication)` cell of the grid.
///
/// Cells run in parallel; the result is in canonical order (by `T`, then
/// replication). Cell seeds come from [`derive_seed`]. Diverged runs are
/// returned with `aborted = true` rather than as errors.
pub fn run_grid(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let setup = prepare(config)?;
    let obj = config.objective_id()?.build(config.d)?;
    let kernel = build_kernel(config.beta)?;
    let objective = config.objective_id()?.to_string();

    let cells: Vec<(usize, usize)> = config
        .horizons
        .iter()
        .flat_map(|&t| (0..config.replications).map(move |r| (t, r)))
        .collect();

    cells
        .par_iter()
        .map(|&(horizon, replication)| {
            let seed = derive_seed(config.seed, horizon as u64, replication as u64);
            let p = params(config, &setup.certificate, setup.sigma2, horizon, &kernel)?;
            let start = Instant::now();
            let run = match config.driver {
                DriverKind::Pl => run_pl(&obj, &config.noise, &kernel, &p, &setup.x1, seed),
                DriverKind::Sc => run_sc(&obj, &config.noise, &kernel, &p, &config.feasible_set, &setup.x1, seed),
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let (error, queries, aborted) = match run {
                Ok(tr) => (
                    obj.value(tr.output()) - setup.certificate.f_star,
                    tr.queries_used,
                    false,
                ),
                Err(Error::Diverged { round, .. }) => (f64::NAN, 2 * round, true),
                Err(e) => return Err(e),
            };
            Ok(ExperimentRecord {
                driver: config.driver,
                objective: objective.clone(),
                d: config.d,
                beta: config.beta,
                horizon,
                replication,
                seed,
                error,
                queries,
                wall_ms,
                aborted,
            })
        })
        .collect()
}
