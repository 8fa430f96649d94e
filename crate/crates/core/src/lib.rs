//! Zeroth-order stochastic optimization of additive objectives.
//!
//! The gradient is estimated from two noisy function values at
//! `x ± h r`, where `r` is uniform on `[-1, 1]^d` and each coordinate is
//! weighted by a Legendre-polynomial kernel `K(r_j)`. The kernel cancels
//! the Taylor terms of orders `2..=ℓ`, so the bias of the estimate scales as
//! `h^{β-1}` for `β`-Hölder components.
//!
//! Modules:
//! - [`kernel`]: kernel construction and its moment constants.
//! - [`estimator`]: the two-point estimator and Monte Carlo diagnostics.
//! - [`optimizer`]: projected descent drivers and their schedules.
//! - [`objectives`]: a zoo of additive objectives, certificates and noise models.
//! - [`harness`]: seeded experiment grids, CSV output and rate fits.

pub mod error;
pub mod estimator;
pub mod harness;
pub mod kernel;
pub mod objectives;
pub mod optimizer;
pub mod rng;

pub use error::{Error, Result};
pub use estimator::{estimate_gradient, GradientOracle, GradientSample, RandomDirection, ZerothOrderOracle};
pub use kernel::{build_kernel, Kernel, SmoothnessOrder};
pub use objectives::{AdditiveObjective, Component1D, NoiseModel, ObjectiveCertificate, ObjectiveId};
pub use optimizer::{run_pl, run_sc, FeasibleSet, ScheduleParams, Trajectory};
