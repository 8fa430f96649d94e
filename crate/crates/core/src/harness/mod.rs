//! Experiment orchestration: JSON configs, seeded replication grids, CSV
//! output, rate fits and the lemma and kernel verification suites.

mod checks;
mod config;
mod fit;
mod grid;
mod lemmas;
mod records;

pub use checks::{
    certify_objective, midpoint, verify_kernel, CertifyReport, KernelReport, MomentCheck, CHECK_REGION, MOMENT_TOL,
    RIEMANN_NODES, RIEMANN_TOL,
};
pub use config::{DriverKind, ExperimentConfig, X1Spec, PL_START};
pub use fit::{fit_rate, median, ols, summarize, RateFit, RatePoint, ERROR_FLOOR};
pub use grid::{prepare, run_grid, ExperimentRecord, GridSetup};
pub use lemmas::{
    verify_lemmas, BiasCell, BiasGrid, HalvingCheck, LemmaConfig, LemmaReport, VarianceCell, VarianceGrid,
    HALVING_RATIO,
};
pub use records::{emit_csv, load_csv, read_csv, to_csv_string, write_csv, CSV_HEADER};
