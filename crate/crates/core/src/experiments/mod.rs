//! Weight families, parameter sweeps, the exact 1D enumeration and asymptotic fits.

pub mod asymptotics;
pub mod family;
pub mod logistic;
pub mod oracle1d;
pub mod separation;
pub mod sweep;

pub use asymptotics::{asymptotics_fit, fit_power_law, AsymptoticTarget, AsymptoticsFit};
pub use family::{build_family, WeightFamily};
pub use logistic::{logistic_scenarios, LogisticReport};
pub use oracle1d::{oracle_1d, oracle_1d_grid, oracle_1d_resultant, Oracle1DReport, OracleForm, SolutionClass};
pub use separation::{f_separation_check, plateau_mask};
pub use sweep::{delta_sweep, empirical_delta_bar, SweepOptions, SweepRecord, SweepResult};
