//! Degrees-of-freedom analysis of a multiantenna full-duplex base station
//! serving half-duplex downlink and uplink users.
//!
//! Exact DoF values are [`Rational`]s. The closed forms in [`closed_form`]
//! are cross-checked against the two linear programs in [`lp`]. [`ia`] and
//! [`rate`] simulate the single-downlink-user alignment scheme numerically.

pub mod channels;
pub mod cli;
pub mod closed_form;
pub mod config;
pub mod error;
pub mod figures;
pub mod ia;
pub mod linalg;
pub mod lp;
pub mod par;
pub mod rate;
pub mod rational;
pub mod scheduler;
pub mod verify;

pub use closed_form::{
    dof_hd_only, dof_piecewise_five_case, dof_self_interference, dof_theorem1, dof_theorem1_n1_special, dof_theorem2,
    sahai_region_contains, BindingTerm, DofBreakdown,
};
pub use config::{FdConfig, HdSplitConfig, RngSeed};
pub use error::{DofError, Result};
pub use par::Execution;
pub use rational::Rational;
