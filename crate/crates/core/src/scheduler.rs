//! Choosing how many of `N` half-duplex users go downlink.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::closed_form::{dof_hd_only, dof_self_interference, dof_theorem1};
use crate::config::HdSplitConfig;
use crate::error::DofError;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    /// FD BS with perfect self-interference suppression.
    FdNoSi,
    /// FD BS with residual self-interference.
    FdWithSi,
    /// BS serves one direction at a time.
    HdOnly,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::FdNoSi, Mode::FdWithSi, Mode::HdOnly];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::FdNoSi => "fd-no-si",
            Mode::FdWithSi => "fd-with-si",
            Mode::HdOnly => "hd-only",
        }
    }

    /// Sum DoF of `cfg` under this mode.
    pub fn evaluate(&self, cfg: &HdSplitConfig) -> Rational {
        match self {
            Mode::FdNoSi => dof_theorem1(cfg).value,
            Mode::FdWithSi => dof_self_interference(cfg),
            Mode::HdOnly => dof_hd_only(cfg),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = DofError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| DofError::InvalidArgument(format!("unknown mode '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    pub n1_opt: usize,
    pub n2_opt: usize,
    pub value: Rational,
    pub mode: Mode,
    /// `(n1, value)` for `n1 = 0..=N`.
    pub curve: Vec<(usize, Rational)>,
}

/// Sum DoF for every split `n1 + n2 = n`, `n1` ascending.
pub fn split_curve(m1: usize, m2: usize, n: usize, mode: Mode) -> Vec<(usize, Rational)> {
    (0..=n).map(|n1| (n1, mode.evaluate(&HdSplitConfig::new(m1, m2, n1, n - n1)))).collect()
}

/// Best split by exhaustive sweep; ties go to the smallest `n1`.
pub fn optimal_split(m1: usize, m2: usize, n: usize, mode: Mode) -> SplitResult {
    let curve = split_curve(m1, m2, n, mode);
    let (n1_opt, value) = curve
        .iter()
        .fold(None::<&(usize, Rational)>, |best, item| match best {
            Some(b) if b.1 >= item.1 => Some(b),
            _ => Some(item),
        })
        .cloned()
        .expect("curve has n + 1 >= 1 points");
    SplitResult { n1_opt, n2_opt: n - n1_opt, value, mode, curve }
}
