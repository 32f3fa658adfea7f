//! Exhaustive cross-checks of the DoF formulas and programs over a grid of
//! configurations.

use serde::Serialize;

use crate::closed_form::{
    dof_hd_only, dof_piecewise_five_case, dof_self_interference, dof_theorem1, dof_theorem1_n1_special, dof_theorem2,
    five_case_matches,
};
use crate::config::{FdConfig, HdSplitConfig};
use crate::error::{DofError, Result};
use crate::lp::{enumerate_corners, is_feasible, objective, solve_achievable, solve_converse, Program};
use crate::par::{map_slice, Execution};
use crate::rational::{max_of, Rational};

/// Checks run on every grid configuration, in report order.
pub const CHECKS: [&str; 10] = [
    "closed form = achievable LP = converse LP",
    "five-case piecewise = min-form",
    "five-case boundary guards agree",
    "single-DL-user special case",
    "LP argmax feasible",
    "LP value = best enumerated corner",
    "achievable LP <= min(M1,N1) + min(M2,N2)",
    "achievable LP monotone in M1 and M2",
    "HD-only <= FD <= 2 x HD-only",
    "self-interference <= FD <= FD-user model",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub checked: usize,
    pub mismatches: usize,
    pub first_counterexample: Option<HdSplitConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub bound: usize,
    pub configs: usize,
    pub checks: Vec<CheckSummary>,
    /// Configs where the self-interference value falls below the HD-only
    /// value. Reported, not treated as a mismatch.
    pub si_below_hd_only: usize,
    /// Configs failing at least one check, in grid order.
    #[serde(skip)]
    pub failing: Vec<HdSplitConfig>,
}

impl GridReport {
    pub fn mismatched_configs(&self) -> usize {
        self.failing.len()
    }

    pub fn first_counterexample(&self) -> Option<HdSplitConfig> {
        self.failing.first().copied()
    }
}

fn check_config(cfg: &HdSplitConfig) -> [bool; CHECKS.len()] {
    let closed = dof_theorem1(cfg).value;
    let ach = solve_achievable(cfg).expect("grid configs have users");
    let con = solve_converse(cfg).expect("grid configs have users");

    let triple = ach.value == closed && con.value == closed;
    let piecewise = dof_piecewise_five_case(cfg) == closed;
    let matches = five_case_matches(cfg);
    let boundary = !matches.is_empty() && matches.iter().all(|(_, v)| *v == matches[0].1);
    let special = cfg.n1 != 1 || closed == dof_theorem1_n1_special(cfg.m2, cfg.n2);

    let feasible = is_feasible(cfg, Program::Achievable, &ach.argmax.lambda1, &ach.argmax.lambda2)
        && is_feasible(cfg, Program::Converse, &con.argmax.d_dl_sum, &con.argmax.d_ul_sum);
    let vertex_opt = [Program::Achievable, Program::Converse].into_iter().all(|p| {
        let corners = enumerate_corners(cfg, p).expect("grid configs have users");
        let best = max_of(corners.iter().map(|c| objective(cfg, p, &c.0, &c.1)));
        let value = if p == Program::Achievable { &ach.value } else { &con.value };
        best.as_ref() == Some(value)
    });
    let upper = ach.value <= Rational::from_count(cfg.m1.min(cfg.n1) + cfg.m2.min(cfg.n2));
    let monotone = [
        HdSplitConfig { m1: cfg.m1 + 1, ..*cfg },
        HdSplitConfig { m2: cfg.m2 + 1, ..*cfg },
    ]
    .iter()
    .all(|c| solve_achievable(c).map(|s| s.value >= ach.value).unwrap_or(false));

    let hd = dof_hd_only(cfg);
    let hd_sandwich = hd <= closed && closed <= &Rational::from_count(2) * &hd;
    let fd_users = dof_theorem2(&FdConfig::new(cfg.m1, cfg.m2, cfg.n1 + cfg.n2));
    let model_order = dof_self_interference(cfg) <= closed && closed <= fd_users;

    [
        triple,
        piecewise,
        boundary,
        special,
        feasible,
        vertex_opt,
        upper,
        monotone,
        hd_sandwich,
        model_order,
    ]
}

pub fn verify_grid(bound: usize) -> Result<GridReport> {
    verify_grid_with(bound, Execution::default())
}

/// Runs every check in [`CHECKS`] on `[1..=bound]^4`.
pub fn verify_grid_with(bound: usize, exec: Execution) -> Result<GridReport> {
    if bound == 0 {
        return Err(DofError::InvalidArgument("grid bound must be at least 1".into()));
    }
    let configs: Vec<HdSplitConfig> = HdSplitConfig::grid(bound).collect();
    let results = map_slice(exec, &configs, |cfg| {
        (check_config(cfg), dof_self_interference(cfg) < dof_hd_only(cfg))
    });

    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut failing = configs.iter().zip(&results).filter(|(_, r)| !r.0[i]).map(|(c, _)| *c);
            let first_counterexample = failing.next();
            let mismatches = first_counterexample.map_or(0, |_| 1 + failing.count());
            CheckSummary { name, checked: configs.len(), mismatches, first_counterexample }
        })
        .collect();
    let failing = configs.iter().zip(&results).filter(|(_, r)| r.0.iter().any(|ok| !ok)).map(|(c, _)| *c).collect();
    Ok(GridReport {
        bound,
        configs: configs.len(),
        checks,
        si_below_hd_only: results.iter().filter(|r| r.1).count(),
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_grid_has_no_mismatches() {
        let rep = verify_grid(8).unwrap();
        assert_eq!(rep.configs, 4096);
        assert_eq!(rep.mismatched_configs(), 0, "{:?}", rep.first_counterexample());
        assert!(rep.checks.iter().all(|c| c.mismatches == 0 && c.checked == 4096));
    }

    #[test]
    fn unit_grid() {
        let rep = verify_grid(1).unwrap();
        assert_eq!(rep.configs, 1);
        assert_eq!(rep.mismatched_configs(), 0);
    }

    #[test]
    fn zero_bound_rejected() {
        assert!(matches!(verify_grid(0), Err(DofError::InvalidArgument(_))));
    }

    #[test]
    fn strategies_agree() {
        assert_eq!(
            verify_grid_with(4, Execution::Sequential).unwrap(),
            verify_grid_with(4, Execution::Parallel).unwrap()
        );
    }
}
