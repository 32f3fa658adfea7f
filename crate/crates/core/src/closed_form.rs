//! Closed-form sum DoF expressions, evaluated exactly.
//!
//! All functions are total. Configurations without users in one direction
//! collapse to the single-direction value (`min(M2, N2)` for pure uplink,
//! `min(M1, N1)` for pure downlink, `0` with no users at all); this matches
//! the achievability LP with the missing load removed.

use std::fmt;

use serde::Serialize;

use crate::config::{FdConfig, HdSplitConfig};
use crate::rational::{max_of, min_of, Rational};

/// Which argument of the min-form attains the sum DoF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BindingTerm {
    /// `M1 + M2`
    AntennaSum,
    /// `max(N1, N2)`
    UserMax,
    /// `max(a1, a2)` with `a1 = M1 + N2(N1-M1)/N1`, `a2 = M2 + N1(N2-M2)/N2`
    AlignmentMax,
    /// `n1 = 0`: `min(M2, N2)`
    PureUplink,
    /// `n2 = 0`: `min(M1, N1)`
    PureDownlink,
    NoUsers,
}

impl BindingTerm {
    pub fn label(&self) -> &'static str {
        match self {
            BindingTerm::AntennaSum => "M1+M2",
            BindingTerm::UserMax => "max(N1,N2)",
            BindingTerm::AlignmentMax => "max(a1,a2)",
            BindingTerm::PureUplink => "min(M2,N2)",
            BindingTerm::PureDownlink => "min(M1,N1)",
            BindingTerm::NoUsers => "no users",
        }
    }
}

impl fmt::Display for BindingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DofBreakdown {
    pub value: Rational,
    /// Earliest term (in the order `M1+M2`, `max(N1,N2)`, `max(a1,a2)`) whose
    /// value equals `value`.
    pub binding_term: BindingTerm,
    /// Every term of the minimum with its value, in order.
    pub terms: Vec<(BindingTerm, Rational)>,
}

fn count(x: usize) -> Rational {
    Rational::from_count(x)
}

/// `a1 = M1 + N2 (N1 - M1) / N1`; requires `n1 >= 1`.
pub fn alignment_term_dl(cfg: &HdSplitConfig) -> Rational {
    let num = Rational::from_count(cfg.n2) * (count(cfg.n1) - count(cfg.m1));
    count(cfg.m1) + &num / &count(cfg.n1)
}

/// `a2 = M2 + N1 (N2 - M2) / N2`; requires `n2 >= 1`.
pub fn alignment_term_ul(cfg: &HdSplitConfig) -> Rational {
    let num = Rational::from_count(cfg.n1) * (count(cfg.n2) - count(cfg.m2));
    count(cfg.m2) + &num / &count(cfg.n2)
}

fn degenerate(cfg: &HdSplitConfig) -> Option<(BindingTerm, Rational)> {
    match (cfg.n1, cfg.n2) {
        (0, 0) => Some((BindingTerm::NoUsers, Rational::zero())),
        (0, _) => Some((BindingTerm::PureUplink, count(cfg.m2.min(cfg.n2)))),
        (_, 0) => Some((BindingTerm::PureDownlink, count(cfg.m1.min(cfg.n1)))),
        _ => None,
    }
}

/// Sum DoF of the FD-BS / HD-user network:
/// `min{M1+M2, max(N1,N2), max(a1, a2)}`.
pub fn dof_theorem1(cfg: &HdSplitConfig) -> DofBreakdown {
    if let Some((binding_term, value)) = degenerate(cfg) {
        return DofBreakdown { value: value.clone(), binding_term, terms: vec![(binding_term, value)] };
    }
    let terms = vec![
        (BindingTerm::AntennaSum, count(cfg.m1 + cfg.m2)),
        (BindingTerm::UserMax, count(cfg.n1.max(cfg.n2))),
        (
            BindingTerm::AlignmentMax,
            alignment_term_dl(cfg).max(alignment_term_ul(cfg)),
        ),
    ];
    let value = min_of(terms.iter().map(|(_, v)| v.clone())).expect("three terms");
    let binding_term = terms.iter().find(|(_, v)| *v == value).map(|(t, _)| *t).expect("min is a term");
    DofBreakdown { value, binding_term, terms }
}

/// Single-DL-user value: `N2` when `M2 >= N2`, else `M2 + (N2 - M2)/N2`.
/// `n2 = 0` gives 0.
pub fn dof_theorem1_n1_special(m2: usize, n2: usize) -> Rational {
    if n2 == 0 {
        return Rational::zero();
    }
    if m2 >= n2 {
        count(n2)
    } else {
        count(m2) + Rational::ratio(n2 - m2, n2).expect("n2 > 0")
    }
}

/// The five regimes of the achievability LP, by the shape of its feasible
/// region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FiveCase {
    /// `M1 >= N1, M2 >= N2`
    I,
    /// `M1 <= N1, M2 >= N2`
    II,
    /// `M1 >= N1, M2 <= N2`
    III,
    /// `M1 <= N1, M2 <= N2, M1 N2 + M2 N1 >= N1 N2`
    IV,
    /// `M1 <= N1, M2 <= N2, M1 N2 + M2 N1 <= N1 N2`
    V,
}

/// Every case whose guard holds, with that case's value. Boundary configs
/// match several cases; on those all values coincide.
pub fn five_case_matches(cfg: &HdSplitConfig) -> Vec<(FiveCase, Rational)> {
    let HdSplitConfig { m1, m2, n1, n2 } = *cfg;
    if n1 == 0 || n2 == 0 {
        return Vec::new();
    }
    let a1 = alignment_term_dl(cfg);
    let a2 = alignment_term_ul(cfg);
    let cross = m1 * n2 + m2 * n1;
    let prod = n1 * n2;
    let mut out = Vec::with_capacity(2);
    if m1 >= n1 && m2 >= n2 {
        out.push((FiveCase::I, count(n1.max(n2))));
    }
    if m1 <= n1 && m2 >= n2 {
        out.push((FiveCase::II, count(n2).max(a1.clone())));
    }
    if m1 >= n1 && m2 <= n2 {
        out.push((FiveCase::III, count(n1).max(a2.clone())));
    }
    if m1 <= n1 && m2 <= n2 && cross >= prod {
        out.push((FiveCase::IV, a1.clone().max(a2.clone())));
    }
    if m1 <= n1 && m2 <= n2 && cross <= prod {
        out.push((FiveCase::V, count(m1 + m2)));
    }
    out
}

/// Piecewise five-case form of the achievable sum DoF. Uses the first
/// matching case; degenerate user counts follow the min-form conventions.
pub fn dof_piecewise_five_case(cfg: &HdSplitConfig) -> Rational {
    if let Some((_, value)) = degenerate(cfg) {
        return value;
    }
    five_case_matches(cfg).into_iter().next().map(|(_, v)| v).expect("the five guards cover every config")
}

/// Sum DoF of the FD-BS / FD-user network: `min(M1 + M2, N)`.
pub fn dof_theorem2(cfg: &FdConfig) -> Rational {
    count((cfg.m1 + cfg.m2).min(cfg.n))
}

/// Sum DoF of the FD-BS / HD-user network when BS self-interference is not
/// suppressed.
pub fn dof_self_interference(cfg: &HdSplitConfig) -> Rational {
    let HdSplitConfig { m1, m2, n1, n2 } = *cfg;
    let n_max = n1.max(n2);
    if n_max == 0 {
        return Rational::zero();
    }
    let dl_excess = (count(n1) - count(n2)).positive_part();
    let ul_excess = (count(n2) - count(n1)).positive_part();
    let numerator = count(n1 * n2) + count(m1.min(n1)) * dl_excess + count(m2.min(n2)) * ul_excess;
    let first = &numerator / &count(n_max);
    min_of([
        first,
        count(m1 + n2),
        count(m2 + n1),
        count(m1.max(m2)),
        count(n_max),
    ])
    .expect("five terms")
}

/// Sum DoF when the BS serves only one direction: `max(min(M1,N1), min(M2,N2))`.
pub fn dof_hd_only(cfg: &HdSplitConfig) -> Rational {
    count(cfg.m1.min(cfg.n1).max(cfg.m2.min(cfg.n2)))
}

/// Membership in the symmetric FD-user DoF region
/// `{dl <= min(M,N), ul <= min(M,N), dl + ul <= min(2M, N)}`.
/// Negative coordinates are outside.
pub fn sahai_region_contains(m: usize, n: usize, d_dl_sum: &Rational, d_ul_sum: &Rational) -> bool {
    if d_dl_sum.is_negative() || d_ul_sum.is_negative() {
        return false;
    }
    let per_direction = count(m.min(n));
    *d_dl_sum <= per_direction && *d_ul_sum <= per_direction && d_dl_sum + d_ul_sum <= count((2 * m).min(n))
}

/// Largest `dl + ul` inside the region, found by scanning the region's
/// candidate vertices.
pub fn sahai_max_sum(m: usize, n: usize) -> Rational {
    let c = count(m.min(n));
    let s = count((2 * m).min(n));
    let candidates = [
        (Rational::zero(), Rational::zero()),
        (c.clone(), Rational::zero()),
        (Rational::zero(), c.clone()),
        (c.clone(), c.clone()),
        (c.clone(), &s - &c),
        (&s - &c, c.clone()),
    ];
    max_of(
        candidates
            .into_iter()
            .filter(|(x, y)| sahai_region_contains(m, n, x, y))
            .map(|(x, y)| x + y),
    )
    .unwrap_or_default()
}
