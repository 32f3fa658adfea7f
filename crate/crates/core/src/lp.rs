//! Exact corner-point solvers for the two sum-DoF linear programs.
//!
//! Achievability: maximize `N1 l1 + N2 l2` over per-user loads with
//! `l1 + l2 <= 1`, `N1 l1 <= M1`, `N2 l2 <= M2`, `l >= 0`.
//!
//! Converse: maximize `dl + ul` with `dl <= min(M1,N1)`, `ul <= min(M2,N2)`,
//! `N2 dl + N1 ul <= N1 N2`, `dl, ul >= 0`.
//!
//! Both feasible sets are polygons with at most six vertices, so each is
//! solved by enumerating the candidate vertices, filtering by exact
//! feasibility, and taking the best objective.

use serde::Serialize;

use crate::config::HdSplitConfig;
use crate::error::{DofError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Program {
    Achievable,
    Converse,
}

/// Fraction of the extension used per DL user (`lambda1`) and per UL user
/// (`lambda2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadPair {
    pub lambda1: Rational,
    pub lambda2: Rational,
}

/// Sum DoF per direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionSums {
    pub d_dl_sum: Rational,
    pub d_ul_sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpSolution<P> {
    pub value: Rational,
    pub argmax: P,
    /// Distinct feasible corners examined.
    pub corner_count: usize,
}

pub type Corner = (Rational, Rational);

fn count(x: usize) -> Rational {
    Rational::from_count(x)
}

fn require_users(cfg: &HdSplitConfig) -> Result<()> {
    if cfg.n1 == 0 || cfg.n2 == 0 {
        return Err(DofError::InvalidArgument(format!(
            "the sum-DoF programs need n1 >= 1 and n2 >= 1, got n1={}, n2={}",
            cfg.n1, cfg.n2
        )));
    }
    Ok(())
}

/// Exact feasibility of `(x, y)` for `program`.
pub fn is_feasible(cfg: &HdSplitConfig, program: Program, x: &Rational, y: &Rational) -> bool {
    if x.is_negative() || y.is_negative() {
        return false;
    }
    let (n1, n2) = (count(cfg.n1), count(cfg.n2));
    match program {
        Program::Achievable => {
            x + y <= Rational::one() && &n1 * x <= count(cfg.m1) && &n2 * y <= count(cfg.m2)
        }
        Program::Converse => {
            *x <= count(cfg.m1.min(cfg.n1))
                && *y <= count(cfg.m2.min(cfg.n2))
                && &n2 * x + &n1 * y <= count(cfg.n1 * cfg.n2)
        }
    }
}

/// Objective value at `(x, y)`.
pub fn objective(cfg: &HdSplitConfig, program: Program, x: &Rational, y: &Rational) -> Rational {
    match program {
        Program::Achievable => count(cfg.n1) * x + count(cfg.n2) * y,
        Program::Converse => x + y,
    }
}

fn candidates(cfg: &HdSplitConfig, program: Program) -> Vec<Corner> {
    let zero = Rational::zero;
    match program {
        Program::Achievable => {
            let c1 = Rational::ratio(cfg.m1, cfg.n1).expect("n1 >= 1");
            let c2 = Rational::ratio(cfg.m2, cfg.n2).expect("n2 >= 1");
            let one = Rational::one();
            vec![
                (zero(), zero()),
                (c1.clone().min(one.clone()), zero()),
                (zero(), c2.clone().min(one.clone())),
                (c1.clone(), c2.clone()),
                (c1.clone(), &one - &c1),
                (&one - &c2, c2),
            ]
        }
        Program::Converse => {
            let c1 = count(cfg.m1.min(cfg.n1));
            let c2 = count(cfg.m2.min(cfg.n2));
            let (n1, n2) = (count(cfg.n1), count(cfg.n2));
            let prod = count(cfg.n1 * cfg.n2);
            // N2 x + N1 y = N1 N2 against x = c1, y = c2, x = 0, y = 0
            let y_at_c1 = &(&prod - &(&n2 * &c1)) / &n1;
            let x_at_c2 = &(&prod - &(&n1 * &c2)) / &n2;
            vec![
                (zero(), zero()),
                (c1.clone(), zero()),
                (zero(), c2.clone()),
                (c1.clone(), c2.clone()),
                (c1, y_at_c1),
                (x_at_c2, c2),
                (zero(), n2),
                (n1, zero()),
            ]
        }
    }
}

/// Every feasible vertex of the program's polygon, each once, in candidate
/// order.
pub fn enumerate_corners(cfg: &HdSplitConfig, program: Program) -> Result<Vec<Corner>> {
    require_users(cfg)?;
    let mut out: Vec<Corner> = Vec::with_capacity(6);
    for (x, y) in candidates(cfg, program) {
        if is_feasible(cfg, program, &x, &y) && !out.iter().any(|c| c.0 == x && c.1 == y) {
            out.push((x, y));
        }
    }
    Ok(out)
}

fn solve(cfg: &HdSplitConfig, program: Program) -> Result<(Rational, Corner, usize)> {
    let corners = enumerate_corners(cfg, program)?;
    let n = corners.len();
    let (value, best) = corners
        .into_iter()
        .map(|c| (objective(cfg, program, &c.0, &c.1), c))
        // (value, x, y) ordering: ties go to the lexicographically largest point
        .max_by(|a, b| (&a.0, &a.1 .0, &a.1 .1).cmp(&(&b.0, &b.1 .0, &b.1 .1)))
        .expect("origin is always feasible");
    Ok((value, best, n))
}

/// Exact optimum of the achievability program.
pub fn solve_achievable(cfg: &HdSplitConfig) -> Result<LpSolution<LoadPair>> {
    let (value, (lambda1, lambda2), corner_count) = solve(cfg, Program::Achievable)?;
    Ok(LpSolution { value, argmax: LoadPair { lambda1, lambda2 }, corner_count })
}

/// Exact optimum of the converse program.
pub fn solve_converse(cfg: &HdSplitConfig) -> Result<LpSolution<DirectionSums>> {
    let (value, (d_dl_sum, d_ul_sum), corner_count) = solve(cfg, Program::Converse)?;
    Ok(LpSolution { value, argmax: DirectionSums { d_dl_sum, d_ul_sum }, corner_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::dof_theorem1;
    use crate::rational::max_of;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn hd(m1: usize, m2: usize, n1: usize, n2: usize) -> HdSplitConfig {
        HdSplitConfig::new(m1, m2, n1, n2)
    }

    /// Exhaustive scan of the rational grid with step `1/(4 N1 N2)` (scaled
    /// by the box size for the converse). Every vertex of both polygons lies
    /// on this grid, so the scan finds the exact optimum.
    fn brute_force(cfg: &HdSplitConfig, program: Program) -> Rational {
        let den = 4 * cfg.n1 * cfg.n2;
        let steps = match program {
            Program::Achievable => den,
            Program::Converse => den * cfg.n1.max(cfg.n2).max(cfg.m1).max(cfg.m2),
        };
        let den = den as i64;
        let mut best = Rational::zero();
        for i in 0..=steps as i64 {
            let x = r(i, den);
            if !is_feasible(cfg, program, &x, &Rational::zero()) {
                break;
            }
            for j in 0..=steps as i64 {
                let y = r(j, den);
                if !is_feasible(cfg, program, &x, &y) {
                    break;
                }
                let v = objective(cfg, program, &x, &y);
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    /// All pairwise intersections of the constraint lines that are feasible.
    fn all_line_vertices(cfg: &HdSplitConfig, program: Program) -> Vec<Corner> {
        // lines a x + b y = c
        let lines: Vec<(Rational, Rational, Rational)> = match program {
            Program::Achievable => vec![
                (r(1, 1), r(0, 1), r(0, 1)),
                (r(0, 1), r(1, 1), r(0, 1)),
                (r(1, 1), r(1, 1), r(1, 1)),
                (count(cfg.n1), r(0, 1), count(cfg.m1)),
                (r(0, 1), count(cfg.n2), count(cfg.m2)),
            ],
            Program::Converse => vec![
                (r(1, 1), r(0, 1), r(0, 1)),
                (r(0, 1), r(1, 1), r(0, 1)),
                (r(1, 1), r(0, 1), count(cfg.m1.min(cfg.n1))),
                (r(0, 1), r(1, 1), count(cfg.m2.min(cfg.n2))),
                (count(cfg.n2), count(cfg.n1), count(cfg.n1 * cfg.n2)),
            ],
        };
        let mut out: Vec<Corner> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = &lines[i];
                let (a2, b2, c2) = &lines[j];
                let det = a1 * b2 - b1 * a2;
                if det.is_zero() {
                    continue;
                }
                let x = &(c1 * b2 - b1 * c2) / &det;
                let y = &(a1 * c2 - c1 * a2) / &det;
                if is_feasible(cfg, program, &x, &y) && !out.contains(&(x.clone(), y.clone())) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn achievable_examples() {
        let s = solve_achievable(&hd(1, 1, 2, 2)).unwrap();
        assert_eq!(s.value, r(2, 1));
        assert_eq!(s.argmax, LoadPair { lambda1: r(1, 2), lambda2: r(1, 2) });

        let s = solve_achievable(&hd(3, 3, 2, 2)).unwrap();
        assert_eq!(s.value, r(2, 1));
        assert_eq!(s.argmax, LoadPair { lambda1: r(1, 1), lambda2: r(0, 1) });

        let s = solve_achievable(&hd(2, 2, 1, 4)).unwrap();
        assert_eq!(s.value, r(5, 2));
        assert_eq!(s.argmax, LoadPair { lambda1: r(1, 2), lambda2: r(1, 2) });
    }

    #[test]
    fn converse_examples() {
        assert_eq!(solve_converse(&hd(1, 1, 2, 2)).unwrap().value, r(2, 1));
        let s = solve_converse(&hd(5, 5, 12, 12)).unwrap();
        assert_eq!(s.value, r(10, 1));
        assert_eq!(s.argmax, DirectionSums { d_dl_sum: r(5, 1), d_ul_sum: r(5, 1) });
        let cfg = hd(16, 8, 1, 4);
        assert_eq!(solve_converse(&cfg).unwrap().value, dof_theorem1(&cfg).value);
    }

    #[test]
    fn corner_examples() {
        let c = enumerate_corners(&hd(1, 1, 2, 2), Program::Achievable).unwrap();
        assert_eq!(c, vec![(r(0, 1), r(0, 1)), (r(1, 2), r(0, 1)), (r(0, 1), r(1, 2)), (r(1, 2), r(1, 2))]);

        let c = enumerate_corners(&hd(3, 3, 2, 2), Program::Achievable).unwrap();
        assert_eq!(c, vec![(r(0, 1), r(0, 1)), (r(1, 1), r(0, 1)), (r(0, 1), r(1, 1))]);

        let c = enumerate_corners(&hd(1, 2, 2, 2), Program::Achievable).unwrap();
        assert!(c.contains(&(r(1, 2), r(1, 2))));
        assert!(c.contains(&(r(0, 1), r(1, 1))));
    }

    #[test]
    fn zero_users_rejected() {
        assert!(solve_achievable(&hd(1, 1, 0, 2)).is_err());
        assert!(solve_converse(&hd(1, 1, 2, 0)).is_err());
        assert!(enumerate_corners(&hd(1, 1, 0, 0), Program::Converse).is_err());
    }

    #[test]
    fn corners_match_line_intersections() {
        for cfg in HdSplitConfig::grid(6) {
            for program in [Program::Achievable, Program::Converse] {
                let mut got = enumerate_corners(&cfg, program).unwrap();
                let mut want = all_line_vertices(&cfg, program);
                got.sort();
                want.sort();
                assert_eq!(got, want, "{cfg:?} {program:?}");
                // polygon has between 3 and 5 vertices (Fig-8 shapes) or a
                // degenerate segment when both caps are zero
                assert!((1..=5).contains(&got.len()), "{cfg:?} {program:?}: {}", got.len());
            }
        }
    }

    #[test]
    fn brute_force_grid_agrees() {
        let extra = [hd(2, 2, 1, 4), hd(16, 8, 1, 4), hd(3, 5, 4, 6), hd(5, 2, 6, 3)];
        for cfg in HdSplitConfig::grid(3).chain(extra) {
            assert_eq!(solve_achievable(&cfg).unwrap().value, brute_force(&cfg, Program::Achievable), "{cfg:?}");
            assert_eq!(solve_converse(&cfg).unwrap().value, brute_force(&cfg, Program::Converse), "{cfg:?}");
        }
    }

    #[test]
    fn triple_equality_and_lp_invariants() {
        for cfg in HdSplitConfig::grid(8) {
            let ach = solve_achievable(&cfg).unwrap();
            let con = solve_converse(&cfg).unwrap();
            let closed = dof_theorem1(&cfg).value;
            assert_eq!(ach.value, closed, "{cfg:?}");
            assert_eq!(con.value, closed, "{cfg:?}");

            assert!(is_feasible(&cfg, Program::Achievable, &ach.argmax.lambda1, &ach.argmax.lambda2));
            assert!(is_feasible(&cfg, Program::Converse, &con.argmax.d_dl_sum, &con.argmax.d_ul_sum));
            assert_eq!(objective(&cfg, Program::Achievable, &ach.argmax.lambda1, &ach.argmax.lambda2), ach.value);

            let corners = enumerate_corners(&cfg, Program::Achievable).unwrap();
            assert_eq!(corners.len(), ach.corner_count);
            let best = max_of(corners.iter().map(|c| objective(&cfg, Program::Achievable, &c.0, &c.1))).unwrap();
            assert_eq!(best, ach.value);

            assert!(ach.value <= count(cfg.m1.min(cfg.n1) + cfg.m2.min(cfg.n2)));
        }
    }

    #[test]
    fn monotone_in_antennas() {
        for cfg in HdSplitConfig::grid(7) {
            let v = solve_achievable(&cfg).unwrap().value;
            let more_tx = HdSplitConfig { m1: cfg.m1 + 1, ..cfg };
            let more_rx = HdSplitConfig { m2: cfg.m2 + 1, ..cfg };
            assert!(solve_achievable(&more_tx).unwrap().value >= v);
            assert!(solve_achievable(&more_rx).unwrap().value >= v);
        }
    }
}
