//! Interference alignment for one DL user over an `N2`-slot extension.
//!
//! With `M2 <= N2`, the BS sends `N2 - M2` symbols to the single DL user on
//! random beams in the `M1 N2`-dimensional extended transmit space, and each
//! of the `N2` UL users sends `M2` symbols on `N2`-dimensional beams. UL user
//! 1 picks `M2` random beams; every other user `j` pre-inverts its own
//! diagonal channel to the DL user,
//!
//! ```text
//! v_jk = H_j^{-1} H_1 v_1k,
//! ```
//!
//! so the `k`-th symbols of all UL users land on the same direction at the
//! DL user. Interference there then spans only `M2` of the `N2` dimensions,
//! leaving `N2 - M2` for the BS's streams, while the BS still separates all
//! `M2 N2` uplink symbols. That is `(N2 - M2 + M2 N2) / N2` symbols per slot.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{gen_channels, nonzero_normal, ExtendedChannels};
use crate::config::RngSeed;
use crate::error::{DofError, Result};
use crate::linalg::{hstack, normalize_columns, rank};
use crate::par::{map_range, Execution};
use crate::rational::Rational;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Which single-DL-user scheme applies to `(M2, N2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum N1Scheme {
    /// `M2 <= N2`: alignment over `slots = N2` slots.
    Alignment { slots: usize, dl_streams: usize, ul_streams_per_user: usize },
    /// `M2 > N2`: the BS simply receives all `N2` users; nothing to align.
    PureUplink { streams: usize },
}

impl N1Scheme {
    pub fn for_config(m2: usize, n2: usize) -> Result<N1Scheme> {
        if n2 == 0 {
            return Err(DofError::InvalidArgument("need at least one UL user".into()));
        }
        Ok(if m2 > n2 {
            N1Scheme::PureUplink { streams: n2 }
        } else {
            N1Scheme::Alignment { slots: n2, dl_streams: n2 - m2, ul_streams_per_user: m2 }
        })
    }

    pub fn symbols_per_slot(&self) -> Rational {
        match *self {
            N1Scheme::Alignment { slots, dl_streams, ul_streams_per_user } => {
                Rational::ratio(dl_streams + ul_streams_per_user * slots, slots).expect("slots >= 1")
            }
            N1Scheme::PureUplink { streams } => Rational::from_count(streams),
        }
    }
}

fn unsupported_pure_uplink() -> DofError {
    DofError::UnsupportedRegime("M2 > N2 uses pure UL reception".into())
}

/// Time-extended beams: `dl` is `(M1 N2) x (N2 - M2)`, `ul[j]` is `N2 x M2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    dl: DMatrix<f64>,
    ul: Vec<DMatrix<f64>>,
}

impl BeamformerSet {
    /// Wraps explicit beams; every `ul[j]` must share a shape.
    pub fn new(dl: DMatrix<f64>, ul: Vec<DMatrix<f64>>) -> Result<Self> {
        let Some(first) = ul.first() else {
            return Err(DofError::InvalidArgument("need beams for at least one UL user".into()));
        };
        let shape = first.shape();
        if ul.iter().any(|u| u.shape() != shape) {
            return Err(DofError::InvalidArgument("UL beam matrices differ in shape".into()));
        }
        Ok(BeamformerSet { dl, ul })
    }

    pub fn dl(&self) -> &DMatrix<f64> {
        &self.dl
    }

    /// Beams of UL user `j` (0-based), one column per symbol.
    pub fn ul(&self, j: usize) -> &DMatrix<f64> {
        &self.ul[j]
    }

    pub fn ul_users(&self) -> usize {
        self.ul.len()
    }

    pub fn dl_streams(&self) -> usize {
        self.dl.ncols()
    }

    pub fn ul_streams_per_user(&self) -> usize {
        self.ul[0].ncols()
    }

    pub fn total_ul_streams(&self) -> usize {
        self.ul.iter().map(DMatrix::ncols).sum()
    }
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| nonzero_normal(rng))
}

/// Builds the aligned beamformers for `ch` (which must use `t = N2`).
/// All columns are rescaled to unit norm.
pub fn build_beamformers(ch: &ExtendedChannels, m1: usize, m2: usize, seed: RngSeed) -> Result<BeamformerSet> {
    let n2 = ch.n2();
    if m2 > n2 {
        return Err(unsupported_pure_uplink());
    }
    if m1 == 0 || m2 == 0 {
        return Err(DofError::InvalidArgument("alignment needs m1 >= 1 and m2 >= 1".into()));
    }
    if ch.t() != n2 || ch.m1() != m1 || ch.m2() != m2 {
        return Err(DofError::InvalidArgument(format!(
            "channels (t={}, m1={}, m2={}, n2={}) do not match an N2-slot extension for m1={m1}, m2={m2}",
            ch.t(),
            ch.m1(),
            ch.m2(),
            n2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut dl = random_matrix(&mut rng, m1 * n2, n2 - m2);
    normalize_columns(&mut dl);
    let mut first = random_matrix(&mut rng, n2, m2);
    normalize_columns(&mut first);

    let h1 = ch.h_diag(0);
    let mut ul = Vec::with_capacity(n2);
    ul.push(first.clone());
    for j in 1..n2 {
        let hj = ch.h_diag(j);
        // diagonal channels: H_j^{-1} H_1 acts entrywise
        let mut v = DMatrix::from_fn(n2, m2, |row, col| h1[row] / hj[row] * first[(row, col)]);
        normalize_columns(&mut v);
        ul.push(v);
    }
    BeamformerSet::new(dl, ul)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Largest `|| u_jk/|u_jk| - u_1k/|u_1k| ||` with `u_jk = H_j v_jk`; the
    /// directions received at the DL user. Scale-free, so beam
    /// normalization does not affect it.
    pub alignment_residual: f64,
    /// Rank of `[G dl | H_1 ul_1]` at the DL user (target `N2`).
    pub dl_rank: usize,
    /// Rank of the aligned interference `H_1 ul_1` alone (target `M2`).
    pub interference_rank: usize,
    /// Rank of the stacked received UL beams `F_j ul_j` (target `M2 N2`).
    pub bs_rank: usize,
    pub symbols_per_slot: Rational,
}

impl VerificationReport {
    pub fn passes(&self, m2: usize, n2: usize, tol: f64) -> bool {
        self.alignment_residual <= tol
            && self.dl_rank == n2
            && self.interference_rank == m2
            && self.bs_rank == m2 * n2
    }
}

/// Received interference direction mismatch across users, for each symbol
/// index. Zero vectors count as infinitely misaligned.
pub fn alignment_residual(ch: &ExtendedChannels, bf: &BeamformerSet) -> f64 {
    let reference = ch.h_bar(0) * bf.ul(0);
    let mut worst = 0.0_f64;
    for j in 0..bf.ul_users() {
        let received = ch.h_bar(j) * bf.ul(j);
        for k in 0..received.ncols() {
            let a = received.column(k);
            let b = reference.column(k);
            let (na, nb) = (a.norm(), b.norm());
            let r = if na == 0.0 || nb == 0.0 { f64::INFINITY } else { (a / na - b / nb).norm() };
            worst = worst.max(r);
        }
    }
    worst
}

/// Received-signal matrices used by the decodability checks.
pub(crate) struct ReceivedBeams {
    /// `G dl`, `N2 x (N2 - M2)`.
    pub dl_signal: DMatrix<f64>,
    /// `H_1 ul_1`, `N2 x M2`.
    pub interference: DMatrix<f64>,
    /// `[F_1 ul_1 | ... | F_N2 ul_N2]`, `(M2 N2) x (M2 N2)`.
    pub bs_stack: DMatrix<f64>,
}

pub(crate) fn received_beams(ch: &ExtendedChannels, bf: &BeamformerSet) -> Result<ReceivedBeams> {
    if bf.ul_users() != ch.n2()
        || bf.dl().nrows() != ch.g_bar().ncols()
        || bf.ul(0).nrows() != ch.t()
    {
        return Err(DofError::InvalidArgument("beamformer shapes do not match the channels".into()));
    }
    let dl_signal = ch.g_bar() * bf.dl();
    let interference = ch.h_bar(0) * bf.ul(0);
    let received: Vec<DMatrix<f64>> = (0..ch.n2()).map(|j| ch.f_bar(j) * bf.ul(j)).collect();
    let refs: Vec<&DMatrix<f64>> = received.iter().collect();
    let bs_stack = hstack(ch.m2() * ch.t(), &refs);
    Ok(ReceivedBeams { dl_signal, interference, bs_stack })
}

/// Numeric check of alignment and of decodability at both receivers.
pub fn verify(ch: &ExtendedChannels, bf: &BeamformerSet, tol: f64) -> Result<VerificationReport> {
    let rx = received_beams(ch, bf)?;
    let dl_view = hstack(ch.t(), &[&rx.dl_signal, &rx.interference]);
    let slots = ch.t();
    Ok(VerificationReport {
        alignment_residual: alignment_residual(ch, bf),
        dl_rank: rank(&dl_view, tol),
        interference_rank: rank(&rx.interference, tol),
        bs_rank: rank(&rx.bs_stack, tol),
        symbols_per_slot: Rational::ratio(bf.dl_streams() + bf.total_ul_streams(), slots)?,
    })
}

/// Seeds for trial `index`: channels and beams draw from separate streams.
pub(crate) fn trial_seeds(seed: RngSeed, index: u64) -> (RngSeed, RngSeed) {
    let sub = seed.derive(index);
    (sub.derive(0), sub.derive(1))
}

/// Channels and aligned beams for one trial.
pub fn trial_instance(m1: usize, m2: usize, n2: usize, seed: RngSeed, index: u64) -> Result<(ExtendedChannels, BeamformerSet)> {
    let (ch_seed, bf_seed) = trial_seeds(seed, index);
    let ch = gen_channels(m1, m2, n2, n2, ch_seed)?;
    let bf = build_beamformers(&ch, m1, m2, bf_seed)?;
    Ok((ch, bf))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub m1: usize,
    pub m2: usize,
    pub n2: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub failures: usize,
    /// Index of the first failing trial.
    pub first_failure: Option<usize>,
    pub max_residual: f64,
    pub min_dl_rank: usize,
    pub min_interference_rank: usize,
    pub min_bs_rank: usize,
    pub symbols_per_slot: Rational,
}

pub fn monte_carlo(m1: usize, m2: usize, n2: usize, trials: usize, seed: RngSeed, tol: f64) -> Result<MonteCarloReport> {
    monte_carlo_with(m1, m2, n2, trials, seed, tol, Execution::default())
}

/// Runs `trials` independent channel draws, builds and verifies the beams
/// on each. Trial `i` uses seeds derived from `(seed, i)` only.
pub fn monte_carlo_with(
    m1: usize,
    m2: usize,
    n2: usize,
    trials: usize,
    seed: RngSeed,
    tol: f64,
    exec: Execution,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(DofError::InvalidArgument("trials must be at least 1".into()));
    }
    if n2 == 0 {
        return Err(DofError::InvalidArgument("need at least one UL user".into()));
    }
    if m2 > n2 {
        return Err(unsupported_pure_uplink());
    }
    let reports = map_range(exec, trials, |i| {
        let (ch, bf) = trial_instance(m1, m2, n2, seed, i as u64)?;
        verify(&ch, &bf, tol)
    });
    let reports: Vec<VerificationReport> = reports.into_iter().collect::<Result<_>>()?;

    let first_failure = reports.iter().position(|r| !r.passes(m2, n2, tol));
    Ok(MonteCarloReport {
        m1,
        m2,
        n2,
        trials,
        seed: seed.0,
        tol,
        failures: reports.iter().filter(|r| !r.passes(m2, n2, tol)).count(),
        first_failure,
        max_residual: reports.iter().map(|r| r.alignment_residual).fold(0.0, f64::max),
        min_dl_rank: reports.iter().map(|r| r.dl_rank).min().unwrap_or(0),
        min_interference_rank: reports.iter().map(|r| r.interference_rank).min().unwrap_or(0),
        min_bs_rank: reports.iter().map(|r| r.bs_rank).min().unwrap_or(0),
        symbols_per_slot: reports[0].symbols_per_slot.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::dof_theorem1_n1_special;

    #[test]
    fn boundary_m2_equals_n2_has_no_dl_beams() {
        let ch = gen_channels(2, 3, 3, 3, RngSeed(5)).unwrap();
        let bf = build_beamformers(&ch, 2, 3, RngSeed(6)).unwrap();
        assert_eq!(bf.dl().shape(), (6, 0));
        let rep = verify(&ch, &bf, DEFAULT_TOL).unwrap();
        assert_eq!(rep.dl_rank, 3);
        assert_eq!(rep.symbols_per_slot, Rational::from_count(3));
        assert!(rep.passes(3, 3, DEFAULT_TOL));
    }

    #[test]
    fn construction_is_entrywise_channel_ratio() {
        let ch = gen_channels(2, 2, 3, 3, RngSeed(7)).unwrap();
        let bf = build_beamformers(&ch, 2, 2, RngSeed(7)).unwrap();
        let (h1, h2) = (ch.h_diag(0), ch.h_diag(1));
        let raw: Vec<f64> = (0..3).map(|s| h1[s] / h2[s] * bf.ul(0)[(s, 0)]).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (s, r) in raw.iter().enumerate() {
            assert!((bf.ul(1)[(s, 0)] - r / norm).abs() < 1e-14);
        }
    }

    #[test]
    fn counts_for_two_four() {
        let ch = gen_channels(2, 2, 4, 4, RngSeed(7)).unwrap();
        let bf = build_beamformers(&ch, 2, 2, RngSeed(7)).unwrap();
        assert_eq!(bf.total_ul_streams(), 8);
        assert_eq!(bf.dl_streams(), 2);
        let rep = verify(&ch, &bf, DEFAULT_TOL).unwrap();
        assert_eq!(rep.symbols_per_slot, Rational::new(5, 2).unwrap());
        assert_eq!(rep.symbols_per_slot, dof_theorem1_n1_special(2, 4));
        assert!(rep.alignment_residual <= 1e-9);
        assert_eq!((rep.dl_rank, rep.bs_rank, rep.interference_rank), (4, 8, 2));
    }

    #[test]
    fn identical_channels_align_exactly() {
        let t = 3;
        let g = vec![vec![1.0, 0.5]; t];
        let h = vec![vec![1.0; t]; t];
        let f = vec![vec![vec![1.0, 2.0]; t]; t];
        let ch = ExtendedChannels::from_slots(&g, &h, &f).unwrap();
        let beam = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let bf = BeamformerSet::new(DMatrix::from_element(6, 1, 1.0), vec![beam; 3]).unwrap();
        assert_eq!(alignment_residual(&ch, &bf), 0.0);
    }

    #[test]
    fn misaligned_beams_are_detected() {
        let ch = gen_channels(1, 1, 2, 2, RngSeed(1)).unwrap();
        let bf = BeamformerSet::new(
            DMatrix::from_element(2, 1, 1.0),
            vec![DMatrix::from_row_slice(2, 1, &[1.0, 0.0]), DMatrix::from_row_slice(2, 1, &[0.0, 1.0])],
        )
        .unwrap();
        let rep = verify(&ch, &bf, DEFAULT_TOL).unwrap();
        assert!(rep.alignment_residual > 1.0);
        assert!(!rep.passes(1, 2, DEFAULT_TOL));
    }

    #[test]
    fn regime_errors() {
        let ch = gen_channels(2, 3, 2, 2, RngSeed(1)).unwrap();
        assert!(matches!(build_beamformers(&ch, 2, 3, RngSeed(1)), Err(DofError::UnsupportedRegime(_))));
        assert!(matches!(monte_carlo(1, 5, 3, 10, RngSeed(1), DEFAULT_TOL), Err(DofError::UnsupportedRegime(_))));
        assert!(matches!(monte_carlo(2, 2, 4, 0, RngSeed(1), DEFAULT_TOL), Err(DofError::InvalidArgument(_))));
        let wrong_t = gen_channels(2, 2, 4, 3, RngSeed(1)).unwrap();
        assert!(matches!(build_beamformers(&wrong_t, 2, 2, RngSeed(1)), Err(DofError::InvalidArgument(_))));
        assert_eq!(N1Scheme::for_config(5, 3).unwrap(), N1Scheme::PureUplink { streams: 3 });
        assert_eq!(N1Scheme::for_config(5, 3).unwrap().symbols_per_slot(), dof_theorem1_n1_special(5, 3));
    }

    #[test]
    fn monte_carlo_examples() {
        let rep = monte_carlo(2, 2, 4, 100, RngSeed(1), DEFAULT_TOL).unwrap();
        assert_eq!(rep.failures, 0);
        assert!(rep.max_residual <= 1e-9);
        assert_eq!(rep.min_bs_rank, 8);
        let rep = monte_carlo(1, 3, 3, 50, RngSeed(2), DEFAULT_TOL).unwrap();
        assert_eq!(rep.failures, 0);
        assert_eq!(rep.symbols_per_slot, Rational::from_count(3));
    }

    #[test]
    fn monte_carlo_is_schedule_independent() {
        let a = monte_carlo_with(2, 2, 5, 40, RngSeed(9), DEFAULT_TOL, Execution::Sequential).unwrap();
        let b = monte_carlo_with(2, 2, 5, 40, RngSeed(9), DEFAULT_TOL, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn throughput_identity() {
        for n2 in 1..=8 {
            for m2 in 1..=n2 {
                let scheme = N1Scheme::for_config(m2, n2).unwrap();
                assert_eq!(scheme.symbols_per_slot(), dof_theorem1_n1_special(m2, n2));
            }
        }
    }
}
