//! Finite-SNR sum rate of the aligned scheme and DoF estimation from the
//! high-SNR slope.
//!
//! Receivers are zero-forcing. The DL user first projects its `N2`-slot
//! observation onto the complement of the `M2`-dimensional aligned
//! interference, then inverts the projected DL channel. The BS inverts the
//! square `(M2 N2) x (M2 N2)` matrix of received UL beams. Each transmitter
//! splits its power `P` equally over its own streams, and every stream
//! contributes `0.5 log2(1 + SINR)` bits; the total is divided by the `N2`
//! slots of the extension.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::RngSeed;
use crate::error::{DofError, Result};
use crate::ia::{received_beams, trial_instance, BeamformerSet, DEFAULT_TOL};
use crate::channels::ExtendedChannels;
use crate::linalg::{complement_projector, rank};
use crate::par::{map_range, Execution};

/// `10^2, 10^3, ..., 10^10`.
pub fn default_power_ladder() -> Vec<f64> {
    (2..=10).map(|e| 10f64.powi(e)).collect()
}

/// Projector onto the complement of the aligned interference at the DL user.
pub fn dl_interference_projector(ch: &ExtendedChannels, bf: &BeamformerSet) -> Result<DMatrix<f64>> {
    let rx = received_beams(ch, bf)?;
    Ok(complement_projector(&rx.interference, DEFAULT_TOL))
}

/// Diagonal of `(A^T A)^{-1}`, the per-stream noise gain of a ZF receiver
/// for the full-column-rank matrix `a`.
fn zf_noise_gains(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let gram = a.transpose() * a;
    gram.cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| DofError::InvalidState("effective channel is rank deficient".into()))
}

fn half_log2(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// Bits per slot at transmit power `p`.
pub fn sum_rate(ch: &ExtendedChannels, bf: &BeamformerSet, p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 {
        return Err(DofError::InvalidArgument(format!("power must be positive and finite, got {p}")));
    }
    let rx = received_beams(ch, bf)?;
    let (m2, n2) = (ch.m2(), ch.n2());
    let slots = ch.t() as f64;

    let projector = complement_projector(&rx.interference, DEFAULT_TOL);
    if rank(&rx.interference, DEFAULT_TOL) != m2
        || rank(&crate::linalg::hstack(ch.t(), &[&rx.dl_signal, &rx.interference]), DEFAULT_TOL) != ch.t()
        || rank(&rx.bs_stack, DEFAULT_TOL) != m2 * n2
    {
        return Err(DofError::InvalidState("beamformers are not full rank at the receivers".into()));
    }

    let mut total = 0.0;

    let dl_streams = bf.dl_streams();
    if dl_streams > 0 {
        let q_dl = p / dl_streams as f64;
        let q_ul = p / bf.ul_streams_per_user() as f64;
        let effective = &projector * &rx.dl_signal;
        let gains = zf_noise_gains(&effective)?;
        let zf = &gains * effective.transpose();
        // leftover UL interference after projection and ZF (rounding only)
        let mut leak = vec![0.0; dl_streams];
        for j in 0..n2 {
            let through = &zf * (&projector * (ch.h_bar(j) * bf.ul(j)));
            for (k, l) in leak.iter_mut().enumerate() {
                *l += q_ul * through.row(k).norm_squared();
            }
        }
        for k in 0..dl_streams {
            total += half_log2(q_dl / (gains[(k, k)] + leak[k]));
        }
    }

    let q_ul = p / bf.ul_streams_per_user() as f64;
    let gains = zf_noise_gains(&rx.bs_stack)?;
    for k in 0..gains.nrows() {
        total += half_log2(q_ul / gains[(k, k)]);
    }

    Ok(total / slots)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeEstimate {
    /// Least-squares slope of sum rate against `0.5 log2 P`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(P, mean sum rate)`, increasing in `P`.
    pub points: Vec<(f64, f64)>,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    (slope, intercept, r2)
}

fn check_ladder(powers: &[f64]) -> Result<()> {
    if powers.len() < 3 {
        return Err(DofError::InvalidArgument(format!(
            "slope regression needs at least 3 powers, got {}",
            powers.len()
        )));
    }
    if powers.iter().any(|p| !p.is_finite() || *p <= 0.0) {
        return Err(DofError::InvalidArgument("powers must be positive and finite".into()));
    }
    if powers.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DofError::InvalidArgument("powers must be strictly increasing".into()));
    }
    if powers[powers.len() - 1] / powers[0] < 1e4 {
        return Err(DofError::InvalidArgument("power ladder must span at least 4 decades".into()));
    }
    Ok(())
}

pub fn estimate_dof_slope(
    m1: usize,
    m2: usize,
    n2: usize,
    powers: &[f64],
    seed: RngSeed,
    trials: usize,
) -> Result<SlopeEstimate> {
    estimate_dof_slope_with(m1, m2, n2, powers, seed, trials, Execution::default())
}

/// Mean sum rate over `trials` channel draws at each power, regressed on
/// `0.5 log2 P`. Each trial keeps one channel and beam draw across the whole
/// ladder.
pub fn estimate_dof_slope_with(
    m1: usize,
    m2: usize,
    n2: usize,
    powers: &[f64],
    seed: RngSeed,
    trials: usize,
    exec: Execution,
) -> Result<SlopeEstimate> {
    check_ladder(powers)?;
    if trials == 0 {
        return Err(DofError::InvalidArgument("trials must be at least 1".into()));
    }
    let per_trial = map_range(exec, trials, |i| -> Result<Vec<f64>> {
        let (ch, bf) = trial_instance(m1, m2, n2, seed, i as u64)?;
        powers.iter().map(|&p| sum_rate(&ch, &bf, p)).collect()
    });
    let per_trial: Vec<Vec<f64>> = per_trial.into_iter().collect::<Result<_>>()?;

    let mean: Vec<f64> = (0..powers.len())
        .map(|k| per_trial.iter().map(|rates| rates[k]).sum::<f64>() / trials as f64)
        .collect();
    let xs: Vec<f64> = powers.iter().map(|p| 0.5 * p.log2()).collect();
    let (slope, intercept, r_squared) = fit_line(&xs, &mean);
    Ok(SlopeEstimate {
        slope,
        intercept,
        r_squared,
        points: powers.iter().cloned().zip(mean).collect(),
    })
}
