//! Symbol-extended channel matrices for the single-DL-user network.
//!
//! Over `t` slots the per-slot channels stack into block-diagonal matrices:
//! the BS-to-DL-user rows `g(s)` (1 x M1) form a `t x (M1 t)` matrix, each
//! UL-user-to-DL-user scalar `h_j(s)` forms a `t x t` diagonal matrix, and
//! each UL-user-to-BS column `f_j(s)` (M2 x 1) forms a `(M2 t) x t` matrix.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::RngSeed;
use crate::error::{DofError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedChannels {
    t: usize,
    m1: usize,
    m2: usize,
    g_bar: DMatrix<f64>,
    h_bar: Vec<DMatrix<f64>>,
    f_bar: Vec<DMatrix<f64>>,
}

impl ExtendedChannels {
    /// Assembles extended channels from per-slot coefficients.
    ///
    /// `g[s]` has `m1` entries, `h[j][s]` is a scalar and `f[j][s]` has `m2`
    /// entries, for slot `s` and UL user `j`.
    pub fn from_slots(g: &[Vec<f64>], h: &[Vec<f64>], f: &[Vec<Vec<f64>>]) -> Result<Self> {
        let t = g.len();
        if t == 0 {
            return Err(DofError::InvalidArgument("extension length must be at least 1".into()));
        }
        let n2 = h.len();
        if n2 == 0 || f.len() != n2 {
            return Err(DofError::InvalidArgument(
                "need at least one UL user and matching h/f user counts".into(),
            ));
        }
        let m1 = g[0].len();
        let m2 = f[0].first().map_or(0, Vec::len);
        if g.iter().any(|row| row.len() != m1)
            || h.iter().any(|hj| hj.len() != t)
            || f.iter().any(|fj| fj.len() != t || fj.iter().any(|col| col.len() != m2))
        {
            return Err(DofError::InvalidArgument("inconsistent per-slot channel shapes".into()));
        }

        let mut g_bar = DMatrix::zeros(t, m1 * t);
        for (s, row) in g.iter().enumerate() {
            for (a, &v) in row.iter().enumerate() {
                g_bar[(s, s * m1 + a)] = v;
            }
        }
        let h_bar = h.iter().map(|hj| DMatrix::from_diagonal(&DVector::from_column_slice(hj))).collect();
        let f_bar = f
            .iter()
            .map(|fj| {
                let mut m = DMatrix::zeros(m2 * t, t);
                for (s, col) in fj.iter().enumerate() {
                    for (a, &v) in col.iter().enumerate() {
                        m[(s * m2 + a, s)] = v;
                    }
                }
                m
            })
            .collect();
        Ok(ExtendedChannels { t, m1, m2, g_bar, h_bar, f_bar })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn n2(&self) -> usize {
        self.h_bar.len()
    }

    /// `t x (m1 t)` block-diagonal BS-to-DL-user channel.
    pub fn g_bar(&self) -> &DMatrix<f64> {
        &self.g_bar
    }

    /// `t x t` diagonal channel from UL user `j` (0-based) to the DL user.
    pub fn h_bar(&self, j: usize) -> &DMatrix<f64> {
        &self.h_bar[j]
    }

    /// Diagonal of [`Self::h_bar`].
    pub fn h_diag(&self, j: usize) -> DVector<f64> {
        self.h_bar[j].diagonal()
    }

    /// `(m2 t) x t` block-diagonal channel from UL user `j` to the BS.
    pub fn f_bar(&self, j: usize) -> &DMatrix<f64> {
        &self.f_bar[j]
    }
}

/// Draws i.i.d. standard normal per-slot coefficients and assembles the
/// extended channels. Deterministic in `(m1, m2, n2, t, seed)`.
pub fn gen_channels(m1: usize, m2: usize, n2: usize, t: usize, seed: RngSeed) -> Result<ExtendedChannels> {
    if t == 0 {
        return Err(DofError::InvalidArgument("extension length t must be at least 1".into()));
    }
    if n2 == 0 {
        return Err(DofError::InvalidArgument("need at least one UL user (n2 >= 1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let g: Vec<Vec<f64>> = (0..t).map(|_| draw_vec(&mut rng, m1)).collect();
    let h: Vec<Vec<f64>> = (0..n2).map(|_| draw_vec(&mut rng, t)).collect();
    let f: Vec<Vec<Vec<f64>>> = (0..n2).map(|_| (0..t).map(|_| draw_vec(&mut rng, m2)).collect()).collect();
    ExtendedChannels::from_slots(&g, &h, &f)
}

/// Standard normal draw that is never exactly zero.
pub(crate) fn nonzero_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let v: f64 = rng.sample(StandardNormal);
        if v != 0.0 {
            return v;
        }
    }
}

fn draw_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| nonzero_normal(rng)).collect()
}
