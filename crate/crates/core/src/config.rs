//! Network configurations and seeds.

use serde::Serialize;

/// FD base station with `m1` transmit and `m2` receive antennas serving
/// `n1` single-antenna half-duplex downlink users and `n2` half-duplex
/// uplink users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HdSplitConfig {
    pub m1: usize,
    pub m2: usize,
    pub n1: usize,
    pub n2: usize,
}

impl HdSplitConfig {
    pub const fn new(m1: usize, m2: usize, n1: usize, n2: usize) -> Self {
        HdSplitConfig { m1, m2, n1, n2 }
    }

    pub fn has_both_directions(&self) -> bool {
        self.n1 > 0 && self.n2 > 0
    }

    /// Every config in `[1..=bound]^4`, ordered lexicographically by
    /// `(m1, m2, n1, n2)`.
    pub fn grid(bound: usize) -> impl Iterator<Item = HdSplitConfig> + Clone {
        let r = 1..=bound;
        r.clone().flat_map(move |m1| {
            let r = 1..=bound;
            r.clone().flat_map(move |m2| {
                let r = 1..=bound;
                r.clone().flat_map(move |n1| (1..=bound).map(move |n2| HdSplitConfig::new(m1, m2, n1, n2)))
            })
        })
    }
}

/// FD base station serving `n` full-duplex users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FdConfig {
    pub m1: usize,
    pub m2: usize,
    pub n: usize,
}

impl FdConfig {
    pub const fn new(m1: usize, m2: usize, n: usize) -> Self {
        FdConfig { m1, m2, n }
    }
}

/// Seed for channel and beamformer draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent sub-seed for work item `index` (trial number, stream).
    /// Depends only on `(self, index)`, never on scheduling.
    pub fn derive(self, index: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0x6a09_e667_f3bc_c909))))
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn grid_size_and_order() {
        let all: Vec<_> = HdSplitConfig::grid(3).collect();
        assert_eq!(all.len(), 81);
        assert_eq!(all[0], HdSplitConfig::new(1, 1, 1, 1));
        assert_eq!(all[1], HdSplitConfig::new(1, 1, 1, 2));
        assert_eq!(all[80], HdSplitConfig::new(3, 3, 3, 3));
        assert_eq!(HdSplitConfig::grid(0).count(), 0);
    }

    #[test]
    fn derived_seeds_are_distinct_and_stable() {
        let base = RngSeed(1);
        let seeds: HashSet<_> = (0..1000).map(|i| base.derive(i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(base.derive(7), RngSeed(1).derive(7));
        assert_ne!(RngSeed(1).derive(0), RngSeed(2).derive(0));
    }
}
