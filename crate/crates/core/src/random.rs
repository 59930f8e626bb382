//! Seeded sampling of the binomial random 3-uniform hypergraph.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Triples are visited in lexicographic order
//! and each consumes exactly one `f64` draw, kept iff `draw < p`. Two calls
//! with the same seed therefore see the same draw per triple, so the samples
//! for `p ≤ p'` are nested.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{for_each_triple, Hypergraph3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Derives the seed of one trial from a master seed and the trial's
    /// coordinates: `mix(mix(mix(master ^ n) ^ c_index) ^ trial)` with
    /// `mix` the SplitMix64 finaliser.
    pub fn derive(self, n: usize, c_index: usize, trial: usize) -> Seed {
        let mut h = splitmix64(self.0 ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        h = splitmix64(h ^ (c_index as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
        h = splitmix64(h ^ (trial as u64).wrapping_mul(0x1656_67B1_9E37_79F9));
        Seed(h)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sample_g3(n: usize, p: f64, seed: Seed) -> Result<Hypergraph3> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut edges = Vec::new();
    for_each_triple(n, |e| {
        let draw: f64 = rng.gen();
        if draw < p {
            edges.push(e);
        }
    });
    Ok(Hypergraph3::from_edges(n, edges))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `c · √(ln n) / n`
    SqrtLog,
    /// `c · ln n / n`
    Log,
    /// `c`
    Constant,
}

/// An edge-probability schedule `p(n)`, clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PSchedule {
    pub kind: ScheduleKind,
    pub c: f64,
}

impl PSchedule {
    pub fn new(kind: ScheduleKind, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("schedule coefficient must be positive, got {c}")));
        }
        Ok(PSchedule { kind, c })
    }

    pub fn eval(&self, n: usize) -> Result<f64> {
        schedule_p(*self, n)
    }
}

pub fn schedule_p(sched: PSchedule, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("schedule needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let raw = match sched.kind {
        ScheduleKind::SqrtLog => sched.c * nf.ln().sqrt() / nf,
        ScheduleKind::Log => sched.c * nf.ln() / nf,
        ScheduleKind::Constant => sched.c,
    };
    Ok(raw.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert!(sample_g3(12, 0.0, Seed(3)).unwrap().is_empty());
        assert_eq!(sample_g3(4, 1.0, Seed(3)).unwrap().len(), 4);
        assert!(sample_g3(4, 1.5, Seed(3)).is_err());
    }

    #[test]
    fn deterministic_and_nested() {
        let a = sample_g3(20, 0.3, Seed(99)).unwrap();
        let b = sample_g3(20, 0.3, Seed(99)).unwrap();
        assert_eq!(a, b);
        let big = sample_g3(20, 0.6, Seed(99)).unwrap();
        assert!(a.is_subhypergraph_of(&big));
        assert_ne!(a, sample_g3(20, 0.3, Seed(100)).unwrap());
    }

    #[test]
    fn edge_count_mean() {
        // 200 samples of G(30, 0.2): mean 812, per-sample sd ≈ 25.5
        let total: usize = (0..200)
            .map(|t| sample_g3(30, 0.2, Seed(7).derive(30, 0, t)).unwrap().len())
            .sum();
        let mean = total as f64 / 200.0;
        let sd_of_mean = (4060.0f64 * 0.2 * 0.8).sqrt() / 200f64.sqrt();
        assert!((mean - 812.0).abs() < 3.0 * sd_of_mean, "mean {mean}");
    }

    #[test]
    fn schedules() {
        let p = schedule_p(PSchedule::new(ScheduleKind::SqrtLog, 1.0).unwrap(), 55).unwrap();
        assert!((p - 0.036_40).abs() < 1e-5, "{p}");
        let c = PSchedule::new(ScheduleKind::Constant, 0.5).unwrap();
        assert_eq!(schedule_p(c, 1000).unwrap(), 0.5);
        let l = PSchedule::new(ScheduleKind::Log, 10.0).unwrap();
        assert_eq!(schedule_p(l, 10).unwrap(), 1.0);
        assert!(schedule_p(l, 1).is_err());
        assert!(PSchedule::new(ScheduleKind::Log, 0.0).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let m = Seed(1);
        assert_ne!(m.derive(10, 0, 0), m.derive(10, 0, 1));
        assert_ne!(m.derive(10, 0, 0), m.derive(10, 1, 0));
        assert_ne!(m.derive(10, 0, 0), m.derive(12, 0, 0));
        assert_eq!(m.derive(10, 2, 3), m.derive(10, 2, 3));
    }
}
