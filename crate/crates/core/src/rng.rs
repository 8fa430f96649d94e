//! Counter-based random streams.
//!
//! Every random quantity of a run is addressed by `(run_seed, round, slot)`.
//! A run seed selects a ChaCha12 key via `seed_from_u64`; the round selects
//! the ChaCha stream (`2t` for perturbation directions, `2t + 1` for noise);
//! the slot is the position of the draw inside that stream, so direction
//! component `j` of round `t` is always the `j`-th uniform of stream `2t`.
//! Replications with different seeds are independent and any round can be
//! regenerated without replaying earlier ones.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    seed: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream feeding the perturbation direction of round `t`.
    pub fn directions(&self, t: u64) -> ChaCha12Rng {
        self.stream(2 * t)
    }

    /// Stream feeding the two noise draws of round `t`.
    pub fn noise(&self, t: u64) -> ChaCha12Rng {
        self.stream(2 * t + 1)
    }

    fn stream(&self, id: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one experiment cell: `mix(mix(mix(base) ^ horizon) ^ replication)`.
///
/// Fixed forever so that published CSV files can be regenerated.
pub fn derive_seed(base: u64, horizon: u64, replication: u64) -> u64 {
    mix(mix(mix(base) ^ horizon) ^ replication)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let s = Streams::new(7);
        let a: f64 = s.directions(3).gen();
        let b: f64 = s.directions(3).gen();
        let c: f64 = s.noise(3).gen();
        let e: f64 = s.directions(4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, e);
    }

    #[test]
    fn derived_seeds_are_frozen() {
        // Values from an independent SplitMix64 implementation.
        assert_eq!(derive_seed(0, 0, 0), 2558736989570252433);
        assert_eq!(derive_seed(2024, 256, 0), 7404437033350980550);
        assert_eq!(derive_seed(11, 50, 0), 14326114865010764902);
        assert_eq!(derive_seed(42, 16384, 19), 7568490912379108573);
        assert_ne!(derive_seed(1, 256, 0), derive_seed(1, 256, 1));
        assert_ne!(derive_seed(1, 256, 0), derive_seed(1, 1024, 0));
        assert_eq!(derive_seed(42, 256, 3), derive_seed(42, 256, 3));
    }
}
