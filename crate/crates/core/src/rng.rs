//! Counter-based random streams keyed by tree addresses.
//!
//! Every node of a parameter tree owns an independent stream whose key is a
//! hash of the run seed and the node address. Draws at a node therefore never
//! depend on the order in which nodes are visited, which is what makes lazy
//! evaluation reproducible.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Domains keep streams for different purposes apart even at equal addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Params = 1,
    Perpetuity = 2,
    Sampling = 3,
    Lamination = 4,
    Chain = 5,
}

/// Hash key of a node address. The root key depends on the seed only; child
/// keys are derived from the parent key and the child label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey(pub u64);

impl NodeKey {
    pub fn root(seed: u64, domain: Domain) -> Self {
        NodeKey(mix64(mix64(seed ^ GOLDEN) ^ (domain as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93)))
    }

    /// Key of child `j` (labels are 1-based, as in the structural tree).
    #[inline]
    pub fn child(self, j: usize) -> Self {
        NodeKey(mix64(self.0.rotate_left(17) ^ (j as u64).wrapping_mul(GOLDEN).wrapping_add(0x2545_F491_4F6C_DD1D)))
    }

    pub fn from_address(seed: u64, domain: Domain, address: &[usize]) -> Self {
        address.iter().fold(Self::root(seed, domain), |k, &j| k.child(j))
    }

    pub fn stream(self) -> CounterRng {
        CounterRng::new(self.0)
    }
}

/// Seed of replica `r` derived from a run seed.
pub fn replica_seed(seed: u64, r: u64) -> u64 {
    mix64(seed.wrapping_add(mix64(r.wrapping_add(1).wrapping_mul(GOLDEN))))
}

/// Stream `x_n = mix64(key + n * GOLDEN)`.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(key: u64) -> Self {
        CounterRng { key: mix64(key), counter: 0 }
    }

    pub fn from_seed(seed: u64, domain: Domain) -> Self {
        NodeKey::root(seed, domain).stream()
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}

impl RngCore for CounterRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let b = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&b[..chunk.len()]);
        }
    }
}
