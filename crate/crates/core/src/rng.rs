//! Pinned pseudo-random generators.
//!
//! All seeded operations in this crate share one randomness contract: a
//! PCG32 stream (64-bit state, fixed default stream constant) whose initial
//! state is one round of SplitMix64 over the user seed. The generators are
//! implemented here rather than pulled from a crate so that identical seeds
//! produce identical corpora on every platform and toolchain, which golden
//! tests rely on.

/// SplitMix64 (Vigna). Used to diffuse user seeds and to derive sub-seeds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

const PCG_MULT: u64 = 6_364_136_223_846_793_005;
// Reference default-stream increment, already in odd form.
const PCG_INC: u64 = 0xDA3E_39CB_94B9_5BDB;

/// PCG32 (XSH-RR output, setseq variant pinned to the default stream).
#[derive(Debug, Clone)]
pub struct Pcg32 {
    state: u64,
}

impl Pcg32 {
    /// Seeds via one round of SplitMix64 over `seed`, then the reference
    /// two-step initialization.
    pub fn from_seed(seed: u64) -> Self {
        let mixed = SplitMix64::new(seed).next_u64();
        let mut rng = Pcg32 { state: 0 };
        rng.step();
        rng.state = rng.state.wrapping_add(mixed);
        rng.step();
        rng
    }

    fn step(&mut self) {
        self.state = self.state.wrapping_mul(PCG_MULT).wrapping_add(PCG_INC);
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.step();
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    /// Uniform draw in `[0, bound)` via rejection sampling (unbiased).
    pub fn bounded(&mut self, bound: u32) -> u32 {
        assert!(bound > 0, "bounded(0) is undefined");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u32();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Uniform f64 in `[0, 1)` with 32 bits of randomness.
    pub fn next_f64(&mut self) -> f64 {
        f64::from(self.next_u32()) / (u64::from(u32::MAX) as f64 + 1.0)
    }

    /// In-place Fisher–Yates shuffle (descending index order).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.bounded(i as u32 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Folds a sequence of values into a single derived seed.
///
/// Used by the experiment runner so every grid cell's randomness depends only
/// on its coordinates, never on scheduling.
pub fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    let mut acc = root;
    for &part in parts {
        acc = SplitMix64::new(acc ^ part).next_u64();
    }
    acc
}
