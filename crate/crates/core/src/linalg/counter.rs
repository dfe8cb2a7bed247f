use serde::{Deserialize, Serialize};

/// Multiply/add tally for one computation context.
///
/// Divisions and square roots are tallied as multiplies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    pub multiplies: u64,
    pub adds: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn mul(&mut self, k: u64) {
        self.multiplies += k;
    }

    #[inline]
    pub fn add(&mut self, k: u64) {
        self.adds += k;
    }

    /// One fused multiply-add per unit of `k`.
    #[inline]
    pub fn fma(&mut self, k: u64) {
        self.multiplies += k;
        self.adds += k;
    }

    pub fn absorb(&mut self, other: &OpCounter) {
        self.multiplies += other.multiplies;
        self.adds += other.adds;
    }
}
