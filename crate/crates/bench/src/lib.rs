//! Shared fixtures for the criterion benches.

use lqfi_core::states::random_state;
use lqfi_core::DensityMatrix;

/// A reproducible batch of random two-qubit states.
pub fn state_batch(count: usize, seed: u64) -> Vec<DensityMatrix> {
    (0..count as u64).map(|i| random_state(seed.wrapping_add(i))).collect()
}
