//! Shared inputs for the benchmarks in `benches/`.

use tops_core::coupled_tops::CoupledTopParams;
use tops_core::rmt::sample_cue;
use tops_core::{CMatrix, RngStream};

/// A fixed CUE matrix of size `n`.
pub fn cue_fixture(n: usize) -> CMatrix {
    sample_cue(n, RngStream::new(1, n as u64)).expect("valid dimension")
}

/// Coupled tops with default kicks at j1 = j2 = `j`.
pub fn tops_fixture(j: u32, epsilon: f64) -> CoupledTopParams {
    CoupledTopParams::with_default_kicks(j, j, epsilon).expect("valid parameters")
}
