//! Shared fixtures for the benchmarks.

use ultrashift_core::{ProductEngine, WeightSequence};

pub fn diamond_engine(horizon: usize) -> ProductEngine {
    ProductEngine::new(&mut WeightSequence::diamond(), horizon).expect("diamond engine")
}

pub fn block_engine(horizon: usize) -> ProductEngine {
    ProductEngine::new(&mut WeightSequence::block(), horizon).expect("block engine")
}
