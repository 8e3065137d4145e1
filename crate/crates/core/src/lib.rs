//! Exact finite-horizon dynamics of weighted backward shifts on `c_0` and `ℓ^p`.
//!
//! * [`weights`]: weight sequences, including the block and diamond constructions.
//! * [`products`]: window products `M_i^n` from a log2 prefix table.
//! * [`shifts`]: sparse vectors, norms, `B_w^n` and `S^n`.
//! * [`analysis`]: finite-horizon classifiers and identity suites.
//! * [`witnesses`]: blocker vectors and kernel truncations from the constructive proofs.
//!
//! Weights are indexed from 1 (`w_1` first), vector coordinates from 0 (`x_0` first).

pub mod analysis;
pub mod error;
pub mod log2;
pub mod products;
pub mod shifts;
pub mod weights;
pub mod witnesses;

pub use analysis::{
    check_hypercyclic, check_mixing, check_strong_necessary, check_strong_sufficient, check_ultra_conditions,
    lattice_candidate, sample_triples, verify_block_facts, verify_diamond_identities, verify_lemma_comparability,
    verify_product_formula, CandidateOrder, ClassifierConfig, DiamondSuite, GrowthProfile, LatticeChoice, Report,
    ShProfile, Tally, Verdict, Witness, REPORT_SCHEMA,
};
pub use error::{Error, Result};
pub use log2::Log2Value;
pub use products::{M1Scan, ProductEngine, ScanRow};
pub use shifts::{apply_backward, apply_forward, norm, orbit_norms, OrbitPoint, SpaceSpec, SparseVector};
pub use weights::{
    a_k, ak_sequence, block_boundary, block_nk_sequence, block_plans, diamond_scaled_sequence, gen_block,
    gen_diamond, gen_literal, BlockContent, BlockPlan, Exactness, FamilyKind, SubseqKind, SubseqSpec, Tail,
    Weight, WeightSequence,
};
pub use witnesses::{
    build_kernel_truncation, build_sh_blocker, build_uh_blocker, demo_ultra_convergence, Claim, ConvergenceRow,
    Group, Inequality, Provenance, Selection, WitnessBundle,
};
