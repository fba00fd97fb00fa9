//! Exact computations for the depolarising channel acting on isotypical
//! (symmetric Werner) states.
//!
//! The crate has two routes to every quantity it reports:
//!
//! * a combinatorial fast path ([`spectral`]) built from hook-length
//!   dimensions and Littlewood-Richardson coefficients, and
//! * a brute-force dense operator oracle ([`oracle`]) that realizes
//!   permutation operators, isotypical projectors, partial traces, the
//!   permutation twirl and the depolarising channel on `(C^d)^{⊗n}` in exact
//!   rational arithmetic.
//!
//! [`verify`] runs the two against each other and checks the support
//! vanishing result, the exponential overlap bound and the entropy bound on
//! dimension products over exhaustive desk-scale sweeps.

pub mod error;
pub mod frames;
pub mod horn;
pub mod lr;
pub mod oracle;
pub mod perm;
pub mod rational;
pub mod spectral;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use frames::{
    binary_entropy, dim_sym, dim_unitary, enumerate_frames, rel_entropy, Partition,
    ProbabilityPair, Shape, YoungFrame,
};
pub use horn::{
    basic_horn_holds, horn_feasible, support_window, theorem1_chain_check, HornTriple,
    SupportWindow,
};
pub use lr::{
    lr_coefficient, lr_nonzero_pairs, lr_tableaux, lr_via_characters, LrTableau, SkewShape,
};
pub use oracle::{OracleCaps, SchurWeylOracle, TensorOperator};
pub use perm::{character, cycle_type, enumerate_group, CycleType, Permutation};
pub use rational::ExactScalar;
pub use spectral::{
    alpha, channel_output_spectrum, lemma_bound_check, partial_trace_decomposition, theorem2_bound,
    twirl_spectrum, xy_optimize, BranchingTable, SpectralTable,
};
