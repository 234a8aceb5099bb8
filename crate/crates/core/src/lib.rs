//! Exact computations for representations of quivers over prime fields.
//!
//! The crate computes Hom and Ext¹ between representations by linear algebra
//! over `F_p`, recognizes bricks and semibricks, decomposes modules into
//! indecomposables, classifies Schur roots, works with projective
//! presentations, and runs a randomized search that enlarges finite
//! semibricks containing non-exceptional bricks.
//!
//! Generic statements are tested by sampling: a Zariski-open condition that
//! is not identically false fails on a uniform sample with probability at
//! most `deg / p`, so results over `F_p` with `p = 2^31 − 1` are reported as
//! exact facts about the sampled points and as heuristic facts about generic
//! points.

pub mod bundled;
pub mod decompose;
pub mod error;
pub mod extend;
pub mod field;
pub mod gen;
pub mod homology;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod presentations;
pub mod quiver;
pub mod rng;
pub mod selftest;

pub use decompose::{
    canonical_decomposition, classify_schur_root, decompose_indec, CanonicalDecomposition,
    Decomposition, SchurClassification, SchurVerdict,
};
pub use error::{CoreError, Result};
pub use extend::{
    extend_semibrick, grow_semibrick, maximality_probe, verify_certificate, ExtensionCertificate,
    ExtensionOutcome, GrowOutcome, ProbeReport, ProbeVerdict,
};
pub use field::{FieldSpec, DEFAULT_PRIME};
pub use homology::{
    ext1_dim, generic_hom_dim, hom_dim, hom_space, is_brick, is_isomorphic, is_open_brick,
    is_semibrick, orbit_dim, HomSpace, Semibrick, SemibrickViolation,
};
pub use matrix::Matrix;
pub use module::{direct_sum, random_basis_change, random_module, RepModule};
pub use presentations::{
    cokernel, fei_generic_perp_search, in_fbar_theta_oracle, is_injective, projective_module,
    sample_presentation, theta_value, FbarMode, FbarVerdict, Presentation,
};
pub use quiver::{
    euler_form_mod, euler_pairing, iota, iota_inverse, projective_dim_vectors, quadratic_form,
    DimVector, Quiver, Relation, ThetaVector,
};
pub use selftest::{run_selftest, SelftestReport};
