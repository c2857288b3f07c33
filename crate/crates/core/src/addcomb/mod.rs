//! Additive combinatorics over `Q`, `Q^k` and `Q/Z`: p-adic norms, progressions, `θ`,
//! lattice-point lemmas and the rank-increase audit.

mod lattice;
mod lemma;
mod norm;
mod progression;
mod theta;

pub use lattice::{
    determinant, discrete_john, minkowski_audit, random_john_instance, random_minkowski_instance, JohnReport,
    LatticeInstance, MinkowskiReport,
};
pub use lemma::{incr_rank_audit, IncrRankReport};
pub use norm::{
    cyclic_index, natural_norm, padic_norm, power, rational_norm, set_norm, torsion_norm, valuation, valuation_int,
    NormVariant, PAdicNorm,
};
pub use progression::{add_points, fmt_point, int_point, rank, scale_point, sub_points, Ambient, CosetProgression, Point, Progression};
pub use theta::{candidate_generators, describe, theta, theta_scalars, ThetaBounds, ThetaResult};
