//! Exact computations with frescos: geometric `(a,b)`-modules of finite
//! rank given by a principal presentation, together with their invariants
//! (α, β, strata), rank-1 normal submodules, duality and changes of
//! variable.

pub mod ab_algebra;
pub mod error;
pub mod fresco_core;
pub mod invariants;
pub mod series;
pub mod transforms;

mod linalg;
mod poly;

pub use ab_algebra::{ab_mul, act_on_rank1, right_factor_extract, AbElement};
pub use error::{Error, Result};
pub use series::{euler_solve, ps_derivative, ps_invert, ps_mul, PowerSeries, Rational, SolutionSpace};
pub use fresco_core::{principal_invariants, qorder_compare, Element, Fresco, InvariantClass};
pub use invariants::{
    adjusted_generator, alpha, alpha_j, beta, beta_rank3_closed, beta_rank3_ode, beta_star,
    is_semisimple, p_total, rank1_normal_submodules, rank2_subtheme_class, stratum_level,
    Rank1Family, Rank2Class, StratumReport,
};
pub use transforms::{
    canonicalization_loss, canonicalize, change_variable, dual_twist, matrix_presentation, ChangeOfVariable, MatrixModule,
};
