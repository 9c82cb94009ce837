//! Generalized Cullen numbers in linear recurrences.
//!
//! Exact integer sequences, certified interval arithmetic over dyadic
//! rationals, certified complex root isolation, explicit lower bounds for
//! linear forms in logarithms, the reduction loop that shrinks the order
//! bound, and bounded exhaustive searches.

pub mod algebraic;
pub mod baker;
pub mod dyadic;
pub mod enclosure;
pub mod error;
pub mod pipeline;
pub mod poly;
pub mod recurrence;
pub mod reduction;
pub mod roots;
pub mod search;

pub use num_bigint::BigInt;

pub use algebraic::{
    charpoly_kbonacci, classify_dominance, dominant_root, dresden_du_main_term, log_height,
    tail_term, weight_g, AlgebraicNumberDesc, DominanceClass, DominanceVariant, DominantRootCert,
};
pub use baker::{
    k_bound_from_laurent, laurent_exponent, matveev_exponent, n_from_m, solve_x_lt_2alogsqa,
    theorem2_m_bound, theorem2_matveev_coefficient, BoundValue, KFromMMode, LaurentInput, MBound,
    MBoundMode, MatveevInput,
};
pub use dyadic::{Dyadic, Round};
pub use enclosure::{RealEnclosure, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};
pub use error::{Error, Result};
pub use pipeline::{cmd_bounds_theorem2, PipelineConfig, Theorem2Report};
pub use poly::IntPolynomial;
pub use recurrence::{
    cullen, cullen_number, decimal_digit_count, eval_recurrence, kbonacci, power_of_two_exponent,
    rhs_general, KBonacci, RecurrenceSpec,
};
pub use reduction::{
    frac_dist_log2, frac_min_upto, k_from_fracmin, run_reduction, FracMinMethod, FracMinResult,
    ReductionConfig, ReductionTrace,
};
pub use roots::{isolate_roots, RootDisc};
pub use search::{
    decompose_cullen, search_cullen_in_kbonacci, search_general, search_pow2_plus1_in_kbonacci,
    verify_lucas_family, CullenSolution, GeneralSolution, Pow2Plus1Solution,
};
