//! Experiments: `V_m` counts, joint distribution runs, finite checks of the
//! sieve lemmas and the range-limit construction.

pub mod distribution;
pub mod range_limit;
pub mod sieve_checks;
pub mod vm;

pub use distribution::{
    joint_distribution, ClassCounts, ConfigEcho, ExperimentConfig, ExperimentReport,
    ScaleComparison, UniformityStats,
};
pub use range_limit::{range_limit_demo, RangeLimitReport};
pub use sieve_checks::{
    constant_choices, coprime_lower_bound_check, remark_b_product, sifted_interval_count,
    CoprimeLowerBound, LowerBoundStatus, ReciprocalSum, SiftedCount,
};
pub use vm::{
    fiber_distribution, target_units, vm_bruteforce, vm_claim_audit, vm_via_characters,
    CharacterCount, CharacterEngine, ClaimAudit, FiberDistribution,
};
