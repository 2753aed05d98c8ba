//! Multiplicative orders of Gauss periods `ζ + ζ⁻¹` over finite fields and
//! the arithmetic of the real quadratic fields `Q(√p)` they are tied to.
//!
//! - [`arith`]: primality, factorization, Jacobi symbols, group orders.
//! - [`cyclo`]: the ring `F_q[x]/Φ_p(x)` and the Gauss period in it.
//! - [`quadratic`]: fundamental units, class numbers, `ε_p mod q`.
//! - [`identities`]: exact norm identities in `Z[x]/Φ_p(x)`.
//! - [`experiments`]: the gcd/index comparison, index census and scans.
//! - [`ducci`]: Ducci sequences and their periods.
//! - [`heuristics`]: density constants and the Gao-Vanstone estimate.

pub mod arith;
pub mod cyclo;
pub mod ducci;
pub mod error;
pub mod experiments;
pub mod heuristics;
pub mod identities;
pub mod quadratic;

pub use arith::{
    factorize, factorize_u64, generated_by_minus_one_and_q, is_prime, is_prime_u64, jacobi,
    order_in_group, order_mod, primes_up_to, FactorBudget, Factorization, GroupElement,
};
pub use error::{Error, Result};
pub use cyclo::{gauss_period, index_gcd, CycloContext, CycloElem};
pub use ducci::{algebraic_period, ducci_step, eventual_period, verify_corollary, DucciState};
pub use experiments::{
    check_main_theorem, predict_distribution, scan_observed, FrequencyTable, ScanConfig,
    ScanFilter, ScanRecord, TheoremReport,
};
pub use heuristics::HeuristicConstants;
pub use quadratic::{
    class_number_imag, class_number_real, fundamental_unit, unit_mod_q, FundamentalUnit,
};
