//! Exact sumset and difference-set counts for the bounded-coordinate
//! construction `U(m, L, B)`, the theta lower bounds they certify, a
//! brute-force oracle for small parameters and a parameter search.
//!
//! ```
//! use sumdiff_core::{set_counts, theta, Params};
//!
//! let p = Params::new(4, 8, 3);
//! let c = set_counts(p);
//! assert_eq!(c.u.to_string(), "221");
//! assert_eq!(theta(p).unwrap().lower.to_string(), "1.013631");
//! ```

pub mod bigcomb;
pub mod counts;
pub mod error;
pub mod oracle;
pub mod search;

pub use bigcomb::{binomial, log_of, pow_int, sci_round, BigCount, LogMagnitude, SciApprox};
pub use counts::{
    baseline_counts, baseline_theta, baseline_weights, canonicalize, count_diff, count_sum,
    count_w, q_value, set_counts, theta, theta_from_counts, BaselineWeights, Params, SetCounts,
    Theta6, ThetaBound,
};
pub use error::{Error, Result};
pub use search::{refine, suggest_start, sweep, Candidate, Interval, SearchResult, SearchSpec};
