//! Exact topological rewriting on multivariate formal power series.
//!
//! The crate rewrites elements of `Q[[x1, ..., xn]]` modulo a finite set of
//! rules, each oriented by its least monomial under an admissible,
//! degree-compatible order. Series are handled as known parts plus a
//! big-O precision, and every chain is computed as an exact prefix of the
//! convergent infinite chain. On top of normalization the crate extracts
//! cofactors, decides congruence modulo the generated ideal, and probes
//! whether a rule set behaves like a standard basis.
//!
//! The [`ars`] module holds a finite abstract rewriting harness for checking
//! normal-form properties exhaustively on small systems.

pub mod ars;
pub mod error;
pub mod monomial;
pub mod rewrite;
pub mod series;
pub mod text;

pub use error::{Error, Result};
pub use monomial::{Monomial, MonomialOrder};
pub use rewrite::{
    normalize, reduce_step, reducible_monomials, ReductionStep, ReductionTrace, RewriteRule,
    RuleIndex, RuleSet, Strategy,
};
pub use series::{Coefficient, Delta, Precision, TruncatedSeries, Valuation};
