//! Exact counting, enumeration and asymptotics of colored factorizations.
//!
//! A colored factorization of `n` writes `n` as a product of parts `>= 2`,
//! each part carrying one of `l` colors. The library covers the eight
//! combinations of unordered/ordered, distinct/non-distinct and
//! at-most/exactly `l` colors, their part-count refinements, the generalized
//! Möbius functions, and the average order of ordered colored factorizations.
//!
//! ```
//! use colorfact::{colored_atmost, Method, Unordered};
//! let a = colored_atmost(12, 2, Unordered::Plain, Method::Recursion).unwrap();
//! assert_eq!(a, 16.into());
//! ```

pub mod arith;
pub mod asymptotics;
pub mod counting;
pub mod dirichlet;
pub mod enumeration;
mod error;
pub mod oracle;

pub use arith::{
    binomial, divisors, factorize, multichoose, primorial, stirling2, BigCount, DivisorLattice,
    FactoredInteger, PrimeSignature,
};
pub use counting::{
    colored_atmost, colored_by_parts, colored_exact, count_by_parts, count_distinct,
    count_unordered, default_method, divisor_like, eval_by_signature, evaluate,
    generalized_moebius, ordered_colored, ordered_distinct_colored, ordered_exact_parts,
    primorial_ordered_closed_form, set_work_limit, squarefree_closed_form, supported_methods,
    CountFamily, DivisorKind, ExactFamily, FamilyKind, Method, Moebius, Unordered,
};
pub use dirichlet::{ArithSeq, BivariateTable, LatticeSeq, PartPoly};
pub use error::{Error, Result};
