//! Arity gap of polynomial functions over finite bounded distributive
//! lattices.
//!
//! * [`lattice`]: finite distributive lattices from cover relations.
//! * [`term`]: parsing and evaluating `&`/`|` expressions.
//! * [`polyfn`]: canonical coefficient tables, essential variables, minors.
//! * [`oracle`]: dense tables and brute-force essentiality and arity gap.
//! * [`classify`]: Zhegalkin polynomials and the Boolean, pseudo-Boolean and
//!   lattice gap classifiers.
//! * [`sweep`]: exhaustive classifier-versus-oracle verification.
//!
//! Variable positions are zero-based throughout the API; text output uses
//! `x1..xn`.

pub mod classify;
pub mod lattice;
pub mod oracle;
pub mod points;
pub mod polyfn;
pub mod sweep;
pub mod term;

pub use classify::{
    classify_boolean_gap, classify_polynomial_gap, classify_pseudo_boolean_gap, classify_via_restriction,
    is_truncated_median, zhegalkin_from_table, BooleanForm, ClassifyError, Composition, FormKind,
    GapClassification, PseudoBooleanVerdict, ZhegalkinPoly,
};
pub use lattice::{Elem, Lattice, LatticeError, StandardLattice};
pub use oracle::{
    enumerate_all_functions, enumerate_monotone_maps, ess_bruteforce, gap_bruteforce, identify_table,
    salomaa_function, FiniteFn, FunctionSpace, GapReport, MonotoneMaps, OracleError, DEFAULT_BUDGET,
};
pub use polyfn::{characteristic_vector, format_dnf, PolyError, PolyFn, SubsetMask, MAX_ARITY};
pub use sweep::{verify_boolean, verify_gap_theorem, verify_pseudo_boolean, Counterexample, SweepError, SweepSummary};
pub use term::{parse_expr, Node, Term, TermError};
