//! Exhaustive classifier-versus-oracle sweeps.
//!
//! Each sweep enumerates a function space, runs the relevant classifier and
//! [`gap_bruteforce`] on every member with at least two essential variables,
//! and tallies the verdicts. Work is split across rayon workers by index;
//! the merged summary does not depend on the split, and the reported
//! counterexample is always the one with the smallest index.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{
    classify_boolean_gap, classify_polynomial_gap, classify_pseudo_boolean_gap, classify_via_restriction,
    ClassifyError,
};
use crate::lattice::Lattice;
use crate::oracle::{enumerate_all_functions, enumerate_monotone_maps, ess_bruteforce, gap_bruteforce, OracleError};
use crate::polyfn::{PolyError, PolyFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Poly(Box<PolyError>),
    #[error("full value table of {size} points exceeds the limit of {limit}")]
    TableLimit { size: String, limit: usize },
}

impl From<PolyError> for SweepError {
    fn from(e: PolyError) -> Self {
        SweepError::Poly(Box::new(e))
    }
}

/// What went wrong on one swept function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub index: usize,
    /// Printable description of the function (bitstring, table or DNF).
    pub function: String,
    pub problem: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    /// Functions enumerated.
    pub scanned: usize,
    /// Functions meeting the classifier's precondition and compared.
    pub checked: usize,
    /// Classifier verdict tag -> count.
    pub verdicts: BTreeMap<String, usize>,
    /// Oracle gap -> count.
    pub gaps: BTreeMap<usize, usize>,
    /// Classifier gap differs from the oracle gap.
    pub disagreements: usize,
    /// Oracle gap exceeds the domain size.
    pub bound_violations: usize,
    /// Oracle gap above 2 although ess exceeds the domain size.
    pub willard_violations: usize,
    /// Lattice sweeps: coefficient essentiality differs from the full scan
    /// or from the restriction to {0,1}^n.
    pub essentiality_mismatches: usize,
    /// Lattice sweeps: a gap outside {1, 2}, or the restriction route
    /// giving a different gap.
    pub other_failures: usize,
    pub first_failure: Option<Counterexample>,
}

impl SweepSummary {
    pub fn failures(&self) -> usize {
        self.disagreements
            + self.bound_violations
            + self.willard_violations
            + self.essentiality_mismatches
            + self.other_failures
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.scanned += other.scanned;
        self.checked += other.checked;
        for (k, v) in other.verdicts {
            *self.verdicts.entry(k).or_default() += v;
        }
        for (k, v) in other.gaps {
            *self.gaps.entry(k).or_default() += v;
        }
        self.disagreements += other.disagreements;
        self.bound_violations += other.bound_violations;
        self.willard_violations += other.willard_violations;
        self.essentiality_mismatches += other.essentiality_mismatches;
        self.other_failures += other.other_failures;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn fail(&mut self, index: usize, function: impl FnOnce() -> String, problem: String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(Counterexample {
                index,
                function: function(),
                problem,
            });
        }
    }

    fn record_gaps(&mut self, tag: &str, oracle_gap: usize) {
        *self.verdicts.entry(tag.to_string()).or_default() += 1;
        *self.gaps.entry(oracle_gap).or_default() += 1;
    }
}

fn check_bounds(s: &mut SweepSummary, index: usize, describe: &dyn Fn() -> String, ess: usize, gap: usize, domain: usize) {
    if gap > domain {
        s.bound_violations += 1;
        s.fail(index, describe, format!("gap {gap} exceeds |A| = {domain}"));
    }
    if ess > domain && gap > 2 {
        s.willard_violations += 1;
        s.fail(index, describe, format!("ess {ess} > |A| = {domain} but gap {gap} > 2"));
    }
}

/// All Boolean functions of the given arity.
pub fn verify_boolean(arity: usize, budget: u128) -> Result<SweepSummary, SweepError> {
    let space = enumerate_all_functions(arity, 2, 2, budget)?;
    Ok((0..space.len())
        .into_par_iter()
        .map(|index| {
            let f = space.get(index);
            let mut s = SweepSummary {
                scanned: 1,
                ..Default::default()
            };
            let describe = || f.to_bitstring().unwrap_or_default();
            let oracle = match gap_bruteforce(&f) {
                Ok(r) => r,
                Err(_) => {
                    if classify_boolean_gap(&f).is_ok() {
                        s.disagreements += 1;
                        s.fail(index, describe, "classifier accepted a function with ess < 2".into());
                    }
                    return s;
                }
            };
            s.checked = 1;
            match classify_boolean_gap(&f) {
                Ok(verdict) => {
                    s.record_gaps(verdict.tag(), oracle.gap);
                    if verdict.gap() != oracle.gap {
                        s.disagreements += 1;
                        s.fail(
                            index,
                            describe,
                            format!("classifier gap {} ({}) vs oracle gap {}", verdict.gap(), verdict.tag(), oracle.gap),
                        );
                    }
                }
                Err(e) => {
                    s.disagreements += 1;
                    s.fail(index, describe, format!("classifier failed: {e}"));
                }
            }
            check_bounds(&mut s, index, &describe, oracle.ess, oracle.gap, 2);
            s
        })
        .reduce(SweepSummary::default, SweepSummary::merge))
}

/// All `f: {0,1}^arity -> {0..codomain}` that depend on every variable.
pub fn verify_pseudo_boolean(arity: usize, codomain: usize, budget: u128) -> Result<SweepSummary, SweepError> {
    let space = enumerate_all_functions(arity, 2, codomain, budget)?;
    Ok((0..space.len())
        .into_par_iter()
        .map(|index| {
            let f = space.get(index);
            let mut s = SweepSummary {
                scanned: 1,
                ..Default::default()
            };
            if arity < 2 || ess_bruteforce(&f).len() != arity {
                return s;
            }
            let describe = || f.to_text().replace('\n', " ").trim().to_string();
            s.checked = 1;
            let oracle = match gap_bruteforce(&f) {
                Ok(r) => r,
                Err(e) => {
                    s.other_failures += 1;
                    s.fail(index, describe, format!("oracle failed: {e}"));
                    return s;
                }
            };
            match classify_pseudo_boolean_gap(&f) {
                Ok(verdict) => {
                    s.record_gaps(verdict.tag(), oracle.gap);
                    if verdict.gap() != oracle.gap {
                        s.disagreements += 1;
                        s.fail(
                            index,
                            describe,
                            format!("classifier gap {} ({}) vs oracle gap {}", verdict.gap(), verdict.tag(), oracle.gap),
                        );
                    }
                }
                Err(e) => {
                    s.disagreements += 1;
                    s.fail(index, describe, format!("classifier failed: {e}"));
                }
            }
            check_bounds(&mut s, index, &describe, oracle.ess, oracle.gap, 2);
            s
        })
        .reduce(SweepSummary::default, SweepSummary::merge))
}

/// Every polynomial function of the given arity on `lattice`, compared with
/// the oracle on the full `L^n` value table. Also checks the coefficient
/// essentiality criterion against the full scan and the `{0,1}^n`
/// restriction.
pub fn verify_gap_theorem(lattice: Arc<Lattice>, arity: usize, table_limit: usize) -> Result<SweepSummary, SweepError> {
    let size = crate::points::count(arity, lattice.len());
    if size.is_none_or(|s| s > table_limit) {
        return Err(SweepError::TableLimit {
            size: format!("{}^{}", lattice.len(), arity),
            limit: table_limit,
        });
    }
    let maps: Vec<PolyFn> = enumerate_monotone_maps(arity, lattice.clone())?.collect();
    let domain = lattice.len();
    maps.par_iter()
        .enumerate()
        .map(|(index, f)| -> Result<SweepSummary, SweepError> {
            let mut s = SweepSummary {
                scanned: 1,
                ..Default::default()
            };
            let describe = || {
                let coeffs: Vec<&str> = f.coeffs().iter().map(|&c| lattice.name_of(c as usize)).collect();
                format!("{} [coefficients {}]", f.format_dnf(), coeffs.join(" "))
            };
            let full = f.to_finite_fn(table_limit)?;
            let by_coeffs = f.essential_variables();
            let by_scan = ess_bruteforce(&full);
            let by_restriction = ess_bruteforce(&f.restrict_to_01());
            if by_coeffs != by_scan || by_coeffs != by_restriction {
                s.essentiality_mismatches += 1;
                s.fail(
                    index,
                    describe,
                    format!("essential sets differ: coefficients {by_coeffs:?}, scan {by_scan:?}, restriction {by_restriction:?}"),
                );
            }
            let oracle = match gap_bruteforce(&full) {
                Ok(r) => r,
                Err(_) => {
                    if !matches!(classify_polynomial_gap(f), Err(ClassifyError::GapUndefined { .. })) {
                        s.disagreements += 1;
                        s.fail(index, describe, "classifier accepted a function with ess < 2".into());
                    }
                    return Ok(s);
                }
            };
            s.checked = 1;
            match classify_polynomial_gap(f) {
                Ok(verdict) => {
                    s.record_gaps(verdict.tag(), oracle.gap);
                    if verdict.gap() != oracle.gap {
                        s.disagreements += 1;
                        s.fail(
                            index,
                            describe,
                            format!("classifier gap {} ({}) vs oracle gap {}", verdict.gap(), verdict.tag(), oracle.gap),
                        );
                    }
                }
                Err(e) => {
                    s.disagreements += 1;
                    s.fail(index, describe, format!("classifier failed: {e}"));
                }
            }
            if !(1..=2).contains(&oracle.gap) {
                s.other_failures += 1;
                s.fail(index, describe, format!("gap {} outside {{1, 2}}", oracle.gap));
            }
            match classify_via_restriction(f) {
                Ok(v) if v.gap() == oracle.gap => {}
                Ok(v) => {
                    s.other_failures += 1;
                    s.fail(index, describe, format!("restriction route gives gap {} vs oracle {}", v.gap(), oracle.gap));
                }
                Err(e) => {
                    s.other_failures += 1;
                    s.fail(index, describe, format!("restriction route failed: {e}"));
                }
            }
            check_bounds(&mut s, index, &describe, oracle.ess, oracle.gap, domain);
            Ok(s)
        })
        .try_reduce(SweepSummary::default, |a, b| Ok(a.merge(b)))
}
