//! Polynomial functions in canonical form.
//!
//! Every polynomial function `f: L^n -> L` over a bounded distributive
//! lattice is the join over `I ⊆ [n]` of `f(e_I) ∧ ⋀_{i∈I} x_i`, where `e_I`
//! is the characteristic vector of `I`. A [`PolyFn`] stores exactly that
//! coefficient table, indexed by [`SubsetMask`]. The table is monotone in
//! `I` and two polynomial functions are equal iff their tables are.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::lattice::{Elem, Lattice, LatticeError};
use crate::oracle::FiniteFn;
use crate::points;
use crate::term::{Term, TermError};

pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity {arity} exceeds the maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("coefficient table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("coefficients not monotone: a{lower} = {lower_value} is not below a{upper} = {upper_value}")]
    NotMonotone {
        lower: SubsetMask,
        upper: SubsetMask,
        lower_value: String,
        upper_value: String,
    },
    #[error("cannot identify a variable with itself (x{})", .0 + 1)]
    SameVariable(usize),
    #[error("position {} is outside 1..={arity}", .position + 1)]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("substitution has {got} entries, the function has arity {expected}")]
    SubstitutionLength { expected: usize, got: usize },
    #[error("expected a point with {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("full value table would have more than {limit} points")]
    TableTooLarge { limit: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A subset of `{0, .., n-1}` as a bitmask; bit `i` stands for variable `x_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        SubsetMask(positions.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn full(n: usize) -> Self {
        SubsetMask(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << i))
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Zero-based positions in increasing order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// All subsets of `[n]` in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u32 << n).map(SubsetMask)
    }

    pub fn within(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.positions().map(|i| i + 1).join(","))
    }
}

/// The `n`-tuple with top at the positions in `subset` and bottom elsewhere.
pub fn characteristic_vector(subset: SubsetMask, n: usize, lattice: &Lattice) -> Vec<Elem> {
    (0..n)
        .map(|i| {
            if subset.contains(i) {
                lattice.top()
            } else {
                lattice.bottom()
            }
        })
        .collect()
}

fn characteristic_indices(subset: SubsetMask, n: usize, lattice: &Lattice) -> Vec<usize> {
    (0..n)
        .map(|i| {
            if subset.contains(i) {
                lattice.top_idx()
            } else {
                lattice.bottom_idx()
            }
        })
        .collect()
}

/// Canonical coefficient table of a lattice polynomial function.
#[derive(Debug, Clone)]
pub struct PolyFn {
    lattice: Arc<Lattice>,
    arity: usize,
    coeffs: Vec<u16>,
}

impl PartialEq for PolyFn {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }
}

impl Eq for PolyFn {}

fn check_arity(arity: usize) -> Result<(), PolyError> {
    if arity > MAX_ARITY {
        Err(PolyError::ArityTooLarge {
            arity,
            max: MAX_ARITY,
        })
    } else {
        Ok(())
    }
}

impl PolyFn {
    /// Coefficients `a_I = t(e_I)` of a term.
    pub fn canonicalize(term: &Term) -> Result<Self, PolyError> {
        let n = term.arity();
        check_arity(n)?;
        let lattice = term.lattice().clone();
        let coeffs = SubsetMask::all(n)
            .map(|m| term.eval_idx(&characteristic_indices(m, n, &lattice)) as u16)
            .collect();
        Ok(PolyFn {
            lattice,
            arity: n,
            coeffs,
        })
    }

    /// The unique polynomial extension of a monotone map `2^[n] -> L`,
    /// given as a table in mask order.
    pub fn from_monotone_table(
        table: &[Elem],
        n: usize,
        lattice: Arc<Lattice>,
    ) -> Result<Self, PolyError> {
        let idx = table
            .iter()
            .map(|&e| lattice.check(e).map(|i| i as u16))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(idx, n, lattice)
    }

    /// Like [`PolyFn::from_monotone_table`] with raw element indices.
    pub fn from_indices(coeffs: Vec<u16>, n: usize, lattice: Arc<Lattice>) -> Result<Self, PolyError> {
        check_arity(n)?;
        if coeffs.len() != 1 << n {
            return Err(PolyError::TableSize {
                expected: 1 << n,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|&c| c as usize >= lattice.len()) {
            return Err(PolyError::Lattice(LatticeError::ForeignElement));
        }
        for upper in SubsetMask::all(n) {
            for i in upper.positions() {
                let lower = upper.without(i);
                let (lo, hi) = (coeffs[lower.index()] as usize, coeffs[upper.index()] as usize);
                if !lattice.leq_idx(lo, hi) {
                    return Err(PolyError::NotMonotone {
                        lower,
                        upper,
                        lower_value: lattice.name_of(lo).to_string(),
                        upper_value: lattice.name_of(hi).to_string(),
                    });
                }
            }
        }
        Ok(PolyFn {
            lattice,
            arity: n,
            coeffs,
        })
    }

    /// The constant function of the given arity.
    pub fn constant(value: Elem, n: usize, lattice: Arc<Lattice>) -> Result<Self, PolyError> {
        check_arity(n)?;
        let c = lattice.check(value)? as u16;
        Ok(PolyFn {
            lattice,
            arity: n,
            coeffs: vec![c; 1 << n],
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeff(&self, subset: SubsetMask) -> Elem {
        self.lattice.elem_at(self.coeffs[subset.index()] as usize)
    }

    pub fn coeff_idx(&self, subset: SubsetMask) -> usize {
        self.coeffs[subset.index()] as usize
    }

    /// Coefficient indices in mask order.
    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == self.coeffs[0])
    }

    /// Evaluates the normal form at a point.
    pub fn eval_dnf(&self, point: &[Elem]) -> Result<Elem, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let idx = point
            .iter()
            .map(|&e| self.lattice.check(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.lattice.elem_at(self.eval_idx(&idx)))
    }

    /// `⋁_I (a_I ∧ ⋀_{i∈I} p_i)` on element indices.
    pub fn eval_idx(&self, point: &[usize]) -> usize {
        let l = &*self.lattice;
        let size = 1usize << self.arity;
        // prefix[I] = meet of p_i over i in I; the empty meet is top.
        let mut prefix = vec![l.top_idx(); size];
        let mut acc = l.meet_idx(self.coeffs[0] as usize, l.top_idx());
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            prefix[mask] = l.meet_idx(prefix[mask & (mask - 1)], point[low]);
            acc = l.join_idx(acc, l.meet_idx(self.coeffs[mask] as usize, prefix[mask]));
        }
        acc
    }

    /// Zero-based positions `j` with `a_J < a_{J∪{j}}` for some `J ∌ j`.
    pub fn essential_variables(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&j| {
                SubsetMask::all(self.arity)
                    .filter(|m| !m.contains(j))
                    .any(|m| {
                        let (lo, hi) = (self.coeff_idx(m), self.coeff_idx(m.with(j)));
                        lo != hi && self.lattice.leq_idx(lo, hi)
                    })
            })
            .collect()
    }

    fn check_position(&self, position: usize) -> Result<(), PolyError> {
        if position >= self.arity {
            Err(PolyError::PositionOutOfRange {
                position,
                arity: self.arity,
            })
        } else {
            Ok(())
        }
    }

    /// The identification minor obtained by substituting `x_j` for `x_i`.
    pub fn identify(&self, i: usize, j: usize) -> Result<PolyFn, PolyError> {
        self.check_position(i)?;
        self.check_position(j)?;
        if i == j {
            return Err(PolyError::SameVariable(i));
        }
        let coeffs = SubsetMask::all(self.arity)
            .map(|m| {
                let src = if m.contains(j) { m.with(i) } else { m.without(i) };
                self.coeffs[src.index()]
            })
            .collect();
        Ok(PolyFn {
            lattice: self.lattice.clone(),
            arity: self.arity,
            coeffs,
        })
    }

    /// `g(x_1..x_n) = f(x_{σ(1)}, .., x_{σ(m)})` for `f` of arity `m = sigma.len()`.
    pub fn simple_substitution(&self, sigma: &[usize], n: usize) -> Result<PolyFn, PolyError> {
        check_arity(n)?;
        if sigma.len() != self.arity {
            return Err(PolyError::SubstitutionLength {
                expected: self.arity,
                got: sigma.len(),
            });
        }
        if let Some(&bad) = sigma.iter().find(|&&s| s >= n) {
            return Err(PolyError::PositionOutOfRange {
                position: bad,
                arity: n,
            });
        }
        let coeffs = SubsetMask::all(n)
            .map(|j| {
                let pre = SubsetMask::from_positions((0..self.arity).filter(|&k| j.contains(sigma[k])));
                self.coeffs[pre.index()]
            })
            .collect();
        Ok(PolyFn {
            lattice: self.lattice.clone(),
            arity: n,
            coeffs,
        })
    }

    /// Drops inessential variables. Returns the reduced function and, for
    /// each of its positions, the original position it came from.
    pub fn reduce_to_essential(&self) -> (PolyFn, Vec<usize>) {
        let ess = self.essential_variables();
        let coeffs = SubsetMask::all(ess.len())
            .map(|m| {
                let orig = SubsetMask::from_positions(m.positions().map(|k| ess[k]));
                self.coeffs[orig.index()]
            })
            .collect();
        (
            PolyFn {
                lattice: self.lattice.clone(),
                arity: ess.len(),
                coeffs,
            },
            ess,
        )
    }

    /// `f` restricted to `{0,1}^n` as a pseudo-Boolean table whose labels
    /// are lattice element indices. The value at code `I` is `a_I`.
    pub fn restrict_to_01(&self) -> FiniteFn {
        FiniteFn::new(
            self.arity,
            2,
            self.lattice.len(),
            self.coeffs.clone(),
        )
        .expect("coefficient table is a valid pseudo-Boolean table")
    }

    /// The full `L^n` value table, refusing tables above `limit` points.
    pub fn to_finite_fn(&self, limit: usize) -> Result<FiniteFn, PolyError> {
        let size = points::count(self.arity, self.lattice.len())
            .filter(|&s| s <= limit)
            .ok_or(PolyError::TableTooLarge { limit })?;
        let mut table = Vec::with_capacity(size);
        for p in points::Points::new(self.arity, self.lattice.len()) {
            table.push(self.eval_idx(&p) as u16);
        }
        Ok(FiniteFn::new(self.arity, self.lattice.len(), self.lattice.len(), table)
            .expect("evaluation stays in the carrier"))
    }

    /// Mutual simple minors: equal after dropping inessential variables and
    /// permuting positions.
    pub fn equivalent(&self, other: &PolyFn) -> bool {
        if self.lattice != other.lattice {
            return false;
        }
        let (f, _) = self.reduce_to_essential();
        let (g, _) = other.reduce_to_essential();
        if f.arity != g.arity {
            return false;
        }
        let k = f.arity;
        (0..k).permutations(k).any(|perm| {
            f.simple_substitution(&perm, k)
                .map(|h| h.coeffs == g.coeffs)
                .unwrap_or(false)
        })
    }

    /// `(subset positions one-based, coefficient name)` in mask order.
    pub fn dump(&self) -> Vec<(Vec<usize>, String)> {
        SubsetMask::all(self.arity)
            .map(|m| {
                (
                    m.positions().map(|i| i + 1).collect(),
                    self.lattice.name_of(self.coeff_idx(m)).to_string(),
                )
            })
            .collect()
    }

    /// Shortened normal form: terms with bottom coefficients and terms
    /// absorbed by a term over a proper subset are omitted.
    pub fn format_dnf(&self) -> String {
        let l = &*self.lattice;
        let mut terms = Vec::new();
        for m in SubsetMask::all(self.arity) {
            let c = self.coeff_idx(m);
            if c == l.bottom_idx() {
                continue;
            }
            // Monotone coefficients: an equal proper subset implies an equal
            // immediate subset.
            if m.positions().any(|i| self.coeff_idx(m.without(i)) == c) {
                continue;
            }
            let mut factors: Vec<String> = Vec::new();
            if c != l.top_idx() || m.is_empty() {
                factors.push(l.name_of(c).to_string());
            }
            factors.extend(m.positions().map(|i| format!("x{}", i + 1)));
            terms.push(factors);
        }
        match terms.len() {
            0 => l.name_of(l.bottom_idx()).to_string(),
            1 => terms[0].join(" & "),
            _ => terms
                .iter()
                .map(|t| {
                    if t.len() == 1 {
                        t[0].clone()
                    } else {
                        format!("({})", t.join(" & "))
                    }
                })
                .join(" | "),
        }
    }
}

impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_dnf())
    }
}

/// Free-function form of [`PolyFn::format_dnf`].
pub fn format_dnf(f: &PolyFn) -> String {
    f.format_dnf()
}
