//! Arity gap classifiers.
//!
//! * Boolean functions: gap 2 exactly for the functions equivalent to one of
//!   four Zhegalkin polynomial families, gap 1 otherwise.
//! * Pseudo-Boolean functions `{0,1}^n -> B`: gap 2 for a nonconstant binary
//!   function with `f(0,0) = f(1,1)`, or an injective relabelling of a
//!   Boolean gap-2 function; gap 1 otherwise.
//! * Lattice polynomial functions: gap 2 exactly for truncated medians
//!   `(a ∨ median) ∧ b` with `a < b`, gap 1 otherwise.
//!
//! None of these call [`crate::oracle::gap_bruteforce`].

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::lattice::Elem;
use crate::oracle::{ess_bruteforce, FiniteFn};
use crate::polyfn::{PolyFn, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("expected a Boolean table (domain and codomain of size 2), got {domain} -> {codomain}")]
    NotBoolean { domain: usize, codomain: usize },
    #[error("expected a pseudo-Boolean table (domain of size 2), got domain size {0}")]
    NotPseudoBoolean(usize),
    #[error("arity gap is undefined: {ess} essential variable(s), need at least 2")]
    GapUndefined { ess: usize },
    #[error("function must depend on all its variables; inessential positions: {0:?}")]
    InessentialVariables(Vec<usize>),
}

/// Multilinear polynomial over GF(2); the empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZhegalkinPoly {
    arity: usize,
    monomials: BTreeSet<SubsetMask>,
}

impl ZhegalkinPoly {
    pub fn new<I: IntoIterator<Item = SubsetMask>>(arity: usize, monomials: I) -> Self {
        let mut set = BTreeSet::new();
        for m in monomials {
            // x + x = 0 over GF(2)
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        ZhegalkinPoly {
            arity,
            monomials: set,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monomials(&self) -> &BTreeSet<SubsetMask> {
        &self.monomials
    }

    pub fn has_constant(&self) -> bool {
        self.monomials.contains(&SubsetMask::EMPTY)
    }

    /// Value at the point whose 1-coordinates form `point`.
    pub fn eval(&self, point: SubsetMask) -> bool {
        self.monomials.iter().filter(|m| m.is_subset_of(point)).count() % 2 == 1
    }

    /// Variables occurring in some monomial; these are exactly the
    /// essential ones.
    pub fn variables(&self) -> Vec<usize> {
        let all = self.monomials.iter().fold(0, |acc, m| acc | m.bits());
        SubsetMask::from_bits(all).positions().collect()
    }

    pub fn to_table(&self) -> FiniteFn {
        let table = SubsetMask::all(self.arity).map(|p| u16::from(self.eval(p))).collect();
        FiniteFn::new(self.arity, 2, 2, table).expect("Boolean table")
    }
}

impl fmt::Display for ZhegalkinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .monomials
            .iter()
            .filter(|m| !m.is_empty())
            .map(|m| m.positions().map(|i| format!("x{}", i + 1)).join(""))
            .collect();
        if self.has_constant() {
            terms.push("1".into());
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Parity Möbius transform of a Boolean table.
pub fn zhegalkin_from_table(f: &FiniteFn) -> Result<ZhegalkinPoly, ClassifyError> {
    if !f.is_boolean() {
        return Err(ClassifyError::NotBoolean {
            domain: f.domain(),
            codomain: f.codomain(),
        });
    }
    let mut coeffs: Vec<u8> = f.table().iter().map(|&v| v as u8).collect();
    for i in 0..f.arity() {
        let bit = 1 << i;
        for m in 0..coeffs.len() {
            if m & bit != 0 {
                coeffs[m] ^= coeffs[m ^ bit];
            }
        }
    }
    Ok(ZhegalkinPoly {
        arity: f.arity(),
        monomials: (0..coeffs.len())
            .filter(|&m| coeffs[m] == 1)
            .map(|m| SubsetMask::from_bits(m as u32))
            .collect(),
    })
}

/// The four Boolean gap-2 families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    /// `x1 + x2 + ... + xm + c`, `m >= 2`
    Sum,
    /// `x1 x2 + x1 + c`
    ProductPlusVariable,
    /// `x1 x2 + x1 x3 + x2 x3 + c`
    Median,
    /// `x1 x2 + x1 x3 + x2 x3 + x1 + x2 + c`
    MedianPlusTwo,
}

impl FormKind {
    pub fn number(self) -> usize {
        match self {
            FormKind::Sum => 1,
            FormKind::ProductPlusVariable => 2,
            FormKind::Median => 3,
            FormKind::MedianPlusTwo => 4,
        }
    }

    /// Monomials of the fixed-arity templates over `x1..x3` (bit 0 = x1).
    fn template(self) -> &'static [u32] {
        match self {
            FormKind::Sum => &[],
            FormKind::ProductPlusVariable => &[0b11, 0b01],
            FormKind::Median => &[0b011, 0b101, 0b110],
            FormKind::MedianPlusTwo => &[0b011, 0b101, 0b110, 0b001, 0b010],
        }
    }

    fn template_arity(self) -> usize {
        match self {
            FormKind::Sum => 0,
            FormKind::ProductPlusVariable => 2,
            FormKind::Median | FormKind::MedianPlusTwo => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::Sum => "sum",
            FormKind::ProductPlusVariable => "product-plus-variable",
            FormKind::Median => "median",
            FormKind::MedianPlusTwo => "median-plus-two",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A matched Boolean family. Template variable `x_{k+1}` is the original
/// (zero-based) position `positions[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanForm {
    pub kind: FormKind,
    pub m: usize,
    pub c: bool,
    pub positions: Vec<usize>,
}

/// Which conditions of the pseudo-Boolean characterisation hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoBooleanVerdict {
    /// Binary, nonconstant, and `f(0,0) = f(1,1)`.
    pub diagonal: bool,
    /// `f = g ∘ h` with `g` injective and `h` a Boolean gap-2 function.
    pub composition: Option<Composition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    /// `g(0)`, `g(1)` as codomain labels.
    pub g: [usize; 2],
    pub inner: BooleanForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GapClassification {
    Gap1,
    Boolean(BooleanForm),
    PseudoBoolean(PseudoBooleanVerdict),
    /// `(a ∨ median) ∧ b` up to equivalence, `a < b`.
    TruncatedMedian { a: Elem, b: Elem },
}

impl GapClassification {
    pub fn gap(&self) -> usize {
        match self {
            GapClassification::Gap1 => 1,
            _ => 2,
        }
    }

    /// Short stable tag used in sweep summaries.
    pub fn tag(&self) -> &'static str {
        match self {
            GapClassification::Gap1 => "gap1",
            GapClassification::Boolean(form) => match form.kind {
                FormKind::Sum => "form1",
                FormKind::ProductPlusVariable => "form2",
                FormKind::Median => "form3",
                FormKind::MedianPlusTwo => "form4",
            },
            GapClassification::PseudoBoolean(v) => match (v.diagonal, v.composition.is_some()) {
                (true, true) => "pseudo-boolean-case1+2",
                (true, false) => "pseudo-boolean-case1",
                _ => "pseudo-boolean-case2",
            },
            GapClassification::TruncatedMedian { .. } => "truncated-median",
        }
    }
}

fn relabel(template: &[u32], perm: &[usize]) -> BTreeSet<SubsetMask> {
    template
        .iter()
        .map(|&t| SubsetMask::from_positions(SubsetMask::from_bits(t).positions().map(|k| perm[k])))
        .collect()
}

/// Matches a polynomial all of whose `k` variables are essential against the
/// templates; returns the kind, the constant and the template-to-position map.
fn match_template(poly: &ZhegalkinPoly) -> Option<(FormKind, usize, bool, Vec<usize>)> {
    let k = poly.arity;
    let c = poly.has_constant();
    let body: BTreeSet<SubsetMask> = poly.monomials.iter().copied().filter(|m| !m.is_empty()).collect();
    if k >= 2 && body.len() == k && body.iter().all(|m| m.len() == 1) {
        return Some((FormKind::Sum, k, c, (0..k).collect()));
    }
    for kind in [FormKind::ProductPlusVariable, FormKind::Median, FormKind::MedianPlusTwo] {
        if kind.template_arity() != k {
            continue;
        }
        for perm in (0..k).permutations(k) {
            if relabel(kind.template(), &perm) == body {
                return Some((kind, k, c, perm));
            }
        }
    }
    None
}

/// Boolean gap classification through the Zhegalkin polynomial.
pub fn classify_boolean_gap(f: &FiniteFn) -> Result<GapClassification, ClassifyError> {
    let poly = zhegalkin_from_table(f)?;
    let essential = poly.variables();
    if essential.len() < 2 {
        return Err(ClassifyError::GapUndefined { ess: essential.len() });
    }
    // Rename essential variables to 0..k.
    let reduced = ZhegalkinPoly {
        arity: essential.len(),
        monomials: poly
            .monomials
            .iter()
            .map(|m| {
                SubsetMask::from_positions(
                    m.positions().map(|p| essential.binary_search(&p).expect("essential variable")),
                )
            })
            .collect(),
    };
    Ok(match match_template(&reduced) {
        Some((kind, m, c, perm)) => GapClassification::Boolean(BooleanForm {
            kind,
            m,
            c,
            positions: perm.into_iter().map(|k| essential[k]).collect(),
        }),
        None => GapClassification::Gap1,
    })
}

/// Pseudo-Boolean gap classification. `f` must depend on all `n >= 2`
/// variables; reduce first otherwise.
pub fn classify_pseudo_boolean_gap(f: &FiniteFn) -> Result<GapClassification, ClassifyError> {
    if f.domain() != 2 {
        return Err(ClassifyError::NotPseudoBoolean(f.domain()));
    }
    let essential = ess_bruteforce(f);
    if essential.len() != f.arity() {
        if essential.len() < 2 {
            return Err(ClassifyError::GapUndefined { ess: essential.len() });
        }
        let missing = (0..f.arity()).filter(|p| !essential.contains(p)).collect();
        return Err(ClassifyError::InessentialVariables(missing));
    }
    if f.arity() < 2 {
        return Err(ClassifyError::GapUndefined { ess: f.arity() });
    }

    let diagonal = f.arity() == 2 && !f.is_constant() && f.value_at(0b00) == f.value_at(0b11);

    let mut composition = None;
    if let [u, v] = f.image()[..] {
        for g in [[u, v], [v, u]] {
            let h = f
                .map_values(2, |x| usize::from(x == g[1]))
                .expect("two-valued relabelling");
            if let GapClassification::Boolean(inner) = classify_boolean_gap(&h)? {
                composition = Some(Composition { g, inner });
                break;
            }
        }
    }

    Ok(if diagonal || composition.is_some() {
        GapClassification::PseudoBoolean(PseudoBooleanVerdict {
            diagonal,
            composition,
        })
    } else {
        GapClassification::Gap1
    })
}

/// `Some((a, b))` when `f` is equivalent to `(a ∨ median) ∧ b` with `a < b`.
pub fn is_truncated_median(f: &PolyFn) -> Option<(Elem, Elem)> {
    let (r, _) = f.reduce_to_essential();
    if r.arity() != 3 {
        return None;
    }
    let l = r.lattice();
    let a = r.coeff_idx(SubsetMask::EMPTY);
    let b = r.coeff_idx(SubsetMask::full(3));
    if a == b || !l.leq_idx(a, b) {
        return None;
    }
    SubsetMask::all(3)
        .all(|m| r.coeff_idx(m) == if m.len() >= 2 { b } else { a })
        .then(|| (l.elem_at(a), l.elem_at(b)))
}

/// Lattice polynomial gap classification.
pub fn classify_polynomial_gap(f: &PolyFn) -> Result<GapClassification, ClassifyError> {
    let ess = f.essential_variables().len();
    if ess < 2 {
        return Err(ClassifyError::GapUndefined { ess });
    }
    Ok(match is_truncated_median(f) {
        Some((a, b)) => GapClassification::TruncatedMedian { a, b },
        None => GapClassification::Gap1,
    })
}

/// Classifies `f` through its restriction to `{0,1}^n` and the
/// pseudo-Boolean characterisation.
pub fn classify_via_restriction(f: &PolyFn) -> Result<GapClassification, ClassifyError> {
    let (reduced, _) = f.restrict_to_01().reduce_to_essential();
    classify_pseudo_boolean_gap(&reduced)
}
