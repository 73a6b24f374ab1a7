//! Structured results shared by the text and JSON renderers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use latgap::{BooleanForm, GapClassification, Lattice, SweepSummary};
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// Fewer than two essential variables.
    Undefined,
    Gap1,
    BooleanForm {
        form: usize,
        name: &'static str,
        m: usize,
        c: u8,
        /// Original variable playing each template variable, one-based.
        positions: Vec<usize>,
    },
    PseudoBoolean {
        diagonal: bool,
        g: Option<[usize; 2]>,
        inner_form: Option<usize>,
    },
    TruncatedMedian {
        a: String,
        b: String,
    },
}

impl Verdict {
    pub fn from_classification(c: &GapClassification, lattice: Option<&Lattice>) -> Verdict {
        match c {
            GapClassification::Gap1 => Verdict::Gap1,
            GapClassification::Boolean(form) => Self::boolean(form),
            GapClassification::PseudoBoolean(v) => Verdict::PseudoBoolean {
                diagonal: v.diagonal,
                g: v.composition.as_ref().map(|c| c.g),
                inner_form: v.composition.as_ref().map(|c| c.inner.kind.number()),
            },
            GapClassification::TruncatedMedian { a, b } => {
                let name = |e| {
                    lattice
                        .and_then(|l| l.name(e).ok())
                        .map_or_else(|| format!("#{}", latgap::Elem::index(e)), str::to_string)
                };
                Verdict::TruncatedMedian { a: name(*a), b: name(*b) }
            }
        }
    }

    fn boolean(form: &BooleanForm) -> Verdict {
        Verdict::BooleanForm {
            form: form.kind.number(),
            name: form.kind.as_str(),
            m: form.m,
            c: u8::from(form.c),
            positions: form.positions.iter().map(|p| p + 1).collect(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::Undefined => "undefined (fewer than two essential variables)".into(),
            Verdict::Gap1 => "gap 1".into(),
            Verdict::BooleanForm { form, name, m, c, positions } => {
                let vars: Vec<String> = positions.iter().map(|p| format!("x{p}")).collect();
                format!("gap 2, form ({form}) {name}, m = {m}, c = {c}, template variables = [{}]", vars.join(", "))
            }
            Verdict::PseudoBoolean { diagonal, g, inner_form } => {
                let mut parts = Vec::new();
                if *diagonal {
                    parts.push("case (1): f(0,0) = f(1,1)".to_string());
                }
                if let (Some(g), Some(form)) = (g, inner_form) {
                    parts.push(format!("case (2): g = ({}, {}) over form ({form})", g[0], g[1]));
                }
                format!("gap 2, {}", parts.join("; "))
            }
            Verdict::TruncatedMedian { a, b } => format!("gap 2, truncated median (a = {a}, b = {b})"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Coefficient {
    pub subset: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct LatticeInfo {
    pub size: usize,
    pub bottom: String,
    pub top: String,
}

impl LatticeInfo {
    pub fn of(l: &Lattice) -> Self {
        LatticeInfo {
            size: l.len(),
            bottom: l.name_of(l.bottom_idx()).to_string(),
            top: l.name_of(l.top_idx()).to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub lattice: LatticeInfo,
    pub arity: usize,
    pub dnf: String,
    pub coefficients: Vec<Coefficient>,
    /// One-based.
    pub essential: Vec<usize>,
    pub ess: usize,
    pub gap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct OracleCheck {
    pub essential: Vec<usize>,
    pub gap: Option<usize>,
    pub agrees: bool,
}

fn vars(positions: &[usize]) -> String {
    if positions.is_empty() {
        "(none)".into()
    } else {
        positions.iter().map(|p| format!("x{p}")).collect::<Vec<_>>().join(" ")
    }
}

fn gap_text(gap: Option<usize>) -> String {
    gap.map_or_else(|| "undefined".into(), |g| g.to_string())
}

fn oracle_text(out: &mut String, oracle: &Option<OracleCheck>) {
    if let Some(o) = oracle {
        let _ = writeln!(
            out,
            "oracle: essential {}, gap {} ({})",
            vars(&o.essential),
            gap_text(o.gap),
            if o.agrees { "agrees" } else { "DISAGREES" }
        );
    }
}

impl Analysis {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dnf: {}", self.dnf);
        let _ = writeln!(out, "coefficients:");
        for c in &self.coefficients {
            let set: Vec<String> = c.subset.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "  {{{}}} -> {}", set.join(","), c.value);
        }
        let _ = writeln!(out, "essential: {}", vars(&self.essential));
        let _ = writeln!(out, "ess: {}", self.ess);
        let _ = writeln!(out, "gap: {}", gap_text(self.gap));
        let _ = writeln!(out, "verdict: {}", self.verdict.describe());
        oracle_text(&mut out, &self.oracle);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct BoolAnalysis {
    pub table: String,
    pub arity: usize,
    pub zhegalkin: String,
    pub essential: Vec<usize>,
    pub ess: usize,
    pub gap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    pub verdict: Verdict,
}

impl BoolAnalysis {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "table: {}", self.table);
        let _ = writeln!(out, "zhegalkin: {}", self.zhegalkin);
        let _ = writeln!(out, "essential: {}", vars(&self.essential));
        let _ = writeln!(out, "ess: {}", self.ess);
        let _ = writeln!(out, "gap: {}", gap_text(self.gap));
        let _ = writeln!(out, "verdict: {}", self.verdict.describe());
        oracle_text(&mut out, &self.oracle);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct LatticeReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Distributivity witness `(x, y, z)` when that is the failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 3]>,
}

impl LatticeReport {
    pub fn to_text(&self) -> String {
        match (&self.lattice, &self.error) {
            (Some(info), _) => format!("valid, |L|={}, bottom={}, top={}\n", info.size, info.bottom, info.top),
            (None, Some(e)) => {
                let mut s = format!("invalid: {e}\n");
                if let Some([x, y, z]) = &self.witness {
                    let _ = writeln!(s, "witness: ({x}, {y}, {z})");
                }
                s
            }
            (None, None) => "invalid\n".into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub index: usize,
    pub function: String,
    pub problem: String,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub sweep: String,
    pub arity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codomain: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    pub scanned: usize,
    pub checked: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub gaps: BTreeMap<usize, usize>,
    pub disagreements: usize,
    pub bound_violations: usize,
    pub willard_violations: usize,
    pub essentiality_mismatches: usize,
    pub other_failures: usize,
    pub first_failure: Option<Failure>,
    pub passed: bool,
}

impl SweepReport {
    pub fn new(sweep: &str, arity: usize, s: SweepSummary) -> Self {
        SweepReport {
            sweep: sweep.to_string(),
            arity,
            codomain: None,
            lattice: None,
            scanned: s.scanned,
            checked: s.checked,
            passed: s.passed(),
            verdicts: s.verdicts,
            gaps: s.gaps,
            disagreements: s.disagreements,
            bound_violations: s.bound_violations,
            willard_violations: s.willard_violations,
            essentiality_mismatches: s.essentiality_mismatches,
            other_failures: s.other_failures,
            first_failure: s.first_failure.map(|c| Failure {
                index: c.index,
                function: c.function,
                problem: c.problem,
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} sweep, arity {}", self.sweep, self.arity);
        if let Some(k) = self.codomain {
            let _ = write!(out, ", codomain {k}");
        }
        if let Some(l) = &self.lattice {
            let _ = write!(out, ", lattice {l}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "scanned: {}", self.scanned);
        let _ = writeln!(out, "checked (ess >= 2): {}", self.checked);
        for (tag, n) in &self.verdicts {
            let _ = writeln!(out, "  {tag}: {n}");
        }
        for (gap, n) in &self.gaps {
            let _ = writeln!(out, "  oracle gap {gap}: {n}");
        }
        let _ = writeln!(out, "disagreements: {}", self.disagreements);
        let other = self.bound_violations + self.willard_violations + self.essentiality_mismatches + self.other_failures;
        if other > 0 {
            let _ = writeln!(
                out,
                "bound violations: {}, willard violations: {}, essentiality mismatches: {}, other: {}",
                self.bound_violations, self.willard_violations, self.essentiality_mismatches, self.other_failures
            );
        }
        if let Some(f) = &self.first_failure {
            let _ = writeln!(out, "first counterexample (#{}): {}\n  {}", f.index, f.function, f.problem);
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}
