//! Brute-force ground truth over dense value tables.
//!
//! Nothing here knows about lattices or normal forms. Essential variables,
//! identification minors and the arity gap are computed straight from their
//! definitions, so the results can be used to check the classifiers.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::classify::GapClassification;
use crate::lattice::Lattice;
use crate::points;
use crate::polyfn::{PolyFn, MAX_ARITY};

/// Default cap on the number of functions an enumeration may produce.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("domain and codomain need at least one element")]
    EmptyAlphabet,
    #[error("value table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("value {label} is outside the codomain 0..{codomain}")]
    LabelOutOfRange { label: usize, codomain: usize },
    #[error("table for arity {arity} over {domain} letters is too large")]
    TooLarge { arity: usize, domain: usize },
    #[error("cannot identify a variable with itself (x{})", .0 + 1)]
    SameVariable(usize),
    #[error("position {} is outside 1..={arity}", .position + 1)]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("arity gap is undefined: {ess} essential variable(s), need at least 2")]
    GapUndefined { ess: usize },
    #[error("Salomaa function needs k >= 2, got {0}")]
    SalomaaTooSmall(usize),
    #[error("enumeration of {count} functions exceeds the budget of {budget}")]
    BudgetExceeded { count: String, budget: u128 },
    #[error("arity {arity} exceeds the maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A function `A^n -> B` with `A = {0..domain}` and `B = {0..codomain}`,
/// stored densely in mixed-radix point order (see [`crate::points`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFn {
    arity: usize,
    domain: usize,
    codomain: usize,
    table: Vec<u16>,
}

impl FiniteFn {
    pub fn new(arity: usize, domain: usize, codomain: usize, table: Vec<u16>) -> Result<Self, OracleError> {
        if domain == 0 || codomain == 0 {
            return Err(OracleError::EmptyAlphabet);
        }
        let expected = points::count(arity, domain)
            .filter(|&c| c <= 1 << 28)
            .ok_or(OracleError::TooLarge { arity, domain })?;
        if table.len() != expected {
            return Err(OracleError::TableLength {
                expected,
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= codomain) {
            return Err(OracleError::LabelOutOfRange {
                label: bad as usize,
                codomain,
            });
        }
        Ok(FiniteFn {
            arity,
            domain,
            codomain,
            table,
        })
    }

    /// Tabulates `f` over every point.
    pub fn from_fn<F>(arity: usize, domain: usize, codomain: usize, f: F) -> Result<Self, OracleError>
    where
        F: Fn(&[usize]) -> usize,
    {
        let mut table = Vec::new();
        for p in points::Points::new(arity, domain) {
            table.push(f(&p) as u16);
        }
        Self::new(arity, domain, codomain, table)
    }

    /// A Boolean table from a string of `0`/`1` of length `2^n`, character
    /// `k` being the value at the point with code `k`.
    pub fn from_bitstring(bits: &str) -> Result<Self, OracleError> {
        let bits = bits.trim();
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(OracleError::Parse(format!(
                "bitstring length {len} is not a power of two >= 2"
            )));
        }
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(OracleError::Parse(format!("unexpected character `{other}` in bitstring"))),
            })
            .collect::<Result<Vec<u16>, _>>()?;
        Self::new(len.trailing_zeros() as usize, 2, 2, table)
    }

    pub fn to_bitstring(&self) -> Option<String> {
        self.is_boolean()
            .then(|| self.table.iter().map(|&v| if v == 1 { '1' } else { '0' }).collect())
    }

    /// Reads `arity domain codomain` followed by the whitespace-separated
    /// value table.
    pub fn parse_text(text: &str) -> Result<Self, OracleError> {
        let mut words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let mut header = |what: &str| -> Result<usize, OracleError> {
            words
                .next()
                .ok_or_else(|| OracleError::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|_| OracleError::Parse(format!("bad {what}")))
        };
        let arity = header("arity")?;
        let domain = header("domain size")?;
        let codomain = header("codomain size")?;
        let table = words
            .map(|w| w.parse::<u16>().map_err(|_| OracleError::Parse(format!("bad value `{w}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arity, domain, codomain, table)
    }

    pub fn to_text(&self) -> String {
        let values: Vec<String> = self.table.iter().map(u16::to_string).collect();
        format!("{} {} {}\n{}\n", self.arity, self.domain, self.codomain, values.join(" "))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn value_at(&self, code: usize) -> usize {
        self.table[code] as usize
    }

    pub fn value(&self, point: &[usize]) -> usize {
        self.value_at(points::encode(point, self.domain))
    }

    pub fn is_boolean(&self) -> bool {
        self.domain == 2 && self.codomain == 2
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&v| v == self.table[0])
    }

    /// Distinct values taken, ascending.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.codomain];
        for &v in &self.table {
            seen[v as usize] = true;
        }
        (0..self.codomain).filter(|&v| seen[v]).collect()
    }

    fn stride(&self, position: usize) -> usize {
        self.domain.pow(position as u32)
    }

    /// Drops inessential positions by fixing them to letter 0. Returns the
    /// reduced table and the original position of each remaining variable.
    pub fn reduce_to_essential(&self) -> (FiniteFn, Vec<usize>) {
        let ess = ess_bruteforce(self);
        let reduced = FiniteFn::from_fn(ess.len(), self.domain, self.codomain, |p| {
            let mut full = vec![0; self.arity];
            for (k, &pos) in ess.iter().enumerate() {
                full[pos] = p[k];
            }
            self.value(&full)
        })
        .expect("reduced table has the right shape");
        (reduced, ess)
    }

    /// Relabels the codomain through `map` into a codomain of size `codomain`.
    pub fn map_values<F: Fn(usize) -> usize>(&self, codomain: usize, map: F) -> Result<FiniteFn, OracleError> {
        let table = self.table.iter().map(|&v| map(v as usize) as u16).collect();
        FiniteFn::new(self.arity, self.domain, codomain, table)
    }
}

impl fmt::Display for FiniteFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Zero-based positions `i` for which two points differing only at `i`
/// have different values.
pub fn ess_bruteforce(f: &FiniteFn) -> Vec<usize> {
    (0..f.arity)
        .filter(|&i| {
            let stride = f.stride(i);
            (0..f.table.len())
                .filter(|code| (code / stride).is_multiple_of(f.domain))
                .any(|code| (1..f.domain).any(|d| f.table[code] != f.table[code + d * stride]))
        })
        .collect()
}

/// `f` with the letter at position `i` replaced by the letter at `j`.
pub fn identify_table(f: &FiniteFn, i: usize, j: usize) -> Result<FiniteFn, OracleError> {
    for position in [i, j] {
        if position >= f.arity {
            return Err(OracleError::PositionOutOfRange {
                position,
                arity: f.arity,
            });
        }
    }
    if i == j {
        return Err(OracleError::SameVariable(i));
    }
    let (si, sj) = (f.stride(i), f.stride(j));
    let table = (0..f.table.len())
        .map(|code| {
            let di = (code / si) % f.domain;
            let dj = (code / sj) % f.domain;
            f.table[code - di * si + dj * si]
        })
        .collect();
    Ok(FiniteFn {
        arity: f.arity,
        domain: f.domain,
        codomain: f.codomain,
        table,
    })
}

/// Essential arity data and, once classified, the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    /// Zero-based essential positions.
    pub essential: Vec<usize>,
    pub ess: usize,
    /// Largest essential arity among identification minors of essential variables.
    pub essl: usize,
    pub gap: usize,
    pub classification: Option<GapClassification>,
}

/// `ess f - max_{i≠j} ess f_{i←j}` with `i, j` ranging over essential positions.
pub fn gap_bruteforce(f: &FiniteFn) -> Result<GapReport, OracleError> {
    let essential = ess_bruteforce(f);
    let ess = essential.len();
    if ess < 2 {
        return Err(OracleError::GapUndefined { ess });
    }
    let mut essl = 0;
    for &i in &essential {
        for &j in &essential {
            if i != j {
                let minor = identify_table(f, i, j)?;
                essl = essl.max(ess_bruteforce(&minor).len());
            }
        }
    }
    Ok(GapReport {
        essential,
        ess,
        essl,
        gap: ess - essl,
        classification: None,
    })
}

/// Salomaa's example on `k` letters: value 1 at `(0, 1, .., k-1)` and 0
/// everywhere else.
pub fn salomaa_function(k: usize) -> Result<FiniteFn, OracleError> {
    if k < 2 {
        return Err(OracleError::SalomaaTooSmall(k));
    }
    let distinguished: Vec<usize> = (0..k).collect();
    FiniteFn::from_fn(k, k, k, |p| usize::from(p == distinguished.as_slice()))
}

/// Every monotone map `2^[n] -> L`, each exactly once, as a [`PolyFn`].
///
/// Backtracks over the masks in increasing order, which is a linear
/// extension of inclusion; a value is admissible when it lies above the
/// values already chosen for the immediate subsets.
pub fn enumerate_monotone_maps(n: usize, lattice: Arc<Lattice>) -> Result<MonotoneMaps, OracleError> {
    if n > MAX_ARITY {
        return Err(OracleError::ArityTooLarge {
            arity: n,
            max: MAX_ARITY,
        });
    }
    Ok(MonotoneMaps {
        n,
        values: vec![0; 1 << n],
        lattice,
        started: false,
        done: false,
    })
}

#[derive(Debug, Clone)]
pub struct MonotoneMaps {
    n: usize,
    lattice: Arc<Lattice>,
    values: Vec<u16>,
    started: bool,
    done: bool,
}

impl MonotoneMaps {
    fn admissible(&self, mask: usize, candidate: usize) -> bool {
        (0..self.n)
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| self.lattice.leq_idx(self.values[mask & !(1 << i)] as usize, candidate))
    }

    fn next_candidate(&self, mask: usize, from: usize) -> Option<usize> {
        (from..self.lattice.len()).find(|&c| self.admissible(mask, c))
    }

    /// Fills `start..` with the least admissible values; top is always admissible.
    fn fill_from(&mut self, start: usize) {
        for mask in start..self.values.len() {
            let c = self.next_candidate(mask, 0).expect("top is admissible");
            self.values[mask] = c as u16;
        }
    }

    fn current(&self) -> PolyFn {
        PolyFn::from_indices(self.values.clone(), self.n, self.lattice.clone())
            .expect("enumerated tables are monotone")
    }
}

impl Iterator for MonotoneMaps {
    type Item = PolyFn;

    fn next(&mut self) -> Option<PolyFn> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
            return Some(self.current());
        }
        let mut mask = self.values.len();
        while mask > 0 {
            mask -= 1;
            let from = self.values[mask] as usize + 1;
            if let Some(c) = self.next_candidate(mask, from) {
                self.values[mask] = c as u16;
                self.fill_from(mask + 1);
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// The space of all functions `{0..domain}^arity -> {0..codomain}`,
/// addressable by index for parallel partitioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionSpace {
    arity: usize,
    domain: usize,
    codomain: usize,
    points: usize,
    len: usize,
}

/// Checks the size `codomain^(domain^arity)` against `budget`.
pub fn enumerate_all_functions(
    arity: usize,
    domain: usize,
    codomain: usize,
    budget: u128,
) -> Result<FunctionSpace, OracleError> {
    if domain == 0 || codomain == 0 {
        return Err(OracleError::EmptyAlphabet);
    }
    let over = |count: String| OracleError::BudgetExceeded { count, budget };
    let pts = points::count(arity, domain).ok_or_else(|| over(format!("{codomain}^({domain}^{arity})")))?;
    let len = u32::try_from(pts)
        .ok()
        .and_then(|p| (codomain as u128).checked_pow(p))
        .ok_or_else(|| over(format!("{codomain}^{pts}")))?;
    if len > budget {
        return Err(over(len.to_string()));
    }
    Ok(FunctionSpace {
        arity,
        domain,
        codomain,
        points: pts,
        len: len as usize,
    })
}

impl FunctionSpace {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The function whose table, read as base-`codomain` digits with the
    /// first point least significant, spells `index`.
    pub fn get(&self, index: usize) -> FiniteFn {
        assert!(index < self.len, "function index out of range");
        let mut rest = index;
        let table = (0..self.points)
            .map(|_| {
                let v = rest % self.codomain;
                rest /= self.codomain;
                v as u16
            })
            .collect();
        FiniteFn {
            arity: self.arity,
            domain: self.domain,
            codomain: self.codomain,
            table,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = FiniteFn> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn boolean(bits: &str) -> FiniteFn {
        FiniteFn::from_bitstring(bits).unwrap()
    }

    #[test]
    fn essential_by_definition() {
        assert_eq!(ess_bruteforce(&boolean("0001")), vec![0, 1]);
        assert!(ess_bruteforce(&boolean("1111")).is_empty());
        assert_eq!(ess_bruteforce(&boolean("0101")), vec![0]);
        assert_eq!(ess_bruteforce(&salomaa_function(3).unwrap()), vec![0, 1, 2]);
    }

    #[test]
    fn identification_minors() {
        let xor = identify_table(&boolean("0110"), 0, 1).unwrap();
        assert_eq!(xor.table(), &[0, 0, 0, 0]);
        let and = identify_table(&boolean("0001"), 0, 1).unwrap();
        assert_eq!(and.table(), &[0, 0, 1, 1]);
        assert_eq!(ess_bruteforce(&and), vec![1]);
        let s = salomaa_function(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let m = identify_table(&s, i, j).unwrap();
                    assert!(m.is_constant());
                    assert_eq!(m.value_at(0), 0);
                }
            }
        }
        assert_eq!(identify_table(&s, 1, 1).unwrap_err(), OracleError::SameVariable(1));
        assert!(matches!(
            identify_table(&s, 0, 3),
            Err(OracleError::PositionOutOfRange { position: 3, .. })
        ));
    }

    #[test]
    fn identification_matches_pointwise_substitution() {
        let f = FiniteFn::from_fn(3, 3, 5, |p| (p[0] * 7 + p[1] * 3 + p[2] * p[0]) % 5).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let g = identify_table(&f, i, j).unwrap();
                for p in points::Points::new(3, 3) {
                    let mut q = p.clone();
                    q[i] = p[j];
                    assert_eq!(g.value(&p), f.value(&q));
                }
            }
        }
    }

    #[test]
    fn gaps() {
        assert_eq!(gap_bruteforce(&boolean("00010111")).unwrap().gap, 2);
        let and = gap_bruteforce(&boolean("0001")).unwrap();
        assert_eq!((and.ess, and.essl, and.gap), (2, 1, 1));
        assert_eq!(gap_bruteforce(&salomaa_function(3).unwrap()).unwrap().gap, 3);
        assert_eq!(
            gap_bruteforce(&boolean("0101")).unwrap_err(),
            OracleError::GapUndefined { ess: 1 }
        );
    }

    #[test]
    fn salomaa_shape() {
        let s = salomaa_function(2).unwrap();
        assert_eq!(s.table(), &[0, 0, 1, 0]);
        assert_eq!(s.table().iter().filter(|&&v| v == 1).count(), 1);
        assert_eq!(salomaa_function(1).unwrap_err(), OracleError::SalomaaTooSmall(1));
    }

    /// Reference count: all maps `2^[n] -> L` filtered for monotonicity.
    fn monotone_by_filter(n: usize, l: &Lattice) -> usize {
        let size = 1usize << n;
        let total = l.len().pow(size as u32);
        (0..total)
            .filter(|&code| {
                let vals = points::decode(code, size, l.len());
                (0..size).all(|m| (0..n).all(|i| m >> i & 1 == 0 || l.leq_idx(vals[m & !(1 << i)], vals[m])))
            })
            .count()
    }

    #[test]
    fn monotone_counts() {
        let c2 = Arc::new(Lattice::chain(2).unwrap());
        let c3 = Arc::new(Lattice::chain(3).unwrap());
        let sq = Arc::new(Lattice::boolean_cube(2).unwrap());
        assert_eq!(monotone_by_filter(2, &c2), 6);
        assert_eq!(monotone_by_filter(3, &c2), 20);
        assert_eq!(enumerate_monotone_maps(1, c3.clone()).unwrap().count(), 6);
        assert_eq!(enumerate_monotone_maps(2, c2.clone()).unwrap().count(), 6);
        assert_eq!(enumerate_monotone_maps(3, c2.clone()).unwrap().count(), 20);
        for (n, l) in [(2, &c3), (2, &sq), (3, &c3)] {
            let maps: Vec<PolyFn> = enumerate_monotone_maps(n, l.clone()).unwrap().collect();
            assert_eq!(maps.len(), monotone_by_filter(n, l));
            let distinct: HashSet<Vec<u16>> = maps.iter().map(|f| f.coeffs().to_vec()).collect();
            assert_eq!(distinct.len(), maps.len());
        }
        assert_eq!(enumerate_monotone_maps(0, c3).unwrap().count(), 3);
    }

    #[test]
    fn function_space() {
        assert_eq!(enumerate_all_functions(1, 2, 2, DEFAULT_BUDGET).unwrap().len(), 4);
        assert_eq!(enumerate_all_functions(2, 2, 2, DEFAULT_BUDGET).unwrap().len(), 16);
        let space = enumerate_all_functions(2, 2, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(space.len(), 81);
        let all: HashSet<FiniteFn> = space.iter().collect();
        assert_eq!(all.len(), 81);
        assert!(matches!(
            enumerate_all_functions(5, 2, 2, DEFAULT_BUDGET),
            Err(OracleError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_all_functions(2, 2, 3, 80),
            Err(OracleError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_all_functions(40, 2, 2, u128::MAX),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn text_formats() {
        let f = FiniteFn::parse_text("2 2 3\n0 1 2 0\n").unwrap();
        assert_eq!(f.value(&[1, 0]), 1);
        assert_eq!(f.value(&[0, 1]), 2);
        assert_eq!(FiniteFn::parse_text(&f.to_text()).unwrap(), f);
        assert!(matches!(
            FiniteFn::parse_text("2 2 3\n0 1 2\n"),
            Err(OracleError::TableLength { expected: 4, got: 3 })
        ));
        assert!(matches!(
            FiniteFn::parse_text("1 2 2\n0 2\n"),
            Err(OracleError::LabelOutOfRange { label: 2, .. })
        ));
        assert!(FiniteFn::from_bitstring("011").is_err());
        assert!(FiniteFn::from_bitstring("01a0").is_err());
        assert_eq!(boolean("0110").to_bitstring().unwrap(), "0110");
    }

    #[test]
    fn reduction_keeps_values() {
        // f(x1, x2, x3) = x3 over three letters.
        let f = FiniteFn::from_fn(3, 3, 3, |p| p[2]).unwrap();
        let (r, pos) = f.reduce_to_essential();
        assert_eq!(pos, vec![2]);
        assert_eq!(r.table(), &[0, 1, 2]);
    }
}
