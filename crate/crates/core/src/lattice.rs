//! Finite bounded distributive lattices given by their cover relation.
//!
//! A [`Lattice`] is immutable once built. Order, meet and join are dense
//! tables indexed by element ordinal, so every query is a lookup. Elements
//! are handed out as [`Elem`] handles that remember which lattice they came
//! from; mixing handles from different lattices is reported as an error.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

/// Largest supported carrier. Validation is cubic in the size.
pub const MAX_LATTICE_SIZE: usize = 256;

static NEXT_LATTICE_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("a lattice needs at least two elements, got {0}")]
    TooFewElements(usize),
    #[error("lattice has {size} elements, the maximum is {max}")]
    TooLarge { size: usize, max: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("invalid element name `{0}`")]
    InvalidName(String),
    #[error("unknown element name `{0}` in cover relation")]
    UnknownName(String),
    #[error("cover relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("no unique least element")]
    NoBottom,
    #[error("no unique greatest element")]
    NoTop,
    #[error("`{0}` and `{1}` have no meet")]
    MissingMeet(String, String),
    #[error("`{0}` and `{1}` have no join")]
    MissingJoin(String, String),
    #[error("not distributive: witness ({x}, {y}, {z}) with {x} & ({y} | {z}) = {lhs} but ({x} & {y}) | ({x} & {z}) = {rhs}")]
    NotDistributive {
        x: String,
        y: String,
        z: String,
        lhs: String,
        rhs: String,
    },
    #[error("element does not belong to this lattice")]
    ForeignElement,
    #[error("chain needs at least 2 elements, got {0}")]
    ChainTooShort(usize),
    #[error("boolean cube needs dimension at least 1, got {0}")]
    CubeDimension(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown standard lattice `{0}` (expected chainK, cubeD, or A*B)")]
    UnknownStandard(String),
}

/// Handle to one element of a particular [`Lattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    lattice: u32,
    index: u16,
}

impl Elem {
    pub fn index(self) -> usize {
        self.index as usize
    }
}

/// A validated finite bounded distributive lattice.
#[derive(Debug, Clone)]
pub struct Lattice {
    id: u32,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    leq: Vec<bool>,
    meet: Vec<u16>,
    join: Vec<u16>,
    bottom: usize,
    top: usize,
    covers: Vec<(usize, usize)>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}

impl Eq for Lattice {}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-'))
}

impl Lattice {
    /// Builds a lattice from element names and a list of `(lower, upper)`
    /// pairs. The pairs need not be covers; the order is their reflexive
    /// transitive closure.
    pub fn from_covers<N, P>(names: &[N], pairs: &[(P, P)]) -> Result<Self, LatticeError>
    where
        N: AsRef<str>,
        P: AsRef<str>,
    {
        if names.is_empty() {
            return Err(LatticeError::Empty);
        }
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(LatticeError::InvalidName(name.to_string()));
            }
            if by_name.insert(name.to_string(), i).is_some() {
                return Err(LatticeError::DuplicateName(name.to_string()));
            }
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            let lookup = |n: &str| {
                by_name
                    .get(n)
                    .copied()
                    .ok_or_else(|| LatticeError::UnknownName(n.to_string()))
            };
            edges.push((lookup(lo.as_ref())?, lookup(hi.as_ref())?));
        }
        let names: Vec<String> = names.iter().map(|n| n.as_ref().to_string()).collect();
        Self::from_edges(names, by_name, &edges)
    }

    fn from_edges(
        names: Vec<String>,
        by_name: HashMap<String, usize>,
        edges: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        if n < 2 {
            return Err(LatticeError::TooFewElements(n));
        }
        if n > MAX_LATTICE_SIZE {
            return Err(LatticeError::TooLarge {
                size: n,
                max: MAX_LATTICE_SIZE,
            });
        }

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(lo, hi) in edges {
            if lo == hi {
                return Err(LatticeError::Cycle(names[lo].clone(), names[hi].clone()));
            }
            leq[lo * n + hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }

        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b * n + x]))
            .ok_or(LatticeError::NoBottom)?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| leq[x * n + t]))
            .ok_or(LatticeError::NoTop)?;

        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for x in 0..n {
            for y in x..n {
                let lower: Vec<usize> = (0..n)
                    .filter(|&z| leq[z * n + x] && leq[z * n + y])
                    .collect();
                let m = lower
                    .iter()
                    .copied()
                    .find(|&m| lower.iter().all(|&z| leq[z * n + m]))
                    .ok_or_else(|| LatticeError::MissingMeet(names[x].clone(), names[y].clone()))?;
                let upper: Vec<usize> = (0..n)
                    .filter(|&z| leq[x * n + z] && leq[y * n + z])
                    .collect();
                let j = upper
                    .iter()
                    .copied()
                    .find(|&j| upper.iter().all(|&z| leq[j * n + z]))
                    .ok_or_else(|| LatticeError::MissingJoin(names[x].clone(), names[y].clone()))?;
                meet[x * n + y] = m as u16;
                meet[y * n + x] = m as u16;
                join[x * n + y] = j as u16;
                join[y * n + x] = j as u16;
            }
        }

        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = meet[x * n + join[y * n + z] as usize] as usize;
                    let rhs = join[meet[x * n + y] as usize * n + meet[x * n + z] as usize] as usize;
                    if lhs != rhs {
                        return Err(LatticeError::NotDistributive {
                            x: names[x].clone(),
                            y: names[y].clone(),
                            z: names[z].clone(),
                            lhs: names[lhs].clone(),
                            rhs: names[rhs].clone(),
                        });
                    }
                }
            }
        }

        let mut covers = Vec::new();
        for lo in 0..n {
            for hi in 0..n {
                if lo != hi
                    && leq[lo * n + hi]
                    && !(0..n).any(|m| {
                        m != lo && m != hi && leq[lo * n + m] && leq[m * n + hi]
                    })
                {
                    covers.push((lo, hi));
                }
            }
        }

        Ok(Lattice {
            id: NEXT_LATTICE_ID.fetch_add(1, Ordering::Relaxed),
            names,
            by_name,
            leq,
            meet,
            join,
            bottom,
            top,
            covers,
        })
    }

    /// The chain `0 < a < b < ... < 1` with `k` elements.
    pub fn chain(k: usize) -> Result<Self, LatticeError> {
        if k < 2 {
            return Err(LatticeError::ChainTooShort(k));
        }
        let interior = k - 2;
        let mut names = vec!["0".to_string()];
        for i in 0..interior {
            if interior <= 26 {
                names.push(((b'a' + i as u8) as char).to_string());
            } else {
                names.push(format!("e{}", i + 1));
            }
        }
        names.push("1".to_string());
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        let by_name = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self::from_edges(names, by_name, &edges)
    }

    /// The powerset of a `d`-element set, elements named by `d`-bit strings.
    pub fn boolean_cube(d: usize) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::CubeDimension(d));
        }
        if d > 8 {
            return Err(LatticeError::TooLarge {
                size: 1 << d.min(31),
                max: MAX_LATTICE_SIZE,
            });
        }
        let size = 1usize << d;
        let names: Vec<String> = (0..size)
            .map(|s| (0..d).map(|b| if s >> b & 1 == 1 { '1' } else { '0' }).collect())
            .collect();
        let mut edges = Vec::new();
        for s in 0..size {
            for b in 0..d {
                if s >> b & 1 == 0 {
                    edges.push((s, s | 1 << b));
                }
            }
        }
        let by_name = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self::from_edges(names, by_name, &edges)
    }

    /// Direct product ordered componentwise; element `(p, q)` is named `p.q`.
    pub fn product(left: &Lattice, right: &Lattice) -> Result<Self, LatticeError> {
        let (m, k) = (left.len(), right.len());
        if m * k > MAX_LATTICE_SIZE {
            return Err(LatticeError::TooLarge {
                size: m * k,
                max: MAX_LATTICE_SIZE,
            });
        }
        let mut names = Vec::with_capacity(m * k);
        for p in &left.names {
            for q in &right.names {
                names.push(format!("{p}.{q}"));
            }
        }
        let mut by_name = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if by_name.insert(s.clone(), i).is_some() {
                return Err(LatticeError::DuplicateName(s.clone()));
            }
        }
        let mut edges = Vec::new();
        for &(lo, hi) in &left.covers {
            for q in 0..k {
                edges.push((lo * k + q, hi * k + q));
            }
        }
        for p in 0..m {
            for &(lo, hi) in &right.covers {
                edges.push((p * k + lo, p * k + hi));
            }
        }
        Self::from_edges(names, by_name, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> Result<&str, LatticeError> {
        Ok(&self.names[self.check(e)?])
    }

    pub fn name_of(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.by_name.get(name).map(|&i| self.elem_at(i))
    }

    /// # Panics
    /// If `index` is out of range.
    pub fn elem_at(&self, index: usize) -> Elem {
        assert!(index < self.len(), "element index {index} out of range");
        Elem {
            lattice: self.id,
            index: index as u16,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.len()).map(|i| self.elem_at(i))
    }

    pub fn owns(&self, e: Elem) -> bool {
        e.lattice == self.id && (e.index as usize) < self.len()
    }

    pub fn check(&self, e: Elem) -> Result<usize, LatticeError> {
        if self.owns(e) {
            Ok(e.index as usize)
        } else {
            Err(LatticeError::ForeignElement)
        }
    }

    pub fn bottom(&self) -> Elem {
        self.elem_at(self.bottom)
    }

    pub fn top(&self) -> Elem {
        self.elem_at(self.top)
    }

    pub fn leq(&self, x: Elem, y: Elem) -> Result<bool, LatticeError> {
        Ok(self.leq_idx(self.check(x)?, self.check(y)?))
    }

    /// `x < y`: comparable and distinct.
    pub fn lt(&self, x: Elem, y: Elem) -> Result<bool, LatticeError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(x != y && self.leq_idx(x, y))
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Result<Elem, LatticeError> {
        Ok(self.elem_at(self.meet_idx(self.check(x)?, self.check(y)?)))
    }

    pub fn join(&self, x: Elem, y: Elem) -> Result<Elem, LatticeError> {
        Ok(self.elem_at(self.join_idx(self.check(x)?, self.check(y)?)))
    }

    #[inline]
    pub fn leq_idx(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn meet_idx(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }

    #[inline]
    pub fn join_idx(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    #[inline]
    pub fn bottom_idx(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn top_idx(&self) -> usize {
        self.top
    }

    /// Hasse diagram edges `(lower, upper)` in index order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Parses the line-based text format:
    ///
    /// ```text
    /// # comment
    /// elements: 0 a 1
    /// 0 < a
    /// a < 1
    /// ```
    pub fn parse_text(text: &str) -> Result<Self, LatticeError> {
        let mut names: Option<Vec<String>> = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| LatticeError::Syntax {
                line: lineno + 1,
                message: message.to_string(),
            };
            if let Some(rest) = line.strip_prefix("elements:") {
                if names.is_some() {
                    return Err(syntax("repeated `elements:` line"));
                }
                names = Some(rest.split_whitespace().map(str::to_string).collect());
                continue;
            }
            if names.is_none() {
                return Err(syntax("expected `elements:` before cover lines"));
            }
            let mut parts = line.splitn(2, '<');
            let lo = parts.next().unwrap_or("").trim();
            let hi = parts
                .next()
                .ok_or_else(|| syntax("expected `a < b`"))?
                .trim();
            if lo.is_empty() || hi.is_empty() || lo.contains(char::is_whitespace) || hi.contains(char::is_whitespace) {
                return Err(syntax("expected `a < b`"));
            }
            pairs.push((lo.to_string(), hi.to_string()));
        }
        let names = names.ok_or(LatticeError::Syntax {
            line: 0,
            message: "missing `elements:` line".to_string(),
        })?;
        Self::from_covers(&names, &pairs)
    }

    /// Inverse of [`Lattice::parse_text`], emitting the Hasse covers.
    pub fn to_text(&self) -> String {
        let mut out = format!("elements: {}\n", self.names.join(" "));
        for &(lo, hi) in &self.covers {
            out.push_str(&format!("{} < {}\n", self.names[lo], self.names[hi]));
        }
        out
    }
}

impl FromStr for Lattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lattice::parse_text(s)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Named fixture lattices: `chain4`, `cube2`, `chain2*chain3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardLattice {
    Chain(usize),
    BooleanCube(usize),
    Product(Box<StandardLattice>, Box<StandardLattice>),
}

impl StandardLattice {
    pub fn build(&self) -> Result<Lattice, LatticeError> {
        match self {
            StandardLattice::Chain(k) => Lattice::chain(*k),
            StandardLattice::BooleanCube(d) => Lattice::boolean_cube(*d),
            StandardLattice::Product(a, b) => Lattice::product(&a.build()?, &b.build()?),
        }
    }
}

impl FromStr for StandardLattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('*') {
            return Ok(StandardLattice::Product(
                Box::new(a.parse()?),
                Box::new(b.parse()?),
            ));
        }
        let unknown = || LatticeError::UnknownStandard(s.to_string());
        if let Some(k) = s.strip_prefix("chain") {
            return Ok(StandardLattice::Chain(k.parse().map_err(|_| unknown())?));
        }
        if let Some(d) = s.strip_prefix("cube") {
            return Ok(StandardLattice::BooleanCube(d.parse().map_err(|_| unknown())?));
        }
        Err(unknown())
    }
}

impl fmt::Display for StandardLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardLattice::Chain(k) => write!(f, "chain{k}"),
            StandardLattice::BooleanCube(d) => write!(f, "cube{d}"),
            StandardLattice::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}
