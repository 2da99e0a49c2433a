//! Permutations of `{0..k-1}`, their cycle structure and the refinement
//! pre-order.
//!
//! Internally every index is 0-based (the 1-based index `s` is stored as
//! `s - 1`). Everything user-facing (cycle notation, JSON, error messages)
//! is 1-based.
//!
//! `mu.precedes(sigma)` holds when every cycle of `sigma` is contained in a
//! cycle of `mu`, i.e. `sigma` refines `mu`. The relation is reflexive and
//! transitive but not antisymmetric: `(123)` and `(132)` precede each other.

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::Partition;

/// Largest `k` accepted by [`all_permutations`].
pub const MAX_ENUMERATION_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

/// Canonical cycle decomposition: every cycle starts at its minimum and the
/// cycles are sorted by that minimum. Fixed points are kept as 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleSet {
    cycles: Vec<Vec<usize>>,
}

impl CycleSet {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cycles.iter()
    }
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            map: (0..k).collect(),
        }
    }

    /// Builds a permutation from a 0-based image table: `map[s] = sigma(s)`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::InvalidPermutation("k must be at least 1".into()));
        }
        let k = map.len();
        let mut seen = vec![false; k];
        for &v in &map {
            if v >= k {
                return Err(Error::InvalidPermutation(format!(
                    "image {} is outside 1..={k}",
                    v + 1
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image {} appears more than once",
                    v + 1
                )));
            }
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from a 1-based image table, as used in JSON.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&v| v == 0) {
            return Err(Error::InvalidPermutation(format!(
                "image {bad} is outside 1..={}",
                map.len()
            )));
        }
        Self::from_map(map.iter().map(|&v| v - 1).collect())
    }

    /// Builds a permutation on `k` points from 0-based cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPermutation("k must be at least 1".into()));
        }
        let mut map: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for cycle in cycles {
            if cycle.is_empty() {
                return Err(Error::InvalidPermutation("empty cycle".into()));
            }
            for (pos, &s) in cycle.iter().enumerate() {
                if s >= k {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} is outside 1..={k}",
                        s + 1
                    )));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears in more than one place",
                        s + 1
                    )));
                }
                map[s] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Permutation { map })
    }

    /// Parses cycle notation such as `"(12)(3)"`, `"(123)"` or
    /// `"(1 2)(3)"`.
    ///
    /// Inside a cycle without separators every character is one point, so
    /// the compact form only covers `k <= 9`; larger points need spaces or
    /// commas. When `k` is `None` it is taken to be the largest point
    /// mentioned. `"()"` and `"id"` denote the identity.
    pub fn parse(text: &str, k: Option<usize>) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.eq_ignore_ascii_case("id") || trimmed == "()" {
            let k = k.ok_or_else(|| {
                Error::InvalidPermutation("identity needs an explicit k".into())
            })?;
            return Self::from_cycles(k, &[]);
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let bytes = text.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos];
            if c.is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if c != b'(' {
                return Err(Error::Parse {
                    offset: pos,
                    message: format!("expected '(' in cycle notation, found '{}'", c as char),
                });
            }
            let close = text[pos..].find(')').map(|i| pos + i).ok_or(Error::Parse {
                offset: pos,
                message: "unclosed cycle".into(),
            })?;
            let body = &text[pos + 1..close];
            cycles.push(parse_cycle_body(body, pos + 1)?);
            pos = close + 1;
        }
        if cycles.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                message: "empty cycle notation".into(),
            });
        }
        let largest = cycles.iter().flatten().copied().max().unwrap_or(1);
        let k = k.unwrap_or(largest);
        if largest > k {
            return Err(Error::InvalidPermutation(format!(
                "point {largest} is outside 1..={k}"
            )));
        }
        if k > 9 && cycles.iter().any(|c| c.len() > 1) && text.chars().all(|c| c != ' ' && c != ',') {
            return Err(Error::InvalidPermutation(
                "compact cycle notation is only valid for k <= 9; separate points with spaces".into(),
            ));
        }
        let zero_based: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|c| c.into_iter().map(|s| s - 1).collect())
            .collect();
        Self::from_cycles(k, &zero_based)
    }

    pub fn k(&self) -> usize {
        self.map.len()
    }

    /// 0-based image table.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// 1-based image table, the JSON representation.
    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(s, &v)| s == v)
    }

    /// `self ∘ other`, i.e. `s ↦ self(other(s))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_same_k(self, other)?;
        Ok(Permutation {
            map: other.map.iter().map(|&s| self.map[s]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.k()];
        for (s, &v) in self.map.iter().enumerate() {
            inv[v] = s;
        }
        Permutation { map: inv }
    }

    pub fn cycles(&self) -> CycleSet {
        let k = self.k();
        let mut visited = vec![false; k];
        let mut cycles = Vec::new();
        // Scanning starts in increasing order, so each cycle is discovered
        // from its minimum and the list comes out sorted by minimum.
        for start in 0..k {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut s = self.map[start];
            while s != start {
                visited[s] = true;
                cycle.push(s);
                s = self.map[s];
            }
            cycles.push(cycle);
        }
        CycleSet { cycles }
    }

    /// `cycle_id[s]` is the position of the cycle containing `s` in
    /// [`Permutation::cycles`].
    pub fn cycle_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.k()];
        for (c, cycle) in self.cycles().iter().enumerate() {
            for &s in cycle {
                ids[s] = c;
            }
        }
        ids
    }

    /// `self ⪯ sigma`: every cycle of `sigma` lies inside a cycle of `self`.
    pub fn precedes(&self, sigma: &Permutation) -> Result<bool> {
        check_same_k(self, sigma)?;
        let ids = self.cycle_ids();
        // A cycle of sigma is the orbit of sigma-steps, so it stays inside a
        // cycle of self iff no single step leaves it.
        Ok((0..self.k()).all(|s| ids[s] == ids[sigma.map[s]]))
    }

    /// The partition of `{0..k-1}` into the cycles of `self`. Two
    /// permutations have the same diagonal subspace iff these agree.
    pub fn orbit_partition(&self) -> Partition {
        Partition::from_labels(&self.cycle_ids())
    }

    /// Indicator-style membership test for the diagonal subspace
    /// `{x : x_s = x_{sigma(s)}}`.
    pub fn fixes_vector<T: PartialEq>(&self, x: &[T]) -> bool {
        x.len() == self.k() && (0..self.k()).all(|s| x[s] == x[self.map[s]])
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation. Compact (`(12)(3)`) for `k <= 9`. For
    /// larger `k` points are space separated and fixed points are left out
    /// (a lone `(11)` would read as two points), so the identity prints as
    /// `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.k() <= 9;
        let sep = if compact { "" } else { " " };
        let mut wrote = false;
        for cycle in self.cycles().iter().filter(|c| compact || c.len() > 1) {
            let body: Vec<String> = cycle.iter().map(|s| (s + 1).to_string()).collect();
            write!(f, "({})", body.join(sep))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn parse_cycle_body(body: &str, base_offset: usize) -> Result<Vec<usize>> {
    let has_separators = body.contains(|c: char| c.is_whitespace() || c == ',');
    let tokens: Vec<(usize, &str)> = if has_separators {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in body.char_indices() {
            if c.is_whitespace() || c == ',' {
                if let Some(st) = start.take() {
                    out.push((st, &body[st..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(st) = start {
            out.push((st, &body[st..]));
        }
        out
    } else {
        body.char_indices()
            .map(|(i, c)| (i, &body[i..i + c.len_utf8()]))
            .collect()
    };
    if tokens.is_empty() {
        return Err(Error::Parse {
            offset: base_offset,
            message: "empty cycle".into(),
        });
    }
    tokens
        .into_iter()
        .map(|(i, tok)| match tok.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::Parse {
                offset: base_offset + i,
                message: format!("expected a point number >= 1, found '{tok}'"),
            }),
        })
        .collect()
}

fn check_same_k(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.k() != b.k() {
        return Err(Error::DomainSize {
            expected: a.k(),
            actual: b.k(),
        });
    }
    Ok(())
}

/// `sigma ∘ tau`.
pub fn compose(sigma: &Permutation, tau: &Permutation) -> Result<Permutation> {
    sigma.compose(tau)
}

/// `mu ⪯ sigma`.
pub fn precedes(mu: &Permutation, sigma: &Permutation) -> Result<bool> {
    mu.precedes(sigma)
}

/// Every permutation of `{0..k-1}` in lexicographic order of the image
/// table, for `1 <= k <= 8`.
pub fn all_permutations(k: usize) -> Result<Vec<Permutation>> {
    if !(1..=MAX_ENUMERATION_K).contains(&k) {
        return Err(Error::Capacity {
            what: "k",
            value: k,
            min: 1,
            max: MAX_ENUMERATION_K,
        });
    }
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![Permutation {
        map: current.clone(),
    }];
    while next_lexicographic(&mut current) {
        out.push(Permutation {
            map: current.clone(),
        });
    }
    Ok(out)
}

fn next_lexicographic(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
