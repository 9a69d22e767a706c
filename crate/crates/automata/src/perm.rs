//! Permutations of `{0..n-1}` as 0/1 matrices, with group operations and
//! label-vector evolution.
//!
//! # Matrix convention
//!
//! `M[i][j] = 1` iff index `i` evolves to index `j`: the **row is the
//! source**. This matches the displayed configuration-vector chains: applying
//! a permutation to a label vector picks `out[i] = in[target[i]]`, i.e. slot
//! `i` of the result shows where configuration `i` went. Note this is the
//! transpose of the basis-vector convention. Under it,
//! `compose(p, q)` ("p first, then q") has matrix `M_p * M_q`, and
//! `p.apply(&q.apply(&v)) == p.compose(&q).apply(&v)`.

use num::integer::Integer;
use num::BigUint;

use crate::error::{Error, ParseError};

/// A bijection on `{0..n-1}`; `target[i]` is the image of `i`.
///
/// ```
/// use revmealy::Permutation;
///
/// let p = Permutation::from_target(vec![2, 1, 3, 0]).unwrap();
/// assert_eq!(p.matrix()[0], [0, 0, 1, 0]);
/// assert_eq!(p.order(), 3u32.into());
/// assert!(p.compose(&p.inverse()).unwrap().is_identity());
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    target: Vec<usize>,
}

/// The largest degree [`Permutation::enumerate`] accepts (9! = 362_880).
pub const MAX_ENUMERATE_DEGREE: usize = 9;

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            target: (0..n).collect(),
        }
    }

    /// Validates that `target` is a bijection on `{0..target.len()-1}`.
    pub fn from_target(target: Vec<usize>) -> Result<Self, Error> {
        let n = target.len();
        let mut hit = vec![false; n];
        for &t in &target {
            if t >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {t} out of range for degree {n}"
                )));
            }
            if hit[t] {
                return Err(Error::InvalidPermutation(format!("image {t} repeated")));
            }
            hit[t] = true;
        }
        Ok(Permutation { target })
    }

    pub fn degree(&self) -> usize {
        self.target.len()
    }

    pub fn image_of(&self, i: usize) -> usize {
        self.target[i]
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `self` first, then `then`: `result.target[i] = then.target[self.target[i]]`.
    pub fn compose(&self, then: &Permutation) -> Result<Permutation, Error> {
        if self.degree() != then.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: then.degree(),
            });
        }
        Ok(Permutation {
            target: self.target.iter().map(|&t| then.target[t]).collect(),
        })
    }

    /// The inverse bijection; its matrix is the transpose of `self`'s.
    pub fn inverse(&self) -> Permutation {
        let mut target = vec![0; self.degree()];
        for (i, &t) in self.target.iter().enumerate() {
            target[t] = i;
        }
        Permutation { target }
    }

    /// Disjoint cycles, each starting at its smallest element, ordered by
    /// that element. Fixed points appear as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.target[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.target[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Smallest `N >= 1` with `p^N = identity`: the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .map(|c| BigUint::from(c.len()))
            .fold(BigUint::from(1u32), |acc, len| acc.lcm(&len))
    }

    /// `self` composed with itself `k` times (`pow(0)` is the identity).
    pub fn pow(&self, k: u64) -> Permutation {
        let mut target = vec![0; self.degree()];
        for cycle in self.cycles() {
            let len = cycle.len() as u64;
            let shift = (k % len) as usize;
            for (pos, &elem) in cycle.iter().enumerate() {
                target[elem] = cycle[(pos + shift) % cycle.len()];
            }
        }
        Permutation { target }
    }

    /// The 0/1 matrix view: `matrix()[i][j] == 1` iff `target[i] == j`.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.degree();
        let mut m = vec![vec![0u8; n]; n];
        for (i, &t) in self.target.iter().enumerate() {
            m[i][t] = 1;
        }
        m
    }

    /// Reads a permutation back from a 0/1 matrix under the row-is-source
    /// convention.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self, Error> {
        let n = rows.len();
        let mut target = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let mut image = None;
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        if image.replace(j).is_some() {
                            return Err(Error::InvalidPermutation(format!(
                                "row {i} has more than one 1"
                            )));
                        }
                    }
                    e => {
                        return Err(Error::InvalidPermutation(format!(
                            "entry ({i},{j}) is {e}, expected 0 or 1"
                        )));
                    }
                }
            }
            target.push(
                image
                    .ok_or_else(|| Error::InvalidPermutation(format!("row {i} has no 1 entry")))?,
            );
        }
        Self::from_target(target)
    }

    /// All permutations of degree `n` in lexicographic order of their target
    /// arrays. Guarded to `n <= 9` to bound the output size.
    pub fn enumerate(n: usize) -> Result<Vec<Permutation>, Error> {
        if n < 1 {
            return Err(Error::BadArgument("degree must be at least 1".into()));
        }
        if n > MAX_ENUMERATE_DEGREE {
            return Err(Error::SizeLimit(format!(
                "enumerate degree {n} exceeds the limit of {MAX_ENUMERATE_DEGREE}"
            )));
        }
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        loop {
            out.push(Permutation {
                target: cur.clone(),
            });
            if !next_lexicographic(&mut cur) {
                return Ok(out);
            }
        }
    }

    /// One evolution step on a label vector: `out[i] = v[target[i]]`, step
    /// counter incremented.
    pub fn apply(&self, v: &ConfigurationVector) -> Result<ConfigurationVector, Error> {
        if v.labels.len() != self.degree() {
            return Err(Error::LengthMismatch {
                len: v.labels.len(),
                degree: self.degree(),
            });
        }
        Ok(ConfigurationVector {
            labels: self.target.iter().map(|&t| v.labels[t].clone()).collect(),
            step: v.step + 1,
        })
    }

    /// Parses the permutation matrix file format: `n` lines of `n`
    /// whitespace-separated entries, each `0` or `1`.
    pub fn parse_matrix(text: &str) -> Result<Self, ParseError> {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        let mut row_lines: Vec<usize> = Vec::new();
        let mut last = 1usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last = line;
            let significant = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = significant.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let mut row = Vec::with_capacity(fields.len());
            for f in fields {
                match f {
                    "0" => row.push(0),
                    "1" => row.push(1),
                    other => {
                        return Err(ParseError::new(
                            line,
                            format!("entry `{other}` is not 0 or 1"),
                        ));
                    }
                }
            }
            rows.push(row);
            row_lines.push(line);
        }
        if rows.is_empty() {
            return Err(ParseError::new(last, "empty matrix"));
        }
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ParseError::new(
                    row_lines[r],
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
        }
        Self::from_matrix(&rows).map_err(|e| ParseError::new(row_lines[n - 1], e.to_string()))
    }

    /// Renders the matrix view, one row per line, entries space-separated.
    pub fn render_matrix(&self) -> String {
        self.matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last.
fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// An ordered list of opaque labels together with the evolution step counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationVector {
    labels: Vec<String>,
    step: u64,
}

impl ConfigurationVector {
    pub fn new(labels: Vec<String>) -> Self {
        ConfigurationVector { labels, step: 0 }
    }

    pub fn with_step(labels: Vec<String>, step: u64) -> Self {
        ConfigurationVector { labels, step }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}
