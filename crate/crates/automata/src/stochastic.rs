//! Doubly stochastic matrices over exact rationals and their decomposition
//! into convex combinations of permutation matrices.
//!
//! No floating point anywhere: entries are arbitrary-precision rationals and
//! every decomposition reconstructs its input entrywise exactly.
//!
//! # Matrix file format
//!
//! One row per line, entries whitespace-separated. An entry is `p/q`, an
//! integer, or a finite decimal such as `0.25` (read exactly as a rational
//! with a power-of-ten denominator). `#` starts a comment.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, ParseError};
use crate::perm::Permutation;

pub type Rational = BigRational;

/// Renders a rational as `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_entry(tok: &str) -> Result<Rational, String> {
    let bad = || format!("entry `{tok}` is not a rational (expected p/q, integer, or decimal)");
    if let Some((p, q)) = tok.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("entry `{tok}` has a zero denominator"));
        }
        Ok(Rational::new(p, q))
    } else if let Some((int, frac)) = tok.split_once('.') {
        if int.is_empty() || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_part: BigInt = int.parse().map_err(|_| bad())?;
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let denom = num::pow(BigInt::from(10), frac.len());
        let numer = int_part * &denom
            + if int.starts_with('-') {
                -frac_part
            } else {
                frac_part
            };
        Ok(Rational::new(numer, denom))
    } else {
        let p: BigInt = tok.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(p))
    }
}

/// Parses the rational matrix file format. Rows must all have the same
/// length; squareness is checked by the consumers that require it.
pub fn parse_rational_matrix(text: &str) -> Result<Vec<Vec<Rational>>, ParseError> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
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
            row.push(parse_entry(f).map_err(|m| ParseError::new(line, m))?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(ParseError::new(
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::new(last, "empty matrix"));
    }
    Ok(rows)
}

/// True iff the matrix is nonnegative with every row and column summing to
/// exactly 1. Errors on non-square input.
pub fn is_doubly_stochastic(m: &[Vec<Rational>]) -> Result<bool, Error> {
    let n = m.len();
    if n == 0 {
        return Err(Error::BadArgument("empty matrix".into()));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::BadArgument("matrix is not square".into()));
    }
    Ok(check_doubly_stochastic(m).is_ok())
}

fn check_doubly_stochastic(m: &[Vec<Rational>]) -> Result<(), String> {
    let n = m.len();
    let one = Rational::one();
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.is_negative() {
                return Err(format!("entry ({},{}) is negative", i + 1, j + 1));
            }
        }
        let sum: Rational = row.iter().sum();
        if sum != one {
            return Err(format!("row {} sums to {}", i + 1, format_rational(&sum)));
        }
    }
    for j in 0..n {
        let sum: Rational = m.iter().map(|row| row[j].clone()).sum();
        if sum != one {
            return Err(format!(
                "column {} sums to {}",
                j + 1,
                format_rational(&sum)
            ));
        }
    }
    Ok(())
}

/// A validated square nonnegative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyStochasticMatrix {
    entries: Vec<Vec<Rational>>,
}

impl DoublyStochasticMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::BadArgument("empty matrix".into()));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::BadArgument("matrix is not square".into()));
        }
        check_doubly_stochastic(&entries).map_err(Error::NotDoublyStochastic)?;
        Ok(DoublyStochasticMatrix { entries })
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        let entries = p
            .matrix()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| Rational::from_integer(e.into()))
                    .collect()
            })
            .collect();
        DoublyStochasticMatrix { entries }
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }
}

/// One vertex of the decomposition: a positive weight and a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffTerm {
    pub weight: Rational,
    pub perm: Permutation,
}

/// An exact convex combination of permutation matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffDecomposition {
    pub terms: Vec<BirkhoffTerm>,
}

impl BirkhoffDecomposition {
    /// The weighted sum of the terms' matrices, entrywise exact.
    pub fn reconstruct(&self) -> Vec<Vec<Rational>> {
        let n = self.terms[0].perm.degree();
        let mut out = vec![vec![Rational::zero(); n]; n];
        for term in &self.terms {
            for (i, &t) in term.perm.target().iter().enumerate() {
                out[i][t] += &term.weight;
            }
        }
        out
    }
}

/// Decomposes a doubly stochastic matrix into a convex combination of
/// permutation matrices.
///
/// Deterministic: each round picks the lexicographically smallest perfect
/// matching on the bipartite graph of strictly positive entries and subtracts
/// the minimum matched entry. At most `n^2 - 2n + 2` terms are produced and
/// the weights sum to exactly 1.
pub fn birkhoff_decompose(m: &DoublyStochasticMatrix) -> BirkhoffDecomposition {
    let n = m.degree();
    let mut rem: Vec<Vec<Rational>> = m.entries().to_vec();
    let mut terms = Vec::new();
    loop {
        let adj: Vec<Vec<bool>> = rem
            .iter()
            .map(|row| row.iter().map(|e| e.is_positive()).collect())
            .collect();
        if adj.iter().all(|row| row.iter().all(|&p| !p)) {
            break;
        }
        let target = lex_smallest_perfect_matching(&adj)
            .expect("a positive doubly stochastic remainder admits a perfect matching");
        let weight = (0..n)
            .map(|r| rem[r][target[r]].clone())
            .min()
            .expect("degree is at least 1");
        for (r, &c) in target.iter().enumerate() {
            rem[r][c] -= &weight;
        }
        terms.push(BirkhoffTerm {
            weight,
            perm: Permutation::from_target(target).expect("perfect matching is a bijection"),
        });
    }
    BirkhoffDecomposition { terms }
}

/// The lexicographically smallest (as a row-to-column array) perfect matching
/// of a bipartite adjacency matrix, if one exists. Greedy per row with a
/// feasibility check on the remainder.
fn lex_smallest_perfect_matching(adj: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut choice = vec![0usize; n];
    let mut used = vec![false; n];
    for r in 0..n {
        let mut placed = false;
        for c in 0..n {
            if adj[r][c] && !used[c] {
                used[c] = true;
                if rows_matchable(adj, r + 1, &used) {
                    choice[r] = c;
                    placed = true;
                    break;
                }
                used[c] = false;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(choice)
}

/// Can rows `from..n` all be matched into the columns not yet used?
fn rows_matchable(adj: &[Vec<bool>], from: usize, used: &[bool]) -> bool {
    let n = adj.len();
    // Kuhn's augmenting-path matching over the free columns.
    let mut col_match: Vec<Option<usize>> = vec![None; n];
    fn try_row(
        r: usize,
        adj: &[Vec<bool>],
        used: &[bool],
        visited: &mut [bool],
        col_match: &mut [Option<usize>],
    ) -> bool {
        for c in 0..adj.len() {
            if adj[r][c] && !used[c] && !visited[c] {
                visited[c] = true;
                if col_match[c].is_none()
                    || try_row(col_match[c].unwrap(), adj, used, visited, col_match)
                {
                    col_match[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    for r in from..n {
        let mut visited = vec![false; n];
        if !try_row(r, adj, used, &mut visited, &mut col_match) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn uniform(n: usize) -> DoublyStochasticMatrix {
        DoublyStochasticMatrix::new(vec![vec![rat(1, n as i64); n]; n]).unwrap()
    }

    #[test]
    fn parse_entries() {
        let m = parse_rational_matrix("1/2 0.5\n0.25 3/4\n").unwrap();
        assert_eq!(m[0][0], rat(1, 2));
        assert_eq!(m[0][1], rat(1, 2));
        assert_eq!(m[1][0], rat(1, 4));
        assert_eq!(m[1][1], rat(3, 4));
        let m = parse_rational_matrix("-1.25\n").unwrap();
        assert_eq!(m[0][0], rat(-5, 4));
        assert!(parse_rational_matrix("1/0\n").is_err());
        assert!(parse_rational_matrix("x\n").is_err());
        assert!(parse_rational_matrix(".5\n").is_err());
        assert!(parse_rational_matrix("1 2\n3\n").is_err());
        assert!(parse_rational_matrix("").is_err());
    }

    #[test]
    fn doubly_stochastic_checks() {
        let perm = Permutation::from_target(vec![2, 0, 1]).unwrap();
        let m = DoublyStochasticMatrix::from_permutation(&perm);
        assert!(is_doubly_stochastic(m.entries()).unwrap());
        assert!(
            is_doubly_stochastic(&[vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]])
                .unwrap()
        );
        assert!(
            !is_doubly_stochastic(&[vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)]])
                .unwrap()
        );
        assert!(is_doubly_stochastic(&[vec![rat(1, 2), rat(1, 2)]]).is_err());
        assert!(is_doubly_stochastic(&[vec![rat(1, 1)]]).unwrap());
    }

    #[test]
    fn new_names_failing_row_or_column() {
        let err = DoublyStochasticMatrix::new(vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1)],
        ])
        .unwrap_err();
        assert_eq!(err, Error::NotDoublyStochastic("row 1 sums to 2".into()));
        let err = DoublyStochasticMatrix::new(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(3, 4), rat(1, 4)],
        ])
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotDoublyStochastic("column 1 sums to 5/4".into())
        );
        let err = DoublyStochasticMatrix::new(vec![
            vec![rat(-1, 2), rat(3, 2)],
            vec![rat(3, 2), rat(-1, 2)],
        ])
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotDoublyStochastic("entry (1,1) is negative".into())
        );
    }

    #[test]
    fn permutation_decomposes_to_single_term() {
        let p = Permutation::from_target(vec![1, 2, 0]).unwrap();
        let d = birkhoff_decompose(&DoublyStochasticMatrix::from_permutation(&p));
        assert_eq!(d.terms.len(), 1);
        assert!(d.terms[0].weight.is_one());
        assert_eq!(d.terms[0].perm, p);
    }

    #[test]
    fn half_half_splits_into_identity_and_swap() {
        let d = birkhoff_decompose(&uniform(2));
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.terms[0].weight, rat(1, 2));
        assert!(d.terms[0].perm.is_identity());
        assert_eq!(d.terms[1].perm.target(), &[1, 0]);
    }

    #[test]
    fn uniform_3x3_gives_three_thirds() {
        let m = uniform(3);
        let d = birkhoff_decompose(&m);
        assert_eq!(d.terms.len(), 3);
        for term in &d.terms {
            assert_eq!(term.weight, rat(1, 3));
        }
        assert_eq!(d.reconstruct(), m.entries());
    }

    #[test]
    fn decomposition_reconstructs_and_respects_bounds() {
        // A lopsided but exactly doubly stochastic 3x3 matrix.
        let m = DoublyStochasticMatrix::new(vec![
            vec![rat(1, 6), rat(1, 3), rat(1, 2)],
            vec![rat(1, 2), rat(1, 6), rat(1, 3)],
            vec![rat(1, 3), rat(1, 2), rat(1, 6)],
        ])
        .unwrap();
        let d = birkhoff_decompose(&m);
        assert_eq!(d.reconstruct(), m.entries());
        let total: Rational = d.terms.iter().map(|t| t.weight.clone()).sum();
        assert!(total.is_one());
        assert!(d.terms.iter().all(|t| t.weight.is_positive()));
        let n = m.degree();
        assert!(d.terms.len() <= n * n - 2 * n + 2);
    }

    #[test]
    fn format_rational_is_exact() {
        assert_eq!(format_rational(&rat(1, 2)), "1/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(0, 5)), "0");
        assert_eq!(format_rational(&rat(-3, 9)), "-1/3");
    }
}
