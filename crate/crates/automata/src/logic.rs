//! Partition logics: the propositional structure pasted from a family of
//! partitions of one state set.
//!
//! Every generating partition contributes a Boolean block algebra (all unions
//! of its blocks); the pasting merges propositions that are equal as sets.
//! The partial order is inclusion *within* the generating algebras,
//! transitively closed: two propositions that never occur in a common block
//! algebra are incomparable even when one contains the other as a set. Meets
//! and joins are computed inside the proposition set; when a pair has no
//! unique least upper or greatest lower bound the structure is reported as
//! not a lattice rather than silently completed.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::experiments::Partition;

/// Largest universe a logic can be built over (propositions are bitmasks).
pub const MAX_UNIVERSE: usize = 64;
/// Largest number of blocks per generating partition (2^k unions each).
pub const MAX_BLOCKS: usize = 16;
/// Largest pasted proposition count; the lattice checks are cubic.
pub const MAX_PROPOSITIONS: usize = 512;

type BoundTables = (Vec<Vec<usize>>, Vec<Vec<usize>>);

/// A triple violating `a meet (b join c) = (a meet b) join (a meet c)`,
/// together with both evaluated sides. All fields are proposition masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistributivityWitness {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub lhs: u64,
    pub rhs: u64,
}

/// The pasted propositional structure of a family of partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionLogic {
    universe: Vec<String>,
    generators: Vec<Partition>,
    props: Vec<u64>,
    le: Vec<Vec<bool>>,
}

fn member_list(mask: u64) -> Vec<usize> {
    (0..64).filter(|&b| mask >> b & 1 == 1).collect()
}

fn is_union_of_blocks(mask: u64, blocks: &[u64]) -> bool {
    let mut covered = 0u64;
    for &b in blocks {
        let hit = mask & b;
        if hit == b {
            covered |= b;
        } else if hit != 0 {
            return false;
        }
    }
    covered == mask
}

impl PartitionLogic {
    /// Pastes the block algebras of `parts` over the given universe.
    pub fn build(universe: Vec<String>, parts: &[Partition]) -> Result<Self, Error> {
        let n = universe.len();
        if n == 0 {
            return Err(Error::BadArgument("empty universe".into()));
        }
        if n > MAX_UNIVERSE {
            return Err(Error::SizeLimit(format!(
                "universe of size {n} exceeds {MAX_UNIVERSE}"
            )));
        }
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

        let mut generators: Vec<Partition> = Vec::new();
        for p in parts {
            if p.universe_size() != n {
                return Err(Error::PartitionMismatch(format!(
                    "partition over {} elements against a universe of {n}",
                    p.universe_size()
                )));
            }
            if p.blocks().len() > MAX_BLOCKS {
                return Err(Error::SizeLimit(format!(
                    "partition with {} blocks exceeds {MAX_BLOCKS}",
                    p.blocks().len()
                )));
            }
            if !generators.contains(p) {
                generators.push(p.clone());
            }
        }

        let mut set: BTreeSet<u64> = BTreeSet::new();
        set.insert(0);
        set.insert(full);
        let block_masks: Vec<Vec<u64>> = generators
            .iter()
            .map(|p| p.block_masks())
            .collect::<Result<_, _>>()?;
        for masks in &block_masks {
            for sub in 0u32..(1u32 << masks.len()) {
                let mut m = 0u64;
                for (b, &mask) in masks.iter().enumerate() {
                    if sub >> b & 1 == 1 {
                        m |= mask;
                    }
                }
                set.insert(m);
            }
        }

        let mut props: Vec<u64> = set.into_iter().collect();
        props.sort_by_key(|&m| (m.count_ones(), member_list(m)));

        let count = props.len();
        if count > MAX_PROPOSITIONS {
            return Err(Error::SizeLimit(format!(
                "pasting produced {count} propositions, more than {MAX_PROPOSITIONS}"
            )));
        }
        let at = |mask: u64| props.iter().position(|&p| p == mask).unwrap();
        let mut le = vec![vec![false; count]; count];
        let (zero, top) = (at(0), at(full));
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
            row[top] = true;
            if i == zero {
                row.iter_mut().for_each(|v| *v = true);
            }
        }
        for masks in &block_masks {
            let members: Vec<usize> = (0..count)
                .filter(|&i| is_union_of_blocks(props[i], masks))
                .collect();
            for &i in &members {
                for &j in &members {
                    if props[i] & !props[j] == 0 {
                        le[i][j] = true;
                    }
                }
            }
        }
        for k in 0..count {
            let via_k = le[k].clone();
            for row in le.iter_mut() {
                if row[k] {
                    for (j, &reach) in via_k.iter().enumerate() {
                        if reach {
                            row[j] = true;
                        }
                    }
                }
            }
        }

        Ok(PartitionLogic {
            universe,
            generators,
            props,
            le,
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn generators(&self) -> &[Partition] {
        &self.generators
    }

    /// Proposition masks in canonical order (cardinality, then members).
    pub fn propositions(&self) -> &[u64] {
        &self.props
    }

    pub fn num_propositions(&self) -> usize {
        self.props.len()
    }

    pub fn full_mask(&self) -> u64 {
        if self.universe.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.universe.len()) - 1
        }
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.props.contains(&mask)
    }

    fn index_of(&self, mask: u64) -> Option<usize> {
        self.props.iter().position(|&p| p == mask)
    }

    /// The pasted order on two proposition masks.
    pub fn leq(&self, a: u64, b: u64) -> Result<bool, Error> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        Ok(self.le[i][j])
    }

    fn require(&self, mask: u64) -> Result<usize, Error> {
        self.index_of(mask).ok_or_else(|| {
            Error::BadArgument(format!(
                "{} is not a proposition of this logic",
                self.render_mask(mask)
            ))
        })
    }

    pub fn render_mask(&self, mask: u64) -> String {
        let members: Vec<&str> = member_list(mask)
            .into_iter()
            .filter(|&b| b < self.universe.len())
            .map(|b| self.universe[b].as_str())
            .collect();
        format!("{{{}}}", members.join(","))
    }

    fn lub_index(&self, i: usize, j: usize) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.props.len())
            .filter(|&k| self.le[i][k] && self.le[j][k])
            .collect();
        ubs.iter()
            .copied()
            .find(|&u| ubs.iter().all(|&v| self.le[u][v]))
    }

    fn glb_index(&self, i: usize, j: usize) -> Option<usize> {
        let lbs: Vec<usize> = (0..self.props.len())
            .filter(|&k| self.le[k][i] && self.le[k][j])
            .collect();
        lbs.iter()
            .copied()
            .find(|&u| lbs.iter().all(|&v| self.le[v][u]))
    }

    fn not_a_lattice(&self, i: usize, j: usize, bound: &str) -> Error {
        Error::NotALattice {
            a: self.render_mask(self.props[i]),
            b: self.render_mask(self.props[j]),
            bound: bound.into(),
        }
    }

    /// Least upper bound of two propositions, if unique.
    pub fn join(&self, a: u64, b: u64) -> Result<u64, Error> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        self.lub_index(i, j)
            .map(|k| self.props[k])
            .ok_or_else(|| self.not_a_lattice(i, j, "join"))
    }

    /// Greatest lower bound of two propositions, if unique.
    pub fn meet(&self, a: u64, b: u64) -> Result<u64, Error> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        self.glb_index(i, j)
            .map(|k| self.props[k])
            .ok_or_else(|| self.not_a_lattice(i, j, "meet"))
    }

    fn bound_tables(&self) -> Result<BoundTables, Error> {
        let n = self.props.len();
        let mut join = vec![vec![0usize; n]; n];
        let mut meet = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i..n {
                let u = self
                    .lub_index(i, j)
                    .ok_or_else(|| self.not_a_lattice(i, j, "join"))?;
                let l = self
                    .glb_index(i, j)
                    .ok_or_else(|| self.not_a_lattice(i, j, "meet"))?;
                join[i][j] = u;
                join[j][i] = u;
                meet[i][j] = l;
                meet[j][i] = l;
            }
        }
        Ok((join, meet))
    }

    /// Ok iff every pair of propositions has a unique join and meet.
    pub fn check_lattice(&self) -> Result<(), Error> {
        self.bound_tables().map(|_| ())
    }

    /// `Ok(None)` when distributive, `Ok(Some(witness))` with the first
    /// violating triple in canonical scan order otherwise. Errors when the
    /// structure is not a lattice.
    pub fn is_distributive(&self) -> Result<Option<DistributivityWitness>, Error> {
        let (join, meet) = self.bound_tables()?;
        let n = self.props.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = meet[a][join[b][c]];
                    let rhs = join[meet[a][b]][meet[a][c]];
                    if lhs != rhs {
                        return Ok(Some(DistributivityWitness {
                            a: self.props[a],
                            b: self.props[b],
                            c: self.props[c],
                            lhs: self.props[lhs],
                            rhs: self.props[rhs],
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// True iff the logic is a distributive lattice in which every
    /// proposition's set complement is again a proposition.
    pub fn is_boolean(&self) -> Result<bool, Error> {
        if self.is_distributive()?.is_some() {
            return Ok(false);
        }
        let full = self.full_mask();
        Ok(self.props.iter().all(|&p| self.contains(full & !p)))
    }

    /// `Some(n)` iff the propositions are exactly the bounds plus `n >= 2`
    /// complementary pairs with no order relation across distinct pairs.
    pub fn is_mo(&self) -> Option<usize> {
        let full = self.full_mask();
        let proper: Vec<usize> = (0..self.props.len())
            .filter(|&i| self.props[i] != 0 && self.props[i] != full)
            .collect();
        let mut partner = vec![usize::MAX; self.props.len()];
        for &i in &proper {
            let j = self.index_of(full & !self.props[i])?;
            partner[i] = j;
        }
        for &i in &proper {
            for &j in &proper {
                if i != j && partner[i] != j && (self.le[i][j] || self.le[j][i]) {
                    return None;
                }
            }
        }
        let pairs = proper.len() / 2;
        if pairs >= 2 {
            Some(pairs)
        } else {
            None
        }
    }

    /// One-line verdict: `boolean`, `MO_n (nondistributive)`,
    /// `distributive (non-boolean)`, `nondistributive`, or `not a lattice`.
    pub fn classification(&self) -> String {
        if self.check_lattice().is_err() {
            return "not a lattice".into();
        }
        if self.is_boolean().unwrap_or(false) {
            return "boolean".into();
        }
        if let Some(n) = self.is_mo() {
            return format!("MO_{n} (nondistributive)");
        }
        match self.is_distributive() {
            Ok(None) => "distributive (non-boolean)".into(),
            _ => "nondistributive".into(),
        }
    }

    /// The full text report: propositions, lattice verdict, distributivity
    /// verdict with witness, MO verdict, classification.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "universe: {}\n",
            self.render_mask(self.full_mask())
        ));
        out.push_str(&format!("partitions: {}\n", self.generators.len()));
        for p in &self.generators {
            out.push_str(&format!("  {}\n", p.render(&self.universe)));
        }
        out.push_str(&format!("propositions: {}\n", self.props.len()));
        for &p in &self.props {
            out.push_str(&format!("  {}\n", self.render_mask(p)));
        }
        match self.check_lattice() {
            Ok(()) => {
                out.push_str("lattice: yes\n");
                match self.is_distributive().expect("lattice already checked") {
                    None => out.push_str("distributive: yes\n"),
                    Some(w) => {
                        out.push_str("distributive: no\n");
                        out.push_str(&format!(
                            "  witness: a={} b={} c={}\n",
                            self.render_mask(w.a),
                            self.render_mask(w.b),
                            self.render_mask(w.c)
                        ));
                        out.push_str(&format!(
                            "  a meet (b join c) = {}\n",
                            self.render_mask(w.lhs)
                        ));
                        out.push_str(&format!(
                            "  (a meet b) join (a meet c) = {}\n",
                            self.render_mask(w.rhs)
                        ));
                    }
                }
                out.push_str(&format!(
                    "boolean: {}\n",
                    if self.is_boolean().unwrap_or(false) {
                        "yes"
                    } else {
                        "no"
                    }
                ));
            }
            Err(e) => {
                out.push_str(&format!("lattice: no ({e})\n"));
                out.push_str("distributive: n/a\nboolean: n/a\n");
            }
        }
        match self.is_mo() {
            Some(n) => out.push_str(&format!("MO: {n}\n")),
            None => out.push_str("MO: none\n"),
        }
        out.push_str(&format!("class: {}\n", self.classification()));
        out
    }
}
