//! Input-word experiments and the state partitions they induce.
//!
//! An experiment fixes an input word, runs it from every initial state, and
//! groups states whose output sequences agree. The word is the experimenter's
//! choice at every step (it overrides the fed-back configuration evolution),
//! so these operations are defined for any total Mealy automaton, reversible
//! or not.

use crate::automaton::{MealyAutomaton, StateId, SymbolId};
use crate::error::Error;

/// Cap on `|I|^max_len` in [`partitions_up_to`].
pub const MAX_WORDS: u64 = 1_000_000;

/// Disjoint nonempty blocks of state indices covering `{0..universe-1}`.
///
/// Canonical form: members sorted within each block, blocks sorted by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    universe: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(universe: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        let mut seen = vec![false; universe];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::PartitionMismatch("empty block".into()));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e >= universe {
                    return Err(Error::PartitionMismatch(format!(
                        "element {e} outside universe of size {universe}"
                    )));
                }
                if seen[e] {
                    return Err(Error::PartitionMismatch(format!(
                        "element {e} appears in two blocks"
                    )));
                }
                seen[e] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::PartitionMismatch(format!(
                "element {missing} is in no block"
            )));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { universe, blocks })
    }

    pub fn singletons(universe: usize) -> Self {
        Partition {
            universe,
            blocks: (0..universe).map(|e| vec![e]).collect(),
        }
    }

    pub fn single_block(universe: usize) -> Self {
        Partition {
            universe,
            blocks: vec![(0..universe).collect()],
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// True iff every block of `self` is contained in a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.universe != coarser.universe {
            return false;
        }
        let mut owner = vec![0usize; self.universe];
        for (b, block) in coarser.blocks.iter().enumerate() {
            for &e in block {
                owner[e] = b;
            }
        }
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&e| owner[e] == owner[block[0]]))
    }

    /// Renders `{{s1},{s2,s3}}` using the given member tokens.
    pub fn render(&self, tokens: &[String]) -> String {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|block| {
                let members: Vec<&str> = block.iter().map(|&e| tokens[e].as_str()).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        format!("{{{}}}", blocks.join(","))
    }

    /// Blocks as bitmasks; requires `universe <= 64`.
    pub fn block_masks(&self) -> Result<Vec<u64>, Error> {
        if self.universe > 64 {
            return Err(Error::SizeLimit(format!(
                "universe of size {} exceeds the 64-element mask limit",
                self.universe
            )));
        }
        Ok(self
            .blocks
            .iter()
            .map(|block| block.iter().fold(0u64, |m, &e| m | (1 << e)))
            .collect())
    }
}

/// The outputs an automaton emits when the word is fed from state `s0`:
/// `out[k] = lambda(state_k, word[k])`, `state_{k+1} = delta(state_k, word[k])`.
pub fn output_sequence(a: &MealyAutomaton, s0: StateId, word: &[SymbolId]) -> Vec<SymbolId> {
    let mut state = s0;
    let mut out = Vec::with_capacity(word.len());
    for &sym in word {
        let c = a.step(crate::automaton::Configuration { state, symbol: sym });
        out.push(c.symbol);
        state = c.state;
    }
    out
}

/// One experiment: a word together with the output sequence it draws from
/// every initial state. `outputs[s]` has length `|word|` for every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    word: Vec<SymbolId>,
    outputs: Vec<Vec<SymbolId>>,
}

impl ExperimentRecord {
    /// Runs the word from every state of the automaton.
    pub fn run(a: &MealyAutomaton, word: &[SymbolId]) -> Self {
        ExperimentRecord {
            word: word.to_vec(),
            outputs: (0..a.num_states())
                .map(|s| output_sequence(a, StateId(s), word))
                .collect(),
        }
    }

    pub fn word(&self) -> &[SymbolId] {
        &self.word
    }

    /// Per-state output sequences, indexed by state.
    pub fn outputs(&self) -> &[Vec<SymbolId>] {
        &self.outputs
    }

    /// The partition grouping states with identical output sequences.
    pub fn partition(&self) -> Result<Partition, Error> {
        if self.word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut reps: Vec<(&[SymbolId], Vec<usize>)> = Vec::new();
        for (s, seq) in self.outputs.iter().enumerate() {
            match reps.iter_mut().find(|(r, _)| *r == seq.as_slice()) {
                Some((_, block)) => block.push(s),
                None => reps.push((seq, vec![s])),
            }
        }
        Partition::new(
            self.outputs.len(),
            reps.into_iter().map(|(_, b)| b).collect(),
        )
    }
}

/// The experimental equivalence classes for one word: states share a block
/// iff their output sequences for the word are identical.
pub fn state_partition(a: &MealyAutomaton, word: &[SymbolId]) -> Result<Partition, Error> {
    ExperimentRecord::run(a, word).partition()
}

/// The partition of every nonempty word of length at most `max_len`, in
/// (length, lexicographic) order. Guarded by [`MAX_WORDS`].
pub fn partitions_up_to(
    a: &MealyAutomaton,
    max_len: usize,
) -> Result<Vec<(Vec<SymbolId>, Partition)>, Error> {
    if max_len < 1 {
        return Err(Error::BadArgument("max_len must be at least 1".into()));
    }
    let m = a.num_symbols() as u64;
    let budget = u32::try_from(max_len)
        .ok()
        .and_then(|len| m.checked_pow(len))
        .filter(|&count| count <= MAX_WORDS);
    if budget.is_none() {
        return Err(Error::SizeLimit(format!(
            "|I|^max_len = {}^{max_len} exceeds {MAX_WORDS}",
            a.num_symbols()
        )));
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut word = vec![SymbolId(0); len];
        loop {
            out.push((word.clone(), state_partition(a, &word)?));
            if !advance_word(&mut word, a.num_symbols()) {
                break;
            }
        }
    }
    Ok(out)
}

/// Odometer step over symbol indices; false once the word wraps around.
fn advance_word(word: &mut [SymbolId], num_symbols: usize) -> bool {
    for pos in (0..word.len()).rev() {
        if word[pos].0 + 1 < num_symbols {
            word[pos].0 += 1;
            for w in word.iter_mut().skip(pos + 1) {
                w.0 = 0;
            }
            return true;
        }
        word[pos].0 = 0;
    }
    false
}
