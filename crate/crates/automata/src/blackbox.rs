//! The observer/observed split: a measured automaton inside a black box, a
//! measurement-apparatus automaton outside, and the protocols for measuring,
//! undoing measurements, and Bennett-style copy-and-reverse.
//!
//! One measurement step is two phases: the inner automaton steps on the
//! experimenter's input and emits an interface symbol, then the outer
//! automaton steps on that interface symbol. With `copy` set the interface
//! symbol is also appended to a classical record; without it nothing but the
//! two configurations changes.
//!
//! Undoing applies the inverse automata in reverse order (outer first, then
//! inner). It refuses while record copies from the steps being undone still
//! exist; erasure is a separate, explicit action. The displaced interface
//! symbols are journaled internally so that undoing restores both
//! configurations exactly; the journal plays the role of the experimenter's
//! own reversible memory and is not observable through the record.

use crate::automaton::{Configuration, MealyAutomaton, SymbolId};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
struct JournalEntry {
    input: SymbolId,
    interface: SymbolId,
    displaced_inner: SymbolId,
    displaced_outer: SymbolId,
    copied: bool,
}

/// An immutable snapshot of the coupled inner/outer system. Every operation
/// returns a new value, so histories can be branched freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackBoxSystem {
    inner: MealyAutomaton,
    outer: MealyAutomaton,
    inner_rev: MealyAutomaton,
    outer_rev: MealyAutomaton,
    inner_config: Configuration,
    outer_config: Configuration,
    journal: Vec<JournalEntry>,
}

impl BlackBoxSystem {
    /// Couples two reversible automata over the same ordered symbol alphabet.
    pub fn new(
        inner: MealyAutomaton,
        outer: MealyAutomaton,
        inner_config: Configuration,
        outer_config: Configuration,
    ) -> Result<Self, Error> {
        if inner.symbol_tokens() != outer.symbol_tokens() {
            return Err(Error::AlphabetMismatch);
        }
        let inner_rev = inner.reversed()?;
        let outer_rev = outer.reversed()?;
        if inner_config.state.0 >= inner.num_states()
            || inner_config.symbol.0 >= inner.num_symbols()
            || outer_config.state.0 >= outer.num_states()
            || outer_config.symbol.0 >= outer.num_symbols()
        {
            return Err(Error::BadArgument(
                "initial configuration out of range".into(),
            ));
        }
        Ok(BlackBoxSystem {
            inner,
            outer,
            inner_rev,
            outer_rev,
            inner_config,
            outer_config,
            journal: Vec::new(),
        })
    }

    pub fn inner(&self) -> &MealyAutomaton {
        &self.inner
    }

    pub fn outer(&self) -> &MealyAutomaton {
        &self.outer
    }

    pub fn inner_config(&self) -> Configuration {
        self.inner_config
    }

    pub fn outer_config(&self) -> Configuration {
        self.outer_config
    }

    /// Number of measurement steps performed and not yet undone.
    pub fn steps_performed(&self) -> usize {
        self.journal.len()
    }

    /// The classical record: copied interface symbols, oldest first.
    pub fn record(&self) -> Vec<&str> {
        self.journal
            .iter()
            .filter(|e| e.copied)
            .map(|e| self.inner.symbol_token(e.interface))
            .collect()
    }

    fn render_record(&self) -> String {
        format!("[{}]", self.record().join(","))
    }

    fn trace_line(&self, step: usize, phase: &str, input: SymbolId, output: SymbolId) -> String {
        format!(
            "step={step} phase={phase} in={} out={} inner={} outer={} record={}",
            self.inner.symbol_token(input),
            self.inner.symbol_token(output),
            self.inner.format_configuration(self.inner_config),
            self.outer.format_configuration(self.outer_config),
            self.render_record()
        )
    }

    /// One measurement: the inner automaton steps on `input` emitting an
    /// interface symbol, the outer automaton steps on that symbol. With
    /// `copy`, the interface symbol is appended to the record.
    pub fn measure(&self, input: &str, copy: bool) -> Result<Self, Error> {
        Ok(self.measure_traced(input, copy)?.0)
    }

    /// As [`measure`](Self::measure), also returning one trace line per phase.
    pub fn measure_traced(&self, input: &str, copy: bool) -> Result<(Self, Vec<String>), Error> {
        let input = self
            .inner
            .symbol_id(input)
            .ok_or_else(|| Error::UnknownSymbol(input.to_string()))?;
        let mut next = self.clone();
        let step = self.journal.len() + 1;

        let inner_after = self.inner.step(Configuration {
            state: self.inner_config.state,
            symbol: input,
        });
        let interface = inner_after.symbol;
        next.inner_config = inner_after;
        let inner_line = next.trace_line(step, "inner", input, interface);

        let outer_after = self.outer.step(Configuration {
            state: self.outer_config.state,
            symbol: interface,
        });
        next.outer_config = outer_after;
        next.journal.push(JournalEntry {
            input,
            interface,
            displaced_inner: self.inner_config.symbol,
            displaced_outer: self.outer_config.symbol,
            copied: copy,
        });
        let outer_line = next.trace_line(step, "outer", interface, outer_after.symbol);
        Ok((next, vec![inner_line, outer_line]))
    }

    /// Undoes the last `steps` measurements by applying the inverse automata
    /// in reverse order. Refuses while any of those steps still holds a
    /// record copy.
    pub fn undo(&self, steps: usize) -> Result<Self, Error> {
        Ok(self.undo_traced(steps)?.0)
    }

    /// As [`undo`](Self::undo), also returning one trace line per undone step.
    pub fn undo_traced(&self, steps: usize) -> Result<(Self, Vec<String>), Error> {
        if steps > self.journal.len() {
            return Err(Error::UndoTooDeep {
                steps,
                performed: self.journal.len(),
            });
        }
        let first_undone = self.journal.len() - steps;
        if let Some(offset) = self.journal[first_undone..].iter().position(|e| e.copied) {
            return Err(Error::UndoWithCopies {
                step: first_undone + offset + 1,
            });
        }
        let mut next = self.clone();
        let mut lines = Vec::with_capacity(steps);
        for _ in 0..steps {
            let step = next.journal.len();
            let entry = next.journal.pop().expect("depth checked above");
            let outer_before = next.outer_rev.step(next.outer_config);
            debug_assert_eq!(outer_before.symbol, entry.interface);
            next.outer_config = Configuration {
                state: outer_before.state,
                symbol: entry.displaced_outer,
            };
            let inner_before = next.inner_rev.step(next.inner_config);
            debug_assert_eq!(inner_before.symbol, entry.input);
            next.inner_config = Configuration {
                state: inner_before.state,
                symbol: entry.displaced_inner,
            };
            lines.push(next.trace_line(step, "undo", entry.interface, entry.input));
        }
        Ok((next, lines))
    }

    /// Deletes the last `count` record entries (the copies themselves; the
    /// measurements stay in place).
    pub fn erase_last(&self, count: usize) -> Result<Self, Error> {
        let available = self.journal.iter().filter(|e| e.copied).count();
        if count > available {
            return Err(Error::EraseTooMany {
                requested: count,
                available,
            });
        }
        let mut next = self.clone();
        let mut remaining = count;
        for entry in next.journal.iter_mut().rev() {
            if remaining == 0 {
                break;
            }
            if entry.copied {
                entry.copied = false;
                remaining -= 1;
            }
        }
        Ok(next)
    }

    /// Bennett's copy-and-reverse: measure with copy, extract the copied
    /// outcome, erase it from the record, and run the step backwards. The
    /// returned system equals `self` exactly; the outcome survives only as
    /// the returned value.
    pub fn bennett_measure(&self, input: &str) -> Result<(String, Self), Error> {
        let measured = self.measure(input, true)?;
        let outcome = measured
            .record()
            .last()
            .expect("measure with copy appends an entry")
            .to_string();
        let restored = measured.erase_last(1)?.undo(1)?;
        Ok((outcome, restored))
    }
}

/// A reversible automaton simulating an arbitrary total Mealy automaton,
/// together with the projection back onto the original.
///
/// Symbols are extended to `original~tag` pairs with enough tags to split
/// every many-to-one collision of the combined map; the tag-0 lift of an
/// original input drives the embedded automaton along the original
/// trajectory, and dropping tags projects embedded runs back onto original
/// runs. When the automaton is already reversible no tags are needed and the
/// embedding is the automaton itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    automaton: MealyAutomaton,
    symbol_map: Vec<usize>,
    tag_count: usize,
}

impl Embedding {
    pub fn automaton(&self) -> &MealyAutomaton {
        &self.automaton
    }

    pub fn tag_count(&self) -> usize {
        self.tag_count
    }

    /// Drops the tag: the original symbol an embedded symbol stands for.
    pub fn project_symbol(&self, s: SymbolId) -> SymbolId {
        SymbolId(self.symbol_map[s.0])
    }

    /// The tag-0 embedded symbol for an original symbol.
    pub fn lift_symbol(&self, s: SymbolId) -> SymbolId {
        SymbolId(s.0 * self.tag_count)
    }

    /// States project to themselves, symbols drop their tag.
    pub fn project_configuration(&self, c: Configuration) -> Configuration {
        Configuration {
            state: c.state,
            symbol: self.project_symbol(c.symbol),
        }
    }

    /// `(embedded symbol token, original symbol token)` pairs in canonical order.
    pub fn projection_pairs<'a>(
        &'a self,
        original: &'a MealyAutomaton,
    ) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.automaton
            .symbol_tokens()
            .iter()
            .zip(&self.symbol_map)
            .map(|(tok, &orig)| (tok.as_str(), original.symbol_token(SymbolId(orig))))
    }
}

/// Embeds any total Mealy automaton into a reversible one.
///
/// The tag count is the maximum preimage multiplicity of the combined map.
/// Each original transition `(s, i) -> (delta, lambda)` lifts to
/// `(s, i~0) -> (delta, lambda~k)` where `k` ranks `(s, i)` among the
/// preimages of its image in canonical order; the leftover configurations are
/// matched up in lexicographic order to complete a bijection.
pub fn reversible_embedding(a: &MealyAutomaton) -> Embedding {
    let (ns, nm) = (a.num_states(), a.num_symbols());
    let mut multiplicity = vec![0usize; ns * nm];
    for c in a.configurations() {
        multiplicity[a.linear_index(a.step(c))] += 1;
    }
    let tags = multiplicity.iter().copied().max().unwrap_or(1).max(1);
    if tags == 1 {
        return Embedding {
            automaton: a.clone(),
            symbol_map: (0..nm).collect(),
            tag_count: 1,
        };
    }

    let symbols: Vec<String> = a
        .symbol_tokens()
        .iter()
        .flat_map(|tok| (0..tags).map(move |k| format!("{tok}~{k}")))
        .collect();
    let em = nm * tags;
    let degree = ns * em;

    let mut target = vec![usize::MAX; degree];
    let mut taken = vec![false; degree];
    let mut next_rank = vec![0usize; ns * nm];
    for c in a.configurations() {
        let img = a.step(c);
        let rank = next_rank[a.linear_index(img)];
        next_rank[a.linear_index(img)] += 1;
        let src = c.state.0 * em + c.symbol.0 * tags;
        let dst = img.state.0 * em + img.symbol.0 * tags + rank;
        target[src] = dst;
        taken[dst] = true;
    }
    let mut free = (0..degree).filter(|&d| !taken[d]);
    for slot in target.iter_mut() {
        if *slot == usize::MAX {
            *slot = free.next().expect("source and target counts match");
        }
    }

    let automaton = MealyAutomaton::from_fn(a.state_tokens().to_vec(), symbols, |s, i| {
        let dst = target[s * em + i];
        (dst / em, dst % em)
    })
    .expect("embedding construction yields valid tables");
    Embedding {
        automaton,
        symbol_map: (0..em).map(|i| i / tags).collect(),
        tag_count: tags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::StateId;
    use crate::experiments::output_sequence;

    const TWO_STATE: &str = "\
states: s1 s2
symbols: 1 2
s1 1 -> s2 1
s1 2 -> s1 2
s2 1 -> s2 2
s2 2 -> s1 1
";

    const THREE_STATE: &str = "\
states: s1 s2 s3
symbols: 1 2
s1 1 -> s1 2
s1 2 -> s3 2
s2 1 -> s2 1
s2 2 -> s1 1
s3 1 -> s3 1
s3 2 -> s2 2
";

    fn system() -> BlackBoxSystem {
        let inner = MealyAutomaton::parse(THREE_STATE).unwrap();
        let outer = MealyAutomaton::parse(TWO_STATE).unwrap();
        let ic = inner.configuration("s1", "1").unwrap();
        let oc = outer.configuration("s1", "1").unwrap();
        BlackBoxSystem::new(inner, outer, ic, oc).unwrap()
    }

    #[test]
    fn measure_crosses_the_interface_symbol() {
        let sys = system();
        let next = sys.measure("1", false).unwrap();
        // lambda(s1, 1) = 2 crosses to the outer automaton, which maps
        // (s1, 2) -> (s1, 2).
        assert_eq!(
            next.inner().format_configuration(next.inner_config()),
            "(s1,2)"
        );
        assert_eq!(
            next.outer().format_configuration(next.outer_config()),
            "(s1,2)"
        );
        assert!(next.record().is_empty());
    }

    #[test]
    fn copy_flag_only_affects_the_record() {
        let sys = system();
        let mut with_copy = sys.clone();
        let mut without = sys;
        for input in ["1", "2", "2", "1"] {
            with_copy = with_copy.measure(input, true).unwrap();
            without = without.measure(input, false).unwrap();
        }
        assert_eq!(with_copy.inner_config(), without.inner_config());
        assert_eq!(with_copy.outer_config(), without.outer_config());
        assert_eq!(with_copy.record().len(), 4);
        assert!(without.record().is_empty());
    }

    #[test]
    fn measure_then_undo_restores_everything() {
        let sys = system();
        let one = sys.measure("1", false).unwrap();
        assert_eq!(one.undo(1).unwrap(), sys);
        assert_eq!(one.undo(0).unwrap(), one);

        let mut walked = sys.clone();
        for input in ["2", "2", "1", "2"] {
            walked = walked.measure(input, false).unwrap();
        }
        assert_eq!(walked.undo(4).unwrap(), sys);
        assert!(matches!(
            walked.undo(5),
            Err(Error::UndoTooDeep {
                steps: 5,
                performed: 4
            })
        ));
    }

    #[test]
    fn undo_refuses_while_copies_exist() {
        let sys = system().measure("1", true).unwrap();
        assert_eq!(sys.undo(1), Err(Error::UndoWithCopies { step: 1 }));
        let erased = sys.erase_last(1).unwrap();
        assert_eq!(erased.undo(1).unwrap(), system());
        assert!(matches!(
            sys.erase_last(2),
            Err(Error::EraseTooMany {
                requested: 2,
                available: 1
            })
        ));
    }

    #[test]
    fn bennett_measure_extracts_and_restores() {
        let sys = system();
        let (outcome, restored) = sys.bennett_measure("1").unwrap();
        assert_eq!(outcome, "2");
        assert_eq!(restored, sys);
        // Determinism: the restored system repeats the same outcome.
        let (again, _) = restored.bennett_measure("1").unwrap();
        assert_eq!(again, "2");
    }

    #[test]
    fn bennett_on_identity_inner_echoes_the_input() {
        let id =
            MealyAutomaton::parse("states: q\nsymbols: 1 2\nq 1 -> q 1\nq 2 -> q 2\n").unwrap();
        let outer = MealyAutomaton::parse(TWO_STATE).unwrap();
        let sys = BlackBoxSystem::new(
            id.clone(),
            outer,
            id.configuration("q", "1").unwrap(),
            Configuration {
                state: StateId(0),
                symbol: SymbolId(0),
            },
        )
        .unwrap();
        for input in ["1", "2"] {
            let (outcome, _) = sys.bennett_measure(input).unwrap();
            assert_eq!(outcome, input);
        }
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let inner = MealyAutomaton::parse(THREE_STATE).unwrap();
        let outer =
            MealyAutomaton::parse("states: q\nsymbols: a b\nq a -> q a\nq b -> q b\n").unwrap();
        let ic = inner.configuration("s1", "1").unwrap();
        let oc = outer.configuration("q", "a").unwrap();
        assert_eq!(
            BlackBoxSystem::new(inner, outer, ic, oc).unwrap_err(),
            Error::AlphabetMismatch
        );
    }

    #[test]
    fn trace_lines_follow_the_log_format() {
        let sys = system();
        let (next, lines) = sys.measure_traced("1", true).unwrap();
        assert_eq!(
            lines[0],
            "step=1 phase=inner in=1 out=2 inner=(s1,2) outer=(s1,1) record=[]"
        );
        assert_eq!(
            lines[1],
            "step=1 phase=outer in=2 out=2 inner=(s1,2) outer=(s1,2) record=[2]"
        );
        let (_, lines) = next.erase_last(1).unwrap().undo_traced(1).unwrap();
        assert_eq!(
            lines[0],
            "step=1 phase=undo in=2 out=1 inner=(s1,1) outer=(s1,1) record=[]"
        );
    }

    #[test]
    fn embedding_of_reversible_automaton_is_itself() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        let e = reversible_embedding(&a);
        assert_eq!(e.tag_count(), 1);
        assert_eq!(e.automaton(), &a);
    }

    #[test]
    fn two_to_one_automaton_embeds_reversibly() {
        let a = MealyAutomaton::parse("states: s1\nsymbols: 1 2\ns1 1 -> s1 1\ns1 2 -> s1 1\n")
            .unwrap();
        let e = reversible_embedding(&a);
        assert_eq!(e.tag_count(), 2);
        let emb = e.automaton();
        assert!(emb.is_reversible());
        assert_eq!(emb.num_symbols(), 4);
        // Both lifted inputs project back onto the original outputs.
        for sym in 0..2 {
            let lifted = e.lift_symbol(SymbolId(sym));
            let out = emb.step(Configuration {
                state: StateId(0),
                symbol: lifted,
            });
            let original = a.step(Configuration {
                state: StateId(0),
                symbol: SymbolId(sym),
            });
            assert_eq!(e.project_configuration(out), original);
        }
    }

    #[test]
    fn embedded_runs_project_onto_original_runs() {
        // An irreversible three-state automaton.
        let a = MealyAutomaton::parse(
            "states: s1 s2 s3\nsymbols: 1 2\n\
             s1 1 -> s2 1\ns1 2 -> s2 1\ns2 1 -> s3 1\ns2 2 -> s1 2\ns3 1 -> s1 1\ns3 2 -> s1 1\n",
        )
        .unwrap();
        assert!(!a.is_reversible());
        let e = reversible_embedding(&a);
        let emb = e.automaton();
        assert!(emb.is_reversible());
        let word = a.parse_word("1,2,2,1,1").unwrap();
        let lifted: Vec<SymbolId> = word.iter().map(|&s| e.lift_symbol(s)).collect();
        for s in 0..a.num_states() {
            let original = output_sequence(&a, StateId(s), &word);
            let embedded = output_sequence(emb, StateId(s), &lifted);
            let projected: Vec<SymbolId> = embedded.iter().map(|&o| e.project_symbol(o)).collect();
            assert_eq!(projected, original);
        }
    }
}
