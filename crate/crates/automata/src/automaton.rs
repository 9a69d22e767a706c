//! Mealy automata with a shared input/output alphabet and a one-to-one
//! (reversible) combined evolution.
//!
//! An automaton is given by a state list `S`, a symbol list `I` (inputs and
//! outputs draw from the same list), a transition table `delta: S x I -> S`
//! and an output table `lambda: S x I -> I`. The *combined map* sends a
//! [`Configuration`] `(s, i)` to `(delta(s, i), lambda(s, i))`; the automaton
//! is reversible exactly when that map is a bijection on `S x I`.
//!
//! # Spec file format
//!
//! UTF-8 text. `#` starts a comment, blank lines are ignored. The first
//! significant line is `states: <tok> <tok> ...`, the second
//! `symbols: <tok> <tok> ...`, then one line per table cell:
//!
//! ```text
//! states: s1 s2
//! symbols: 1 2
//! s1 1 -> s2 1
//! s1 2 -> s1 2
//! s2 1 -> s2 2
//! s2 2 -> s1 1
//! ```
//!
//! Every `(state, symbol)` cell must appear exactly once. Tokens are
//! arbitrary non-whitespace strings; `->` is reserved. Canonical order is
//! order of first appearance.

use std::fmt;

use crate::error::{Error, IrreversibleWitness, ParseError};

/// Index into an automaton's canonical state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// Index into an automaton's canonical symbol list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

/// A `(state, symbol)` pair; the unit the combined evolution acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub symbol: SymbolId,
}

/// A total Mealy automaton over a shared input/output alphabet.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyAutomaton {
    states: Vec<String>,
    symbols: Vec<String>,
    // Both tables are flat, indexed by `state * num_symbols + symbol`.
    delta: Vec<StateId>,
    lambda: Vec<SymbolId>,
}

fn check_tokens(kind: &str, tokens: &[String]) -> Result<(), Error> {
    if tokens.is_empty() {
        return Err(Error::MalformedAutomaton(format!("empty {kind} list")));
    }
    for (i, tok) in tokens.iter().enumerate() {
        // Whitespace would break tokenization, `#` the comment stripping.
        if tok.is_empty() || tok.chars().any(|c| c.is_whitespace() || c == '#') {
            return Err(Error::MalformedAutomaton(format!(
                "{kind} token `{tok}` must be nonempty, without whitespace or `#`"
            )));
        }
        if tok == "->" {
            return Err(Error::MalformedAutomaton(format!(
                "`->` is reserved and cannot be a {kind} token"
            )));
        }
        if tokens[..i].contains(tok) {
            return Err(Error::MalformedAutomaton(format!(
                "duplicate {kind} token `{tok}`"
            )));
        }
    }
    Ok(())
}

impl MealyAutomaton {
    /// Builds an automaton from tables given as a function of
    /// `(state index, symbol index) -> (next state index, output symbol index)`.
    pub fn from_fn(
        states: Vec<String>,
        symbols: Vec<String>,
        mut f: impl FnMut(usize, usize) -> (usize, usize),
    ) -> Result<Self, Error> {
        check_tokens("state", &states)?;
        check_tokens("symbol", &symbols)?;
        let (ns, nm) = (states.len(), symbols.len());
        let mut delta = Vec::with_capacity(ns * nm);
        let mut lambda = Vec::with_capacity(ns * nm);
        for s in 0..ns {
            for i in 0..nm {
                let (d, l) = f(s, i);
                if d >= ns {
                    return Err(Error::MalformedAutomaton(format!(
                        "delta({s},{i}) = {d} is out of range"
                    )));
                }
                if l >= nm {
                    return Err(Error::MalformedAutomaton(format!(
                        "lambda({s},{i}) = {l} is out of range"
                    )));
                }
                delta.push(StateId(d));
                lambda.push(SymbolId(l));
            }
        }
        Ok(MealyAutomaton {
            states,
            symbols,
            delta,
            lambda,
        })
    }

    /// Parses the spec file format described in the module docs.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut states: Option<Vec<String>> = None;
        let mut symbols: Option<Vec<String>> = None;
        let mut cells: Vec<Option<(StateId, SymbolId)>> = Vec::new();
        let mut last = 1usize;

        let header =
            |fields: &[&str], line: usize, name: &str| -> Result<Vec<String>, ParseError> {
                if fields[0] != format!("{name}:") {
                    return Err(ParseError::new(line, format!("expected `{name}:` header")));
                }
                let toks: Vec<String> = fields[1..].iter().map(|t| t.to_string()).collect();
                check_tokens(name.trim_end_matches('s'), &toks)
                    .map_err(|e| ParseError::new(line, e.to_string()))?;
                Ok(toks)
            };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last = line;
            let significant = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = significant.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if states.is_none() {
                states = Some(header(&fields, line, "states")?);
                continue;
            }
            if symbols.is_none() {
                let toks = header(&fields, line, "symbols")?;
                cells = vec![None; states.as_ref().unwrap().len() * toks.len()];
                symbols = Some(toks);
                continue;
            }
            let (sts, syms) = (states.as_ref().unwrap(), symbols.as_ref().unwrap());
            if fields.len() != 5 || fields[2] != "->" {
                return Err(ParseError::new(
                    line,
                    "expected `<state> <symbol> -> <state> <symbol>`",
                ));
            }
            let pos = |list: &[String], tok: &str, kind: &str| -> Result<usize, ParseError> {
                list.iter()
                    .position(|t| t == tok)
                    .ok_or_else(|| ParseError::new(line, format!("unknown {kind} token `{tok}`")))
            };
            let src_s = pos(sts, fields[0], "state")?;
            let src_i = pos(syms, fields[1], "symbol")?;
            let dst_s = pos(sts, fields[3], "state")?;
            let dst_i = pos(syms, fields[4], "symbol")?;
            let cell = src_s * syms.len() + src_i;
            if cells[cell].is_some() {
                return Err(ParseError::new(
                    line,
                    format!("duplicate cell ({},{})", fields[0], fields[1]),
                ));
            }
            cells[cell] = Some((StateId(dst_s), SymbolId(dst_i)));
        }

        let states = states.ok_or_else(|| ParseError::new(last, "missing `states:` header"))?;
        let symbols = symbols.ok_or_else(|| ParseError::new(last, "missing `symbols:` header"))?;
        let mut delta = Vec::with_capacity(cells.len());
        let mut lambda = Vec::with_capacity(cells.len());
        for (cell, entry) in cells.iter().enumerate() {
            match entry {
                Some((d, l)) => {
                    delta.push(*d);
                    lambda.push(*l);
                }
                None => {
                    return Err(ParseError::new(
                        last,
                        format!(
                            "missing table entry for ({},{})",
                            states[cell / symbols.len()],
                            symbols[cell % symbols.len()]
                        ),
                    ));
                }
            }
        }
        Ok(MealyAutomaton {
            states,
            symbols,
            delta,
            lambda,
        })
    }

    /// Renders the automaton in the spec file format, cells in canonical order.
    pub fn to_spec_string(&self) -> String {
        let mut out = String::new();
        out.push_str("states:");
        for s in &self.states {
            out.push(' ');
            out.push_str(s);
        }
        out.push_str("\nsymbols:");
        for s in &self.symbols {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        for c in self.configurations() {
            let img = self.step(c);
            out.push_str(&format!(
                "{} {} -> {} {}\n",
                self.state_token(c.state),
                self.symbol_token(c.symbol),
                self.state_token(img.state),
                self.symbol_token(img.symbol)
            ));
        }
        out
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    /// `|S| * |I|`, the size of the configuration space.
    pub fn degree(&self) -> usize {
        self.delta.len()
    }

    pub fn state_tokens(&self) -> &[String] {
        &self.states
    }

    pub fn symbol_tokens(&self) -> &[String] {
        &self.symbols
    }

    pub fn state_token(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn symbol_token(&self, i: SymbolId) -> &str {
        &self.symbols[i.0]
    }

    pub fn state_id(&self, token: &str) -> Option<StateId> {
        self.states.iter().position(|t| t == token).map(StateId)
    }

    pub fn symbol_id(&self, token: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|t| t == token).map(SymbolId)
    }

    /// Resolves a token pair into a configuration of this automaton.
    pub fn configuration(&self, state: &str, symbol: &str) -> Result<Configuration, Error> {
        let state = self
            .state_id(state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))?;
        let symbol = self
            .symbol_id(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        Ok(Configuration { state, symbol })
    }

    /// Parses `(state,symbol)` against this automaton's tokens.
    ///
    /// Tokens may themselves contain commas, so every comma split is tried;
    /// the input is rejected when no split or more than one split resolves.
    pub fn parse_configuration(&self, input: &str) -> Result<Configuration, Error> {
        let bad = |reason: &str| Error::BadConfiguration {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = input.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected `(state,symbol)`"))?;
        let mut found = Vec::new();
        for (pos, _) in inner.match_indices(',') {
            let (state, symbol) = (&inner[..pos], &inner[pos + 1..]);
            if let (Some(s), Some(i)) = (self.state_id(state), self.symbol_id(symbol)) {
                found.push(Configuration {
                    state: s,
                    symbol: i,
                });
            }
        }
        match found.len() {
            0 => Err(bad(
                "no (state,symbol) split matches the automaton's tokens",
            )),
            1 => Ok(found[0]),
            _ => Err(bad("ambiguous: several (state,symbol) splits match")),
        }
    }

    /// Parses a comma-separated input word, e.g. `2,2,2,2`.
    pub fn parse_word(&self, input: &str) -> Result<Vec<SymbolId>, Error> {
        if input.is_empty() {
            return Err(Error::EmptyWord);
        }
        input
            .split(',')
            .map(|tok| {
                self.symbol_id(tok)
                    .ok_or_else(|| Error::UnknownSymbol(tok.to_string()))
            })
            .collect()
    }

    pub fn format_configuration(&self, c: Configuration) -> String {
        format!(
            "({},{})",
            self.state_token(c.state),
            self.symbol_token(c.symbol)
        )
    }

    /// All configurations in canonical (state-major) order.
    pub fn configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        let nm = self.num_symbols();
        (0..self.degree()).map(move |k| Configuration {
            state: StateId(k / nm),
            symbol: SymbolId(k % nm),
        })
    }

    /// Position of a configuration in the canonical state-major listing.
    pub fn linear_index(&self, c: Configuration) -> usize {
        c.state.0 * self.num_symbols() + c.symbol.0
    }

    /// Inverse of [`linear_index`](Self::linear_index).
    pub fn configuration_at(&self, index: usize) -> Configuration {
        debug_assert!(index < self.degree());
        Configuration {
            state: StateId(index / self.num_symbols()),
            symbol: SymbolId(index % self.num_symbols()),
        }
    }

    /// One application of the combined map: `(s, i) -> (delta(s,i), lambda(s,i))`.
    pub fn step(&self, c: Configuration) -> Configuration {
        let cell = self.linear_index(c);
        Configuration {
            state: self.delta[cell],
            symbol: self.lambda[cell],
        }
    }

    /// Fed-back evolution: the trajectory `[c0, step(c0), ..., step^n(c0)]`.
    pub fn run(&self, c0: Configuration, n: usize) -> Vec<Configuration> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(c0);
        let mut c = c0;
        for _ in 0..n {
            c = self.step(c);
            out.push(c);
        }
        out
    }

    /// Checks that the combined map is injective (hence bijective on the
    /// finite configuration space). On failure returns the first pair of
    /// distinct configurations, in canonical order, sharing an image.
    #[allow(clippy::result_large_err)]
    pub fn validate_reversible(&self) -> Result<(), IrreversibleWitness> {
        let mut seen: Vec<Option<Configuration>> = vec![None; self.degree()];
        for c in self.configurations() {
            let img = self.step(c);
            let slot = self.linear_index(img);
            if let Some(prev) = seen[slot] {
                return Err(IrreversibleWitness {
                    first: self.token_pair(prev),
                    second: self.token_pair(c),
                    image: self.token_pair(img),
                });
            }
            seen[slot] = Some(c);
        }
        Ok(())
    }

    pub fn is_reversible(&self) -> bool {
        self.validate_reversible().is_ok()
    }

    /// The automaton whose combined map is the inverse bijection, so that
    /// `reversed.step(self.step(c)) == c` for every configuration.
    pub fn reversed(&self) -> Result<Self, Error> {
        self.validate_reversible().map_err(Error::irreversible)?;
        let mut delta = vec![StateId(0); self.degree()];
        let mut lambda = vec![SymbolId(0); self.degree()];
        for c in self.configurations() {
            let img = self.step(c);
            let cell = self.linear_index(img);
            delta[cell] = c.state;
            lambda[cell] = c.symbol;
        }
        Ok(MealyAutomaton {
            states: self.states.clone(),
            symbols: self.symbols.clone(),
            delta,
            lambda,
        })
    }

    fn token_pair(&self, c: Configuration) -> (String, String) {
        (
            self.state_token(c.state).to_string(),
            self.symbol_token(c.symbol).to_string(),
        )
    }
}

impl fmt::Display for MealyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    const CONSTANT: &str = "\
states: s1 s2
symbols: 1 2
s1 1 -> s1 1
s1 2 -> s1 1
s2 1 -> s1 1
s2 2 -> s1 1
";

    fn cfg(a: &MealyAutomaton, s: &str, i: &str) -> Configuration {
        a.configuration(s, i).unwrap()
    }

    #[test]
    fn parses_and_validates_two_state() {
        let a = MealyAutomaton::parse(TWO_STATE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.num_symbols(), 2);
        assert!(a.is_reversible());
    }

    #[test]
    fn three_state_is_reversible() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        assert!(a.is_reversible());
    }

    #[test]
    fn constant_map_is_irreversible_with_witness() {
        let a = MealyAutomaton::parse(CONSTANT).unwrap();
        let w = a.validate_reversible().unwrap_err();
        assert_eq!(w.first, ("s1".into(), "1".into()));
        assert_eq!(w.second, ("s1".into(), "2".into()));
        assert_eq!(w.image, ("s1".into(), "1".into()));
    }

    #[test]
    fn step_matches_tables() {
        let a = MealyAutomaton::parse(TWO_STATE).unwrap();
        assert_eq!(a.step(cfg(&a, "s1", "1")), cfg(&a, "s2", "1"));
        let b = MealyAutomaton::parse(THREE_STATE).unwrap();
        assert_eq!(b.step(cfg(&b, "s1", "1")), cfg(&b, "s1", "2"));
    }

    #[test]
    fn one_state_identity_steps_to_itself() {
        let a = MealyAutomaton::parse("states: s1\nsymbols: 1 2\ns1 1 -> s1 1\ns1 2 -> s1 2\n")
            .unwrap();
        for c in a.configurations().collect::<Vec<_>>() {
            assert_eq!(a.step(c), c);
        }
    }

    #[test]
    fn run_returns_to_start_after_cycle() {
        let a = MealyAutomaton::parse(TWO_STATE).unwrap();
        let c0 = cfg(&a, "s1", "1");
        let traj = a.run(c0, 3);
        let tokens: Vec<String> = traj.iter().map(|&c| a.format_configuration(c)).collect();
        assert_eq!(tokens, ["(s1,1)", "(s2,1)", "(s2,2)", "(s1,1)"]);

        let b = MealyAutomaton::parse(THREE_STATE).unwrap();
        let c0 = cfg(&b, "s1", "1");
        let traj = b.run(c0, 4);
        assert_eq!(traj[4], c0);
        assert_eq!(a.run(c0, 0), vec![c0]);
    }

    #[test]
    fn reverse_inverts_every_configuration() {
        let a = MealyAutomaton::parse(TWO_STATE).unwrap();
        let rev = a.reversed().unwrap();
        assert_eq!(rev.step(cfg(&a, "s2", "1")), cfg(&a, "s1", "1"));
        for c in a.configurations() {
            assert_eq!(rev.step(a.step(c)), c);
        }
    }

    #[test]
    fn double_reverse_is_identity() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        assert_eq!(a.reversed().unwrap().reversed().unwrap(), a);
        let id = MealyAutomaton::parse("states: s1\nsymbols: 1\ns1 1 -> s1 1\n").unwrap();
        assert_eq!(id.reversed().unwrap(), id);
    }

    #[test]
    fn reverse_of_irreversible_carries_witness() {
        let a = MealyAutomaton::parse(CONSTANT).unwrap();
        match a.reversed() {
            Err(Error::Irreversible(w)) => assert_eq!(w.second, ("s1".into(), "2".into())),
            other => panic!("expected irreversibility error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_missing_cell() {
        let err = MealyAutomaton::parse("states: s1\nsymbols: 1 2\ns1 1 -> s1 1\n").unwrap_err();
        assert!(err.message.contains("(s1,2)"), "{err}");
    }

    #[test]
    fn parse_rejects_duplicate_cell() {
        let text = "states: s1\nsymbols: 1\ns1 1 -> s1 1\ns1 1 -> s1 1\n";
        let err = MealyAutomaton::parse(text).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("duplicate cell"));
    }

    #[test]
    fn parse_rejects_unknown_tokens_and_bad_shape() {
        let err = MealyAutomaton::parse("states: s1\nsymbols: 1\ns1 2 -> s1 1\n").unwrap_err();
        assert!(err.message.contains("unknown symbol token `2`"));
        let err = MealyAutomaton::parse("states: s1\nsymbols: 1\ns1 1 s1 1\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = MealyAutomaton::parse("symbols: 1\n").unwrap_err();
        assert!(err.message.contains("states"));
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let text = "# header\n\nstates: s1 # trailing\nsymbols: 1\n\ns1 1 -> s1 1 # cell\n";
        let a = MealyAutomaton::parse(text).unwrap();
        assert_eq!(a.num_states(), 1);
    }

    #[test]
    fn spec_round_trip() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        assert_eq!(MealyAutomaton::parse(&a.to_spec_string()).unwrap(), a);
    }

    #[test]
    fn parse_configuration_handles_odd_tokens() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        let c = a.parse_configuration("(s2,1)").unwrap();
        assert_eq!(c, cfg(&a, "s2", "1"));
        assert!(a.parse_configuration("(s9,1)").is_err());
        assert!(a.parse_configuration("s2,1").is_err());

        // A comma inside a state token: both splits must be tried.
        let b = MealyAutomaton::parse("states: a,b\nsymbols: c\na,b c -> a,b c\n").unwrap();
        let c = b.parse_configuration("(a,b,c)").unwrap();
        assert_eq!(b.format_configuration(c), "(a,b,c)");
    }

    #[test]
    fn parse_word_validates_symbols() {
        let a = MealyAutomaton::parse(THREE_STATE).unwrap();
        assert_eq!(a.parse_word("2,2,2").unwrap().len(), 3);
        assert_eq!(a.parse_word(""), Err(Error::EmptyWord));
        assert_eq!(a.parse_word("2,x"), Err(Error::UnknownSymbol("x".into())));
    }
}
