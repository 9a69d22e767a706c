//! Conversions between reversible automata and permutation matrices.
//!
//! Configurations are listed state-major, `(s1,1), (s1,2), (s2,1), ...`,
//! and that listing fixes both directions: a reversible automaton's combined
//! map becomes the permutation sending each configuration's index to its
//! image's index, and any permutation of degree `k * m` can be read back as
//! an automaton with `k` states and `m` symbols (the one-state reading always
//! exists).

use crate::automaton::{Configuration, MealyAutomaton};
use crate::error::Error;
use crate::perm::{ConfigurationVector, Permutation};

/// Position of a configuration in the state-major listing:
/// `state_position * |I| + symbol_position`.
pub fn linear_index(a: &MealyAutomaton, c: Configuration) -> usize {
    a.linear_index(c)
}

/// The permutation representing a reversible automaton's combined map.
pub fn automaton_to_matrix(a: &MealyAutomaton) -> Result<Permutation, Error> {
    a.validate_reversible().map_err(Error::irreversible)?;
    let mut target = vec![0; a.degree()];
    for c in a.configurations() {
        target[a.linear_index(c)] = a.linear_index(a.step(c));
    }
    Ok(Permutation::from_target(target).expect("bijective combined map yields a permutation"))
}

/// The canonical one-state automaton realizing `p`: a single state `s1`,
/// symbols `1..n`, `delta` constant and `lambda` acting as `p`.
pub fn matrix_to_one_state_automaton(p: &Permutation) -> MealyAutomaton {
    matrix_to_automaton(p, 1, p.degree()).expect("1 * n always factors the degree")
}

/// Reads an automaton with `num_states` states and `num_symbols` symbols off
/// a permutation of degree `num_states * num_symbols`. States are named
/// `s1..sk` and symbols `1..m`. Inverts [`automaton_to_matrix`] exactly.
pub fn matrix_to_automaton(
    p: &Permutation,
    num_states: usize,
    num_symbols: usize,
) -> Result<MealyAutomaton, Error> {
    if num_states == 0 || num_symbols == 0 || num_states * num_symbols != p.degree() {
        return Err(Error::FactorizationMismatch {
            states: num_states,
            symbols: num_symbols,
            degree: p.degree(),
        });
    }
    let states = (1..=num_states).map(|k| format!("s{k}")).collect();
    let symbols = (1..=num_symbols).map(|k| k.to_string()).collect();
    MealyAutomaton::from_fn(states, symbols, |s, i| {
        let t = p.image_of(s * num_symbols + i);
        (t / num_symbols, t % num_symbols)
    })
}

/// The step-0 label vector whose entry `i` is the rendered configuration at
/// index `i`, e.g. `(s1,1)`.
pub fn configuration_labels(a: &MealyAutomaton) -> ConfigurationVector {
    ConfigurationVector::new(
        a.configurations()
            .map(|c| a.format_configuration(c))
            .collect(),
    )
}
