//! One-to-one reversible Mealy automata and what they carry with them:
//! permutation matrices, state-identification experiments, partition logics,
//! and black-box measurement protocols.
//!
//! A Mealy automaton over a shared input/output alphabet is *reversible* when
//! its combined evolution `(s, i) -> (delta(s,i), lambda(s,i))` is a bijection
//! on the configuration space `S x I`. Such a map is exactly a permutation of
//! the state-major configuration list, i.e. an `n x n` permutation matrix
//! ([`correspondence`]); group structure, enumeration, and doubly stochastic
//! envelopes of those matrices live in [`perm`] and [`stochastic`].
//!
//! Feeding input words from every initial state and comparing output
//! sequences partitions the state set ([`experiments`]); pasting the block
//! algebras of a family of such partitions gives a propositional structure
//! that may fail to be Boolean even though every evolution step is bijective
//! ([`logic`]). The [`blackbox`] module couples an observed automaton to an
//! observing one, and implements measurement, measurement undoing, Bennett's
//! copy-and-reverse protocol, and the reversible embedding of irreversible
//! automata.
//!
//! All state is immutable after construction and every operation is a pure
//! function; values can be shared and sent across threads freely. Numeric
//! work on stochastic matrices uses exact rationals throughout; there is no
//! floating point in this crate.
//!
//! ```
//! use revmealy::{automaton_to_matrix, MealyAutomaton};
//!
//! let a = MealyAutomaton::parse(
//!     "states: s1 s2\nsymbols: 1 2\n\
//!      s1 1 -> s2 1\ns1 2 -> s1 2\ns2 1 -> s2 2\ns2 2 -> s1 1\n",
//! )?;
//! assert!(a.is_reversible());
//! let u = automaton_to_matrix(&a).unwrap();
//! assert_eq!(u.order(), 3u32.into());
//! # Ok::<(), revmealy::ParseError>(())
//! ```

pub mod automaton;
pub mod blackbox;
pub mod correspondence;
pub mod error;
pub mod experiments;
pub mod logic;
pub mod perm;
pub mod stochastic;

pub use automaton::{Configuration, MealyAutomaton, StateId, SymbolId};
pub use blackbox::{reversible_embedding, BlackBoxSystem, Embedding};
pub use correspondence::{
    automaton_to_matrix, configuration_labels, linear_index, matrix_to_automaton,
    matrix_to_one_state_automaton,
};
pub use error::{Error, IrreversibleWitness, ParseError};
pub use experiments::{
    output_sequence, partitions_up_to, state_partition, ExperimentRecord, Partition,
};
pub use logic::{DistributivityWitness, PartitionLogic};
pub use perm::{ConfigurationVector, Permutation};
pub use stochastic::{
    birkhoff_decompose, is_doubly_stochastic, parse_rational_matrix, BirkhoffDecomposition,
    BirkhoffTerm, DoublyStochasticMatrix, Rational,
};
