#![no_main]

//! Fuzz the comma-separated word parser against a fixed automaton.

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use revmealy::{state_partition, MealyAutomaton};

fn automaton() -> &'static MealyAutomaton {
    static CELL: OnceLock<MealyAutomaton> = OnceLock::new();
    CELL.get_or_init(|| {
        MealyAutomaton::parse(
            "states: s1 s2 s3\nsymbols: 1 2\n\
             s1 1 -> s1 2\ns1 2 -> s3 2\ns2 1 -> s2 1\ns2 2 -> s1 1\ns3 1 -> s3 1\ns3 2 -> s2 2\n",
        )
        .unwrap()
    })
}

fuzz_target!(|data: &str| {
    let a = automaton();
    if let Ok(word) = a.parse_word(data) {
        assert!(!word.is_empty());
        let _ = state_partition(a, &word);
    }
});
