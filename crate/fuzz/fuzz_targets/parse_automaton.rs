#![no_main]

//! Fuzz the automaton spec-file parser; on success the rendered form must
//! parse back to the same automaton.

use libfuzzer_sys::fuzz_target;
use revmealy::MealyAutomaton;

fuzz_target!(|data: &str| {
    if let Ok(a) = MealyAutomaton::parse(data) {
        let rendered = a.to_spec_string();
        let again = MealyAutomaton::parse(&rendered).expect("rendered spec must parse");
        assert_eq!(again, a);
        let _ = a.validate_reversible();
    }
});
