#![no_main]

//! Fuzz the `(state,symbol)` parser against an automaton whose tokens
//! themselves contain commas and parentheses.

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use revmealy::MealyAutomaton;

fn automaton() -> &'static MealyAutomaton {
    static CELL: OnceLock<MealyAutomaton> = OnceLock::new();
    CELL.get_or_init(|| {
        MealyAutomaton::parse(
            "states: s1 a,b (c\nsymbols: 1 x,y\n\
             s1 1 -> a,b x,y\ns1 x,y -> s1 1\n\
             a,b 1 -> (c x,y\na,b x,y -> a,b 1\n\
             (c 1 -> s1 x,y\n(c x,y -> (c 1\n",
        )
        .unwrap()
    })
}

fuzz_target!(|data: &str| {
    let a = automaton();
    if let Ok(c) = a.parse_configuration(data) {
        // A parsed configuration renders to a string that parses back to it.
        let rendered = a.format_configuration(c);
        assert_eq!(a.parse_configuration(&rendered).unwrap(), c);
    }
});
