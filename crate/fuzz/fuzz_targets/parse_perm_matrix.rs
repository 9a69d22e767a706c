#![no_main]

//! Fuzz the 0/1 permutation matrix parser; render and reparse must agree.

use libfuzzer_sys::fuzz_target;
use revmealy::Permutation;

fuzz_target!(|data: &str| {
    if let Ok(p) = Permutation::parse_matrix(data) {
        let again = Permutation::parse_matrix(&p.render_matrix()).expect("rendered matrix parses");
        assert_eq!(again, p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }
});
