#![no_main]

//! Fuzz the rational matrix parser and, for small doubly stochastic inputs,
//! the exact Birkhoff decomposition.

use libfuzzer_sys::fuzz_target;
use revmealy::{birkhoff_decompose, parse_rational_matrix, DoublyStochasticMatrix};

fuzz_target!(|data: &str| {
    if let Ok(entries) = parse_rational_matrix(data) {
        if entries.len() <= 5 {
            if let Ok(m) = DoublyStochasticMatrix::new(entries) {
                let d = birkhoff_decompose(&m);
                assert_eq!(d.reconstruct(), m.entries());
            }
        }
    }
});
