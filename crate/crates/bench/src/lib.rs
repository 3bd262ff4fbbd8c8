//! Shared fixtures for the kernel benchmarks.

use tnn_stable::matrix::RationalMatrix;
use tnn_stable::poly::MultiaffinePoly;
use tnn_stable::tnn::{random_rational_matrix, random_tnn_word, word_to_matrix};

pub fn dense_rational(n: usize, seed: u64) -> RationalMatrix {
    random_rational_matrix(n, n, 8, 5, seed).unwrap()
}

pub fn tnn_matrix(n: usize, length: usize, seed: u64) -> RationalMatrix {
    word_to_matrix(&random_tnn_word(n, length, seed).unwrap())
}

pub fn balanced_gr24_poly() -> MultiaffinePoly {
    tnn_stable::formats::polynomial_from_json(
        r#"{"n": 4, "terms": [
            {"vars": [1,2], "re": "1/1"},
            {"vars": [1,3], "re": "1/1"},
            {"vars": [2,4], "re": "1/1"},
            {"vars": [3,4], "re": "1/1"}
        ]}"#,
    )
    .unwrap()
}
