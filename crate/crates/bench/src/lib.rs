//! Fixtures shared by the solver benchmarks.

use genus1_core::{CurveParams, SymMatrix};

/// Curves with stability constants 2, 3, 4, 6 and 8.
pub fn curves() -> Vec<(&'static str, CurveParams)> {
    [("N2", 0.0, 1.0), ("N3", 1.0, 2.0), ("N4", 1.9, 0.95), ("N6", 1.9, 0.905), ("N8", 1.9, 0.9005)]
        .into_iter()
        .map(|(name, a, b)| (name, CurveParams::new(a, b).expect("fixture in P")))
        .collect()
}

/// Deterministic dense symmetric test matrix.
pub fn test_matrix(n: usize) -> SymMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ((i * 7 + j * 7 + 3 * i * j) % 11) as f64 - 5.0 + if i == j { n as f64 } else { 0.0 })
                .collect()
        })
        .collect();
    SymMatrix::from_rows(&rows)
}
