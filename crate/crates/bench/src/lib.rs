//! Shared inputs for the criterion benchmarks.

use indcat_core::{CaterpillarSpec, Polynomial};

/// Caterpillars small enough for brute force (at most 22 vertices).
pub fn brute_specs() -> Vec<CaterpillarSpec> {
    [vec![3, 4], vec![2, 3, 4, 4], vec![4, 4, 4, 4, 1]]
        .into_iter()
        .map(|m| CaterpillarSpec::new(m).expect("positive m"))
        .collect()
}

/// Caterpillars for the scalable routes, up to a few hundred vertices.
pub fn scalable_specs() -> Vec<CaterpillarSpec> {
    [vec![4, 9, 9, 10], (1..=20).collect::<Vec<usize>>(), vec![6; 40]]
        .into_iter()
        .map(|m| CaterpillarSpec::new(m).expect("positive m"))
        .collect()
}

/// A dense polynomial of the given degree with growing coefficients.
pub fn dense_poly(degree: usize) -> Polynomial {
    Polynomial::from_coeffs((0..=degree as u64).map(|i| 1 + i * i))
}
