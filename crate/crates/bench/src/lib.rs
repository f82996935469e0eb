//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use wcss_core::{Scenario, WeightScheme};

/// Reference scenario with its first `m` users.
pub fn scenario(m: usize) -> Scenario {
    Scenario::default().with_first_sus(m).expect("reference layout has ten users")
}

/// Weights and amplitudes of the reference scenario at `t = 0`.
pub fn link(m: usize, scheme: WeightScheme) -> (Vec<f64>, Vec<Complex64>) {
    let s = scenario(m);
    let a = s.alphas_at(0.0).expect("reference scenario is valid");
    let w = match scheme {
        WeightScheme::Paper => wcss_core::link::weights(&a).expect("some user hears a beam"),
        WeightScheme::Uniform => wcss_core::link::uniform(m),
    };
    (w, a)
}
