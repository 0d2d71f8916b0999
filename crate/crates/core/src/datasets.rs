//! Instances bundled with the crate.

use crate::instance::{parse_tsplib, TspInstance};
use crate::mtsp::Scenario;

pub const OLIVER30_TSP: &str = include_str!("../data/oliver30.tsp");
pub const EIL101_TSP: &str = include_str!("../data/eil101.tsp");
pub const WATERSHED100_JSON: &str = include_str!("../data/watershed100.json");

/// Oliver's 30-city problem (real-metric optimum ~423.74).
pub fn oliver30() -> TspInstance {
    parse_tsplib(OLIVER30_TSP).expect("bundled oliver30 parses")
}

/// TSPLIB eil101 (rounded-metric optimum 629).
pub fn eil101() -> TspInstance {
    parse_tsplib(EIL101_TSP).expect("bundled eil101 parses")
}

/// Synthetic 100-site, 5-km-grid survey scenario around a central depot.
pub fn watershed100() -> Scenario {
    Scenario::from_json(WATERSHED100_JSON).expect("bundled scenario parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sizes() {
        assert_eq!(oliver30().len(), 30);
        assert_eq!(eil101().len(), 101);
        let sc = watershed100().resolve().unwrap();
        assert_eq!(sc.n_sites(), 100);
        assert_eq!(sc.ks, vec![2, 3, 4, 5]);
    }
}
