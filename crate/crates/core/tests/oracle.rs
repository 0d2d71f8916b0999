//! Exhaustive-search oracles on micro-instances.

use fishswarm::afsa::{Fish, SwarmConfig};
use fishswarm::de::{de_epoch, DeConfig, DeMode};
use fishswarm::par::{stream_rng, Execution};
use fishswarm::{
    parse_tsplib, run, DistanceMatrix, HybridConfig, Metric, SearchSpace, Tour, TspSpace, Variant,
};
use rand::Rng;

const SQUARE: &str = "NAME: square4
TYPE: TSP
DIMENSION: 4
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 1 1
3 1 0
4 0 1
EOF
";

const PENTAGON: [(f64, f64); 5] = [
    (0.0, 2.0),
    (1.9, 0.6),
    (1.2, -1.6),
    (-1.2, -1.6),
    (-1.9, 0.6),
];

const NINE: [(f64, f64); 9] = [
    (0.0, 0.0),
    (3.0, 7.0),
    (9.0, 1.0),
    (5.0, 5.0),
    (1.0, 9.0),
    (8.0, 8.0),
    (6.0, 2.0),
    (2.0, 4.0),
    (7.0, 5.0),
];

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        out(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Shortest tour length by enumerating every order with city 0 fixed.
fn brute_force(d: &DistanceMatrix) -> f64 {
    let n = d.len();
    if n < 3 {
        return Tour::identity(n).length(d);
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permutations(&mut rest, 0, &mut |p| {
        let mut order = vec![0];
        order.extend_from_slice(p);
        best = best.min(Tour::new(order).unwrap().length(d));
    });
    best
}

fn random_matrix(n: usize, seed: u64) -> DistanceMatrix {
    let mut rng = stream_rng(seed, &[8]);
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    DistanceMatrix::from_coords(&coords, Metric::RealEuclidean)
}

fn config(variant: Variant, seed: u64) -> HybridConfig {
    HybridConfig {
        variant,
        seed,
        ..HybridConfig::default()
    }
}

fn hits(variant: Variant) -> usize {
    (0..20)
        .filter(|&s| {
            let d = random_matrix(8, s);
            let opt = brute_force(&d);
            let space = TspSpace::new(d);
            let r = run(&space, &config(variant, s)).unwrap();
            r.best_fitness <= opt + 1e-9
        })
        .count()
}

#[test]
fn brute_force_agrees_with_hand_values() {
    let square = parse_tsplib(SQUARE).unwrap().distance_matrix();
    assert!((brute_force(&square) - 4.0).abs() < 1e-12);
    let pentagon = DistanceMatrix::from_coords(&PENTAGON, Metric::RealEuclidean);
    let hull = Tour::identity(5).length(&pentagon);
    assert!((brute_force(&pentagon) - hull).abs() < 1e-12);
}

#[test]
fn hybrid_solves_micro_instances_exactly() {
    for coords in [&PENTAGON[..], &NINE[..]] {
        let d = DistanceMatrix::from_coords(coords, Metric::RealEuclidean);
        let opt = brute_force(&d);
        let space = TspSpace::new(d);
        let r = run(&space, &config(Variant::DeCafsa, 1)).unwrap();
        assert!(
            (r.best_fitness - opt).abs() < 1e-9,
            "{} vs {opt}",
            r.best_fitness
        );
        assert!((r.best.length(space.matrix()) - r.best_fitness).abs() < 1e-9);
    }
}

#[test]
fn de_cafsa_finds_eight_city_optima() {
    let h = hits(Variant::DeCafsa);
    assert!(h >= 19, "{h} / 20");
}

#[test]
fn afsa_finds_half_of_eight_city_optima() {
    let h = hits(Variant::Afsa);
    assert!(h >= 10, "{h} / 20");
}

#[test]
fn de_epochs_alone_reach_eight_city_optima() {
    let mut found = 0;
    for s in 0..20 {
        let d = random_matrix(8, 100 + s);
        let opt = brute_force(&d);
        let space = TspSpace::new(d);
        let mut rng = stream_rng(s, &[]);
        let mut swarm: Vec<Fish<Tour>> = (0..SwarmConfig::default().population)
            .map(|_| {
                let t = space.random_state(&mut rng);
                Fish::new(&space, t)
            })
            .collect();
        for _ in 0..100 {
            swarm = de_epoch(
                &space,
                &swarm,
                &DeConfig::default(),
                DeMode::MultiPopulation,
                false,
                &mut rng,
                Execution::Sequential,
            );
        }
        let best = swarm
            .iter()
            .map(|f| f.fitness)
            .fold(f64::INFINITY, f64::min);
        if best <= opt + 1e-9 {
            found += 1;
        }
    }
    assert!(found >= 15, "{found} / 20");
}
