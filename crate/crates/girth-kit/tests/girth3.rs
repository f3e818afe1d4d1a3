mod common;

use girth_kit::generate::erdos_renyi;
use girth_kit::girth3::{
    girth_approx, girth_estimate, similar_set, SearchMode, SimilarSetConfig, SimilarSetOutcome,
};
use girth_kit::graph::{dijkstra, Direction, Graph, INFINITY};
use girth_kit::oracle::exact_girth;
use girth_kit::rng::Seed;

fn seeded_cyclic() -> Graph {
    let g = erdos_renyi(80, 0.05, 1..=20, Seed(31)).unwrap();
    assert!(exact_girth(&g).0 < INFINITY);
    g
}

#[test]
fn similar_sets_contain_near_cycle_vertices() {
    let g = seeded_cyclic();
    let (girth, witness) = exact_girth(&g);
    let cycle = witness.unwrap().vertices;
    let mut sets_runs = 0;
    for seed in 0..50 {
        let params = SimilarSetConfig::seeded(seed).resolve(g.n());
        let SimilarSetOutcome::Sets(sets) = similar_set(&g, girth, &params).unwrap() else {
            continue;
        };
        sets_runs += 1;
        for &v in &cycle {
            let from_v = dijkstra(&g, v, Direction::Out, None).unwrap();
            for &c in &cycle {
                if from_v.dist(c) <= girth / 2 {
                    assert!(
                        sets[v].members.binary_search(&c).is_ok(),
                        "seed {seed}: {c} not in A_{v}"
                    );
                }
            }
        }
    }
    println!("sets outcome in {sets_runs} of 50 runs");
}

#[test]
fn approx_finds_a_short_cycle_at_the_girth() {
    let g = seeded_cyclic();
    let girth = exact_girth(&g).0;
    let mut hits = 0;
    for seed in 0..100 {
        let params = SimilarSetConfig::seeded(seed).resolve(g.n());
        if let Some(c) = girth_approx(&g, girth, &params).unwrap() {
            assert_eq!(c.replay(&g).unwrap(), c.length);
            if c.length <= 3 * girth {
                hits += 1;
            }
        }
    }
    assert!(hits >= 95, "{hits} of 100");
}

#[test]
fn binary_estimates_sandwich_the_girth() {
    let mut within = 0;
    let corpus = common::corpus(100, 120, 5);
    for inst in &corpus {
        let g = &inst.graph;
        let exact = exact_girth(g).0;
        let est = girth_estimate(g, SearchMode::Binary, &SimilarSetConfig::seeded(0)).unwrap();
        assert!(est.estimate >= exact, "{}", inst.name);
        if let Some(w) = &est.witness {
            assert_eq!(w.replay(g).unwrap(), est.estimate);
        }
        if exact == INFINITY || est.estimate <= 3 * exact {
            within += 1;
        }
    }
    assert!(within >= 95, "{within} of 100");
}

#[test]
fn geometric_estimates_sandwich_the_girth() {
    for inst in common::corpus(40, 80, 6) {
        let g = &inst.graph;
        let exact = exact_girth(g).0;
        let mode = SearchMode::Geometric { epsilon: 0.5 };
        let est = girth_estimate(g, mode, &SimilarSetConfig::seeded(1)).unwrap();
        assert!(est.estimate >= exact, "{}", inst.name);
        if exact < INFINITY {
            assert!(est.estimate as f64 <= 3.0 * 1.5 * exact as f64, "{}", inst.name);
        }
    }
}
