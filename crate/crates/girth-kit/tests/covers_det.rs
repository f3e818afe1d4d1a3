mod common;

use girth_kit::covers_det::{
    cover_stretch, det_girth, det_girth_factor, det_spanner, roundtrip_cover,
};
use girth_kit::graph::{Graph, INFINITY};
use girth_kit::oracle::{exact_girth, verify_cover, verify_spanner};

#[test]
fn far_apart_two_cycles_stay_separate() {
    let r = 2;
    let mut edges = vec![(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1)];
    edges.push((1, 2, 10 * r * 10 + 1));
    let g = Graph::new(4, edges).unwrap();
    let cover = roundtrip_cover(&g, 2, 2).unwrap();
    assert!(cover.balls.iter().all(|b| !(b.contains(0) && b.contains(2))));
    assert!(verify_cover(&g, &cover, cover_stretch(4, 2) as f64, 2).unwrap().ok);
}

#[test]
fn covers_verify_on_all_instances() {
    for inst in common::corpus(50, 80, 11) {
        let g = &inst.graph;
        for k in [2, 3] {
            for radius in [1, 2, 4, 8] {
                let cover = roundtrip_cover(g, k, radius).unwrap();
                let report =
                    verify_cover(g, &cover, cover_stretch(g.n(), k) as f64, radius).unwrap();
                assert!(report.ok, "{} k={k} R={radius}: {report:?}", inst.name);
            }
        }
    }
}

#[test]
fn girth_sandwich_holds_everywhere() {
    for inst in common::corpus(50, 80, 12) {
        let g = &inst.graph;
        let exact = exact_girth(g).0;
        let est = det_girth(g, 2).unwrap();
        assert!(est.estimate >= exact, "{}", inst.name);
        if exact < INFINITY {
            assert!(est.estimate <= det_girth_factor(g.n(), 2) * exact, "{}", inst.name);
        }
    }
}

#[test]
fn spanner_stretch_holds_everywhere() {
    for inst in common::corpus(30, 60, 13) {
        let g = &inst.graph;
        let edges = det_spanner(g, 2).unwrap();
        let alpha = 2.0 * det_girth_factor(g.n(), 2) as f64;
        let report = verify_spanner(g, &edges, alpha).unwrap();
        assert!(report.ok, "{}: {report:?}", inst.name);
    }
}
