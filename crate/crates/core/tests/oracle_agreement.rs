use upb_core::extendibility::decide_upb;
use upb_core::linalg::DEFAULT_RANK_TOL;
use upb_core::oracle::{grid_search_extendible, random_small_set};
use upb_core::rng::stream_rng;

#[test]
fn exact_decision_matches_grid_search_on_small_sets() {
    let mut disagreements = Vec::new();
    for k in 0..100 {
        let mut rng = stream_rng(77, k);
        let s = random_small_set(&mut rng);
        let exact = !decide_upb(&s, DEFAULT_RANK_TOL).unwrap().is_upb;
        let grid = grid_search_extendible(&s, 200, 0.05);
        if exact != grid {
            disagreements.push((k, s.len(), exact, grid));
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

#[test]
fn witnesses_are_orthogonal_to_every_member() {
    for k in 0..100 {
        let mut rng = stream_rng(78, k);
        let s = random_small_set(&mut rng);
        let v = decide_upb(&s, DEFAULT_RANK_TOL).unwrap();
        if let Some(w) = &v.witness {
            for u in s.members() {
                assert!(w.inner(u).norm() <= 1e-9);
            }
        }
    }
}
