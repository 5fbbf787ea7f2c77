//! The bundled 8-user social graph loads, mirrors, and round-trips.

use sgum::social::{SocialGraph, TieMode};

const FIXTURE: &str = include_str!("data/social_8_users.txt");

#[test]
fn fixture_loads_symmetric_and_connected() {
    let g = SocialGraph::from_edge_list(FIXTURE, 8, TieMode::Standard, true).unwrap();
    assert_eq!(g.n_users(), 8);
    assert_eq!(g.n_ties(), 20);
    assert!(g.is_symmetric());

    // Reachability from user 0 covers everyone.
    let mut seen = vec![false; 8];
    let mut stack = vec![0usize];
    while let Some(u) = stack.pop() {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        stack.extend(g.social_group(u).unwrap());
    }
    assert!(seen.iter().all(|&v| v));
}

#[test]
fn fixture_round_trips_through_canonical_form() {
    let g = SocialGraph::from_edge_list(FIXTURE, 8, TieMode::Standard, true).unwrap();
    let canonical = g.to_edge_list();
    let back = SocialGraph::from_edge_list(&canonical, 8, TieMode::Standard, false).unwrap();
    assert_eq!(g, back);
}

#[test]
fn fixture_groups_match_expected_neighbors() {
    let g = SocialGraph::from_edge_list(FIXTURE, 8, TieMode::Standard, true).unwrap();
    assert_eq!(g.social_group(3).unwrap(), vec![1, 2, 4]);
    assert_eq!(g.social_group(7).unwrap(), vec![6]);
    assert_eq!(g.tie(2, 6), 0.45);
    assert_eq!(g.tie(6, 2), 0.45);
}
