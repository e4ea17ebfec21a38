use std::collections::BTreeMap;

use odg_core::build::{self, Admissibility, ConstructionParams, LengthMode};
use odg_core::field::{rat, ratio};
use odg_core::geom::{OddGraph, Point};

const S: Admissibility = Admissibility::Strict;

fn hist(g: &OddGraph) -> BTreeMap<u64, usize> {
    OddGraph::length_histogram(&g.edges())
}

fn map(pairs: &[(u64, usize)]) -> BTreeMap<u64, usize> {
    pairs.iter().copied().collect()
}

#[test]
fn frame_8_3() {
    let f = build::frame(8, 3, S).unwrap();
    assert_eq!(f.len(), 9);
    assert_eq!(hist(&f), map(&[(3, 9), (7, 6), (5, 3), (11, 3)]));
}

#[test]
fn rotors() {
    let r = build::rotor(8, 3, S).unwrap();
    assert_eq!(r.len(), 31);
    assert_eq!(hist(&r), map(&[(7, 60), (3, 42), (5, 42), (11, 12), (13, 12)]));

    let r = build::rotor(24, 35, S).unwrap();
    assert_eq!(r.len(), 31);
    assert_eq!(r.edges().len(), 180);
    assert_eq!(hist(&r)[&43], 12);
}

#[test]
fn cores() {
    let c = build::core(8, 3, S).unwrap();
    assert_eq!(c.len(), 36);
    let h = hist(&c);
    // s, |n|, |n-m|, |n+m|, |n-2m|, |n+2m|, |n-3m|, |n+3m|
    for (len, at_least) in [(7, 48), (3, 36), (5, 24), (11, 24), (13, 12), (19, 12), (21, 3), (27, 3)] {
        assert!(h.get(&len).copied().unwrap_or(0) >= at_least, "length {len}: {h:?}");
    }
    assert!(h.values().sum::<usize>() >= 162);

    let c = build::core(16, 21, S).unwrap();
    assert_eq!(c.len(), 36);
    assert_eq!(c.edges().len(), 162);
}

#[test]
fn g306_restricted() {
    let p = ConstructionParams::new(8, 3, 8, 3, 7);
    let g = build::g306(&p, LengthMode::Restricted).unwrap();
    assert_eq!(g.len(), 306);
    let h = hist(&g);
    assert_eq!(h.values().sum::<usize>(), 2448);
    // the 162 rotation edges all have length r = 7
    assert_eq!(h, map(&[(7, 768 + 162), (3, 684), (5, 492), (11, 222), (13, 120)]));
}

#[test]
fn g279_and_scaled_family() {
    let p = ConstructionParams::new(8, 3, 8, 3, 7);
    assert_eq!(build::g279(&p, LengthMode::Restricted).unwrap().len(), 279);
    let p = ConstructionParams::new(8, -7, 8, 3, 7);
    assert_eq!(build::g306(&p, LengthMode::Restricted).unwrap().len(), 306);
}

#[test]
fn inverse_distance_graph() {
    let g = build::g2035().unwrap();
    assert_eq!(g.len(), 2035);
    assert_eq!(g.pairs_at_distance(&rat(5)).len(), 132);
    assert!(g.pairs_at_distance(&ratio(1, 5)).is_empty());
    let shifted = g.translate(&Point::rational(ratio(1, 5), rat(0))).unwrap();
    let both = g.union(&shifted).unwrap();
    assert_eq!(both.pairs_at_distance(&ratio(1, 5)).len(), 2035);
}

#[test]
fn large_counts() {
    assert_eq!(build::make_h().minkowski_pow(8).unwrap().len(), 217);
    assert_eq!(build::g48289(7).unwrap().len(), 48289);
}

#[test]
fn small_special_graphs() {
    assert_eq!(build::g49a().unwrap().len(), 49);
    assert_eq!(build::g49(8, 3, S).unwrap().len(), 49);
}
