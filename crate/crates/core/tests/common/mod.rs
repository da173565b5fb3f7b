#![allow(dead_code)]

use invq::{AggRTree, Point, QuerySet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn pt(id: u64, c: &[f64]) -> Point {
    Point::new(id, c.to_vec()).unwrap()
}

pub fn pts(cs: &[&[f64]]) -> Vec<Point> {
    cs.iter().enumerate().map(|(i, c)| pt(i as u64, c)).collect()
}

pub fn tree(points: &[Point]) -> AggRTree {
    AggRTree::bulk_load(points.to_vec(), 1024).unwrap()
}

pub fn small_tree(points: &[Point], fanout: usize) -> AggRTree {
    AggRTree::bulk_load_with_fanout(points.to_vec(), fanout).unwrap()
}

pub fn qset(points: &[Point], ids: &[u64]) -> QuerySet {
    QuerySet::new(ids.iter().map(|&i| points.iter().find(|p| p.id == i).unwrap().clone()).collect()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points on a coarse grid so that distance ties and shared locations are common.
pub fn grid(rng: &mut impl Rng, n: usize, d: usize, g: u32, base: u64) -> Vec<Point> {
    (0..n)
        .map(|i| pt(base + i as u64, &(0..d).map(|_| rng.random_range(0..g) as f64 / g as f64).collect::<Vec<_>>()))
        .collect()
}

pub fn uniform(rng: &mut impl Rng, n: usize, d: usize) -> Vec<Point> {
    (0..n).map(|i| pt(i as u64, &(0..d).map(|_| rng.random::<f64>()).collect::<Vec<_>>())).collect()
}

pub fn sample(rng: &mut impl Rng, points: &[Point], m: usize) -> Vec<Point> {
    rand::seq::index::sample(rng, points.len(), m).iter().map(|i| points[i].clone()).collect()
}
