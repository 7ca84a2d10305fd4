#![allow(dead_code)]

use pic_core::gf::Mat;
use pic_core::model::{full_mask, Graph, KeyBlock, KeyStructure, LinearScheme};
use rand::Rng;

/// Each ordered pair `(i, j)` is an edge with probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let side = (0..n).map(|i| (0..n).filter(|&j| j != i && rng.gen_bool(p)).fold(0u64, |m, j| m | 1 << j)).collect();
    Graph::from_masks(n, side).unwrap()
}

/// Patterns other than the empty and the full one, each kept with
/// probability `p`.
pub fn random_structure<R: Rng>(rng: &mut R, n: usize, p: f64) -> KeyStructure {
    let pats: Vec<u64> = (1..full_mask(n)).filter(|_| rng.gen_bool(p)).collect();
    KeyStructure::new(n, &pats).unwrap()
}

pub fn random_mat<R: Rng>(rng: &mut R, q: u32, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(q, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_range(0..q));
        }
    }
    m
}

/// A GF(2) scheme with `n = 1`: random message columns and up to three key
/// blocks of width one or two on random patterns.
pub fn random_scheme<R: Rng>(rng: &mut R, users: usize) -> LinearScheme {
    let r = rng.gen_range(1..=3);
    let g = (0..users).map(|_| random_mat(rng, 2, r, 1)).collect();
    let mut pats: Vec<u64> = (1..full_mask(users)).collect();
    let mut keys = Vec::new();
    for _ in 0..rng.gen_range(0..=3.min(pats.len())) {
        let pattern = pats.swap_remove(rng.gen_range(0..pats.len()));
        let w = rng.gen_range(1..=2);
        keys.push(KeyBlock { pattern, h: random_mat(rng, 2, r, w) });
    }
    keys.sort_by_key(|k| k.pattern);
    LinearScheme::new(2, 1, r, g, keys).unwrap()
}
