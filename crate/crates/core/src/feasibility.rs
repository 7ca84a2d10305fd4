//! Feasibility of key access structures and the canonical one-time-pad scheme.

use crate::error::{Error, Result};
use crate::gf::Mat;
use crate::model::{Graph, KeyBlock, KeyStructure, LinearScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// 1-based pair `(i, j)` with `i ∉ A_j` and no pattern separating them.
    Infeasible {
        i: usize,
        j: usize,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

fn check_n(g: &Graph, ks: &KeyStructure) -> Result<()> {
    if g.n() != ks.n() {
        return Err(Error::Dimension(format!("graph has {} users, structure has {}", g.n(), ks.n())));
    }
    Ok(())
}

/// A structure is feasible iff every pair `i ∉ A_j` is separated by some
/// pattern with `b_i = 1, b_j = 0`.
pub fn is_feasible(g: &Graph, ks: &KeyStructure) -> Result<Feasibility> {
    check_n(g, ks)?;
    for (i, j) in g.pair_masks() {
        if !ks.patterns().iter().any(|&b| b >> i & 1 == 1 && b >> j & 1 == 0) {
            return Ok(Feasibility::Infeasible { i: i + 1, j: j + 1 });
        }
    }
    Ok(Feasibility::Feasible)
}

/// `m_i = x_i + Σ_{b ∈ KS_i} k_b^(i)` over GF(2), with `N` coordinates per key.
pub fn canonical_scheme(g: &Graph, ks: &KeyStructure) -> Result<LinearScheme> {
    if let Feasibility::Infeasible { i, j } = is_feasible(g, ks)? {
        return Err(Error::Infeasible(i, j));
    }
    let n = g.n();
    let gs = (0..n)
        .map(|i| {
            let mut m = Mat::zeros(2, n, 1);
            m.set(i, 0, 1);
            m
        })
        .collect();
    let keys = ks
        .patterns()
        .iter()
        .map(|&b| {
            let mut h = Mat::zeros(2, n, n);
            for i in (0..n).filter(|i| b >> i & 1 == 1) {
                h.set(i, i, 1);
            }
            KeyBlock { pattern: b, h }
        })
        .collect();
    LinearScheme::new(2, 1, n, gs, keys)
}
