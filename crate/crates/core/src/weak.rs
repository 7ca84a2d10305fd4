//! Structural infeasibility tests for weak privacy without keys.

use crate::error::{Error, Result};
use crate::model::{mask_to_users, Graph};

pub const NECESSARY_MAX_USERS: usize = 20;

/// Lexicographically smallest 1-based `(i, j)`, `i ≠ j`, with `i ∉ s_j` and
/// `s_i ⊆ A_j`.
pub fn subset_condition_violation(g: &Graph) -> Option<(usize, usize)> {
    let n = g.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && !g.knows(j, i) && g.side(i) & !g.a(j) == 0 {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

/// One certificate: subset `S` (1-based, sorted) is blocked by `(j, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCertificate {
    pub subset: Vec<usize>,
    pub j: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Necessary {
    /// Every `S ⊆ A_i` containing `i` has a blocking pair; certificates are
    /// listed in increasing mask order of `S`.
    Infeasible {
        user: usize,
        certificates: Vec<SubsetCertificate>,
    },
    Inconclusive,
}

/// `(j, k)` with `j ≠ i`, `k ∈ S`, `k ∉ A_j`, `S \ {k} ⊆ A_j`, smallest first.
fn block(g: &Graph, i: usize, s: u64) -> Option<(usize, usize)> {
    for j in (0..g.n()).filter(|&j| j != i) {
        for k in (0..g.n()).filter(|&k| s >> k & 1 == 1) {
            if g.a(j) >> k & 1 == 0 && (s & !(1 << k)) & !g.a(j) == 0 {
                return Some((j, k));
            }
        }
    }
    None
}

/// Flags users for which every subset `S ⊆ A_i` with `i ∈ S` has some
/// `j ≠ i`, `k ∈ S` with `k ∉ A_j` and `S \ {k} ⊆ A_j`. The first such user
/// is reported; otherwise the test says nothing.
pub fn necessary_condition_infeasible(g: &Graph) -> Result<Necessary> {
    if g.n() > NECESSARY_MAX_USERS {
        return Err(Error::TooLarge(format!("N <= {NECESSARY_MAX_USERS} required")));
    }
    'users: for i in 0..g.n() {
        let side = g.side(i);
        let mut certs = Vec::new();
        // subsets of s_i, each joined with i
        let mut t = 0u64;
        loop {
            let s = t | 1 << i;
            match block(g, i, s) {
                Some((j, k)) => certs.push(SubsetCertificate { subset: mask_to_users(s), j: j + 1, k: k + 1 }),
                None => continue 'users,
            }
            if t == side {
                break;
            }
            t = (t.wrapping_sub(side)) & side;
        }
        certs.sort_by_key(|c| c.subset.iter().fold(0u64, |m, &u| m | 1 << (u - 1)));
        return Ok(Necessary::Infeasible { user: i + 1, certificates: certs });
    }
    Ok(Necessary::Inconclusive)
}

/// Re-checks a certificate against the graph.
pub fn certificate_holds(g: &Graph, c: &SubsetCertificate) -> bool {
    let (j, k) = (c.j - 1, c.k - 1);
    let s = c.subset.iter().fold(0u64, |m, &u| m | 1 << (u - 1));
    s >> k & 1 == 1 && g.a(j) >> k & 1 == 0 && (s & !(1 << k)) & !g.a(j) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_users_without_side_information() {
        let g = Graph::empty(2);
        assert_eq!(subset_condition_violation(&g), Some((1, 2)));
        let Necessary::Infeasible { user, certificates } = necessary_condition_infeasible(&g).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(user, 1);
        assert_eq!(certificates, vec![SubsetCertificate { subset: vec![1], j: 2, k: 1 }]);
    }

    #[test]
    fn directed_cycle() {
        let g = Graph::new(3, &[vec![2], vec![3], vec![1]]).unwrap();
        assert_eq!(subset_condition_violation(&g), Some((1, 2)));
        assert!(matches!(necessary_condition_infeasible(&g).unwrap(), Necessary::Infeasible { .. }));
    }

    #[test]
    fn complete_graph_is_inconclusive() {
        let g = Graph::complete(4);
        assert_eq!(subset_condition_violation(&g), None);
        assert_eq!(necessary_condition_infeasible(&g).unwrap(), Necessary::Inconclusive);
    }

    #[test]
    fn certificates_recheck() {
        let g = Graph::new(4, &[vec![2], vec![3], vec![4], vec![1]]).unwrap();
        if let Necessary::Infeasible { certificates, .. } = necessary_condition_infeasible(&g).unwrap() {
            assert!(certificates.iter().all(|c| certificate_holds(&g, c)));
        }
    }
}
