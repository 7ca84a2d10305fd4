//! Conflict graphs, fold and fractional colorings, multicast schemes and
//! secure clique covers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::gf::Mat;
use crate::lp::{lp_solve, LpOutcome, LpProblem, Rel};
use crate::model::{
    full_mask, mask_members, mask_to_users, q_int, Graph, LinearScheme, MulticastScheme, Session, SessionTerm, Q,
};

pub const CHI_F_MAX_VERTICES: usize = 20;
pub const FOLD_MAX_VERTICES: usize = 12;
pub const COVER_MAX_USERS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<u64>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<UndirectedGraph> {
        if n > 63 {
            return Err(Error::TooLarge(format!("{n} vertices")));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return invalid(format!("bad edge ({a}, {b})"));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(UndirectedGraph { n, adj })
    }

    pub fn complete(n: usize) -> UndirectedGraph {
        let full = full_mask(n);
        UndirectedGraph { n, adj: (0..n).map(|v| full & !(1 << v)).collect() }
    }

    pub fn cycle(n: usize) -> UndirectedGraph {
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        UndirectedGraph::new(n, &edges).expect("n >= 3")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    /// Edges `(a, b)` with `a < b`, 0-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| mask_members(self.adj[a] >> a >> 1).map(move |d| (a, a + 1 + d))).collect()
    }

    pub fn is_independent(&self, set: u64) -> bool {
        mask_members(set).all(|v| self.adj[v] & set == 0)
    }

    /// Maximal independent sets in increasing mask order.
    pub fn maximal_independent_sets(&self) -> Vec<u64> {
        let mut out = Vec::new();
        // Bron–Kerbosch on the complement, without pivoting
        fn walk(g: &UndirectedGraph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
            if p == 0 && x == 0 {
                out.push(r);
                return;
            }
            while p != 0 {
                let v = p.trailing_zeros() as usize;
                let keep = !g.adj[v] & !(1u64 << v);
                walk(g, r | 1 << v, p & keep, x & keep, out);
                p &= !(1 << v);
                x |= 1 << v;
            }
        }
        if self.n > 0 {
            walk(self, 0, full_mask(self.n), 0, &mut out);
        }
        out.sort_unstable();
        out
    }
}

/// Edge `{i, j}` unless each of `i, j` holds the other's message.
pub fn conflict_graph(g: &Graph) -> UndirectedGraph {
    let n = g.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !(g.knows(i, j) && g.knows(j, i)) {
                edges.push((i, j));
            }
        }
    }
    UndirectedGraph::new(n, &edges).expect("valid graph")
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalColoring {
    pub value: Q,
    /// Nonzero weights on maximal independent sets.
    pub weights: Vec<(u64, Q)>,
}

/// Exact `χ_f` as the covering LP over maximal independent sets.
pub fn fractional_chromatic(ug: &UndirectedGraph) -> Result<FractionalColoring> {
    if ug.n() > CHI_F_MAX_VERTICES {
        return Err(Error::TooLarge(format!("chi_f needs at most {CHI_F_MAX_VERTICES} vertices, got {}", ug.n())));
    }
    if ug.n() == 0 {
        return Ok(FractionalColoring { value: Q::zero(), weights: vec![] });
    }
    let sets = ug.maximal_independent_sets();
    let mut p = LpProblem::new();
    for &s in &sets {
        p.add_var(format!("w{s}"));
    }
    for v in 0..ug.n() {
        let row = sets.iter().enumerate().filter(|(_, s)| *s >> v & 1 == 1).map(|(k, _)| (k, q_int(1))).collect();
        p.add(row, Rel::Ge, q_int(1), format!("cover{}", v + 1));
    }
    p.minimize((0..sets.len()).map(|k| (k, q_int(1))).collect());
    match lp_solve(&p) {
        LpOutcome::Optimal { value, point } => Ok(FractionalColoring {
            value,
            weights: sets.into_iter().zip(point).filter(|(_, w)| !w.is_zero()).collect(),
        }),
        other => unreachable!("covering LP is feasible and bounded, got {}", other.status()),
    }
}

/// A `b`-fold coloring: each vertex gets `b` colors out of `0..l` as a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldColoring {
    pub b: usize,
    pub l: usize,
    pub colors: Vec<u64>,
}

impl FoldColoring {
    pub fn validate(&self, ug: &UndirectedGraph) -> Result<()> {
        if self.colors.len() != ug.n() {
            return invalid("coloring does not cover every vertex");
        }
        if self.l > 64 {
            return Err(Error::TooLarge("palettes above 64 colors".into()));
        }
        for (v, &c) in self.colors.iter().enumerate() {
            if c.count_ones() as usize != self.b || (self.l < 64 && c >> self.l != 0) {
                return invalid(format!("vertex {} does not get {} colors from the palette", v + 1, self.b));
            }
        }
        for (a, b) in ug.edges() {
            if self.colors[a] & self.colors[b] != 0 {
                return invalid(format!("adjacent vertices {} and {} share a color", a + 1, b + 1));
            }
        }
        Ok(())
    }

    /// 1-based color lists per vertex.
    pub fn color_lists(&self) -> Vec<Vec<usize>> {
        self.colors.iter().map(|&c| mask_to_users(c)).collect()
    }
}

fn ceil_q(v: &Q) -> usize {
    v.ceil().to_integer().to_usize().expect("small")
}

/// `b`-subsets of `pool` in increasing mask order.
fn subsets_of(pool: u64, b: usize, out: &mut Vec<u64>) {
    fn go(rest: u64, b: usize, acc: u64, out: &mut Vec<u64>) {
        if b == 0 {
            out.push(acc);
            return;
        }
        if (rest.count_ones() as usize) < b {
            return;
        }
        let v = rest.trailing_zeros();
        let rest = rest & !(1 << v);
        go(rest, b - 1, acc | 1 << v, out);
        go(rest, b, acc, out);
    }
    go(pool, b, 0, out);
}

fn fold_search(ug: &UndirectedGraph, b: usize, l: usize) -> Option<Vec<u64>> {
    fn go(ug: &UndirectedGraph, b: usize, l: usize, v: usize, used: u64, colors: &mut Vec<u64>) -> bool {
        if v == ug.n() {
            return true;
        }
        let blocked = mask_members(ug.neighbors(v) & full_mask(v)).fold(0u64, |m, u| m | colors[u]);
        let palette = full_mask(l);
        let avail_used = used & !blocked & palette;
        // fresh colors are interchangeable, so only the first b can matter
        let fresh: u64 = mask_members(palette & !used).take(b).fold(0, |m, c| m | 1 << c);
        let mut cands = Vec::new();
        subsets_of(avail_used | fresh, b, &mut cands);
        for c in cands {
            colors.push(c);
            if go(ug, b, l, v + 1, used | c, colors) {
                return true;
            }
            colors.pop();
        }
        false
    }
    let mut colors = Vec::with_capacity(ug.n());
    go(ug, b, l, 0, 0, &mut colors).then_some(colors)
}

/// Smallest palette `L` admitting a `b`-fold coloring, with one such coloring.
pub fn b_fold_chromatic(ug: &UndirectedGraph, b: usize) -> Result<FoldColoring> {
    if ug.n() > FOLD_MAX_VERTICES {
        return Err(Error::TooLarge(format!("b-fold search needs at most {FOLD_MAX_VERTICES} vertices")));
    }
    if b == 0 {
        return invalid("fold must be at least 1");
    }
    if b * ug.n() > 64 {
        return Err(Error::TooLarge("palettes above 64 colors".into()));
    }
    let chi_f = fractional_chromatic(ug)?.value;
    let mut l = ceil_q(&(chi_f * q_int(b as i64)));
    loop {
        if let Some(colors) = fold_search(ug, b, l) {
            return Ok(FoldColoring { b, l, colors });
        }
        l += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulticastPlan {
    pub kappa: Q,
    pub coloring: FoldColoring,
}

/// `κ = χ_f` of the conflict graph, realized by a fold coloring whose fold is
/// the common denominator of an optimal weighting.
pub fn multicast_min_sessions(g: &Graph) -> Result<MulticastPlan> {
    let ug = conflict_graph(g);
    let fc = fractional_chromatic(&ug)?;
    let b = fc.weights.iter().fold(BigInt::one(), |d, (_, w)| d.lcm(w.denom()));
    let b = b.to_usize().filter(|&b| b <= 64).ok_or_else(|| Error::TooLarge("fold above 64".into()))?;
    let mut colors = vec![0u64; g.n()];
    let mut next = 0usize;
    for (set, w) in &fc.weights {
        let count = (w * q_int(b as i64)).to_integer().to_usize().expect("integral");
        for _ in 0..count {
            if next >= 64 {
                return Err(Error::TooLarge("palettes above 64 colors".into()));
            }
            for v in mask_members(*set) {
                if (colors[v].count_ones() as usize) < b {
                    colors[v] |= 1 << next;
                }
            }
            next += 1;
        }
    }
    let coloring = FoldColoring { b, l: next, colors };
    coloring.validate(&ug)?;
    Ok(MulticastPlan { kappa: fc.value, coloring })
}

/// One session per used color `k`, sent to `{i : k ∈ C_i}` with payload
/// `Σ x_i^(position of k in C_i)` over GF(2).
pub fn multicast_scheme_from_coloring(g: &Graph, coloring: &FoldColoring) -> Result<MulticastScheme> {
    coloring.validate(&conflict_graph(g))?;
    let mut sessions = Vec::new();
    for k in 0..coloring.l {
        let holders: Vec<usize> = (0..g.n()).filter(|&i| coloring.colors[i] >> k & 1 == 1).collect();
        if holders.is_empty() {
            continue;
        }
        let terms = holders
            .iter()
            .map(|&i| SessionTerm {
                user: i,
                coord: (coloring.colors[i] & full_mask(k)).count_ones() as usize,
                coeff: 1,
            })
            .collect();
        let recipients = holders.iter().fold(0u64, |m, &i| m | 1 << i);
        sessions.push(Session { recipients, terms });
    }
    let ms = MulticastScheme { q: 2, n: coloring.b, users: g.n(), sessions };
    ms.validate()?;
    Ok(ms)
}

/// Blocks as 0-based user masks, sorted by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecureCliqueCover {
    pub blocks: Vec<u64>,
}

impl SecureCliqueCover {
    /// 1-based sorted block lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| mask_to_users(b)).collect()
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<SecureCliqueCover> {
        let mut blocks = Vec::new();
        for l in lists {
            blocks.push(crate::model::users_to_mask(l, n)?);
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(SecureCliqueCover { blocks })
    }
}

fn mutual_clique(g: &Graph, c: u64) -> bool {
    mask_members(c).all(|v| g.side(v) & c == c & !(1 << v))
}

/// No user outside `c` holds exactly `|c| − 1` of its messages.
pub fn block_is_secure(g: &Graph, c: u64) -> bool {
    let k = c.count_ones();
    (0..g.n()).filter(|&v| c >> v & 1 == 0).all(|v| (g.side(v) & c).count_ones() + 1 != k)
}

/// Checks partition, mutual-clique and security conditions.
pub fn check_secure_cover(g: &Graph, cover: &SecureCliqueCover) -> Result<()> {
    let mut seen = 0u64;
    for &c in &cover.blocks {
        if c == 0 || c & seen != 0 || c & !full_mask(g.n()) != 0 {
            return invalid("blocks must be nonempty, disjoint and within range");
        }
        seen |= c;
        if !mutual_clique(g, c) {
            return invalid(format!("block {:?} is not a mutual clique", mask_to_users(c)));
        }
        if !block_is_secure(g, c) {
            return invalid(format!("block {:?} is not secure", mask_to_users(c)));
        }
    }
    if seen != full_mask(g.n()) {
        return invalid("blocks do not cover every user");
    }
    Ok(())
}

/// A secure clique cover with the fewest blocks, ties broken by the
/// lexicographically smallest list of sorted blocks; `None` after an
/// exhaustive search.
pub fn secure_clique_cover(g: &Graph) -> Result<Option<SecureCliqueCover>> {
    let n = g.n();
    if n > COVER_MAX_USERS {
        return Err(Error::TooLarge(format!("clique cover search needs N <= {COVER_MAX_USERS}")));
    }
    let mut good: Vec<u64> = (1..=full_mask(n)).filter(|&c| mutual_clique(g, c) && block_is_secure(g, c)).collect();
    good.sort_by_key(|&c| mask_to_users(c));

    fn go(good: &[u64], left: u64, depth: usize, acc: &mut Vec<u64>) -> bool {
        if left == 0 {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let low = 1u64 << left.trailing_zeros();
        for &c in good {
            if c & low != 0 && c & !left == 0 {
                acc.push(c);
                if go(good, left & !c, depth - 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    for k in 1..=n {
        let mut acc = Vec::new();
        if go(&good, full_mask(n), k, &mut acc) {
            return Ok(Some(SecureCliqueCover { blocks: acc }));
        }
    }
    Ok(None)
}

/// One GF(2) transmission per block: the sum of its messages.
pub fn scheme_from_secure_cover(g: &Graph, cover: &SecureCliqueCover) -> Result<LinearScheme> {
    check_secure_cover(g, cover)?;
    let r = cover.blocks.len();
    let gs = (0..g.n())
        .map(|i| {
            let mut m = Mat::zeros(2, r, 1);
            let k = cover.blocks.iter().position(|&c| c >> i & 1 == 1).expect("cover");
            m.set(k, 0, 1);
            m
        })
        .collect();
    LinearScheme::new(2, 1, r, gs, vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q_frac;

    fn bidir_c5() -> Graph {
        Graph::new(5, &[vec![2, 5], vec![1, 3], vec![2, 4], vec![3, 5], vec![4, 1]]).unwrap()
    }

    #[test]
    fn conflict_graphs() {
        let c = conflict_graph(&bidir_c5());
        assert_eq!(c.edges().len(), 5);
        assert!(c.adjacent(0, 2) && !c.adjacent(0, 1));
        let cyc = Graph::new(3, &[vec![2], vec![3], vec![1]]).unwrap();
        assert_eq!(conflict_graph(&cyc), UndirectedGraph::complete(3));
        assert!(conflict_graph(&Graph::complete(4)).edges().is_empty());
    }

    #[test]
    fn chi_f_values() {
        assert_eq!(fractional_chromatic(&UndirectedGraph::cycle(5)).unwrap().value, q_frac(5, 2));
        assert_eq!(fractional_chromatic(&UndirectedGraph::complete(4)).unwrap().value, q_int(4));
        assert_eq!(UndirectedGraph::cycle(5).maximal_independent_sets().len(), 5);
    }

    #[test]
    fn fold_values() {
        let c5 = UndirectedGraph::cycle(5);
        assert_eq!(b_fold_chromatic(&c5, 1).unwrap().l, 3);
        let two = b_fold_chromatic(&c5, 2).unwrap();
        assert_eq!(two.l, 5);
        two.validate(&c5).unwrap();
        assert_eq!(b_fold_chromatic(&UndirectedGraph::complete(3), 2).unwrap().l, 6);
    }

    #[test]
    fn multicast_plans() {
        let p = multicast_min_sessions(&bidir_c5()).unwrap();
        assert_eq!((p.kappa.clone(), p.coloring.b, p.coloring.l), (q_frac(5, 2), 2, 5));
        let ms = multicast_scheme_from_coloring(&bidir_c5(), &p.coloring).unwrap();
        assert_eq!(ms.sessions.len(), 5);
        assert!(ms.sessions.iter().all(|s| s.terms.len() == 2));
        let k = multicast_min_sessions(&Graph::complete(4)).unwrap();
        assert_eq!((k.kappa, k.coloring.b, k.coloring.l), (q_int(1), 1, 1));
    }

    #[test]
    fn bad_coloring_rejected() {
        let cyc = Graph::new(3, &[vec![2], vec![3], vec![1]]).unwrap();
        let c = FoldColoring { b: 1, l: 2, colors: vec![1, 1, 2] };
        assert!(multicast_scheme_from_coloring(&cyc, &c).is_err());
    }

    #[test]
    fn covers() {
        let k4 = secure_clique_cover(&Graph::complete(4)).unwrap().unwrap();
        assert_eq!(k4.blocks, vec![0b1111]);
        // singletons leave every outsider one message short
        assert_eq!(secure_clique_cover(&Graph::empty(3)).unwrap(), None);
        // a user one message short of a block
        let g = Graph::new(3, &[vec![2], vec![1], vec![1]]).unwrap();
        assert_eq!(secure_clique_cover(&g).unwrap(), None);
        let bad = SecureCliqueCover { blocks: vec![0b011, 0b100] };
        assert!(scheme_from_secure_cover(&g, &bad).is_err());
    }
}
