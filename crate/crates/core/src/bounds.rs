//! Rate bounds: maximum acyclic induced subgraph, key-rate LPs, the sum key
//! rate bracket, and the polymatroidal outer bound.

use num_traits::{ToPrimitive, Zero};

use crate::coloring::{conflict_graph, fractional_chromatic};
use crate::error::{invalid, Error, Result};
use crate::lp::{lp_solve, Feasible, LpOutcome, LpProblem, ParametricLp, Rel};
use crate::model::{all_patterns, full_mask, mask_to_users, pattern_string, q_int, Graph, RateTuple, Q};

pub const MAIS_MAX_USERS: usize = 24;
pub const KEYRATE_MAX_USERS: usize = 6;

/// Size of a largest acyclic induced subgraph and the lexicographically
/// smallest (1-based, sorted) witness among maximizers. Mutual edges count as
/// 2-cycles.
pub fn mais(g: &Graph) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > MAIS_MAX_USERS {
        return Err(Error::TooLarge(format!("mais needs N <= {MAIS_MAX_USERS}, got {n}")));
    }
    let total = 1usize << n;
    let mut acyclic = vec![false; total];
    acyclic[0] = true;
    for s in 1..total {
        let sm = s as u64;
        // some vertex with no out-edge inside S whose removal leaves an acyclic set
        acyclic[s] = (0..n).any(|v| sm >> v & 1 == 1 && g.side(v) & sm == 0 && acyclic[s & !(1 << v)]);
    }
    let best = (0..total).filter(|&s| acyclic[s]).map(|s| s.count_ones()).max().unwrap_or(0);
    let witness = (0..total)
        .filter(|&s| acyclic[s] && s.count_ones() == best)
        .map(|s| mask_to_users(s as u64))
        .min()
        .unwrap_or_default();
    Ok((best as usize, witness))
}

/// The key-rate LP together with its solution.
#[derive(Debug, Clone)]
pub struct KeyRateLp {
    pub problem: LpProblem,
    pub outcome: LpOutcome,
}

impl KeyRateLp {
    pub fn value(&self) -> Q {
        self.outcome.value().cloned().expect("key-rate LP is always feasible and bounded")
    }

    /// Optimal key rates, keyed by pattern mask.
    pub fn rates(&self, n: usize) -> Vec<(u64, Q)> {
        let point = self.outcome.point().expect("optimal");
        all_patterns(n).into_iter().zip(point.iter().cloned()).filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Pair rows `Σ_{b_i=1, b_j=0} R_b ≥ 1` for `i ∉ A_j`, as pattern lists.
pub fn pair_rows(g: &Graph) -> Vec<Vec<u64>> {
    let ak = all_patterns(g.n());
    g.pair_masks()
        .into_iter()
        .map(|(i, j)| ak.iter().copied().filter(|b| b >> i & 1 == 1 && b >> j & 1 == 0).collect())
        .collect()
}

/// Triple rows `Σ_{b ∈ (AK_i ∪ AK_j) \ AK_ℓ} R_b ≥ 2` for distinct users with
/// `i ∉ A_j` and `i, j ∉ A_ℓ`; the row is symmetric in `i, j`, so each
/// unordered pair appears once.
pub fn triple_rows(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    let ak = all_patterns(n);
    let mut rows = Vec::new();
    for l in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if l == i || l == j || g.a(l) >> i & 1 == 1 || g.a(l) >> j & 1 == 1 {
                    continue;
                }
                if g.a(j) >> i & 1 == 1 && g.a(i) >> j & 1 == 1 {
                    continue;
                }
                let row: Vec<u64> =
                    ak.iter().copied().filter(|b| (b >> i & 1 == 1 || b >> j & 1 == 1) && b >> l & 1 == 0).collect();
                rows.push(row);
            }
        }
    }
    rows
}

/// Minimum sum key rate subject to the pair rows (and triple rows when asked).
pub fn keyrate_lp(g: &Graph, include_triples: bool) -> Result<KeyRateLp> {
    let n = g.n();
    if n > KEYRATE_MAX_USERS {
        return Err(Error::TooLarge(format!("keyrate LP needs N <= {KEYRATE_MAX_USERS}, got {n}")));
    }
    let ak = all_patterns(n);
    let mut p = LpProblem::new();
    for &b in &ak {
        p.add_var(format!("R{}", pattern_string(b, n)));
    }
    let idx = |b: u64| (b - 1) as usize;
    for (k, row) in pair_rows(g).into_iter().enumerate() {
        p.add(row.iter().map(|&b| (idx(b), q_int(1))).collect(), Rel::Ge, q_int(1), format!("pair{}", k + 1));
    }
    if include_triples {
        for (k, row) in triple_rows(g).into_iter().enumerate() {
            p.add(row.iter().map(|&b| (idx(b), q_int(1))).collect(), Rel::Ge, q_int(2), format!("triple{}", k + 1));
        }
    }
    p.minimize((0..ak.len()).map(|j| (j, q_int(1))).collect());
    let outcome = lp_solve(&p);
    Ok(KeyRateLp { problem: p, outcome })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerSource {
    MaisMinusOne,
    KeyrateLp,
}

impl LowerSource {
    pub fn tag(self) -> &'static str {
        match self {
            LowerSource::MaisMinusOne => "mais-1",
            LowerSource::KeyrateLp => "keyrate_lp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lower: Q,
    pub source: LowerSource,
    pub upper: Q,
}

/// `max(mais − 1, keyrate LP) ≤ minimum sum key rate ≤ χ_f(conflict graph)`.
pub fn sum_keyrate_bracket(g: &Graph) -> Result<Bracket> {
    let (m, _) = mais(g)?;
    let lp = keyrate_lp(g, false)?.value();
    let mm = q_int(m as i64 - 1);
    let (lower, source) = if lp >= mm { (lp, LowerSource::KeyrateLp) } else { (mm, LowerSource::MaisMinusOne) };
    let upper = fractional_chromatic(&conflict_graph(g))?.value;
    Ok(Bracket { lower, source, upper })
}

// ---------------------------------------------------------------------------
// Polymatroidal outer bound. The ground set is users 0..N followed by the key
// support; f(S, T) is variable number `S | T << N` for T indexed in support.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pm4Mode {
    /// Singleton increments only (and singleton monotonicity).
    Elemental,
    /// Every disjoint family (and every nested pair for monotonicity).
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct PolymatroidInstance {
    pub graph: Graph,
    pub rates: RateTuple,
    /// `None` picks the default support: all of AK for N ≤ 3, otherwise the
    /// patterns with positive rate.
    pub key_support: Option<Vec<u64>>,
    pub mode: Pm4Mode,
}

/// `f(A) + f(A∪B∪C) ≤ f(A∪B) + f(A∪C)` over ground-set masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pm4Row {
    pub a: u32,
    pub ab: u32,
    pub ac: u32,
    pub abc: u32,
}

/// `f(x) ≥ f(y)` with `x ⊂ y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pm3Row {
    pub x: u32,
    pub y: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolymatroidVerdict {
    Passes,
    OuterBoundViolated,
}

#[derive(Debug, Clone)]
pub struct PolymatroidReport {
    pub verdict: PolymatroidVerdict,
    pub variables: usize,
    pub pm3_rows: usize,
    pub pm4_rows: usize,
    /// Rows of the lazily generated families that were added to the LP.
    pub rows_added: usize,
    pub rounds: usize,
    /// A feasible `f` when the bound passes.
    pub witness: Option<Vec<Q>>,
}

pub const POLYMATROID_MAX_VARS: usize = 1 << 16;

/// Most violated lazily generated rows added per round.
const CUTS_PER_ROUND: usize = 200;

impl PolymatroidInstance {
    pub fn new(graph: Graph, rates: RateTuple) -> PolymatroidInstance {
        PolymatroidInstance { graph, rates, key_support: None, mode: Pm4Mode::Elemental }
    }

    pub fn support(&self) -> Result<Vec<u64>> {
        let n = self.graph.n();
        let s = match &self.key_support {
            Some(s) => s.clone(),
            None if n <= 3 => all_patterns(n),
            None => self.rates.key_rates.keys().copied().collect(),
        };
        let s = clean_support(n, s)?;
        support_covers(&s, &self.rates, n)?;
        Ok(s)
    }
}

fn clean_support(n: usize, mut s: Vec<u64>) -> Result<Vec<u64>> {
    s.sort_unstable();
    s.dedup();
    for &b in &s {
        if b == 0 || b >= full_mask(n) {
            return invalid(format!("{b:#b} is not a key pattern"));
        }
    }
    if n + s.len() > 16 {
        return Err(Error::TooLarge(format!("2^{} polymatroid variables exceed 2^16", n + s.len())));
    }
    Ok(s)
}

fn support_covers(s: &[u64], rates: &RateTuple, n: usize) -> Result<()> {
    if rates.n != n {
        return invalid("rate tuple and graph disagree on N");
    }
    for &b in rates.key_rates.keys() {
        if !s.contains(&b) {
            return invalid(format!("rate for {} lies outside the key support", pattern_string(b, n)));
        }
    }
    Ok(())
}

/// Monotonicity rows.
pub fn pm3_generation(g_size: usize, mode: Pm4Mode) -> Vec<Pm3Row> {
    let full = (1u32 << g_size) - 1;
    let mut rows = Vec::new();
    match mode {
        Pm4Mode::Elemental => {
            for x in 0..=full {
                for e in 0..g_size {
                    if x >> e & 1 == 0 {
                        rows.push(Pm3Row { x, y: x | 1 << e });
                    }
                }
            }
        }
        Pm4Mode::Exhaustive => {
            for y in 0..=full {
                // proper subsets of y
                let mut x = y;
                loop {
                    x = x.wrapping_sub(1) & y;
                    rows.push(Pm3Row { x, y });
                    if x == 0 {
                        break;
                    }
                }
                if y == 0 {
                    rows.pop();
                }
            }
        }
    }
    rows
}

/// Submodularity rows, in a deterministic order. Elemental mode emits
/// `C(g,2)·2^(g−2)` rows; exhaustive mode emits every unordered pair of
/// nonempty disjoint `B, C` with `A` disjoint from both.
pub fn pm4_generation(inst: &PolymatroidInstance, mode: Pm4Mode) -> Result<Vec<Pm4Row>> {
    Ok(pm4_rows(inst.graph.n() + inst.support()?.len(), mode))
}

fn pm4_rows(g_size: usize, mode: Pm4Mode) -> Vec<Pm4Row> {
    let full = if g_size == 0 { 0 } else { (1u32 << g_size) - 1 };
    let mut rows = Vec::new();
    match mode {
        Pm4Mode::Elemental => {
            for a in 0..=full {
                for e1 in 0..g_size {
                    for e2 in e1 + 1..g_size {
                        if a >> e1 & 1 == 0 && a >> e2 & 1 == 0 {
                            let (b, c) = (1u32 << e1, 1u32 << e2);
                            rows.push(Pm4Row { a, ab: a | b, ac: a | c, abc: a | b | c });
                        }
                    }
                }
            }
        }
        Pm4Mode::Exhaustive => {
            // each element goes to none, A, B or C
            let total = 4usize.pow(g_size as u32);
            for code in 0..total {
                let (mut a, mut b, mut c) = (0u32, 0u32, 0u32);
                let mut t = code;
                for e in 0..g_size {
                    match t % 4 {
                        1 => a |= 1 << e,
                        2 => b |= 1 << e,
                        3 => c |= 1 << e,
                        _ => {}
                    }
                    t /= 4;
                }
                if b == 0 || c == 0 || b > c {
                    continue;
                }
                rows.push(Pm4Row { a, ab: a | b, ac: a | c, abc: a | b | c });
            }
        }
    }
    rows
}

/// Polymatroid check for one graph, key support and mode, reusable across
/// rate tuples. The LP keeps every lazily generated row it has needed so
/// far, and the rates enter as parameters, so later tuples mostly cost a
/// warm re-solve.
pub struct PolymatroidChecker {
    graph: Graph,
    support: Vec<u64>,
    pm3: Vec<Pm3Row>,
    pm4: Vec<Pm4Row>,
    used3: Vec<bool>,
    used4: Vec<bool>,
    lp: ParametricLp,
}

impl PolymatroidChecker {
    pub fn new(graph: Graph, support: Vec<u64>, mode: Pm4Mode) -> Result<PolymatroidChecker> {
        let support = clean_support(graph.n(), support)?;
        let g_size = graph.n() + support.len();
        let pm3 = pm3_generation(g_size, mode);
        let pm4 = pm4_rows(g_size, mode);
        let (used3, used4) = (vec![false; pm3.len()], vec![false; pm4.len()]);
        let lp = base_lp(&graph, &support);
        Ok(PolymatroidChecker { graph, support, pm3, pm4, used3, used4, lp })
    }

    pub fn for_instance(inst: &PolymatroidInstance) -> Result<PolymatroidChecker> {
        PolymatroidChecker::new(inst.graph.clone(), inst.support()?, inst.mode)
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    fn add_row(&mut self, row: Lazy) {
        let one = q_int(1);
        match row {
            Lazy::Pm3(k) => {
                self.used3[k] = true;
                let r = self.pm3[k];
                self.lp.add(vec![(r.x as usize, one.clone()), (r.y as usize, -one)], Rel::Ge, Q::zero(), "pm3");
            }
            Lazy::Pm4(k) => {
                self.used4[k] = true;
                let r = self.pm4[k];
                self.lp.add(
                    vec![
                        (r.ab as usize, one.clone()),
                        (r.ac as usize, one.clone()),
                        (r.a as usize, -one.clone()),
                        (r.abc as usize, -one),
                    ],
                    Rel::Ge,
                    Q::zero(),
                    "pm4",
                );
            }
        }
    }

    /// Decides whether the system of the polymatroidal bound is feasible at
    /// `rates`. Monotonicity and submodularity rows are generated lazily:
    /// violated rows are added until the exact solution satisfies the whole
    /// family, which yields the same verdict as solving the full system.
    pub fn check(&mut self, rates: &RateTuple) -> Result<PolymatroidReport> {
        let n = self.graph.n();
        support_covers(&self.support, rates, n)?;
        let nvars = 1usize << (n + self.support.len());
        let mut values = vec![rates.r.clone()];
        values.extend(self.support.iter().map(|&b| rates.key_rate(b)));
        self.lp.set_params(&values);
        let (pm3_rows, pm4_rows) = (self.pm3.len(), self.pm4.len());
        let mut rounds = 0;
        let report = |verdict, witness: Option<Vec<Q>>, rounds, rows| PolymatroidReport {
            verdict,
            variables: nvars,
            pm3_rows,
            pm4_rows,
            rows_added: rows,
            rounds,
            witness: witness.map(|mut f| {
                f.truncate(nvars);
                f
            }),
        };
        loop {
            rounds += 1;
            let fl = self.lp.point();
            let mut exact_point = None;
            if fl.is_none() {
                match self.lp.certify() {
                    Feasible::Farkas(_) => {
                        return Ok(report(PolymatroidVerdict::OuterBoundViolated, None, rounds, self.rows()))
                    }
                    Feasible::Point(f) => exact_point = Some(f),
                }
            }
            let fl = fl.unwrap_or_else(|| exact_point.iter().flatten().map(|v| v.to_f64().expect("finite")).collect());
            let mut cuts = violated_rows(&self.pm3, &self.pm4, &self.used3, &self.used4, &fl, None);
            if cuts.is_empty() {
                // the float point looks feasible: settle it exactly
                let f = match exact_point.take() {
                    Some(f) => f,
                    None => match self.lp.certify() {
                        Feasible::Farkas(_) => {
                            return Ok(report(PolymatroidVerdict::OuterBoundViolated, None, rounds, self.rows()))
                        }
                        Feasible::Point(f) => f,
                    },
                };
                let fq: Vec<f64> = f.iter().map(|v| v.to_f64().expect("finite")).collect();
                cuts = violated_rows(&self.pm3, &self.pm4, &self.used3, &self.used4, &fq, Some(&f));
                if cuts.is_empty() {
                    return Ok(report(PolymatroidVerdict::Passes, Some(f), rounds, self.rows()));
                }
            }
            cuts.truncate(CUTS_PER_ROUND);
            for (_, r) in cuts {
                self.add_row(r);
            }
        }
    }

    fn rows(&self) -> usize {
        self.used3.iter().chain(&self.used4).filter(|&&u| u).count()
    }
}

/// Every row except the lazily generated families. Variables past the `f`
/// block are the parameters `R` and then `R_b` over the support.
fn base_lp(graph: &Graph, support: &[u64]) -> ParametricLp {
    let n = graph.n();
    let nvars = 1usize << (n + support.len());
    let users_full = full_mask(n) as u32;
    let supp_full = ((1u64 << support.len()) - 1) as u32;
    let set = |s: u32, t: u32| (s | t << n) as usize;
    // T-mask of support patterns containing user i
    let ak_i = |i: usize| -> u32 {
        support.iter().enumerate().filter(|(_, b)| *b >> i & 1 == 1).fold(0u32, |m, (k, _)| m | 1 << k)
    };

    let mut p = LpProblem::new();
    for x in 0..nvars {
        p.add_var(format!("f({},{})", x as u32 & users_full, x >> n));
    }
    let r = p.add_var("R");
    let rb: Vec<usize> = support.iter().map(|&b| p.add_var(format!("R{}", pattern_string(b, n)))).collect();
    let one = q_int(1);
    p.add(vec![(set(users_full, supp_full), one.clone())], Rel::Eq, Q::zero(), "pm1");
    p.add(vec![(set(0, 0), one.clone()), (r, -one.clone())], Rel::Le, Q::zero(), "pm2");
    for i in 0..n {
        let s_i = graph.side(i) as u32;
        let a_i = graph.a(i) as u32;
        let t = ak_i(i);
        p.add(
            vec![(set(s_i, t), one.clone()), (set(a_i, t), -one.clone())],
            Rel::Ge,
            one.clone(),
            format!("pm5[{}]", i + 1),
        );
        if a_i != users_full {
            p.add(
                vec![(set(a_i, t), one.clone()), (set(users_full, t), -one.clone())],
                Rel::Eq,
                Q::zero(),
                format!("pm6[{}]", i + 1),
            );
        }
    }
    for tmask in 0..=supp_full {
        // T = tmask; the row bounds f([N], support \ T) by the rates in T
        let mut row = vec![(set(users_full, supp_full & !tmask), one.clone())];
        row.extend((0..support.len()).filter(|k| tmask >> k & 1 == 1).map(|k| (rb[k], -one.clone())));
        p.add(row, Rel::Le, Q::zero(), format!("pm7[{tmask}]"));
    }
    // small values keep the returned points simple
    p.minimize((0..nvars).map(|x| (x, one.clone())).collect());
    let mut params = vec![r];
    params.extend(rb);
    ParametricLp::new(p, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Lazy {
    Pm3(usize),
    Pm4(usize),
}

/// One-shot form of [`PolymatroidChecker::check`].
pub fn polymatroid_check(inst: &PolymatroidInstance) -> Result<PolymatroidReport> {
    PolymatroidChecker::for_instance(inst)?.check(&inst.rates)
}

/// Unused rows violated at `fl`, most violated first. With `exact`, rows
/// within float noise of tight are compared exactly; otherwise they count as
/// satisfied.
fn violated_rows(
    pm3: &[Pm3Row],
    pm4: &[Pm4Row],
    used3: &[bool],
    used4: &[bool],
    fl: &[f64],
    exact: Option<&[Q]>,
) -> Vec<(f64, Lazy)> {
    let short = |lo: f64, hi: f64, cmp: &dyn Fn(&[Q]) -> bool| -> Option<f64> {
        if lo < hi - 1e-9 {
            Some(hi - lo)
        } else if lo > hi + 1e-9 {
            None
        } else {
            exact.filter(|f| cmp(f)).map(|_| 0.0)
        }
    };
    let mut cuts = Vec::new();
    for (k, r) in pm3.iter().enumerate() {
        let (x, y) = (r.x as usize, r.y as usize);
        if !used3[k] {
            if let Some(v) = short(fl[x], fl[y], &|f| f[x] < f[y]) {
                cuts.push((v, Lazy::Pm3(k)));
            }
        }
    }
    for (k, r) in pm4.iter().enumerate() {
        let (a, ab, ac, abc) = (r.a as usize, r.ab as usize, r.ac as usize, r.abc as usize);
        if !used4[k] {
            let cmp = |f: &[Q]| &f[ab] + &f[ac] < &f[a] + &f[abc];
            if let Some(v) = short(fl[ab] + fl[ac], fl[a] + fl[abc], &cmp) {
                cuts.push((v, Lazy::Pm4(k)));
            }
        }
    }
    // fewest elements first: singleton steps imply every larger row
    let width = |r: Lazy| match r {
        Lazy::Pm3(k) => (pm3[k].y & !pm3[k].x).count_ones(),
        Lazy::Pm4(k) => (pm4[k].abc & !pm4[k].a).count_ones(),
    };
    cuts.sort_by(|a, b| width(a.1).cmp(&width(b.1)).then(b.0.total_cmp(&a.0)).then(a.1.cmp(&b.1)));
    cuts
}

/// Binomial helper for the elemental row count.
pub fn elemental_pm4_count(g_size: usize) -> usize {
    if g_size < 2 {
        return 0;
    }
    g_size * (g_size - 1) / 2 * (1usize << (g_size - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q_frac;

    fn cycle() -> Graph {
        Graph::new(3, &[vec![2], vec![3], vec![1]]).unwrap()
    }

    fn c5() -> Graph {
        Graph::new(5, &[vec![2, 5], vec![1, 3], vec![2, 4], vec![3, 5], vec![4, 1]]).unwrap()
    }

    #[test]
    fn mais_values() {
        assert_eq!(mais(&cycle()).unwrap(), (2, vec![1, 2]));
        assert_eq!(mais(&c5()).unwrap().0, 2);
        assert_eq!(mais(&Graph::empty(3)).unwrap(), (3, vec![1, 2, 3]));
        assert_eq!(mais(&Graph::complete(4)).unwrap().0, 1);
        assert!(mais(&Graph::empty(25)).is_err());
    }

    #[test]
    fn keyrate_values() {
        assert_eq!(keyrate_lp(&cycle(), false).unwrap().value(), q_int(3));
        assert_eq!(keyrate_lp(&Graph::complete(3), false).unwrap().value(), q_int(0));
        assert!(keyrate_lp(&Graph::empty(7), false).is_err());
    }

    #[test]
    fn triple_rows_of_small_graphs() {
        assert_eq!(triple_rows(&Graph::empty(3)).len(), 3);
        let path = Graph::new(3, &[vec![2], vec![3], vec![]]).unwrap();
        assert_eq!(triple_rows(&path), vec![vec![0b001, 0b010, 0b011]]);
        assert!(triple_rows(&cycle()).is_empty());
    }

    #[test]
    fn bracket_of_cycle_and_complete() {
        let b = sum_keyrate_bracket(&cycle()).unwrap();
        assert_eq!((b.lower, b.upper), (q_int(3), q_int(3)));
        let k = sum_keyrate_bracket(&Graph::complete(4)).unwrap();
        assert_eq!((k.lower, k.upper), (q_int(0), q_int(1)));
    }

    #[test]
    fn pm_row_counts() {
        let inst = PolymatroidInstance::new(Graph::empty(2), RateTuple::new(2, q_int(2)));
        let rows = pm4_generation(&inst, Pm4Mode::Elemental).unwrap();
        assert_eq!(rows.len(), 24);
        assert_eq!(rows.len(), elemental_pm4_count(4));
        assert_eq!(rows[0], Pm4Row { a: 0, ab: 1, ac: 2, abc: 3 });
        let single = PolymatroidInstance::new(Graph::empty(1), RateTuple::new(1, q_int(1)));
        assert!(pm4_generation(&single, Pm4Mode::Elemental).unwrap().is_empty());
        assert!(pm4_generation(&single, Pm4Mode::Exhaustive).unwrap().is_empty());
        // (4^g - 2·3^g + 2^g) / 2 for g = 4
        assert_eq!(pm4_rows(4, Pm4Mode::Exhaustive).len(), (256 - 162 + 16) / 2);
        assert_eq!(pm3_generation(4, Pm4Mode::Exhaustive).len(), 81 - 16);
        assert_eq!(pm3_generation(4, Pm4Mode::Elemental).len(), 4 * 8);
    }

    #[test]
    fn polymatroid_on_cycle() {
        let g = cycle();
        let pass = RateTuple::from_vec(3, &[3, 1, 1, 0, 1, 0, 0].map(q_int)).unwrap();
        let r = polymatroid_check(&PolymatroidInstance::new(g.clone(), pass)).unwrap();
        assert_eq!(r.verdict, PolymatroidVerdict::Passes);
        let fail = RateTuple::from_vec(3, &[2, 0, 0, 1, 0, 1, 0].map(q_int)).unwrap();
        let r = polymatroid_check(&PolymatroidInstance::new(g.clone(), fail)).unwrap();
        assert_eq!(r.verdict, PolymatroidVerdict::OuterBoundViolated);
        let low = RateTuple::from_vec(3, &[q_frac(3, 2), q_int(3), q_int(3), q_int(3), q_int(3), q_int(3), q_int(3)])
            .unwrap();
        let r = polymatroid_check(&PolymatroidInstance::new(g, low)).unwrap();
        assert_eq!(r.verdict, PolymatroidVerdict::OuterBoundViolated);
    }

    #[test]
    fn reused_checker_matches_fresh_checks() {
        let g = cycle();
        let tuples = [[3, 1, 1, 0, 1, 0, 0], [2, 0, 0, 1, 0, 1, 0], [2, 0, 0, 1, 0, 1, 1], [3, 0, 0, 0, 0, 0, 3]];
        for mode in [Pm4Mode::Elemental, Pm4Mode::Exhaustive] {
            let mut c = PolymatroidChecker::new(g.clone(), all_patterns(3), mode).unwrap();
            for t in tuples {
                let rates = RateTuple::from_vec(3, &t.map(q_int)).unwrap();
                let mut inst = PolymatroidInstance::new(g.clone(), rates.clone());
                inst.mode = mode;
                let fresh = polymatroid_check(&inst).unwrap().verdict;
                assert_eq!(c.check(&rates).unwrap().verdict, fresh, "{t:?} {mode:?}");
            }
        }
    }

    #[test]
    fn support_must_cover_rates() {
        let mut t = RateTuple::new(4, q_int(4));
        t.set(0b0011, q_int(1));
        let mut inst = PolymatroidInstance::new(Graph::empty(4), t);
        inst.key_support = Some(vec![0b0101]);
        assert!(inst.support().is_err());
    }
}
