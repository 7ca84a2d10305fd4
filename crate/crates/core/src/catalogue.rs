//! Embedded rate regions with their vertex schemes, the worked-example
//! fixtures, and exhaustive scalar-code search.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::feasibility::is_feasible;
use crate::gf::{is_prime, Mat};
use crate::lp::{lp_check_point, vertex_rank_check, LpProblem, Rel};
use crate::model::{
    all_patterns, parse_pattern, parse_q, pattern_string, Graph, KeyBlock, KeyStructure, LinearScheme, RateTuple, Q,
};
use crate::oracle::oracle_check_private;
use crate::verifier::{scheme_rate, verify_private, Verdict};

const REGION_FILES: &[&str] = &[
    include_str!("../catalogue/regions/n3-directed-cycle.json"),
    include_str!("../catalogue/regions/n2-empty.json"),
    include_str!("../catalogue/regions/n2-one-edge.json"),
    include_str!("../catalogue/regions/n2-complete.json"),
    include_str!("../catalogue/regions/n3-empty.json"),
    include_str!("../catalogue/regions/n3-one-edge.json"),
    include_str!("../catalogue/regions/n3-one-mutual-pair.json"),
    include_str!("../catalogue/regions/n3-out-star.json"),
    include_str!("../catalogue/regions/n3-in-star.json"),
    include_str!("../catalogue/regions/n3-directed-path.json"),
    include_str!("../catalogue/regions/n3-directed-cycle-copy.json"),
    include_str!("../catalogue/regions/n3-in-star-plus-edge.json"),
    include_str!("../catalogue/regions/n3-mutual-pair-plus-edge.json"),
    include_str!("../catalogue/regions/n3-mutual-pair-plus-in-edge.json"),
    include_str!("../catalogue/regions/n3-mutual-pair-plus-cycle.json"),
    include_str!("../catalogue/regions/n3-mutual-pair-plus-two-in.json"),
    include_str!("../catalogue/regions/n3-two-mutual-pairs.json"),
    include_str!("../catalogue/regions/n3-two-know-all.json"),
    include_str!("../catalogue/regions/n3-complete-minus-one.json"),
    include_str!("../catalogue/regions/n3-complete.json"),
];

#[derive(Debug, Clone)]
pub struct Vertex {
    pub rate: RateTuple,
    /// The code as printed, one sum per transmitted symbol.
    pub code: String,
    pub scheme: LinearScheme,
}

/// A rate region over `(R, R_b : b ∈ AK)` with one scheme per vertex.
#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub id: String,
    pub description: String,
    /// Catalogue group: 1 for the three-user cycle, 2 for two users, 3 for
    /// the other three-user graphs.
    pub group: u8,
    pub graph: Graph,
    pub region: LpProblem,
    pub vertices: Vec<Vertex>,
    pub printed_inequality_count: usize,
    pub printed_vertex_count: usize,
}

impl CatalogueEntry {
    pub fn parse(text: &str) -> Result<CatalogueEntry> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("catalogue entry lacks {k:?}")));
        let text_of = |k: &str| -> Result<String> {
            Ok(field(k)?.as_str().ok_or_else(|| Error::Parse(format!("{k:?} must be a string")))?.to_string())
        };
        let count = |k: &str| -> Result<usize> {
            field(k)?.as_u64().map(|c| c as usize).ok_or_else(|| Error::Parse(format!("{k:?} must be a count")))
        };
        let id = text_of("id")?;
        let graph = Graph::parse(&field("graph")?.to_string())?;
        let n = graph.n();
        let region = region_lp(n, field("region")?)?;
        let mut vertices = Vec::new();
        for x in field("vertices")?.as_array().ok_or_else(|| Error::Parse("vertices must be a list".into()))? {
            let rate =
                RateTuple::from_value(x.get("rate").ok_or_else(|| Error::Parse("vertex lacks rate".into()))?, n)?;
            let scheme =
                LinearScheme::from_value(x.get("scheme").ok_or_else(|| Error::Parse("vertex lacks scheme".into()))?)?;
            let code = x.get("code").and_then(Value::as_str).unwrap_or_default().to_string();
            vertices.push(Vertex { rate, code, scheme });
        }
        Ok(CatalogueEntry {
            id,
            description: text_of("description")?,
            group: count("group")? as u8,
            graph,
            region,
            vertices,
            printed_inequality_count: count("printed_inequality_count")?,
            printed_vertex_count: count("printed_vertex_count")?,
        })
    }

    /// Region dimension `1 + |AK|`.
    pub fn dim(&self) -> usize {
        self.region.num_vars()
    }
}

/// Variables `R, R_b (b ∈ AK in mask order)`, all non-negative.
pub fn region_variables(n: usize) -> LpProblem {
    let mut p = LpProblem::new();
    p.add_var("R");
    for b in all_patterns(n) {
        p.add_var(format!("R{}", pattern_string(b, n)));
    }
    p
}

fn region_lp(n: usize, rows: &Value) -> Result<LpProblem> {
    let mut p = region_variables(n);
    let ak = all_patterns(n);
    let rows = rows.as_array().ok_or_else(|| Error::Parse("region must be a list".into()))?;
    for row in rows {
        let terms =
            row.get("terms").and_then(Value::as_object).ok_or_else(|| Error::Parse("row lacks terms".into()))?;
        let mut coeffs = Vec::new();
        for (name, c) in terms {
            let c = parse_q(c.as_str().ok_or_else(|| Error::Parse("coefficient must be a string".into()))?)?;
            let j = if name == "R" {
                0
            } else {
                let b = parse_pattern(name, Some(n))?;
                ak.iter().position(|&x| x == b).ok_or_else(|| Error::Parse(format!("unknown rate {name:?}")))? + 1
            };
            coeffs.push((j, c));
        }
        coeffs.sort_by_key(|t| t.0);
        let label: Vec<String> = coeffs
            .iter()
            .map(|(j, c)| if c.is_one() { p.name(*j).to_string() } else { format!("{c} {}", p.name(*j)) })
            .collect();
        let rel = match row.get("op").and_then(Value::as_str) {
            Some(">=") => Rel::Ge,
            Some("<=") => Rel::Le,
            Some("=") | Some("==") => Rel::Eq,
            other => return Err(Error::Parse(format!("unknown relation {other:?}"))),
        };
        let rhs = parse_q(row.get("rhs").and_then(Value::as_str).ok_or_else(|| Error::Parse("row lacks rhs".into()))?)?;
        let text = format!("{} {} {}", label.join(" + "), row["op"].as_str().unwrap_or(""), rhs);
        p.add(coeffs, rel, rhs, text);
    }
    Ok(p)
}

/// Group 1, then group 2, then group 3, each in printed order.
pub fn catalogue_entries() -> Vec<CatalogueEntry> {
    REGION_FILES.iter().map(|t| CatalogueEntry::parse(t).expect("embedded catalogue parses")).collect()
}

pub fn catalogue_entry(id: &str) -> Option<CatalogueEntry> {
    catalogue_entries().into_iter().find(|e| e.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogueFailure {
    pub entry: String,
    /// 0-based vertex index; `None` for entry-level checks.
    pub vertex: Option<usize>,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct CatalogueReport {
    pub entries: usize,
    pub vertices: usize,
    pub failures: Vec<CatalogueFailure>,
}

impl CatalogueReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_catalogue(state_limit: u64) -> CatalogueReport {
    verify_entries(&catalogue_entries(), state_limit)
}

/// Runs every check on every vertex and records each failure with its entry
/// and vertex.
pub fn verify_entries(entries: &[CatalogueEntry], state_limit: u64) -> CatalogueReport {
    let per_entry: Vec<Vec<CatalogueFailure>> = entries.par_iter().map(|e| verify_entry(e, state_limit)).collect();
    CatalogueReport {
        entries: entries.len(),
        vertices: entries.iter().map(|e| e.vertices.len()).sum(),
        failures: per_entry.into_iter().flatten().collect(),
    }
}

fn verify_entry(e: &CatalogueEntry, state_limit: u64) -> Vec<CatalogueFailure> {
    let mut out = Vec::new();
    let mut fail = |vertex: Option<usize>, check: &'static str, detail: String| {
        out.push(CatalogueFailure { entry: e.id.clone(), vertex, check, detail })
    };
    if e.region.constraints.len() != e.printed_inequality_count {
        fail(
            None,
            "inequality_count",
            format!("{} rows, {} printed", e.region.constraints.len(), e.printed_inequality_count),
        );
    }
    if e.vertices.len() != e.printed_vertex_count {
        fail(None, "vertex_count", format!("{} vertices, {} printed", e.vertices.len(), e.printed_vertex_count));
    }
    for (k, v) in e.vertices.iter().enumerate() {
        let at = Some(k);
        match verify_private(&v.scheme, &e.graph) {
            Ok(verdict) if verdict.is_ok() => {}
            Ok(verdict) => fail(at, "verify_private", verdict.to_string()),
            Err(err) => fail(at, "verify_private", err.to_string()),
        }
        match oracle_check_private(&v.scheme, &e.graph, state_limit) {
            Ok(r) if r.clean() => {}
            Ok(r) => {
                fail(at, "oracle", format!("undecodable {:?}, leaking users {:?}", r.undecodable, leaking_users(&r)))
            }
            Err(err) => fail(at, "oracle", err.to_string()),
        }
        let got = scheme_rate(&v.scheme);
        if got != v.rate {
            fail(at, "scheme_rate", format!("scheme has rate {got}, vertex is {}", v.rate));
        }
        let point = v.rate.to_vec();
        match lp_check_point(&e.region, &point) {
            Ok(c) if c.satisfied => match vertex_rank_check(&e.region, &point, e.dim()) {
                Ok(true) => {}
                Ok(false) => fail(at, "vertex_rank", format!("tight rows at {} do not have rank {}", v.rate, e.dim())),
                Err(err) => fail(at, "vertex_rank", err.to_string()),
            },
            Ok(c) => {
                let names: Vec<String> = c.violated.iter().map(|&i| e.region.label(i)).collect();
                fail(at, "region", format!("{} violates {}", v.rate, names.join("; ")))
            }
            Err(err) => fail(at, "region", err.to_string()),
        }
    }
    out
}

fn leaking_users(r: &crate::oracle::OracleReport) -> Vec<usize> {
    r.leakage.iter().enumerate().filter(|(_, l)| !l.is_none()).map(|(i, _)| i + 1).collect()
}

// ---------------------------------------------------------------------------

/// Upper limit on the number of candidate structures enumerated.
pub const STRUCTURE_LIMIT: u128 = 1 << 24;

/// Every feasible `KS ⊆ AK` with `|KS| = size`, in lexicographic order of the
/// sorted mask lists.
pub fn feasible_structures_of_size(g: &Graph, size: usize) -> Result<Vec<KeyStructure>> {
    let ak = all_patterns(g.n());
    if size > ak.len() {
        return Ok(Vec::new());
    }
    let total = binomial(ak.len() as u128, size as u128);
    if total > STRUCTURE_LIMIT {
        return Err(Error::TooLarge(format!("C({}, {size}) = {total} candidate structures", ak.len())));
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let pats: Vec<u64> = idx.iter().map(|&i| ak[i]).collect();
        let ks = KeyStructure::new(g.n(), &pats)?;
        if is_feasible(g, &ks)?.is_feasible() {
            out.push(ks);
        }
        // next combination
        let mut k = size;
        while k > 0 && idx[k - 1] == ak.len() - size + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for t in k..size {
            idx[t] = idx[t - 1] + 1;
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------------------

/// Upper limit on column assignments examined by [`scalar_search`].
pub const SEARCH_LIMIT: u128 = 1 << 32;
/// `q^r` must fit a 128-bit span set.
pub const SEARCH_MAX_VECTORS: u64 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSearch {
    pub found: Option<LinearScheme>,
    /// Number of column assignments in the (pruned) search space.
    pub space: u128,
    pub pruned: bool,
}

/// Vectors of `F_q^r` as base-`q` integers; coordinate `k` is digit `k`.
struct Space {
    q: u32,
    r: usize,
    size: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl Space {
    fn new(q: u32, r: usize) -> Space {
        let size = (q as usize).pow(r as u32);
        let digits = |mut v: usize| -> Vec<u32> {
            (0..r)
                .map(|_| {
                    let d = (v % q as usize) as u32;
                    v /= q as usize;
                    d
                })
                .collect()
        };
        let pack = |d: &[u32]| -> usize { d.iter().rev().fold(0, |acc, &x| acc * q as usize + x as usize) };
        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; q as usize * size];
        for a in 0..size {
            let da = digits(a);
            for b in 0..size {
                let s: Vec<u32> = da.iter().zip(digits(b)).map(|(x, y)| (x + y) % q).collect();
                add[a * size + b] = pack(&s) as u8;
            }
            for c in 0..q {
                let s: Vec<u32> = da.iter().map(|x| x * c % q).collect();
                mul[c as usize * size + a] = pack(&s) as u8;
            }
        }
        Space { q, r, size, add, mul }
    }

    fn column(&self, v: usize) -> Vec<u32> {
        let mut v = v;
        (0..self.r)
            .map(|_| {
                let d = (v % self.q as usize) as u32;
                v /= self.q as usize;
                d
            })
            .collect()
    }

    /// Nonzero vectors whose first nonzero coordinate is 1.
    fn normalized(&self) -> Vec<usize> {
        (1..self.size).filter(|&v| self.column(v).into_iter().find(|&d| d != 0) == Some(1)).collect()
    }

    /// Span (as a set of vectors) of `span ∪ {v}`.
    fn extend(&self, span: u128, v: usize) -> u128 {
        if span >> v & 1 == 1 {
            return span;
        }
        let mut out = span;
        for c in 1..self.q as usize {
            let cv = self.mul[c * self.size + v] as usize;
            let mut rest = span;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out |= 1u128 << self.add[x * self.size + cv];
            }
        }
        out
    }
}

fn block_options(space: &Space, cap: usize, pruned: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if pruned {
        let pts = space.normalized();
        for w in 0..=cap.min(pts.len()) {
            let mut idx: Vec<usize> = (0..w).collect();
            loop {
                out.push(idx.iter().map(|&i| pts[i]).collect());
                let mut k = w;
                while k > 0 && idx[k - 1] == pts.len() - w + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                idx[k - 1] += 1;
                for t in k..w {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
    } else {
        let total = space.size.pow(cap as u32);
        for mut code in 0..total {
            let mut cols = Vec::with_capacity(cap);
            for _ in 0..cap {
                cols.push(code % space.size);
                code /= space.size;
            }
            cols.reverse();
            out.push(cols);
        }
    }
    out
}

struct Search<'a> {
    g: &'a Graph,
    space: Space,
    patterns: Vec<u64>,
    options: Vec<Vec<Vec<usize>>>,
    msg: Vec<usize>,
    /// Index of the last block foreign to each user (privacy is checked there).
    last_foreign: Vec<Option<usize>>,
}

impl Search<'_> {
    fn unknown(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let a = self.g.a(i);
        (0..self.g.n()).filter(move |&j| a >> j & 1 == 0)
    }

    /// Messages that cannot be decoded even without keys are rejected up front.
    fn messages_decodable(&self, cols: &[usize]) -> bool {
        (0..self.g.n()).all(|i| {
            let s = self.unknown(i).fold(1u128, |s, j| self.space.extend(s, cols[j]));
            s >> cols[i] & 1 == 0
        })
    }

    fn private_at(&self, cols: &[usize], i: usize, span: u128) -> bool {
        self.unknown(i).all(|j| span >> cols[j] & 1 == 1)
    }

    /// Depth-first over key blocks in pattern order; spans only grow, so a
    /// user whose message falls into its foreign-key span is dead.
    fn keys(&self, cols: &[usize], depth: usize, spans: &[u128], chosen: &mut Vec<usize>) -> bool {
        if depth == self.patterns.len() {
            return (0..self.g.n()).all(|i| self.last_foreign[i].is_some() || self.private_at(cols, i, spans[i]));
        }
        let b = self.patterns[depth];
        for (k, opt) in self.options[depth].iter().enumerate() {
            let mut next = spans.to_vec();
            let mut alive = true;
            for i in 0..self.g.n() {
                if b >> i & 1 == 1 {
                    continue;
                }
                for &v in opt {
                    next[i] = self.space.extend(next[i], v);
                }
                if next[i] >> cols[i] & 1 == 1
                    || (self.last_foreign[i] == Some(depth) && !self.private_at(cols, i, next[i]))
                {
                    alive = false;
                    break;
                }
            }
            if !alive {
                continue;
            }
            chosen.push(k);
            if self.keys(cols, depth + 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn scheme(&self, cols: &[usize], chosen: &[usize]) -> Result<LinearScheme> {
        let q = self.space.q;
        let r = self.space.r;
        let g = cols.iter().map(|&v| Mat::from_columns(q, r, &[self.space.column(v)])).collect();
        let keys = self
            .patterns
            .iter()
            .zip(chosen)
            .enumerate()
            .filter(|(d, (_, &k))| !self.options[*d][k].is_empty())
            .map(|(d, (&pattern, &k))| {
                let c: Vec<Vec<u32>> = self.options[d][k].iter().map(|&v| self.space.column(v)).collect();
                KeyBlock { pattern, h: Mat::from_columns(q, r, &c) }
            })
            .collect();
        LinearScheme::new(q, 1, r, g, keys)
    }
}

/// Exhaustive search for a scalar (`n = 1`) private scheme with `r`
/// transmissions and key widths bounded by `caps`, with canonical-form
/// pruning.
pub fn scalar_search(g: &Graph, q: u32, r: usize, caps: &BTreeMap<u64, usize>) -> Result<ScalarSearch> {
    scalar_search_with(g, q, r, caps, true)
}

/// `pruned = false` enumerates every column of every block at full width,
/// including zero and repeated columns.
pub fn scalar_search_with(
    g: &Graph,
    q: u32,
    r: usize,
    caps: &BTreeMap<u64, usize>,
    pruned: bool,
) -> Result<ScalarSearch> {
    if !is_prime(q as u64) {
        return invalid(format!("q = {q} is not prime"));
    }
    let n = g.n();
    for &b in caps.keys() {
        if !all_patterns(n).contains(&b) {
            return invalid(format!("cap on {b:#b}, which is not a key pattern for {n} users"));
        }
    }
    let vectors = (q as u64).checked_pow(r as u32).filter(|&v| v <= SEARCH_MAX_VECTORS);
    let Some(vectors) = vectors else {
        return Err(Error::TooLarge(format!("F_{q}^{r} has more than {SEARCH_MAX_VECTORS} vectors")));
    };
    let space = Space::new(q, r);
    let msg: Vec<usize> = if pruned { space.normalized() } else { (0..vectors as usize).collect() };
    let patterns: Vec<u64> = caps.keys().copied().collect();
    let options: Vec<Vec<Vec<usize>>> = caps.values().map(|&w| block_options(&space, w, pruned)).collect();
    let mut total: u128 = 1;
    let factors = std::iter::repeat_n(msg.len() as u128, n).chain(options.iter().map(|o| o.len() as u128));
    for f in factors {
        total = total.saturating_mul(f);
        if total > SEARCH_LIMIT {
            return Err(Error::TooLarge(format!("search space exceeds 2^32 column assignments (q = {q}, r = {r})")));
        }
    }
    let last_foreign = (0..n).map(|i| patterns.iter().rposition(|&b| b >> i & 1 == 0)).collect();
    let search = Search { g, space, patterns, options, msg, last_foreign };

    let rest = n - 1;
    let per_first = search.msg.len().pow(rest as u32);
    let found = (0..search.msg.len()).into_par_iter().find_map_first(|first| {
        let mut cols = vec![0usize; n];
        cols[0] = search.msg[first];
        for code in 0..per_first {
            let mut c = code;
            for j in (1..n).rev() {
                cols[j] = search.msg[c % search.msg.len()];
                c /= search.msg.len();
            }
            if !search.messages_decodable(&cols) {
                continue;
            }
            let mut chosen = Vec::new();
            if search.keys(&cols, 0, &vec![1u128; n], &mut chosen) {
                return Some((cols, chosen));
            }
        }
        None
    });
    let found = match found {
        Some((cols, chosen)) => {
            let s = search.scheme(&cols, &chosen)?;
            let v: Verdict = verify_private(&s, g)?;
            if !v.is_ok() {
                return invalid(format!("search produced a scheme the verifier rejects: {v}"));
            }
            Some(s)
        }
        None => None,
    };
    Ok(ScalarSearch { found, space: total, pruned })
}

// ---------------------------------------------------------------------------
// Worked examples.

fn ring(users: &[i64]) -> u64 {
    users.iter().fold(0, |m, &u| m | 1 << (u - 1).rem_euclid(5))
}

/// Five users, `s_i = {i+1, i+2}` (mod 5).
pub fn two_ahead_graph() -> Graph {
    Graph::new(5, &[vec![2, 3], vec![3, 4], vec![4, 5], vec![5, 1], vec![1, 2]]).expect("fixture")
}

/// Three transmissions with sum key rate 4 on [`two_ahead_graph`].
pub fn two_ahead_scheme() -> LinearScheme {
    LinearScheme::from_sums(
        2,
        5,
        1,
        &["x1 + x2 + x3 + k10010 + k11001", "x2 + x3 + x4 + k11001 + k01110", "x3 + x4 + x5 + k01110 + k00101"],
    )
    .expect("fixture")
}

/// Bidirectional 5-cycle.
pub fn pentagon_graph() -> Graph {
    Graph::new(5, &[vec![2, 5], vec![1, 3], vec![2, 4], vec![3, 5], vec![4, 1]]).expect("fixture")
}

/// Block length 2, five transmissions: rate 5/2.
pub fn pentagon_block_scheme() -> LinearScheme {
    LinearScheme::from_sums(
        2,
        5,
        2,
        &["x1 + x2 + k11000", "x3 + x4 + k00110", "x5 + x1^2 + k10001", "x2^2 + x3^2 + k01100", "x4^2 + x5^2 + k00011"],
    )
    .expect("fixture")
}

/// The 30 size-3 structures of [`pentagon_graph`] in four rotation classes.
pub fn pentagon_structure_classes() -> Vec<Vec<KeyStructure>> {
    let class = |shapes: &[[&[i64]; 3]]| -> Vec<KeyStructure> {
        let mut out = Vec::new();
        for shape in shapes {
            for i in 1..=5 {
                let pats: Vec<u64> = shape.iter().map(|s| ring(&s.iter().map(|d| i + d).collect::<Vec<_>>())).collect();
                out.push(KeyStructure::new(5, &pats).expect("fixture"));
            }
        }
        out
    };
    vec![
        class(&[[&[0], &[1, 2], &[-1, -2]], [&[0, -1], &[0, 1], &[2, 3]], [&[-1, 0, 1], &[1, 2], &[-1, -2]]]),
        class(&[[&[0, 1], &[1, 2, 3], &[0, -1, -2]]]),
        class(&[[&[-1, 0, 1], &[1, 2, 3], &[-1, -2, -3]]]),
        class(&[[&[0, 1, 2], &[0, -1, -2], &[-1, -2, 1, 2]]]),
    ]
}

/// Four users: `s_1 = {2,3}`, `s_2 = {4}`, `s_3 = {1,2}`, `s_4 = {1,3}`.
pub fn gap_graph() -> Graph {
    Graph::new(4, &[vec![2, 3], vec![4], vec![1, 2], vec![1, 3]]).expect("fixture")
}

/// Block length 2 vector scheme whose rate no scalar code reaches.
pub fn four_user_scheme() -> LinearScheme {
    LinearScheme::from_sums(
        2,
        4,
        2,
        &[
            "x1 + x2 + k1100 + k1001",
            "x2 + x4 + k1100 + k0101",
            "x2^2 + x4^2 + k0110 + k0101^2",
            "x4^2 + x3 + k0101^2 + k0011",
            "x1^2 + x3^2 + k1010",
        ],
    )
    .expect("fixture")
}

pub fn four_user_rate() -> RateTuple {
    let mut t = RateTuple::new(4, Q::new(5.into(), 2.into()));
    for (p, v) in [("1001", 1), ("1010", 1), ("1100", 1), ("0101", 2), ("0110", 1), ("0011", 1)] {
        t.set(parse_pattern(p, Some(4)).expect("fixture"), Q::new(v.into(), 2.into()));
    }
    t
}

/// Scalar key widths allowed when the vector rate is scaled to `n = 1`.
pub fn four_user_caps() -> BTreeMap<u64, usize> {
    [("1001", 1), ("1010", 1), ("1100", 1), ("0101", 2), ("0110", 1), ("0011", 1)]
        .into_iter()
        .map(|(p, w)| (parse_pattern(p, Some(4)).expect("fixture"), w))
        .collect()
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub verdict: Verdict,
    pub rate: RateTuple,
    pub expected: RateTuple,
    pub q2: ScalarSearch,
    pub q3: Option<ScalarSearch>,
    /// Same caps at `r = 3`, where a scalar scheme exists.
    pub r3: ScalarSearch,
}

impl GapReport {
    /// Vector scheme valid at the expected rate and no scalar scheme found.
    pub fn holds(&self) -> bool {
        self.verdict.is_ok()
            && self.rate == self.expected
            && self.q2.found.is_none()
            && self.q3.as_ref().is_none_or(|s| s.found.is_none())
            && self.r3.found.is_some()
    }
}

pub fn four_user_gap_demo(with_q3: bool) -> Result<GapReport> {
    let g = gap_graph();
    let s = four_user_scheme();
    let caps = four_user_caps();
    Ok(GapReport {
        verdict: verify_private(&s, &g)?,
        rate: scheme_rate(&s),
        expected: four_user_rate(),
        q2: scalar_search(&g, 2, 2, &caps)?,
        q3: if with_q3 { Some(scalar_search(&g, 3, 2, &caps)?) } else { None },
        r3: scalar_search(&g, 2, 3, &caps)?,
    })
}

/// Five users with the secure clique cover `{{1,2,4},{3,5}}`.
pub fn cover_graph() -> Graph {
    Graph::new(5, &[vec![2, 3, 4, 5], vec![1, 3, 4, 5], vec![1, 5], vec![1, 2, 3, 5], vec![2, 3]]).expect("fixture")
}

/// Seven users with no mutual edge, hence no secure clique cover.
pub fn coverless_graph() -> Graph {
    Graph::new(
        7,
        &[vec![2, 3, 7], vec![3, 4, 6], vec![4, 5, 7], vec![1, 6, 7], vec![1, 2, 4], vec![1, 3, 5], vec![2, 5, 6]],
    )
    .expect("fixture")
}

/// The 7x7 encoding matrix for [`coverless_graph`].
pub fn coverless_matrix() -> Mat {
    Mat::from_rows(
        2,
        &[
            vec![1, 1, 1, 0, 0, 0, 1],
            vec![0, 1, 1, 1, 0, 1, 0],
            vec![0, 0, 1, 1, 1, 0, 1],
            vec![1, 0, 0, 1, 0, 1, 1],
            vec![1, 1, 0, 1, 1, 0, 0],
            vec![1, 0, 1, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 1, 1],
        ],
    )
    .expect("fixture")
}

/// Keyless scheme whose message columns are the columns of [`coverless_matrix`].
pub fn coverless_scheme() -> LinearScheme {
    LinearScheme::keyless_scalar(&coverless_matrix()).expect("fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q_int;

    fn caps(list: &[(&str, usize)], n: usize) -> BTreeMap<u64, usize> {
        list.iter().map(|&(p, w)| (parse_pattern(p, Some(n)).unwrap(), w)).collect()
    }

    fn cycle() -> Graph {
        Graph::new(3, &[vec![2], vec![3], vec![1]]).unwrap()
    }

    #[test]
    fn entries_parse_in_group_order() {
        let es = catalogue_entries();
        assert_eq!(es.len(), 20);
        assert_eq!(es.iter().filter(|e| e.group == 1).count(), 1);
        assert_eq!(es.iter().filter(|e| e.group == 2).count(), 3);
        assert_eq!(es.iter().filter(|e| e.group == 3).count(), 16);
        let t1 = &es[0];
        assert_eq!(t1.vertices.len(), 8);
        assert!(t1.region.constraints.iter().any(|c| c.label == "R + R110 >= 3"));
    }

    #[test]
    fn cycle_vertex_scheme() {
        let t1 = catalogue_entry("n3-directed-cycle").unwrap();
        let v = t1.vertices.iter().find(|v| v.rate.to_vec() == [2, 0, 0, 1, 0, 1, 1].map(q_int).to_vec()).unwrap();
        let expect = LinearScheme::from_sums(2, 3, 1, &["x1 + x2 + k101 + k110", "x2 + x3 + k110 + k011"]).unwrap();
        assert_eq!(v.scheme, expect);
    }

    #[test]
    fn flipped_key_bit_is_localized() {
        let mut t1 = catalogue_entry("n3-directed-cycle").unwrap();
        let h = &mut t1.vertices[2].scheme.keys[0].h;
        let v = h.get(0, 0);
        h.set(0, 0, 1 - v);
        let rep = verify_entries(&[t1], 1 << 20);
        assert!(!rep.ok());
        assert!(rep.failures.iter().all(|f| f.entry == "n3-directed-cycle" && f.vertex == Some(2)));
    }

    #[test]
    fn pentagon_has_thirty_structures() {
        let got = feasible_structures_of_size(&pentagon_graph(), 3).unwrap();
        assert_eq!(got.len(), 30);
        let mut printed: Vec<KeyStructure> = pentagon_structure_classes().concat();
        printed.sort_by(|a, b| a.patterns().cmp(b.patterns()));
        printed.dedup();
        assert_eq!(printed, got);
    }

    #[test]
    fn size_zero_structures() {
        assert_eq!(feasible_structures_of_size(&Graph::complete(3), 0).unwrap().len(), 1);
        assert!(feasible_structures_of_size(&cycle(), 0).unwrap().is_empty());
        let ks = KeyStructure::parse_list("110,101,011", 3).unwrap();
        assert!(feasible_structures_of_size(&cycle(), 3).unwrap().contains(&ks));
    }

    #[test]
    fn search_finds_cycle_scheme() {
        let c = caps(&[("110", 1), ("101", 1), ("011", 1)], 3);
        let s = scalar_search(&cycle(), 2, 2, &c).unwrap();
        let found = s.found.unwrap();
        assert!(verify_private(&found, &cycle()).unwrap().is_ok());
        assert_eq!(found.r, 2);
        assert!(scalar_search(&cycle(), 2, 1, &c).unwrap().found.is_none());
    }

    #[test]
    fn pruning_keeps_verdicts() {
        let g = cycle();
        for (list, r) in [
            (vec![("110", 1), ("101", 1), ("011", 1)], 2),
            (vec![("110", 2), ("011", 1)], 2),
            (vec![("100", 1), ("010", 1), ("001", 1)], 2),
            (vec![("100", 1), ("010", 1), ("001", 1)], 3),
            (vec![("101", 1)], 2),
        ] {
            let c = caps(&list, 3);
            let a = scalar_search_with(&g, 2, r, &c, true).unwrap();
            let b = scalar_search_with(&g, 2, r, &c, false).unwrap();
            assert_eq!(a.found.is_some(), b.found.is_some(), "{list:?} r={r}");
            assert!(a.space <= b.space);
        }
    }

    #[test]
    fn search_agrees_with_verifier_on_small_spaces() {
        // every full-width assignment over F_2^2 with one key, compared with
        // the verifier one scheme at a time
        let g = Graph::new(2, &[vec![], vec![]]).unwrap();
        let c = caps(&[("10", 1), ("01", 1)], 2);
        let found = scalar_search_with(&g, 2, 2, &c, false).unwrap().found.is_some();
        let mut any = false;
        for code in 0..(1u32 << 8) {
            let col = |k: u32| vec![code >> (2 * k) & 1, code >> (2 * k + 1) & 1];
            let gs = vec![Mat::from_columns(2, 2, &[col(0)]), Mat::from_columns(2, 2, &[col(1)])];
            let keys = vec![
                KeyBlock { pattern: 0b01, h: Mat::from_columns(2, 2, &[col(2)]) },
                KeyBlock { pattern: 0b10, h: Mat::from_columns(2, 2, &[col(3)]) },
            ];
            let s = LinearScheme::new(2, 1, 2, gs, keys).unwrap();
            any |= verify_private(&s, &g).unwrap().is_ok();
        }
        assert_eq!(found, any);
    }

    #[test]
    fn four_user_fixture_matches_printed_spans() {
        // (unknown messages, foreign key patterns) per user, as printed
        let printed: [(&[usize], &[&str]); 4] = [
            (&[4], &["0101", "0110", "0011"]),
            (&[1, 3], &["1001", "1010", "0011"]),
            (&[4], &["1001", "1100", "0101"]),
            (&[2], &["1010", "1100", "0110"]),
        ];
        let g = gap_graph();
        let c = four_user_caps();
        for (i, (u, keys)) in printed.iter().enumerate() {
            let got_u: Vec<usize> = (0..4).filter(|&j| g.a(i) >> j & 1 == 0).map(|j| j + 1).collect();
            assert_eq!(&got_u, u, "user {}", i + 1);
            let mut got_k: Vec<String> =
                c.keys().filter(|&&b| b >> i & 1 == 0).map(|&b| pattern_string(b, 4)).collect();
            let mut want: Vec<String> = keys.iter().map(|s| s.to_string()).collect();
            got_k.sort();
            want.sort();
            assert_eq!(got_k, want, "user {}", i + 1);
        }
    }

    #[test]
    fn four_user_gap() {
        let rep = four_user_gap_demo(false).unwrap();
        assert!(rep.verdict.is_ok());
        assert_eq!(rep.rate, rep.expected);
        assert!(rep.q2.found.is_none());
        assert_eq!(rep.r3.found.as_ref().map(|s| s.r), Some(3));
        assert!(rep.holds());
        let relaxed: BTreeMap<u64, usize> = four_user_caps().keys().map(|&b| (b, 2)).collect();
        assert!(matches!(scalar_search(&gap_graph(), 2, 3, &relaxed), Err(Error::TooLarge(_))));
    }

    #[test]
    fn search_limits() {
        let g = cycle();
        assert!(matches!(scalar_search(&g, 4, 2, &BTreeMap::new()), Err(Error::Invalid(_))));
        assert!(matches!(scalar_search(&g, 2, 8, &BTreeMap::new()), Err(Error::TooLarge(_))));
        assert!(scalar_search(&g, 2, 2, &BTreeMap::from([(0b111, 1)])).is_err());
    }
}
