//! Brute-force ground truth. Every realization of messages and keys is
//! enumerated (all equally likely); decodability is functional dependence and
//! privacy is exact conditional independence, tested by integer count
//! factorization `N(c,m,u)·N(c) = N(c,m)·N(c,u)` in every conditioning cell.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Graph, LinearScheme, MulticastScheme};

pub const DEFAULT_STATE_LIMIT: u64 = 1 << 28;

/// `PIC_STATE_LIMIT` if set and valid, else the default.
pub fn state_limit_from_env() -> u64 {
    std::env::var("PIC_STATE_LIMIT").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_STATE_LIMIT)
}

/// A conditioning cell where the counts fail to factorize. Values are listed
/// in variable order; `cell` holds the conditioning variables, `observed` the
/// symbols seen by the user and `secret` the protected messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakWitness {
    pub cell: Vec<u32>,
    pub observed: Vec<u32>,
    pub secret: Vec<u32>,
    pub n_cell_obs_secret: u64,
    pub n_cell: u64,
    pub n_cell_obs: u64,
    pub n_cell_secret: u64,
}

impl LeakWitness {
    /// True iff the cited counts indeed fail to factorize.
    pub fn confirms(&self) -> bool {
        self.n_cell_obs_secret as u128 * self.n_cell as u128 != self.n_cell_obs as u128 * self.n_cell_secret as u128
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leak {
    None,
    Leaks(LeakWitness),
}

impl Leak {
    pub fn is_none(&self) -> bool {
        matches!(self, Leak::None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub decodable: bool,
    /// 1-based users that cannot decode.
    pub undecodable: Vec<usize>,
    /// One entry per user.
    pub leakage: Vec<Leak>,
    pub enumerated_states: u64,
}

impl OracleReport {
    pub fn first_undecodable(&self) -> Option<usize> {
        self.undecodable.first().copied()
    }

    pub fn leak_free(&self) -> bool {
        self.leakage.iter().all(Leak::is_none)
    }

    pub fn clean(&self) -> bool {
        self.decodable && self.leak_free()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakPair {
    /// 1-based user `i` and message `j ∉ A_i`.
    pub user: usize,
    pub message: usize,
    pub leak: Leak,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakReport {
    pub decodable: bool,
    pub undecodable: Vec<usize>,
    pub pairs: Vec<WeakPair>,
    pub enumerated_states: u64,
}

impl WeakReport {
    pub fn clean(&self) -> bool {
        self.decodable && self.pairs.iter().all(|p| p.leak.is_none())
    }
}

// ---------------------------------------------------------------------------

struct Space {
    q: u32,
    dims: usize,
    states: u64,
}

impl Space {
    fn new(q: u32, dims: usize, limit: u64) -> Result<Space> {
        let mut states: u64 = 1;
        for _ in 0..dims {
            states = states
                .checked_mul(q as u64)
                .filter(|&s| s <= limit)
                .ok_or_else(|| Error::TooLarge(format!("{q}^{dims} states exceed the limit {limit}")))?;
        }
        if states > limit {
            return Err(Error::TooLarge(format!("{q}^{dims} states exceed the limit {limit}")));
        }
        Ok(Space { q, dims, states })
    }

    /// Calls `f` on every digit vector in lexicographic order.
    fn for_each(&self, mut f: impl FnMut(&[u32])) {
        let mut digits = vec![0u32; self.dims];
        for _ in 0..self.states {
            f(&digits);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < self.q {
                    break;
                }
                *d = 0;
            }
        }
    }
}

fn code(q: u32, vals: impl Iterator<Item = u32>) -> u64 {
    vals.fold(0u64, |a, v| a.wrapping_mul(q as u64).wrapping_add(v as u64))
}

fn decode(q: u32, mut c: u64, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for slot in v.iter_mut().rev() {
        *slot = (c % q as u64) as u32;
        c /= q as u64;
    }
    v
}

fn fits(q: u32, len: usize) -> bool {
    u32::try_from(len).ok().and_then(|l| (q as u64).checked_pow(l)).is_some()
}

/// One user's view: conditioning variables, protected variables, and the
/// variables that must be recovered. `observe` maps a state to the symbols
/// the user receives.
struct View<'a> {
    cond: Vec<usize>,
    secret: Vec<usize>,
    target: Vec<usize>,
    obs_len: usize,
    observe: &'a (dyn Fn(&[u32]) -> u64 + Sync),
}

struct ViewResult {
    decodable: bool,
    leak: Leak,
}

fn analyze(space: &Space, v: &View<'_>) -> ViewResult {
    let q = space.q;
    let mut decoder: HashMap<(u64, u64), u64> = HashMap::new();
    let mut decodable = true;
    let mut n_c: HashMap<u64, u64> = HashMap::new();
    let mut n_cm: HashMap<(u64, u64), u64> = HashMap::new();
    let mut n_cu: HashMap<(u64, u64), u64> = HashMap::new();
    let mut n_cmu: HashMap<(u64, u64, u64), u64> = HashMap::new();
    space.for_each(|d| {
        let m = (v.observe)(d);
        let c = code(q, v.cond.iter().map(|&k| d[k]));
        let u = code(q, v.secret.iter().map(|&k| d[k]));
        if !v.target.is_empty() {
            let t = code(q, v.target.iter().map(|&k| d[k]));
            let e = decoder.entry((m, c)).or_insert(t);
            if *e != t {
                decodable = false;
            }
        }
        *n_c.entry(c).or_default() += 1;
        *n_cm.entry((c, m)).or_default() += 1;
        *n_cu.entry((c, u)).or_default() += 1;
        *n_cmu.entry((c, m, u)).or_default() += 1;
    });

    let mut secrets: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    for (&(c, u), &k) in &n_cu {
        secrets.entry(c).or_default().push((u, k));
    }
    for list in secrets.values_mut() {
        list.sort_unstable();
    }
    let mut obs: Vec<(&(u64, u64), &u64)> = n_cm.iter().collect();
    obs.sort_unstable();
    let mut leak = Leak::None;
    'outer: for (&(c, m), &ncm) in obs {
        let nc = n_c[&c];
        for &(u, ncu) in &secrets[&c] {
            let ncmu = n_cmu.get(&(c, m, u)).copied().unwrap_or(0);
            if ncmu as u128 * nc as u128 != ncm as u128 * ncu as u128 {
                leak = Leak::Leaks(LeakWitness {
                    cell: decode(q, c, v.cond.len()),
                    observed: decode(q, m, v.obs_len),
                    secret: decode(q, u, v.secret.len()),
                    n_cell_obs_secret: ncmu,
                    n_cell: nc,
                    n_cell_obs: ncm,
                    n_cell_secret: ncu,
                });
                break 'outer;
            }
        }
    }
    ViewResult { decodable, leak }
}

fn msg_vars(users: u64, n: usize) -> Vec<usize> {
    crate::model::mask_members(users).flat_map(|i| (0..n).map(move |c| i * n + c)).collect()
}

fn check_users(users: usize, g: &Graph) -> Result<()> {
    if users != g.n() {
        return Err(Error::Dimension(format!("scheme has {users} users, graph has {}", g.n())));
    }
    Ok(())
}

/// Variable columns of a linear scheme: all message coordinates, then key
/// columns in key order. Returns the columns and, per key, its variable range.
fn scheme_columns(s: &LinearScheme) -> (Vec<Vec<u32>>, Vec<(u64, std::ops::Range<usize>)>) {
    let mut cols = Vec::new();
    for g in &s.g {
        cols.extend(g.columns());
    }
    let mut ranges = Vec::new();
    for k in &s.keys {
        let start = cols.len();
        cols.extend(k.h.columns());
        ranges.push((k.pattern, start..cols.len()));
    }
    (cols, ranges)
}

fn linear_observer(s: &LinearScheme, cols: Vec<Vec<u32>>) -> impl Fn(&[u32]) -> u64 + Sync {
    let q = s.q;
    let r = s.r;
    move |d: &[u32]| {
        let mut m = vec![0u64; r];
        for (k, &x) in d.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (mi, &c) in m.iter_mut().zip(&cols[k]) {
                *mi += x as u64 * c as u64;
            }
        }
        code(q, m.into_iter().map(|v| (v % q as u64) as u32))
    }
}

/// Exhaustive check of a linear scheme with keys.
pub fn oracle_check_private(s: &LinearScheme, g: &Graph, state_limit: u64) -> Result<OracleReport> {
    check_users(s.num_users(), g)?;
    if !fits(s.q, s.r) {
        return Err(Error::TooLarge("transmission too long to index".into()));
    }
    let n = s.n;
    let (cols, ranges) = scheme_columns(s);
    let space = Space::new(s.q, cols.len(), state_limit)?;
    let observe = linear_observer(s, cols);
    let results: Vec<ViewResult> = (0..g.n())
        .into_par_iter()
        .map(|i| {
            let mut cond = msg_vars(g.side(i), n);
            for (b, r) in &ranges {
                if b >> i & 1 == 1 {
                    cond.extend(r.clone());
                }
            }
            let view = View {
                cond,
                secret: msg_vars(crate::model::full_mask(g.n()) & !g.a(i), n),
                target: msg_vars(1 << i, n),
                obs_len: s.r,
                observe: &observe,
            };
            analyze(&space, &view)
        })
        .collect();
    Ok(report(results, space.states))
}

fn report(results: Vec<ViewResult>, states: u64) -> OracleReport {
    let undecodable: Vec<usize> =
        results.iter().enumerate().filter(|(_, r)| !r.decodable).map(|(i, _)| i + 1).collect();
    OracleReport {
        decodable: undecodable.is_empty(),
        undecodable,
        leakage: results.into_iter().map(|r| r.leak).collect(),
        enumerated_states: states,
    }
}

/// Exhaustive weak-privacy check of a keyless linear scheme: for every user
/// `i` and `j ∉ A_i`, `M` must be independent of `X_j` given `X_{s_i}`.
pub fn oracle_check_weak(s: &LinearScheme, g: &Graph, state_limit: u64) -> Result<WeakReport> {
    check_users(s.num_users(), g)?;
    if !s.is_keyless() {
        return Err(Error::Invalid("weak-privacy oracle takes a keyless scheme".into()));
    }
    if !fits(s.q, s.r) {
        return Err(Error::TooLarge("transmission too long to index".into()));
    }
    let n = s.n;
    let (cols, _) = scheme_columns(s);
    let space = Space::new(s.q, cols.len(), state_limit)?;
    let observe = linear_observer(s, cols);
    let mut jobs = Vec::new();
    for i in 0..g.n() {
        jobs.push((i, None));
        for j in (0..g.n()).filter(|&j| g.a(i) >> j & 1 == 0) {
            jobs.push((i, Some(j)));
        }
    }
    let results: Vec<ViewResult> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let view = View {
                cond: msg_vars(g.side(i), n),
                secret: j.map_or_else(Vec::new, |j| msg_vars(1 << j, n)),
                target: if j.is_none() { msg_vars(1 << i, n) } else { Vec::new() },
                obs_len: s.r,
                observe: &observe,
            };
            analyze(&space, &view)
        })
        .collect();
    let mut undecodable = Vec::new();
    let mut pairs = Vec::new();
    for (&(i, j), r) in jobs.iter().zip(results) {
        match j {
            None if !r.decodable => undecodable.push(i + 1),
            None => {}
            Some(j) => pairs.push(WeakPair { user: i + 1, message: j + 1, leak: r.leak }),
        }
    }
    Ok(WeakReport { decodable: undecodable.is_empty(), undecodable, pairs, enumerated_states: space.states })
}

/// Exhaustive check of a multicast scheme: user `i` sees only the sessions
/// addressed to it.
pub fn oracle_check_multicast(ms: &MulticastScheme, g: &Graph, state_limit: u64) -> Result<OracleReport> {
    ms.validate()?;
    check_users(ms.users, g)?;
    let n = ms.n;
    let q = ms.q;
    let space = Space::new(q, ms.users * n, state_limit)?;
    let payload = |d: &[u32], k: usize| -> u32 {
        let s: u64 = ms.sessions[k].terms.iter().map(|t| t.coeff as u64 * d[t.user * n + t.coord] as u64).sum();
        (s % q as u64) as u32
    };
    let results: Vec<ViewResult> = (0..g.n())
        .into_par_iter()
        .map(|i| {
            let mine: Vec<usize> =
                (0..ms.sessions.len()).filter(|&k| ms.sessions[k].recipients >> i & 1 == 1).collect();
            let observe = |d: &[u32]| code(q, mine.iter().map(|&k| payload(d, k)));
            let view = View {
                cond: msg_vars(g.side(i), n),
                secret: msg_vars(crate::model::full_mask(g.n()) & !g.a(i), n),
                target: msg_vars(1 << i, n),
                obs_len: mine.len(),
                observe: &observe,
            };
            if !fits(q, mine.len()) {
                return Err(Error::TooLarge("too many sessions to index".into()));
            }
            Ok(analyze(&space, &view))
        })
        .collect::<Result<_>>()?;
    Ok(report(results, space.states))
}
