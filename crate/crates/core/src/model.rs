//! Domain types: side-information graphs, key patterns, rate tuples, linear
//! and multicast schemes, and their JSON file formats.
//!
//! Users are 1-based in every external format and 0-based internally. A key
//! pattern is stored as a bit mask with bit `i` set iff user `i+1` holds the
//! key; its string form puts user 1 leftmost, so `"110"` is the key of users
//! 1 and 2.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::gf::{is_prime, Mat};

pub type Q = BigRational;

/// Largest supported user count (patterns live in a u64).
pub const MAX_USERS: usize = 63;

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// `"p/q"`, or `"p"` when integral.
pub fn q_str(v: &Q) -> String {
    v.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Decimal rendering used by `--approx`.
pub fn q_approx(v: &Q) -> String {
    let scaled = (v * q_int(1000)).round().to_integer();
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let ip = &a / BigInt::from(1000);
    let fp = &a % BigInt::from(1000);
    format!("{}{}.{:03}", if neg { "-" } else { "" }, ip, fp)
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_members(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// 1-based member list of a mask.
pub fn mask_to_users(mask: u64) -> Vec<usize> {
    mask_members(mask).map(|i| i + 1).collect()
}

pub fn users_to_mask(users: &[usize], n: usize) -> Result<u64> {
    let mut m = 0u64;
    for &u in users {
        if u == 0 || u > n {
            return invalid(format!("user index {u} out of range 1..={n}"));
        }
        m |= 1 << (u - 1);
    }
    Ok(m)
}

pub fn pattern_string(mask: u64, n: usize) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a pattern string; `n` pins the expected length when known.
pub fn parse_pattern(s: &str, n: Option<usize>) -> Result<u64> {
    let s = s.trim();
    if s.is_empty() || s.len() > MAX_USERS || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Parse(format!("bad key pattern {s:?}")));
    }
    if let Some(n) = n {
        if s.len() != n {
            return Err(Error::Parse(format!("pattern {s:?} has length {}, expected {n}", s.len())));
        }
    }
    let m = s.bytes().enumerate().fold(0u64, |m, (i, b)| m | ((b == b'1') as u64) << i);
    if m == 0 || m == full_mask(s.len()) {
        return Err(Error::Invalid(format!("pattern {s:?} must contain both a 0 and a 1")));
    }
    Ok(m)
}

/// AK in natural mask order (for N=3: 100, 010, 110, 001, 101, 011).
pub fn all_patterns(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    (1..full_mask(n)).collect()
}

// ---------------------------------------------------------------------------

/// Directed side-information graph: user `i` holds the messages in `s_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    side: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    side_info: Vec<Vec<usize>>,
}

impl Graph {
    /// `side_info[i]` lists the (1-based) messages known to user `i+1`.
    pub fn new(n: usize, side_info: &[Vec<usize>]) -> Result<Graph> {
        if side_info.len() != n {
            return invalid(format!("side_info has {} entries for n = {n}", side_info.len()));
        }
        let mut side = Vec::with_capacity(n);
        for (i, s) in side_info.iter().enumerate() {
            if s.contains(&(i + 1)) {
                return invalid(format!("self-loop: user {} lists its own message", i + 1));
            }
            side.push(users_to_mask(s, n)?);
        }
        Graph::from_masks(n, side)
    }

    pub fn from_masks(n: usize, side: Vec<u64>) -> Result<Graph> {
        if n == 0 || n > MAX_USERS {
            return invalid(format!("number of users must be in 1..={MAX_USERS}, got {n}"));
        }
        if side.len() != n {
            return invalid("side mask count differs from n");
        }
        for (i, &s) in side.iter().enumerate() {
            if s >> i & 1 == 1 {
                return invalid(format!("self-loop: user {} lists its own message", i + 1));
            }
            if s & !full_mask(n) != 0 {
                return invalid(format!("user {} references a message outside 1..={n}", i + 1));
            }
        }
        Ok(Graph { n, side })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_masks(n, vec![0; n]).expect("valid size")
    }

    /// Every user knows every other message.
    pub fn complete(n: usize) -> Graph {
        let f = full_mask(n);
        Graph::from_masks(n, (0..n).map(|i| f & !(1 << i)).collect()).expect("valid size")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `s_i` as a mask, 0-based user.
    pub fn side(&self, i: usize) -> u64 {
        self.side[i]
    }

    pub fn sides(&self) -> &[u64] {
        &self.side
    }

    /// `A_i = s_i ∪ {i}` as a mask.
    pub fn a(&self, i: usize) -> u64 {
        self.side[i] | 1 << i
    }

    /// Whether user `i` knows message `j` (0-based).
    pub fn knows(&self, i: usize, j: usize) -> bool {
        self.side[i] >> j & 1 == 1
    }

    pub fn side_info(&self) -> Vec<Vec<usize>> {
        self.side.iter().map(|&s| mask_to_users(s)).collect()
    }

    pub fn a_sets(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| mask_to_users(self.a(i))).collect()
    }

    /// Ordered 0-based pairs `(i, j)` with `i ∉ A_j`, in lexicographic order.
    pub fn pair_masks(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.a(j) >> i & 1 == 0 {
                    v.push((i, j));
                }
            }
        }
        v
    }

    /// Derived sets: 1-based `A_i` lists and 1-based pairs `(i, j)` with `i ∉ A_j`.
    pub fn derived_sets(&self) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
        (self.a_sets(), self.pair_masks().into_iter().map(|(i, j)| (i + 1, j + 1)).collect())
    }

    /// Relabels users: user `i` becomes `perm[i]` (0-based).
    pub fn permute(&self, perm: &[usize]) -> Graph {
        let mut side = vec![0u64; self.n];
        for i in 0..self.n {
            side[perm[i]] = permute_mask(self.side[i], perm);
        }
        Graph { n: self.n, side }
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let f: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::new(f.n, &f.side_info)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(GraphFile { n: self.n, side_info: self.side_info() }).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }
}

pub fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    mask_members(mask).fold(0, |m, i| m | 1 << perm[i])
}

/// Parses a graph file's contents.
pub fn parse_graph(text: &str) -> Result<Graph> {
    Graph::parse(text)
}

// ---------------------------------------------------------------------------

/// A set of key patterns over `n` users.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyStructure {
    n: usize,
    patterns: Vec<u64>,
}

impl KeyStructure {
    pub fn new(n: usize, patterns: &[u64]) -> Result<KeyStructure> {
        let mut p = patterns.to_vec();
        p.sort_unstable();
        for w in p.windows(2) {
            if w[0] == w[1] {
                return invalid(format!("duplicate pattern {}", pattern_string(w[0], n)));
            }
        }
        for &b in &p {
            if b == 0 || b & !full_mask(n) != 0 || b == full_mask(n) {
                return invalid(format!("pattern mask {b:#b} is not a key pattern for {n} users"));
            }
        }
        Ok(KeyStructure { n, patterns: p })
    }

    /// All of AK.
    pub fn full(n: usize) -> KeyStructure {
        KeyStructure { n, patterns: all_patterns(n) }
    }

    /// Comma-separated pattern strings, e.g. `"110,101,011"`. An empty string
    /// is the empty structure.
    pub fn parse_list(text: &str, n: usize) -> Result<KeyStructure> {
        let ps: Result<Vec<u64>> =
            text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_pattern(s, Some(n))).collect();
        KeyStructure::new(n, &ps?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> &[u64] {
        &self.patterns
    }

    pub fn contains(&self, b: u64) -> bool {
        self.patterns.binary_search(&b).is_ok()
    }

    /// `KS_i`, the patterns that include 0-based user `i`.
    pub fn of_user(&self, i: usize) -> Vec<u64> {
        self.patterns.iter().copied().filter(|b| b >> i & 1 == 1).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.patterns.iter().map(|&b| pattern_string(b, self.n)).collect()
    }
}

impl fmt::Display for KeyStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(","))
    }
}

// ---------------------------------------------------------------------------

/// `(R, R_b : b)`; absent key rates are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateTuple {
    pub n: usize,
    pub r: Q,
    pub key_rates: BTreeMap<u64, Q>,
}

impl RateTuple {
    pub fn new(n: usize, r: Q) -> RateTuple {
        RateTuple { n, r, key_rates: BTreeMap::new() }
    }

    /// Sets a key rate; zero removes the entry.
    pub fn set(&mut self, b: u64, v: Q) {
        if v.is_zero() {
            self.key_rates.remove(&b);
        } else {
            self.key_rates.insert(b, v);
        }
    }

    pub fn key_rate(&self, b: u64) -> Q {
        self.key_rates.get(&b).cloned().unwrap_or_else(Q::zero)
    }

    pub fn sum_key_rate(&self) -> Q {
        self.key_rates.values().fold(Q::zero(), |a, v| a + v)
    }

    /// Tuple form `(R, R_b for b in AK order)`.
    pub fn to_vec(&self) -> Vec<Q> {
        let mut v = vec![self.r.clone()];
        v.extend(all_patterns(self.n).into_iter().map(|b| self.key_rate(b)));
        v
    }

    pub fn from_vec(n: usize, v: &[Q]) -> Result<RateTuple> {
        let ak = all_patterns(n);
        if v.len() != ak.len() + 1 {
            return invalid(format!("rate tuple needs {} entries, got {}", ak.len() + 1, v.len()));
        }
        let mut t = RateTuple::new(n, v[0].clone());
        for (b, x) in ak.into_iter().zip(&v[1..]) {
            t.set(b, x.clone());
        }
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r.is_negative() || self.key_rates.values().any(Signed::is_negative) {
            return invalid("rates must be non-negative");
        }
        Ok(())
    }

    pub fn to_value(&self) -> Value {
        let kr: serde_json::Map<String, Value> =
            self.key_rates.iter().map(|(&b, v)| (pattern_string(b, self.n), Value::String(q_str(v)))).collect();
        serde_json::json!({"R": q_str(&self.r), "key_rates": kr})
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    pub fn from_value(v: &Value, n: usize) -> Result<RateTuple> {
        let r = v.get("R").ok_or_else(|| Error::Parse("rate tuple lacks \"R\"".into()))?;
        let mut t = RateTuple::new(n, value_q(r)?);
        if let Some(kr) = v.get("key_rates") {
            let obj = kr.as_object().ok_or_else(|| Error::Parse("key_rates must be an object".into()))?;
            for (p, x) in obj {
                let b = parse_pattern(p, Some(n))?;
                if t.key_rates.contains_key(&b) {
                    return invalid(format!("duplicate key rate {p}"));
                }
                t.set(b, value_q(x)?);
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn parse(text: &str, n: usize) -> Result<RateTuple> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        RateTuple::from_value(&v, n)
    }
}

fn value_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(x) if x.is_i64() => Ok(q_int(x.as_i64().unwrap())),
        _ => Err(Error::Parse(format!("expected a rational string, got {v}"))),
    }
}

impl fmt::Display for RateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(q_str).collect();
        write!(f, "({})", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyBlock {
    pub pattern: u64,
    /// `r × w_b`
    pub h: Mat,
}

/// `M = Σ_i G_i X_i + Σ_b H_b K_b` over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    pub q: u32,
    pub n: usize,
    pub r: usize,
    pub g: Vec<Mat>,
    pub keys: Vec<KeyBlock>,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    q: u64,
    n: usize,
    r: usize,
    #[serde(rename = "G")]
    g: Vec<Vec<Vec<u64>>>,
    #[serde(default)]
    keys: Vec<KeyFile>,
}

#[derive(Serialize, Deserialize)]
struct KeyFile {
    pattern: String,
    #[serde(rename = "H")]
    h: Vec<Vec<u64>>,
}

fn mat_from_file(q: u32, rows: usize, cols: Option<usize>, data: &[Vec<u64>], what: &str) -> Result<Mat> {
    if data.len() != rows {
        return Err(Error::Dimension(format!("{what} has {} rows, expected {rows}", data.len())));
    }
    let width = match cols {
        Some(c) => c,
        None => data.first().map_or(0, Vec::len),
    };
    let mut m = Mat::zeros(q, rows, width);
    for (i, row) in data.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Dimension(format!("{what} row {} has {} entries, expected {width}", i + 1, row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= q as u64 {
                return invalid(format!("{what} entry {v} is not below q = {q}"));
            }
            m.set(i, j, v as u32);
        }
    }
    Ok(m)
}

impl LinearScheme {
    pub fn new(q: u32, n: usize, r: usize, g: Vec<Mat>, keys: Vec<KeyBlock>) -> Result<LinearScheme> {
        let s = LinearScheme { q, n, r, g, keys };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q as u64) {
            return invalid(format!("q = {} is not prime", self.q));
        }
        if self.n == 0 {
            return invalid("block length n must be at least 1");
        }
        let users = self.g.len();
        if users == 0 || users > MAX_USERS {
            return invalid(format!("scheme must have 1..={MAX_USERS} users, has {users}"));
        }
        for (i, g) in self.g.iter().enumerate() {
            if g.rows() != self.r || g.cols() != self.n || g.q() != self.q {
                return Err(Error::Dimension(format!(
                    "G_{} is {}x{} over GF({}), expected {}x{} over GF({})",
                    i + 1,
                    g.rows(),
                    g.cols(),
                    g.q(),
                    self.r,
                    self.n,
                    self.q
                )));
            }
        }
        let mut seen = Vec::new();
        for k in &self.keys {
            if k.pattern == 0 || k.pattern == full_mask(users) || k.pattern & !full_mask(users) != 0 {
                return invalid(format!("key mask {:#b} is not a pattern for {users} users", k.pattern));
            }
            if seen.contains(&k.pattern) {
                return invalid(format!("duplicate key pattern {}", pattern_string(k.pattern, users)));
            }
            seen.push(k.pattern);
            if k.h.rows() != self.r || k.h.q() != self.q {
                return Err(Error::Dimension(format!(
                    "H_{} has {} rows, expected {}",
                    pattern_string(k.pattern, users),
                    k.h.rows(),
                    self.r
                )));
            }
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.g.len()
    }

    pub fn key(&self, pattern: u64) -> Option<&KeyBlock> {
        self.keys.iter().find(|k| k.pattern == pattern)
    }

    pub fn width(&self, pattern: u64) -> usize {
        self.key(pattern).map_or(0, |k| k.h.cols())
    }

    pub fn total_key_width(&self) -> usize {
        self.keys.iter().map(|k| k.h.cols()).sum()
    }

    pub fn is_keyless(&self) -> bool {
        self.total_key_width() == 0
    }

    /// Key structure of patterns with positive width.
    pub fn key_structure(&self) -> KeyStructure {
        let p: Vec<u64> = self.keys.iter().filter(|k| k.h.cols() > 0).map(|k| k.pattern).collect();
        KeyStructure::new(self.num_users(), &p).expect("validated scheme")
    }

    /// Keyless scheme from its `r × N` generator `[G_1 … G_N]` (n = 1).
    pub fn keyless_scalar(m: &Mat) -> Result<LinearScheme> {
        let g = m.columns().into_iter().map(|c| Mat::from_columns(m.q(), m.rows(), &[c])).collect();
        LinearScheme::new(m.q(), 1, m.rows(), g, Vec::new())
    }

    pub fn parse(text: &str) -> Result<LinearScheme> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        LinearScheme::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<LinearScheme> {
        let f: SchemeFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if f.q > u32::MAX as u64 || !is_prime(f.q) {
            return invalid(format!("q = {} is not prime", f.q));
        }
        let q = f.q as u32;
        let users = f.g.len();
        let mut g = Vec::with_capacity(users);
        for (i, gi) in f.g.iter().enumerate() {
            g.push(mat_from_file(q, f.r, Some(f.n), gi, &format!("G_{}", i + 1))?);
        }
        let mut keys = Vec::with_capacity(f.keys.len());
        for k in &f.keys {
            let pattern = parse_pattern(&k.pattern, Some(users))?;
            let h = mat_from_file(q, f.r, None, &k.h, &format!("H_{}", k.pattern))?;
            keys.push(KeyBlock { pattern, h });
        }
        LinearScheme::new(q, f.n, f.r, g, keys)
    }

    pub fn to_value(&self) -> Value {
        let users = self.num_users();
        let to64 = |m: &Mat| -> Vec<Vec<u64>> {
            m.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
        };
        let f = SchemeFile {
            q: self.q as u64,
            n: self.n,
            r: self.r,
            g: self.g.iter().map(to64).collect(),
            keys: self
                .keys
                .iter()
                .map(|k| KeyFile { pattern: pattern_string(k.pattern, users), h: to64(&k.h) })
                .collect(),
        };
        serde_json::to_value(f).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    /// Builds a scheme from one expression per transmitted symbol.
    ///
    /// Terms: `x3` (coordinate 1 of message 3), `x3^2` (coordinate 2),
    /// `k101` (column 1 of key 101), `k'101` or `k101^2` (column 2). A term may
    /// carry a coefficient such as `2x1` over larger fields.
    pub fn from_sums(q: u32, users: usize, n: usize, sums: &[&str]) -> Result<LinearScheme> {
        let r = sums.len();
        let mut g = vec![Mat::zeros(q, r, n); users];
        let mut cols: BTreeMap<u64, Vec<(usize, usize, u32)>> = BTreeMap::new();
        for (row, sum) in sums.iter().enumerate() {
            for term in sum.split('+').map(str::trim).filter(|t| !t.is_empty()) {
                let digits = term.bytes().take_while(u8::is_ascii_digit).count();
                let coeff: u32 = if digits == 0 {
                    1
                } else {
                    term[..digits].parse().map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
                };
                let body = &term[digits..];
                let (base, power) = match body.split_once('^') {
                    Some((b, p)) => {
                        let p: usize = p.parse().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                        if p == 0 {
                            return Err(Error::Parse(format!("coordinates start at 1 in {term:?}")));
                        }
                        (b, p - 1)
                    }
                    None => (body, 0),
                };
                if let Some(idx) = base.strip_prefix('x') {
                    let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad message term {term:?}")))?;
                    if i == 0 || i > users || power >= n {
                        return invalid(format!("term {term:?} out of range"));
                    }
                    let v = (g[i - 1].get(row, power) + coeff) % q;
                    g[i - 1].set(row, power, v);
                } else if let Some(rest) = base.strip_prefix('k') {
                    let primes = rest.bytes().take_while(|&b| b == b'\'').count();
                    let pattern = parse_pattern(&rest[primes..], Some(users))?;
                    cols.entry(pattern).or_default().push((row, primes + power, coeff));
                } else {
                    return Err(Error::Parse(format!("unknown term {term:?}")));
                }
            }
        }
        let keys = cols
            .into_iter()
            .map(|(pattern, entries)| {
                let w = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
                let mut h = Mat::zeros(q, r, w);
                for (row, c, coeff) in entries {
                    let v = (h.get(row, c) + coeff) % q;
                    h.set(row, c, v);
                }
                KeyBlock { pattern, h }
            })
            .collect();
        LinearScheme::new(q, n, r, g, keys)
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionTerm {
    /// 0-based user
    pub user: usize,
    /// 0-based coordinate within the block
    pub coord: usize,
    pub coeff: u32,
}

/// One field symbol `M_k = Σ coeff · x_user^(coord)` sent to `recipients`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub recipients: u64,
    pub terms: Vec<SessionTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticastScheme {
    pub q: u32,
    pub n: usize,
    pub users: usize,
    pub sessions: Vec<Session>,
}

#[derive(Serialize, Deserialize)]
struct MulticastFile {
    q: u64,
    n: usize,
    users: usize,
    sessions: Vec<SessionFile>,
}

#[derive(Serialize, Deserialize)]
struct SessionFile {
    recipients: Vec<usize>,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    user: usize,
    coord: usize,
    coeff: u64,
}

impl MulticastScheme {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q as u64) {
            return invalid(format!("q = {} is not prime", self.q));
        }
        if self.n == 0 || self.users == 0 || self.users > MAX_USERS {
            return invalid("multicast scheme needs n ≥ 1 and a valid user count");
        }
        for (k, s) in self.sessions.iter().enumerate() {
            if s.recipients & !full_mask(self.users) != 0 {
                return invalid(format!("session {} has a recipient out of range", k + 1));
            }
            for t in &s.terms {
                if t.user >= self.users || t.coord >= self.n || t.coeff >= self.q {
                    return invalid(format!("session {} has an invalid term", k + 1));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<MulticastScheme> {
        let f: MulticastFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.q > u32::MAX as u64 {
            return invalid("q too large");
        }
        let mut sessions = Vec::new();
        for s in &f.sessions {
            let mut terms = Vec::new();
            for t in &s.terms {
                if t.user == 0 || t.coord == 0 || t.coeff > u32::MAX as u64 {
                    return invalid("session terms use 1-based user and coord");
                }
                terms.push(SessionTerm { user: t.user - 1, coord: t.coord - 1, coeff: t.coeff as u32 });
            }
            sessions.push(Session { recipients: users_to_mask(&s.recipients, f.users)?, terms });
        }
        let m = MulticastScheme { q: f.q as u32, n: f.n, users: f.users, sessions };
        m.validate()?;
        Ok(m)
    }

    pub fn to_value(&self) -> Value {
        let f = MulticastFile {
            q: self.q as u64,
            n: self.n,
            users: self.users,
            sessions: self
                .sessions
                .iter()
                .map(|s| SessionFile {
                    recipients: mask_to_users(s.recipients),
                    terms: s
                        .terms
                        .iter()
                        .map(|t| TermFile { user: t.user + 1, coord: t.coord + 1, coeff: t.coeff as u64 })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(f).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }
}
