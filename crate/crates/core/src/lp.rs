//! Exact rational linear programming: two-phase primal simplex on a sparse
//! tableau, certified feasibility checks, and point checks against a
//! constraint system.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{q_str, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub rel: Rel,
    pub rhs: Q,
    pub label: String,
}

impl Constraint {
    pub fn lhs(&self, x: &[Q]) -> Q {
        self.coeffs.iter().fold(Q::zero(), |a, (j, c)| a + c * &x[*j])
    }
}

/// Minimize `objective · x` subject to the constraints and variable bounds.
/// Variables start with lower bound 0 and no upper bound.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    names: Vec<String>,
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    pub objective: Vec<(usize, Q)>,
    pub objective_constant: Q,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
    pub fn point(&self) -> Option<&[Q]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal { .. } => "optimal",
            LpOutcome::Infeasible => "infeasible",
            LpOutcome::Unbounded => "unbounded",
        }
    }
}

/// A constraint of the system: a row or a variable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Item {
    Row(usize),
    Lower(usize),
    Upper(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCheck {
    pub satisfied: bool,
    pub violated: Vec<Item>,
    pub tight: Vec<Item>,
}

impl LpProblem {
    pub fn new() -> LpProblem {
        LpProblem::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.lower.push(Some(Q::zero()));
        self.upper.push(None);
        self.names.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn lower(&self, j: usize) -> Option<&Q> {
        self.lower[j].as_ref()
    }

    pub fn upper(&self, j: usize) -> Option<&Q> {
        self.upper[j].as_ref()
    }

    /// `None` makes the variable unbounded on that side.
    pub fn set_bounds(&mut self, j: usize, lower: Option<Q>, upper: Option<Q>) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Q)>, rel: Rel, rhs: Q, label: impl Into<String>) -> usize {
        let mut merged: Vec<(usize, Q)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|e| e.0);
        for (j, c) in sorted {
            assert!(j < self.names.len(), "constraint references undeclared variable {j}");
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|e| !e.1.is_zero());
        self.constraints.push(Constraint { coeffs: merged, rel, rhs, label: label.into() });
        self.constraints.len() - 1
    }

    pub fn minimize(&mut self, objective: Vec<(usize, Q)>) {
        self.objective = objective;
    }

    pub fn objective_at(&self, x: &[Q]) -> Q {
        self.objective.iter().fold(self.objective_constant.clone(), |a, (j, c)| a + c * &x[*j])
    }

    /// Plain-text dump, `min c·x s.t. ...`.
    pub fn dump(&self) -> String {
        let term = |coeffs: &[(usize, Q)]| -> String {
            if coeffs.is_empty() {
                return "0".into();
            }
            coeffs.iter().map(|(j, c)| format!("{} {}", q_str(c), self.names[*j])).collect::<Vec<_>>().join(" + ")
        };
        let mut s = format!("min {}\ns.t.\n", term(&self.objective));
        for c in &self.constraints {
            let _ = writeln!(s, "  {}: {} {} {}", c.label, term(&c.coeffs), c.rel.symbol(), q_str(&c.rhs));
        }
        for j in 0..self.names.len() {
            let lo = self.lower[j].as_ref().map_or("-inf".to_string(), q_str);
            let hi = self.upper[j].as_ref().map_or("inf".to_string(), q_str);
            let _ = writeln!(s, "  {lo} <= {} <= {hi}", self.names[j]);
        }
        s
    }

    pub fn label(&self, item: Item) -> String {
        match item {
            Item::Row(i) => self.constraints[i].label.clone(),
            Item::Lower(j) => format!("{} >= lower", self.names[j]),
            Item::Upper(j) => format!("{} <= upper", self.names[j]),
        }
    }

    /// Normal vector of a constraint or bound.
    pub fn normal(&self, item: Item) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.num_vars()];
        match item {
            Item::Row(i) => {
                for (j, c) in &self.constraints[i].coeffs {
                    v[*j] = c.clone();
                }
            }
            Item::Lower(j) | Item::Upper(j) => v[j] = Q::one(),
        }
        v
    }
}

pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    Standard::build(p).solve(p.constraints.len())
}

/// Exact evaluation of every row and bound at `point`.
pub fn lp_check_point(p: &LpProblem, point: &[Q]) -> Result<PointCheck> {
    if point.len() != p.num_vars() {
        return Err(Error::Invalid(format!("point assigns {} of {} variables", point.len(), p.num_vars())));
    }
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    for j in 0..p.num_vars() {
        if let Some(l) = &p.lower[j] {
            match point[j].cmp(l) {
                Ordering::Less => violated.push(Item::Lower(j)),
                Ordering::Equal => tight.push(Item::Lower(j)),
                Ordering::Greater => {}
            }
        }
        if let Some(u) = &p.upper[j] {
            match point[j].cmp(u) {
                Ordering::Greater => violated.push(Item::Upper(j)),
                Ordering::Equal => tight.push(Item::Upper(j)),
                Ordering::Less => {}
            }
        }
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let ord = c.lhs(point).cmp(&c.rhs);
        let ok = match c.rel {
            Rel::Le => ord != Ordering::Greater,
            Rel::Ge => ord != Ordering::Less,
            Rel::Eq => ord == Ordering::Equal,
        };
        if !ok {
            violated.push(Item::Row(i));
        } else if ord == Ordering::Equal {
            tight.push(Item::Row(i));
        }
    }
    violated.sort();
    tight.sort();
    Ok(PointCheck { satisfied: violated.is_empty(), violated, tight })
}

/// True iff the tight constraints at `point` have normals of rank `dim`.
pub fn vertex_rank_check(p: &LpProblem, point: &[Q], dim: usize) -> Result<bool> {
    let chk = lp_check_point(p, point)?;
    if !chk.satisfied {
        let names: Vec<String> = chk.violated.iter().map(|&i| p.label(i)).collect();
        return Err(Error::Invalid(format!("point violates {}", names.join(", "))));
    }
    let normals: Vec<Vec<Q>> = chk.tight.iter().map(|&i| p.normal(i)).collect();
    Ok(rational_rank(normals) == dim)
}

/// Rank of a list of rational row vectors.
pub fn rational_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for k in c..cols {
                let d = &f * &pivot[k];
                row[k] -= d;
            }
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Standard form: columns are shifted/split structural variables, then slack
// and artificial columns; every row has a non-negative right-hand side.

enum Col {
    Shift(usize),
    Pos(usize),
    Neg(usize),
}

type Row = Vec<(usize, Q)>;

struct Standard {
    cols: Vec<Col>,
    n_struct: usize,
    n_cols: usize,
    first_art: usize,
    rows: Vec<Row>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    cost: Vec<Q>,
    cost_const: Q,
    shift: Vec<Q>,
    n_orig: usize,
    /// Per row: the source constraint and the sign it was multiplied by
    /// (`None` for upper-bound rows), and its slack and artificial columns.
    origin: Vec<Option<(usize, bool)>>,
    slack: Vec<Option<usize>>,
    art: Vec<Option<usize>>,
}

fn row_get(row: &Row, c: usize) -> Option<&Q> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

/// `a - f·b` on sparse rows.
fn row_axpy(a: &Row, f: &Q, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(k).map_or(usize::MAX, |e| e.0);
        match ca.cmp(&cb) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let v = -(f * &b[k].1);
                if !v.is_zero() {
                    out.push((cb, v));
                }
                k += 1;
            }
            Ordering::Equal => {
                let v = &a[i].1 - f * &b[k].1;
                if !v.is_zero() {
                    out.push((ca, v));
                }
                i += 1;
                k += 1;
            }
        }
    }
    out
}

/// Outcome of phase 1 alone: a feasible point, or dual multipliers per
/// source constraint proving infeasibility.
enum Phase1 {
    Feasible(Vec<Q>),
    Infeasible(Vec<Q>),
}

/// Consecutive degenerate pivots tolerated before switching from the
/// steepest reduced cost to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

impl Standard {
    fn build(p: &LpProblem) -> Standard {
        let n = p.num_vars();
        let mut cols = Vec::new();
        // structural column(s) for each original variable, with the shift
        let mut map: Vec<Vec<(usize, Q)>> = Vec::with_capacity(n);
        let mut shift = vec![Q::zero(); n];
        for j in 0..n {
            match &p.lower[j] {
                Some(l) => {
                    shift[j] = l.clone();
                    map.push(vec![(cols.len(), Q::one())]);
                    cols.push(Col::Shift(j));
                }
                None => {
                    map.push(vec![(cols.len(), Q::one()), (cols.len() + 1, -Q::one())]);
                    cols.push(Col::Pos(j));
                    cols.push(Col::Neg(j));
                }
            }
        }
        let n_struct = cols.len();

        // (row over structural columns, rel, rhs, source)
        let mut raw: Vec<(Vec<(usize, Q)>, Rel, Q, Option<usize>)> = Vec::new();
        let lift = |coeffs: &[(usize, Q)]| -> (Vec<(usize, Q)>, Q) {
            let mut row = Vec::new();
            let mut off = Q::zero();
            for (j, c) in coeffs {
                off += c * &shift[*j];
                for (col, s) in &map[*j] {
                    row.push((*col, c * s));
                }
            }
            row.sort_by_key(|e| e.0);
            (row, off)
        };
        for (i, c) in p.constraints.iter().enumerate() {
            let (row, off) = lift(&c.coeffs);
            raw.push((row, c.rel, &c.rhs - off, Some(i)));
        }
        for j in 0..n {
            if let Some(u) = &p.upper[j] {
                let (row, off) = lift(&[(j, Q::one())]);
                raw.push((row, Rel::Le, u - off, None));
            }
        }

        // sign-normalize; zero-rhs equalities become two inequalities
        let mut norm: Vec<(Vec<(usize, Q)>, Rel, Q, Option<(usize, bool)>)> = Vec::new();
        for (row, rel, rhs, src) in raw {
            let negated = || row.iter().map(|(c, v)| (*c, -v)).collect::<Vec<_>>();
            if rel == Rel::Eq && Zero::is_zero(&rhs) {
                norm.push((negated(), Rel::Le, Q::zero(), src.map(|i| (i, true))));
                norm.push((row, Rel::Le, Q::zero(), src.map(|i| (i, false))));
                continue;
            }
            if Signed::is_negative(&rhs) || (Zero::is_zero(&rhs) && rel == Rel::Ge) {
                let rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
                norm.push((negated(), rel, -rhs, src.map(|i| (i, true))));
            } else {
                norm.push((row, rel, rhs, src.map(|i| (i, false))));
            }
        }

        let n_slack = norm.iter().filter(|r| r.1 != Rel::Eq).count();
        let first_art = n_struct + n_slack;
        let mut next_slack = n_struct;
        let mut next_art = first_art;
        let m = norm.len();
        let (mut rows, mut rhs, mut basis) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
        let (mut origin, mut slack, mut art) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
        for (qrow, rel, b, src) in norm {
            let mut row: Row = qrow.iter().map(|(c, v)| (*c, v.clone())).collect();
            match rel {
                Rel::Le => {
                    row.push((next_slack, Q::one()));
                    basis.push(next_slack);
                    slack.push(Some(next_slack));
                    art.push(None);
                    next_slack += 1;
                }
                Rel::Ge => {
                    row.push((next_slack, -Q::one()));
                    slack.push(Some(next_slack));
                    next_slack += 1;
                    row.push((next_art, Q::one()));
                    basis.push(next_art);
                    art.push(Some(next_art));
                    next_art += 1;
                }
                Rel::Eq => {
                    row.push((next_art, Q::one()));
                    basis.push(next_art);
                    slack.push(None);
                    art.push(Some(next_art));
                    next_art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
            origin.push(src);
        }

        let mut cost = vec![Q::zero(); next_art];
        let mut cost_const = p.objective_constant.clone();
        for (j, c) in &p.objective {
            cost_const += c * &shift[*j];
            for (col, s) in &map[*j] {
                cost[*col] += c * s;
            }
        }

        Standard {
            cols,
            n_struct,
            n_cols: next_art,
            first_art,
            rows,
            rhs,
            basis,
            cost,
            cost_const,
            shift,
            n_orig: n,
            origin,
            slack,
            art,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, d: &mut [Q], obj: &mut Q) {
        let a = row_get(&self.rows[r], c).expect("pivot on nonzero").clone();
        if !a.is_one() {
            for e in self.rows[r].iter_mut() {
                e.1 /= &a;
            }
            self.rhs[r] /= &a;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let Some(f) = row_get(&self.rows[i], c).cloned() else { continue };
            self.rows[i] = row_axpy(&self.rows[i], &f, &prow);
            self.rhs[i] -= &f * &prhs;
        }
        let f = d[c].clone();
        if !f.is_zero() {
            for (col, v) in &prow {
                d[*col] -= &f * v;
            }
            *obj -= &f * &prhs;
        }
        d[c] = Q::zero();
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Minimizes with reduced costs `d` over columns `< limit`; `obj` tracks
    /// the negated objective value. Returns false when unbounded.
    fn run(&mut self, d: &mut [Q], obj: &mut Q, limit: usize) -> bool {
        let mut streak = 0;
        loop {
            let entering = if streak < DEGENERATE_STREAK {
                let mut best: Option<usize> = None;
                for j in 0..limit {
                    if d[j].is_negative() && best.is_none_or(|b| d[j] < d[b]) {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..limit).find(|&j| d[j].is_negative())
            };
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let Some(a) = row_get(&self.rows[i], c) else { continue };
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.cmp(br) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = best else { return false };
            if ratio.is_zero() {
                streak += 1;
            } else {
                streak = 0;
            }
            self.pivot(r, c, d, obj);
        }
    }

    /// Phase 1. On infeasibility returns multipliers `y` per source
    /// constraint read off the final reduced costs.
    fn phase1(&mut self, n_constraints: usize) -> std::result::Result<(), Vec<Q>> {
        let art_rows: Vec<usize> = (0..self.rows.len()).filter(|&i| self.basis[i] >= self.first_art).collect();
        if art_rows.is_empty() {
            return Ok(());
        }
        let mut d = vec![Q::zero(); self.n_cols];
        let mut w = Q::zero();
        for &i in &art_rows {
            for (c, v) in &self.rows[i] {
                if *c < self.first_art {
                    d[*c] -= v;
                }
            }
            w -= &self.rhs[i];
        }
        let limit = self.n_cols;
        self.run(&mut d, &mut w, limit);
        if !w.is_zero() {
            let mut y = vec![Q::zero(); n_constraints];
            for k in 0..self.origin.len() {
                let Some((src, negated)) = self.origin[k] else { continue };
                let yk = match (self.art[k], self.slack[k]) {
                    (Some(a), _) => Q::one() - &d[a],
                    (None, Some(s)) => -&d[s],
                    (None, None) => unreachable!("every row has a slack or an artificial"),
                };
                let yk = if negated { -yk } else { yk };
                y[src] += yk;
            }
            return Err(y);
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_art {
                let c = self.rows[i].iter().find(|e| e.0 < self.first_art).map(|e| e.0);
                match c {
                    Some(c) => {
                        let mut dd = vec![Q::zero(); self.n_cols];
                        let mut ww = Q::zero();
                        self.pivot(i, c, &mut dd, &mut ww);
                    }
                    None => {
                        self.rows.swap_remove(i);
                        self.rhs.swap_remove(i);
                        self.basis.swap_remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn point(&self) -> Vec<Q> {
        let mut xs = vec![Q::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                xs[b] = self.rhs[i].clone();
            }
        }
        let mut point: Vec<Q> = self.shift.to_vec();
        for (k, col) in self.cols.iter().enumerate() {
            match col {
                Col::Shift(j) | Col::Pos(j) => point[*j] += &xs[k],
                Col::Neg(j) => point[*j] -= &xs[k],
            }
        }
        debug_assert_eq!(point.len(), self.n_orig);
        point
    }

    fn feasibility(mut self, n_constraints: usize) -> Phase1 {
        match self.phase1(n_constraints) {
            Ok(()) => Phase1::Feasible(self.point()),
            Err(y) => Phase1::Infeasible(y),
        }
    }

    /// Phase 2 after a successful phase 1: `Some(negated objective)` or
    /// `None` when unbounded.
    fn phase2(&mut self) -> Option<Q> {
        // reduced costs d_j = c_j - Σ c_B(i) a_ij, obj = -Σ c_B(i) rhs_i
        let mut d = self.cost.clone();
        let mut obj = Q::zero();
        for i in 0..self.rows.len() {
            let cb = self.cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (c, v) in &self.rows[i] {
                d[*c] -= &cb * v;
            }
            obj -= &cb * &self.rhs[i];
        }
        let limit = self.first_art;
        self.run(&mut d, &mut obj, limit).then_some(obj)
    }
}

impl Standard {
    fn solve(mut self, n_constraints: usize) -> LpOutcome {
        if self.phase1(n_constraints).is_err() {
            return LpOutcome::Infeasible;
        }
        let Some(obj) = self.phase2() else { return LpOutcome::Unbounded };
        let value = &self.cost_const - obj;
        LpOutcome::Optimal { value, point: self.point() }
    }
}

/// Closest rational with a small denominator, when one lies within `tol`.
pub fn rationalize(x: f64, tol: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        (h0, h1) = (h1, a * h1 + h0);
        (k0, k1) = (k1, a * k1 + k0);
        if k1 > 1_000_000_000 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Q::new(h1.into(), k1.into()));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    ((x - h1 as f64 / k1 as f64).abs() <= tol).then(|| Q::new(h1.into(), k1.into()))
}

/// Exact feasibility verdict with a certificate either way.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasible {
    /// A point satisfying every row and bound.
    Point(Vec<Q>),
    /// Multipliers per constraint for which [`farkas_certifies`] holds.
    Farkas(Vec<Q>),
}

/// True iff `y` proves the system infeasible: `y_i ≥ 0` on `≥` rows,
/// `y_i ≤ 0` on `≤` rows, and the largest value of `(Σ y_i a_i)·x` over the
/// variable bounds stays strictly below `Σ y_i b_i`.
pub fn farkas_certifies(p: &LpProblem, y: &[Q]) -> bool {
    if y.len() != p.constraints.len() {
        return false;
    }
    let mut z = vec![Q::zero(); p.num_vars()];
    let mut yb = Q::zero();
    for (c, yi) in p.constraints.iter().zip(y) {
        if Zero::is_zero(yi) {
            continue;
        }
        let ok = match c.rel {
            Rel::Ge => Signed::is_positive(yi),
            Rel::Le => Signed::is_negative(yi),
            Rel::Eq => true,
        };
        if !ok {
            return false;
        }
        for (j, a) in &c.coeffs {
            z[*j] += yi * a;
        }
        yb += yi * &c.rhs;
    }
    let mut top = Q::zero();
    for (j, zj) in z.iter().enumerate() {
        let bound = if Signed::is_positive(zj) {
            p.upper[j].as_ref()
        } else if Signed::is_negative(zj) {
            p.lower[j].as_ref()
        } else {
            continue;
        };
        match bound {
            Some(b) => top += zj * b,
            None => return false,
        }
    }
    top < yb
}

fn float_bounds(lo: Option<&Q>, hi: Option<&Q>) -> (f64, f64) {
    let f = |q: &Q| q.to_f64().expect("finite");
    (lo.map_or(f64::NEG_INFINITY, f), hi.map_or(f64::INFINITY, f))
}

fn float_rel(rel: Rel) -> microlp::ComparisonOp {
    match rel {
        Rel::Le => microlp::ComparisonOp::Le,
        Rel::Ge => microlp::ComparisonOp::Ge,
        Rel::Eq => microlp::ComparisonOp::Eq,
    }
}

/// Floating-point feasibility: `Ok(point)` or `Err(())` when infeasible,
/// `None` when the float solver gives up.
fn float_point(p: &LpProblem) -> Option<std::result::Result<Vec<f64>, ()>> {
    use microlp::{OptimizationDirection, Problem};
    let mut fp = Problem::new(OptimizationDirection::Minimize);
    let mut cost = vec![0.0; p.num_vars()];
    for (j, c) in &p.objective {
        cost[*j] += c.to_f64().expect("finite");
    }
    let vars: Vec<_> = (0..p.num_vars()).map(|j| fp.add_var(cost[j], float_bounds(p.lower(j), p.upper(j)))).collect();
    for c in &p.constraints {
        let terms: Vec<_> = c.coeffs.iter().map(|(j, a)| (vars[*j], a.to_f64().expect("finite"))).collect();
        fp.add_constraint(&terms[..], float_rel(c.rel), c.rhs.to_f64().expect("finite"));
    }
    match fp.solve() {
        Ok(out) => out.solution().map(|s| Ok(vars.iter().map(|&v| s.var_value(v)).collect())),
        Err(microlp::Error::Infeasible) => Some(Err(())),
        Err(_) => None,
    }
}

/// Floating-point search for multipliers satisfying [`farkas_certifies`],
/// normalized so the certified gap is at least 1.
fn float_farkas(p: &LpProblem) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let mut fp = Problem::new(OptimizationDirection::Minimize);
    let inf = f64::INFINITY;
    let ys: Vec<_> = p
        .constraints
        .iter()
        .map(|c| {
            // L1 cost keeps the multipliers sparse and their denominators small
            match c.rel {
                Rel::Ge => fp.add_var(1.0, (0.0, inf)),
                Rel::Le => fp.add_var(-1.0, (-inf, 0.0)),
                Rel::Eq => fp.add_var(0.0, (-inf, inf)),
            }
        })
        .collect();
    // z_j = Σ_i y_i a_ij as explicit columns
    let mut col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.num_vars()];
    for (i, c) in p.constraints.iter().enumerate() {
        for (j, a) in &c.coeffs {
            col[*j].push((i, a.to_f64().expect("finite")));
        }
    }
    // Σ_j top_j − Σ_i y_i b_i ≤ −1
    let mut gap: Vec<(microlp::Variable, f64)> =
        p.constraints.iter().zip(&ys).map(|(c, &y)| (y, -c.rhs.to_f64().expect("finite"))).collect();
    for j in 0..p.num_vars() {
        let z: Vec<_> = col[j].iter().map(|&(i, a)| (ys[i], a)).collect();
        let (lo, hi) = float_bounds(p.lower(j), p.upper(j));
        match (lo.is_finite(), hi.is_finite()) {
            (true, false) => {
                fp.add_constraint(&z[..], ComparisonOp::Le, 0.0);
                gap.extend(z.iter().map(|&(y, a)| (y, a * lo)));
            }
            (false, true) => {
                fp.add_constraint(&z[..], ComparisonOp::Ge, 0.0);
                gap.extend(z.iter().map(|&(y, a)| (y, a * hi)));
            }
            (false, false) => fp.add_constraint(&z[..], ComparisonOp::Eq, 0.0),
            (true, true) => {
                let t = fp.add_var(0.0, (-inf, inf));
                for b in [lo, hi] {
                    let mut row: Vec<_> = z.iter().map(|&(y, a)| (y, -a * b)).collect();
                    row.push((t, 1.0));
                    fp.add_constraint(&row[..], ComparisonOp::Ge, 0.0);
                }
                gap.push((t, 1.0));
            }
        }
    }
    // merge repeated variables
    gap.sort_by_key(|e| e.0.idx());
    let mut merged: Vec<(microlp::Variable, f64)> = Vec::new();
    for (v, a) in gap {
        match merged.last_mut() {
            Some((w, b)) if w.idx() == v.idx() => *b += a,
            _ => merged.push((v, a)),
        }
    }
    fp.add_constraint(&merged[..], ComparisonOp::Le, -1.0);
    let out = fp.solve().ok()?;
    let s = out.solution()?;
    Some(ys.iter().map(|&y| s.var_value(y)).collect())
}

fn rationalize_all(v: &[f64]) -> Option<Vec<Q>> {
    v.iter().map(|&x| rationalize(x, 1e-7)).collect()
}

/// Decides feasibility, ignoring the objective. A floating-point solver
/// proposes a point or a Farkas vector; the proposal is rounded to small
/// rationals and checked exactly. If the check fails the exact simplex
/// decides instead, so the answer never depends on rounding.
pub fn lp_feasibility(p: &LpProblem) -> Feasible {
    match float_point(p) {
        Some(Ok(x)) => {
            if let Some(pt) = rationalize_all(&x) {
                if lp_check_point(p, &pt).map(|c| c.satisfied).unwrap_or(false) {
                    return Feasible::Point(pt);
                }
            }
        }
        Some(Err(())) => {
            if let Some(y) = float_farkas(p).as_deref().and_then(rationalize_all) {
                if farkas_certifies(p, &y) {
                    return Feasible::Farkas(y);
                }
            }
        }
        None => {}
    }
    lp_feasibility_exact(p)
}

/// A family of feasibility problems that share their rows and differ in the
/// values of a few parameter variables. One floating-point model persists
/// across queries and is re-solved warm; rows carrying a parameter are
/// relaxed by a costly elastic variable so the model never goes infeasible.
/// Verdicts from [`ParametricLp::certify`] are exact.
pub struct ParametricLp {
    exact: LpProblem,
    params: Vec<usize>,
    values: Vec<Q>,
    float: Option<FloatModel>,
    /// Rows of `exact` not yet passed to the float model.
    pending: usize,
}

struct FloatModel {
    vars: Vec<microlp::Variable>,
    elastic: Option<microlp::Variable>,
    solution: microlp::Solution,
    /// Parameter values the float model currently holds.
    fixed: Vec<Option<f64>>,
}

/// Batches larger than this are re-solved from scratch rather than warm.
const WARM_BATCH: usize = 8;
/// Objective weight of the elastic variable.
const ELASTIC_COST: f64 = 1e4;

impl ParametricLp {
    /// `params` name variables of `p`; their bounds are ignored in favor of
    /// the values set with [`ParametricLp::set_params`].
    pub fn new(p: LpProblem, params: Vec<usize>) -> ParametricLp {
        let values = vec![Q::zero(); params.len()];
        ParametricLp { exact: p, params, values, float: None, pending: 0 }
    }

    pub fn set_params(&mut self, values: &[Q]) {
        assert_eq!(values.len(), self.params.len(), "one value per parameter");
        self.values = values.to_vec();
    }

    pub fn num_constraints(&self) -> usize {
        self.exact.constraints.len()
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Q)>, rel: Rel, rhs: Q, label: impl Into<String>) {
        self.exact.add(coeffs, rel, rhs, label);
        self.pending += 1;
    }

    /// The problem with every parameter fixed at its current value.
    pub fn fixed_problem(&self) -> LpProblem {
        let mut p = self.exact.clone();
        for (&j, v) in self.params.iter().zip(&self.values) {
            p.set_bounds(j, Some(v.clone()), Some(v.clone()));
        }
        p
    }

    fn cold(&self) -> Option<FloatModel> {
        use microlp::{OptimizationDirection, Problem};
        let p = &self.exact;
        let mut fp = Problem::new(OptimizationDirection::Minimize);
        let mut cost = vec![0.0; p.num_vars()];
        for (j, c) in &p.objective {
            cost[*j] += c.to_f64().expect("finite");
        }
        let vars: Vec<_> = (0..p.num_vars())
            .map(|j| {
                let b = if self.params.contains(&j) {
                    (f64::NEG_INFINITY, f64::INFINITY)
                } else {
                    float_bounds(p.lower(j), p.upper(j))
                };
                fp.add_var(cost[j], b)
            })
            .collect();
        let elastic = (!self.params.is_empty()).then(|| fp.add_var(ELASTIC_COST, (0.0, f64::INFINITY)));
        for c in &p.constraints {
            let mut terms: Vec<_> = c.coeffs.iter().map(|(j, a)| (vars[*j], a.to_f64().expect("finite"))).collect();
            if let Some(e) = elastic {
                if c.coeffs.iter().any(|(j, _)| self.params.contains(j)) {
                    match c.rel {
                        Rel::Le => terms.push((e, -1.0)),
                        Rel::Ge => terms.push((e, 1.0)),
                        Rel::Eq => {}
                    }
                }
            }
            fp.add_constraint(&terms[..], float_rel(c.rel), c.rhs.to_f64().expect("finite"));
        }
        let solution = fp.solve().ok()?.into_solution().ok()?;
        Some(FloatModel { vars, elastic, solution, fixed: vec![None; self.params.len()] })
    }

    fn sync(&mut self) {
        let m = self.exact.constraints.len();
        let first = m - std::mem::take(&mut self.pending);
        if first < m && (m - first > WARM_BATCH || self.float.is_none()) {
            self.float = None;
        }
        if let Some(FloatModel { vars, elastic, solution, fixed }) = self.float.take() {
            let mut sol = Some(solution);
            for c in &self.exact.constraints[first..] {
                let Some(s) = sol.take() else { break };
                let terms: Vec<_> = c.coeffs.iter().map(|(j, a)| (vars[*j], a.to_f64().expect("finite"))).collect();
                sol = s
                    .add_constraint(&terms[..], float_rel(c.rel), c.rhs.to_f64().expect("finite"))
                    .ok()
                    .and_then(|o| o.into_solution().ok());
            }
            self.float = sol.map(|solution| FloatModel { vars, elastic, solution, fixed });
        }
        if self.float.is_none() {
            self.float = self.cold();
        }
        let Some(FloatModel { vars, elastic, mut solution, mut fixed }) = self.float.take() else { return };
        for (k, v) in self.values.iter().enumerate() {
            let v = v.to_f64().expect("finite");
            if fixed[k] == Some(v) {
                continue;
            }
            match solution.fix_var(vars[self.params[k]], v).ok().and_then(|o| o.into_solution().ok()) {
                Some(s) => {
                    solution = s;
                    fixed[k] = Some(v);
                }
                None => return,
            }
        }
        self.float = Some(FloatModel { vars, elastic, solution, fixed });
    }

    /// Float point at the current parameter values, or `None` when the
    /// float model finds them infeasible.
    pub fn point(&mut self) -> Option<Vec<f64>> {
        self.sync();
        let fm = self.float.as_ref()?;
        if fm.elastic.is_some_and(|e| fm.solution.var_value(e) > 1e-9) {
            return None;
        }
        Some(fm.vars.iter().map(|&v| fm.solution.var_value(v)).collect())
    }

    /// Exact verdict for the current rows and parameter values.
    pub fn certify(&mut self) -> Feasible {
        let p = self.fixed_problem();
        match self.point() {
            Some(x) => {
                if let Some(pt) = rationalize_all(&x) {
                    if lp_check_point(&p, &pt).map(|c| c.satisfied).unwrap_or(false) {
                        return Feasible::Point(pt);
                    }
                }
            }
            None if self.float.is_some() => {
                if let Some(y) = float_farkas(&p).as_deref().and_then(rationalize_all) {
                    if farkas_certifies(&p, &y) {
                        return Feasible::Farkas(y);
                    }
                }
            }
            None => {}
        }
        lp_feasibility(&p)
    }
}

/// Exact-only counterpart of [`lp_feasibility`].
pub fn lp_feasibility_exact(p: &LpProblem) -> Feasible {
    match Standard::build(p).feasibility(p.constraints.len()) {
        Phase1::Feasible(x) => Feasible::Point(x),
        Phase1::Infeasible(y) => Feasible::Farkas(y),
    }
}
