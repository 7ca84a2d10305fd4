//! Algebraic verifiers for linear schemes: perfect privacy with keys and weak
//! privacy without keys. Each user is checked for privacy first, then for
//! decodability.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gf::Mat;
use crate::model::{Graph, LinearScheme, RateTuple, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// 1-based user and block coordinate.
    DecodeViolation {
        user: usize,
        coord: usize,
    },
    /// 1-based user; `other` names the exposed message in weak mode.
    PrivacyViolation {
        user: usize,
        other: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reason: String,
}

impl Verdict {
    fn ok() -> Verdict {
        Verdict { status: Status::Ok, reason: "all users decode and nothing leaks".into() }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Ok => write!(f, "ok"),
            Status::DecodeViolation { user, coord } => write!(f, "decode_violation(user {user}, coord {coord})"),
            Status::PrivacyViolation { user, other: None } => write!(f, "privacy_violation(user {user})"),
            Status::PrivacyViolation { user, other: Some(j) } => {
                write!(f, "privacy_violation(user {user}, message {j})")
            }
        }
    }
}

fn check_users(s: &LinearScheme, g: &Graph) -> Result<()> {
    if s.num_users() != g.n() {
        return Err(Error::Dimension(format!("scheme has {} users, graph has {}", s.num_users(), g.n())));
    }
    Ok(())
}

fn cat(s: &LinearScheme, parts: &[&Mat]) -> Mat {
    Mat::hcat(s.q, s.r, parts).expect("validated scheme")
}

/// First coordinate `k` of `G_i` lying in the span of the interference
/// columns and the earlier columns of `G_i`.
fn decode_failure(s: &LinearScheme, i: usize, interference: &Mat) -> Option<usize> {
    let mut cur = interference.clone();
    let gi = &s.g[i];
    for k in 0..s.n {
        let col = gi.column(k);
        if cur.in_span(&col).expect("row counts agree") {
            return Some(k);
        }
        let c = Mat::from_columns(s.q, s.r, &[col]);
        cur = cat(s, &[&cur, &c]);
    }
    None
}

/// Verdict for a perfect private scheme.
///
/// User `i` decodes iff `rank[G_i | U | H] − rank[U | H] = n` with
/// `U = {G_j : j ∉ A_i}` and `H = {H_b : b_i = 0}`; it learns nothing iff
/// `⟨U⟩ ⊆ ⟨H⟩`.
pub fn verify_private(s: &LinearScheme, g: &Graph) -> Result<Verdict> {
    check_users(s, g)?;
    for i in 0..g.n() {
        let u: Vec<&Mat> = (0..g.n()).filter(|&j| g.a(i) >> j & 1 == 0).map(|j| &s.g[j]).collect();
        let h: Vec<&Mat> = s.keys.iter().filter(|k| k.pattern >> i & 1 == 0).map(|k| &k.h).collect();
        let um = cat(s, &u);
        let hm = cat(s, &h);
        if !um.contained_in(&hm).expect("row counts agree") {
            return Ok(Verdict {
                status: Status::PrivacyViolation { user: i + 1, other: None },
                reason: format!("span of unknown messages at user {} is not covered by foreign keys", i + 1),
            });
        }
        let both = cat(s, &[&um, &hm]);
        if let Some(k) = decode_failure(s, i, &both) {
            return Ok(Verdict {
                status: Status::DecodeViolation { user: i + 1, coord: k + 1 },
                reason: format!(
                    "column {} of G_{} lies in the span of the unknown messages, foreign keys and its earlier columns",
                    k + 1,
                    i + 1
                ),
            });
        }
    }
    Ok(Verdict::ok())
}

/// Verdict for a keyless scheme under weak privacy: user `i` must decode and,
/// for every `j ∉ A_i`, `⟨G_j⟩ ⊆ ⟨G_ℓ : ℓ ∉ A_i, ℓ ≠ j⟩`.
pub fn verify_weak_private(s: &LinearScheme, g: &Graph) -> Result<Verdict> {
    check_users(s, g)?;
    if !s.is_keyless() {
        return Err(Error::Invalid("weak-privacy verification takes a keyless scheme".into()));
    }
    for i in 0..g.n() {
        let unknown: Vec<usize> = (0..g.n()).filter(|&j| g.a(i) >> j & 1 == 0).collect();
        let u: Vec<&Mat> = unknown.iter().map(|&j| &s.g[j]).collect();
        for &j in &unknown {
            let rest: Vec<&Mat> = unknown.iter().filter(|&&l| l != j).map(|&l| &s.g[l]).collect();
            if !s.g[j].contained_in(&cat(s, &rest)).expect("row counts agree") {
                return Ok(Verdict {
                    status: Status::PrivacyViolation { user: i + 1, other: Some(j + 1) },
                    reason: format!("G_{} is not spanned by the other unknown messages at user {}", j + 1, i + 1),
                });
            }
        }
        if let Some(k) = decode_failure(s, i, &cat(s, &u)) {
            return Ok(Verdict {
                status: Status::DecodeViolation { user: i + 1, coord: k + 1 },
                reason: format!("column {} of G_{} lies in the span of the unknown messages", k + 1, i + 1),
            });
        }
    }
    Ok(Verdict::ok())
}

/// `R = r/n`, `R_b = w_b/n`.
pub fn scheme_rate(s: &LinearScheme) -> RateTuple {
    let n = BigInt::from(s.n);
    let mut t = RateTuple::new(s.num_users(), Q::new(BigInt::from(s.r), n.clone()));
    for k in &s.keys {
        t.set(k.pattern, Q::new(BigInt::from(k.h.cols()), n.clone()));
    }
    t
}
