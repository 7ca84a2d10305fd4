//! Command-line front end. `run` parses arguments, dispatches and prints one
//! report; exit code 0 = holds, 1 = property fails, 2 = input or size error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::{
    keyrate_lp, mais, polymatroid_check, sum_keyrate_bracket, Pm4Mode, PolymatroidInstance, PolymatroidVerdict,
};
use crate::catalogue::{
    catalogue_entries, feasible_structures_of_size, four_user_gap_demo, scalar_search_with, verify_catalogue,
};
use crate::coloring::{
    b_fold_chromatic, conflict_graph, fractional_chromatic, multicast_min_sessions, multicast_scheme_from_coloring,
    scheme_from_secure_cover, secure_clique_cover,
};
use crate::error::{Error, Result};
use crate::feasibility::{canonical_scheme, is_feasible, Feasibility};
use crate::model::{
    mask_to_users, parse_pattern, pattern_string, q_approx, Graph, KeyStructure, LinearScheme, MulticastScheme,
    RateTuple, Q,
};
use crate::oracle::{
    oracle_check_multicast, oracle_check_private, oracle_check_weak, state_limit_from_env, Leak, OracleReport,
};
use crate::verifier::{scheme_rate, verify_private, verify_weak_private, Verdict};
use crate::weak::{necessary_condition_infeasible, subset_condition_violation, Necessary};

#[derive(Parser, Debug)]
#[command(name = "pic", version, about = "Exact-arithmetic toolkit for private index coding")]
struct Cli {
    /// Print the report as one JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Add decimal renderings next to exact rationals.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Side-information graph file.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct KsArg {
    /// Key access structure as comma-separated patterns, e.g. 110,101,011.
    #[arg(long, conflicts_with = "ks_file")]
    ks: Option<String>,
    /// File holding the comma- or whitespace-separated patterns.
    #[arg(long)]
    ks_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleMode {
    Private,
    Weak,
    Multicast,
}

#[derive(Subcommand, Debug)]
enum CatalogueCmd {
    /// Re-verify every vertex scheme of every embedded rate region.
    Verify,
    /// List the embedded rate regions.
    List,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Key access structure feasibility: every pair i ∉ A_j needs a pattern with b_i = 1, b_j = 0.
    Feasible {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ks: KsArg,
    },
    /// One-time-pad scheme m_i = x_i + Σ k_b^(i) for a feasible structure.
    CanonicalScheme {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        ks: KsArg,
    },
    /// Linear private-scheme verifier (decodability and span containment).
    Verify {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Linear weak-privacy verifier for keyless schemes.
    VerifyWeak {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Exhaustive information-theoretic check of a scheme by enumeration.
    OracleCheck {
        #[command(flatten)]
        g: GraphArg,
        /// Linear scheme file (private and weak modes).
        #[arg(long)]
        scheme: Option<PathBuf>,
        /// Multicast scheme file (multicast mode).
        #[arg(long)]
        multicast: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "private")]
        mode: OracleMode,
        /// Largest number of enumerated states (default: PIC_STATE_LIMIT or 2^28).
        #[arg(long)]
        state_limit: Option<u64>,
    },
    /// Maximum acyclic induced subgraph, a lower bound on the broadcast rate.
    Mais {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Minimum sum key rate subject to the pair (and optional triple) key-rate constraints.
    KeyrateLp {
        #[command(flatten)]
        g: GraphArg,
        /// Add the triple constraints.
        #[arg(long)]
        triples: bool,
    },
    /// Bracket on the minimum sum key rate: max(MAIS − 1, key-rate LP) to χ_f of the conflict graph.
    SumKeyBracket {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Polymatroidal outer bound on achievable rate tuples.
    PolymatroidCheck {
        #[command(flatten)]
        g: GraphArg,
        /// Rate-tuple file.
        #[arg(long)]
        rates: PathBuf,
        /// Use every disjoint-family inequality instead of the elemental ones.
        #[arg(long)]
        exhaustive_pm4: bool,
        /// Key patterns the set function ranges over, comma-separated.
        #[arg(long)]
        key_support: Option<String>,
    },
    /// Fractional chromatic number of the conflict graph.
    ChiF {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Smallest b-fold coloring of the conflict graph.
    BFold {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        b: usize,
    },
    /// Minimum normalized number of private multicast sessions.
    Multicast {
        #[command(flatten)]
        g: GraphArg,
        /// Include the session list.
        #[arg(long)]
        emit_scheme: bool,
    },
    /// Partition into mutual cliques that no outside user is one message short of.
    SecureCliqueCover {
        #[command(flatten)]
        g: GraphArg,
        /// Include the keyless scheme built from the cover.
        #[arg(long)]
        emit_scheme: bool,
    },
    /// Weak-privacy subset condition: no pair i ≠ j with i ∉ s_j and s_i ⊆ A_j.
    WeakSubset {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Weak-privacy necessary condition with per-subset certificates.
    WeakNecessary {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Embedded rate regions with their vertex schemes.
    Catalogue {
        #[command(subcommand)]
        action: CatalogueCmd,
    },
    /// Exhaustive scalar (n = 1) scheme search under key-width caps.
    ScalarSearch {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        r: usize,
        /// Width caps, e.g. 110:1,101:1,011:2.
        #[arg(long)]
        caps: String,
        /// Enumerate every column without canonical-form pruning.
        #[arg(long)]
        unpruned: bool,
    },
    /// Four-user instance where a vector code beats every scalar code.
    FourUserDemo {
        /// Also search over GF(3).
        #[arg(long)]
        q3: bool,
    },
    /// All feasible key access structures of a given size.
    Structures {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        size: usize,
    },
}

/// Ordered report fields.
struct Report {
    command: &'static str,
    inputs: Map<String, Value>,
    items: Vec<(String, Value)>,
    approx: bool,
    code: i32,
}

impl Report {
    fn new(command: &'static str, approx: bool) -> Report {
        Report { command, inputs: Map::new(), items: Vec::new(), approx, code: 0 }
    }

    fn input(&mut self, k: &str, v: impl Into<Value>) {
        self.inputs.insert(k.to_string(), v.into());
    }

    fn put(&mut self, k: &str, v: impl Into<Value>) {
        self.items.push((k.to_string(), v.into()));
    }

    fn rat(&mut self, k: &str, v: &Q) {
        self.put(k, v.to_string());
        if self.approx {
            self.put(&format!("{k}_approx"), q_approx(v));
        }
    }

    fn verdict(&mut self, v: &str, holds: bool) {
        self.put("verdict", v);
        self.code = if holds { 0 } else { 1 };
    }

    fn print(&self, out: &mut dyn Write, as_json: bool, elapsed_ms: f64) -> std::io::Result<()> {
        if as_json {
            let mut m = Map::new();
            m.insert("command".into(), self.command.into());
            m.insert("inputs".into(), Value::Object(self.inputs.clone()));
            for (k, v) in &self.items {
                m.insert(k.clone(), v.clone());
            }
            m.insert("elapsed_ms".into(), json!((elapsed_ms * 1000.0).round() / 1000.0));
            writeln!(out, "{}", Value::Object(m))
        } else {
            writeln!(out, "command: {}", self.command)?;
            for (k, v) in &self.inputs {
                writeln!(out, "input {k}: {}", render(v))?;
            }
            let mut i = 0;
            while i < self.items.len() {
                let (k, v) = &self.items[i];
                match self.items.get(i + 1) {
                    Some((ka, va)) if *ka == format!("{k}_approx") => {
                        writeln!(out, "{k}: {} (≈{})", render(v), render(va))?;
                        i += 2;
                    }
                    _ => {
                        writeln!(out, "{k}: {}", render(v))?;
                        i += 1;
                    }
                }
            }
            writeln!(out, "elapsed: {elapsed_ms:.3} ms")
        }
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(r: &mut Report, a: &GraphArg) -> Result<Graph> {
    r.input("graph", a.graph.display().to_string());
    Graph::parse(&read(&a.graph)?)
}

/// Drops the all-users pattern (it separates no pair) and parses the rest.
fn load_ks(r: &mut Report, a: &KsArg, n: usize) -> Result<KeyStructure> {
    let text = match (&a.ks, &a.ks_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => {
            r.input("ks_file", p.display().to_string());
            read(p)?
        }
        (None, None) => String::new(),
    };
    let mut pats = Vec::new();
    let mut dropped = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        if tok.len() == n && tok.bytes().all(|b| b == b'1') {
            dropped.push(tok.to_string());
            continue;
        }
        pats.push(parse_pattern(tok, Some(n))?);
    }
    let ks = KeyStructure::new(n, &pats)?;
    r.input("ks", ks.to_strings().join(","));
    if !dropped.is_empty() {
        r.put("note", format!("pattern {} is held by every user and separates no pair; ignored", dropped[0]));
    }
    Ok(ks)
}

fn verdict_value(v: &Verdict) -> Value {
    json!({"status": v.to_string(), "reason": v.reason})
}

fn oracle_items(r: &mut Report, rep: &OracleReport) {
    r.put("decodable", rep.decodable);
    r.put("undecodable_users", rep.undecodable.clone());
    let leaking: Vec<Value> = rep
        .leakage
        .iter()
        .enumerate()
        .filter_map(|(i, l)| match l {
            Leak::None => None,
            Leak::Leaks(w) => Some(json!({"user": i + 1, "cell": w.cell, "observed": w.observed, "secret": w.secret})),
        })
        .collect();
    r.put("leaks", leaking);
    r.put("enumerated_states", rep.enumerated_states);
}

fn parse_caps(text: &str, n: usize) -> Result<BTreeMap<u64, usize>> {
    let mut caps = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (p, w) = item.split_once(':').ok_or_else(|| Error::Parse(format!("cap {item:?} is not pattern:width")))?;
        let w: usize = w.trim().parse().map_err(|_| Error::Parse(format!("bad width in {item:?}")))?;
        if caps.insert(parse_pattern(p.trim(), Some(n))?, w).is_some() {
            return Err(Error::Invalid(format!("pattern {p} capped twice")));
        }
    }
    Ok(caps)
}

fn rate_value(t: &RateTuple) -> Value {
    t.to_value()
}

fn dispatch(cmd: &Command, r: &mut Report) -> Result<()> {
    match cmd {
        Command::Feasible { g, ks } => {
            let g = load_graph(r, g)?;
            let ks = load_ks(r, ks, g.n())?;
            match is_feasible(&g, &ks)? {
                Feasibility::Feasible => r.verdict("feasible", true),
                Feasibility::Infeasible { i, j } => {
                    r.verdict("infeasible", false);
                    r.put("witness", vec![i, j]);
                }
            }
        }
        Command::CanonicalScheme { g, ks } => {
            let g = load_graph(r, g)?;
            let ks = load_ks(r, ks, g.n())?;
            match canonical_scheme(&g, &ks) {
                Ok(s) => {
                    r.verdict("feasible", true);
                    r.put("rate", rate_value(&scheme_rate(&s)));
                    r.put("scheme", s.to_value());
                }
                Err(Error::Infeasible(i, j)) => {
                    r.verdict("infeasible", false);
                    r.put("witness", vec![i, j]);
                }
                Err(e) => return Err(e),
            }
        }
        Command::Verify { g, scheme } => {
            let g = load_graph(r, g)?;
            r.input("scheme", scheme.display().to_string());
            let s = LinearScheme::parse(&read(scheme)?)?;
            let v = verify_private(&s, &g)?;
            r.verdict(if v.is_ok() { "ok" } else { "violation" }, v.is_ok());
            r.put("detail", verdict_value(&v));
            r.put("rate", rate_value(&scheme_rate(&s)));
            r.rat("sum_key_rate", &scheme_rate(&s).sum_key_rate());
        }
        Command::VerifyWeak { g, scheme } => {
            let g = load_graph(r, g)?;
            r.input("scheme", scheme.display().to_string());
            let s = LinearScheme::parse(&read(scheme)?)?;
            let v = verify_weak_private(&s, &g)?;
            r.verdict(if v.is_ok() { "ok" } else { "violation" }, v.is_ok());
            r.put("detail", verdict_value(&v));
            r.rat("rate", &scheme_rate(&s).r);
        }
        Command::OracleCheck { g, scheme, multicast, mode, state_limit } => {
            let g = load_graph(r, g)?;
            let limit = state_limit.unwrap_or_else(state_limit_from_env);
            r.input("state_limit", limit);
            let linear = |r: &mut Report| -> Result<LinearScheme> {
                let p = scheme.as_ref().ok_or_else(|| Error::Invalid("--scheme is required in this mode".into()))?;
                r.input("scheme", p.display().to_string());
                LinearScheme::parse(&read(p)?)
            };
            match mode {
                OracleMode::Private => {
                    r.input("mode", "private");
                    let s = linear(r)?;
                    let rep = oracle_check_private(&s, &g, limit)?;
                    r.verdict(if rep.clean() { "ok" } else { "violation" }, rep.clean());
                    oracle_items(r, &rep);
                }
                OracleMode::Weak => {
                    r.input("mode", "weak");
                    let s = linear(r)?;
                    let rep = oracle_check_weak(&s, &g, limit)?;
                    r.verdict(if rep.clean() { "ok" } else { "violation" }, rep.clean());
                    r.put("decodable", rep.decodable);
                    r.put("undecodable_users", rep.undecodable.clone());
                    let pairs: Vec<Value> = rep
                        .pairs
                        .iter()
                        .map(|p| json!({"user": p.user, "message": p.message, "leaks": !p.leak.is_none()}))
                        .collect();
                    r.put("pairs", pairs);
                    r.put("enumerated_states", rep.enumerated_states);
                }
                OracleMode::Multicast => {
                    r.input("mode", "multicast");
                    let p = multicast
                        .as_ref()
                        .ok_or_else(|| Error::Invalid("--multicast is required in this mode".into()))?;
                    r.input("multicast", p.display().to_string());
                    let ms = MulticastScheme::parse(&read(p)?)?;
                    let rep = oracle_check_multicast(&ms, &g, limit)?;
                    r.verdict(if rep.clean() { "ok" } else { "violation" }, rep.clean());
                    oracle_items(r, &rep);
                }
            }
        }
        Command::Mais { g } => {
            let g = load_graph(r, g)?;
            let (size, set) = mais(&g)?;
            r.put("value", size);
            r.put("witness", set);
        }
        Command::KeyrateLp { g, triples } => {
            let g = load_graph(r, g)?;
            r.input("triples", *triples);
            let lp = keyrate_lp(&g, *triples)?;
            r.put("status", lp.outcome.status());
            if lp.outcome.value().is_some() {
                r.rat("value", &lp.value());
                let rates: Map<String, Value> = lp
                    .rates(g.n())
                    .iter()
                    .map(|(b, v)| (pattern_string(*b, g.n()), Value::String(v.to_string())))
                    .collect();
                r.put("key_rates", Value::Object(rates));
            } else {
                r.code = 1;
            }
        }
        Command::SumKeyBracket { g } => {
            let g = load_graph(r, g)?;
            let b = sum_keyrate_bracket(&g)?;
            r.rat("lower", &b.lower);
            r.put("lower_source", b.source.tag());
            r.rat("upper", &b.upper);
        }
        Command::PolymatroidCheck { g, rates, exhaustive_pm4, key_support } => {
            let g = load_graph(r, g)?;
            r.input("rates", rates.display().to_string());
            let t = RateTuple::parse(&read(rates)?, g.n())?;
            let mut inst = PolymatroidInstance::new(g.clone(), t);
            inst.mode = if *exhaustive_pm4 { Pm4Mode::Exhaustive } else { Pm4Mode::Elemental };
            r.input("pm4", if *exhaustive_pm4 { "exhaustive" } else { "elemental" });
            if let Some(list) = key_support {
                inst.key_support = Some(KeyStructure::parse_list(list, g.n())?.patterns().to_vec());
            }
            let support = inst.support()?;
            r.put("key_support", support.iter().map(|&b| pattern_string(b, g.n())).collect::<Vec<_>>());
            let rep = polymatroid_check(&inst)?;
            match rep.verdict {
                PolymatroidVerdict::Passes => r.verdict("passes", true),
                PolymatroidVerdict::OuterBoundViolated => r.verdict("outer_bound_violated", false),
            }
            r.put("variables", rep.variables);
            r.put("pm3_family", rep.pm3_rows);
            r.put("pm4_family", rep.pm4_rows);
            r.put("rows_added", rep.rows_added);
            r.put("rounds", rep.rounds);
        }
        Command::ChiF { g } => {
            let g = load_graph(r, g)?;
            let ug = conflict_graph(&g);
            let fc = fractional_chromatic(&ug)?;
            r.rat("value", &fc.value);
            let w: Vec<Value> =
                fc.weights.iter().map(|(s, w)| json!({"set": mask_to_users(*s), "weight": w.to_string()})).collect();
            r.put("weights", w);
        }
        Command::BFold { g, b } => {
            let g = load_graph(r, g)?;
            r.input("b", *b);
            let c = b_fold_chromatic(&conflict_graph(&g), *b)?;
            r.put("colors", c.l);
            r.rat("ratio", &Q::new((c.l as i64).into(), (c.b as i64).into()));
            r.put("coloring", c.color_lists());
        }
        Command::Multicast { g, emit_scheme } => {
            let g = load_graph(r, g)?;
            let plan = multicast_min_sessions(&g)?;
            r.rat("kappa", &plan.kappa);
            r.put("fold", plan.coloring.b);
            r.put("sessions", plan.coloring.l);
            if *emit_scheme {
                r.put("scheme", multicast_scheme_from_coloring(&g, &plan.coloring)?.to_value());
            }
        }
        Command::SecureCliqueCover { g, emit_scheme } => {
            let g = load_graph(r, g)?;
            match secure_clique_cover(&g)? {
                Some(c) => {
                    r.verdict("found", true);
                    r.put("cover", c.to_lists());
                    if *emit_scheme {
                        r.put("scheme", scheme_from_secure_cover(&g, &c)?.to_value());
                    }
                }
                None => r.verdict("none", false),
            }
        }
        Command::WeakSubset { g } => {
            let g = load_graph(r, g)?;
            match subset_condition_violation(&g) {
                None => r.verdict("satisfied", true),
                Some((i, j)) => {
                    r.verdict("violated", false);
                    r.put("witness", vec![i, j]);
                }
            }
        }
        Command::WeakNecessary { g } => {
            let g = load_graph(r, g)?;
            match necessary_condition_infeasible(&g)? {
                Necessary::Inconclusive => r.verdict("inconclusive", true),
                Necessary::Infeasible { user, certificates } => {
                    r.verdict("infeasible", false);
                    r.put("user", user);
                    let c: Vec<Value> =
                        certificates.iter().map(|c| json!({"subset": c.subset, "j": c.j, "k": c.k})).collect();
                    r.put("certificates", c);
                }
            }
        }
        Command::Catalogue { action: CatalogueCmd::List } => {
            let list: Vec<Value> = catalogue_entries()
                .iter()
                .map(|e| {
                    json!({
                        "id": e.id,
                        "group": e.group,
                        "description": e.description,
                        "graph": e.graph.to_value(),
                        "inequalities": e.region.constraints.len(),
                        "vertices": e.vertices.len(),
                    })
                })
                .collect();
            r.put("entries", list);
        }
        Command::Catalogue { action: CatalogueCmd::Verify } => {
            let limit = state_limit_from_env();
            let rep = verify_catalogue(limit);
            r.verdict(if rep.ok() { "ok" } else { "failures" }, rep.ok());
            r.put("entries", rep.entries);
            r.put("vertices", rep.vertices);
            let f: Vec<Value> = rep
                .failures
                .iter()
                .map(|f| json!({"entry": f.entry, "vertex": f.vertex.map(|v| v + 1), "check": f.check, "detail": f.detail}))
                .collect();
            r.put("failures", f);
        }
        Command::ScalarSearch { g, q, r: rows, caps, unpruned } => {
            let g = load_graph(r, g)?;
            r.input("q", *q);
            r.input("r", *rows);
            r.input("caps", caps.as_str());
            let c = parse_caps(caps, g.n())?;
            let s = scalar_search_with(&g, *q, *rows, &c, !unpruned)?;
            r.put("space", s.space.to_string());
            match s.found {
                Some(found) => {
                    r.verdict("found", true);
                    r.put("scheme", found.to_value());
                }
                None => r.verdict("none", false),
            }
        }
        Command::FourUserDemo { q3 } => {
            let rep = four_user_gap_demo(*q3)?;
            r.verdict(if rep.holds() { "gap_confirmed" } else { "gap_not_confirmed" }, rep.holds());
            r.put("vector_scheme", verdict_value(&rep.verdict));
            r.put("rate", rate_value(&rep.rate));
            r.put("expected_rate", rate_value(&rep.expected));
            r.put("scalar_q2_r2", if rep.q2.found.is_some() { "found" } else { "none" });
            if let Some(s) = &rep.q3 {
                r.put("scalar_q3_r2", if s.found.is_some() { "found" } else { "none" });
            }
            r.put("scalar_q2_r3", if rep.r3.found.is_some() { "found" } else { "none" });
        }
        Command::Structures { g, size } => {
            let g = load_graph(r, g)?;
            r.input("size", *size);
            let list = feasible_structures_of_size(&g, *size)?;
            r.put("count", list.len());
            r.put("structures", list.iter().map(|k| k.to_strings().join(",")).collect::<Vec<_>>());
        }
    }
    Ok(())
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Feasible { .. } => "feasible",
        Command::CanonicalScheme { .. } => "canonical-scheme",
        Command::Verify { .. } => "verify",
        Command::VerifyWeak { .. } => "verify-weak",
        Command::OracleCheck { .. } => "oracle-check",
        Command::Mais { .. } => "mais",
        Command::KeyrateLp { .. } => "keyrate-lp",
        Command::SumKeyBracket { .. } => "sum-key-bracket",
        Command::PolymatroidCheck { .. } => "polymatroid-check",
        Command::ChiF { .. } => "chi-f",
        Command::BFold { .. } => "b-fold",
        Command::Multicast { .. } => "multicast",
        Command::SecureCliqueCover { .. } => "secure-clique-cover",
        Command::WeakSubset { .. } => "weak-subset",
        Command::WeakNecessary { .. } => "weak-necessary",
        Command::Catalogue { action: CatalogueCmd::Verify } => "catalogue verify",
        Command::Catalogue { action: CatalogueCmd::List } => "catalogue list",
        Command::ScalarSearch { .. } => "scalar-search",
        Command::FourUserDemo { .. } => "four-user-demo",
        Command::Structures { .. } => "structures",
    }
}

/// Runs one command; the report goes to `out`, errors to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    2
                }
            };
        }
    };
    let start = Instant::now();
    let mut report = Report::new(name(&cli.command), cli.approx);
    if let Err(e) = dispatch(&cli.command, &mut report) {
        eprintln!("error: {e}");
        return 2;
    }
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    if report.print(out, cli.json, ms).is_err() {
        return 2;
    }
    report.code
}
