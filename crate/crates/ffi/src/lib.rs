//! C ABI over pic-core.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or
//! by an operation and released with the matching `*_free`. Every fallible
//! call returns a [`PicStatus`]; on a negative status `pic_last_error`
//! describes the failure. Strings returned through `char **` belong to the
//! caller and are released with `pic_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pic_core::bounds::{keyrate_lp, polymatroid_check, Pm4Mode, PolymatroidInstance, PolymatroidVerdict};
use pic_core::coloring::{conflict_graph, fractional_chromatic, multicast_min_sessions, secure_clique_cover};
use pic_core::feasibility::{canonical_scheme, is_feasible, Feasibility};
use pic_core::model::{Graph, KeyStructure, LinearScheme, RateTuple};
use pic_core::oracle::{oracle_check_private, state_limit_from_env};
use pic_core::verifier::{scheme_rate, verify_private, verify_weak_private};
use pic_core::Error;

/// Result of a call. `PIC_STATUS_OK` and `PIC_STATUS_NO` answer yes/no
/// questions; negative values are errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PicStatus {
    Ok = 0,
    /// The property does not hold (infeasible, violation, none found).
    No = 1,
    NullArgument = -1,
    Utf8 = -2,
    Parse = -3,
    Invalid = -4,
    Dimension = -5,
    TooLarge = -6,
    Infeasible = -7,
    Panic = -8,
}

/// Side-information graph.
pub struct PicGraph(Graph);

/// Linear scheme over a prime field.
pub struct PicScheme(LinearScheme);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(PicStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::Parse(_) => PicStatus::Parse,
            Error::Invalid(_) => PicStatus::Invalid,
            Error::Dimension(_) => PicStatus::Dimension,
            Error::TooLarge(_) => PicStatus::TooLarge,
            Error::Infeasible(..) => PicStatus::Infeasible,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = std::result::Result<PicStatus, Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> PicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Failure(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PicStatus::Panic
        }
    }
}

fn yes_no(b: bool) -> PicStatus {
    if b {
        PicStatus::Ok
    } else {
        PicStatus::No
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> std::result::Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PicStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(PicStatus::Utf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> std::result::Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(PicStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> std::result::Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(PicStatus::NullArgument, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(PicStatus::Invalid, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> std::result::Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(PicStatus::NullArgument, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn pic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, valid until the next call.
#[no_mangle]
pub extern "C" fn pic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": N, "side_info": [[...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pic_graph_from_json(json: *const c_char, out: *mut *mut PicGraph) -> PicStatus {
    guard(|| {
        let g = Graph::parse(text(json, "json")?)?;
        put_handle(out, PicGraph(g))?;
        Ok(PicStatus::Ok)
    })
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pic_graph_free(g: *mut PicGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of users, 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pic_graph_users(g: *const PicGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Parses a scheme file (`q`, `n`, `r`, `G`, `keys`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pic_scheme_from_json(json: *const c_char, out: *mut *mut PicScheme) -> PicStatus {
    guard(|| {
        let s = LinearScheme::parse(text(json, "json")?)?;
        put_handle(out, PicScheme(s))?;
        Ok(PicStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pic_scheme_free(s: *mut PicScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pic_scheme_to_json(s: *const PicScheme, out: *mut *mut c_char) -> PicStatus {
    guard(|| {
        put_string(out, get(s, "scheme")?.0.to_json())?;
        Ok(PicStatus::Ok)
    })
}

/// Rate tuple `{"R": .., "key_rates": {..}}` of a scheme.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pic_scheme_rate(s: *const PicScheme, out: *mut *mut c_char) -> PicStatus {
    guard(|| {
        put_string(out, scheme_rate(&get(s, "scheme")?.0).to_json())?;
        Ok(PicStatus::Ok)
    })
}

/// `PIC_STATUS_OK` if the comma-separated structure is feasible, otherwise
/// `PIC_STATUS_NO` with the 1-based witness pair in `witness[0..2]` (when
/// `witness` is not null).
///
/// # Safety
/// `g` must be a live handle, `ks` a NUL-terminated string, `witness` null or
/// two writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn pic_is_feasible(g: *const PicGraph, ks: *const c_char, witness: *mut usize) -> PicStatus {
    guard(|| {
        let g = &get(g, "graph")?.0;
        let ks = KeyStructure::parse_list(text(ks, "ks")?, g.n())?;
        match is_feasible(g, &ks)? {
            Feasibility::Feasible => Ok(PicStatus::Ok),
            Feasibility::Infeasible { i, j } => {
                if !witness.is_null() {
                    *witness = i;
                    *witness.add(1) = j;
                }
                Ok(PicStatus::No)
            }
        }
    })
}

/// One-time-pad scheme for a feasible structure; `PIC_STATUS_INFEASIBLE`
/// otherwise.
///
/// # Safety
/// `g` must be a live handle, `ks` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pic_canonical_scheme(
    g: *const PicGraph,
    ks: *const c_char,
    out: *mut *mut PicScheme,
) -> PicStatus {
    guard(|| {
        let g = &get(g, "graph")?.0;
        let ks = KeyStructure::parse_list(text(ks, "ks")?, g.n())?;
        put_handle(out, PicScheme(canonical_scheme(g, &ks)?))?;
        Ok(PicStatus::Ok)
    })
}

unsafe fn verdict(
    s: *const PicScheme,
    g: *const PicGraph,
    reason: *mut *mut c_char,
    f: fn(&LinearScheme, &Graph) -> pic_core::Result<pic_core::verifier::Verdict>,
) -> PicStatus {
    guard(|| {
        let v = f(&get(s, "scheme")?.0, &get(g, "graph")?.0)?;
        if !reason.is_null() {
            put_string(reason, v.to_string())?;
        }
        Ok(yes_no(v.is_ok()))
    })
}

/// Linear private-scheme verifier. `reason` (nullable) receives the verdict
/// text, e.g. `privacy_violation(user 3)`.
///
/// # Safety
/// `s`, `g` must be live handles; `reason` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pic_verify_private(
    s: *const PicScheme,
    g: *const PicGraph,
    reason: *mut *mut c_char,
) -> PicStatus {
    verdict(s, g, reason, verify_private)
}

/// Linear weak-privacy verifier for keyless schemes.
///
/// # Safety
/// As for [`pic_verify_private`].
#[no_mangle]
pub unsafe extern "C" fn pic_verify_weak_private(
    s: *const PicScheme,
    g: *const PicGraph,
    reason: *mut *mut c_char,
) -> PicStatus {
    verdict(s, g, reason, verify_weak_private)
}

/// Exhaustive decodability and zero-leakage check. `state_limit = 0` uses
/// `PIC_STATE_LIMIT` or the built-in default.
///
/// # Safety
/// `s`, `g` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn pic_oracle_check_private(
    s: *const PicScheme,
    g: *const PicGraph,
    state_limit: u64,
) -> PicStatus {
    guard(|| {
        let limit = if state_limit == 0 { state_limit_from_env() } else { state_limit };
        let r = oracle_check_private(&get(s, "scheme")?.0, &get(g, "graph")?.0, limit)?;
        Ok(yes_no(r.clean()))
    })
}

/// Minimum sum key rate under the pair (and optionally triple) constraints,
/// as an exact rational string.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pic_keyrate_lp(g: *const PicGraph, triples: bool, out: *mut *mut c_char) -> PicStatus {
    guard(|| {
        let lp = keyrate_lp(&get(g, "graph")?.0, triples)?;
        match lp.outcome.value() {
            Some(v) => {
                put_string(out, v.to_string())?;
                Ok(PicStatus::Ok)
            }
            None => Ok(PicStatus::No),
        }
    })
}

/// Fractional chromatic number of the conflict graph.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pic_fractional_chromatic(g: *const PicGraph, out: *mut *mut c_char) -> PicStatus {
    guard(|| {
        let fc = fractional_chromatic(&conflict_graph(&get(g, "graph")?.0))?;
        put_string(out, fc.value.to_string())?;
        Ok(PicStatus::Ok)
    })
}

/// Minimum normalized number of private multicast sessions.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pic_multicast_min_sessions(g: *const PicGraph, out: *mut *mut c_char) -> PicStatus {
    guard(|| {
        let plan = multicast_min_sessions(&get(g, "graph")?.0)?;
        put_string(out, plan.kappa.to_string())?;
        Ok(PicStatus::Ok)
    })
}

/// Secure clique cover as a JSON list of 1-based blocks, or `PIC_STATUS_NO`.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pic_secure_clique_cover(g: *const PicGraph, out: *mut *mut c_char) -> PicStatus {
    guard(|| match secure_clique_cover(&get(g, "graph")?.0)? {
        Some(c) => {
            let lists = c.to_lists();
            put_string(out, format!("{lists:?}").replace(' ', ""))?;
            Ok(PicStatus::Ok)
        }
        None => Ok(PicStatus::No),
    })
}

/// Polymatroidal outer bound at a rate tuple given as JSON. `PIC_STATUS_NO`
/// means the tuple is certifiably not achievable.
///
/// # Safety
/// `g` must be a live handle; `rates` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pic_polymatroid_check(
    g: *const PicGraph,
    rates: *const c_char,
    exhaustive: bool,
) -> PicStatus {
    guard(|| {
        let g = &get(g, "graph")?.0;
        let t = RateTuple::parse(text(rates, "rates")?, g.n())?;
        let mut inst = PolymatroidInstance::new(g.clone(), t);
        inst.mode = if exhaustive { Pm4Mode::Exhaustive } else { Pm4Mode::Elemental };
        let r = polymatroid_check(&inst)?;
        Ok(yes_no(r.verdict == PolymatroidVerdict::Passes))
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and returns
/// its exit code; the report is stored in `*out` when `out` is not null.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn pic_run(argc: c_int, argv: *const *const c_char, out: *mut *mut c_char) -> c_int {
    let result = catch_unwind(AssertUnwindSafe(|| -> std::result::Result<(c_int, Vec<u8>), Failure> {
        if argc < 0 || (argc > 0 && argv.is_null()) {
            return Err(Failure(PicStatus::NullArgument, "argv is null".into()));
        }
        let mut args = Vec::with_capacity(argc as usize);
        for k in 0..argc as usize {
            args.push(text(*argv.add(k), "argument")?.to_string());
        }
        let mut buf = Vec::new();
        let code = pic_core::cli::run(args, &mut buf);
        Ok((code, buf))
    }));
    match result {
        Ok(Ok((code, buf))) => {
            if !out.is_null() {
                *out = ptr::null_mut();
                let s = String::from_utf8_lossy(&buf).into_owned();
                if put_string(out, s).is_err() {
                    return 2;
                }
            }
            code
        }
        Ok(Err(Failure(_, msg))) => {
            set_error(&msg);
            2
        }
        Err(_) => {
            set_error("internal panic");
            2
        }
    }
}
