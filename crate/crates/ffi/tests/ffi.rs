use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    pic_string_free(p);
    s
}

unsafe fn graph(json: &str) -> *mut PicGraph {
    let mut g = ptr::null_mut();
    assert_eq!(pic_graph_from_json(c(json).as_ptr(), &mut g), PicStatus::Ok);
    g
}

const CYCLE: &str = r#"{"n":3,"side_info":[[2],[3],[1]]}"#;
const TWO_AHEAD: &str = r#"{"n":5,"side_info":[[2,3],[3,4],[4,5],[5,1],[1,2]]}"#;

#[test]
fn feasibility_and_witness() {
    unsafe {
        let g = graph(CYCLE);
        assert_eq!(pic_graph_users(g), 3);
        let mut w = [0usize; 2];
        assert_eq!(pic_is_feasible(g, c("110,101,011").as_ptr(), w.as_mut_ptr()), PicStatus::Ok);
        assert_eq!(pic_is_feasible(g, c("110").as_ptr(), w.as_mut_ptr()), PicStatus::No);
        assert_eq!(w, [1, 2]);
        let mut s = ptr::null_mut();
        assert_eq!(pic_canonical_scheme(g, c("110").as_ptr(), &mut s), PicStatus::Infeasible);
        assert!(s.is_null());
        assert!(CStr::from_ptr(pic_last_error()).to_str().unwrap().contains("(1,2)"));
        pic_graph_free(g);
    }
}

#[test]
fn scheme_round_trip_and_verdicts() {
    unsafe {
        let g = graph(CYCLE);
        let json = r#"{"q":2,"n":1,"r":2,"G":[[[1],[0]],[[1],[1]],[[0],[1]]],"keys":[{"pattern":"101","H":[[1],[0]]},{"pattern":"110","H":[[1],[1]]},{"pattern":"011","H":[[0],[1]]}]}"#;
        let mut s = ptr::null_mut();
        assert_eq!(pic_scheme_from_json(c(json).as_ptr(), &mut s), PicStatus::Ok);
        let mut reason = ptr::null_mut();
        assert_eq!(pic_verify_private(s, g, &mut reason), PicStatus::Ok);
        assert_eq!(take(reason), "ok");
        assert_eq!(pic_oracle_check_private(s, g, 0), PicStatus::Ok);
        let mut rate = ptr::null_mut();
        assert_eq!(pic_scheme_rate(s, &mut rate), PicStatus::Ok);
        assert_eq!(take(rate), r#"{"R":"2","key_rates":{"011":"1","101":"1","110":"1"}}"#);
        let mut back = ptr::null_mut();
        assert_eq!(pic_scheme_to_json(s, &mut back), PicStatus::Ok);
        let mut s2 = ptr::null_mut();
        let text = take(back);
        assert_eq!(pic_scheme_from_json(c(&text).as_ptr(), &mut s2), PicStatus::Ok);
        pic_scheme_free(s2);

        let leaky = r#"{"q":2,"n":1,"r":2,"G":[[[1],[0]],[[1],[1]],[[0],[1]]],"keys":[{"pattern":"101","H":[[1],[0]]},{"pattern":"011","H":[[0],[1]]}]}"#;
        let mut bad = ptr::null_mut();
        assert_eq!(pic_scheme_from_json(c(leaky).as_ptr(), &mut bad), PicStatus::Ok);
        assert_eq!(pic_verify_private(bad, g, ptr::null_mut()), PicStatus::No);
        assert_eq!(pic_oracle_check_private(bad, g, 0), PicStatus::No);
        pic_scheme_free(bad);
        pic_scheme_free(s);
        pic_graph_free(g);
    }
}

#[test]
fn rational_values() {
    unsafe {
        let g = graph(TWO_AHEAD);
        let mut v = ptr::null_mut();
        assert_eq!(pic_keyrate_lp(g, false, &mut v), PicStatus::Ok);
        assert_eq!(take(v), "10/3");
        assert_eq!(pic_fractional_chromatic(g, &mut v), PicStatus::Ok);
        assert_eq!(take(v), "5");
        pic_graph_free(g);
        let k = graph(r#"{"n":3,"side_info":[[2,3],[1,3],[1,2]]}"#);
        assert_eq!(pic_multicast_min_sessions(k, &mut v), PicStatus::Ok);
        assert_eq!(take(v), "1");
        assert_eq!(pic_secure_clique_cover(k, &mut v), PicStatus::Ok);
        assert_eq!(take(v), "[[1,2,3]]");
        pic_graph_free(k);
    }
}

#[test]
fn polymatroid_bound() {
    unsafe {
        let g = graph(CYCLE);
        let ok = c(r#"{"R":"2","key_rates":{"110":"1","101":"1","011":"1"}}"#);
        let low = c(r#"{"R":"1","key_rates":{"110":"1","101":"1","011":"1"}}"#);
        assert_eq!(pic_polymatroid_check(g, ok.as_ptr(), false), PicStatus::Ok);
        assert_eq!(pic_polymatroid_check(g, low.as_ptr(), false), PicStatus::No);
        pic_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(pic_graph_from_json(ptr::null(), &mut g), PicStatus::NullArgument);
        assert_eq!(pic_graph_from_json(c("{").as_ptr(), &mut g), PicStatus::Parse);
        assert_eq!(pic_graph_from_json(c(r#"{"n":2,"side_info":[[1],[]]}"#).as_ptr(), &mut g), PicStatus::Invalid);
        assert!(g.is_null());
        let bad = [0xffu8, 0];
        assert_eq!(pic_graph_from_json(bad.as_ptr().cast(), &mut g), PicStatus::Utf8);
        let two = graph(r#"{"n":2,"side_info":[[],[]]}"#);
        let mut s = ptr::null_mut();
        let json = r#"{"q":2,"n":1,"r":1,"G":[[[1]],[[1]],[[1]]],"keys":[]}"#;
        assert_eq!(pic_scheme_from_json(c(json).as_ptr(), &mut s), PicStatus::Ok);
        assert_eq!(pic_verify_private(s, two, ptr::null_mut()), PicStatus::Dimension);
        assert_eq!(pic_verify_private(ptr::null(), two, ptr::null_mut()), PicStatus::NullArgument);
        pic_scheme_free(s);
        pic_graph_free(two);
        pic_graph_free(ptr::null_mut());
        assert!(!CStr::from_ptr(pic_version()).to_bytes().is_empty());
    }
}

#[test]
fn cli_through_the_abi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"n":2,"side_info":[[],[]]}"#).unwrap();
    let args: Vec<CString> =
        ["pic", "feasible", "--json", "--graph", path.to_str().unwrap(), "--ks", "11"].iter().map(|s| c(s)).collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(pic_run(ptrs.len() as i32, ptrs.as_ptr(), &mut out), 1);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["witness"], serde_json::json!([1, 2]));
    }
}

/// Compiles the C example against the generated header and the static
/// library and runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/pic.h");
    assert!(std::fs::read_to_string(&header).unwrap().contains("PicStatus pic_verify_private("));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libpic_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or no static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("examples/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("witness 1 2") && text.contains("kappa 3") && text.ends_with("ok\n"), "{text}");
}
