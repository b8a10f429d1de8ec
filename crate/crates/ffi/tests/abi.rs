use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use mux_ffi::*;

fn from_json(text: &str) -> *mut MuxMultiplex {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mux_multiplex_from_json(c.as_ptr(), &mut out) }, MuxStatus::Ok);
    out
}

fn last_error() -> String {
    let p = mux_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn q(num: i64, den: i64) -> MuxRational {
    MuxRational { num, den }
}

const TRIANGLE: &str = r#"{"n":3,"layer1":[[0,1],[0,2],[1,2]],"layer2":[[1,2]]}"#;

#[test]
fn counts_through_handles() {
    let h = from_json(TRIANGLE);
    let g = from_json(TRIANGLE);
    let mut inj = 0u64;
    assert_eq!(unsafe { mux_count_injections(h, g, &mut inj) }, MuxStatus::Ok);
    assert_eq!(inj, 2);
    let mut res = MuxCountResult { injections: 0, aut_size: 0, copies: 0 };
    assert_eq!(unsafe { mux_count_copies(h, g, &mut res) }, MuxStatus::Ok);
    assert_eq!(res, MuxCountResult { injections: 2, aut_size: 2, copies: 1 });
    let mut aut = 0u64;
    assert_eq!(unsafe { mux_automorphism_count(h, &mut aut) }, MuxStatus::Ok);
    assert_eq!(aut, 2);
    assert!(mux_last_error_message().is_null());
    unsafe {
        mux_multiplex_free(h);
        mux_multiplex_free(g);
    }
}

#[test]
fn exact_threshold_queries() {
    let h = from_json(TRIANGLE);
    let theta = MuxTheta { theta1: q(1, 4), theta2: q(1, 4), theta12: q(2, 1) };
    let mut d = q(9, 9);
    assert_eq!(unsafe { mux_delta(h, theta, &mut d) }, MuxStatus::Ok);
    assert_eq!(d, q(0, 1));
    let mut label = MuxBalanceLabel::InteriorSatisfiable;
    assert_eq!(unsafe { mux_classify(h, theta, &mut label) }, MuxStatus::Ok);
    assert_eq!(label, MuxBalanceLabel::Unbalanced);
    let strict = MuxTheta { theta1: q(3, 4), theta2: q(3, 4), theta12: q(3, 2) };
    assert_eq!(unsafe { mux_classify(h, strict, &mut label) }, MuxStatus::Ok);
    assert_eq!(label, MuxBalanceLabel::StrictlyBalanced);

    let outside = MuxTheta { theta1: q(1, 1), theta2: q(1, 1), theta12: q(1, 2) };
    assert_eq!(unsafe { mux_classify(h, outside, &mut label) }, MuxStatus::OutsideDomain);
    assert!(last_error().contains("outside the domain"));

    let mut phi = 0.0;
    let mut sig = MuxSignature { v: 0, a: 0, b: 0, c: 0 };
    assert_eq!(unsafe { mux_phi(h, 100, 0.1, 0.1, 0.01, &mut phi, &mut sig) }, MuxStatus::Ok);
    assert!((phi - 100.0).abs() < 1e-9);
    assert_eq!(sig, MuxSignature { v: 2, a: 0, b: 0, c: 1 });
    let mut mean = 0.0;
    assert_eq!(unsafe { mux_exact_mean_injections(h, 100, 0.1, 0.1, 0.01, &mut mean) }, MuxStatus::Ok);
    assert!((mean - 97.02).abs() < 1e-9);
    unsafe { mux_multiplex_free(h) };
}

#[test]
fn sampling_is_seeded() {
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { mux_sample(30, 0.2, 0.3, 0.1, 5, 2, &mut a) }, MuxStatus::Ok);
    assert_eq!(unsafe { mux_sample(30, 0.2, 0.3, 0.1, 5, 2, &mut b) }, MuxStatus::Ok);
    let (mut ja, mut jb) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(mux_multiplex_to_json(a, &mut ja), MuxStatus::Ok);
        assert_eq!(mux_multiplex_to_json(b, &mut jb), MuxStatus::Ok);
        assert_eq!(CStr::from_ptr(ja), CStr::from_ptr(jb));
        assert_eq!(mux_multiplex_n_vertices(a), 30);
        mux_string_free(ja);
        mux_string_free(jb);
        mux_multiplex_free(a);
        mux_multiplex_free(b);
    }
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { mux_sample(30, 0.2, 0.3, 0.25, 5, 2, &mut c) }, MuxStatus::InfeasibleProbabilities);
    assert!(c.is_null());
    assert!(last_error().contains("max(0, p1+p2-1)"));
}

#[test]
fn rejects_bad_input() {
    let mut out = ptr::null_mut();
    let bad = CString::new(r#"{"n":3,"layer1":[[1,1]]}"#).unwrap();
    assert_eq!(unsafe { mux_multiplex_from_json(bad.as_ptr(), &mut out) }, MuxStatus::InvalidMultiplex);
    let junk = CString::new("{").unwrap();
    assert_eq!(unsafe { mux_multiplex_from_json(junk.as_ptr(), &mut out) }, MuxStatus::Parse);
    assert_eq!(unsafe { mux_multiplex_from_json(ptr::null(), &mut out) }, MuxStatus::NullPointer);
    assert!(out.is_null());

    let l1 = [0u32, 1, 1, 2];
    assert_eq!(unsafe { mux_multiplex_from_edges(3, l1.as_ptr(), 2, ptr::null(), 0, &mut out) }, MuxStatus::Ok);
    let mut aut = 0;
    assert_eq!(unsafe { mux_automorphism_count(out, &mut aut) }, MuxStatus::Ok);
    assert_eq!(aut, 2);
    let theta = MuxTheta { theta1: q(1, 0), theta2: q(1, 1), theta12: q(1, 1) };
    let mut d = q(0, 1);
    assert_eq!(unsafe { mux_delta(out, theta, &mut d) }, MuxStatus::InvalidArgument);
    unsafe { mux_multiplex_free(out) };
    unsafe { mux_multiplex_free(ptr::null_mut()) };
}

#[test]
fn generated_header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mux.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "MuxMultiplex",
        "MUX_STATUS_OK",
        "mux_multiplex_from_json",
        "mux_multiplex_free",
        "mux_count_copies",
        "mux_delta",
        "mux_last_error_message",
    ] {
        assert!(text.contains(name), "{name} missing from mux.h");
    }
    // syntax check with the system C compiler when one is present
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() {
        assert!(status.success());
    }
}
