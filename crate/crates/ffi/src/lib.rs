//! C ABI over `mux-core`.
//!
//! Multiplexes cross the boundary as opaque `MuxMultiplex` handles created
//! by `mux_multiplex_from_json` / `mux_multiplex_from_edges` /
//! `mux_sample` and released with `mux_multiplex_free`. Every fallible call
//! returns a `MuxStatus`; on failure the message is kept per thread and
//! read back with `mux_last_error_message`. Results go through out-pointers
//! that are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mux_core::counting::{count_copies, count_injections};
use mux_core::multiplex::automorphism_count;
use mux_core::rational::Rational;
use mux_core::sampler::{sample, ProbTriple, SeedSpec};
use mux_core::stats::exact_mean_injections;
use mux_core::threshold::{self, BalanceLabel, ThetaPoint};
use mux_core::{Multiplex, MuxError};

/// Opaque multiplex handle.
pub struct MuxMultiplex {
    inner: Multiplex,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidMultiplex = 4,
    InfeasibleProbabilities = 5,
    CapExceeded = 6,
    OutsideDomain = 7,
    Overflow = 8,
    InvalidArgument = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuxBalanceLabel {
    InteriorSatisfiable = 0,
    ExteriorUnsatisfiable = 1,
    StrictlyBalanced = 2,
    BalancedNotStrict = 3,
    Unbalanced = 4,
}

impl From<BalanceLabel> for MuxBalanceLabel {
    fn from(l: BalanceLabel) -> Self {
        match l {
            BalanceLabel::InteriorSatisfiable => MuxBalanceLabel::InteriorSatisfiable,
            BalanceLabel::ExteriorUnsatisfiable => MuxBalanceLabel::ExteriorUnsatisfiable,
            BalanceLabel::StrictlyBalanced => MuxBalanceLabel::StrictlyBalanced,
            BalanceLabel::BalancedNotStrict => MuxBalanceLabel::BalancedNotStrict,
            BalanceLabel::Unbalanced => MuxBalanceLabel::Unbalanced,
        }
    }
}

/// `num / den` with `den > 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuxRational {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuxTheta {
    pub theta1: MuxRational,
    pub theta2: MuxRational,
    pub theta12: MuxRational,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuxSignature {
    pub v: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuxCountResult {
    pub injections: u64,
    pub aut_size: u64,
    pub copies: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &MuxError) -> MuxStatus {
    match e {
        MuxError::SelfLoop(_)
        | MuxError::VertexOutOfRange { .. }
        | MuxError::DuplicateEdge(..)
        | MuxError::UnorderedEdge(..)
        | MuxError::NoEdges
        | MuxError::TooFewVertices { .. } => MuxStatus::InvalidMultiplex,
        MuxError::CapExceeded { .. } => MuxStatus::CapExceeded,
        MuxError::InfeasibleProbabilities { .. } => MuxStatus::InfeasibleProbabilities,
        MuxError::ThetaOutsideDomain(_) | MuxError::NotOnThresholdSurface(..) => MuxStatus::OutsideDomain,
        MuxError::Parse(_) | MuxError::Io(_) => MuxStatus::Parse,
        _ => MuxStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (MuxStatus, String)>) -> MuxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MuxStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside mux".into());
            MuxStatus::Panic
        }
    }
}

fn core_err(e: MuxError) -> (MuxStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (MuxStatus, String) {
    (MuxStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(p: *const MuxMultiplex, what: &str) -> Result<&'a Multiplex, (MuxStatus, String)> {
    // SAFETY: non-null handles come from this library and are live per the caller contract.
    unsafe { p.as_ref() }.map(|m| &m.inner).ok_or_else(|| null_err(what))
}

fn to_u64(x: u128) -> Result<u64, (MuxStatus, String)> {
    u64::try_from(x).map_err(|_| (MuxStatus::Overflow, format!("count {x} does not fit in 64 bits")))
}

fn rational(q: MuxRational) -> Result<Rational, (MuxStatus, String)> {
    if q.den == 0 {
        return Err((MuxStatus::InvalidArgument, "zero denominator".into()));
    }
    Ok(Rational::new(q.num as i128, q.den as i128))
}

fn theta_point(t: MuxTheta) -> Result<ThetaPoint, (MuxStatus, String)> {
    Ok(ThetaPoint::new(rational(t.theta1)?, rational(t.theta2)?, rational(t.theta12)?))
}

fn boxed(m: Multiplex) -> *mut MuxMultiplex {
    Box::into_raw(Box::new(MuxMultiplex { inner: m }))
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next `mux_*` call on the same thread.
#[no_mangle]
pub extern "C" fn mux_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses the JSON file format `{"n": .., "layer1": [[u,v],..], "layer2": [[u,v],..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mux_multiplex_from_json(json: *const c_char, out: *mut *mut MuxMultiplex) -> MuxStatus {
    guard(|| {
        if json.is_null() {
            return Err(null_err("json"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        // SAFETY: checked non-null; NUL termination is the caller's contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| (MuxStatus::InvalidUtf8, e.to_string()))?;
        let m = Multiplex::from_json(text).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = boxed(m) };
        Ok(())
    })
}

/// Builds a multiplex from flat endpoint arrays: `layer1` holds
/// `2 * layer1_len` vertices `u0, v0, u1, v1, …`, likewise `layer2`.
///
/// # Safety
/// Each array must hold at least twice its length in readable `u32`s (or
/// be null with length 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mux_multiplex_from_edges(
    n: u32,
    layer1: *const u32,
    layer1_len: usize,
    layer2: *const u32,
    layer2_len: usize,
    out: *mut *mut MuxMultiplex,
) -> MuxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let read = |p: *const u32, len: usize, what: &str| -> Result<Vec<(u32, u32)>, (MuxStatus, String)> {
            if len == 0 {
                return Ok(Vec::new());
            }
            if p.is_null() {
                return Err(null_err(what));
            }
            // SAFETY: the caller guarantees 2 * len readable elements.
            let flat = unsafe { std::slice::from_raw_parts(p, 2 * len) };
            Ok(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
        };
        let l1 = read(layer1, layer1_len, "layer1")?;
        let l2 = read(layer2, layer2_len, "layer2")?;
        let m = Multiplex::new(n, &l1, &l2).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = boxed(m) };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mux_multiplex_free(m: *mut MuxMultiplex) {
    if !m.is_null() {
        // SAFETY: ownership returns to Rust exactly once per the caller contract.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mux_multiplex_n_vertices(m: *const MuxMultiplex) -> u32 {
    // SAFETY: null or live per the caller contract.
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.n_vertices())
}

/// Serialises to the JSON file format; free the string with `mux_string_free`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_multiplex_to_json(m: *const MuxMultiplex, out: *mut *mut c_char) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let m = unsafe { handle(m, "multiplex") }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let c = CString::new(m.to_json()).map_err(|e| (MuxStatus::Panic, e.to_string()))?;
        // SAFETY: checked non-null.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn mux_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Number of injective homomorphisms `motif → graph`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_count_injections(
    motif: *const MuxMultiplex,
    graph: *const MuxMultiplex,
    out: *mut u64,
) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let (h, g) = unsafe { (handle(motif, "motif")?, handle(graph, "graph")?) };
        if out.is_null() {
            return Err(null_err("out"));
        }
        let x = to_u64(count_injections(h, g).map_err(core_err)?)?;
        // SAFETY: checked non-null.
        unsafe { *out = x };
        Ok(())
    })
}

/// Injections, `|Aut(motif)|` and copies.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_count_copies(
    motif: *const MuxMultiplex,
    graph: *const MuxMultiplex,
    out: *mut MuxCountResult,
) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let (h, g) = unsafe { (handle(motif, "motif")?, handle(graph, "graph")?) };
        if out.is_null() {
            return Err(null_err("out"));
        }
        let r = count_copies(h, g).map_err(core_err)?;
        let res = MuxCountResult { injections: to_u64(r.injections)?, aut_size: r.aut_size, copies: to_u64(r.copies)? };
        // SAFETY: checked non-null.
        unsafe { *out = res };
        Ok(())
    })
}

/// # Safety
/// `m` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_automorphism_count(m: *const MuxMultiplex, out: *mut u64) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let h = unsafe { handle(m, "multiplex") }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let a = automorphism_count(h).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = a };
        Ok(())
    })
}

/// Exact `Δ_H(θ)`; fails with `MUX_STATUS_OVERFLOW` when the reduced
/// fraction does not fit in 64 bits.
///
/// # Safety
/// `m` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_delta(m: *const MuxMultiplex, theta: MuxTheta, out: *mut MuxRational) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let h = unsafe { handle(m, "multiplex") }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let d = threshold::delta(h, &theta_point(theta)?).map_err(core_err)?.value;
        let fit = |x: i128| i64::try_from(x).map_err(|_| (MuxStatus::Overflow, "delta does not fit in 64 bits".to_string()));
        let r = MuxRational { num: fit(*d.numer())?, den: fit(*d.denom())? };
        // SAFETY: checked non-null.
        unsafe { *out = r };
        Ok(())
    })
}

/// Balance label at `θ ∈ Θ`.
///
/// # Safety
/// `m` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_classify(m: *const MuxMultiplex, theta: MuxTheta, out: *mut MuxBalanceLabel) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let h = unsafe { handle(m, "multiplex") }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let label = threshold::classify_balance(h, &theta_point(theta)?).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = label.into() };
        Ok(())
    })
}

/// `Φ_H(n, p)` and its minimising signature; either out-pointer may be null.
///
/// # Safety
/// `m` must be live; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn mux_phi(
    m: *const MuxMultiplex,
    n: u64,
    p1: f64,
    p2: f64,
    p12: f64,
    value: *mut f64,
    argmin: *mut MuxSignature,
) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let h = unsafe { handle(m, "multiplex") }?;
        let p = ProbTriple::new(p1, p2, p12).map_err(core_err)?;
        let r = threshold::phi(h, n, &p).map_err(core_err)?;
        // SAFETY: each pointer is checked before the write.
        unsafe {
            if let Some(v) = value.as_mut() {
                *v = r.value;
            }
            if let Some(s) = argmin.as_mut() {
                *s = MuxSignature { v: r.argmin.v, a: r.argmin.a, b: r.argmin.b, c: r.argmin.c };
            }
        }
        Ok(())
    })
}

/// One draw of `G(n, p1, p2, p12)` on stream `(seed, rep)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mux_sample(
    n: u32,
    p1: f64,
    p2: f64,
    p12: f64,
    seed: u64,
    rep: u64,
    out: *mut *mut MuxMultiplex,
) -> MuxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let p = ProbTriple::new(p1, p2, p12).map_err(core_err)?;
        let g = sample(n, &p, SeedSpec::new(seed, rep));
        // SAFETY: checked non-null.
        unsafe { *out = boxed(g) };
        Ok(())
    })
}

/// `(n)_v · p1^a · p2^b · p12^c`.
///
/// # Safety
/// `m` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mux_exact_mean_injections(
    m: *const MuxMultiplex,
    n: u64,
    p1: f64,
    p2: f64,
    p12: f64,
    out: *mut f64,
) -> MuxStatus {
    guard(|| {
        // SAFETY: caller contract.
        let h = unsafe { handle(m, "multiplex") }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let p = ProbTriple::new(p1, p2, p12).map_err(core_err)?;
        let x = exact_mean_injections(h, n, &p).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = x };
        Ok(())
    })
}
