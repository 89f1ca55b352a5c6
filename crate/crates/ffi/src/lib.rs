//! C ABI over the search bench.
//!
//! Ownership: every `*mut` handle returned through an out-parameter is
//! owned by the caller and must be released with the matching `tl_*_free`.
//! Handles are not thread-safe; share nothing across threads. Error
//! messages are per-thread: after any call returns a non-Ok status,
//! `tl_last_error` on the same thread describes it until the next failure
//! overwrites the buffer.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use treelab::game::{fixture::parse_fixture, GameSpec, Position};
use treelab::minimal_graphs::{
    compute_armg, compute_lfmg, compute_lfmt, compute_rmt, MetrologyError, MinGraphConfig,
    NodeCountReport, Quantity,
};
use treelab::search::{EngineKind, SearchConfig, Searcher};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    NullArgument = 1,
    BadSpec = 2,
    BadFixture = 3,
    BadConfig = 4,
    BudgetExceeded = 5,
    TableSaturated = 6,
    ValueMismatch = 7,
    Internal = 8,
}

/// Node counts of one measurement. `total` is `leaf + interior +
/// tt_cutoffs`; `f` is the root value the measurement proves.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TlCounts {
    pub leaf: u64,
    pub interior: u64,
    pub tt_cutoffs: u64,
    pub total: u64,
    pub f: i32,
}

pub struct TlGame(GameSpec);
pub struct TlPos(Position);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: TlStatus, msg: impl std::fmt::Display) -> TlStatus {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("NULs stripped"));
    status
}

fn guarded(body: impl FnOnce() -> TlStatus) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(TlStatus::Internal, "internal panic"),
    }
}

/// Reads a caller string; the caller promises a NUL-terminated pointer.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TlStatus> {
    if ptr.is_null() {
        return Err(fail(TlStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(TlStatus::BadSpec, format!("argument is not UTF-8: {e}")))
}

fn metrology_status(e: &MetrologyError) -> TlStatus {
    match e {
        MetrologyError::Budget { .. } => TlStatus::BudgetExceeded,
        MetrologyError::Saturated { .. } => TlStatus::TableSaturated,
        MetrologyError::ValueMismatch { .. } => TlStatus::ValueMismatch,
        MetrologyError::BadConfig(_) => TlStatus::BadConfig,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a game spec: "othello6", "minicheckers", or a synthetic
/// parameter line like "seed=7 w=3 d=6 t=0.5".
///
/// # Safety
/// `spec` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_game_parse(spec: *const c_char, out: *mut *mut TlGame) -> TlStatus {
    if out.is_null() {
        return fail(TlStatus::NullArgument, "null out pointer");
    }
    let text = match read_str(spec) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match GameSpec::parse(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(TlGame(g)));
            TlStatus::Ok
        }
        Err(e) => fail(TlStatus::BadSpec, e),
    }
}

/// Releases a game handle. Null is a no-op.
///
/// # Safety
/// `game` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn tl_game_free(game: *mut TlGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Builds the game's start position.
///
/// # Safety
/// `game` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_game_initial(game: *const TlGame, out: *mut *mut TlPos) -> TlStatus {
    if game.is_null() || out.is_null() {
        return fail(TlStatus::NullArgument, "null argument");
    }
    *out = Box::into_raw(Box::new(TlPos((*game).0.initial())));
    TlStatus::Ok
}

/// Parses one fixture file's text into a game and a position.
///
/// # Safety
/// `text` must be NUL-terminated; both out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tl_fixture_parse(
    text: *const c_char,
    out_game: *mut *mut TlGame,
    out_pos: *mut *mut TlPos,
) -> TlStatus {
    if out_game.is_null() || out_pos.is_null() {
        return fail(TlStatus::NullArgument, "null out pointer");
    }
    let body = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_fixture(body) {
        Ok((g, p)) => {
            *out_game = Box::into_raw(Box::new(TlGame(g)));
            *out_pos = Box::into_raw(Box::new(TlPos(p)));
            TlStatus::Ok
        }
        Err(e) => fail(TlStatus::BadFixture, e),
    }
}

/// Releases a position handle. Null is a no-op.
///
/// # Safety
/// `pos` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn tl_pos_free(pos: *mut TlPos) {
    if !pos.is_null() {
        drop(Box::from_raw(pos));
    }
}

/// Position hash key; 0 for a null handle.
///
/// # Safety
/// `pos` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tl_pos_hash(pos: *const TlPos) -> u64 {
    if pos.is_null() {
        return 0;
    }
    (*pos).0.hash
}

/// Fixed-depth iterative-deepening search. `engine` is one of
/// "alphabeta", "negascout", "aspnegascout", "mtdf". Writes the root value
/// to `out_value`.
///
/// # Safety
/// `game` and `pos` must be live handles from this library, `engine`
/// NUL-terminated, `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_search(
    game: *const TlGame,
    pos: *const TlPos,
    depth: u32,
    engine: *const c_char,
    out_value: *mut i32,
) -> TlStatus {
    if game.is_null() || pos.is_null() || out_value.is_null() {
        return fail(TlStatus::NullArgument, "null argument");
    }
    let engine = match read_str(engine) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let kind: EngineKind = match engine.parse() {
        Ok(k) => k,
        Err(e) => return fail(TlStatus::BadConfig, e),
    };
    if depth == 0 {
        return fail(TlStatus::BadConfig, "depth must be at least 1");
    }
    let g = &(*game).0;
    let p = &(*pos).0;
    guarded(|| {
        let cfg = SearchConfig {
            node_budget: Some(500_000_000),
            ..SearchConfig::default()
        };
        let mut s = Searcher::new(g, cfg, 18);
        match s.iterative(p, depth, kind) {
            Ok(r) => {
                *out_value = r.value;
                TlStatus::Ok
            }
            Err(e) => fail(TlStatus::BudgetExceeded, e),
        }
    })
}

/// One minimal-graph measurement. `quantity` is "lfmt", "lfmg", "rmt", or
/// "armg"; `mm_d` applies to "armg" only (plies redesignated above the
/// leaves) and is ignored otherwise. Engine footprints come from
/// `tl_search`, not from here.
///
/// # Safety
/// `game` and `pos` must be live handles from this library, `quantity`
/// NUL-terminated, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_metrology(
    game: *const TlGame,
    pos: *const TlPos,
    depth: u32,
    quantity: *const c_char,
    mm_d: u32,
    out: *mut TlCounts,
) -> TlStatus {
    if game.is_null() || pos.is_null() || out.is_null() {
        return fail(TlStatus::NullArgument, "null argument");
    }
    let name = match read_str(quantity) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let quantity: Quantity = match name.parse() {
        Ok(q) => q,
        Err(e) => return fail(TlStatus::BadConfig, e),
    };
    if depth == 0 {
        return fail(TlStatus::BadConfig, "depth must be at least 1");
    }
    let g = &(*game).0;
    let p = &(*pos).0;
    guarded(|| {
        let cfg = MinGraphConfig {
            tt_bits: 18,
            budget: 200_000_000,
        };
        let computed: Result<NodeCountReport, MetrologyError> = match quantity {
            Quantity::Lfmt => compute_lfmt(g, p, depth, &cfg),
            Quantity::Lfmg => compute_lfmg(g, p, depth, &cfg),
            Quantity::Rmt => compute_rmt(g, p, depth, &cfg),
            Quantity::Armg => compute_armg(g, p, depth, mm_d, &cfg),
            Quantity::Actual => {
                return fail(
                    TlStatus::BadConfig,
                    "engine footprints come from tl_search",
                )
            }
        };
        match computed {
            Ok(r) => {
                *out = TlCounts {
                    leaf: r.leaf_count,
                    interior: r.interior_count,
                    tt_cutoffs: r.tt_cutoffs,
                    total: r.total_node_accesses(),
                    f: r.f,
                };
                TlStatus::Ok
            }
            Err(e) => {
                let status = metrology_status(&e);
                fail(status, e)
            }
        }
    })
}
