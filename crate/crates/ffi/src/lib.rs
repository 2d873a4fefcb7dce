//! C ABI over the gesture engine.
//!
//! Sessions are opaque handles created with `gp_session_new` and released
//! with `gp_session_free`. Every fallible call returns a `GpStatus`; the
//! message of the most recent failure on the calling thread is available
//! from `gp_last_error`. Panics never cross the boundary.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gesplayer::config::EngineConfig;
use gesplayer::control::ControlCommand;
use gesplayer::fsm::{ControlKind, EventPhase};
use gesplayer::geometry::{make_segment, project_clamped, Point2};
use gesplayer::landmark::FrameError;
use gesplayer::session::Session;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedRecord = 3,
    SchemaViolation = 4,
    ValueOutOfRange = 5,
    NonMonotonicTimestamp = 6,
    InvalidConfig = 7,
    SegmentTooShort = 8,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpKind {
    Seek = 0,
    Volume = 1,
    Brightness = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpPhase {
    Begin = 0,
    Update = 1,
    End = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpCommand {
    pub t_ms: u64,
    pub kind: GpKind,
    pub phase: GpPhase,
    /// In [0, 1].
    pub value: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpPlayer {
    pub position: f64,
    pub volume: f64,
    pub brightness: f64,
    pub playing: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpProjection {
    pub t: f64,
    pub dist: f64,
}

/// Opaque session handle.
pub struct GpSession {
    session: Session,
    pending: VecDeque<ControlCommand>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: GpStatus, msg: impl Into<String>) -> GpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn guard(f: impl FnOnce() -> GpStatus) -> GpStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(GpStatus::Panic, "internal panic"))
}

fn frame_status(e: &FrameError) -> GpStatus {
    match e {
        FrameError::MalformedRecord(_) => GpStatus::MalformedRecord,
        FrameError::SchemaViolation(_) => GpStatus::SchemaViolation,
        FrameError::ValueOutOfRange(_) => GpStatus::ValueOutOfRange,
        FrameError::NonMonotonicTimestamp { .. } => GpStatus::NonMonotonicTimestamp,
    }
}

impl From<&ControlCommand> for GpCommand {
    fn from(c: &ControlCommand) -> Self {
        GpCommand {
            t_ms: c.t_ms,
            kind: match c.kind {
                ControlKind::Seek => GpKind::Seek,
                ControlKind::Volume => GpKind::Volume,
                ControlKind::Brightness => GpKind::Brightness,
            },
            phase: match c.phase {
                EventPhase::Begin => GpPhase::Begin,
                EventPhase::Update => GpPhase::Update,
                EventPhase::End => GpPhase::End,
            },
            value: c.value,
        }
    }
}

/// Creates a session. `config_text` is a NUL-terminated `key = value`
/// configuration, or NULL for defaults.
///
/// # Safety
/// `config_text` must be NULL or a valid C string; `out` must be a valid
/// pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gp_session_new(
    config_text: *const c_char,
    out: *mut *mut GpSession,
) -> GpStatus {
    guard(|| {
        if out.is_null() {
            return fail(GpStatus::NullPointer, "out is NULL");
        }
        let config = if config_text.is_null() {
            EngineConfig::default()
        } else {
            let Ok(text) = CStr::from_ptr(config_text).to_str() else {
                return fail(GpStatus::InvalidUtf8, "config is not UTF-8");
            };
            match text.parse::<EngineConfig>() {
                Ok(c) => c,
                Err(e) => return fail(GpStatus::InvalidConfig, e.to_string()),
            }
        };
        let handle = Box::new(GpSession {
            session: Session::new("ffi", config),
            pending: VecDeque::new(),
        });
        *out = Box::into_raw(handle);
        GpStatus::Ok
    })
}

/// Releases a session. NULL is ignored.
///
/// # Safety
/// `session` must be NULL or a handle from `gp_session_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gp_session_free(session: *mut GpSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Feeds one wire-format frame record (no trailing newline required).
/// Resulting commands are queued for `gp_session_next_command`. A rejected
/// record leaves the session unchanged.
///
/// # Safety
/// `session` must be a live handle; `record` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn gp_session_push_frame(
    session: *mut GpSession,
    record: *const u8,
    len: usize,
) -> GpStatus {
    guard(|| {
        let Some(s) = session.as_mut() else {
            return fail(GpStatus::NullPointer, "session is NULL");
        };
        if record.is_null() {
            return fail(GpStatus::NullPointer, "record is NULL");
        }
        let bytes = std::slice::from_raw_parts(record, len);
        match s.session.push_record(bytes) {
            Ok(applied) => {
                s.pending.extend(applied.into_iter().map(|a| a.command));
                GpStatus::Ok
            }
            Err(e) => fail(frame_status(&e), e.to_string()),
        }
    })
}

/// Number of queued commands.
///
/// # Safety
/// `session` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gp_session_pending(session: *const GpSession) -> usize {
    session.as_ref().map_or(0, |s| s.pending.len())
}

/// Pops the oldest queued command into `out`. Returns false when the queue
/// is empty or an argument is NULL.
///
/// # Safety
/// `session` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_session_next_command(
    session: *mut GpSession,
    out: *mut GpCommand,
) -> bool {
    let (Some(s), false) = (session.as_mut(), out.is_null()) else {
        return false;
    };
    match s.pending.pop_front() {
        Some(c) => {
            *out = GpCommand::from(&c);
            true
        }
        None => false,
    }
}

/// Current player model of the session.
///
/// # Safety
/// `session` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_session_player(
    session: *const GpSession,
    out: *mut GpPlayer,
) -> GpStatus {
    let Some(s) = session.as_ref() else {
        return fail(GpStatus::NullPointer, "session is NULL");
    };
    if out.is_null() {
        return fail(GpStatus::NullPointer, "out is NULL");
    }
    let p = s.session.player();
    *out = GpPlayer {
        position: p.position,
        volume: p.volume,
        brightness: p.brightness,
        playing: p.playing,
    };
    GpStatus::Ok
}

/// Clamped projection of (px, py) onto the segment (ox, oy) → (tx, ty).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gp_project_clamped(
    px: f64,
    py: f64,
    ox: f64,
    oy: f64,
    tx: f64,
    ty: f64,
    min_segment_len: f64,
    out: *mut GpProjection,
) -> GpStatus {
    if out.is_null() {
        return fail(GpStatus::NullPointer, "out is NULL");
    }
    match make_segment(Point2::new(ox, oy), Point2::new(tx, ty), min_segment_len) {
        Ok(seg) => {
            let pr = project_clamped(Point2::new(px, py), &seg);
            *out = GpProjection {
                t: pr.t,
                dist: pr.dist,
            };
            GpStatus::Ok
        }
        Err(e) => fail(GpStatus::SegmentTooShort, e.to_string()),
    }
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `cap > 0`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gp_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn gp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
