//! C ABI over `hwyimpact`.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Every fallible call returns a [`HwyStatus`]; on failure the
//! message is available from [`hwy_last_error_message`] on the same thread.
//! Strings returned through out-parameters are NUL-terminated UTF-8 and must
//! be released with [`hwy_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use hwyimpact::clean::{clean_str, CleanedTweet, StopwordList};
use hwyimpact::cli::{run_assess, Overrides};
use hwyimpact::lexicon::{builtin_harvey_lexicon, load_lexicon, Lexicon};
use hwyimpact::mapper::{MappingConfig, Mapper};
use hwyimpact::Error;
use serde_json::json;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HwyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Lexicon = 4,
    Io = 5,
    Ingest = 6,
    Config = 7,
    Panic = 8,
}

/// Validated highway lexicon.
pub struct HwyLexicon(Lexicon);

/// Compiled matcher plus the default stopword list.
pub struct HwyMapper {
    mapper: Mapper,
    stopwords: StopwordList,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NUL bytes removed")));
}

fn status_of(e: &Error) -> HwyStatus {
    match e {
        Error::Lexicon(_) => HwyStatus::Lexicon,
        Error::Io { .. } => HwyStatus::Io,
        Error::Ingest(_) | Error::Rainfall(_) => HwyStatus::Ingest,
        Error::Config(_) | Error::Phase(_) | Error::Stopwords(_) => HwyStatus::Config,
        Error::Geo(_) => HwyStatus::InvalidArgument,
        Error::InFile { source, .. } => status_of(source),
    }
}

struct Fail(HwyStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HwyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HwyStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HwyStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(HwyStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HwyStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(HwyStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(HwyStatus::InvalidArgument, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_lexicon(out: *mut *mut HwyLexicon, lex: Lexicon) {
    *out = Box::into_raw(Box::new(HwyLexicon(lex)));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hwy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hwy_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn hwy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_builtin(out: *mut *mut HwyLexicon) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        put_lexicon(out, builtin_harvey_lexicon());
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_from_json(json: *const c_char, out: *mut *mut HwyLexicon) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(json, "json")?;
        let lex = Lexicon::from_json(text).map_err(Error::from)?;
        put_lexicon(out, lex);
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_load(path: *const c_char, out: *mut *mut HwyLexicon) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let p = str_arg(path, "path")?;
        put_lexicon(out, load_lexicon(Path::new(p))?);
        Ok(())
    })
}

/// Serializes the lexicon to JSON.
///
/// # Safety
/// `lex` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_to_json(lex: *const HwyLexicon, out: *mut *mut c_char) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let lex = lex.as_ref().ok_or(Fail(HwyStatus::NullPointer, "lexicon is null".into()))?;
        write_string(out, lex.0.to_json())
    })
}

/// Number of highway entries, or 0 for a null handle.
///
/// # Safety
/// `lex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_len(lex: *const HwyLexicon) -> usize {
    lex.as_ref().map_or(0, |l| l.0.entries().len())
}

/// # Safety
/// `lex` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn hwy_lexicon_free(lex: *mut HwyLexicon) {
    if !lex.is_null() {
        drop(Box::from_raw(lex));
    }
}

/// Compiles a mapper from a copy of `lex`; the lexicon handle stays owned by the caller.
///
/// # Safety
/// `lex` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_mapper_new(
    lex: *const HwyLexicon,
    adjacency_window: usize,
    out: *mut *mut HwyMapper,
) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let lex = lex.as_ref().ok_or(Fail(HwyStatus::NullPointer, "lexicon is null".into()))?;
        let cfg = MappingConfig::new(adjacency_window)
            .map_err(|e| Fail(HwyStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(HwyMapper {
            mapper: Mapper::new(lex.0.clone(), cfg),
            stopwords: StopwordList::default(),
        }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn hwy_mapper_free(m: *mut HwyMapper) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Cleans and maps raw text. Writes a JSON object
/// `{"tokens":[...],"highways":[...],"evidence":[{...}]}`.
///
/// # Safety
/// `m` must be a live handle, `text` a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_mapper_map_text(
    m: *const HwyMapper,
    text: *const c_char,
    out: *mut *mut c_char,
) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let m = m.as_ref().ok_or(Fail(HwyStatus::NullPointer, "mapper is null".into()))?;
        let text = str_arg(text, "text")?;
        let cleaned = CleanedTweet {
            record_id: String::new(),
            tokens: clean_str(text, &m.stopwords),
        };
        let result = m.mapper.map_tweet(&cleaned);
        let evidence: Vec<_> = result
            .matches
            .iter()
            .map(|hm| {
                let ev = &hm.evidence;
                json!({
                    "highway": hm.highway,
                    "term_class": ev.class.as_str(),
                    "phrase": ev.phrase,
                    "span_start": ev.start,
                    "span_end": ev.end,
                    "neighbor": ev.neighbor.as_ref().map(|n| &n.token),
                })
            })
            .collect();
        let doc = json!({
            "tokens": cleaned.tokens,
            "highways": result.highways().collect::<Vec<_>>(),
            "evidence": evidence,
        });
        write_string(out, doc.to_string())
    })
}

/// Cleans raw text with the bundled stopword list; writes a JSON array of tokens.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_clean_text(text: *const c_char, out: *mut *mut c_char) -> HwyStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(text, "text")?;
        let tokens = clean_str(text, &StopwordList::default());
        write_string(out, serde_json::Value::from(tokens).to_string())
    })
}

/// Runs the full assessment described by a JSON config file (same keys as
/// the command-line config). Writes a JSON object with record counts.
///
/// # Safety
/// `config_path` must be a NUL-terminated string; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hwy_run_assess(config_path: *const c_char, out: *mut *mut c_char) -> HwyStatus {
    guard(|| {
        let p = str_arg(config_path, "config_path")?;
        let cfg = Overrides::from_file(Path::new(p))?.resolve()?;
        let outcome = run_assess(&cfg)?;
        if !out.is_null() {
            let c = &outcome.report.counts;
            let doc = json!({
                "parsed": outcome.read.parsed,
                "skipped": outcome.read.skipped,
                "retained": c.retained,
                "mapped": c.mapped,
                "out": cfg.out.display().to_string(),
                "warnings": outcome.warnings,
            });
            write_string(out, doc.to_string())?;
        }
        Ok(())
    })
}
