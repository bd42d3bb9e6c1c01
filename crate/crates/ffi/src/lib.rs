//! C ABI for `gsplit`.
//!
//! Every fallible function returns a [`GsStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! read with [`gs_last_error`]. Strings handed out by the library must be
//! released with [`gs_string_free`]; handles with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gsplit::group::{Ends, Group, GroupSpec};
use gsplit::instance::InstanceSpec;
use gsplit::{Error, Tri};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    Error = 1,
    /// The answer is undecided at the configured truncation.
    Inconclusive = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsFamily {
    Free = 0,
    FreeAbelian = 1,
    Surface = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsTri {
    No = 0,
    Yes = 1,
    Inconclusive = 2,
}

/// Value written by [`gs_group_ends`] for infinitely many ends.
pub const GS_ENDS_INFINITE: i32 = -1;

/// A finitely presented group from one of the supported families.
pub struct GsGroup {
    group: Group,
}

/// A parsed instance file: a group with named subgroups and sets.
pub struct GsInstance {
    spec: InstanceSpec,
    group: Group,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(err: &Error) -> GsStatus {
    set_error(err.to_string());
    match err {
        Error::Inconclusive(_) => GsStatus::Inconclusive,
        _ => GsStatus::Error,
    }
}

/// Runs `f`, converting panics into [`GsStatus::Panic`].
fn guard(f: impl FnOnce() -> GsStatus) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GsStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(GsStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        GsStatus::InvalidUtf8
    })
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

macro_rules! try_gs {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            set_error("null out-pointer");
            return GsStatus::NullPointer;
        }
    };
}

/// Message of the last failure on this thread. Valid until the next call
/// into the library from the same thread; never null.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates `F_n`, `ℤ^n` or the closed surface group of genus `n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_group_new(family: GsFamily, n: u32, out: *mut *mut GsGroup) -> GsStatus {
    out_ptr!(out);
    guard(|| {
        let n = n as usize;
        let spec = match family {
            GsFamily::Free => GroupSpec::free(n),
            GsFamily::FreeAbelian => GroupSpec::free_abelian(n),
            GsFamily::Surface => GroupSpec::surface(n),
        };
        match spec {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(GsGroup {
                    group: Group::new(spec),
                }));
                GsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `g` must come from [`gs_group_new`], or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_group_free(g: *mut GsGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical form of `word`, e.g. `aB` or `(1,-2)`.
///
/// # Safety
/// `g` must be a live handle, `word` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gs_group_normal_form(
    g: *const GsGroup,
    word: *const c_char,
    out: *mut *mut c_char,
) -> GsStatus {
    out_ptr!(out);
    let Some(g) = g.as_ref() else {
        set_error("null group handle");
        return GsStatus::NullPointer;
    };
    let word = try_gs!(read_str(word));
    guard(|| {
        let nf = g.group.parse_word(word).and_then(|w| g.group.normal_form(&w));
        match nf {
            Ok(w) => {
                *out = give_string(g.group.format_element(&w));
                GsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of elements of word length at most `radius`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gs_ball_size(g: *const GsGroup, radius: u32, out: *mut u64) -> GsStatus {
    out_ptr!(out);
    let Some(g) = g.as_ref() else {
        set_error("null group handle");
        return GsStatus::NullPointer;
    };
    guard(|| {
        if let Some(n) = g.group.spec().ball_size(radius as usize) {
            *out = u64::try_from(n).unwrap_or(u64::MAX);
            return GsStatus::Ok;
        }
        match g.group.ball(radius as usize) {
            Ok(b) => {
                *out = b.len() as u64;
                GsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of ends, or [`GS_ENDS_INFINITE`].
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gs_group_ends(g: *const GsGroup, out: *mut i32) -> GsStatus {
    out_ptr!(out);
    let Some(g) = g.as_ref() else {
        set_error("null group handle");
        return GsStatus::NullPointer;
    };
    *out = match g.group.ends() {
        Ends::Zero => 0,
        Ends::One => 1,
        Ends::Two => 2,
        Ends::Infinite => GS_ENDS_INFINITE,
    };
    GsStatus::Ok
}

/// Parses the text of an instance file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gs_instance_parse(text: *const c_char, out: *mut *mut GsInstance) -> GsStatus {
    out_ptr!(out);
    let text = try_gs!(read_str(text));
    guard(|| match InstanceSpec::parse(text) {
        Ok(spec) => {
            let group = spec.group();
            *out = Box::into_raw(Box::new(GsInstance { spec, group }));
            GsStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// # Safety
/// `inst` must come from [`gs_instance_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_instance_free(inst: *mut GsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

fn tri(t: Tri) -> GsTri {
    match t {
        Tri::Yes => GsTri::Yes,
        Tri::No => GsTri::No,
        Tri::Inconclusive => GsTri::Inconclusive,
    }
}

/// Whether `word` lies in the named subgroup. Exact in free and free
/// abelian groups; surface groups may answer [`GsTri::Inconclusive`].
///
/// # Safety
/// `inst` must be a live handle, the strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gs_subgroup_member(
    inst: *const GsInstance,
    subgroup: *const c_char,
    word: *const c_char,
    out: *mut GsTri,
) -> GsStatus {
    out_ptr!(out);
    let Some(inst) = inst.as_ref() else {
        set_error("null instance handle");
        return GsStatus::NullPointer;
    };
    let name = try_gs!(read_str(subgroup));
    let word = try_gs!(read_str(word));
    guard(|| {
        let r = inst.spec.subgroup(&inst.group, name).and_then(|h| {
            let w = inst.group.parse_word(word)?;
            h.contains(&w)
        });
        match r {
            Ok(t) => {
                *out = tri(t);
                GsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Almost malnormality of a subgroup of a free group. When the answer is
/// no and `witness` is non-null, a conjugator `g ∉ H` with `H ∩ gHg⁻¹`
/// infinite is written there.
///
/// # Safety
/// `inst` must be a live handle, `subgroup` NUL-terminated, `out` valid;
/// `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn gs_subgroup_malnormal(
    inst: *const GsInstance,
    subgroup: *const c_char,
    out: *mut GsTri,
    witness: *mut *mut c_char,
) -> GsStatus {
    out_ptr!(out);
    let Some(inst) = inst.as_ref() else {
        set_error("null instance handle");
        return GsStatus::NullPointer;
    };
    let name = try_gs!(read_str(subgroup));
    guard(|| {
        let h = match inst.spec.subgroup(&inst.group, name) {
            Ok(h) => h,
            Err(e) => return fail(&e),
        };
        let Some(graph) = h.stallings() else {
            return fail(&Error::Unsupported {
                op: "malnormality".into(),
                family: inst.group.spec().family_name().into(),
            });
        };
        match graph.malnormality() {
            Ok(gsplit::stallings::Malnormality::Malnormal) => {
                *out = GsTri::Yes;
                GsStatus::Ok
            }
            Ok(gsplit::stallings::Malnormality::NotMalnormal { witness: w }) => {
                *out = GsTri::No;
                if !witness.is_null() {
                    *witness = give_string(w.to_string());
                }
                GsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs a `gsplit` command line (without the program name) and captures
/// its standard output. The status mirrors the command's exit code;
/// anything written to standard error becomes the last error message.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_run_command(argv: *const *const c_char, argc: usize, out: *mut *mut c_char) -> GsStatus {
    out_ptr!(out);
    if argv.is_null() && argc > 0 {
        set_error("null argv");
        return GsStatus::NullPointer;
    }
    let mut args = vec!["gsplit".to_string()];
    for i in 0..argc {
        args.push(try_gs!(read_str(*argv.add(i))).to_string());
    }
    guard(|| {
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = gsplit::cli::run(args, &mut stdout, &mut stderr);
        *out = give_string(String::from_utf8_lossy(&stdout).into_owned());
        set_error(String::from_utf8_lossy(&stderr).trim_end().to_string());
        match code {
            0 => GsStatus::Ok,
            2 => GsStatus::Inconclusive,
            _ => GsStatus::Error,
        }
    })
}
