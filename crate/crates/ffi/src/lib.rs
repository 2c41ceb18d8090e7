//! C ABI over kbpkit.
//!
//! Problems and plans are opaque handles created by the `*_parse` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`KbpStatus`]; on failure the message is available from
//! [`kbp_last_error`] until the next call on the same thread. Strings
//! returned by the library are released with [`kbp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kbpkit::planner::{self, Budget, ExistenceAnswer, Mode};
use kbpkit::syntax::{self, printer};
use kbpkit::trace::{self, Limits, Verdict};
use kbpkit::{Error, Kbp, PlanningProblem};

/// A parsed and validated planning problem.
pub struct KbpProblem(PlanningProblem);

/// A program over the actions of some problem.
pub struct KbpPlan(Kbp);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    /// The problem or plan is well-formed but fails validation.
    Invalid = 4,
    NonTerminating = 5,
    LimitExceeded = 6,
    Precondition = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbpVerdict {
    Valid = 0,
    Invalid = 1,
    NonTerminating = 2,
    Exists = 3,
    None = 4,
    Unknown = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbpMode {
    Auto = 0,
    Fixpoint = 1,
    Epistemic = 2,
    Positive = 3,
    Sequence = 4,
    Bounded = 5,
    Wfoe = 6,
}

impl From<KbpMode> for Mode {
    fn from(m: KbpMode) -> Mode {
        match m {
            KbpMode::Auto => Mode::Auto,
            KbpMode::Fixpoint => Mode::Fixpoint,
            KbpMode::Epistemic => Mode::Epistemic,
            KbpMode::Positive => Mode::Positive,
            KbpMode::Sequence => Mode::Sequence,
            KbpMode::Bounded => Mode::Bounded,
            KbpMode::Wfoe => Mode::Wfoe,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KbpStatus {
    match e {
        Error::Syntax { .. } => KbpStatus::Syntax,
        Error::NonTerminating => KbpStatus::NonTerminating,
        Error::LimitExceeded(_) => KbpStatus::LimitExceeded,
        Error::Precondition(_) | Error::Shape(_) => KbpStatus::Precondition,
        _ => KbpStatus::Invalid,
    }
}

struct Fail(KbpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KbpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KbpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KbpStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(KbpStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(KbpStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(KbpStatus::NullArgument, format!("null {what}")))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(KbpStatus::NullArgument, "null output pointer".into()))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn kbp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a problem file.
///
/// # Safety
/// `source` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kbp_problem_parse(source: *const c_char, out: *mut *mut KbpProblem) -> KbpStatus {
    guard(|| {
        out_ptr(out)?;
        let p = syntax::parse_problem(text(source)?)?;
        *out = Box::into_raw(Box::new(KbpProblem(p)));
        Ok(())
    })
}

/// # Safety
/// `problem` must come from [`kbp_problem_parse`] (or be null) and not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kbp_problem_free(problem: *mut KbpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Parses a program and checks that its actions belong to `problem`.
///
/// # Safety
/// Pointers must be valid; `source` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn kbp_plan_parse(
    problem: *const KbpProblem,
    source: *const c_char,
    out: *mut *mut KbpPlan,
) -> KbpStatus {
    guard(|| {
        out_ptr(out)?;
        let p = &deref(problem, "problem")?.0;
        let k = syntax::parse_kbp(text(source)?, &p.vocab)?;
        k.link(p)?;
        *out = Box::into_raw(Box::new(KbpPlan(k)));
        Ok(())
    })
}

/// # Safety
/// `plan` must come from this library (or be null) and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn kbp_plan_free(plan: *mut KbpPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Program size: actions count 1, conditions their formula size.
///
/// # Safety
/// `plan` must be valid or null (size 0).
#[no_mangle]
pub unsafe extern "C" fn kbp_plan_size(plan: *const KbpPlan) -> usize {
    plan.as_ref().map_or(0, |k| k.0.size())
}

/// Writes the canonical text of `plan` to `*out`; free it with
/// [`kbp_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kbp_plan_to_string(
    problem: *const KbpProblem,
    plan: *const KbpPlan,
    out: *mut *mut c_char,
) -> KbpStatus {
    guard(|| {
        out_ptr(out)?;
        let p = &deref(problem, "problem")?.0;
        let k = &deref(plan, "plan")?.0;
        let s = CString::new(printer::kbp(k, &p.vocab)).expect("printer emits no nul");
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decides whether `plan` is valid for `problem`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kbp_verify(
    problem: *const KbpProblem,
    plan: *const KbpPlan,
    verdict: *mut KbpVerdict,
) -> KbpStatus {
    guard(|| {
        out_ptr(verdict)?;
        let p = &deref(problem, "problem")?.0;
        let k = &deref(plan, "plan")?.0;
        *verdict = match trace::verify_plan(p, k, &Limits::default())? {
            Verdict::Valid => KbpVerdict::Valid,
            Verdict::Invalid(_) => KbpVerdict::Invalid,
            Verdict::NonTerminating(_) => KbpVerdict::NonTerminating,
        };
        Ok(())
    })
}

/// Decides plan existence. A negative `bound` means the problem's own bound
/// (if any). On `KBP_VERDICT_EXISTS`, `*witness` receives a plan handle;
/// otherwise it is set to null. `witness` may be null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kbp_solve(
    problem: *const KbpProblem,
    mode: KbpMode,
    bound: i64,
    verdict: *mut KbpVerdict,
    witness: *mut *mut KbpPlan,
) -> KbpStatus {
    guard(|| {
        out_ptr(verdict)?;
        let p = &deref(problem, "problem")?.0;
        let bound = usize::try_from(bound).ok();
        let answer = planner::solve(p, mode.into(), bound, &Budget::default())?;
        if !witness.is_null() {
            *witness = ptr::null_mut();
        }
        *verdict = match answer {
            ExistenceAnswer::Exists(w) => {
                if !witness.is_null() {
                    *witness = Box::into_raw(Box::new(KbpPlan(w)));
                }
                KbpVerdict::Exists
            }
            ExistenceAnswer::None => KbpVerdict::None,
            ExistenceAnswer::Unknown(_) => KbpVerdict::Unknown,
        };
        Ok(())
    })
}

/// Compiles `plan` into an equivalent standard policy.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kbp_compile(
    problem: *const KbpProblem,
    plan: *const KbpPlan,
    out: *mut *mut KbpPlan,
) -> KbpStatus {
    guard(|| {
        out_ptr(out)?;
        let p = &deref(problem, "problem")?.0;
        let k = &deref(plan, "plan")?.0;
        let policy = kbpkit::compile::compile_policy(p, k, &Limits::default())?;
        *out = Box::into_raw(Box::new(KbpPlan(policy)));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_arguments_are_reported() {
        let mut p: *mut KbpProblem = ptr::null_mut();
        let st = unsafe { kbp_problem_parse(ptr::null(), &mut p) };
        assert_eq!(st, KbpStatus::NullArgument);
        assert!(!kbp_last_error().is_null());
        let st = unsafe { kbp_verify(ptr::null(), ptr::null(), ptr::null_mut()) };
        assert_eq!(st, KbpStatus::NullArgument);
    }

    #[test]
    fn errors_map_to_statuses() {
        assert_eq!(status_of(&Error::NonTerminating), KbpStatus::NonTerminating);
        assert_eq!(status_of(&Error::UnsatisfiableInit), KbpStatus::Invalid);
        assert_eq!(
            status_of(&Error::Syntax { line: 1, col: 1, msg: String::new() }),
            KbpStatus::Syntax
        );
    }
}
