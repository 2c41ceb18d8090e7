use std::ffi::{CStr, CString};
use std::ptr;

use kbpkit_ffi::*;

const EXAMPLE: &str = "\
var ok1 ok2 ok3
init: (ok1 <-> ok2 & ok3) & (!ok2 | !ok3)
ontic repair1: ok1' & frame(ok2, ok3)
ontic repair2: ok2' & frame(ok1, ok3)
ontic repair3: ok3' & frame(ok1, ok2)
epistemic test1: ok1 ; !ok1
epistemic test2: ok2 ; !ok2
epistemic test3: ok3 ; !ok3
goal: K(ok1 & ok2 & ok3)
";

fn problem(src: &str) -> *mut KbpProblem {
    let src = CString::new(src).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { kbp_problem_parse(src.as_ptr(), &mut p) }, KbpStatus::Ok);
    p
}

fn plan(p: *const KbpProblem, src: &str) -> Result<*mut KbpPlan, KbpStatus> {
    let src = CString::new(src).unwrap();
    let mut k = ptr::null_mut();
    match unsafe { kbp_plan_parse(p, src.as_ptr(), &mut k) } {
        KbpStatus::Ok => Ok(k),
        st => Err(st),
    }
}

fn verdict(p: *const KbpProblem, k: *const KbpPlan) -> KbpVerdict {
    let mut v = KbpVerdict::Unknown;
    assert_eq!(unsafe { kbp_verify(p, k, &mut v) }, KbpStatus::Ok);
    v
}

#[test]
fn verify_solve_and_compile() {
    let p = problem(EXAMPLE);
    let skip = plan(p, "skip").unwrap();
    assert_eq!(verdict(p, skip), KbpVerdict::Invalid);

    let mut v = KbpVerdict::Unknown;
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { kbp_solve(p, KbpMode::Auto, -1, &mut v, &mut w) }, KbpStatus::Ok);
    assert_eq!(v, KbpVerdict::Exists);
    assert!(!w.is_null());
    assert_eq!(verdict(p, w), KbpVerdict::Valid);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { kbp_plan_to_string(p, w, &mut text) }, KbpStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    unsafe { kbp_string_free(text) };
    let again = plan(p, &s).unwrap();
    assert_eq!(verdict(p, again), KbpVerdict::Valid);

    let mut policy = ptr::null_mut();
    assert_eq!(unsafe { kbp_compile(p, w, &mut policy) }, KbpStatus::Ok);
    assert_eq!(unsafe { kbp_plan_size(policy) }, unsafe { kbp_plan_size(w) });

    unsafe {
        kbp_plan_free(policy);
        kbp_plan_free(again);
        kbp_plan_free(w);
        kbp_plan_free(skip);
        kbp_problem_free(p);
    }
}

#[test]
fn failures_carry_codes_and_messages() {
    let src = CString::new("var x\ninit: x & !x\ngoal: K(x)\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { kbp_problem_parse(src.as_ptr(), &mut p) }, KbpStatus::Invalid);
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(kbp_last_error()) }.to_str().unwrap();
    assert!(msg.contains("unsatisfiable"), "{msg}");

    let src = CString::new("var x\ngoal K(x)\n").unwrap();
    assert_eq!(unsafe { kbp_problem_parse(src.as_ptr(), &mut p) }, KbpStatus::Syntax);

    let p = problem(EXAMPLE);
    assert_eq!(plan(p, "repair9").unwrap_err(), KbpStatus::Invalid);
    let lp = plan(p, "while K(true) do skip endwhile").unwrap();
    assert_eq!(verdict(p, lp), KbpVerdict::NonTerminating);

    let mut v = KbpVerdict::Unknown;
    let st = unsafe { kbp_solve(p, KbpMode::Bounded, -1, &mut v, ptr::null_mut()) };
    assert_eq!(st, KbpStatus::Precondition);
    unsafe {
        kbp_plan_free(lp);
        kbp_problem_free(p);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kbpkit.h")).unwrap();
    for name in [
        "kbp_problem_parse",
        "kbp_problem_free",
        "kbp_plan_parse",
        "kbp_plan_free",
        "kbp_verify",
        "kbp_solve",
        "kbp_compile",
        "kbp_plan_to_string",
        "kbp_string_free",
        "kbp_last_error",
        "typedef struct KbpProblem KbpProblem",
        "KBP_STATUS_OK",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}
