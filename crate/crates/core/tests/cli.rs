use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

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

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn kbpkit(args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_kbpkit")).args(args).output().unwrap();
    Run {
        code: o.status.code().unwrap(),
        out: String::from_utf8(o.stdout).unwrap(),
        err: String::from_utf8(o.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_follow_verdicts() {
    let d = TempDir::new().unwrap();
    let prob = file(&d, "p.problem", EXAMPLE);
    let skip = file(&d, "skip.kbp", "skip");
    let fix = file(&d, "fix.kbp", "repair1; repair2; repair3");
    let spin = file(&d, "spin.kbp", "while K(true) do test1 endwhile");

    let r = kbpkit(&["check", s(&prob)]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("verdict: ok\n"));
    assert!(r.out.contains("stat: variables 3"));

    assert_eq!(kbpkit(&["verify", s(&prob), s(&fix)]).code, 0);
    let r = kbpkit(&["verify", s(&prob), s(&skip)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("verdict: invalid"));
    let r = kbpkit(&["verify", s(&prob), s(&spin)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("verdict: nonterminating"));

    let bad = file(&d, "bad.problem", "var x\ngoal K(x)\n");
    let r = kbpkit(&["check", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.err.starts_with("error:"), "{}", r.err);
    assert_eq!(kbpkit(&["check", "/nonexistent/file"]).code, 2);
    assert_eq!(kbpkit(&["frobnicate"]).code, 2);
    assert_eq!(kbpkit(&["--help"]).code, 0);
}

#[test]
fn solved_plans_verify() {
    let d = TempDir::new().unwrap();
    let prob = file(&d, "p.problem", EXAMPLE);
    let w = d.path().join("w.kbp");
    let r = kbpkit(&["solve", s(&prob), "-o", s(&w)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("verdict: exists"));
    assert!(r.out.contains("stat: mode"));
    let r = kbpkit(&["verify", s(&prob), s(&w)]);
    assert_eq!(r.code, 0, "{}", r.out);

    // unreachable goal
    let none = file(&d, "n.problem", "var x\ninit: x\nepistemic t: x ; !x\ngoal: K(!x)\n");
    let r = kbpkit(&["solve", s(&none)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("verdict: none"));

    // bounded mode without a bound is a usage error
    assert_eq!(kbpkit(&["solve", s(&prob), "--mode", "bounded"]).code, 2);
}

#[test]
fn compile_prints_a_policy() {
    let d = TempDir::new().unwrap();
    let prob = file(&d, "p.problem", EXAMPLE);
    let skip = file(&d, "skip.kbp", "skip");
    let r = kbpkit(&["compile", s(&prob), s(&skip)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, "");

    let pi = file(
        &d,
        "pi.kbp",
        "if !(K(ok1) | K(!ok1)) then test1 endif; if K(!ok1) then repair1 endif",
    );
    let r = kbpkit(&["compile", s(&prob), s(&pi), "--stats"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("stat: kbp_size 13"), "{}", r.out);
    let policy: String = r.out.lines().filter(|l| !l.starts_with("stat:")).collect::<Vec<_>>().join("\n");
    let again = file(&d, "policy.kbp", &policy);
    assert_eq!(kbpkit(&["compile", s(&prob), s(&again)]).code, 0);

    let spin = file(&d, "spin.kbp", "while K(true) do test1 endwhile");
    let r = kbpkit(&["compile", s(&prob), s(&spin)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("verdict: nonterminating"));
}

#[test]
fn reductions_emit_checkable_problems() {
    let d = TempDir::new().unwrap();
    let qbf2 = file(&d, "a.qbf", "forall a\nexists b\nmatrix: a | b\n");
    let qbf3 = file(&d, "b.qbf", "exists a1\nforall b1\nexists c1\nmatrix: b1 <-> c1\n");
    for (kind, input) in [("qbf2e", &qbf2), ("wfoe", &qbf2), ("qbf3b", &qbf3)] {
        let out = d.path().join(format!("{kind}.problem"));
        let r = kbpkit(&["reduce", kind, s(input), "-o", s(&out)]);
        assert_eq!(r.code, 0, "{kind}: {}", r.err);
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.contains(&format!("# certificate: {kind}:")), "{text}");
        assert_eq!(kbpkit(&["check", s(&out)]).code, 0, "{kind}");
        let r = kbpkit(&["solve", s(&out)]);
        assert_eq!(r.code, 0, "{kind}: {}", r.out);
    }

    let wfe = d.path().join("wfe.problem");
    assert_eq!(kbpkit(&["reduce", "wfoe2wfe", s(&d.path().join("wfoe.problem")), "-o", s(&wfe)]).code, 0);
    assert_eq!(kbpkit(&["check", s(&wfe)]).code, 0);

    let contradiction = file(&d, "c.txt", "x & !x\n");
    let r = kbpkit(&["reduce", "unsat", s(&contradiction)]);
    assert_eq!(r.code, 0);
    assert!(!r.out.contains("ontic") && !r.out.contains("epistemic"), "{}", r.out);
    let out = file(&d, "c.problem", &r.out);
    let r = kbpkit(&["solve", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.out);
}

#[test]
fn generated_families_come_with_valid_plans() {
    let d = TempDir::new().unwrap();
    let prob = d.path().join("sat.problem");
    let plan = d.path().join("sat.kbp");
    let r = kbpkit(&["gen", "satfamily", "--vars", "2", "--clauses", "2", "-o", s(&prob), "--plan-out", s(&plan)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(kbpkit(&["verify", s(&prob), s(&plan)]).code, 0);

    let cnf = file(&d, "f.cnf", "x1 !x2 x1\n!x1 x2 x2\n");
    let r = kbpkit(&["reduce", "satfamily", s(&cnf), "-o", s(&prob), "--plan-out", s(&plan)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(kbpkit(&["verify", s(&prob), s(&plan)]).code, 0);

    let base = file(&d, "base.problem", "var x\nontic a: x'\nontic b: !x'\nepistemic tx: x ; !x\ngoal: K(true)\n");
    let pi = file(&d, "pi.kbp", "tx; if K(x) then b else a endif");
    let r = kbpkit(&["reduce", "fromkbp", s(&base), "--plan", s(&pi), "-o", s(&prob), "--plan-out", s(&plan)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(kbpkit(&["verify", s(&prob), s(&plan)]).code, 0);
    assert_eq!(kbpkit(&["reduce", "fromkbp", s(&base)]).code, 2);
}

#[test]
fn succinctness_table() {
    let r = kbpkit(&["bench", "succinctness", "--max-n", "3"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "n,kbp_size,policy_size");
    assert_eq!(lines.len(), 4);
    for (n, row) in (1..=3).zip(&lines[1..]) {
        let cells: Vec<usize> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells[0], n);
        assert_eq!(cells[1], n);
        assert!(cells[2] >= (1 << n) - 1);
    }
}
