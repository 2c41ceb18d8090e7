//! Command-line interface.
//!
//! Exit codes: 0 valid/exists/ok, 1 invalid/none/nonterminating, 2 error,
//! 3 unknown. Reports start with `verdict: <word>`; statistics lines start
//! with `stat:`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::compile::{compile_policy, measure_succinctness, test_chain};
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::Vocabulary;
use crate::planner::{solve, Budget, ExistenceAnswer, Mode};
use crate::problem::PlanningProblem;
use crate::reductions::{self, SatFamily};
use crate::syntax::{self, printer, Names};
use crate::trace::{verify_plan, Limits, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "kbpkit", version, about = "Knowledge-based programs as plans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a problem file.
    Check { problem: PathBuf },
    /// Decide whether a plan is valid for a problem.
    Verify { problem: PathBuf, plan: PathBuf },
    /// Compile a plan into an equivalent standard policy.
    Compile {
        problem: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        stats: bool,
    },
    /// Decide plan existence.
    Solve {
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long)]
        bound: Option<usize>,
        /// Extra branching conditions, one per line.
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// Write the witness plan here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a planning problem from an instance file.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        input: PathBuf,
        /// Plan to adapt (`fromkbp`).
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Where to write the accompanying plan (`satfamily`, `fromkbp`).
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Generate a problem family member.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Size measurements.
    Bench {
        #[command(subcommand)]
        kind: BenchKind,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// The 3SAT family: problem and plan.
    Satfamily {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BenchKind {
    /// CSV of program size against compiled policy size.
    Succinctness {
        #[arg(long, value_enum, default_value = "test-chain")]
        family: Family,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    TestChain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    Fixpoint,
    Epistemic,
    Positive,
    Sequence,
    Bounded,
    Wfoe,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Fixpoint => Mode::Fixpoint,
            ModeArg::Epistemic => Mode::Epistemic,
            ModeArg::Positive => Mode::Positive,
            ModeArg::Sequence => Mode::Sequence,
            ModeArg::Bounded => Mode::Bounded,
            ModeArg::Wfoe => Mode::Wfoe,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReduceKind {
    /// forall-exists QBF, epistemic actions only.
    Qbf2e,
    /// A formula; no actions, positive goal.
    Unsat,
    /// Alternating QBF, with an action order.
    Wfoe,
    /// Ordered epistemic problem to an unordered one.
    Wfoe2wfe,
    /// exists-forall-exists QBF, bounded.
    Qbf3b,
    /// exists-forall QBF, bounded, positive goal.
    Qbf2bpos,
    /// 3-CNF, one clause of three literals per line.
    Satfamily,
    /// A problem file and a terminating plan (`--plan`).
    Fromkbp,
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        // reader went away (`| head`); nothing useful left to say
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_ERROR,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load_problem(path: &Path) -> Result<PlanningProblem> {
    syntax::parse_problem(&read(path)?)
}

fn load_plan(path: &Path, problem: &PlanningProblem) -> Result<Kbp> {
    let k = syntax::parse_kbp(&read(path)?, &problem.vocab)?;
    k.link(problem)?;
    Ok(k)
}

fn plan_text(k: &Kbp, vocab: &Vocabulary) -> String {
    format!("{}\n", printer::kbp(k, vocab))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let limits = Limits::default();
    match cmd {
        Command::Check { problem } => {
            let p = load_problem(&problem)?;
            writeln!(out, "verdict: ok")?;
            writeln!(out, "stat: variables {}", p.nvars())?;
            writeln!(out, "stat: ontic {}", p.ontic.len())?;
            writeln!(out, "stat: epistemic {}", p.epistemic.len())?;
            Ok(EXIT_OK)
        }
        Command::Verify { problem, plan } => {
            let p = load_problem(&problem)?;
            let k = load_plan(&plan, &p)?;
            let t = Instant::now();
            let v = verify_plan(&p, &k, &limits)?;
            let code = match &v {
                Verdict::Valid => {
                    writeln!(out, "verdict: valid")?;
                    EXIT_OK
                }
                Verdict::Invalid(tr) => {
                    writeln!(out, "verdict: invalid")?;
                    writeln!(out, "counterexample:")?;
                    out.write_all(tr.render(&p).as_bytes())?;
                    EXIT_NO
                }
                Verdict::NonTerminating(tr) => {
                    writeln!(out, "verdict: nonterminating")?;
                    writeln!(out, "repeating prefix:")?;
                    out.write_all(tr.render(&p).as_bytes())?;
                    EXIT_NO
                }
            };
            writeln!(out, "stat: time_ms {}", t.elapsed().as_millis())?;
            Ok(code)
        }
        Command::Compile { problem, plan, stats } => {
            let p = load_problem(&problem)?;
            let k = load_plan(&plan, &p)?;
            let policy = match compile_policy(&p, &k, &limits) {
                Ok(policy) => policy,
                Err(Error::NonTerminating) => {
                    writeln!(out, "verdict: nonterminating")?;
                    return Ok(EXIT_NO);
                }
                Err(e) => return Err(e),
            };
            if policy != Kbp::Empty {
                out.write_all(plan_text(&policy, &p.vocab).as_bytes())?;
            }
            if stats {
                writeln!(out, "stat: kbp_size {}", k.size())?;
                writeln!(out, "stat: policy_size {}", policy.size())?;
            }
            Ok(EXIT_OK)
        }
        Command::Solve { problem, mode, bound, vocab, out: witness_out } => {
            let mut p = load_problem(&problem)?;
            if let Some(path) = vocab {
                for c in syntax::parse_conditions(&read(&path)?, &p.vocab)? {
                    if !p.conditions.contains(&c) {
                        p.conditions.push(c);
                    }
                }
            }
            let mode = Mode::from(mode);
            let t = Instant::now();
            let answer = solve(&p, mode, bound, &Budget::default())?;
            writeln!(out, "verdict: {}", answer.verdict())?;
            let code = match &answer {
                ExistenceAnswer::Exists(w) => {
                    let text = plan_text(w, &p.vocab);
                    out.write_all(text.as_bytes())?;
                    if let Some(path) = witness_out {
                        fs::write(path, &text)?;
                    }
                    writeln!(out, "stat: witness_size {}", w.size())?;
                    EXIT_OK
                }
                ExistenceAnswer::None => EXIT_NO,
                ExistenceAnswer::Unknown(why) => {
                    writeln!(out, "stat: reason {why}")?;
                    EXIT_UNKNOWN
                }
            };
            let used = if mode == Mode::Auto {
                let mut q = p.clone();
                q.bound = bound.or(q.bound);
                Mode::for_problem(&q)
            } else {
                mode
            };
            writeln!(out, "stat: mode {used}")?;
            writeln!(out, "stat: time_ms {}", t.elapsed().as_millis())?;
            Ok(code)
        }
        Command::Reduce { kind, input, plan, out: path, plan_out } => {
            let text = read(&input)?;
            let (problem, adapted) = reduce(kind, &text, plan.as_deref())?;
            emit(out, path.as_deref(), &syntax::print_problem(&problem))?;
            if let (Some(k), Some(pp)) = (adapted, plan_out) {
                fs::write(pp, plan_text(&k, &problem.vocab))?;
            }
            Ok(EXIT_OK)
        }
        Command::Gen { kind: GenKind::Satfamily { vars, clauses, out: path, plan_out } } => {
            let f = SatFamily::new(vars, clauses)?;
            emit(out, path.as_deref(), &syntax::print_problem(&f.problem))?;
            if let Some(pp) = plan_out {
                fs::write(pp, plan_text(&f.plan, &f.problem.vocab))?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { kind: BenchKind::Succinctness { family: Family::TestChain, max_n } } => {
            let rows = measure_succinctness(|n| Ok(test_chain(n)), 1..=max_n, &limits)?;
            writeln!(out, "n,kbp_size,policy_size")?;
            for r in rows {
                writeln!(out, "{}", r.csv())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn reduce(kind: ReduceKind, text: &str, plan: Option<&Path>) -> Result<(PlanningProblem, Option<Kbp>)> {
    let qbf = || syntax::parse_qbf(text);
    Ok(match kind {
        ReduceKind::Qbf2e => (reductions::reduce_qbf2_epistemic(&qbf()?)?, None),
        ReduceKind::Wfoe => (reductions::reduce_qbf_wfoe(&qbf()?)?, None),
        ReduceKind::Qbf3b => (reductions::reduce_qbf3_bounded(&qbf()?)?, None),
        ReduceKind::Qbf2bpos => (reductions::reduce_qbf2_bounded_pos(&qbf()?)?, None),
        ReduceKind::Unsat => {
            let mut vocab = Vocabulary::new();
            let body: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
            let phi = syntax::parse_formula(&body.join("\n"), &mut vocab, Names::Intern)?;
            (reductions::reduce_unsat_positive(&phi, &vocab), None)
        }
        ReduceKind::Wfoe2wfe => (reductions::reduce_wfoe_wfe(&syntax::parse_problem(text)?)?, None),
        ReduceKind::Satfamily => {
            let clauses = parse_cnf(text)?;
            let nvars = clauses.iter().flatten().map(|&(v, _)| v + 1).max().unwrap_or(0);
            let f = SatFamily::new(nvars, clauses.len())?;
            let enc = f.encoding(&clauses)?;
            let mut p = f.problem.clone();
            p.init = p.init.clone().and(enc);
            p.certificate.push(format!("satfamily: literal bits fixed to {} clauses", clauses.len()));
            (p, Some(f.plan))
        }
        ReduceKind::Fromkbp => {
            let base = syntax::parse_problem(text)?;
            let path = plan.ok_or_else(|| Error::Precondition("`fromkbp` needs --plan".into()))?;
            let k = load_plan(path, &base)?;
            let g = reductions::problem_from_kbp(&base, &k)?;
            (g.problem, Some(g.plan))
        }
    })
}

/// Clauses of three literals `xN` or `!xN`, one per line.
fn parse_cnf(text: &str) -> Result<Vec<[reductions::Literal; 3]>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Syntax { line: i + 1, col: 1, msg: msg.into() };
        let lits: Vec<reductions::Literal> = line
            .split_whitespace()
            .map(|w| {
                let (pos, name) = match w.strip_prefix('!') {
                    Some(n) => (false, n),
                    None => (true, w),
                };
                name.strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .map(|k| (k - 1, pos))
                    .ok_or_else(|| bad("literals are `xN` or `!xN` with N >= 1"))
            })
            .collect::<Result<_>>()?;
        let arr: [reductions::Literal; 3] =
            lits.try_into().map_err(|_| bad("each clause has exactly three literals"))?;
        out.push(arr);
    }
    if out.is_empty() {
        return Err(Error::Precondition("no clauses".into()));
    }
    Ok(out)
}
