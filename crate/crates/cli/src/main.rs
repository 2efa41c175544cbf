//! `distmatch`: batch driver for the TTC mechanism, its verification oracles
//! and the convexity checkers.
//!
//! Exit codes: 0 pass, 1 property failure, 2 parse or input error,
//! 3 internal invariant violation, 4 budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use distmatch::convexity::{
    contour_equivalence, is_m_convex, is_mnat_convex, is_pseudo_m_concave, is_pseudo_mnat_concave,
    upper_contour_set, Convexity, PointSet,
};
use distmatch::instance::{load_instance, Instance, LoadError};
use distmatch::model::{induced_distribution, Budget, Economy, Matching};
use distmatch::objectives::{Evaluator, ObjectiveTable, Value};
use distmatch::ttc::Ttc;
use distmatch::verify::{
    check_individual_rationality, check_weak_improvement, is_constrained_efficient,
    verify_strategy_proofness, SearchMode, VerificationReport,
};
use distmatch::Error;
use num_rational::Rational64;

#[derive(Parser)]
#[command(name = "distmatch", version, about = "Top Trading Cycles with distributional objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mechanism and print the outcome with objective values.
    Run {
        instance: PathBuf,
        /// Directory for one `step_N.dot` pointing graph per step.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check properties of the outcome (or of `--matching`).
    Verify {
        instance: PathBuf,
        which: Which,
        /// Comma-separated school per student, in student order; `@none` for unassigned.
        #[arg(long)]
        matching: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Misreports drawn in sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a convexity checker on the instance objective.
    Check { instance: PathBuf, which: CheckKind },
    /// List the policy goal, or the upper contour set at `--lambda`.
    Goal {
        instance: PathBuf,
        /// Threshold: integer, `p/q` or `-inf`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Improve,
    Ir,
    Efficient,
    Strategyproof,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Mnat,
    M,
    PseudoMnat,
    PseudoM,
    Theorem2,
}

/// A run either prints a report and yields a verdict, or fails with an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 4,
            Error::Invariant(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(d) => Failure { code: 2, message: d.to_string() },
            LoadError::Budget(e) => e.into(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget::from_env();
    let mut out = String::new();
    let result = match cli.command {
        Command::Run { instance, trace } => run(&instance, trace.as_deref(), &budget, &mut out),
        Command::Verify { instance, which, matching, mode, samples, seed } => {
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Sampled => SearchMode::Sampled { samples, seed },
            };
            verify(&instance, which, matching.as_deref(), mode, &budget, &mut out)
        }
        Command::Check { instance, which } => check(&instance, which, &budget, &mut out),
        Command::Goal { instance, lambda } => goal(&instance, lambda.as_deref(), &budget, &mut out),
    };
    print!("{out}");
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// `fixtures/appendix_a` resolves to `fixtures/appendix_a.json` when only the latter exists.
fn resolve_path(path: &Path) -> PathBuf {
    if !path.exists() {
        let with_ext = path.with_extension("json");
        if with_ext.exists() {
            return with_ext;
        }
    }
    path.to_path_buf()
}

fn load(path: &Path, budget: &Budget) -> Result<Instance, Failure> {
    let path = resolve_path(path);
    let text = std::fs::read_to_string(&path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(load_instance(&text, budget)?)
}

fn run(path: &Path, trace_dir: Option<&Path>, budget: &Budget, out: &mut String) -> Result<bool, Failure> {
    let inst = load(path, budget)?;
    let e = &inst.economy;
    let f = ObjectiveTable::build(e, &inst.objective, budget)?;
    let (mu, trace) = Ttc::new(e, &f, &inst.master).with_rule(inst.priority).run(&inst.prefs)?;
    writeln!(out, "outcome={}", mu.display(e)).unwrap();
    writeln!(out, "initial_value={}", trace.initial_value).unwrap();
    writeln!(out, "outcome_value={}", f.value(&induced_distribution(e, &mu))).unwrap();
    writeln!(out, "steps={}", trace.steps.len()).unwrap();
    for (n, step) in trace.steps.iter().enumerate() {
        for cycle in &step.cycles {
            writeln!(out, "step {}: {}", n + 1, cycle.display(e)).unwrap();
        }
    }
    for w in &trace.warnings {
        writeln!(out, "warning={w}").unwrap();
    }
    if let Some(dir) = trace_dir {
        std::fs::create_dir_all(dir).map_err(|err| input(format!("{}: {err}", dir.display())))?;
        for n in 0..trace.steps.len() {
            let file = dir.join(format!("step_{}.dot", n + 1));
            std::fs::write(&file, trace.to_dot(e, n))
                .map_err(|err| input(format!("{}: {err}", file.display())))?;
        }
        writeln!(out, "trace={} files", trace.steps.len()).unwrap();
    }
    Ok(true)
}

fn parse_matching(e: &Economy, text: &str) -> Result<Matching, Failure> {
    let names: Vec<&str> = text.split(',').map(str::trim).collect();
    e.matching_by_name(&names).map_err(|err| input(format!("--matching: {err}")))
}

fn verify(
    path: &Path,
    which: Which,
    matching: Option<&str>,
    mode: SearchMode,
    budget: &Budget,
    out: &mut String,
) -> Result<bool, Failure> {
    let inst = load(path, budget)?;
    let e = &inst.economy;
    let f = ObjectiveTable::build(e, &inst.objective, budget)?;
    let ttc = Ttc::new(e, &f, &inst.master).with_rule(inst.priority);
    let mu = match matching {
        Some(text) => parse_matching(e, text)?,
        None => ttc.outcome(&inst.prefs)?,
    };
    writeln!(out, "matching={}", mu.display(e)).unwrap();

    let mut reports: Vec<VerificationReport> = Vec::new();
    let all = which == Which::All;
    if all || which == Which::Improve {
        reports.push(check_weak_improvement(&f, e, &mu));
    }
    if all || which == Which::Ir {
        reports.push(check_individual_rationality(e, &inst.prefs, &mu));
    }
    let mut passed = true;
    if all || which == Which::Efficient {
        match is_constrained_efficient(e, &f, &inst.prefs, &mu, budget) {
            Ok(r) => reports.push(r),
            Err(Error::Precondition(msg)) => {
                for r in &reports {
                    writeln!(out, "\n{}", r.render(e)).unwrap();
                }
                reports.clear();
                writeln!(out, "\nproperty=efficient\nverdict=FAIL\nwitness=precondition: {msg}").unwrap();
                passed = false;
            }
            Err(err) => return Err(err.into()),
        }
    }
    if all || which == Which::Strategyproof {
        reports.push(verify_strategy_proofness(e, &ttc, &inst.prefs, mode, budget)?);
    }
    for r in &reports {
        writeln!(out, "\n{}", r.render(e)).unwrap();
        passed &= r.passed;
    }
    Ok(passed)
}

fn render_verdict(e: &Economy, name: &str, verdict: &Convexity, out: &mut String) {
    writeln!(out, "check={name}").unwrap();
    writeln!(out, "verdict={}", if verdict.holds() { "PASS" } else { "FAIL" }).unwrap();
    if let Some(w) = verdict.witness() {
        writeln!(out, "witness={w}").unwrap();
        if let Some((a, b)) = w.as_distributions(e.num_schools(), e.num_types()) {
            let (c, t) = w.pivot_cell(e.num_types());
            writeln!(
                out,
                "witness_pair={a} {b} pivot=({},{})",
                e.school_name(c),
                e.type_name(t)
            )
            .unwrap();
        }
    }
}

/// The goal of a goal objective, else the upper contour set at `f(xi(mu_0))`.
fn target_set(inst: &Instance, table: &ObjectiveTable, out: &mut String) -> PointSet {
    let e = &inst.economy;
    let members = match inst.objective.goal() {
        Some(goal) => goal.members().to_vec(),
        None => {
            let lambda = table.value(&induced_distribution(e, e.initial_matching()));
            writeln!(out, "set=upper contour at {lambda}").unwrap();
            upper_contour_set(table, lambda)
        }
    };
    PointSet::from_distributions(e.num_cells(), &members).expect("members share the economy shape")
}

fn check(path: &Path, which: CheckKind, budget: &Budget, out: &mut String) -> Result<bool, Failure> {
    let inst = load(path, budget)?;
    let e = &inst.economy;
    let table = ObjectiveTable::build(e, &inst.objective, budget)?;
    let verdict = match which {
        CheckKind::Mnat => {
            let verdict = is_mnat_convex(&target_set(&inst, &table, out));
            render_verdict(e, "mnat", &verdict, out);
            verdict.holds()
        }
        CheckKind::M => {
            let verdict = is_m_convex(&target_set(&inst, &table, out));
            render_verdict(e, "m", &verdict, out);
            verdict.holds()
        }
        CheckKind::PseudoMnat => {
            let verdict = is_pseudo_mnat_concave(&table);
            render_verdict(e, "pseudo-mnat", &verdict, out);
            verdict.holds()
        }
        CheckKind::PseudoM => {
            let verdict = is_pseudo_m_concave(&table);
            render_verdict(e, "pseudo-m", &verdict, out);
            verdict.holds()
        }
        CheckKind::Theorem2 => {
            let eq = contour_equivalence(&table);
            for c in &eq.contours {
                let witness = c.verdict.witness().map_or(String::new(), |w| format!(" witness {w}"));
                writeln!(
                    out,
                    "lambda={} size={} mnat={}{witness}",
                    c.lambda,
                    c.size,
                    if c.verdict.holds() { "PASS" } else { "FAIL" }
                )
                .unwrap();
            }
            render_verdict(e, "pseudo-mnat", &eq.pseudo_concave, out);
            writeln!(out, "contours_convex={}", eq.all_contours_convex()).unwrap();
            writeln!(out, "equivalence={}", if eq.agrees() { "PASS" } else { "FAIL" }).unwrap();
            eq.agrees()
        }
    };
    Ok(verdict)
}

fn parse_value(text: &str) -> Result<Value, Failure> {
    if text == "-inf" {
        return Ok(Value::NegInf);
    }
    Rational64::from_str(text)
        .map(Value::Finite)
        .map_err(|_| input(format!("--lambda: not a number: {text}")))
}

fn goal(path: &Path, lambda: Option<&str>, budget: &Budget, out: &mut String) -> Result<bool, Failure> {
    let inst = load(path, budget)?;
    let e = &inst.economy;
    let members = match (lambda, inst.objective.goal()) {
        (None, Some(goal)) => goal.members().to_vec(),
        (lambda, _) => {
            let table = ObjectiveTable::build(e, &inst.objective, budget)?;
            let lambda = match lambda {
                Some(text) => parse_value(text)?,
                None => table.value(&induced_distribution(e, e.initial_matching())),
            };
            writeln!(out, "lambda={lambda}").unwrap();
            upper_contour_set(&table, lambda)
        }
    };
    writeln!(out, "size={}", members.len()).unwrap();
    for xi in &members {
        writeln!(out, "{xi}").unwrap();
    }
    Ok(true)
}
