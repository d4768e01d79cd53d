//! `ixcode`: optimal linear index codes for several senders.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ixcode_core::cellular::{
    cellular_minsearch, classify_cycles, enumerate_h, prop4_predicate, prune_side_info, CycleClass,
};
use ixcode_core::fitting::{apply_prop1, build_template, minrank_search_template};
use ixcode_core::oracle::{oracle_cellular, oracle_multisender, verify_decoding, SearchBounds};
use ixcode_core::structure::{criticality_report, maximum_zero_cycle, thm4_predicate, zero_cycles};
use ixcode_core::sweep::{random_suite, run_sweep, Check, CheckLimits};
use ixcode_core::{encode, parse_generator, parse_instance, Error, Generator, Instance, MsgSet, SearchConfig};

use report::Report;

#[derive(Parser)]
#[command(name = "ixcode", version, about = "Optimal linear index codes for multiple senders")]
struct Cli {
    /// Print stable `key value` lines.
    #[arg(long, global = true)]
    machine: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest number of template assignments an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = ixcode_core::DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Largest message count the brute-force oracle accepts.
    #[arg(long, global = true, default_value_t = 5)]
    max_n: usize,
    /// Sweep random instances from this seed instead of the exhaustive suite.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random instances per sweep check.
    #[arg(long, global = true, default_value_t = 200)]
    count: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal multi-sender code by fitting-matrix minimum rank.
    Solve {
        instance: PathBuf,
        /// Serve receivers covered by a single sender from that sender only (same optimum, smaller search).
        #[arg(long)]
        reduce: bool,
    },
    /// Optimal code for a two-sender instance with a coverage profile.
    SolveCellular { instance: PathBuf },
    /// Optimal multi-sender code by brute force over generator matrices.
    Oracle { instance: PathBuf },
    /// Optimal cellular code by brute force over generator matrices.
    OracleCellular { instance: PathBuf },
    /// Check that every receiver decodes a code.
    Verify { instance: PathBuf, generator: PathBuf },
    /// Encode a message vector, e.g. `1,0,1,1`.
    Encode {
        instance: PathBuf,
        generator: PathBuf,
        x: String,
    },
    /// 0-cycles, message graph, H-subgraphs and cycle classes.
    Analyze { instance: PathBuf },
    /// Side-information criticality: sufficient conditions against exact optima.
    Critical { instance: PathBuf },
    /// Cross-check solvers, oracle and predicates over many instances.
    Sweep {
        /// Check to run (default: all). One of: minrank-vs-oracle, cellular-vs-oracle,
        /// uncoded-iff-acyclic, spanning-tree, criticality, overlap-predicate,
        /// pruning-safe, uncoded-messages.
        #[arg(long)]
        check: Option<String>,
        /// Largest message count in the suite.
        #[arg(long, default_value_t = 3)]
        sweep_n: usize,
    },
}

/// Failures mapped to exit codes.
enum Failure {
    /// Infeasible instance, failed verification, or sweep mismatch.
    Negative(String),
    Input(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) => Failure::Negative(e.to_string()),
            Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => Failure::Limit(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Report, (Report, Failure)>;

struct Ctx {
    machine: bool,
    search: SearchConfig,
    oracle: SearchBounds,
    workers: usize,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_generator(path: &Path, inst: &Instance) -> Result<Generator, Failure> {
    parse_generator(&read(path)?, inst.n(), inst.q(), inst.sender_count())
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn list(set: MsgSet) -> String {
    set.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn code_lines(r: &mut Report, gen: &Generator) {
    r.heading("Code");
    for line in gen.to_string().lines() {
        r.item("code", line);
    }
}

fn verdict_lines(r: &mut Report, verdicts: &[bool]) {
    r.heading("Decoding");
    for (k, ok) in verdicts.iter().enumerate() {
        r.item("receiver", format!("{} {}", k + 1, if *ok { "ok" } else { "fail" }));
    }
}

fn instance_summary(r: &mut Report, inst: &Instance) {
    r.field("q", "Field size", inst.q());
    r.field("n", "Messages", inst.n());
    r.field("m", "Receivers", inst.m());
    r.field("senders", "Senders", inst.sender_count());
}

fn warn_cellular(r: &mut Report, inst: &Instance) {
    for w in inst.cellular_warnings() {
        r.item("warning", w);
    }
}

fn solve(ctx: &Ctx, path: &Path, reduce: bool) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let inst = load_instance(path).map_err(|f| (Report::new(ctx.machine), f))?;
    instance_summary(&mut r, &inst);
    let mut tmpl = build_template(&inst);
    if reduce {
        tmpl = apply_prop1(&inst, &tmpl);
    }
    r.field("dof", "Template degrees of freedom", tmpl.dof());
    let sol = match minrank_search_template(&inst, &tmpl, &ctx.search) {
        Ok(s) => s,
        Err(e) => return Err((r, e.into())),
    };
    r.field("N_opt", "Optimal codelength", sol.n_opt);
    code_lines(&mut r, &sol.generator);
    Ok(r)
}

fn solve_cellular(ctx: &Ctx, path: &Path) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let inst = load_instance(path).map_err(|f| (Report::new(ctx.machine), f))?;
    instance_summary(&mut r, &inst);
    warn_cellular(&mut r, &inst);
    let sol = match cellular_minsearch(&inst, &ctx.search) {
        Ok(s) => s,
        Err(e) => return Err((r, e.into())),
    };
    let d = sol.dims;
    r.field("dof", "Template degrees of freedom", sol.dof);
    r.field("N_opt", "Optimal codelength", sol.n_opt);
    r.heading("Subspace dimensions");
    for (k, v) in [
        ("d1", d.d1),
        ("d2", d.d2),
        ("d3", d.d3),
        ("d12", d.d12),
        ("d123", d.d123),
        ("dint12", d.dint12),
        ("dint3_12", d.dint3_12),
    ] {
        if ctx.machine {
            r.field(k, k, v);
        } else {
            r.item(k, format!("{k} = {v}"));
        }
    }
    code_lines(&mut r, &sol.generator);
    let verdicts = verify_decoding(&inst, &sol.generator).map_err(|e| (Report::new(ctx.machine), e.into()))?;
    verdict_lines(&mut r, &verdicts);
    Ok(r)
}

fn oracle(ctx: &Ctx, path: &Path, cellular: bool) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let inst = load_instance(path).map_err(|f| (Report::new(ctx.machine), f))?;
    instance_summary(&mut r, &inst);
    if cellular {
        warn_cellular(&mut r, &inst);
    }
    let res = if cellular {
        oracle_cellular(&inst, &ctx.oracle)
    } else {
        oracle_multisender(&inst, &ctx.oracle)
    };
    match res {
        Ok(sol) => {
            r.field("N_opt", "Optimal codelength", sol.n_opt);
            code_lines(&mut r, &sol.witness);
            Ok(r)
        }
        Err(e @ Error::Infeasible(_)) => {
            r.field("N_opt", "Optimal codelength", "infeasible");
            Err((r, e.into()))
        }
        Err(e) => Err((r, e.into())),
    }
}

fn verify(ctx: &Ctx, inst_path: &Path, gen_path: &Path) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let load = || -> Result<(Instance, Generator), Failure> {
        let inst = load_instance(inst_path)?;
        let gen = load_generator(gen_path, &inst)?;
        Ok((inst, gen))
    };
    let (inst, gen) = load().map_err(|f| (Report::new(ctx.machine), f))?;
    let verdicts = verify_decoding(&inst, &gen).map_err(|e| (Report::new(ctx.machine), e.into()))?;
    r.field("length", "Codelength", gen.len());
    verdict_lines(&mut r, &verdicts);
    let ok = verdicts.iter().all(|&v| v);
    r.field("all_decode", "All receivers decode", ok);
    if ok {
        Ok(r)
    } else {
        Err((r, Failure::Negative("some receiver cannot decode".into())))
    }
}

fn parse_vector(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Failure::Input(format!("`{t}` is not a field element")))
        })
        .collect()
}

fn encode_cmd(ctx: &Ctx, inst_path: &Path, gen_path: &Path, x: &str) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let run = || -> Result<Vec<Vec<u32>>, Failure> {
        let inst = load_instance(inst_path)?;
        let gen = load_generator(gen_path, &inst)?;
        gen.check_support(&inst)?;
        let x = parse_vector(x)?;
        if let Some(&bad) = x.iter().find(|&&v| v >= inst.q()) {
            return Err(Failure::Input(format!("{bad} is not below q = {}", inst.q())));
        }
        Ok(encode(&gen, &x)?)
    };
    let words = run().map_err(|f| (Report::new(ctx.machine), f))?;
    r.heading("Codeword");
    for (j, w) in words.iter().enumerate() {
        let vals = w.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        r.item("codeword", format!("s{}: {}", j + 1, vals));
    }
    Ok(r)
}

fn analyze(ctx: &Ctx, path: &Path) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let inst = load_instance(path).map_err(|f| (Report::new(ctx.machine), f))?;
    let body = |r: &mut Report| -> Result<(), Error> {
        instance_summary(r, &inst);
        let u = inst.message_graph();
        r.heading("Message graph edges");
        for (a, b) in u.edges() {
            r.item("message_edge", format!("{} {}", a + 1, b + 1));
        }
        r.field("shared", "Shared messages", list(inst.shared_messages()));
        r.heading("0-cycles");
        for c in zero_cycles(&inst)? {
            r.item(
                "zero_cycle:",
                format!("{} | connected={}", list(c.messages), u.is_connected_within(c.messages)),
            );
        }
        r.field("maximum_zero_cycle", "Maximum 0-cycle", list(maximum_zero_cycle(&inst)?));
        r.field("no_mc_zero_cycle", "No message-connected 0-cycle", thm4_predicate(&inst)?);
        if inst.is_cellular() {
            warn_cellular(r, &inst);
            let pruned = prune_side_info(&inst)?;
            r.heading("H-subgraphs (pruned)");
            for h in enumerate_h(&pruned)? {
                r.item(
                    "h_subgraph:",
                    format!("{} | r1={} r2={}", list(h.members), h.has_r1, h.has_r2),
                );
            }
            r.field("overlap_possible", "Some completion has V1 ∩ V2 ≠ 0", prop4_predicate(&inst)?);
            r.heading("Cycles (pruned)");
            for c in classify_cycles(&inst)? {
                let nodes = c.nodes.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
                let class = match c.class {
                    CycleClass::Irreducible => "irreducible",
                    CycleClass::Reducible => "reducible",
                };
                r.item("cycle:", format!("{nodes} | connected={} class={class}", c.message_connected));
            }
        }
        Ok(())
    };
    match body(&mut r) {
        Ok(()) => Ok(r),
        Err(e) => Err((r, e.into())),
    }
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        None => "-",
        Some(true) => "true",
        Some(false) => "false",
    }
}

fn critical(ctx: &Ctx, path: &Path) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let inst = load_instance(path).map_err(|f| (Report::new(ctx.machine), f))?;
    let rep = match criticality_report(&inst, &ctx.search) {
        Ok(x) => x,
        Err(e) => return Err((r, e.into())),
    };
    r.field("N_opt", "Optimal codelength", rep.n_opt);
    r.heading("Side-information edges (receiver message)");
    for e in &rep.edges {
        r.item(
            "edge",
            format!(
                "{} {} | thm2={} thm3={} cor2={} critical={}",
                e.receiver + 1,
                e.message + 1,
                flag(e.thm2_uncritical),
                flag(e.thm3_uncritical),
                flag(e.cor2_uncritical),
                e.oracle_critical
            ),
        );
    }
    for h in &rep.holder_choices {
        let p = h.removable_for.map_or("none".to_string(), |p| (p + 1).to_string());
        r.item("holder_choice", format!("{} | sender={p}", h.receiver + 1));
    }
    let violations = rep.violations().count();
    r.field("violations", "Sufficient conditions contradicted", violations);
    if rep.is_sound() {
        Ok(r)
    } else {
        Err((r, Failure::Negative("a sufficient condition flagged a critical edge".into())))
    }
}

fn sweep(ctx: &Ctx, check: Option<&str>, seed: Option<u64>, count: usize, sweep_n: usize) -> Outcome {
    let mut r = Report::new(ctx.machine);
    let checks: Vec<Check> = match check {
        None | Some("all") => Check::ALL.to_vec(),
        Some(name) => match Check::from_name(name) {
            Some(c) => vec![c],
            None => return Err((r, Failure::Input(format!("unknown check `{name}`")))),
        },
    };
    let limits = CheckLimits {
        search: SearchConfig::default().with_budget(ctx.search.budget),
        oracle: ctx.oracle.with_workers(1),
    };
    let mut failed = 0;
    for c in checks {
        let suite = match seed {
            Some(s) => random_suite(c, s, count, sweep_n),
            None => c.suite(sweep_n),
        };
        let rep = match run_sweep(c, &suite, &limits, ctx.workers) {
            Ok(x) => x,
            Err(e) => return Err((r, e.into())),
        };
        for (inst, why) in rep.failures.iter().take(5) {
            r.item("mismatch", format!("{} | {inst} | {why}", c.name()));
        }
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        r.item(
            "check",
            format!(
                "{} | instances={} skipped={} failures={} | {status}",
                c.name(),
                rep.checked,
                rep.skipped,
                rep.failures.len()
            ),
        );
        failed += rep.failures.len();
    }
    if failed == 0 {
        Ok(r)
    } else {
        Err((r, Failure::Negative(format!("{failed} mismatches"))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let ctx = Ctx {
        machine: cli.machine,
        search: SearchConfig::default().with_budget(cli.budget).with_workers(workers),
        oracle: SearchBounds::default().with_max_n(cli.max_n).with_workers(workers),
        workers,
    };
    let outcome = match &cli.command {
        Command::Solve { instance, reduce } => solve(&ctx, instance, *reduce),
        Command::SolveCellular { instance } => solve_cellular(&ctx, instance),
        Command::Oracle { instance } => oracle(&ctx, instance, false),
        Command::OracleCellular { instance } => oracle(&ctx, instance, true),
        Command::Verify { instance, generator } => verify(&ctx, instance, generator),
        Command::Encode { instance, generator, x } => encode_cmd(&ctx, instance, generator, x),
        Command::Analyze { instance } => analyze(&ctx, instance),
        Command::Critical { instance } => critical(&ctx, instance),
        Command::Sweep { check, sweep_n } => sweep(&ctx, check.as_deref(), cli.seed, cli.count, *sweep_n),
    };
    match outcome {
        Ok(r) => {
            r.print();
            ExitCode::SUCCESS
        }
        Err((r, failure)) => {
            r.print();
            let (code, msg) = match failure {
                Failure::Negative(m) => (1, m),
                Failure::Input(m) => (2, m),
                Failure::Limit(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
