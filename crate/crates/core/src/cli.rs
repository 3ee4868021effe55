//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! no witness, 2 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::catalog::{catalog_get, catalog_list};
use crate::complementation::{complement, type1_witness};
use crate::design::{classify, IncidenceStructure};
use crate::exec::with_jobs;
use crate::feasibility::{apply_rules, enumerate_tuples, scan_report};
use crate::format::{parse_design, write_design};
use crate::invariants::{ryser_invariants, verify_design};
use crate::search::{search_designs, search_type2_with, SearchSpec, Status, DEFAULT_V_CAP};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "ryserlab", version, about = "Ryser design workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a built-in symmetric design, or list them.
    Catalog {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        list: bool,
    },
    /// Print the class of a design (stdin when FILE is absent or `-`).
    Classify { file: Option<PathBuf> },
    /// Complement at a block and emit the result.
    Complement {
        file: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        block: Option<usize>,
        /// Instead report a block equal to E1 or E2, if any.
        #[arg(long, conflicts_with = "block")]
        witness: bool,
    },
    /// Print the derived parameters of a Ryser design as key=value lines.
    Invariants { file: Option<PathBuf> },
    /// Check every identity and inequality on a Ryser design.
    Verify { file: Option<PathBuf> },
    /// Enumerate and classify parameter tuples as TSV.
    Scan {
        #[arg(long)]
        lambda_min: i64,
        #[arg(long)]
        lambda_max: i64,
        /// Also emit tuples with negative x or y.
        #[arg(long)]
        relaxed: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Exhaustive search for designs with given parameters.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
struct Jobs {
    /// Worker threads; 1 runs sequentially.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    lambda: i64,
    /// Search every tuple with this number of points.
    #[arg(long, required_unless_present = "v_cap", conflicts_with = "v_cap")]
    v: Option<i64>,
    /// Restrict to one tuple by its larger replication number.
    #[arg(long, requires = "v")]
    r1: Option<i64>,
    /// Search every non-eliminated tuple up to this size and report Type-2 finds.
    #[arg(long)]
    v_cap: Option<usize>,
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long)]
    budget_secs: Option<f64>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Write solutions as design files plus manifest.tsv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    jobs: Jobs,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut out = Output::default();
    let code = match dispatch(cli.command, stdin, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out.err, "error: {e:#}");
            EXIT_USAGE
        }
    };
    let _ = stdout.write_all(out.out.as_bytes());
    let _ = stderr.write_all(out.err.as_bytes());
    let _ = stdout.flush();
    code
}

#[derive(Default)]
struct Output {
    out: String,
    err: String,
}

fn read_design(file: Option<&Path>, stdin: &mut dyn Read) -> Result<IncidenceStructure> {
    let (text, source) = match file {
        Some(p) if p != Path::new("-") => {
            (fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?, p.display().to_string())
        }
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).context("cannot read stdin")?;
            (text, "<stdin>".to_string())
        }
    };
    parse_design(&text).with_context(|| format!("{source}: malformed design"))
}

fn dispatch(command: Command, stdin: &mut dyn Read, o: &mut Output) -> Result<u8> {
    match command {
        Command::Catalog { name, list } => {
            if list {
                for e in catalog_list() {
                    writeln!(o.out, "{}\tv={} k={} lambda={}\tcomplementable={}", e.name, e.v, e.k, e.lambda, e.complementable)?;
                }
            } else {
                let name = name.expect("clap requires --name without --list");
                o.out.push_str(&write_design(&catalog_get(&name)?.design));
            }
            Ok(EXIT_OK)
        }
        Command::Classify { file } => {
            let class = classify(&read_design(file.as_deref(), stdin)?);
            writeln!(o.out, "{class}")?;
            Ok(if class.is_ryser() || class.is_symmetric() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Complement { file, block, witness } => {
            let s = read_design(file.as_deref(), stdin)?;
            if witness {
                return match type1_witness(&s)? {
                    Some((i, class)) => {
                        writeln!(o.out, "witness block={i} complement={class}")?;
                        Ok(EXIT_OK)
                    }
                    None => {
                        writeln!(o.out, "no witness")?;
                        Ok(EXIT_FAIL)
                    }
                };
            }
            let block = block.expect("clap requires --block without --witness");
            o.out.push_str(&write_design(&complement(&s, block)?));
            Ok(EXIT_OK)
        }
        Command::Invariants { file } => {
            let inv = ryser_invariants(&read_design(file.as_deref(), stdin)?)?;
            write!(o.out, "{inv}")?;
            Ok(EXIT_OK)
        }
        Command::Verify { file } => {
            let rep = verify_design(&read_design(file.as_deref(), stdin)?);
            write!(o.out, "{rep}")?;
            for note in &rep.notes {
                writeln!(o.err, "note: {note}")?;
            }
            Ok(if rep.overall_pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Scan { lambda_min, lambda_max, relaxed, jobs } => {
            let rep = with_jobs(jobs.jobs, |exec| scan_report(lambda_min, lambda_max, relaxed, exec))?;
            o.out.push_str(&rep.to_tsv());
            Ok(EXIT_OK)
        }
        Command::Search(args) => run_search(args, o),
    }
}

fn run_search(args: SearchArgs, o: &mut Output) -> Result<u8> {
    let budget = match args.budget_secs {
        Some(s) if !(s.is_finite() && s > 0.0) => bail!("--budget-secs must be positive"),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    if let Some(cap) = args.v_cap {
        let rep = with_jobs(args.jobs.jobs, |exec| search_type2_with(args.lambda, cap, budget, exec))?;
        o.out.push_str(&rep.report());
        return Ok(if rep.complete() && rep.type2_findings().is_empty() { EXIT_OK } else { EXIT_FAIL });
    }
    let v = args.v.expect("clap requires --v without --v-cap");
    let tuples: Vec<_> = enumerate_tuples(args.lambda, false, crate::exec::Execution::Sequential)?
        .into_iter()
        .filter(|t| t.v == v && args.r1.is_none_or(|r1| t.r1 == r1))
        .collect();
    writeln!(o.out, "search\tlambda={}\tv={}\ttuples={}", args.lambda, v, tuples.len())?;
    let mut results = Vec::new();
    for t in tuples {
        let verdict = apply_rules(&t)?;
        let mut spec = SearchSpec::new(t);
        spec.v_cap = DEFAULT_V_CAP;
        spec.max_solutions = args.max_solutions;
        spec.time_budget = budget;
        spec.node_budget = args.node_budget;
        let r = with_jobs(args.jobs.jobs, |exec| search_designs(&spec, exec))?;
        writeln!(o.out, "verdict\t{}\t{}", verdict.label(), verdict.rule_label())?;
        o.out.push_str(&r.report());
        results.push(r);
    }
    let complete = results.iter().all(|r| r.status != Status::Incomplete);
    writeln!(o.out, "overall\t{}", if complete { "COMPLETE" } else { "INCOMPLETE" })?;
    if let Some(dir) = &args.out {
        write_solutions(dir, &results)?;
    }
    Ok(EXIT_OK)
}

fn write_solutions(dir: &Path, results: &[crate::search::SearchResult]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut manifest = String::from("file\tlambda\tv\tr1\tr2\te1\ttype1\tlabeled\n");
    for r in results {
        let t = &r.tuple;
        for (i, s) in r.solutions.iter().enumerate() {
            let name = format!("lambda{}-v{}-r{}-{:03}.txt", t.lambda, t.v, t.r1, i);
            fs::write(dir.join(&name), write_design(&s.design)).with_context(|| format!("cannot write {name}"))?;
            writeln!(manifest, "{name}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", t.lambda, t.v, t.r1, t.r2, t.e1, s.type1, s.labeled)?;
        }
    }
    fs::write(dir.join("manifest.tsv"), manifest).context("cannot write manifest.tsv")?;
    Ok(())
}
