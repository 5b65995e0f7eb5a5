use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgsm::analysis::{decompose, Decomposition};
use edgsm::graph::{DotGraph, DEFAULT_CYCLE_CAP};
use edgsm::kernel::DEFAULT_UNFOLD_CAP;
use edgsm::oracle::DEFAULT_ATOM_CAP;
use edgsm::*;
use serde::Serialize;
use serde_json::json;

mod report;

use report::{rule_text, AnalyzeJson};

#[derive(Parser)]
#[command(name = "edgsm", version, about = "Stable models of ground normal logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the program in canonical form
    Parse(Common),
    /// Reduce to a kernel program and show the transformation log
    Kernel {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_UNFOLD_CAP, value_parser = at_least_one)]
        unfold_cap: usize,
    },
    /// Export the EDG or the DG
    Graph {
        #[arg(value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphKind::Edg)]
        kind: GraphKind,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        /// Draw the graph of the kernel program instead of the input
        #[arg(long)]
        kernel: bool,
    },
    /// Inventory of cycles, handles, extended cycles and bridges of the kernel
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        caps: Caps,
    },
    /// Structural existence verdict
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        caps: Caps,
    },
    /// Enumerate stable models
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, value_enum, default_value_t = Method::Coloring)]
        method: Method,
        #[arg(long, default_value_t = coloring::DEFAULT_MAX_MODELS, value_parser = at_least_one)]
        max_models: usize,
        #[arg(long, value_enum, default_value_t = HeuristicArg::Handles)]
        heuristic: HeuristicArg,
    },
    /// Compare the coloring solver against brute-force enumeration
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        caps: Caps,
    },
}

#[derive(Args)]
struct Common {
    /// Program file, or `-` for stdin
    #[arg(value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP, value_parser = at_least_one)]
    cycle_cap: usize,
    #[arg(long, default_value_t = DEFAULT_UNFOLD_CAP, value_parser = at_least_one)]
    unfold_cap: usize,
    /// Atom limit for brute-force enumeration
    #[arg(long, default_value_t = DEFAULT_ATOM_CAP, value_parser = at_least_one)]
    atom_cap: usize,
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Edg,
    Dg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Coloring,
    Decomposition,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeuristicArg {
    Handles,
    Lex,
}

enum Failure {
    Io(String),
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Io(_) => "io",
            Failure::Lib(Error::Syntax(_)) => "syntax",
            Failure::Lib(e) if e.is_budget() => "budget",
            Failure::Lib(_) => "internal",
            Failure::Mismatch(_) => "mismatch",
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Io(_) | Failure::Lib(Error::Syntax(_)) => 2,
            Failure::Lib(e) if e.is_budget() => 3,
            Failure::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::Mismatch(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_program(path: &PathBuf) -> Result<Program, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    Ok(parse_program(&text).map_err(Error::from)?)
}

fn kernel_of(p: &Program, unfold_cap: usize) -> Result<(KernelProgram, TransformLog), Failure> {
    Ok(to_kernel(p, KernelOptions { unfold_cap }).map_err(Error::from)?)
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn model_names(p: &Program, models: &[Interpretation]) -> Vec<Vec<String>> {
    models.iter().map(|m| m.names(p.atoms()).into_iter().map(String::from).collect()).collect()
}

fn plural(n: usize) -> String {
    format!("{n} model{}", if n == 1 { "" } else { "s" })
}

fn cmd_kernel(c: &Common, unfold_cap: usize) -> Outcome {
    let p = read_program(&c.input)?;
    let (k, log) = kernel_of(&p, unfold_cap)?;
    let log = log.to_json(p.atoms());
    Ok(match c.format {
        Format::Json => {
            let rules: Vec<String> = k.rules().iter().map(|r| rule_text(&k, r)).collect();
            pretty(&json!({ "kernel": rules, "log": log }))
        }
        Format::Text => {
            let mut out = k.to_string();
            let list = |v: &[String]| if v.is_empty() { "-".to_owned() } else { v.join(" ") };
            let tail: Vec<String> = log.tail.iter().map(|t| t.atom.clone()).collect();
            out.push_str(&format!("% facts: {}\n", list(&log.facts)));
            out.push_str(&format!("% false: {}\n", list(&log.forced_false)));
            out.push_str(&format!("% tail: {}\n", list(&tail)));
            out.push_str(&format!("% unfolded rules: {}\n", log.unfolded_rules));
            out
        }
    })
}

fn cmd_graph(input: &PathBuf, kind: GraphKind, format: GraphFormat, on_kernel: bool) -> Outcome {
    let mut p = read_program(input)?;
    if on_kernel {
        p = kernel_of(&p, DEFAULT_UNFOLD_CAP)?.0.into_program();
    }
    let (name, graph): (&str, Box<dyn DotGraph>) = match kind {
        GraphKind::Edg => ("edg", Box::new(build_edg(&p))),
        GraphKind::Dg => ("dg", Box::new(build_dg(&p))),
    };
    Ok(match format {
        GraphFormat::Dot => to_dot(&*graph, &DotOptions { name, coloring: None }),
        GraphFormat::Json => {
            let vertices: Vec<_> =
                graph.node_labels().into_iter().enumerate().map(|(id, label)| json!({ "id": id, "label": label })).collect();
            let edges: Vec<_> = graph
                .signed_edges()
                .into_iter()
                .map(|(from, to, sign)| json!({ "from": from, "to": to, "sign": sign.symbol() }))
                .collect();
            pretty(&json!({ "kind": name, "vertices": vertices, "edges": edges }))
        }
    })
}

fn cmd_analyze(c: &Common, caps: Caps) -> Outcome {
    let p = read_program(&c.input)?;
    let (k, _) = kernel_of(&p, caps.unfold_cap)?;
    let g = build_edg(&k);
    let d: Decomposition = decompose(&k, &g, caps.cycle_cap).map_err(Error::from)?;
    let report = AnalyzeJson::new(&k, &g, &d);
    Ok(match c.format {
        Format::Json => pretty(&report),
        Format::Text => report.table(),
    })
}

fn cmd_check(c: &Common, caps: Caps) -> Outcome {
    let p = read_program(&c.input)?;
    let (k, _) = kernel_of(&p, caps.unfold_cap)?;
    let g = build_edg(&k);
    let v = check_necessary_condition(&k, &g, caps.cycle_cap);
    Ok(match c.format {
        Format::Json => pretty(&v),
        Format::Text => {
            let status = serde_json::to_value(v.status).unwrap();
            let mut out = format!("status: {}\n", status.as_str().unwrap());
            for r in &v.reasons {
                out.push_str(&format!("  {r}\n"));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SolveJson {
    models: Vec<Vec<String>>,
    count: usize,
    truncated: bool,
    method: Method,
}

struct Solved {
    models: Vec<Interpretation>,
    truncated: bool,
}

fn solve(p: &Program, method: Method, heuristic: Heuristic, max_models: usize, caps: Caps) -> Result<Solved, Failure> {
    let mut truncated = false;
    let mut models = match method {
        Method::Brute => enumerate_stable_brute(p, caps.atom_cap).map_err(Error::from)?,
        Method::Coloring | Method::Decomposition => {
            let (k, log) = kernel_of(p, caps.unfold_cap)?;
            let g = build_edg(&k);
            let kernel_models = if method == Method::Coloring {
                let opts = SolveOptions { max_models, heuristic, cycle_cap: caps.cycle_cap };
                let sol = solve_colorings(&g, opts).map_err(Error::from)?;
                truncated = sol.truncated;
                sol.models.into_iter().map(|(_, s)| s).collect()
            } else {
                let opts = DecomposeOptions { cycle_cap: caps.cycle_cap, ..Default::default() };
                solve_by_decomposition(&k, &g, opts).map_err(Error::from)?
            };
            kernel_models
                .iter()
                .map(|s| reconstruct_model(s, &log, p.atoms()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Error::from)?
        }
    };
    sort_models(&mut models, p.atoms());
    if models.len() > max_models {
        models.truncate(max_models);
        truncated = true;
    }
    Ok(Solved { models, truncated })
}

fn cmd_solve(c: &Common, caps: Caps, method: Method, max_models: usize, heuristic: HeuristicArg) -> Outcome {
    let p = read_program(&c.input)?;
    let heuristic = match heuristic {
        HeuristicArg::Handles => Heuristic::Handles,
        HeuristicArg::Lex => Heuristic::Lexicographic,
    };
    let s = solve(&p, method, heuristic, max_models, caps)?;
    let names = model_names(&p, &s.models);
    Ok(match c.format {
        Format::Json => {
            let v = SolveJson { count: names.len(), models: names, truncated: s.truncated, method };
            let mut out = serde_json::to_string(&v).unwrap();
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (i, m) in names.iter().enumerate() {
                out.push_str(&format!("model {}: {{{}}}\n", i + 1, m.join(", ")));
            }
            out.push_str(&plural(names.len()));
            if s.truncated {
                out.push_str(" (truncated)");
            }
            out.push('\n');
            out
        }
    })
}

fn cmd_verify(c: &Common, caps: Caps) -> Outcome {
    let p = read_program(&c.input)?;
    let max = usize::MAX;
    let colored = solve(&p, Method::Coloring, Heuristic::Handles, max, caps)?.models;
    let brute = solve(&p, Method::Brute, Heuristic::Handles, max, caps)?.models;
    if colored != brute {
        let show = |m: &[Interpretation]| format!("{:?}", model_names(&p, m));
        return Err(Failure::Mismatch(format!(
            "coloring != brute: coloring {} {}, brute {} {}",
            plural(colored.len()),
            show(&colored),
            plural(brute.len()),
            show(&brute)
        )));
    }
    Ok(match c.format {
        Format::Json => pretty(&json!({ "agree": true, "count": brute.len() })),
        Format::Text => format!("coloring == brute: {}\n", plural(brute.len())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json_errors, outcome) = match &cli.command {
        Command::Parse(c) => (c.format == Format::Json, read_program(&c.input).map(|p| match c.format {
            Format::Text => p.to_string(),
            Format::Json => pretty(&json!({ "rules": p.rules().iter().map(|r| rule_text(&p, r)).collect::<Vec<_>>() })),
        })),
        Command::Kernel { common, unfold_cap } => (common.format == Format::Json, cmd_kernel(common, *unfold_cap)),
        Command::Graph { input, kind, format, kernel } => {
            (*format == GraphFormat::Json, cmd_graph(input, *kind, *format, *kernel))
        }
        Command::Analyze { common, caps } => (common.format == Format::Json, cmd_analyze(common, *caps)),
        Command::Check { common, caps } => (common.format == Format::Json, cmd_check(common, *caps)),
        Command::Solve { common, caps, method, max_models, heuristic } => {
            (common.format == Format::Json, cmd_solve(common, *caps, *method, *max_models, *heuristic))
        }
        Command::Verify { common, caps } => (common.format == Format::Json, cmd_verify(common, *caps)),
    };
    match outcome {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if json_errors {
                let v = json!({ "error": { "kind": f.kind(), "message": f.message() } });
                eprintln!("{}", serde_json::to_string(&v).unwrap());
            } else {
                eprintln!("edgsm: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
