//! Acceptance criteria, one line of output per criterion. Runs as a plain
//! binary (`harness = false`) and exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Instant;

use edgsm::coloring::Coloring;
use edgsm::oracle::DEFAULT_ATOM_CAP;
use edgsm::*;
use edgsm_testkit as kit;
use serde_json::Value;

type Models = Vec<Vec<String>>;
type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_edgsm")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

struct Run {
    code: i32,
    stdout: Vec<u8>,
}

fn run(args: &[&str], stdin: Option<&str>) -> Run {
    let mut cmd = Command::new(bin());
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("spawn edgsm");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    Run { code: out.status.code().unwrap_or(-1), stdout: out.stdout }
}

fn solve_cli(path: &Path, method: &str) -> Result<Models, String> {
    let p = path.to_str().unwrap();
    let r = run(&["solve", p, "--method", method, "--format", "json"], None);
    if r.code != 0 {
        return Err(format!("solve {p} --method {method} exited {}", r.code));
    }
    let v: Value = serde_json::from_slice(&r.stdout).map_err(|e| e.to_string())?;
    serde_json::from_value(v["models"].clone()).map_err(|e| e.to_string())
}

fn models_all_methods(file: &str) -> Result<Models, String> {
    let path = corpus(file);
    let brute = solve_cli(&path, "brute")?;
    for m in ["coloring", "decomposition"] {
        let other = solve_cli(&path, m)?;
        if other != brute {
            return Err(format!("{file}: {m} gave {other:?}, brute gave {brute:?}"));
        }
    }
    Ok(brute)
}

fn names(p: &Program, models: &[Interpretation]) -> Models {
    models.iter().map(|m| m.names(p.atoms()).into_iter().map(String::from).collect()).collect()
}

fn oracle(p: &Program) -> Models {
    names(p, &enumerate_stable_brute(p, DEFAULT_ATOM_CAP).unwrap())
}

/// Kernel transform, coloring search, reconstruction.
fn pipeline(p: &Program) -> Models {
    let (k, log) = to_kernel(p, KernelOptions::default()).unwrap();
    let g = build_edg(&k);
    let sol = solve_colorings(&g, SolveOptions::default()).unwrap();
    let mut models: Vec<Interpretation> =
        sol.models.iter().map(|(_, s)| reconstruct_model(s, &log, p.atoms()).unwrap()).collect();
    sort_models(&mut models, p.atoms());
    names(p, &models)
}

fn expect(label: &str, got: &Models, want: &[&[&str]]) -> Result<(), String> {
    let want: Models = want.iter().map(|m| m.iter().map(|s| s.to_string()).collect()).collect();
    if *got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, expected {want:?}"))
    }
}

fn example_one() -> Check {
    expect("pi1", &models_all_methods("pi1.lp")?, &[&["b", "e", "h"]])?;
    expect("pi2", &models_all_methods("pi2.lp")?, &[&["a", "f", "p"]])?;
    expect("pi3", &models_all_methods("pi3.lp")?, &[])?;
    Ok("pi1 {b,e,h}, pi2 {a,f,p}, pi3 none; coloring, decomposition and brute agree".into())
}

fn example_two() -> Check {
    let r = run(&["analyze", corpus("pi4.lp").to_str().unwrap(), "--format", "json"], None);
    if r.code != 0 {
        return Err(format!("analyze exited {}", r.code));
    }
    let v: Value = serde_json::from_slice(&r.stdout).map_err(|e| e.to_string())?;
    let strs = |v: &Value| -> Vec<String> {
        v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_owned()).collect()
    };
    let cycles = v["cycles"].as_array().unwrap();
    let found: BTreeSet<(Vec<String>, String)> =
        cycles.iter().map(|c| (strs(&c["atoms"]), c["parity"].as_str().unwrap().to_owned())).collect();
    let expected: BTreeSet<(Vec<String>, String)> = [
        (vec!["p"], "odd"),
        (vec!["q"], "odd"),
        (vec!["p", "q"], "even"),
        (vec!["a", "b"], "even"),
        (vec!["z"], "odd"),
        (vec!["k", "l"], "even"),
    ]
    .into_iter()
    .map(|(a, p)| (a.into_iter().map(String::from).collect(), p.to_owned()))
    .collect();
    if cycles.len() != 6 || found != expected {
        return Err(format!("cycles {found:?}"));
    }
    let id_of = |atoms: &[&str]| -> String {
        let c = cycles.iter().find(|c| strs(&c["atoms"]) == atoms).unwrap();
        c["id"].as_str().unwrap().to_owned()
    };
    let bridges = v["bridges"].as_array().unwrap();
    if bridges.len() != 1 {
        return Err(format!("expected one bridge, got {}", bridges.len()));
    }
    let b = &bridges[0];
    let mut into = vec![id_of(&["p", "q"]), id_of(&["q"])];
    into.sort();
    let ok = b["auxiliary_rule"] == "q :- not v."
        && strs(&b["chain"]) == ["v :- not w.", "w :- not a."]
        && strs(&b["into"]) == into
        && strs(&b["from"]) == [id_of(&["a", "b"])];
    if !ok {
        return Err(format!("bridge {b}"));
    }
    let residue = strs(&v["residue_rules"]);
    if residue != ["v :- not w.", "w :- not a."] {
        return Err(format!("residue {residue:?}"));
    }
    Ok(format!("six cycles; bridge q :- not v. <- v, w from {} into {}", id_of(&["a", "b"]), into.join("/")))
}

fn inconsistent_handles() -> Check {
    expect("counterexample", &models_all_methods("inconsistent_handles.lp")?, &[])?;
    Ok("no stable models by all methods".into())
}

fn background_examples() -> Check {
    expect("two models", &models_all_methods("two_models.lp")?, &[&["p"], &["q"]])?;
    expect("odd triangle", &models_all_methods("odd_triangle.lp")?, &[])?;
    Ok("{p}, {q}; odd triangle none".into())
}

fn oracle_equivalence() -> Check {
    let n = 1000;
    for seed in 0..n {
        let p = kit::random_program(&mut kit::rng(seed), 10, 20);
        let (got, want) = (pipeline(&p), oracle(&p));
        if got != want {
            return Err(format!("seed {seed}: pipeline {got:?}, oracle {want:?}\n{p}"));
        }
    }
    Ok(format!("{n} random programs, 0 mismatches"))
}

fn coloring_bijection() -> Check {
    let n = 300;
    let mut total = 0;
    for seed in 0..n {
        let k = kit::random_kernel(&mut kit::rng(10_000 + seed), 8);
        let g = build_edg(&k);
        let v = g.len();
        let admissible: Vec<Coloring> = (0u32..1 << v)
            .map(|bits| Coloring::from_colors((0..v).map(|i| if bits >> i & 1 == 1 { Color::Green } else { Color::Red })))
            .filter(|c| is_admissible(&g, c))
            .collect();
        let stable = enumerate_stable_brute(&k, DEFAULT_ATOM_CAP).unwrap();
        let images: BTreeSet<Interpretation> = admissible.iter().map(|c| coloring_to_interpretation(&g, c)).collect();
        if admissible.len() != stable.len() || images.len() != admissible.len() {
            return Err(format!("seed {seed}: {} admissible, {} stable, {} images\n{}", admissible.len(), stable.len(), images.len(), *k));
        }
        if images != stable.into_iter().collect() {
            return Err(format!("seed {seed}: image set differs from stable models"));
        }
        total += admissible.len();
    }
    Ok(format!("{n} kernels, {total} admissible colorings, all matched"))
}

fn call_consistency() -> Check {
    let n = 200;
    for seed in 0..n {
        let p = kit::random_call_consistent(&mut kit::rng(20_000 + seed), 8, 12);
        if !is_call_consistent(&p).holds {
            return Err(format!("seed {seed}: generator produced an inconsistent program"));
        }
        if pipeline(&p).is_empty() {
            return Err(format!("seed {seed}: no stable model\n{p}"));
        }
    }
    Ok(format!("{n} call-consistent programs, each with a model"))
}

fn necessary_condition() -> Check {
    let n = 200;
    for seed in 0..n {
        let text = {
            let p = kit::with_unconstrained_odd_cycle(&mut kit::rng(30_000 + seed), 8, 12);
            p.to_string()
        };
        let p = parse_program(&text).unwrap();
        let (k, _) = to_kernel(&p, KernelOptions::default()).unwrap();
        let v = check_necessary_condition(&k, &build_edg(&k), graph::DEFAULT_CYCLE_CAP);
        if v.status != ExistenceStatus::NoModelsProven {
            return Err(format!("seed {seed}: verdict {:?}", v.status));
        }
        if !pipeline(&p).is_empty() {
            return Err(format!("seed {seed}: solver found models"));
        }
        if seed < 20 {
            let r = run(&["check", "-", "--format", "json"], Some(&text));
            let out: Value = serde_json::from_slice(&r.stdout).map_err(|e| e.to_string())?;
            if r.code != 0 || out["status"] != "no_models_proven" {
                return Err(format!("seed {seed}: check exited {} with {out}", r.code));
            }
        }
    }
    Ok(format!("{n} programs: no_models_proven and 0 models"))
}

fn even_cycles() -> Check {
    for n in 1..=5 {
        let p = kit::even_cycle(n);
        let at = |start: usize| -> Vec<String> {
            let mut v: Vec<String> = (start..2 * n).step_by(2).map(|i| format!("e{i}")).collect();
            v.sort();
            v
        };
        let mut want = vec![at(0), at(1)];
        want.sort();
        let mut got = pipeline(&p);
        got.sort();
        if got != want {
            return Err(format!("length {}: {got:?}", 2 * n));
        }
    }
    Ok("lengths 2..10: exactly the two alternating sets".into())
}

/// Only programs with a non-empty kernel count towards the corpus; they
/// alternate between uniform random programs and random kernels.
fn decomposition_agrees() -> Check {
    let want = 200;
    let (mut agreed, mut skipped) = (0, 0);
    let mut seed = 40_000u64;
    while agreed < want {
        if seed > 40_000 + 50 * want as u64 {
            return Err(format!("only {agreed} non-trivial programs within budget"));
        }
        let mut r = kit::rng(seed);
        let p = if seed.is_multiple_of(2) { kit::random_program(&mut r, 8, 14) } else { kit::random_kernel(&mut r, 8).into_program() };
        seed += 1;
        let (k, log) = to_kernel(&p, KernelOptions::default()).unwrap();
        if k.is_empty() {
            continue;
        }
        let g = build_edg(&k);
        let decomposed = match solve_by_decomposition(&k, &g, DecomposeOptions::default()) {
            Ok(m) => m,
            Err(DecomposeError::DecompositionBudgetExceeded { .. } | DecomposeError::Cycles(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("seed {}: {e}", seed - 1)),
        };
        let mut lifted: Vec<Interpretation> =
            decomposed.iter().map(|s| reconstruct_model(s, &log, p.atoms()).unwrap()).collect();
        sort_models(&mut lifted, p.atoms());
        let (got, colored) = (names(&p, &lifted), pipeline(&p));
        if got != colored {
            return Err(format!("seed {}: decomposition {got:?}, coloring {colored:?}", seed - 1));
        }
        agreed += 1;
    }
    Ok(format!("{agreed} programs with non-empty kernels agree ({skipped} over budget skipped)"))
}

fn determinism() -> Check {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "lp"))
        .collect();
    files.sort();
    let invocations: &[&[&str]] = &[
        &["parse"],
        &["parse", "--format", "json"],
        &["kernel"],
        &["kernel", "--format", "json"],
        &["graph", "--kind", "edg"],
        &["graph", "--kind", "dg"],
        &["graph", "--kind", "edg", "--format", "json"],
        &["graph", "--kind", "dg", "--format", "json", "--kernel"],
        &["analyze"],
        &["analyze", "--format", "json"],
        &["check"],
        &["check", "--format", "json"],
        &["solve"],
        &["solve", "--format", "json", "--heuristic", "lex"],
        &["solve", "--format", "json", "--method", "decomposition"],
        &["solve", "--format", "json", "--method", "brute"],
        &["verify"],
    ];
    let mut count = 0;
    for f in &files {
        for inv in invocations {
            let mut args = vec![inv[0], f.to_str().unwrap()];
            args.extend(&inv[1..]);
            let (a, b) = (run(&args, None), run(&args, None));
            if a.code != 0 || a.code != b.code || a.stdout != b.stdout {
                return Err(format!("{args:?}: exit {} / {}", a.code, b.code));
            }
            count += 1;
        }
    }
    Ok(format!("{count} invocations over {} corpus files byte-identical", files.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("example 1 programs", example_one),
        ("example 2 cycle inventory", example_two),
        ("inconsistent handles", inconsistent_handles),
        ("background examples", background_examples),
        ("oracle equivalence", oracle_equivalence),
        ("coloring bijection", coloring_bijection),
        ("call-consistency", call_consistency),
        ("unconstrained odd cycle", necessary_condition),
        ("unconstrained even cycles", even_cycles),
        ("decomposition solver", decomposition_agrees),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
