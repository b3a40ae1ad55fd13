//! Command-line front end for the exact flag-variety cohomology engine.

use clap::{Parser, Subcommand};
use flagcoh::cache::DiskCache;
use flagcoh::grassmann;
use flagcoh::rational::format_rat;
use flagcoh::{
    alpha_square_reduction, build_root_system, coset_length_counts, enumerate_weyl, BettiTable,
    CartanType, Family, FlagCohomology, ParabolicSubset, RootSystem,
};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flagcoh",
    version,
    about = "Exact rational cohomology of generalized flag varieties",
    long_about = "Exact rational cohomology of generalized flag varieties via invariant \
theory, cross-checked against Schubert cell counts.\n\nParabolic subsets are \
always given by the DEFINING set of simple-root nodes: the reflections in \
those nodes generate the subgroup. The empty set is the Borel case, a single \
node is a minimal parabolic."
)]
struct Cli {
    /// Emit machine-readable JSON instead of text tables
    #[arg(long, global = true)]
    json: bool,

    /// Directory for the invariant-basis cache (overrides FLAGCOH_CACHE)
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots, Cartan matrix, and invariant form of a simple type
    Roots {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: CartanType,
    },
    /// Order and length histogram of a Weyl group or parabolic subgroup
    Weyl {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: CartanType,
        /// Comma-separated generator nodes, e.g. 1,3 (default: all nodes)
        #[arg(long, value_name = "NODES")]
        gens: Option<String>,
    },
    /// Graded quotient dimensions next to the Schubert-cell counts
    Betti {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: CartanType,
        /// Defining nodes of the parabolic subset; empty or omitted = Borel
        #[arg(long, value_name = "NODES", num_args = 0..=1, default_missing_value = "")]
        parabolic: Option<String>,
    },
    /// Test whether the quotient ring is generated by its degree-one part
    CheckGen2 {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: CartanType,
        /// Defining nodes of the parabolic subset; empty or omitted = Borel
        #[arg(long, value_name = "NODES", num_args = 0..=1, default_missing_value = "")]
        parabolic: Option<String>,
    },
    /// Express the square of a simple root over an invariant quadric and
    /// squares of reflection-fixed linear forms
    ReduceAlpha2 {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: CartanType,
        /// Simple-root node (1-based)
        #[arg(long)]
        node: usize,
    },
    /// Chern data and Schubert identities of the flag of lines and planes
    /// in C^(2n+2)
    Example {
        #[arg(long)]
        n: u32,
    },
    /// Run the whole verification suite; exit 0 only if every check passes
    VerifyAll {
        /// Largest rank swept (every simple type and parabolic subset)
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cli
        .cache_dir
        .as_ref()
        .map(|d| DiskCache::new(d.clone()))
        .or_else(DiskCache::from_env);
    match run(cli, cache) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, cache: Option<DiskCache>) -> Result<ExitCode, String> {
    match cli.command {
        Command::Roots { cartan_type } => {
            let rs = build_root_system(cartan_type);
            print_roots(&rs, cli.json);
        }
        Command::Weyl { cartan_type, gens } => {
            let rs = build_root_system(cartan_type);
            let gens = match gens {
                None => ParabolicSubset::all(rs.rank()),
                Some(s) => parse_nodes(&s, rs.rank())?,
            };
            let elements = enumerate_weyl(&rs, &gens).map_err(|e| e.to_string())?;
            print_weyl(&rs, &gens, &elements, cli.json);
        }
        Command::Betti {
            cartan_type,
            parabolic,
        } => {
            let rs = build_root_system(cartan_type);
            let p = parse_nodes(parabolic.as_deref().unwrap_or(""), rs.rank())?;
            let ctx = FlagCohomology::with_cache(&rs, cache.as_ref());
            let quotient = ctx.betti_numbers(&p);
            let cells = coset_length_counts(&rs, &p).map_err(|e| e.to_string())?;
            print_betti(&rs, &p, &quotient, &cells, cli.json);
        }
        Command::CheckGen2 {
            cartan_type,
            parabolic,
        } => {
            let rs = build_root_system(cartan_type);
            let p = parse_nodes(parabolic.as_deref().unwrap_or(""), rs.rank())?;
            let ctx = FlagCohomology::with_cache(&rs, cache.as_ref());
            let report = ctx.degree2_generation_check(&p);
            if cli.json {
                let mut v = report.to_json();
                v["type"] = json!(rs.cartan_type().to_string());
                v["parabolic"] = json!(p.nodes().collect::<Vec<_>>());
                println!("{v}");
            } else {
                match (report.first_failing_degree, report.deficit) {
                    (Some(d), Some(k)) => println!(
                        "{} P={p}: degree-2 generation FAILS at degree {d} (deficit {k})",
                        rs.cartan_type()
                    ),
                    _ => println!("{} P={p}: degree-2 generation holds", rs.cartan_type()),
                }
            }
        }
        Command::ReduceAlpha2 { cartan_type, node } => {
            let rs = build_root_system(cartan_type);
            let cert = alpha_square_reduction(&rs, node).map_err(|e| e.to_string())?;
            if cli.json {
                let mut v = cert.to_json();
                v["type"] = json!(rs.cartan_type().to_string());
                v["valid"] = json!(cert.verify(&rs));
                println!("{v}");
            } else {
                println!(
                    "{} node {node}: q = {}",
                    rs.cartan_type(),
                    cert.q.to_text()
                );
                println!("  a = {}", format_rat(&cert.a));
                for (b, beta) in &cert.pairs {
                    println!("  b = {}, beta = {}", format_rat(b), beta.to_text());
                }
                println!(
                    "  identity a*alpha^2 + sum b*beta^2 = q: {}",
                    if cert.verify(&rs) { "verified" } else { "BROKEN" }
                );
            }
        }
        Command::Example { n } => {
            if n == 0 {
                return Err("--n must be at least 1".into());
            }
            print_example(n, cli.json)?;
        }
        Command::VerifyAll { max_rank } => {
            return Ok(verify_all(max_rank, cli.json, cache.as_ref()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses a comma-separated 1-based node list; empty means the Borel case.
fn parse_nodes(s: &str, rank: usize) -> Result<ParabolicSubset, String> {
    ParabolicSubset::parse_list(s, rank).map_err(|e| e.to_string())
}

fn print_roots(rs: &RootSystem, as_json: bool) {
    let gram_rows: Vec<Vec<i64>> = (0..rs.rank())
        .map(|i| {
            (0..rs.rank())
                .map(|j| {
                    i64::try_from(rs.invariant_gram().get(i, j).numer()).expect("integral gram")
                })
                .collect()
        })
        .collect();
    if as_json {
        println!(
            "{}",
            json!({
                "type": rs.cartan_type().to_string(),
                "rank": rs.rank(),
                "cartan_matrix": rs.cartan_matrix(),
                "gram": gram_rows,
                "positive_roots": rs.positive_roots(),
            })
        );
    } else {
        println!(
            "{}: rank {}, {} positive roots",
            rs.cartan_type(),
            rs.rank(),
            rs.positive_roots().len()
        );
        for root in rs.positive_roots() {
            println!("  {root:?}");
        }
        println!("invariant form:");
        for row in &gram_rows {
            println!("  {row:?}");
        }
    }
}

fn print_weyl(
    rs: &RootSystem,
    gens: &ParabolicSubset,
    elements: &[flagcoh::WeylElement],
    as_json: bool,
) {
    let max_len = elements.iter().map(|w| w.word_length()).max().unwrap_or(0);
    let mut histogram = vec![0usize; max_len + 1];
    for w in elements {
        histogram[w.word_length()] += 1;
    }
    if as_json {
        println!(
            "{}",
            json!({
                "type": rs.cartan_type().to_string(),
                "gens": gens.nodes().collect::<Vec<_>>(),
                "order": elements.len(),
                "length_histogram": histogram,
            })
        );
    } else {
        println!(
            "{} gens={gens}: order {}",
            rs.cartan_type(),
            elements.len()
        );
        println!("length histogram: {histogram:?}");
    }
}

fn print_betti(
    rs: &RootSystem,
    p: &ParabolicSubset,
    quotient: &BettiTable,
    cells: &BettiTable,
    as_json: bool,
) {
    let matches = quotient == cells;
    if as_json {
        println!(
            "{}",
            json!({
                "type": rs.cartan_type().to_string(),
                "parabolic": p.nodes().collect::<Vec<_>>(),
                "quotient": quotient.dims(),
                "cells": cells.dims(),
                "match": matches,
            })
        );
    } else {
        println!("{} P={p}", rs.cartan_type());
        println!("  degree   quotient   cells");
        let width = quotient.dims().len().max(cells.dims().len());
        for d in 0..width {
            let q = quotient.dims().get(d).copied();
            let c = cells.dims().get(d).copied();
            println!(
                "  {d:>6}   {:>8}   {:>5}",
                q.map_or("-".to_string(), |v| v.to_string()),
                c.map_or("-".to_string(), |v| v.to_string())
            );
        }
        println!("  verdict: {}", if matches { "MATCH" } else { "MISMATCH" });
    }
}

fn print_example(n: u32, as_json: bool) -> Result<(), String> {
    let chern = grassmann::chern_classes_twisted_cotangent(2 * n + 1);
    let f = grassmann::leray_hirsch_relation(n);
    let f0 = grassmann::factor_relation(n).map_err(|e| e.to_string())?;
    let epsilon = grassmann::identify_fiber_class(n).map_err(|e| e.to_string())?;
    let annihilated = grassmann::alternating_sum_annihilated(n);
    let reduced_f0 = grassmann::ring_reduce(n, &f0);
    if as_json {
        println!(
            "{}",
            json!({
                "n": n,
                "chern": chern.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "f": grassmann::format_hd(&f),
                "f0": grassmann::format_hd(&f0),
                "f0_reduced": reduced_f0.to_json(),
                "epsilon": epsilon,
                "alternating_sum": grassmann::alternating_sum(n).to_json(),
                "annihilated_by_sigma1": annihilated,
                "f0_nonzero_in_quotient": !reduced_f0.is_zero(),
            })
        );
    } else {
        println!("flag of lines and planes in C^{}", 2 * n + 2);
        println!("  chern vector: {chern:?}");
        println!("  f  = {}", grassmann::format_hd(&f));
        println!("  f0 = {}", grassmann::format_hd(&f0));
        println!("  alternating sum: {}", grassmann::alternating_sum(n));
        println!(
            "  annihilated by sigma_1: {}",
            if annihilated { "yes" } else { "NO" }
        );
        println!("  fiber class sign: {epsilon:+}");
        println!(
            "  f0 nonzero in the quotient: {}",
            if reduced_f0.is_zero() { "NO" } else { "yes" }
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify-all

struct Outcome {
    label: String,
    pass: bool,
    payload: serde_json::Value,
}

fn classical_weyl_order(ct: CartanType) -> u128 {
    let n = ct.rank as u128;
    let factorial = |k: u128| (1..=k).product::<u128>();
    match ct.family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => (1u128 << n) * factorial(n),
        Family::D => (1u128 << (n - 1)) * factorial(n),
        Family::G => 12,
        Family::F => 1152,
        Family::E => match ct.rank {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
    }
}

fn swept_types(max_rank: usize) -> Vec<CartanType> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for family in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G]
        {
            if let Ok(ct) = CartanType::new(family, rank) {
                out.push(ct);
            }
        }
    }
    out
}

enum Task {
    WeylOrder(usize),
    Betti(usize, Vec<usize>),
    MinimalParabolic(usize, usize),
    NegativeControl,
    ExampleSuite(u32),
}

fn verify_all(max_rank: usize, as_json: bool, cache: Option<&DiskCache>) -> ExitCode {
    let types = swept_types(max_rank);
    let systems: Vec<RootSystem> = types.iter().map(|&ct| build_root_system(ct)).collect();
    let contexts: Vec<FlagCohomology> = systems
        .iter()
        .map(|rs| FlagCohomology::with_cache(rs, cache))
        .collect();

    let mut tasks: Vec<Task> = Vec::new();
    for (i, rs) in systems.iter().enumerate() {
        tasks.push(Task::WeylOrder(i));
        let rank = rs.rank();
        for mask in 0..(1u32 << rank) {
            let nodes: Vec<usize> = (1..=rank).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            tasks.push(Task::Betti(i, nodes));
        }
        for node in 1..=rank {
            tasks.push(Task::MinimalParabolic(i, node));
        }
    }
    if types.iter().any(|ct| ct.family == Family::A && ct.rank == 3) {
        tasks.push(Task::NegativeControl);
    }
    for n in 1..=4u32 {
        tasks.push(Task::ExampleSuite(n));
    }

    // fixed task list, worker threads pull by index, results keep task order
    let cursor = std::sync::atomic::AtomicUsize::new(0);
    let results: std::sync::Mutex<Vec<Option<Outcome>>> =
        std::sync::Mutex::new((0..tasks.len()).map(|_| None).collect());
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let outcome = run_task(&tasks[i], &systems, &contexts);
                results.lock().unwrap()[i] = Some(outcome);
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut failures = 0usize;
    for outcome in results.into_iter().flatten() {
        if !outcome.pass {
            failures += 1;
        }
        if as_json {
            println!("{}", outcome.payload);
        } else {
            println!(
                "{} {}",
                if outcome.pass { "PASS" } else { "FAIL" },
                outcome.label
            );
        }
    }
    let total = tasks.len();
    if as_json {
        println!(
            "{}",
            json!({ "summary": { "checks": total, "failures": failures } })
        );
    } else if failures == 0 {
        println!("all {total} checks passed");
    } else {
        println!("{failures} of {total} checks FAILED");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_task(task: &Task, systems: &[RootSystem], contexts: &[FlagCohomology]) -> Outcome {
    match task {
        Task::WeylOrder(i) => {
            let rs = &systems[*i];
            let ct = rs.cartan_type();
            let expected = classical_weyl_order(ct);
            let enumerated = enumerate_weyl(rs, &ParabolicSubset::all(rs.rank()))
                .map(|g| g.len() as u128);
            let pass = enumerated.as_ref().map_or(false, |&got| got == expected);
            Outcome {
                label: format!("weyl-order {ct}: expected {expected}"),
                pass,
                payload: json!({
                    "check": "weyl-order",
                    "type": ct.to_string(),
                    "expected": expected.to_string(),
                    "enumerated": enumerated.map(|g| g.to_string()).unwrap_or_default(),
                    "status": if pass { "pass" } else { "fail" },
                }),
            }
        }
        Task::Betti(i, nodes) => {
            let rs = &systems[*i];
            let ct = rs.cartan_type();
            let p = ParabolicSubset::new(nodes.iter().copied(), rs.rank()).expect("valid nodes");
            let quotient = contexts[*i].betti_numbers(&p);
            let cells = coset_length_counts(rs, &p);
            let pass = cells.as_ref().map_or(false, |c| c == &quotient);
            let mut payload = json!({
                "check": "betti",
                "type": ct.to_string(),
                "parabolic": nodes,
                "status": if pass { "pass" } else { "fail" },
            });
            payload["quotient"] = json!(quotient.dims());
            if let Ok(c) = &cells {
                payload["cells"] = json!(c.dims());
            }
            Outcome {
                label: format!("betti {ct} P={p} {quotient}"),
                pass,
                payload,
            }
        }
        Task::MinimalParabolic(i, node) => {
            let rs = &systems[*i];
            let ct = rs.cartan_type();
            let p = ParabolicSubset::new([*node], rs.rank()).expect("valid node");
            let report = contexts[*i].degree2_generation_check(&p);
            let cert = alpha_square_reduction(rs, *node);
            // verify() includes the nonzero checks on a and the b_i
            let cert_ok = cert.as_ref().map_or(false, |c| c.verify(rs));
            let pass = report.holds && cert_ok;
            Outcome {
                label: format!("generation {ct} node {node}"),
                pass,
                payload: json!({
                    "check": "generation",
                    "type": ct.to_string(),
                    "node": node,
                    "generation_holds": report.holds,
                    "certificate_valid": cert_ok,
                    "status": if pass { "pass" } else { "fail" },
                }),
            }
        }
        Task::NegativeControl => {
            let rs = build_root_system(CartanType::new(Family::A, 3).expect("A3"));
            let p = ParabolicSubset::new([1, 3], 3).expect("subset");
            let report = FlagCohomology::new(&rs).degree2_generation_check(&p);
            let pass = !report.holds
                && report.first_failing_degree == Some(2)
                && report.deficit == Some(1);
            Outcome {
                label: "negative-control A3 P={1,3}: generation fails at degree 2, deficit 1"
                    .to_string(),
                pass,
                payload: json!({
                    "check": "negative-control",
                    "type": "A3",
                    "parabolic": [1, 3],
                    "report": report.to_json(),
                    "status": if pass { "pass" } else { "fail" },
                }),
            }
        }
        Task::ExampleSuite(n) => {
            let n = *n;
            let mut problems: Vec<String> = Vec::new();
            let zero = flagcoh::rational::Int::from(0);
            let chern = grassmann::chern_classes_twisted_cotangent(2 * n + 1);
            if chern.last() != Some(&zero) {
                problems.push("top Chern class does not vanish".into());
            }
            if n <= 2 {
                let even = grassmann::chern_classes_twisted_cotangent(2 * n);
                if even.last().map_or(true, |c| c == &zero) {
                    problems.push("even-dimension control class vanishes".into());
                }
            }
            if !grassmann::alternating_sum_annihilated(n) {
                problems.push("alternating sum not annihilated".into());
            }
            if n <= 3 {
                match grassmann::factor_relation(n) {
                    Ok(f0) => {
                        let d = flagcoh::Polynomial::variable(2, 2);
                        if f0.mul(&d) != grassmann::leray_hirsch_relation(n) {
                            problems.push("f0 * D does not reconstruct f".into());
                        }
                        if grassmann::ring_reduce(n, &f0).is_zero() {
                            problems.push("f0 reduces to zero".into());
                        }
                    }
                    Err(e) => problems.push(format!("factorization failed: {e}")),
                }
                match grassmann::identify_fiber_class(n) {
                    Ok(eps) => {
                        if n == 1 && eps != -1 {
                            problems.push("sign convention drifted for n=1".into());
                        }
                    }
                    Err(e) => problems.push(format!("fiber identification failed: {e}")),
                }
            }
            let pass = problems.is_empty();
            Outcome {
                label: format!("example n={n}"),
                pass,
                payload: json!({
                    "check": "example",
                    "n": n,
                    "problems": problems,
                    "status": if pass { "pass" } else { "fail" },
                }),
            }
        }
    }
}
