use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bninf::bayesnet::{
    conditional_probability, parse_network, positive_inference, threshold_inference, validate_network, write_network,
    Assignment, BayesianNetwork,
};
use bninf::graph::{
    moralize, parse_dag, parse_graph, tvsn_exact_with, vsn_exact_with, write_graph, Dag, TopologicalOrdering,
    DEFAULT_GUARD,
};
use bninf::instances::{parse_cmc, write_cmc, CliqueInstance};
use bninf::machines::{acceptance_probability_with, parse_machine, Budget, NtmSpec, DEFAULT_CONFIGURATION_GUARD};
use bninf::rational::{format_rational, half, parse_probability};
use bninf::reductions::{
    clique_to_positive_inference, cmc_to_positive_inference, ntm_to_bayesnet, positive_inference_to_clique,
    positive_inference_to_cmc, tstm_to_bayesnet, NetworkReduction, Provenance,
};
use bninf::sampling::{
    decide_by_sampling, exact_acceptance_probability_with, frontier_sample, SeededSource, Verdict, DEFAULT_DRAW_GUARD,
};
use bninf::suites::{run_suite, SUITES};
use bninf::{Error, Execution, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact inference, sampling, separation numbers and hardness reductions for
/// discrete Bayesian networks.
#[derive(Parser)]
#[command(name = "bninf", version)]
struct Cli {
    /// Run every computation on the sequential code path.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QueryArgs {
    /// Hypothesis binding `Var=Value`; repeatable.
    #[arg(long = "h", value_name = "VAR=VALUE")]
    hypothesis: Vec<String>,

    /// Evidence binding `Var=Value`; repeatable.
    #[arg(long = "e", value_name = "VAR=VALUE")]
    evidence: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print Pr(h | e) as an exact fraction.
    Infer {
        network: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Decide Pr(h | e) > 0, or Pr(h | e) > q with --q. Exit status 0 for
    /// yes, 1 for no.
    Decide {
        network: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Threshold `num/den`.
        #[arg(long)]
        q: Option<String>,
        /// Run one round of the sampling procedure instead of exact inference.
        #[arg(long)]
        sampled: bool,
        /// With --sampled, print the exact acceptance probability too.
        #[arg(long, requires = "sampled")]
        exact: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Limit on enumerated draw sequences for --exact.
        #[arg(long, default_value_t = DEFAULT_DRAW_GUARD)]
        guard: u64,
    },
    /// Forward-sample one assignment and run the acceptance gadget on it.
    Sample {
        network: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling order as variable names; defaults to the file order
        /// repaired into a topological order.
        #[arg(long, value_delimiter = ',')]
        order: Vec<String>,
    },
    /// Check a network file and list every structural problem.
    Validate { network: PathBuf },
    /// Topological vertex separation number of a DAG or network, with a
    /// witness ordering.
    Tvsn {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Vertex separation number of an undirected graph, with a witness
    /// permutation.
    Vsn {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Moral graph of a DAG or network.
    Moralize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a reduction and write the target instance plus a `.prov` sidecar.
    Reduce {
        reduction: Reduction,
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Clique size, or time bound for ntm-to-net.
        #[arg(long)]
        k: Option<usize>,
        /// Machine input word for ntm-to-net.
        #[arg(long = "input", default_value = "")]
        input_word: String,
        /// Space bound for tstm-to-net.
        #[arg(long)]
        s: Option<usize>,
        /// Time bound for tstm-to-net.
        #[arg(long)]
        t: Option<usize>,
        /// Subset-DP guard when choosing the ordering for inference-to-cmc.
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Run a named verification sweep (or `all`) and print a pass/fail table.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Does the machine accept the input with probability > 1/2 within k steps?
    Stmma {
        machine: PathBuf,
        #[arg(long = "input", default_value = "")]
        input_word: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CONFIGURATION_GUARD)]
        guard: usize,
    },
    /// Does the machine accept the empty input with probability > 1/2 within
    /// t steps and s cells?
    Tstmma {
        machine: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_CONFIGURATION_GUARD)]
        guard: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    CliqueToInference,
    InferenceToClique,
    CmcToInference,
    InferenceToCmc,
    NtmToNet,
    TstmToNet,
}

/// Any error; reported on stderr with exit status 2.
struct Failure {
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { message: message.into() }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match run(cli.command, exec) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Parses a file, prefixing errors with its path.
fn load<T>(path: &Path, parse: impl Fn(&str) -> bninf::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Parses and validates a network file.
fn load_network(path: &Path) -> Result<BayesianNetwork, Failure> {
    load(path, |text| {
        let net = parse_network(text)?;
        net.ensure_valid()?;
        Ok(net)
    })
}

/// A DAG file, or the DAG of a network file, chosen by header.
fn load_dag(path: &Path) -> Result<(Dag, Option<BayesianNetwork>), Failure> {
    let text = read(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    let result = if first == Some("bayesnet v1") {
        parse_network(&text).and_then(|net| Ok((net.dag()?, Some(net))))
    } else {
        parse_dag(&text).map(|d| (d, None))
    };
    result.map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path) -> Result<NtmSpec, Failure> {
    load(path, parse_machine)
}

fn query(net: &BayesianNetwork, args: &QueryArgs) -> Result<(Assignment, Assignment), Failure> {
    Ok((net.parse_assignment(&args.hypothesis)?, net.parse_assignment(&args.evidence)?))
}

fn vertex_name(net: Option<&BayesianNetwork>, v: usize) -> String {
    match net {
        Some(net) => net.variable(v).name.clone(),
        None => v.to_string(),
    }
}

fn run(command: Command, exec: Execution) -> Outcome {
    match command {
        Command::Infer { network, query: q } => {
            let net = load_network(&network)?;
            let (h, e) = query(&net, &q)?;
            println!("{}", format_rational(&conditional_probability(&net, &h, &e)?));
            Ok(true)
        }
        Command::Decide {
            network,
            query: q,
            q: threshold,
            sampled,
            exact,
            seed,
            guard,
        } => {
            let net = load_network(&network)?;
            let (h, e) = query(&net, &q)?;
            let threshold = threshold.map(|t| parse_probability(&t)).transpose()?;
            let answer = if sampled {
                let q = threshold.unwrap_or_else(|| Rational::from_integer(0.into()));
                if exact {
                    let p = exact_acceptance_probability_with(&net, &h, &e, &q, guard, exec)?;
                    println!("acceptance probability {}", format_rational(&p));
                }
                let verdict = decide_by_sampling(&net, &h, &e, &q, &mut SeededSource::new(seed))?;
                verdict == Verdict::Accept
            } else {
                match &threshold {
                    Some(q) => threshold_inference(&net, &h, &e, q)?,
                    None => positive_inference(&net, &h, &e)?,
                }
            };
            println!("{answer}");
            Ok(answer)
        }
        Command::Sample {
            network,
            query: q,
            q: threshold,
            seed,
            order,
        } => {
            let net = load_network(&network)?;
            let (h, e) = query(&net, &q)?;
            let threshold = parse_probability(&threshold)?;
            let dag = net.dag()?;
            let order = if order.is_empty() {
                dag.default_ordering()
            } else {
                let ids = order
                    .iter()
                    .map(|name| net.find(name).ok_or_else(|| Error::UnknownVariable(name.clone())))
                    .collect::<bninf::Result<Vec<_>>>()?;
                TopologicalOrdering::new(&dag, ids)?
            };
            let trace = frontier_sample(&net, &order, &h, &e, &threshold, &mut SeededSource::new(seed))?;
            println!("seed {seed}");
            println!("sample {}", net.describe(&trace.assignment));
            println!("peak-live-set {}", trace.peak_live_set);
            println!("verdict {}", if trace.verdict == Verdict::Accept { "accept" } else { "reject" });
            Ok(true)
        }
        Command::Validate { network } => {
            let net = load(&network, parse_network)?;
            let diagnostics = validate_network(&net);
            for d in &diagnostics {
                println!("{d}");
            }
            if diagnostics.is_empty() {
                println!("ok: {} variables", net.len());
            }
            Ok(diagnostics.is_empty())
        }
        Command::Tvsn { input, guard } => {
            let (dag, net) = load_dag(&input)?;
            let cert = tvsn_exact_with(&dag, guard, exec)?;
            println!("{}", cert.width);
            let names: Vec<String> = cert.ordering.iter().map(|&v| vertex_name(net.as_ref(), v)).collect();
            println!("witness {}", names.join(" "));
            Ok(true)
        }
        Command::Vsn { input, guard } => {
            let text = read(&input)?;
            let graph = match parse_graph(&text) {
                Ok(g) => g,
                Err(graph_error) => match load_dag(&input) {
                    Ok((dag, _)) => dag.underlying(),
                    Err(_) => return Err(fail(format!("{}: {graph_error}", input.display()))),
                },
            };
            let cert = vsn_exact_with(&graph, guard, exec)?;
            println!("{}", cert.width);
            let names: Vec<String> = cert.ordering.iter().map(ToString::to_string).collect();
            println!("witness {}", names.join(" "));
            Ok(true)
        }
        Command::Moralize { input, out } => {
            let (dag, net) = load_dag(&input)?;
            let mut text = write_graph(&moralize(&dag));
            if let Some(net) = &net {
                for v in 0..net.len() {
                    let _ = writeln!(text, "# {v} {}", net.variable(v).name);
                }
            }
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Reduce {
            reduction,
            input,
            out,
            query: q,
            k,
            input_word,
            s,
            t,
            guard,
        } => reduce(reduction, &input, &out, &q, k, &input_word, s.zip(t), guard, exec),
        Command::Verify { suite, seed } => verify(&suite, seed, exec),
        Command::Stmma {
            machine,
            input_word,
            k,
            guard,
        } => {
            let m = load_machine(&machine)?;
            let word = m.parse_input(&input_word)?;
            let p = acceptance_probability_with(&m, &word, Budget::time(k), guard)?;
            report_machine(&p)
        }
        Command::Tstmma { machine, s, t, guard } => {
            let m = load_machine(&machine)?;
            let p = acceptance_probability_with(&m, &[], Budget::time_and_space(t, s), guard)?;
            report_machine(&p)
        }
    }
}

fn report_machine(p: &Rational) -> Outcome {
    let answer = *p > half();
    println!("acceptance probability {}", format_rational(p));
    println!("{answer}");
    Ok(answer)
}

fn provenance_path(out: &Path) -> PathBuf {
    out.with_extension("prov")
}

fn write_with_provenance(out: &Path, text: &str, provenance: &Provenance) -> Result<(), Failure> {
    let sidecar = provenance_path(out);
    if sidecar == out {
        return Err(fail(format!("{}: output would overwrite its own .prov sidecar", out.display())));
    }
    write(out, text)?;
    write(&sidecar, &provenance.to_text())
}

fn emit_network(out: &Path, r: &NetworkReduction) -> Result<(), Failure> {
    let mut text = String::new();
    let _ = writeln!(text, "# query {}", r.query.describe(&r.network));
    for (name, count) in &r.counts {
        let _ = writeln!(text, "# count {name} {count}");
    }
    if let Some(t) = &r.witness_ordering {
        let names: Vec<&str> = t.order().iter().map(|&v| r.network.variable(v).name.as_str()).collect();
        let _ = writeln!(text, "# witness {}", names.join(" "));
    }
    text.push_str(&write_network(&r.network));
    write_with_provenance(out, &text, &r.provenance)?;
    println!("{} variables", r.network.len());
    println!("query {}", r.query.describe(&r.network));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    reduction: Reduction,
    input: &Path,
    out: &Path,
    q: &QueryArgs,
    k: Option<usize>,
    input_word: &str,
    space_time: Option<(usize, usize)>,
    guard: usize,
    exec: Execution,
) -> Outcome {
    let need_k = || k.ok_or_else(|| fail("this reduction needs --k"));
    match reduction {
        Reduction::CliqueToInference => {
            let graph = load(input, parse_graph)?;
            let r = clique_to_positive_inference(&CliqueInstance::new(graph, need_k()?))?;
            emit_network(out, &r)?;
        }
        Reduction::CmcToInference => {
            let inst = load(input, parse_cmc)?;
            emit_network(out, &cmc_to_positive_inference(&inst)?)?;
        }
        Reduction::NtmToNet => {
            let m = load_machine(input)?;
            let word = m.parse_input(input_word)?;
            emit_network(out, &ntm_to_bayesnet(&m, &word, need_k()?)?)?;
        }
        Reduction::TstmToNet => {
            let (s, t) = space_time.ok_or_else(|| fail("tstm-to-net needs --s and --t"))?;
            let m = load_machine(input)?;
            emit_network(out, &tstm_to_bayesnet(&m, s, t)?)?;
        }
        Reduction::InferenceToClique => {
            let net = load_network(input)?;
            let (h, e) = query(&net, q)?;
            let r = positive_inference_to_clique(&net, &h, &e)?;
            let mut text = format!("# k {}\n", r.instance.k);
            text.push_str(&write_graph(&r.instance.graph));
            write_with_provenance(out, &text, &r.provenance)?;
            println!("{} vertices, k = {}", r.instance.graph.vertex_count(), r.instance.k);
        }
        Reduction::InferenceToCmc => {
            let net = load_network(input)?;
            let (h, e) = query(&net, q)?;
            let dag = net.dag()?;
            // an optimal ordering when the subset DP fits, else file order
            let order = match tvsn_exact_with(&dag, guard, exec) {
                Ok(cert) => TopologicalOrdering::new(&dag, cert.ordering)?,
                Err(Error::ResourceLimit(_)) => dag.default_ordering(),
                Err(e) => return Err(e.into()),
            };
            let r = positive_inference_to_cmc(&net, &h, &e, &order)?;
            write_with_provenance(out, &write_cmc(&r.instance), &r.provenance)?;
            println!(
                "{} parts, {} colours, {} vertices",
                r.instance.part_count(),
                r.instance.colour_count(),
                r.instance.graph().vertex_count()
            );
        }
    }
    println!("wrote {} and {}", out.display(), provenance_path(out).display());
    Ok(true)
}

fn verify(suite: &str, seed: u64, exec: Execution) -> Outcome {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    println!("{:<22} {:>8} {:>9}  result", "suite", "checks", "failures");
    let mut all_passed = true;
    for name in names {
        let report = run_suite(name, seed, exec)?;
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!("{:<22} {:>8} {:>9}  {status}", report.name, report.cases, report.failures.len());
        for note in &report.notes {
            println!("    {note}");
        }
        for f in &report.failures {
            println!("    failure: {f}");
        }
        all_passed &= report.passed();
    }
    Ok(all_passed)
}
