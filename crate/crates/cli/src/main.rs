use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use inertia_core::constructions::{self, StandardGraph};
use inertia_core::graph6;
use inertia_core::harness::suites::GammaFamily;
use inertia_core::harness::{self, alpha_exact, CheckRecord, NgOptions, Report, Timing};
use inertia_core::scaling::{sinkhorn, SinkhornOptions};
use inertia_core::spectra::{inertia_exact, inertia_float, EXACT_MAX_DIM};
use inertia_core::theta::{linz_theta, theta_bracket, LinzResult, ThetaBracket, ThetaError, THETA_MAX_N};
use inertia_core::witnesses::{
    evaluate_expander_bound, orth_rep_lower_bound, proof_diagnostics, witness_search, SearchOptions, Strategy,
};
use inertia_core::{Graph, Matrix, Rational};

#[derive(Parser)]
#[command(name = "inertia-lab", version, about = "Inertia bounds, theta and verification suites for graphs")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "INERTIA_LAB_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and print it as graph6.
    Construct {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Unweighted inertia, witness search and lower bounds.
    Inertia(InertiaArgs),
    /// Lovász theta: numeric bracket or exact Johnson value.
    Theta(ThetaArgs),
    /// Rescale a weighted adjacency matrix to be 1-regular.
    Scale(ScaleArgs),
    /// Proof diagnostics for the expander bound.
    Diagnose {
        #[command(subcommand)]
        what: Diagnose,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Family {
    Johnson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Intersection sizes that do not give an edge (repeatable).
        #[arg(long, required = true)]
        l: Vec<usize>,
    },
    Polarity {
        #[arg(long)]
        q: u64,
    },
    PolarityCore {
        #[arg(long)]
        q: u64,
    },
    Incidence {
        #[arg(long)]
        q: u64,
    },
    Paley {
        #[arg(long)]
        q: u64,
    },
    Std {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args)]
struct InertiaArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Use the exact characteristic-polynomial kernel.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    witness_search: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    rounds: usize,
    /// Spanning expander of the complement (graph6); defaults to the complement itself.
    #[arg(long)]
    gamma: Option<PathBuf>,
    /// Orthogonal representation: JSON list of vectors, one per vertex.
    #[arg(long)]
    orth_rep: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ThetaArgs {
    #[command(subcommand)]
    johnson: Option<ThetaJohnson>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Bracket)]
    method: Method,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bracket,
    Upper,
    Lower,
}

#[derive(Subcommand)]
enum ThetaJohnson {
    Johnson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Exact rational value instead of the numeric bracket.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Matrix JSON `{dim, lower_triangle_row_major}`; defaults to the adjacency matrix.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Diagnose {
    Expander {
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum Suite {
    Ng {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        all_graphs: bool,
        /// Take graphs from a graph6 file instead of enumerating.
        #[arg(long)]
        from_g6: Option<PathBuf>,
    },
    Johnson {
        #[arg(long)]
        k: usize,
    },
    Expander {
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 3)]
        q: u64,
    },
    Srg {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timing (makes the report non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failure that should exit with status 1 rather than 2.
#[derive(Debug)]
struct Violated;

impl std::fmt::Display for Violated {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("assertions failed")
    }
}

impl std::error::Error for Violated {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Violated>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_graphs(path: &Path) -> Result<Vec<Graph>> {
    read_input(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| graph6::decode_str(l).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

fn read_graph(path: &Path) -> Result<Graph> {
    read_graphs(path)?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("{} contains no graph", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(value: &impl Serialize) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"), None)
}

fn run(cli: Cli) -> Result<bool> {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().ok();

    match cli.command {
        Command::Construct { family, out } => {
            let g = construct(family)?;
            emit(&(graph6::encode_string(&g) + "\n"), out.as_deref())?;
            Ok(true)
        }
        Command::Inertia(args) => inertia(args),
        Command::Theta(args) => theta(args),
        Command::Scale(args) => scale(args),
        Command::Diagnose {
            what: Diagnose::Expander { gamma, q },
        } => diagnose(&gamma, q),
        Command::Verify { suite, output } => verify(suite, &output, jobs),
    }
}

fn construct(family: Family) -> Result<Graph> {
    Ok(match family {
        Family::Johnson { n, k, l } => constructions::johnson(n, k, &l)?,
        Family::Polarity { q } => constructions::polarity(q)?.graph,
        Family::PolarityCore { q } => constructions::polarity_core(q)?,
        Family::Incidence { q } => constructions::incidence(q)?,
        Family::Paley { q } => constructions::paley(q)?,
        Family::Std { name, n } => {
            let name: StandardGraph = name.parse()?;
            let n = match (n, name) {
                (Some(n), _) => n,
                (None, StandardGraph::Petersen) => 10,
                (None, StandardGraph::Heawood) => 14,
                (None, _) => bail!("--n is required for {name}"),
            };
            constructions::standard(name, n)?
        }
    })
}

fn inertia(args: InertiaArgs) -> Result<bool> {
    let g = read_graph(&args.input)?;
    let unweighted = if args.exact {
        if g.n() > EXACT_MAX_DIM {
            bail!("exact inertia supports at most {EXACT_MAX_DIM} vertices");
        }
        inertia_exact(&g.adjacency())?
    } else {
        inertia_float(&g.adjacency::<f64>())?
    };
    let best_witness = if args.witness_search {
        let c = witness_search(
            &g,
            &SearchOptions {
                strategies: Strategy::ALL.to_vec(),
                seed: args.seed,
                rounds: args.rounds,
            },
        )?;
        json!({ "strategy": c.strategy, "upper_bound": c.upper_bound, "margin": c.margin })
    } else {
        Value::Null
    };
    let alpha = (g.n() <= harness::ALPHA_MAX_N).then(|| alpha_exact(&g)).transpose()?;
    let gamma = match &args.gamma {
        Some(p) => Some(read_graph(p)?),
        None => (g.n() >= 2).then(|| g.complement()),
    };
    let expander = match gamma {
        Some(gamma) => {
            let r = evaluate_expander_bound(&g, &gamma)?;
            if r.hypothesis_ok {
                json!(r.bound)
            } else if args.gamma.is_some() {
                bail!("expander hypothesis failed: {}", r.violations[0]);
            } else {
                Value::Null
            }
        }
        None => Value::Null,
    };
    let orth_rep = match &args.orth_rep {
        Some(p) => {
            let vectors: Vec<Vec<f64>> = serde_json::from_str(&read_input(p)?)?;
            json!(orth_rep_lower_bound(&g, &vectors)?)
        }
        None => Value::Null,
    };
    emit_json(&json!({
        "n": g.n(),
        "unweighted_inertia": unweighted,
        "best_witness": best_witness,
        "lower_bounds": { "alpha": alpha, "expander": expander, "orth_rep": orth_rep },
    }))?;
    Ok(true)
}

fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn theta_json(exact: Option<&LinzResult>, bracket: Option<&ThetaBracket>, method: Method) -> Value {
    let range = bracket.map(|b| match method {
        Method::Bracket => json!([b.lower, b.upper]),
        Method::Upper => json!([Value::Null, b.upper]),
        Method::Lower => json!([b.lower, Value::Null]),
    });
    json!({
        "theta_exact": exact.map(|r| fmt_rational(&r.theta)),
        "bracket": range,
        "binding_u": exact.map(|r| r.binding_u),
        "per_u": exact.map(|r| r.per_u.iter().map(|row| json!({
            "u": row.u,
            "s_u": row.s_u.to_string(),
            "constraint_bound": row.constraint_bound.as_ref().map(fmt_rational),
        })).collect::<Vec<_>>()),
        "prop32_value": exact.map(|r| fmt_rational(&r.prop32_value)),
        "warning": exact.and_then(|r| r.warning.clone()),
        "iterations": bracket.map(|b| json!({ "lower": b.iters_lower, "upper": b.iters_upper })),
        "feasibility_residuals": bracket.map(|b| b.feasibility_residuals.clone()),
    })
}

fn theta(args: ThetaArgs) -> Result<bool> {
    match args.johnson {
        Some(ThetaJohnson::Johnson {
            n,
            k,
            l,
            exact,
            iters,
            tol,
        }) => {
            if exact {
                let r = linz_theta(n, k, l)?;
                emit_json(&theta_json(Some(&r), None, Method::Bracket))?;
            } else {
                let g = constructions::johnson(n, k, &[l])?;
                if g.n() > THETA_MAX_N {
                    bail!("G({n},{k},{{{l}}}) has {} vertices; use --exact", g.n());
                }
                let b = theta_bracket(&g, iters, tol).map_err(theta_error)?;
                emit_json(&theta_json(None, Some(&b), Method::Bracket))?;
            }
        }
        None => {
            let input = args.input.ok_or_else(|| anyhow!("--in is required"))?;
            let g = read_graph(&input)?;
            let b = theta_bracket(&g, args.iters, args.tol).map_err(theta_error)?;
            emit_json(&theta_json(None, Some(&b), args.method))?;
        }
    }
    Ok(true)
}

fn theta_error(e: ThetaError) -> anyhow::Error {
    match e {
        ThetaError::Inverted { .. } => anyhow!(Violated).context(e),
        other => anyhow!(other),
    }
}

fn scale(args: ScaleArgs) -> Result<bool> {
    let g = read_graph(&args.input)?;
    let a: Matrix = match &args.weights {
        Some(p) => serde_json::from_str(&read_input(p)?).context("parsing weights")?,
        None => g.adjacency(),
    };
    let before = inertia_float(&a)?;
    let r = sinkhorn(
        &a,
        &g,
        &SinkhornOptions {
            tol: args.tol,
            max_iter: args.max_iter,
        },
    )?;
    let after = inertia_float(&r.b)?;
    emit_json(&json!({
        "row_norms": r.b.row_norms(),
        "iterations": r.iterations,
        "residual": r.residual,
        "inertia_before": before,
        "inertia_after": after,
        "matrix": r.b,
    }))?;
    Ok(before.counts() == after.counts())
}

fn diagnose(gamma: &str, q: u64) -> Result<bool> {
    let family: GammaFamily = gamma.parse()?;
    let gamma_graph = match family {
        GammaFamily::Heawood => constructions::incidence(2)?,
        GammaFamily::IncidenceQ => constructions::incidence(q)?,
        GammaFamily::PolarityCoreQ => bail!("diagnostics need a regular Γ; polarity_core is not regular"),
    };
    let g = gamma_graph.complement();
    let bound = inertia_core::witnesses::expander_lower_bound(&g, &gamma_graph)?;
    let scaled = sinkhorn(&g.adjacency::<f64>(), &g, &SinkhornOptions::default())?;
    let report = proof_diagnostics(&scaled.b, &gamma_graph)?;
    emit_json(&json!({ "expander": bound, "diagnostics": report, "all_ok": report.all_ok() }))?;
    Ok(report.all_ok())
}

fn write_report<R: Serialize>(mut report: Report<R>, output: &OutputArgs, started: Instant) -> Result<bool> {
    if output.timing {
        report.timing = Some(Timing {
            elapsed_ms: started.elapsed().as_millis() as u64,
        });
    }
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &report.records {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, output.out.as_deref())?;
    for v in &report.violations {
        eprintln!("violation [{}] record {}: {}", v.check, v.record, v.detail);
    }
    Ok(report.passed())
}

fn verify(suite: Suite, output: &OutputArgs, jobs: usize) -> Result<bool> {
    let started = Instant::now();
    let wrap = |e: harness::HarnessError| match e {
        harness::HarnessError::Integrity(_) => anyhow!(Violated).context(e),
        other => anyhow!(other),
    };
    match suite {
        Suite::Ng {
            max_n,
            all_graphs,
            from_g6,
        } => {
            let source = from_g6.as_deref().map(read_graphs).transpose()?;
            let report = harness::verify_ng(&NgOptions {
                max_n,
                jobs,
                all_graphs,
                source,
            })
            .map_err(wrap)?;
            write_report(report, output, started)
        }
        Suite::Johnson { k } => write_report::<CheckRecord>(harness::verify_johnson(k).map_err(wrap)?, output, started),
        Suite::Expander { gamma, q } => {
            let report = harness::verify_expander(gamma.parse()?, q).map_err(wrap)?;
            write_report(report, output, started)
        }
        Suite::Srg { q } => write_report(harness::verify_srg(q).map_err(wrap)?, output, started),
    }
}
