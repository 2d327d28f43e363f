use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcheeger_core::io::{format_graph, format_vector, parse_graph, parse_vector};
use gcheeger_core::oracles::{self, CutValue, OracleLimit};
use gcheeger_core::sweep::generalized_sweep;
use gcheeger_core::verify::GraphDescriptor;
use gcheeger_core::{
    generate, inverse_power_minimize, EigenConfig, Family, Graph, PencilEigenResult, SolveConfig,
    VerificationReport, Verifier, Weights,
};
use serde::Serialize;

const EXIT_INPUT: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gcheeger",
    version,
    about = "Generalized conductance cuts of weighted graph pairs"
)]
struct Cli {
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Output file (graph for gen, eigenvector for eig, report otherwise)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Edge weights; defaults to unit weights except for gnp
        #[arg(long, global = true, value_enum)]
        weights: Option<WeightArg>,
    },
    /// Exact conductance-type values by exhaustive enumeration
    Phi {
        graph: PathBuf,
        /// Generalized conductance φ(G, H) against this graph
        #[arg(long, conflicts_with_all = ["iso", "st"])]
        against: Option<PathBuf>,
        /// Isoperimetric number h(G)
        #[arg(long, conflicts_with = "st")]
        iso: bool,
        /// Minimum s-t cut ratio μ_{s,t}
        #[arg(long, num_args = 2, value_names = ["S", "T"])]
        st: Option<Vec<usize>>,
        #[command(flatten)]
        guard: GuardArgs,
    },
    /// Smallest nontrivial eigenvalue of L_G x = λ L_H x by inverse power iteration
    Eig {
        graph: PathBuf,
        demand: PathBuf,
        #[command(flatten)]
        eig: EigArgs,
    },
    /// Best sweep cut cap_G / cap_H of a vector
    Sweep {
        graph: PathBuf,
        demand: PathBuf,
        /// Vector file, one entry per line
        #[arg(long, required_unless_present = "from_eig", conflicts_with = "from_eig")]
        vector: Option<PathBuf>,
        /// Sweep the computed eigenvector
        #[arg(long)]
        from_eig: bool,
        #[command(flatten)]
        eig: EigArgs,
    },
    /// Check the inequalities on a graph pair; H defaults to the demand graph of G
    Verify {
        graph: PathBuf,
        demand: Option<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = CheckKind::all())]
        checks: Vec<CheckKind>,
        /// Random vectors per sampled check
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        eig: EigArgs,
        #[command(flatten)]
        guard: GuardArgs,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    Gnp {
        n: usize,
        p: f64,
    },
    /// Demand graph of an existing graph file
    DemandOf {
        file: PathBuf,
    },
    /// Complete graph with every weight 1/n
    KnIdentity {
        n: usize,
    },
    /// Single unit edge between s and t
    StEdge {
        n: usize,
        s: usize,
        t: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Unit,
    Uniform,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum CheckKind {
    Theorem,
    Mihail,
    Reductions,
    Sweep,
    Eigensolver,
}

impl CheckKind {
    fn all() -> Vec<CheckKind> {
        vec![
            CheckKind::Theorem,
            CheckKind::Mihail,
            CheckKind::Reductions,
            CheckKind::Sweep,
            CheckKind::Eigensolver,
        ]
    }
}

impl std::fmt::Display for CheckKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Args)]
struct EigArgs {
    /// Relative accuracy ε
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Failure probability p
    #[arg(long, default_value_t = 0.01)]
    prob: f64,
    /// Round cap per trial
    #[arg(long)]
    max_rounds: Option<usize>,
}

impl EigArgs {
    fn config(&self, seed: u64) -> EigenConfig {
        EigenConfig {
            epsilon: self.eps,
            failure_prob: self.prob,
            max_rounds: self.max_rounds,
            seed,
            ..EigenConfig::default()
        }
    }
}

#[derive(Args)]
struct GuardArgs {
    /// Largest vertex count for exhaustive enumeration
    #[arg(long, default_value_t = oracles::DEFAULT_MAX_N)]
    max_n: usize,
}

impl GuardArgs {
    fn limit(&self) -> Result<OracleLimit, Failure> {
        Ok(OracleLimit::new(self.max_n)?)
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<gcheeger_core::Error> for Failure {
    fn from(e: gcheeger_core::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

struct Output {
    text: String,
    pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn descriptor(path: &Path, g: &Graph) -> GraphDescriptor {
    GraphDescriptor {
        file: Some(path.display().to_string()),
        ..GraphDescriptor::of(g)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_gen(cli: &Cli, family: &GenFamily, weights: Option<WeightArg>) -> Result<Output, Failure> {
    let structured = |f: Family| {
        let w = match weights {
            Some(WeightArg::Unit) => Weights::Unit,
            Some(WeightArg::Uniform) => Weights::Uniform,
            None => f.default_weights(),
        };
        generate(f, w, cli.seed)
    };
    let g = match *family {
        GenFamily::Path { n } => structured(Family::Path { n })?,
        GenFamily::Cycle { n } => structured(Family::Cycle { n })?,
        GenFamily::Complete { n } => structured(Family::Complete { n })?,
        GenFamily::Grid { rows, cols } => structured(Family::Grid { rows, cols })?,
        GenFamily::Gnp { n, p } => structured(Family::Gnp { n, p })?,
        GenFamily::DemandOf { ref file } => read_graph(file)?.demand_graph()?,
        GenFamily::KnIdentity { n } => Graph::kn_identity(n)?,
        GenFamily::StEdge { n, s, t } => Graph::st_edge(n, s, t)?,
    };
    let text = format_graph(&g);
    match &cli.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

#[derive(Serialize)]
struct CutJson {
    value: f64,
    cut: Vec<usize>,
}

fn cut_report(cli: &Cli, kind: &str, r: &CutValue) -> String {
    let cut = r.cut.vertices();
    if cli.json {
        to_json(&CutJson { value: r.value, cut })
    } else {
        format!("{kind} {}\ncut {}\n", r.value, join(&cut))
    }
}

fn cmd_phi(
    cli: &Cli,
    graph: &Path,
    against: Option<&Path>,
    iso: bool,
    st: Option<&[usize]>,
    guard: &GuardArgs,
) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let limit = guard.limit()?;
    let (kind, r) = if let Some(h) = against {
        (
            "phi_gh",
            oracles::generalized_conductance_exact(&g, &read_graph(h)?, &limit)?,
        )
    } else if iso {
        ("isoperimetric", oracles::isoperimetric_exact(&g, &limit)?)
    } else if let Some(&[s, t]) = st {
        ("mu_st", oracles::min_st_cut_exact(&g, s, t, &limit)?)
    } else {
        ("phi", oracles::conductance_exact(&g, &limit)?)
    };
    Ok(Output::ok(cut_report(cli, kind, &r)))
}

fn solve(g: &Graph, h: &Graph, cfg: &EigenConfig) -> Result<PencilEigenResult, Failure> {
    Ok(inverse_power_minimize(g, h, cfg, &SolveConfig::default())?)
}

#[derive(Serialize)]
struct EigJson<'a> {
    command: &'static str,
    seed: u64,
    graphs: Vec<GraphDescriptor>,
    epsilon: f64,
    failure_prob: f64,
    lambda: f64,
    rounds: usize,
    restarts: usize,
    best_trial: usize,
    resamples: usize,
    residual: f64,
    solve_iterations: usize,
    trace: &'a [f64],
}

fn cmd_eig(cli: &Cli, graph: &Path, demand: &Path, args: &EigArgs) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let h = read_graph(demand)?;
    let cfg = args.config(cli.seed);
    let r = solve(&g, &h, &cfg)?;
    if let Some(path) = &cli.out {
        write_file(path, &format_vector(&r.x))?;
    }
    let text = if cli.json {
        to_json(&EigJson {
            command: "eig",
            seed: cli.seed,
            graphs: vec![descriptor(graph, &g), descriptor(demand, &h)],
            epsilon: cfg.epsilon,
            failure_prob: cfg.failure_prob,
            lambda: r.lambda_estimate,
            rounds: r.rounds_used,
            restarts: r.restarts_used,
            best_trial: r.best_trial,
            resamples: r.resamples,
            residual: r.last_solve.final_rel_residual,
            solve_iterations: r.last_solve.iterations,
            trace: &r.trace,
        })
    } else {
        format!(
            "lambda {}\nrounds {}\nrestarts {}\nresidual {}\n",
            r.lambda_estimate, r.rounds_used, r.restarts_used, r.last_solve.final_rel_residual
        )
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct SweepJson {
    cut: Vec<usize>,
    cap_g: f64,
    cap_h: f64,
    ratio: f64,
    prefix: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn cmd_sweep(
    cli: &Cli,
    graph: &Path,
    demand: &Path,
    vector: Option<&Path>,
    args: &EigArgs,
) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let h = read_graph(demand)?;
    let (x, lambda) = match vector {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            (parse_vector(&text)?, None)
        }
        None => {
            let r = solve(&g, &h, &args.config(cli.seed))?;
            (r.x, Some(r.lambda_estimate))
        }
    };
    let s = generalized_sweep(&g, &h, &x)?;
    let cut = s.best_cut().vertices();
    let text = if cli.json {
        to_json(&SweepJson {
            cut,
            cap_g: s.best_cap_g(),
            cap_h: s.best_denominator(),
            ratio: s.best_value,
            prefix: s.best_index,
            lambda,
            seed: lambda.map(|_| cli.seed),
        })
    } else {
        let mut t = format!(
            "cut {}\ncap_g {}\ncap_h {}\nratio {}\n",
            join(&cut),
            s.best_cap_g(),
            s.best_denominator(),
            s.best_value
        );
        if let Some(l) = lambda {
            let _ = writeln!(t, "lambda {l}");
        }
        t
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    command: &'static str,
    seed: u64,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn cmd_verify(
    cli: &Cli,
    graph: &Path,
    demand: Option<&Path>,
    checks: &[CheckKind],
    samples: usize,
    args: &EigArgs,
    guard: &GuardArgs,
) -> Result<Output, Failure> {
    let g = read_graph(graph)?;
    let (h, h_desc) = match demand {
        Some(p) => {
            let h = read_graph(p)?;
            let d = descriptor(p, &h);
            (h, d)
        }
        None => {
            let h = g.demand_graph()?;
            let d = GraphDescriptor {
                family: Some("demand-of".into()),
                ..GraphDescriptor::of(&h)
            };
            (h, d)
        }
    };
    let verifier = Verifier {
        limit: guard.limit()?,
        ..Verifier::default()
    };
    let mut kinds = checks.to_vec();
    kinds.sort();
    kinds.dedup();
    let cfg = args.config(cli.seed);
    let mut results = Vec::new();
    let mut eigen: Option<PencilEigenResult> = None;
    for kind in &kinds {
        match kind {
            CheckKind::Theorem => {
                results.extend(verifier.check_generalized_cheeger(&g, &h, samples, cli.seed)?)
            }
            CheckKind::Mihail => results.extend(verifier.check_mihail(&g, samples, cli.seed)?),
            CheckKind::Reductions => results.extend(verifier.check_reductions(&g)?),
            CheckKind::Eigensolver => {
                let (c, r) = verifier.check_eigensolver(&g, &h, &cfg, &SolveConfig::default())?;
                results.extend(c);
                eigen = Some(r);
            }
            CheckKind::Sweep => {}
        }
    }
    if kinds.contains(&CheckKind::Sweep) {
        let r = match eigen {
            Some(r) => r,
            None => solve(&g, &h, &cfg)?,
        };
        let mut c = verifier.check_sweep_guarantee(&g, &h, &r.x)?;
        c.details
            .insert("lambda_estimate".into(), r.lambda_estimate.into());
        c.details.insert("seed".into(), cli.seed.into());
        results.push(c);
    }
    let report = VerificationReport::new(vec![descriptor(graph, &g), h_desc], results);
    let json_text = to_json(&VerifyJson {
        command: "verify",
        seed: cli.seed,
        report: &report,
    });
    if let Some(path) = &cli.out {
        write_file(path, &json_text)?;
    }
    let text = if cli.json {
        json_text
    } else {
        let mut t = String::new();
        for c in &report.checks {
            let _ = writeln!(
                t,
                "{} {} {} {} {} slack {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.lhs,
                serde_json::to_value(c.relation)
                    .expect("relation serializes")
                    .as_str()
                    .unwrap_or("?"),
                c.rhs,
                c.slack
            );
        }
        let checked = kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(
            t,
            "{} checks [{checked}], {} failed",
            report.checks.len(),
            report.failures().count()
        );
        t
    };
    Ok(Output {
        text,
        pass: report.overall_pass,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Gen { family, weights } => cmd_gen(cli, family, *weights),
        Command::Phi {
            graph,
            against,
            iso,
            st,
            guard,
        } => cmd_phi(cli, graph, against.as_deref(), *iso, st.as_deref(), guard),
        Command::Eig { graph, demand, eig } => cmd_eig(cli, graph, demand, eig),
        Command::Sweep {
            graph,
            demand,
            vector,
            eig,
            ..
        } => cmd_sweep(cli, graph, demand, vector.as_deref(), eig),
        Command::Verify {
            graph,
            demand,
            checks,
            samples,
            eig,
            guard,
        } => cmd_verify(cli, graph, demand.as_deref(), checks, *samples, eig, guard),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
