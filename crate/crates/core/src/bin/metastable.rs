use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metastable_core::hierarchy::{bk_chain, family_tree, verify_a_hierarchy, verify_bk_hierarchy};
use metastable_core::landscape::continuation::continue_to_gamma;
use metastable_core::landscape::graph::{build_transition_graph, GraphMode, GraphNode};
use metastable_core::landscape::points::StationaryPoint;
use metastable_core::rates::{rate_table, spectral_gap};
use metastable_core::simulate::classify::Classifier;
use metastable_core::simulate::csv::{event_log_csv, labelled_trajectory_csv, trace_csv, trajectory_csv};
use metastable_core::simulate::kmc::{alternating_state, run_jump, RateModel};
use metastable_core::simulate::sde::run_sde;
use metastable_core::verify::run_suite;
use metastable_core::{Error, LatticeConfig, Params};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "metastable", version, about = "Landscape, rates and simulation for the conserved Allen-Cahn ring")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Ring size; even and not a multiple of 3.
    #[arg(long, global = true, default_value_t = 8)]
    n: usize,
    #[arg(long, global = true, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, global = true, env = "METASTABLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent. Nothing is written on failure.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for replica parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary points and transition graph.
    Landscape {
        #[arg(long, conflicts_with = "orbits")]
        full: bool,
        #[arg(long)]
        orbits: bool,
    },
    /// Metastable hierarchies of the B_k families and the B_0 interface states.
    Hierarchy,
    /// Eyring-Kramers times for B_k -> B_(k-1).
    Rates,
    /// Spectral gap of the two-orbit chain.
    Gap {
        /// Override the y-orbit exit rate; the gap does not depend on it.
        #[arg(long)]
        qy: Option<f64>,
    },
    /// Stochastic trajectories.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Runs the invariant suite.
    Verify,
}

#[derive(Subcommand)]
enum Simulate {
    /// Euler-Maruyama on the constrained SDE from a B_0 point.
    Sde {
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0.005)]
        dt: f64,
        #[arg(long, default_value_t = 10)]
        stride: u64,
        /// Emit `t,p,label` instead of coordinates.
        #[arg(long)]
        labelled: bool,
    },
    /// Interface jump chain from the alternating state.
    Jump {
        #[arg(long, default_value_t = 10_000)]
        events: usize,
        /// Emit the per-event log instead of the `t,p,label` trace.
        #[arg(long)]
        event_log: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input() || matches!(e, Error::Io(_)) { EXIT_INPUT } else { EXIT_NUMERIC };
        Failure { code, message: e.to_string() }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type Out = Result<String, Failure>;

fn pick(requested: Option<Format>, allowed: &[Format]) -> Result<Format, Failure> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(_) => Err(input("--format not supported by this command")),
    }
}

fn to_json(v: Value) -> Out {
    serde_json::to_string_pretty(&v).map(|s| s + "\n").map_err(|e| Failure::from(Error::from(e)))
}

fn point_json(node: &GraphNode, p: &StationaryPoint) -> Value {
    json!({
        "key": node.key,
        "family": p.family.to_string(),
        "morse_index": p.morse_index,
        "multiplicity": node.multiplicity.to_string(),
        "potential": p.potential,
        "lambda": p.lambda,
        "residual": p.drift_residual(),
        "coords": p.values(),
    })
}

fn landscape(g: &Global, full: bool, orbits: bool) -> Out {
    let fmt = pick(g.format, &[Format::Json, Format::Dot])?;
    if full && orbits {
        return Err(input("--full and --orbits are exclusive"));
    }
    let mode = if full { GraphMode::Full } else { GraphMode::OrbitQuotient };
    let graph = build_transition_graph(g.n, mode)?;
    if fmt == Format::Dot {
        return Ok(graph.to_dot());
    }
    let cont = |p: &StationaryPoint| if g.gamma == 0.0 { Ok(p.clone()) } else { continue_to_gamma(p, g.gamma) };
    let mut minima = Vec::new();
    for node in &graph.nodes {
        minima.push(point_json(node, &cont(&node.point)?));
    }
    let mut saddles = Vec::new();
    for e in &graph.edges {
        let mut v = point_json(&e.saddle, &cont(&e.saddle.point)?);
        v["lower"] = json!(e.lower);
        v["upper"] = json!(e.upper);
        saddles.push(v);
    }
    let mut families: Vec<(String, usize, u128)> = Vec::new();
    for node in graph.nodes.iter().chain(graph.edges.iter().map(|e| &e.saddle)) {
        let f = node.family.to_string();
        match families.iter_mut().find(|x| x.0 == f) {
            Some(x) => {
                x.1 += 1;
                x.2 += node.multiplicity;
            }
            None => families.push((f, 1, node.multiplicity)),
        }
    }
    let families: Vec<Value> = families
        .into_iter()
        .map(|(f, c, m)| json!({"family": f, "classes": c, "points": m.to_string()}))
        .collect();
    let mode_name = if full { "full" } else { "orbits" };
    let degrees: Vec<usize> = (0..graph.nodes.len()).map(|i| graph.degree(i)).collect();
    let max_residual = minima.iter().chain(&saddles).filter_map(|p| p["residual"].as_f64()).fold(0.0, f64::max);
    to_json(json!({
        "command": "landscape",
        "n": g.n,
        "gamma": g.gamma,
        "mode": mode_name,
        "minima": minima,
        "saddles": saddles,
        "degrees": degrees,
        "families": families,
        "max_residual": max_residual,
    }))
}

fn hierarchy(g: &Global) -> Out {
    let fmt = pick(g.format, &[Format::Json, Format::Dot])?;
    let tree = family_tree(g.n)?;
    if fmt == Format::Dot {
        return Ok(tree.to_dot());
    }
    let bk = verify_bk_hierarchy(g.n, g.gamma)?;
    let a = if g.n <= 24 { Some(verify_a_hierarchy(g.n)?) } else { None };
    let chain = bk_chain(g.n)?;
    to_json(json!({
        "command": "hierarchy",
        "n": g.n,
        "gamma": g.gamma,
        "bk": bk,
        "a": a,
        "chain": chain,
        "tree_order": tree.metastable_order(),
    }))
}

fn rates(g: &Global) -> Out {
    let fmt = pick(g.format, &[Format::Json, Format::Csv])?;
    let table = rate_table(g.n, g.gamma, g.eps)?;
    if fmt == Format::Csv {
        let mut s = String::from("transition,barrier,prefactor,symmetry_factor,time,rate\n");
        for r in &table {
            s += &format!("{},{},{},{},{},{}\n", r.transition, r.barrier, r.prefactor, r.symmetry_factor, r.time, r.rate);
        }
        return Ok(s);
    }
    to_json(json!({"command": "rates", "n": g.n, "gamma": g.gamma, "eps": g.eps, "rates": table}))
}

fn gap(g: &Global, qy: Option<f64>) -> Out {
    pick(g.format, &[Format::Json])?;
    if let Some(q) = qy {
        if !(q > 0.0 && q.is_finite()) {
            return Err(input("--qy must be finite and > 0"));
        }
    }
    let r = spectral_gap(g.n, g.gamma, g.eps, qy)?;
    to_json(json!({"command": "gap", "report": r}))
}

fn b0_start(g: &Global) -> Result<LatticeConfig, Failure> {
    let m = g.n / 2;
    let labels = (0..g.n).map(|i| if i < m { 1 } else { 2 }).collect();
    let mut p = StationaryPoint::from_labels(labels, 1)?;
    if g.gamma != 0.0 {
        p = continue_to_gamma(&p, g.gamma)?;
    }
    Ok(p.coords)
}

fn simulate(g: &Global, s: &Simulate) -> Out {
    let fmt = pick(g.format, &[Format::Csv, Format::Json])?;
    match *s {
        Simulate::Sde { steps, dt, stride, labelled } => {
            let params = Params::new(g.n, g.gamma, g.eps)?;
            params.require_positive_eps()?;
            let run = run_sde(&params, &b0_start(g)?, dt, steps, g.seed, stride)?;
            if fmt == Format::Json {
                return to_json(json!({"command": "simulate-sde", "run": run}));
            }
            if labelled {
                Ok(labelled_trajectory_csv(&run, &Classifier::new(g.n, g.gamma)?))
            } else {
                Ok(trajectory_csv(&run))
            }
        }
        Simulate::Jump { events, event_log } => {
            let model = RateModel::new(g.n, g.gamma, g.eps)?;
            let run = run_jump(&alternating_state(g.n)?, &model, events, g.seed)?;
            if fmt == Format::Json {
                return to_json(json!({"command": "simulate-jump", "run": run}));
            }
            if event_log {
                Ok(event_log_csv(&run.events))
            } else {
                Ok(trace_csv(&run)?)
            }
        }
    }
}

fn verify(g: &Global) -> Result<(String, bool), Failure> {
    let checks = run_suite();
    let ok = checks.iter().all(|c| c.passed);
    let text = match g.format {
        Some(Format::Json) => to_json(json!({"command": "verify", "passed": ok, "checks": checks}))?,
        None => {
            let mut s = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                s += &format!("{tag} {:<26} {:>7.2}s  {}\n", c.name, c.seconds, c.detail);
            }
            s += &format!("{} of {} checks passed\n", checks.iter().filter(|c| c.passed).count(), checks.len());
            s
        }
        Some(_) => return Err(input("--format not supported by this command")),
    };
    Ok((text, ok))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            // Write beside the target and rename so a failed write leaves nothing behind.
            let mut tmp = path.clone().into_os_string();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            std::fs::write(&tmp, text)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    Failure::from(Error::from(e))
                })
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(input("--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| input(e.to_string()))?;
    }
    if !g.gamma.is_finite() || g.gamma < 0.0 {
        return Err(input("--gamma must be finite and >= 0"));
    }
    let (text, ok) = match &cli.command {
        Command::Landscape { full, orbits } => (landscape(g, *full, *orbits)?, true),
        Command::Hierarchy => (hierarchy(g)?, true),
        Command::Rates => (rates(g)?, true),
        Command::Gap { qy } => (gap(g, *qy)?, true),
        Command::Simulate(s) => (simulate(g, s)?, true),
        Command::Verify => verify(g)?,
    };
    emit(&g.out, &text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(f) => {
            eprintln!("metastable: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
