use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use odg_core::build::{self, Admissibility, ConstructionParams, LengthMode};
use odg_core::chroma::{
    self, chi_exact, decode, encode, forced_distinct, validate, ChromaError, Coloring, EncodeOptions, ExternalSolver,
    InternalSolver, PairOutcome, SimpleGraph, SolveOutcome, Solver, DEFAULT_TIMEOUT,
};
use odg_core::field::parse_rational;
use odg_core::geom::{OddGraph, Rotation};
use odg_core::io::{read_coloring, read_graph, write_coloring, write_graph, RunManifest};
use odg_core::reduce::{self, Criterion, ReduceError, ReductionPlan};
use odg_core::svg::{render_svg, RenderOptions};
use odg_core::tri;

#[derive(Parser)]
#[command(name = "odg", version, about = "Odd-distance graph constructions and coloring tools")]
struct Cli {
    /// Seed for randomized procedures; recorded in run manifests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression or named construction to graph JSON.
    Build(BuildArgs),
    /// Print vertex and edge counts with the per-length histogram.
    Stats {
        /// Graph JSON; standard input when omitted.
        graph: Option<PathBuf>,
    },
    /// Print the (m, n) and (m, s) tables.
    Tables {
        /// Rows with m below this bound in the (m, n) table.
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        /// Rows with m up to this bound in the (m, s) table.
        #[arg(long, default_value_t = 400)]
        s_max: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the lattice triangles with even edge m.
    Triangles {
        #[arg(short)]
        m: u64,
    },
    /// Write the k-coloring CNF of a graph in DIMACS format.
    Encode {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        amo: bool,
        #[arg(long)]
        clique_break: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide k-colorability.
    Solve {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        solver: SolverOpts,
        /// Proof file passed to the solver's {proof} placeholder.
        #[arg(long)]
        proof: Option<PathBuf>,
        /// Write the coloring JSON here on SAT.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the chromatic number.
    Chi {
        graph: PathBuf,
        #[command(flatten)]
        solver: SolverOpts,
        /// Largest k tried with an external solver.
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a coloring file against a graph.
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Decide whether vertex pairs can share a color in every k-coloring.
    Virtual {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// A pair of vertex indices "u,v".
        #[arg(long, conflicts_with = "distance")]
        pair: Option<String>,
        /// Check every pair at this exact distance (a rational such as 5 or 1/5).
        #[arg(long)]
        distance: Option<String>,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Peel, minimize under k-UNSAT, or map an unsat core back to vertices.
    Reduce(ReduceArgs),
    /// Split a rotated construction into core, rotors and frame.
    Decompose {
        graph: PathBuf,
        /// Rotation "m1,m2,r".
        #[arg(long)]
        rho: String,
        #[arg(long, default_value = "1")]
        scale: String,
        #[arg(long)]
        json: bool,
    },
    /// Draw a graph as SVG.
    Render {
        graph: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Vertex indices drawn larger, comma separated.
        #[arg(long)]
        emphasize: Option<String>,
        /// Emphasize the frame found by decomposing with rotation "m1,m2,r".
        #[arg(long)]
        frame_of: Option<String>,
        #[arg(long)]
        edges: bool,
        /// Edge lengths to draw, comma separated.
        #[arg(long)]
        lengths: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BuildArgs {
    /// Construction expression, e.g. "F(8,3) (+) (8*H + rho(8,8,7)*R(8,3))".
    #[arg(short, long, conflicts_with = "named")]
    expr: Option<String>,
    /// t, h, g306, g279, g234, g2035, v31, g48289, g49a.
    #[arg(long)]
    named: Option<String>,
    /// Parameters "m1,n1,m2,n2,r".
    #[arg(long)]
    params: Option<String>,
    /// Scale all parameters by an odd factor.
    #[arg(long, default_value_t = 1)]
    scale: i64,
    /// Keep only the construction's own edge lengths.
    #[arg(long)]
    restricted: bool,
    /// Accept pairs (m, n) outside the admissible set.
    #[arg(long = "override")]
    override_admissibility: bool,
    /// Rotor deletion for g234 as "n,m;n,m;...".
    #[arg(long)]
    deletion: Option<String>,
    /// Keep only edges of these odd lengths, comma separated (e.g. 1 for the unit-distance graph).
    #[arg(long)]
    lengths: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    graph: PathBuf,
    #[arg(short)]
    k: usize,
    #[arg(long, value_enum, default_value = "farthest-first")]
    criterion: CriterionArg,
    /// Structural peeling only, no solver calls.
    #[arg(long)]
    peel: bool,
    /// Map a clause-index core file of the default k-coloring CNF to vertices.
    #[arg(long, conflicts_with = "peel")]
    core: Option<PathBuf>,
    #[arg(long)]
    min_vertices: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[command(flatten)]
    solver: SolverOpts,
    /// Reduction log as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CriterionArg {
    FarthestFirst,
    MinDegreeFirst,
    FarthestThenMinDegree,
    MinDegreeThenFarthest,
    Canonical,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::FarthestFirst => Criterion::FarthestFirst,
            CriterionArg::MinDegreeFirst => Criterion::MinDegreeFirst,
            CriterionArg::FarthestThenMinDegree => Criterion::FarthestThenMinDegree,
            CriterionArg::MinDegreeThenFarthest => Criterion::MinDegreeThenFarthest,
            CriterionArg::Canonical => Criterion::Canonical,
        }
    }
}

#[derive(Args, Clone)]
struct SolverOpts {
    /// Use the internal exact solver even if an external one is configured.
    #[arg(long)]
    internal: bool,
    /// External solver command template with a {cnf} placeholder.
    #[arg(long, env = chroma::SOLVER_ENV)]
    solver: Option<String>,
    /// Per-solve timeout in seconds.
    #[arg(long, env = chroma::TIMEOUT_ENV)]
    timeout: Option<f64>,
    /// Vertex limit for the internal solver.
    #[arg(long, env = chroma::INTERNAL_LIMIT_ENV, default_value_t = chroma::DEFAULT_INTERNAL_LIMIT)]
    limit: usize,
    /// Run manifest path.
    #[arg(long, default_value = "odg-manifest.json")]
    manifest: PathBuf,
}

/// A computation the tool declines to run, or a check that fails.
#[derive(Debug)]
struct Refusal(String);

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn refuse(msg: impl Into<String>) -> anyhow::Error {
    Refusal(msg.into()).into()
}

const EXIT_REFUSED: u8 = 2;
const EXIT_INDET: u8 = 3;

impl SolverOpts {
    fn timeout(&self) -> Duration {
        self.timeout.map(Duration::from_secs_f64).unwrap_or(DEFAULT_TIMEOUT)
    }

    fn solver(&self, n: usize, proof: Option<&Path>) -> Result<Box<dyn Solver>> {
        match (&self.solver, self.internal) {
            (Some(t), false) if !t.trim().is_empty() => {
                let mut s = ExternalSolver::new(t.as_str())?;
                if let Some(p) = proof {
                    s = s.with_proof(p);
                }
                Ok(Box::new(s))
            }
            _ => {
                if n > self.limit {
                    return Err(refuse(format!(
                        "graph has {n} vertices, above the internal solver limit {}; configure an external solver",
                        self.limit
                    )));
                }
                Ok(Box::new(InternalSolver))
            }
        }
    }
}

struct Manifest {
    record: RunManifest,
    path: PathBuf,
    start: Instant,
}

impl Manifest {
    fn new(command: &str, opts: &SolverOpts, solver: &dyn Solver, seed: u64, inputs: &[&Path]) -> Self {
        let mut parameters = BTreeMap::new();
        parameters.insert("seed".to_string(), seed.to_string());
        Manifest {
            record: RunManifest {
                command: command.into(),
                parameters,
                inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
                solver: solver.name(),
                timeout_seconds: opts.timeout().as_secs_f64(),
                ..Default::default()
            },
            path: opts.manifest.clone(),
            start: Instant::now(),
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.record.parameters.insert(k.into(), v.to_string());
    }

    fn finish(mut self, outcome: &str, outputs: &[&Path]) -> Result<()> {
        self.record.outcome = outcome.into();
        self.record.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
        self.record.wall_seconds = self.start.elapsed().as_secs_f64();
        fs::write(&self.path, self.record.to_json()).with_context(|| format!("writing {}", self.path.display()))
    }
}

fn load_graph(path: &Path) -> Result<OddGraph> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(read_graph(&text)?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn ints<T: std::str::FromStr>(s: &str, sep: char) -> Result<Vec<T>> {
    s.split(sep)
        .map(|x| x.trim().parse::<T>().map_err(|_| anyhow!("cannot parse {x:?} in {s:?}")))
        .collect()
}

fn parse_params(s: &str) -> Result<ConstructionParams> {
    let v: Vec<i64> = ints(s, ',')?;
    let [m1, n1, m2, n2, r] = v[..] else { bail!("expected m1,n1,m2,n2,r, got {s:?}") };
    let r = u64::try_from(r).map_err(|_| anyhow!("r must be positive"))?;
    Ok(ConstructionParams::new(m1, n1, m2, n2, r))
}

fn parse_rotation(s: &str) -> Result<Rotation> {
    let v: Vec<u64> = ints(s, ',')?;
    let [a, b, r] = v[..] else { bail!("expected m1,m2,r, got {s:?}") };
    Ok(Rotation::from_triangle(a, b, r)?)
}

fn parse_deletion(s: &str) -> Result<Vec<(i64, i64)>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|pt| {
            let v: Vec<i64> = ints(pt, ',')?;
            let [n, m] = v[..] else { bail!("expected n,m, got {pt:?}") };
            Ok((n, m))
        })
        .collect()
}

fn cmd_build(a: &BuildArgs) -> Result<()> {
    let policy = if a.override_admissibility { Admissibility::Override } else { Admissibility::Strict };
    let mode = if a.restricted { LengthMode::Restricted } else { LengthMode::Unrestricted };
    let g = if let Some(e) = &a.expr {
        build::expr::eval_with(&build::parse(e)?, policy)?
    } else {
        let name = a.named.as_deref().ok_or_else(|| anyhow!("give --expr or --named"))?;
        let default = if name == "g234" { "24,35,24,35,11" } else { "8,3,8,3,7" };
        let p = parse_params(a.params.as_deref().unwrap_or(default))?.scaled(a.scale);
        match name {
            "t" => build::make_t(),
            "h" => build::make_h(),
            "g306" => build::g306_assembly(&p, mode, policy)?.graph,
            "g279" => build::g279(&p, mode)?,
            "g234" => {
                let del = match &a.deletion {
                    Some(s) => parse_deletion(s)?,
                    None => build::structural_deletion_24_35(a.scale),
                };
                build::g234(&p, &del)?
            }
            "g2035" => build::g2035()?,
            "v31" => build::v31()?,
            "g48289" => build::g48289(p.r)?,
            "g49a" => build::g49a()?,
            other => bail!("unknown construction {other:?}"),
        }
    };
    let g = match &a.lengths {
        Some(l) => {
            let set: BTreeSet<u64> = ints(l, ',')?.into_iter().collect();
            if set.iter().any(|x| x % 2 == 0) {
                bail!("edge lengths must be odd");
            }
            g.with_allowed_lengths(Some(set))
        }
        None => g,
    };
    emit(a.output.as_deref(), &write_graph(&g))
}

fn stats_line(g: &OddGraph) -> String {
    let edges = g.edges();
    let hist = OddGraph::length_histogram(&edges);
    let parts: Vec<String> = hist.iter().map(|(l, c)| format!("{l}:{c}")).collect();
    format!("{} vertices, {} edges; {}", g.len(), edges.len(), parts.join(" "))
}

fn outcome_exit(outcome: &SolveOutcome) -> ExitCode {
    match outcome {
        SolveOutcome::Indet(_) => ExitCode::from(EXIT_INDET),
        _ => ExitCode::SUCCESS,
    }
}

fn describe(outcome: &SolveOutcome) -> String {
    match outcome {
        SolveOutcome::Indet(r) => format!("INDET ({r})"),
        o => o.label().to_string(),
    }
}

fn cmd_solve(graph: &Path, k: usize, opts: &SolverOpts, proof: Option<&Path>, out: Option<&Path>, seed: u64) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let sg = SimpleGraph::from_odd(&g);
    let solver = opts.solver(g.len(), proof)?;
    let mut manifest = Manifest::new("solve", opts, solver.as_ref(), seed, &[graph]);
    manifest.param("k", k);
    let inst = encode(&sg, k, EncodeOptions::default())?;
    let outcome = solver.solve(&inst, opts.timeout())?;
    let mut outputs: Vec<&Path> = Vec::new();
    if let SolveOutcome::Sat(model) = &outcome {
        let c = decode(&inst, model)?;
        if !validate(&sg, &c) {
            bail!("solver returned a model that does not decode to a proper coloring");
        }
        if let Some(p) = out {
            fs::write(p, write_coloring(&c))?;
            outputs.push(p);
        }
    }
    if let Some(p) = proof {
        outputs.push(p);
    }
    println!("{}", describe(&outcome));
    manifest.finish(outcome.label(), &outputs)?;
    Ok(outcome_exit(&outcome))
}

fn cmd_chi(graph: &Path, opts: &SolverOpts, k_max: Option<usize>, out: Option<&Path>, seed: u64) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let sg = SimpleGraph::from_odd(&g);
    let solver = opts.solver(g.len(), None)?;
    let mut manifest = Manifest::new("chi", opts, solver.as_ref(), seed, &[graph]);
    let external = opts.solver.as_deref().is_some_and(|s| !s.trim().is_empty()) && !opts.internal;
    let found: Option<(usize, Coloring)> = if !external {
        match chi_exact(&sg, opts.limit) {
            Ok(r) => Some(r),
            Err(ChromaError::LimitExceeded { n, limit }) => {
                return Err(refuse(format!("graph has {n} vertices, above the internal limit {limit}")))
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let lo = sg.greedy_clique().len().max(1);
        let hi = k_max.unwrap_or(g.len()).max(lo);
        let mut res = None;
        for k in lo..=hi {
            let inst = encode(&sg, k, EncodeOptions::default())?;
            match solver.solve(&inst, opts.timeout())? {
                SolveOutcome::Sat(m) => {
                    let c = decode(&inst, &m)?;
                    if !validate(&sg, &c) {
                        bail!("solver returned an improper coloring");
                    }
                    res = Some((k, c));
                    break;
                }
                SolveOutcome::Unsat => continue,
                SolveOutcome::Indet(r) => {
                    println!("INDET at k = {k} ({r}); chi >= {k}");
                    manifest.param("k", k);
                    manifest.finish("INDET", &[])?;
                    return Ok(ExitCode::from(EXIT_INDET));
                }
            }
        }
        res
    };
    let Some((chi, c)) = found else {
        println!("chi > {}", k_max.unwrap_or(g.len()));
        manifest.finish("UNSAT", &[])?;
        return Ok(ExitCode::SUCCESS);
    };
    println!("{chi}");
    let mut outputs: Vec<&Path> = Vec::new();
    if let Some(p) = out {
        fs::write(p, write_coloring(&c))?;
        outputs.push(p);
    }
    manifest.param("chi", chi);
    manifest.finish("SAT", &outputs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(graph: &Path, coloring: &Path) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let c = read_coloring(&fs::read_to_string(coloring).with_context(|| format!("reading {}", coloring.display()))?)?;
    if validate(&SimpleGraph::from_odd(&g), &c) {
        println!("valid {}-coloring ({} colors used)", c.k, c.color_count());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid");
        Ok(ExitCode::from(EXIT_REFUSED))
    }
}

fn cmd_virtual(
    graph: &Path,
    k: usize,
    pair: Option<&str>,
    distance: Option<&str>,
    opts: &SolverOpts,
    seed: u64,
) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let sg = SimpleGraph::from_odd(&g);
    let pairs: Vec<(usize, usize)> = match (pair, distance) {
        (Some(p), _) => {
            let v: Vec<usize> = ints(p, ',')?;
            let [u, w] = v[..] else { bail!("expected u,v") };
            vec![(u, w)]
        }
        (None, Some(d)) => g.pairs_at_distance(&parse_rational(d)?),
        (None, None) => bail!("give --pair or --distance"),
    };
    let solver = opts.solver(g.len(), None)?;
    let mut manifest = Manifest::new("virtual", opts, solver.as_ref(), seed, &[graph]);
    manifest.param("k", k);
    manifest.param("pairs", pairs.len());
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (u, w) in pairs {
        let out = forced_distinct(&sg, u, w, k, solver.as_ref(), opts.timeout())?;
        let label = match &out {
            PairOutcome::AlwaysDistinct => "always-distinct",
            PairOutcome::CanCoincide(_) => "can-coincide",
            PairOutcome::BaseUnsat => "base-unsat",
            PairOutcome::Indet(_) => "indet",
        };
        println!("{u} {w} {label}");
        *counts.entry(label).or_default() += 1;
    }
    let summary: Vec<String> = counts.iter().map(|(l, c)| format!("{l}:{c}")).collect();
    let indet = counts.contains_key("indet");
    manifest.finish(if indet { "INDET" } else { "DONE" }, &[])?;
    eprintln!("{}", summary.join(" "));
    Ok(if indet { ExitCode::from(EXIT_INDET) } else { ExitCode::SUCCESS })
}

fn cmd_reduce(a: &ReduceArgs, seed: u64) -> Result<ExitCode> {
    let g = load_graph(&a.graph)?;
    let mut plan = ReductionPlan::new(a.k, a.solver.timeout(), a.criterion.into());
    plan.stop.min_vertices = a.min_vertices;
    plan.stop.max_steps = a.max_steps;
    if a.peel {
        let t = reduce::peel(&g, &plan)?;
        let sizes: Vec<String> = t.iter().map(|x| x.len().to_string()).collect();
        eprintln!("{}", sizes.join(" "));
        return emit(a.output.as_deref(), &write_graph(t.last().expect("trajectory is nonempty"))).map(|_| ExitCode::SUCCESS);
    }
    if let Some(core) = &a.core {
        let inst = encode(&SimpleGraph::from_odd(&g), a.k, EncodeOptions::default())?;
        let idx = reduce::read_core_file(core)?;
        let keep: Vec<usize> = reduce::core_vertices_from_proof(&inst, &idx)?.into_iter().collect();
        eprintln!("{} of {} vertices in core", keep.len(), g.len());
        return emit(a.output.as_deref(), &write_graph(&g.induced(&keep))).map(|_| ExitCode::SUCCESS);
    }
    let solver = a.solver.solver(g.len(), None)?;
    let mut manifest = Manifest::new("reduce", &a.solver, solver.as_ref(), seed, &[&a.graph]);
    manifest.param("k", a.k);
    manifest.param("criterion", format!("{:?}", plan.criterion));
    let mut log = match &a.log {
        Some(p) => Some(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => None,
    };
    let result = reduce::minimize_graph(&g, &plan, solver.as_ref(), |step| {
        if let Some(f) = log.as_mut() {
            let _ = writeln!(f, "{}", serde_json::to_string(step).expect("serializable"));
        }
    });
    let (min, _) = match result {
        Ok(r) => r,
        Err(ReduceError::NotUnsat { k, outcome }) => {
            manifest.finish(&outcome, &[])?;
            return Err(refuse(format!("initial graph is not {k}-UNSAT (solver said {outcome})")));
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("{} -> {} vertices", g.len(), min.len());
    emit(a.output.as_deref(), &write_graph(&min))?;
    let mut outputs: Vec<&Path> = a.output.iter().map(PathBuf::as_path).collect();
    outputs.extend(a.log.as_deref());
    manifest.finish("UNSAT", &outputs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(graph: &Path, rho: &str, scale: &str, json: bool) -> Result<()> {
    let g = load_graph(graph)?;
    let d = reduce::decompose(&g, &parse_rotation(rho)?, &parse_rational(scale)?)?;
    let sizes: Vec<usize> = d.rotor_groups.iter().map(|r| r.members.len()).collect();
    if json {
        let v = serde_json::json!({
            "core": d.core,
            "rotors": d.rotor_groups.iter().map(|r| &r.members).collect::<Vec<_>>(),
            "frame": d.frame,
            "census": d.census,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        let c = d.census;
        println!("core {}", d.core.len());
        println!("rotors {} {:?}", sizes.len(), sizes);
        println!("frame {}", d.frame.len());
        println!(
            "edges: lattice {}, rotated {}, rotation {} ({} core-rotor, {} rotor-rotor)",
            c.lattice,
            c.rotated,
            c.rotation(),
            c.rotation_core_rotor,
            c.rotation_rotor_rotor
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    graph: &Path,
    coloring: Option<&Path>,
    emphasize: Option<&str>,
    frame_of: Option<&str>,
    edges: bool,
    lengths: Option<&str>,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let mut opts = RenderOptions { draw_edges: edges, ..Default::default() };
    if let Some(p) = coloring {
        opts.coloring = Some(read_coloring(&fs::read_to_string(p)?)?);
    }
    if let Some(e) = emphasize {
        opts.emphasized.extend(ints::<usize>(e, ',')?);
    }
    if let Some(r) = frame_of {
        let d = reduce::decompose(&g, &parse_rotation(r)?, &parse_rational("1")?)?;
        opts.emphasized.extend(d.frame);
    }
    if let Some(l) = lengths {
        opts.edge_lengths = Some(ints::<u64>(l, ',')?.into_iter().collect::<BTreeSet<_>>());
    }
    match render_svg(&g, &opts) {
        Ok(svg) => emit(output, &svg).map(|_| ExitCode::SUCCESS),
        Err(e) => Err(refuse(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::Build(a) => cmd_build(a).map(|_| ExitCode::SUCCESS),
        Cmd::Stats { graph } => {
            let g = load_graph(graph.as_deref().unwrap_or(Path::new("-")))?;
            println!("{}", stats_line(&g));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Tables { n_max, s_max, json } => {
            let (t1, t2) = tri::render_tables(*n_max, *s_max);
            if *json {
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "n_table": t1, "s_table": t2 }))?);
            } else {
                print!("{}\n{}", tri::format_n_table(&t1), tri::format_s_table(&t2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Triangles { m } => {
            let floor = tri::min_s(*m)?;
            println!("m = {m}, smallest possible s = {floor}");
            println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "t", "s", "l", "n-", "n+");
            for p in tri::enumerate(*m)? {
                println!("{:>6} {:>8} {:>8} {:>8} {:>8}", p.t, p.s, p.l, p.n_minus, p.n_plus);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Encode { graph, k, amo, clique_break, output } => {
            let g = load_graph(graph)?;
            let opts = EncodeOptions { amo: *amo, clique_break: *clique_break };
            let inst = encode(&SimpleGraph::from_odd(&g), *k, opts)?;
            emit(output.as_deref(), &inst.to_dimacs()).map(|_| ExitCode::SUCCESS)
        }
        Cmd::Solve { graph, k, solver, proof, output } => {
            cmd_solve(graph, *k, solver, proof.as_deref(), output.as_deref(), seed)
        }
        Cmd::Chi { graph, solver, k_max, output } => cmd_chi(graph, solver, *k_max, output.as_deref(), seed),
        Cmd::Verify { graph, coloring } => cmd_verify(graph, coloring),
        Cmd::Virtual { graph, k, pair, distance, solver } => {
            cmd_virtual(graph, *k, pair.as_deref(), distance.as_deref(), solver, seed)
        }
        Cmd::Reduce(a) => cmd_reduce(a, seed),
        Cmd::Decompose { graph, rho, scale, json } => cmd_decompose(graph, rho, scale, *json).map(|_| ExitCode::SUCCESS),
        Cmd::Render { graph, coloring, emphasize, frame_of, edges, lengths, output } => cmd_render(
            graph,
            coloring.as_deref(),
            emphasize.as_deref(),
            frame_of.as_deref(),
            *edges,
            lengths.as_deref(),
            output.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("odg: {e:#}");
            if e.downcast_ref::<Refusal>().is_some() {
                ExitCode::from(EXIT_REFUSED)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
