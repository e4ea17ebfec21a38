//! k-coloring as CNF, an exact DSATUR solver for small graphs, a bridge to external
//! DIMACS solvers, and virtual-edge queries.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::geom::OddGraph;

/// Environment variable holding the external solver command template.
pub const SOLVER_ENV: &str = "ODG_SOLVER";
/// Environment variable holding the solver timeout in seconds.
pub const TIMEOUT_ENV: &str = "ODG_TIMEOUT";
/// Environment variable holding the vertex limit for the internal exact solver.
pub const INTERNAL_LIMIT_ENV: &str = "ODG_INTERNAL_LIMIT";

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(24 * 60 * 60);
pub const DEFAULT_INTERNAL_LIMIT: usize = 64;

#[derive(Debug, Error)]
pub enum ChromaError {
    #[error("color count must be at least 1")]
    ZeroColors,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("pair must consist of two distinct vertices")]
    SamePair,
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("graph has {n} vertices, above the internal solver limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("solver command template is empty or lacks a {{cnf}} placeholder")]
    BadTemplate,
    #[error("cannot parse solver output: {0}")]
    UnparseableOutput(String),
    #[error("cannot parse DIMACS input: {0}")]
    Dimacs(String),
    #[error("solver model violates clause {0}")]
    WrongModel(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected simple graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Normalizes every edge to `(min, max)`, sorts and deduplicates.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ChromaError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(ChromaError::VertexOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(ChromaError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(SimpleGraph { n, edges, adj })
    }

    pub fn from_odd(g: &OddGraph) -> Self {
        Self::new(g.len(), g.edges().into_iter().map(|e| (e.u, e.v))).expect("edges of an odd graph are valid")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Subgraph induced by `keep` (indices renumbered in the given order).
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| pos[*u] != usize::MAX && pos[*v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        SimpleGraph::new(keep.len(), edges).expect("renumbered edges are valid")
    }

    /// A clique found greedily from the highest-degree vertex, in canonical order.
    pub fn greedy_clique(&self) -> Vec<usize> {
        let Some(start) = (0..self.n).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v))) else {
            return Vec::new();
        };
        let mut clique = vec![start];
        let mut cands: Vec<usize> = self.adj[start].clone();
        while !cands.is_empty() {
            let best = *cands
                .iter()
                .max_by_key(|&&c| {
                    (cands.iter().filter(|&&o| self.is_adjacent(c, o)).count(), std::cmp::Reverse(c))
                })
                .expect("nonempty");
            clique.push(best);
            cands.retain(|&c| c != best && self.is_adjacent(c, best));
        }
        clique.sort_unstable();
        clique
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Add at-most-one clauses per vertex.
    pub amo: bool,
    /// Pin the colors of one greedily found clique.
    pub clique_break: bool,
}

/// A k-coloring formula. Variable `v·k + c + 1` means "vertex `v` has color `c`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub k: usize,
    pub vertex_count: usize,
    pub var_count: usize,
    pub clauses: Vec<Vec<i64>>,
    pub edges: Vec<(usize, usize)>,
    pub equalities: Vec<(usize, usize)>,
    pub pins: Vec<(usize, usize)>,
}

impl CnfInstance {
    pub fn var(&self, v: usize, c: usize) -> i64 {
        (v * self.k + c + 1) as i64
    }

    /// `(vertex, color)` of a variable.
    pub fn var_meaning(&self, var: i64) -> (usize, usize) {
        let i = var.unsigned_abs() as usize - 1;
        (i / self.k, i % self.k)
    }

    /// Adds the `2k` clauses of `color(u) = color(v)`.
    pub fn with_equality(mut self, u: usize, v: usize) -> Result<Self, ChromaError> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(ChromaError::VertexOutOfRange(u.max(v)));
        }
        for c in 0..self.k {
            let (a, b) = (self.var(u, c), self.var(v, c));
            self.clauses.push(vec![-a, b]);
            self.clauses.push(vec![a, -b]);
        }
        self.equalities.push((u, v));
        Ok(self)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for cl in &self.clauses {
            for lit in cl {
                write!(out, "{lit} ").expect("string write");
            }
            out.push_str("0\n");
        }
        out
    }

    /// Index of the first clause the model falsifies.
    pub fn first_violated(&self, model: &[i64]) -> Option<usize> {
        self.clauses.iter().position(|cl| {
            !cl.iter().any(|&lit| model.get(lit.unsigned_abs() as usize - 1).is_some_and(|&m| m == lit))
        })
    }
}

pub fn encode(g: &SimpleGraph, k: usize, opts: EncodeOptions) -> Result<CnfInstance, ChromaError> {
    if k == 0 {
        return Err(ChromaError::ZeroColors);
    }
    if g.is_empty() {
        return Err(ChromaError::EmptyGraph);
    }
    let n = g.len();
    let var = |v: usize, c: usize| (v * k + c + 1) as i64;
    let mut clauses = Vec::with_capacity(n + k * g.edges().len());
    for v in 0..n {
        clauses.push((0..k).map(|c| var(v, c)).collect());
    }
    for &(u, v) in g.edges() {
        for c in 0..k {
            clauses.push(vec![-var(u, c), -var(v, c)]);
        }
    }
    if opts.amo {
        for v in 0..n {
            for c1 in 0..k {
                for c2 in c1 + 1..k {
                    clauses.push(vec![-var(v, c1), -var(v, c2)]);
                }
            }
        }
    }
    let mut pins = Vec::new();
    if opts.clique_break {
        for (c, v) in g.greedy_clique().into_iter().take(k).enumerate() {
            clauses.push(vec![var(v, c)]);
            pins.push((v, c));
        }
    }
    Ok(CnfInstance {
        k,
        vertex_count: n,
        var_count: n * k,
        clauses,
        edges: g.edges().to_vec(),
        equalities: Vec::new(),
        pins,
    })
}

/// Parses a DIMACS CNF document into `(var_count, clauses)`.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i64>>), ChromaError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| ChromaError::Dimacs(format!("bad header {line:?}")))?;
                    let c = c.parse().map_err(|_| ChromaError::Dimacs(format!("bad header {line:?}")))?;
                    header = Some((v, c));
                }
                _ => return Err(ChromaError::Dimacs(format!("bad header {line:?}"))),
            }
            continue;
        }
        let (vars, _) = header.ok_or_else(|| ChromaError::Dimacs("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| ChromaError::Dimacs(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(ChromaError::Dimacs(format!("literal {lit} exceeds {vars} variables")));
            } else {
                cur.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| ChromaError::Dimacs("missing header".into()))?;
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != count {
        return Err(ChromaError::Dimacs(format!("header declares {count} clauses, found {}", clauses.len())));
    }
    Ok((vars, clauses))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// One signed literal per variable, in variable order.
    Sat(Vec<i64>),
    Unsat,
    Indet(String),
}

impl SolveOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Sat(_) => "SAT",
            SolveOutcome::Unsat => "UNSAT",
            SolveOutcome::Indet(_) => "INDET",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub k: usize,
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn color_count(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }
}

/// Lowest true color per vertex.
pub fn decode(inst: &CnfInstance, model: &[i64]) -> Result<Coloring, ChromaError> {
    if model.len() < inst.var_count {
        return Err(ChromaError::MalformedModel(format!("{} of {} variables assigned", model.len(), inst.var_count)));
    }
    let colors = (0..inst.vertex_count)
        .map(|v| {
            (0..inst.k)
                .find(|&c| model[v * inst.k + c] > 0)
                .ok_or_else(|| ChromaError::MalformedModel(format!("vertex {v} has no color")))
        })
        .collect::<Result<_, _>>()?;
    Ok(Coloring { k: inst.k, colors })
}

pub fn validate(g: &SimpleGraph, coloring: &Coloring) -> bool {
    coloring.colors.len() == g.len()
        && coloring.colors.iter().all(|&c| c < coloring.k)
        && g.edges().iter().all(|&(u, v)| coloring.colors[u] != coloring.colors[v])
}

/// The model of an instance that encodes the given coloring.
fn model_of(inst: &CnfInstance, colors: &[usize]) -> Vec<i64> {
    (0..inst.var_count)
        .map(|i| {
            let (v, c) = (i / inst.k, i % inst.k);
            let lit = (i + 1) as i64;
            if colors[v] == c {
                lit
            } else {
                -lit
            }
        })
        .collect()
}

pub trait Solver {
    fn name(&self) -> String;
    fn solve(&self, inst: &CnfInstance, timeout: Duration) -> Result<SolveOutcome, ChromaError>;
}

/// Exact DSATUR branch and bound over the coloring structure of an instance.
#[derive(Clone, Copy, Debug, Default)]
pub struct InternalSolver;

impl Solver for InternalSolver {
    fn name(&self) -> String {
        "internal-dsatur".into()
    }

    fn solve(&self, inst: &CnfInstance, timeout: Duration) -> Result<SolveOutcome, ChromaError> {
        let deadline = Instant::now().checked_add(timeout);
        Ok(match color_structure(inst, deadline) {
            Search::Found(colors) => SolveOutcome::Sat(model_of(inst, &colors)),
            Search::None => SolveOutcome::Unsat,
            Search::Timeout => SolveOutcome::Indet(format!("internal solver timeout after {timeout:?}")),
        })
    }
}

enum Search {
    Found(Vec<usize>),
    None,
    Timeout,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

fn color_structure(inst: &CnfInstance, deadline: Option<Instant>) -> Search {
    let n = inst.vertex_count;
    let k = inst.k;
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v) in &inst.equalities {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let class: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let reps: Vec<usize> = (0..n).filter(|&v| class[v] == v).collect();
    let mut idx = vec![0; n];
    for (i, &r) in reps.iter().enumerate() {
        idx[r] = i;
    }
    let m = reps.len();
    let mut edges = Vec::new();
    for &(u, v) in &inst.edges {
        let (a, b) = (idx[class[u]], idx[class[v]]);
        if a == b {
            return Search::None;
        }
        edges.push((a, b));
    }
    let g = SimpleGraph::new(m, edges).expect("merged edges are valid");
    let mut fixed = vec![None; m];
    for &(v, c) in &inst.pins {
        let a = idx[class[v]];
        match fixed[a] {
            Some(old) if old != c => return Search::None,
            _ => fixed[a] = Some(c),
        }
    }
    let mut dsatur = Dsatur::new(&g, k, deadline);
    match dsatur.run(&fixed) {
        Search::Found(col) => Search::Found((0..n).map(|v| col[idx[class[v]]]).collect()),
        other => other,
    }
}

struct Dsatur<'a> {
    g: &'a SimpleGraph,
    k: usize,
    deadline: Option<Instant>,
    colors: Vec<Option<usize>>,
    // count of neighbors holding each color, per vertex
    nbr_counts: Vec<Vec<u32>>,
    nodes: u64,
    timed_out: bool,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a SimpleGraph, k: usize, deadline: Option<Instant>) -> Self {
        Dsatur {
            g,
            k,
            deadline,
            colors: vec![None; g.len()],
            nbr_counts: vec![vec![0; k]; g.len()],
            nodes: 0,
            timed_out: false,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        for &w in self.g.neighbors(v) {
            self.nbr_counts[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v].take().expect("assigned");
        for &w in self.g.neighbors(v) {
            self.nbr_counts[w][c] -= 1;
        }
    }

    fn run(&mut self, fixed: &[Option<usize>]) -> Search {
        let pinned = fixed.iter().any(Option::is_some);
        for (v, c) in fixed.iter().enumerate() {
            if let Some(c) = *c {
                if c >= self.k || self.nbr_counts[v][c] > 0 {
                    return Search::None;
                }
                self.assign(v, c);
            }
        }
        let used = fixed.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
        if self.search(used, pinned) {
            Search::Found(self.colors.iter().map(|c| c.expect("complete")).collect())
        } else if self.timed_out {
            Search::Timeout
        } else {
            Search::None
        }
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.len() {
            if self.colors[v].is_some() {
                continue;
            }
            let sat = self.nbr_counts[v].iter().filter(|&&x| x > 0).count();
            let deg = self.g.neighbors(v).iter().filter(|&&w| self.colors[w].is_none()).count();
            if best.is_none_or(|(bs, bd, _)| (sat, deg) > (bs, bd)) {
                best = Some((sat, deg, v));
            }
        }
        best.map(|b| b.2)
    }

    /// `used` is one past the highest color in use; without pins, colors above it are
    /// interchangeable so only `used` itself is tried.
    fn search(&mut self, used: usize, pinned: bool) -> bool {
        self.nodes += 1;
        if self.nodes % 1024 == 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }
        let Some(v) = self.pick() else {
            return true;
        };
        let top = if pinned { self.k } else { (used + 1).min(self.k) };
        for c in 0..top {
            if self.nbr_counts[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            if self.search(used.max(c + 1), pinned) {
                return true;
            }
            self.unassign(v);
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// A proper coloring with `k` colors, if one exists.
pub fn color_with(g: &SimpleGraph, k: usize, timeout: Duration) -> Result<SolveOutcome, ChromaError> {
    InternalSolver.solve(&encode(g, k, EncodeOptions::default())?, timeout)
}

/// The chromatic number and a witness coloring. Refuses graphs above `limit` vertices.
pub fn chi_exact(g: &SimpleGraph, limit: usize) -> Result<(usize, Coloring), ChromaError> {
    if g.len() > limit {
        return Err(ChromaError::LimitExceeded { n: g.len(), limit });
    }
    if g.is_empty() {
        return Err(ChromaError::EmptyGraph);
    }
    let lower = g.greedy_clique().len().max(1);
    for k in lower..=g.len() {
        let inst = encode(g, k, EncodeOptions::default())?;
        if let Search::Found(colors) = color_structure(&inst, None) {
            return Ok((k, Coloring { k, colors }));
        }
    }
    unreachable!("n colors always suffice")
}

/// Runs a DIMACS solver as a subprocess.
///
/// The template is split shell-style; `{cnf}` is replaced by the instance path and
/// `{proof}` by the proof path (a file in the run directory unless one is configured).
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub template: String,
    pub proof_path: Option<PathBuf>,
}

impl ExternalSolver {
    pub fn new(template: impl Into<String>) -> Result<Self, ChromaError> {
        let template = template.into();
        let argv = shlex::split(&template).ok_or(ChromaError::BadTemplate)?;
        if argv.is_empty() || !argv.iter().any(|a| a.contains("{cnf}")) {
            return Err(ChromaError::BadTemplate);
        }
        Ok(ExternalSolver { template, proof_path: None })
    }

    pub fn with_proof(mut self, path: impl Into<PathBuf>) -> Self {
        self.proof_path = Some(path.into());
        self
    }

    pub fn from_env() -> Option<Result<Self, ChromaError>> {
        std::env::var(SOLVER_ENV).ok().filter(|s| !s.trim().is_empty()).map(Self::new)
    }

    fn argv(&self, cnf: &Path, proof: &Path) -> Vec<String> {
        shlex::split(&self.template)
            .expect("validated in new")
            .into_iter()
            .map(|a| a.replace("{cnf}", &cnf.to_string_lossy()).replace("{proof}", &proof.to_string_lossy()))
            .collect()
    }
}

impl Solver for ExternalSolver {
    fn name(&self) -> String {
        self.template.clone()
    }

    fn solve(&self, inst: &CnfInstance, timeout: Duration) -> Result<SolveOutcome, ChromaError> {
        let dir = tempfile::tempdir()?;
        let cnf = dir.path().join("instance.cnf");
        fs::write(&cnf, inst.to_dimacs())?;
        let proof = self.proof_path.clone().unwrap_or_else(|| dir.path().join("proof.drat"));
        let out_path = dir.path().join("stdout.txt");
        let argv = self.argv(&cnf, &proof);
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::null())
            .stdout(fs::File::create(&out_path)?)
            .stderr(Stdio::null())
            .spawn()?;
        let start = Instant::now();
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if start.elapsed() >= timeout {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(SolveOutcome::Indet(format!("terminated after {timeout:?}")));
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        let reader = BufReader::new(fs::File::open(&out_path)?);
        let lines: Vec<String> = reader.lines().collect::<Result<_, _>>()?;
        let outcome = parse_solver_output(&lines, status.code(), inst.var_count)?;
        if let SolveOutcome::Sat(model) = &outcome {
            if let Some(i) = inst.first_violated(model) {
                return Err(ChromaError::WrongModel(i + 1));
            }
        }
        Ok(outcome)
    }
}

/// Reads the `s` and `v` lines of a solver's output; exit codes 10 and 20 are honored
/// when no status line is printed. Unassigned variables default to false.
pub fn parse_solver_output(lines: &[String], code: Option<i32>, var_count: usize) -> Result<SolveOutcome, ChromaError> {
    let mut status = None;
    let mut values = Vec::new();
    for line in lines {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| ChromaError::UnparseableOutput(format!("bad literal {tok:?}")))?;
                if lit != 0 {
                    values.push(lit);
                }
            }
        }
    }
    let sat = match (status.as_deref(), code) {
        (Some("SATISFIABLE"), _) => true,
        (Some("UNSATISFIABLE"), _) => return Ok(SolveOutcome::Unsat),
        (Some("UNKNOWN") | Some("INDETERMINATE"), _) => return Ok(SolveOutcome::Indet("solver reported UNKNOWN".into())),
        (Some(other), _) => return Err(ChromaError::UnparseableOutput(format!("status line {other:?}"))),
        (None, Some(20)) => return Ok(SolveOutcome::Unsat),
        (None, Some(10)) => true,
        (None, c) => {
            let tail: Vec<&str> = lines.iter().rev().take(3).map(String::as_str).collect();
            return Err(ChromaError::UnparseableOutput(format!("no status line, exit code {c:?}, tail {tail:?}")));
        }
    };
    debug_assert!(sat);
    if values.is_empty() && var_count > 0 {
        return Err(ChromaError::UnparseableOutput("SATISFIABLE without a model".into()));
    }
    let mut model: Vec<i64> = (1..=var_count as i64).map(|v| -v).collect();
    for lit in values {
        let i = lit.unsigned_abs() as usize;
        if i == 0 || i > var_count {
            return Err(ChromaError::UnparseableOutput(format!("literal {lit} out of range")));
        }
        model[i - 1] = lit;
    }
    Ok(SolveOutcome::Sat(model))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    /// No k-coloring gives the pair one color: a virtual edge.
    AlwaysDistinct,
    /// A witness coloring with both vertices the same color.
    CanCoincide(Coloring),
    /// The graph itself has no k-coloring.
    BaseUnsat,
    Indet(String),
}

pub fn forced_distinct(
    g: &SimpleGraph,
    u: usize,
    v: usize,
    k: usize,
    solver: &dyn Solver,
    timeout: Duration,
) -> Result<PairOutcome, ChromaError> {
    if u >= g.len() || v >= g.len() {
        return Err(ChromaError::VertexOutOfRange(u.max(v)));
    }
    if u == v {
        return Err(ChromaError::SamePair);
    }
    if g.is_adjacent(u, v) {
        return Ok(PairOutcome::AlwaysDistinct);
    }
    let base = encode(g, k, EncodeOptions::default())?;
    let joined = base.clone().with_equality(u, v)?;
    match solver.solve(&joined, timeout)? {
        SolveOutcome::Sat(model) => {
            let c = decode(&joined, &model)?;
            debug_assert!(validate(g, &c) && c.colors[u] == c.colors[v]);
            Ok(PairOutcome::CanCoincide(c))
        }
        SolveOutcome::Indet(r) => Ok(PairOutcome::Indet(r)),
        SolveOutcome::Unsat => match solver.solve(&base, timeout)? {
            SolveOutcome::Unsat => Ok(PairOutcome::BaseUnsat),
            SolveOutcome::Sat(_) => Ok(PairOutcome::AlwaysDistinct),
            SolveOutcome::Indet(r) => Ok(PairOutcome::Indet(r)),
        },
    }
}
