//! Peeling, deletion-based minimization under k-UNSAT, unsat-core mapping, and
//! decomposition of rotated constructions into core, rotors and frame.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::build::{self, BuildError, ConstructionParams, RotorDeletion};
use crate::chroma::{encode, ChromaError, CnfInstance, EncodeOptions, SimpleGraph, SolveOutcome, Solver};
use crate::field::{FieldElement, Rational};
use crate::geom::{is_lattice_point, Complex, Edge, GeomError, OddGraph, Point, Rotation};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("initial graph is not {k}-UNSAT within budget (outcome {outcome})")]
    NotUnsat { k: usize, outcome: String },
    #[error("clause index {0} out of range")]
    ClauseIndex(usize),
    #[error("cannot parse core file line {line}: {text:?}")]
    CoreFile { line: usize, text: String },
    #[error("vertex {index} is not of the assumed form: {reason}")]
    NotDecomposable { index: usize, reason: String },
    #[error(transparent)]
    Chroma(#[from] ChromaError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Order in which vertices are peeled or tried for deletion. Remaining ties go to the
/// earlier vertex in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    FarthestFirst,
    MinDegreeFirst,
    FarthestThenMinDegree,
    MinDegreeThenFarthest,
    Canonical,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::FarthestFirst,
        Criterion::MinDegreeFirst,
        Criterion::FarthestThenMinDegree,
        Criterion::MinDegreeThenFarthest,
        Criterion::Canonical,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopConditions {
    /// Stop once the graph has at most this many vertices.
    pub min_vertices: Option<usize>,
    /// Stop after this many removals.
    pub max_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    pub k: usize,
    pub step_timeout: Duration,
    pub criterion: Criterion,
    pub stop: StopConditions,
}

impl ReductionPlan {
    pub fn new(k: usize, step_timeout: Duration, criterion: Criterion) -> Self {
        ReductionPlan { k, step_timeout, criterion, stop: StopConditions::default() }
    }

    pub fn validate(&self) -> Result<(), ReduceError> {
        if self.k == 0 {
            return Err(ReduceError::InvalidPlan("k must be positive".into()));
        }
        if self.step_timeout.is_zero() {
            return Err(ReduceError::InvalidPlan("step budget must be positive".into()));
        }
        Ok(())
    }

    fn done(&self, steps: usize, remaining: usize) -> bool {
        remaining <= 1
            || self.stop.min_vertices.is_some_and(|m| remaining <= m)
            || self.stop.max_steps.is_some_and(|m| steps >= m)
    }
}

/// Compares two alive vertices; `Less` means `a` goes first.
fn rank(criterion: Criterion, norms: &[FieldElement], deg: &[usize], a: usize, b: usize) -> Ordering {
    let far = || norms[b].cmp_value(&norms[a]).expect("uniform tags");
    let low = || deg[a].cmp(&deg[b]);
    let primary = match criterion {
        Criterion::FarthestFirst => far(),
        Criterion::MinDegreeFirst => low(),
        Criterion::FarthestThenMinDegree => far().then_with(low),
        Criterion::MinDegreeThenFarthest => low().then_with(far),
        Criterion::Canonical => Ordering::Equal,
    };
    primary.then(a.cmp(&b))
}

/// Static order of all vertices under the criterion.
pub fn vertex_order(g: &OddGraph, criterion: Criterion) -> Vec<usize> {
    let sg = SimpleGraph::from_odd(g);
    let norms: Vec<FieldElement> = g.vertices().iter().map(Point::norm_sq).collect();
    let deg: Vec<usize> = (0..g.len()).map(|v| sg.degree(v)).collect();
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| rank(criterion, &norms, &deg, a, b));
    order
}

/// Repeatedly removes the first vertex under the criterion; degrees are recomputed after
/// every removal. The trajectory starts with `g` itself.
pub fn peel(g: &OddGraph, plan: &ReductionPlan) -> Result<Vec<OddGraph>, ReduceError> {
    plan.validate()?;
    if g.is_empty() {
        return Err(ReduceError::EmptyGraph);
    }
    let sg = SimpleGraph::from_odd(g);
    let norms: Vec<FieldElement> = g.vertices().iter().map(Point::norm_sq).collect();
    let mut deg: Vec<usize> = (0..g.len()).map(|v| sg.degree(v)).collect();
    let mut alive = vec![true; g.len()];
    let mut remaining = g.len();
    let mut removed = Vec::new();
    let mut out = vec![g.clone()];
    while !plan.done(removed.len(), remaining) {
        let worst = (0..g.len())
            .filter(|&v| alive[v])
            .min_by(|&a, &b| rank(plan.criterion, &norms, &deg, a, b))
            .expect("nonempty");
        alive[worst] = false;
        remaining -= 1;
        for &w in sg.neighbors(worst) {
            deg[w] -= 1;
        }
        removed.push(worst);
        out.push(g.without(&removed));
    }
    Ok(out)
}

/// One attempted deletion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: usize,
    pub removed_vertex: usize,
    pub outcome: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct Minimized {
    /// Surviving vertices, as indices into the input graph.
    pub kept: Vec<usize>,
    pub log: Vec<StepLog>,
}

impl Minimized {
    pub fn log_jsonl(&self) -> String {
        self.log.iter().map(|s| serde_json::to_string(s).expect("serializable") + "\n").collect()
    }
}

fn check(g: &SimpleGraph, keep: &[usize], k: usize, solver: &dyn Solver, t: Duration) -> Result<SolveOutcome, ReduceError> {
    let sub = g.induced(keep);
    if sub.is_empty() {
        return Ok(SolveOutcome::Sat(Vec::new()));
    }
    Ok(solver.solve(&encode(&sub, k, EncodeOptions::default())?, t)?)
}

/// Deletion-based minimization: each vertex in `order` is removed and kept out only if the
/// rest stays k-UNSAT; SAT and INDET both restore it.
pub fn minimize_unsat(
    g: &SimpleGraph,
    order: &[usize],
    k: usize,
    solver: &dyn Solver,
    step_timeout: Duration,
    mut progress: impl FnMut(&StepLog),
) -> Result<Minimized, ReduceError> {
    if g.is_empty() {
        return Err(ReduceError::EmptyGraph);
    }
    let all: Vec<usize> = (0..g.len()).collect();
    match check(g, &all, k, solver, step_timeout)? {
        SolveOutcome::Unsat => {}
        other => return Err(ReduceError::NotUnsat { k, outcome: other.label().into() }),
    }
    let mut alive = vec![true; g.len()];
    let mut log = Vec::new();
    for (step, &v) in order.iter().enumerate() {
        if v >= g.len() {
            return Err(ChromaError::VertexOutOfRange(v).into());
        }
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        let keep: Vec<usize> = (0..g.len()).filter(|&u| alive[u]).collect();
        let start = Instant::now();
        let outcome = check(g, &keep, k, solver, step_timeout)?;
        if outcome != SolveOutcome::Unsat {
            alive[v] = true;
        }
        let entry = StepLog { step, removed_vertex: v, outcome: outcome.label().into(), seconds: start.elapsed().as_secs_f64() };
        progress(&entry);
        log.push(entry);
    }
    Ok(Minimized { kept: (0..g.len()).filter(|&u| alive[u]).collect(), log })
}

/// Minimizes a geometric graph with the plan's criterion as the deletion order.
pub fn minimize_graph(
    g: &OddGraph,
    plan: &ReductionPlan,
    solver: &dyn Solver,
    progress: impl FnMut(&StepLog),
) -> Result<(OddGraph, Minimized), ReduceError> {
    plan.validate()?;
    let order = vertex_order(g, plan.criterion);
    let result = minimize_unsat(&SimpleGraph::from_odd(g), &order, plan.k, solver, plan.step_timeout, progress)?;
    Ok((g.induced(&result.kept), result))
}

/// Vertices mentioned by the listed clauses (1-based, DIMACS order).
pub fn core_vertices_from_proof(inst: &CnfInstance, core: &[usize]) -> Result<BTreeSet<usize>, ReduceError> {
    let mut out = BTreeSet::new();
    for &i in core {
        let clause = i.checked_sub(1).and_then(|j| inst.clauses.get(j)).ok_or(ReduceError::ClauseIndex(i))?;
        out.extend(clause.iter().map(|&lit| inst.var_meaning(lit).0));
    }
    Ok(out)
}

/// Parses a core file: one clause index per line; blank lines and `c` comments ignored.
pub fn parse_core(text: &str) -> Result<Vec<usize>, ReduceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('c'))
        .map(|(n, l)| {
            l.trim().parse().map_err(|_| ReduceError::CoreFile { line: n + 1, text: l.to_string() })
        })
        .collect()
}

pub fn read_core_file(path: &Path) -> Result<Vec<usize>, ReduceError> {
    parse_core(&std::fs::read_to_string(path)?)
}

/// A vertex `v = f + ρ·y`: `f` a translate free of the rotation, `y` rotor-local.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexParts {
    pub anchor: Point,
    pub local: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotorGroup {
    pub anchor: Point,
    /// Index of the anchor in the graph, when present.
    pub anchor_index: Option<usize>,
    /// All members including the anchor, ascending.
    pub members: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCensus {
    /// Difference vector on the lattice of the unrotated part.
    pub lattice: usize,
    /// Difference vector a rotated lattice vector.
    pub rotated: usize,
    /// Rotation edges with an unrotated endpoint.
    pub rotation_core_rotor: usize,
    /// Rotation edges between two rotated vertices.
    pub rotation_rotor_rotor: usize,
}

impl EdgeCensus {
    pub fn rotation(&self) -> usize {
        self.rotation_core_rotor + self.rotation_rotor_rotor
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub rotation: Rotation,
    pub parts: Vec<VertexParts>,
    /// Vertices free of the rotation.
    pub core: Vec<usize>,
    pub rotor_groups: Vec<RotorGroup>,
    /// Anchors present in the graph: the intersection of core and rotors.
    pub frame: Vec<usize>,
    pub rotation_edges: Vec<Edge>,
    pub census: EdgeCensus,
}

impl Decomposition {
    /// Rebuilds the point set from the parts.
    pub fn reassemble(&self) -> Result<OddGraph, ReduceError> {
        let pts = self
            .parts
            .iter()
            .map(|p| Ok(p.anchor.checked_add(&p.local.rotate(&self.rotation)?)?))
            .collect::<Result<Vec<_>, ReduceError>>()?;
        Ok(OddGraph::new(pts)?)
    }
}

/// Splits `g = core ∪ ⋃ (f + ρ·R)` by the rotation's irrational part. Every rotor-local
/// point must lie on the lattice of unit `scale`. When `ρ` has no irrational part every
/// vertex counts as core.
pub fn decompose(g: &OddGraph, rho: &Rotation, scale: &Rational) -> Result<Decomposition, ReduceError> {
    let z = rho.as_complex();
    let tau = Complex::new(z.re.tagged_part(), z.im.tagged_part())?;
    let split = |v: &Point| -> Result<VertexParts, ReduceError> {
        if tau.is_zero() {
            return Ok(VertexParts { anchor: v.clone(), local: Point::origin() });
        }
        // y = tagged(v) / τ; both are multiples of √d so the quotient is free of it
        let t = v.tagged_part();
        let conj = Complex::new(tau.re.clone(), -&tau.im)?;
        let inv = tau.norm_sq().inverse().map_err(GeomError::from)?;
        let y = t.mul_complex(&conj)?.mul_complex(&Complex::real(inv))?;
        let anchor = v.checked_sub(&y.rotate(rho)?)?;
        Ok(VertexParts { anchor, local: y })
    };
    let parts = g.vertices().iter().map(split).collect::<Result<Vec<_>, _>>()?;
    for (i, p) in parts.iter().enumerate() {
        let reason = if p.local.tag() != 1 || p.anchor.tag() != 1 {
            Some("rotor-local part is not free of the rotation")
        } else if is_lattice_point(&p.local, scale)?.is_none() {
            Some("rotor-local part is off the lattice")
        } else {
            None
        };
        if let Some(r) = reason {
            return Err(ReduceError::NotDecomposable { index: i, reason: r.into() });
        }
    }
    let core: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].local.is_origin()).collect();
    let mut groups: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, p) in parts.iter().enumerate() {
        if !p.local.is_origin() {
            groups.entry(p.anchor.clone()).or_default().push(i);
        }
    }
    let rotor_groups: Vec<RotorGroup> = groups
        .into_iter()
        .map(|(anchor, mut members)| {
            let anchor_index = g.index_of(&anchor);
            members.extend(anchor_index);
            members.sort_unstable();
            RotorGroup { anchor, anchor_index, members }
        })
        .collect();
    let frame: Vec<usize> = rotor_groups.iter().filter_map(|r| r.anchor_index).collect();
    let mut census = EdgeCensus::default();
    let mut rotation_edges = Vec::new();
    for e in g.edges() {
        let (a, b) = (&parts[e.u], &parts[e.v]);
        if a.local == b.local {
            census.lattice += 1;
        } else if a.anchor == b.anchor {
            census.rotated += 1;
        } else {
            if a.local.is_origin() || b.local.is_origin() {
                census.rotation_core_rotor += 1;
            } else {
                census.rotation_rotor_rotor += 1;
            }
            rotation_edges.push(e);
        }
    }
    Ok(Decomposition { rotation: rho.clone(), parts, core, rotor_groups, frame, rotation_edges, census })
}

/// Lattice coordinates of a point set on the unit lattice; `None` if any point is off it.
fn lattice_coords(g: &OddGraph) -> Result<Option<Vec<(i64, i64)>>, ReduceError> {
    let one = Rational::from_integer(1.into());
    g.vertices().iter().map(|p| is_lattice_point(p, &one)).collect::<Result<Option<Vec<_>>, _>>().map_err(Into::into)
}

fn lattice_norm(n: i64, m: i64) -> i64 {
    n * n + n * m + m * m
}

/// All rhombi with side `side` whose corners are among `points`, each as sorted corners.
pub fn detect_rhombi(points: &[(i64, i64)], side: i64) -> Vec<[(i64, i64); 4]> {
    let set: BTreeSet<(i64, i64)> = points.iter().copied().collect();
    let s2 = side * side;
    let mut out = BTreeSet::new();
    for &a in &set {
        let nbrs: Vec<(i64, i64)> =
            set.iter().copied().filter(|&b| lattice_norm(b.0 - a.0, b.1 - a.1) == s2).collect();
        for (i, &b) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                let (u, w) = ((b.0 - a.0, b.1 - a.1), (c.0 - a.0, c.1 - a.1));
                if u.0 * w.1 == u.1 * w.0 {
                    continue;
                }
                let d = (b.0 + c.0 - a.0, b.1 + c.1 - a.1);
                if set.contains(&d) {
                    let mut q = [a, b, c, d];
                    q.sort_unstable();
                    out.insert(q);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Rotor vertices outside `m2·H`, in lattice coordinates.
pub fn deletable_rotor_vertices(p: &ConstructionParams) -> Result<Vec<(i64, i64)>, ReduceError> {
    let r = build::rotor(p.m2, p.n2, build::Admissibility::Strict)?;
    let hub = OddGraph::new(build::make_h().vertices().iter().map(|v| v.scale(&Rational::from_integer(p.m2.into()))))?;
    let coords = lattice_coords(&r)?.expect("rotors lie on the lattice");
    Ok(r.vertices().iter().zip(coords).filter(|(v, _)| !hub.contains(v)).map(|(_, c)| c).collect())
}

/// Candidate deletions: single side-`m2` rhombi among the deletable rotor vertices and
/// unions of two disjoint ones (at most 8 vertices).
pub fn rotor_deletion_candidates(p: &ConstructionParams) -> Result<Vec<RotorDeletion>, ReduceError> {
    let pts = deletable_rotor_vertices(p)?;
    let rhombi = detect_rhombi(&pts, p.m2);
    let mut out: Vec<RotorDeletion> = rhombi.iter().map(|r| r.to_vec()).collect();
    for (i, a) in rhombi.iter().enumerate() {
        for b in &rhombi[i + 1..] {
            if a.iter().all(|x| !b.contains(x)) {
                let mut u: Vec<(i64, i64)> = a.iter().chain(b.iter()).copied().collect();
                u.sort_unstable();
                out.push(u);
            }
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct DeletionSearch {
    pub candidates: usize,
    pub verified: Vec<RotorDeletion>,
    pub sat: usize,
    pub indet: usize,
    pub skipped: usize,
}

/// Checks candidate deletions for `k`-UNSAT, largest first, until the budget runs out.
pub fn search_rotor_deletions(
    p: &ConstructionParams,
    k: usize,
    solver: &dyn Solver,
    budget: Duration,
) -> Result<DeletionSearch, ReduceError> {
    let candidates = rotor_deletion_candidates(p)?;
    let start = Instant::now();
    let mut report = DeletionSearch { candidates: candidates.len(), ..Default::default() };
    for cand in candidates {
        let left = budget.saturating_sub(start.elapsed());
        if left.is_zero() {
            report.skipped += 1;
            continue;
        }
        let g = build::g306_with_deletion(p, &cand)?;
        let inst = encode(&SimpleGraph::from_odd(&g), k, EncodeOptions::default())?;
        match solver.solve(&inst, left)? {
            SolveOutcome::Unsat => report.verified.push(cand),
            SolveOutcome::Sat(_) => report.sat += 1,
            SolveOutcome::Indet(_) => report.indet += 1,
        }
    }
    Ok(report)
}
