//! Exact planar point sets and their odd-distance edges.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{rat, squarefree_decompose, FieldElement, FieldError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("incompatible rotation tags √{0} and √{1}")]
    IncompatibleTags(u64, u64),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("invalid rotation: {0}")]
    InvalidRotation(String),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("lattice scale must be nonzero")]
    ZeroScale,
}

fn join_tags(x: u64, y: u64) -> Result<u64, GeomError> {
    match (x, y) {
        (1, d) | (d, 1) => Ok(d),
        (a, b) if a == b => Ok(a),
        (a, b) => Err(GeomError::IncompatibleTags(a, b)),
    }
}

/// A complex number with field-element parts; used as a scalar multiplier.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Complex {
    pub re: FieldElement,
    pub im: FieldElement,
}

impl Complex {
    pub fn new(re: FieldElement, im: FieldElement) -> Result<Self, GeomError> {
        join_tags(re.tag(), im.tag())?;
        Ok(Complex { re, im })
    }

    pub fn real(re: FieldElement) -> Self {
        Complex { re, im: FieldElement::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(FieldElement::from_int(n))
    }

    pub fn i() -> Self {
        Complex { re: FieldElement::zero(), im: FieldElement::one() }
    }

    pub fn tag(&self) -> u64 {
        self.re.tag().max(self.im.tag())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn checked_mul(&self, o: &Complex) -> Result<Complex, GeomError> {
        let re = self.re.checked_mul(&o.re)?.checked_sub(&self.im.checked_mul(&o.im)?)?;
        let im = self.re.checked_mul(&o.im)?.checked_add(&self.im.checked_mul(&o.re)?)?;
        Ok(Complex { re, im })
    }

    pub fn checked_add(&self, o: &Complex) -> Result<Complex, GeomError> {
        Ok(Complex { re: self.re.checked_add(&o.re)?, im: self.im.checked_add(&o.im)? })
    }

    pub fn neg(&self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }

    pub fn norm_sq(&self) -> FieldElement {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

/// An exact unit complex number `cos + i·sin`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rotation {
    cos: FieldElement,
    sin: FieldElement,
    provenance: Option<(u64, u64, u64)>,
}

impl Rotation {
    pub fn new(cos: FieldElement, sin: FieldElement) -> Result<Self, GeomError> {
        join_tags(cos.tag(), sin.tag())?;
        let norm = cos.checked_mul(&cos)?.checked_add(&sin.checked_mul(&sin)?)?;
        if norm != FieldElement::one() {
            return Err(GeomError::InvalidRotation(format!("cos² + sin² = {norm}, expected 1")));
        }
        Ok(Rotation { cos, sin, provenance: None })
    }

    pub fn identity() -> Self {
        Rotation { cos: FieldElement::one(), sin: FieldElement::zero(), provenance: None }
    }

    /// Quarter turn `i`.
    pub fn quarter() -> Self {
        Rotation { cos: FieldElement::zero(), sin: FieldElement::one(), provenance: None }
    }

    /// The rotation whose angle is opposite the side `r` of a triangle with sides `m1`, `m2`, `r`:
    /// `cos = (m1² + m2² − r²) / (2·m1·m2)`, so a point at distance `m2` rotated by it
    /// lands at distance `r` from the point at distance `m1` in the original direction.
    pub fn from_triangle(m1: u64, m2: u64, r: u64) -> Result<Self, GeomError> {
        if m1 == 0 || m2 == 0 || r <= m1.abs_diff(m2) || r >= m1 + m2 {
            return Err(GeomError::InvalidRotation(format!(
                "need |m1 − m2| < r < m1 + m2, got m1={m1}, m2={m2}, r={r}"
            )));
        }
        let (m1, m2, r) = (m1 as i128, m2 as i128, r as i128);
        let den = 2 * m1 * m2;
        let num = m1 * m1 + m2 * m2 - r * r;
        let delta = den * den - num * num;
        let delta = u64::try_from(delta).map_err(|_| FieldError::Overflow)?;
        let (f, q) = squarefree_decompose(delta)?;
        let den = BigInt::from(den);
        let cos = FieldElement::from_rational(Rational::new(BigInt::from(num), den.clone()));
        let sin = FieldElement::sqrt_int(q)?.scale(&Rational::new(BigInt::from(f), den));
        let mut rot = Rotation::new(cos, sin)?;
        rot.provenance = Some((m1 as u64, m2 as u64, r as u64));
        Ok(rot)
    }

    pub fn cos(&self) -> &FieldElement {
        &self.cos
    }

    pub fn sin(&self) -> &FieldElement {
        &self.sin
    }

    pub fn provenance(&self) -> Option<(u64, u64, u64)> {
        self.provenance
    }

    pub fn tag(&self) -> u64 {
        self.cos.tag().max(self.sin.tag())
    }

    pub fn as_complex(&self) -> Complex {
        Complex { re: self.cos.clone(), im: self.sin.clone() }
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { cos: self.cos.clone(), sin: -&self.sin, provenance: None }
    }

    pub fn compose(&self, other: &Rotation) -> Result<Rotation, GeomError> {
        let c = self.as_complex().checked_mul(&other.as_complex())?;
        Ok(Rotation { cos: c.re, sin: c.im, provenance: None })
    }

    pub fn pow(&self, n: i32) -> Result<Rotation, GeomError> {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Rotation::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: FieldElement, y: FieldElement) -> Result<Self, GeomError> {
        join_tags(x.tag(), y.tag())?;
        Ok(Point { x, y })
    }

    pub fn origin() -> Self {
        Point { x: FieldElement::zero(), y: FieldElement::zero() }
    }

    pub fn rational(x: Rational, y: Rational) -> Self {
        Point { x: FieldElement::from_rational(x), y: FieldElement::from_rational(y) }
    }

    /// `n·(1, 0) + m·(1/2, √3/2)`.
    pub fn lattice(n: i64, m: i64) -> Self {
        let half = Rational::new(1.into(), 2.into());
        Point {
            x: FieldElement::from_rational(rat(n) + rat(m) * &half),
            y: FieldElement::sqrt3_times(rat(m) * &half),
        }
    }

    pub fn tag(&self) -> u64 {
        self.x.tag().max(self.y.tag())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn checked_add(&self, o: &Point) -> Result<Point, GeomError> {
        Ok(Point { x: self.x.checked_add(&o.x)?, y: self.y.checked_add(&o.y)? })
    }

    pub fn checked_sub(&self, o: &Point) -> Result<Point, GeomError> {
        Ok(Point { x: self.x.checked_sub(&o.x)?, y: self.y.checked_sub(&o.y)? })
    }

    pub fn neg(&self) -> Point {
        Point { x: -&self.x, y: -&self.y }
    }

    pub fn norm_sq(&self) -> FieldElement {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    pub fn dist_sq(&self, o: &Point) -> Result<FieldElement, GeomError> {
        Ok(self.checked_sub(o)?.norm_sq())
    }

    /// Complex multiplication `(x + iy)·z`.
    pub fn mul_complex(&self, z: &Complex) -> Result<Point, GeomError> {
        let c = Complex { re: self.x.clone(), im: self.y.clone() }.checked_mul(z)?;
        Ok(Point { x: c.re, y: c.im })
    }

    pub fn rotate(&self, rot: &Rotation) -> Result<Point, GeomError> {
        self.mul_complex(&rot.as_complex())
    }

    pub fn scale(&self, q: &Rational) -> Point {
        Point { x: self.x.scale(q), y: self.y.scale(q) }
    }

    /// Part of the point free of the rotation irrationality.
    pub fn tag_free_part(&self) -> Point {
        Point { x: self.x.tag_free_part(), y: self.y.tag_free_part() }
    }

    pub fn tagged_part(&self) -> Point {
        Point { x: self.x.tagged_part(), y: self.y.tagged_part() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// Finds `(n, m)` with `p = scale·(n·(1,0) + m·(1/2, √3/2))`, if `p` lies on that lattice.
pub fn is_lattice_point(p: &Point, scale: &Rational) -> Result<Option<(i64, i64)>, GeomError> {
    if scale.is_zero() {
        return Err(GeomError::ZeroScale);
    }
    if p.tag() != 1 {
        return Ok(None);
    }
    let [xa, xb, _, _] = p.x.coeffs();
    let [ya, yb, _, _] = p.y.coeffs();
    if !xb.is_zero() || !ya.is_zero() {
        return Ok(None);
    }
    let m = yb * rat(2) / scale;
    let n = xa / scale - &m / rat(2);
    if !m.is_integer() || !n.is_integer() {
        return Ok(None);
    }
    Ok(n.to_integer().to_i64().zip(m.to_integer().to_i64()))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: u64,
}

/// A planar point set; edges join points at odd integer distance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OddGraph {
    d: u64,
    vertices: Vec<Point>,
    allowed_lengths: Option<BTreeSet<u64>>,
}

#[derive(Clone, Debug)]
pub enum Transform {
    Scale(Complex),
    Rotate(Rotation),
    Translate(Point),
    Negate,
}

impl OddGraph {
    /// Deduplicates and sorts the points into canonical order.
    pub fn new(points: impl IntoIterator<Item = Point>) -> Result<Self, GeomError> {
        let mut vertices: Vec<Point> = points.into_iter().collect();
        let mut d = 1;
        for p in &vertices {
            d = join_tags(d, p.tag())?;
        }
        vertices.sort();
        vertices.dedup();
        Ok(OddGraph { d, vertices, allowed_lengths: None })
    }

    pub fn single(p: Point) -> Self {
        OddGraph { d: p.tag(), vertices: vec![p], allowed_lengths: None }
    }

    pub fn with_allowed_lengths(mut self, lengths: Option<BTreeSet<u64>>) -> Self {
        self.allowed_lengths = lengths;
        self
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn allowed_lengths(&self) -> Option<&BTreeSet<u64>> {
        self.allowed_lengths.as_ref()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset_of(&self, other: &OddGraph) -> bool {
        self.vertices.iter().all(|p| other.contains(p))
    }

    fn merged_lengths(&self, other: &OddGraph) -> Option<BTreeSet<u64>> {
        match (&self.allowed_lengths, &other.allowed_lengths) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => Some(a.union(b).copied().collect()),
        }
    }

    /// Induced subgraph on the given vertex indices.
    pub fn induced(&self, keep: &[usize]) -> OddGraph {
        let mut idx = keep.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let vertices: Vec<Point> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let d = vertices.iter().fold(1, |acc, p| acc.max(p.tag()));
        OddGraph { d, vertices, allowed_lengths: self.allowed_lengths.clone() }
    }

    pub fn without(&self, remove: &[usize]) -> OddGraph {
        let drop: HashSet<usize> = remove.iter().copied().collect();
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        let mut g = self.induced(&keep);
        // deletions never change the ambient field
        g.d = self.d;
        g
    }

    /// `{a + b : a ∈ self, b ∈ other}`.
    pub fn minkowski(&self, other: &OddGraph) -> Result<OddGraph, GeomError> {
        join_tags(self.d, other.d)?;
        let mut set: HashSet<Point> = HashSet::with_capacity(self.len() * other.len());
        for a in &self.vertices {
            for b in &other.vertices {
                set.insert(a.checked_add(b)?);
            }
        }
        let mut g = OddGraph::new(set)?;
        g.allowed_lengths = self.merged_lengths(other);
        Ok(g)
    }

    /// Minkowski power `self ⊕ … ⊕ self` (`n` copies); `n = 0` gives the origin.
    pub fn minkowski_pow(&self, n: u32) -> Result<OddGraph, GeomError> {
        let mut acc = OddGraph::single(Point::origin());
        for _ in 0..n {
            acc = acc.minkowski(self)?;
        }
        acc.allowed_lengths = self.allowed_lengths.clone();
        Ok(acc)
    }

    pub fn union(&self, other: &OddGraph) -> Result<OddGraph, GeomError> {
        join_tags(self.d, other.d)?;
        let mut g = OddGraph::new(self.vertices.iter().chain(other.vertices.iter()).cloned())?;
        g.allowed_lengths = self.merged_lengths(other);
        Ok(g)
    }

    pub fn transform(&self, op: &Transform) -> Result<OddGraph, GeomError> {
        if let Transform::Scale(z) = op {
            if z.is_zero() {
                return Err(GeomError::ZeroScalar);
            }
        }
        let map = |p: &Point| match op {
            Transform::Scale(z) => p.mul_complex(z),
            Transform::Rotate(rot) => p.rotate(rot),
            Transform::Translate(t) => p.checked_add(t),
            Transform::Negate => Ok(p.neg()),
        };
        let pts = self.vertices.iter().map(map).collect::<Result<Vec<_>, _>>()?;
        Ok(OddGraph::new(pts)?.with_allowed_lengths(self.allowed_lengths.clone()))
    }

    pub fn scale(&self, z: &Complex) -> Result<OddGraph, GeomError> {
        self.transform(&Transform::Scale(z.clone()))
    }

    pub fn rotate(&self, rot: &Rotation) -> Result<OddGraph, GeomError> {
        self.transform(&Transform::Rotate(rot.clone()))
    }

    pub fn translate(&self, t: &Point) -> Result<OddGraph, GeomError> {
        self.transform(&Transform::Translate(t.clone()))
    }

    pub fn negate(&self) -> OddGraph {
        self.transform(&Transform::Negate).expect("negation is total")
    }

    /// Keeps vertices with `|v| ≤ radius` (boundary inclusive), decided exactly.
    pub fn trim(&self, radius: &Rational) -> Result<OddGraph, GeomError> {
        if !radius.is_positive() {
            return Err(GeomError::NonPositiveRadius);
        }
        let r2 = FieldElement::from_rational(radius * radius);
        let mut keep = Vec::new();
        for (i, p) in self.vertices.iter().enumerate() {
            if r2.checked_sub(&p.norm_sq())?.sign() >= 0 {
                keep.push(i);
            }
        }
        let mut g = self.induced(&keep);
        g.d = if g.is_empty() { 1 } else { g.d };
        Ok(g)
    }

    fn float_coords(&self) -> (Vec<(f64, f64)>, f64) {
        let coords: Vec<(f64, f64)> = self.vertices.iter().map(Point::to_f64).collect();
        let scale = coords.iter().fold(1.0f64, |m, &(x, y)| m.max(x.abs()).max(y.abs()));
        (coords, scale)
    }

    /// All odd-integer-distance pairs, filtered by `allowed_lengths`, ordered by `(u, v)`.
    pub fn edges(&self) -> Vec<Edge> {
        self.detect_edges(true)
    }

    /// Edge detection. With `prefilter`, a pair is skipped only when its floating-point
    /// squared distance is farther from every odd square than the rounding error bound
    /// allows; every surviving pair is decided exactly.
    pub fn detect_edges(&self, prefilter: bool) -> Vec<Edge> {
        let (coords, scale) = self.float_coords();
        // coordinate error is ~1e-15·scale, so squared-distance error is ~1e-14·scale²
        let tol = 1e-9 * (1.0 + scale * scale);
        let allowed = self.allowed_lengths.as_ref();
        let rows: Vec<Vec<Edge>> = (0..self.len())
            .into_par_iter()
            .map(|u| {
                let mut row = Vec::new();
                for v in u + 1..self.len() {
                    if prefilter && !near_odd_square(coords[u], coords[v], tol, allowed) {
                        continue;
                    }
                    let d2 = self.vertices[u].dist_sq(&self.vertices[v]).expect("graph tags are uniform");
                    if let Ok(Some(s)) = d2.as_odd_square() {
                        if allowed.is_none_or(|set| set.contains(&s)) {
                            row.push(Edge { u, v, length: s });
                        }
                    }
                }
                row
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Vertex pairs at exactly the given (not necessarily integer) distance.
    pub fn pairs_at_distance(&self, dist: &Rational) -> Vec<(usize, usize)> {
        let (coords, scale) = self.float_coords();
        let tol = 1e-9 * (1.0 + scale * scale);
        let target = dist.to_f64().unwrap_or(f64::NAN);
        let target2 = target * target;
        let exact = FieldElement::from_rational(dist * dist);
        let rows: Vec<Vec<(usize, usize)>> = (0..self.len())
            .into_par_iter()
            .map(|u| {
                let (ux, uy) = coords[u];
                (u + 1..self.len())
                    .filter(|&v| {
                        let (vx, vy) = coords[v];
                        let d2 = (ux - vx).powi(2) + (uy - vy).powi(2);
                        (d2 - target2).abs() <= tol
                            && self.vertices[u].dist_sq(&self.vertices[v]).ok().as_ref() == Some(&exact)
                    })
                    .map(|v| (u, v))
                    .collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Histogram of edge lengths.
    pub fn length_histogram(edges: &[Edge]) -> std::collections::BTreeMap<u64, usize> {
        let mut h = std::collections::BTreeMap::new();
        for e in edges {
            *h.entry(e.length).or_insert(0) += 1;
        }
        h
    }
}

fn near_odd_square(p: (f64, f64), q: (f64, f64), tol: f64, allowed: Option<&BTreeSet<u64>>) -> bool {
    let d2 = (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2);
    let root = d2.sqrt();
    let lo = root.floor().max(1.0) as u64;
    (lo.saturating_sub(1)..=lo + 2).any(|s| {
        s % 2 == 1
            && allowed.is_none_or(|set| set.contains(&s))
            && (d2 - (s as f64) * (s as f64)).abs() <= tol
    })
}
