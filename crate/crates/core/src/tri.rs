//! Integer-distance lattice triangles with one even, non-oblique edge `m` and two odd
//! edges `n` (along a lattice direction) and `s` (oblique).
//!
//! The lengths satisfy `s² = m² − m·n + n²` with `n` signed. Writing `s − l = 2t` for the
//! half-base offset `l = n − m/2` gives `t·(s − t) = 12·(m/8)²`, so every solution comes
//! from a divisor `t` of `12·(m/8)²` with `s = 12·(m/8)²/t + t` odd.

use num_integer::Roots;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("m = {0} is not a positive multiple of 8")]
    NotMultipleOf8(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleParam {
    pub m: u64,
    pub t: u64,
    pub s: u64,
    pub l: i64,
    pub n_plus: i64,
    pub n_minus: i64,
    /// Second oblique length `√(n² − 2mn + 4m²)` for `n_plus`, when it is an odd integer.
    pub s2_plus: Option<u64>,
    pub s2_minus: Option<u64>,
}

impl TriangleParam {
    pub fn ns(&self) -> [i64; 2] {
        [self.n_minus, self.n_plus]
    }
}

fn check_m(m: u64) -> Result<(), TriError> {
    if m == 0 || !m.is_multiple_of(8) {
        return Err(TriError::NotMultipleOf8(m));
    }
    Ok(())
}

fn odd_sqrt(v: i128) -> Option<u64> {
    if v <= 0 {
        return None;
    }
    let r = v.sqrt();
    (r * r == v && r % 2 == 1).then_some(r as u64)
}

/// `√(n² − 2mn + 4m²)` when it is an odd integer.
pub fn second_oblique(m: u64, n: i64) -> Option<u64> {
    let (m, n) = (m as i128, n as i128);
    odd_sqrt(n * n - 2 * m * n + 4 * m * m)
}

/// All triangles for the even edge `m`, one per distinct `s`, sorted by `s`.
pub fn enumerate(m: u64) -> Result<Vec<TriangleParam>, TriError> {
    check_m(m)?;
    let k = m / 8;
    let big = 12 * k * k;
    let mut out = Vec::new();
    let mut t = 1;
    // t and big/t give the same s with l negated; keep the smaller t
    while t * t < big {
        if big.is_multiple_of(t) {
            let s = big / t + t;
            if s % 2 == 1 {
                let l = (big / t - t) as i64;
                let half = (m / 2) as i64;
                let (n_plus, n_minus) = (half + l, half - l);
                out.push(TriangleParam {
                    m,
                    t,
                    s,
                    l,
                    n_plus,
                    n_minus,
                    s2_plus: second_oblique(m, n_plus),
                    s2_minus: second_oblique(m, n_minus),
                });
            }
        }
        t += 1;
    }
    out.sort_by_key(|p| p.s);
    Ok(out)
}

/// Smallest odd integer `≥ √(3m²/4 + 1)`.
pub fn min_s(m: u64) -> Result<u64, TriError> {
    check_m(m)?;
    let v = 3 * m * m / 4 + 1;
    let mut r = v.sqrt();
    if r * r < v {
        r += 1;
    }
    Ok(if r.is_multiple_of(2) { r + 1 } else { r })
}

/// Sorted signed `n` values admissible with even edge `m`.
pub fn admissible_ns(m: u64) -> Result<Vec<i64>, TriError> {
    let mut ns: Vec<i64> = enumerate(m)?.iter().flat_map(|p| p.ns()).collect();
    ns.sort_unstable();
    Ok(ns)
}

/// The triangle realizing `(m, n)`, if any.
pub fn find(m: u64, n: i64) -> Result<Option<TriangleParam>, TriError> {
    Ok(enumerate(m)?.into_iter().find(|p| p.n_plus == n || p.n_minus == n))
}

/// Scans odd `n` in `[−bound, bound]` for `m² − mn + n²` an odd perfect square.
///
/// Independent of [`enumerate`]; a bound of `12(m/8)² + m/2` covers every solution.
pub fn brute_force(m: u64, bound: i64) -> Vec<(i64, u64)> {
    let mi = m as i128;
    (-bound..=bound)
        .filter(|n| n % 2 != 0)
        .filter_map(|n| {
            let ni = n as i128;
            odd_sqrt(mi * mi - mi * ni + ni * ni).map(|s| (n, s))
        })
        .collect()
}

pub fn brute_force_bound(m: u64) -> i64 {
    let k = (m / 8) as i64;
    12 * k * k + (m / 2) as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub t: u64,
    pub s: u64,
    pub n_plus: i64,
    pub n_minus: i64,
    pub min_s_achieved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u64,
    pub entries: Vec<TableEntry>,
}

impl TableRow {
    pub fn ns(&self) -> Vec<i64> {
        let mut ns: Vec<i64> = self.entries.iter().flat_map(|e| [e.n_minus, e.n_plus]).collect();
        ns.sort_unstable();
        ns
    }

    pub fn ss(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.s).collect()
    }

    pub fn underlined(&self) -> Option<u64> {
        self.entries.iter().find(|e| e.min_s_achieved).map(|e| e.s)
    }
}

fn row(m: u64) -> TableRow {
    let floor = min_s(m).expect("rows use multiples of 8");
    let entries = enumerate(m)
        .expect("rows use multiples of 8")
        .into_iter()
        .map(|p| TableEntry { t: p.t, s: p.s, n_plus: p.n_plus, n_minus: p.n_minus, min_s_achieved: p.s == floor })
        .collect();
    TableRow { m, entries }
}

/// Rows for `m = 8, 16, …` strictly below `n_limit` (the `(m, n)` table) and up to
/// `s_limit` inclusive (the `(m, s)` table).
pub fn render_tables(n_limit: u64, s_limit: u64) -> (Vec<TableRow>, Vec<TableRow>) {
    let t1 = (8..n_limit).step_by(8).map(row).collect();
    let t2 = (8..=s_limit).step_by(8).map(row).collect();
    (t1, t2)
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Plain-text `m | n…` table.
pub fn format_n_table(rows: &[TableRow]) -> String {
    let mut out = String::from("   m | n\n-----+----------------\n");
    for r in rows {
        out.push_str(&format!("{:>4} | {}\n", r.m, join(r.ns())));
    }
    out
}

/// Plain-text `m | s…` table; the achieved lower bound is wrapped in underscores.
pub fn format_s_table(rows: &[TableRow]) -> String {
    let mut out = String::from("   m | s\n-----+----------------\n");
    for r in rows {
        let cells = r.entries.iter().map(|e| if e.min_s_achieved { format!("_{}_", e.s) } else { e.s.to_string() });
        out.push_str(&format!("{:>4} | {}\n", r.m, join(cells)));
    }
    out
}
