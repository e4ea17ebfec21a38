//! A DIMACS SAT solver front end on varisat.
//!
//! Prints `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines and exits with 10 or 20.
//! `--proof FILE` writes a DRAT refutation; `--core FILE` writes the 1-based indices of an
//! unsatisfiable subset of clauses, one per line.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use odg_core::chroma::parse_dimacs;
use varisat::{ExtendFormula, Lit, ProofFormat, Solver};

#[derive(Parser)]
#[command(name = "odg-sat", about = "Solve a DIMACS CNF file")]
struct Args {
    cnf: PathBuf,
    /// Write a DRAT proof when the formula is unsatisfiable.
    #[arg(long)]
    proof: Option<PathBuf>,
    /// Write an unsatisfiable core as clause indices.
    #[arg(long)]
    core: Option<PathBuf>,
}

fn lit(l: i64) -> Lit {
    Lit::from_dimacs(l as isize)
}

fn print_model(vars: usize, model: &[Lit]) -> Result<()> {
    let mut value = vec![false; vars + 1];
    for l in model {
        let v = l.var().to_dimacs() as usize;
        if v <= vars {
            value[v] = l.is_positive();
        }
    }
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    writeln!(out, "s SATISFIABLE")?;
    let lits: Vec<String> = (1..=vars).map(|v| if value[v] { v.to_string() } else { format!("-{v}") }).collect();
    for chunk in lits.chunks(20) {
        writeln!(out, "v {}", chunk.join(" "))?;
    }
    writeln!(out, "v 0")?;
    Ok(())
}

/// Clause indices of a failed-assumption core, using one selector per clause.
fn core_indices(vars: usize, clauses: &[Vec<i64>]) -> Result<Vec<usize>> {
    let mut solver = Solver::new();
    let selectors: Vec<Lit> = (0..clauses.len()).map(|i| lit((vars + 1 + i) as i64)).collect();
    for (c, &s) in clauses.iter().zip(&selectors) {
        let mut cl: Vec<Lit> = c.iter().map(|&l| lit(l)).collect();
        cl.push(!s);
        solver.add_clause(&cl);
    }
    solver.assume(&selectors);
    anyhow::ensure!(!solver.solve()?, "formula became satisfiable under selectors");
    let failed: BTreeSet<Lit> = solver.failed_core().unwrap_or(&[]).iter().copied().collect();
    Ok(selectors.iter().enumerate().filter(|(_, s)| failed.contains(s)).map(|(i, _)| i + 1).collect())
}

fn run(args: Args) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.cnf).with_context(|| format!("reading {}", args.cnf.display()))?;
    let (vars, clauses) = parse_dimacs(&text)?;
    let mut solver = Solver::new();
    if let Some(p) = &args.proof {
        let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        solver.write_proof(BufWriter::new(f), ProofFormat::Drat);
    }
    for c in &clauses {
        let cl: Vec<Lit> = c.iter().map(|&l| lit(l)).collect();
        solver.add_clause(&cl);
    }
    let sat = solver.solve()?;
    if args.proof.is_some() {
        solver.close_proof()?;
    }
    if sat {
        print_model(vars, &solver.model().unwrap_or_default())?;
        return Ok(ExitCode::from(10));
    }
    if let Some(p) = &args.core {
        let idx = core_indices(vars, &clauses)?;
        let body: String = idx.iter().map(|i| format!("{i}\n")).collect();
        fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    println!("s UNSATISFIABLE");
    Ok(ExitCode::from(20))
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("odg-sat: {e:#}");
            println!("s UNKNOWN");
            ExitCode::from(1)
        }
    }
}
