//! `algvar`: verification of the degeneration data of the four-dimensional
//! Zinbiel and nilpotent Leibniz varieties.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use algvar_core::arith::Budget;
use algvar_core::catalog::{
    builtin_catalog, builtin_degenerations, builtin_nondegenerations, builtin_signatures, check_entry, parse_with, CatalogEntry, Document, EntryCheck, Signature, Variety,
};
use algvar_core::degeneration::{
    soundness_conflicts, verify_nondegenerations, verify_witnesses, NondegOutcome, Resolver, Verdict, WitnessOutcome,
};
use algvar_core::graph::{components, emit_dot, ComponentReport, DegenerationGraph};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "algvar", version, about = "Exact verification of degenerations of 4-dimensional Zinbiel and nilpotent Leibniz algebras")]
struct Cli {
    /// Gröbner step budget per decision.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    /// Seed for random-point checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Treat inconclusive results as failures.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarietyArg {
    #[value(name = "N", alias = "n")]
    N,
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "L", alias = "l")]
    L,
}

impl From<VarietyArg> for Variety {
    fn from(v: VarietyArg) -> Self {
        match v {
            VarietyArg::N => Variety::N,
            VarietyArg::Z => Variety::Z,
            VarietyArg::L => Variety::L,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify builtin data.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Write the graph of primary degenerations in DOT format.
    Graph {
        #[arg(long)]
        dot: PathBuf,
        #[arg(long, value_enum)]
        variety: Option<VarietyArg>,
    },
    /// Irreducible components and rigid algebras of a variety.
    Components {
        #[arg(long, value_enum)]
        variety: VarietyArg,
    },
    /// Verify everything in user-supplied files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Identities and derivation dimensions of the catalog.
    Table1,
    /// Degeneration witnesses.
    Degenerations {
        /// Only the witness with this id, e.g. `Z5->Z4`.
        #[arg(long)]
        only: Option<String>,
    },
    /// Non-degeneration claims and certificates.
    Nondegenerations,
}

#[derive(Default, Serialize)]
struct Report {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    algebras: Vec<EntryCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    witnesses: Vec<WitnessOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    nondegenerations: Vec<NondegOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    conflicts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<ComponentReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    timings_ms: Vec<(String, u128)>,
}

impl Report {
    fn verdicts(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.algebras
            .iter()
            .map(|a| a.verdict)
            .chain(self.witnesses.iter().map(|w| w.verdict))
            .chain(self.nondegenerations.iter().map(|n| n.verdict))
            .chain(self.conflicts.iter().map(|_| Verdict::Failure))
    }

    fn timed<T>(&mut self, what: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms.push((what.into(), t.elapsed().as_millis()));
        out
    }

    fn print_text(&self) {
        for a in &self.algebras {
            let der: Vec<String> = a
                .der
                .iter()
                .map(|d| match d.expected {
                    Some(e) if e != d.computed => format!("{}: {} (expected {e})", d.case, d.computed),
                    _ => format!("{}: {}", d.case, d.computed),
                })
                .collect();
            println!("{:<12} {:<12} der [{}]", a.name, a.verdict.to_string(), der.join(", "));
            for f in &a.identity_failures {
                println!("    {f}");
            }
        }
        for w in &self.witnesses {
            println!("{:<28} {}", w.id, w.verdict);
            if let Some(e) = &w.error {
                println!("    {e}");
            }
            for f in &w.failures {
                println!("    {f:?}");
            }
        }
        for n in &self.nondegenerations {
            println!("{:<28} {:<12} {} ({})", n.id, n.verdict.to_string(), n.target, n.proof);
            if n.verdict != Verdict::Verified {
                for d in &n.detail {
                    println!("    {d}");
                }
            }
        }
        for c in &self.conflicts {
            println!("conflict: {c}");
        }
        if let Some(r) = &self.components {
            for c in &r.components {
                println!("{}: {}", c.generator, c.condensed.join(", "));
            }
            println!("rigid: {{{}}}", r.rigid.join(", "));
        }
        for w in &self.warnings {
            println!("warning: {w}");
        }
        let count = |v| self.verdicts().filter(|&x| x == v).count();
        println!(
            "summary: {} verified, {} failed, {} inconclusive ({})",
            count(Verdict::Verified),
            count(Verdict::Failure),
            count(Verdict::Inconclusive),
            self.timings_ms.iter().map(|(w, t)| format!("{w} {t} ms")).collect::<Vec<_>>().join(", ")
        );
    }
}

fn full_graph(resolver: &Resolver, budget: &Budget, seed: u64, report: &mut Report) -> Result<DegenerationGraph> {
    let ws = report.timed("witnesses", || verify_witnesses(builtin_degenerations(), resolver, None));
    let ns = report.timed("non-degenerations", || verify_nondegenerations(builtin_nondegenerations(), resolver, budget, seed));
    report.warnings.extend(ws.iter().filter(|w| w.verdict != Verdict::Verified).map(|w| format!("witness {} {} and is left out", w.id, w.verdict)));
    report.timed("graph", || DegenerationGraph::build(resolver, &ws, &ns)).map_err(|e| anyhow!(e))
}

fn check_files(files: &[PathBuf], budget: &Budget, seed: u64, report: &mut Report) -> Result<()> {
    let mut doc = Document::default();
    let mut known = builtin_signatures();
    for f in files {
        let src = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
        let d = parse_with(&src, &known).map_err(|e| anyhow!("{}: {e}", f.display()))?;
        known.extend(d.algebras().map(|a| (a.name.clone(), Signature { dim: a.dim, params: a.params.len() })));
        doc.extend(d);
    }
    let resolver = Resolver::with(&doc);
    let entries: Vec<CatalogEntry> = doc.algebras().map(|d| CatalogEntry { def: d.clone() }).collect();
    report.algebras = report.timed("algebras", || entries.iter().map(|e| check_entry(e, seed)).collect());
    report.witnesses = report.timed("witnesses", || verify_witnesses(&doc, &resolver, None));
    report.nondegenerations = report.timed("non-degenerations", || verify_nondegenerations(&doc, &resolver, budget, seed));
    report.conflicts = soundness_conflicts(&report.witnesses, &report.nondegenerations, &resolver, seed);
    Ok(())
}

fn run(cli: &Cli, report: &mut Report) -> Result<()> {
    let budget = cli.budget.map(Budget::steps).unwrap_or_default();
    let resolver = Resolver::builtin();
    match &cli.command {
        Command::Verify { what: VerifyWhat::Table1 } => {
            report.algebras = report.timed("table1", || builtin_catalog().iter().map(|e| check_entry(e, cli.seed)).collect());
        }
        Command::Verify { what: VerifyWhat::Degenerations { only } } => {
            report.witnesses = report.timed("witnesses", || verify_witnesses(builtin_degenerations(), &resolver, only.as_deref()));
            if only.is_some() && report.witnesses.is_empty() {
                bail!("no witness with id `{}`", only.as_deref().unwrap_or_default());
            }
        }
        Command::Verify { what: VerifyWhat::Nondegenerations } => {
            report.nondegenerations =
                report.timed("non-degenerations", || verify_nondegenerations(builtin_nondegenerations(), &resolver, &budget, cli.seed));
        }
        Command::Graph { dot, variety } => {
            let g = full_graph(&resolver, &budget, cli.seed, report)?;
            let v = variety.map(Variety::from);
            for v in v.map(|v| vec![v]).unwrap_or_else(|| vec![Variety::N, Variety::Z, Variety::L]) {
                if let Err(e) = components(&g, v) {
                    report.warnings.push(format!("{v}: {e}"));
                }
            }
            std::fs::write(dot, emit_dot(&g, v)).with_context(|| format!("writing {}", dot.display()))?;
        }
        Command::Components { variety } => {
            let g = full_graph(&resolver, &budget, cli.seed, report)?;
            report.components = Some(components(&g, (*variety).into()).map_err(|e| anyhow!(e))?);
        }
        Command::Check { files } => check_files(files, &budget, cli.seed, report)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = Report::default();
    let result = run(&cli, &mut report);
    match cli.report {
        Format::Text => report.print_text(),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    let bad = report.verdicts().any(|v| v == Verdict::Failure || (cli.strict && v == Verdict::Inconclusive));
    if bad {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
