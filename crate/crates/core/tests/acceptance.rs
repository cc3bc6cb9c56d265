//! Acceptance run: one PASS/FAIL line per criterion. Known, documented
//! failures of the published data do not fail the run; any other outcome
//! does.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use algvar_core::arith::Budget;
use algvar_core::catalog::{builtin_catalog, builtin_degenerations, builtin_nondegenerations, check_entry, required_identities, Variety};
use algvar_core::degeneration::{verify_certificate, verify_nondegenerations, verify_witnesses, Resolver, Verdict};
use algvar_core::graph::{components, DegenerationGraph};

const SEED: u64 = 2024;

/// Criteria whose failure is a property of the published data, recorded in
/// the decisions ledger.
const KNOWN_FAILURES: [usize; 3] = [2, 4, 7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2} s (limit {} s)", e.as_secs_f64(), limit.as_secs()))
}

fn identities() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let catalog = builtin_catalog();
    for e in &catalog {
        let kinds = required_identities(e);
        let (holds, nilpotent) = if e.is_family() {
            let g = e.generic().expect("generic member");
            (kinds.iter().all(|&k| g.check_identity(k).holds()), g.is_nilpotent())
        } else {
            let a = e.at(None).expect("member");
            (kinds.iter().all(|&k| a.check_identity(k).holds()), a.is_nilpotent())
        };
        if !holds || (e.has_tag(Variety::L) && !nilpotent) {
            bad.push(e.name().to_string());
        }
    }
    let (fast, time) = within(t, Duration::from_secs(1));
    outcome(bad.is_empty() && fast, format!("{} entries, violations [{}], {time}", catalog.len(), bad.join(", ")))
}

fn derivations() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for e in &builtin_catalog() {
        for d in check_entry(e, SEED).der {
            cases += 1;
            if d.expected.is_some_and(|x| x != d.computed) && !d.case.ends_with("(random)") {
                bad.push(format!("{} {}: {} vs printed {}", e.name(), d.case, d.computed, d.expected.unwrap_or_default()));
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(5));
    outcome(bad.is_empty() && fast, format!("{cases} cases, mismatches [{}], {time}", bad.join("; ")))
}

fn witnesses(family: bool) -> Outcome {
    let t = Instant::now();
    let doc = builtin_degenerations();
    let outcomes = verify_witnesses(doc, &Resolver::builtin(), None);
    let mut total = 0;
    let mut bad = Vec::new();
    for (w, o) in doc.witnesses().zip(&outcomes) {
        if w.index.is_some() != family {
            continue;
        }
        total += 1;
        if o.verdict != Verdict::Verified {
            bad.push(format!("{} {}", o.id, o.verdict));
        }
    }
    let (fast, time) = within(t, Duration::from_secs(30));
    outcome(bad.is_empty() && (family || fast), format!("{} of {total} verified, not verified [{}], {time}", total - bad.len(), bad.join(", ")))
}

fn invariant_rows() -> Outcome {
    let ns = verify_nondegenerations(builtin_nondegenerations(), &Resolver::builtin(), &Budget::default(), SEED);
    let rows: Vec<_> = ns.iter().filter(|n| n.proof.starts_with("criterion")).collect();
    let bad: Vec<String> = rows.iter().filter(|n| n.verdict != Verdict::Verified).map(|n| format!("{} {}", n.id, n.verdict)).collect();
    outcome(!rows.is_empty() && bad.is_empty(), format!("{} of {} rows verified, not verified [{}]", rows.len() - bad.len(), rows.len(), bad.join(", ")))
}

fn certificates() -> Outcome {
    let r = Resolver::builtin();
    let lookup = |s: &str| r.get(s);
    let mut lines = Vec::new();
    let mut pass = true;
    let mut partial = Vec::new();
    let mut n = 0;
    for c in builtin_nondegenerations().certificates() {
        n += 1;
        match verify_certificate(c, &lookup, &Budget::default()) {
            Ok(rep) => {
                let structural = rep.stability.verdict == Verdict::Verified && rep.membership.verdict == Verdict::Verified;
                let avoided = rep.targets.iter().all(|t| t.verdict == Verdict::Verified);
                let must_avoid = ["L8", "N9", "L6"].contains(&c.source.name.as_str());
                if !structural || rep.targets.iter().any(|t| t.verdict == Verdict::Failure) || (must_avoid && !avoided) {
                    pass = false;
                    lines.push(format!("{} {}", rep.name, rep.verdict));
                } else if !avoided {
                    partial.push(rep.name.clone());
                }
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{}: {e}", c.name));
            }
        }
    }
    outcome(pass, format!("{n} certificates, failing [{}], partially verified [{}]", lines.join(", "), partial.join(", ")))
}

fn graph() -> DegenerationGraph {
    let r = Resolver::builtin();
    let ws = verify_witnesses(builtin_degenerations(), &r, None);
    let ns = verify_nondegenerations(builtin_nondegenerations(), &r, &Budget::default(), SEED);
    DegenerationGraph::build(&r, &ws, &ns).expect("consistent graph")
}

fn monotonicity(g: &DegenerationGraph) -> Outcome {
    let v = g.monotonicity_violations(&Budget::default());
    outcome(v.is_empty(), format!("{} violations [{}]", v.len(), v.join("; ")))
}

fn expected_components(v: Variety) -> (Vec<(&'static str, &'static str)>, Vec<&'static str>) {
    let n2 = "C4 N1C2 N1sq N1C N2C(beta) N3C N1 N2(gamma) N6 N7 N8 N9(alpha)";
    let n3 = "C4 N1C2 N1C N2C(beta) N3C N3(alpha) N4 N5 N10";
    match v {
        Variety::N => (vec![("N2(*)", n2), ("N3(*)", n3)], vec![]),
        Variety::Z => (
            vec![
                ("Z1", "C4 Z1C Z1 Z2 N1C2 N1C N2C(beta) N3C N2(1) N3(i/2) N8 N9(alpha)"),
                ("Z3", "C4 Z1C Z2 Z3 N1C2 N1sq N1C N2C(beta) N3C N2(0) N2(1) N3(i/3) N8 N9(alpha)"),
                ("Z5", "C4 Z4 Z5 N1C2 N1C N2C(beta) N3C N3(i) N6 N9(-1)"),
                ("N2(*)", n2),
                ("N3(*)", n3),
            ],
            vec!["Z1", "Z3", "Z5"],
        ),
        Variety::L => (
            vec![
                ("N3(*)", n3),
                ("L2", "C4 N1C2 N2C(0) N9(0) L1C L2 L4"),
                ("L5", "C4 N1C2 N1sq N1C N2C(beta) N3C N1 N2(gamma) N3(i) N6 N7 N8 N9(alpha) L1C L3 L4 L5 L6 L7 L8"),
                ("L11", "C4 N1C2 N1C N2C(beta) N3C N5 N6 N9(-1) N10 L1 L9 L10 L11 L12"),
            ],
            vec!["L2", "L5", "L11"],
        ),
    }
}

fn component_sets(g: &DegenerationGraph) -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for v in [Variety::N, Variety::Z, Variety::L] {
        let (want, rigid) = expected_components(v);
        let want: BTreeSet<(String, BTreeSet<String>)> =
            want.into_iter().map(|(g, m)| (g.to_string(), m.split(' ').map(str::to_string).collect())).collect();
        match components(g, v) {
            Ok(rep) => {
                let got: BTreeSet<(String, BTreeSet<String>)> =
                    rep.components.iter().map(|c| (c.generator.clone(), c.condensed.iter().cloned().collect())).collect();
                let ok = got == want && rep.rigid.iter().map(String::as_str).collect::<BTreeSet<_>>() == rigid.into_iter().collect();
                pass &= ok;
                detail.push(format!("{v}: {} components, rigid {{{}}}{}", rep.components.len(), rep.rigid.join(", "), if ok { "" } else { " MISMATCH" }));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("{v}: {e}"));
            }
        }
    }
    outcome(pass, detail.join("; "))
}

/// The property suites as built by cargo next to this binary.
fn property_binary() -> Option<PathBuf> {
    let me = std::env::current_exe().ok()?;
    let dir = me.parent()?;
    std::fs::read_dir(dir)
        .ok()?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("properties-") && !n.contains('.')))
        .max_by_key(|p| p.metadata().and_then(|m| m.modified()).ok())
}

fn property_suites() -> Outcome {
    let Some(bin) = property_binary() else {
        return outcome(false, "property suite binary not built (run `cargo test --test properties`)");
    };
    match Command::new(&bin).arg("--test-threads=4").output() {
        Ok(out) => {
            let text = String::from_utf8_lossy(&out.stdout);
            let summary = text.lines().find(|l| l.starts_with("test result")).unwrap_or("no summary").to_string();
            outcome(out.status.success(), summary)
        }
        Err(e) => outcome(false, format!("{}: {e}", bin.display())),
    }
}

fn main() -> ExitCode {
    let names = [
        "identities",
        "derivation dimensions",
        "non-family witnesses",
        "family witnesses",
        "invariant rows",
        "certificate rows",
        "monotonicity",
        "components",
        "property suites",
    ];
    let g = graph();
    let runs: [&dyn Fn() -> Outcome; 9] = [
        &identities,
        &derivations,
        &|| witnesses(false),
        &|| witnesses(true),
        &invariant_rows,
        &certificates,
        &|| monotonicity(&g),
        &|| component_sets(&g),
        &property_suites,
    ];
    let mut unexpected = 0;
    for (k, (name, run)) in names.iter().zip(runs).enumerate() {
        let n = k + 1;
        let o = run();
        let known = KNOWN_FAILURES.contains(&n);
        let note = match (o.pass, known) {
            (false, true) => " (known, see ledger)",
            (true, true) => " (expected a known failure)",
            _ => "",
        };
        if o.pass == known {
            unexpected += 1;
        }
        println!("criterion {n} {name}: {}{note} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
