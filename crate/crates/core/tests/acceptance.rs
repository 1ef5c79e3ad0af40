use std::time::{Duration, Instant};

use nct_core::verifier::{report_render, run_suite, Format, Suite, SuiteConfig};

struct Criterion {
    id: usize,
    title: &'static str,
    suite: Suite,
    ns: &'static [usize],
    limit: Duration,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "kernel laws", suite: Suite::KernelLaws, ns: &[1, 2, 3], limit: Duration::from_secs(10) },
    Criterion { id: 2, title: "pushout calculus", suite: Suite::PushoutCalculus, ns: &[1, 2, 3], limit: Duration::from_secs(30) },
    Criterion { id: 3, title: "fiber-product decomposition", suite: Suite::S00Iso, ns: &[1, 2, 3], limit: Duration::from_secs(300) },
    Criterion { id: 4, title: "gaunt locality", suite: Suite::GauntLocality, ns: &[1, 2, 3], limit: Duration::from_secs(300) },
    Criterion { id: 5, title: "nerve recognition", suite: Suite::NerveRecognition, ns: &[1, 2, 3], limit: Duration::from_secs(120) },
    Criterion { id: 6, title: "grids and retracts", suite: Suite::GridsRetracts, ns: &[1, 2, 3], limit: Duration::from_secs(120) },
    Criterion { id: 7, title: "automorphisms", suite: Suite::Autos, ns: &[1, 2, 3], limit: Duration::from_secs(60) },
    Criterion { id: 8, title: "upsilon closure", suite: Suite::UpsilonClosure, ns: &[1], limit: Duration::from_secs(120) },
    Criterion { id: 9, title: "delta compatibility", suite: Suite::DeltaRestriction, ns: &[1, 2, 3], limit: Duration::from_secs(120) },
];

/// Runs the suite at each n, then with the fault injected; returns a failure note if any.
fn run_criterion(c: &Criterion) -> Option<String> {
    let start = Instant::now();
    for &n in c.ns {
        match run_suite(&SuiteConfig::new(c.suite, n)) {
            Ok(r) if r.passed => {}
            Ok(r) => return Some(format!("n={n} failed: {}", report_render(&r, Format::Text).trim_end())),
            Err(e) => return Some(format!("n={n} error: {e}")),
        }
    }
    let elapsed = start.elapsed();
    for &n in c.ns {
        let mut cfg = SuiteConfig::new(c.suite, n);
        cfg.fault = true;
        match run_suite(&cfg) {
            Ok(r) if !r.passed && !r.witnesses.is_empty() => {}
            Ok(_) => return Some(format!("n={n} passed with the fault injected")),
            Err(e) => return Some(format!("n={n} fault run error: {e}")),
        }
    }
    if elapsed > c.limit {
        return Some(format!("took {elapsed:.1?}, limit {:?}", c.limit));
    }
    None
}

fn determinism() -> Option<String> {
    for suite in Suite::ALL {
        for fault in [false, true] {
            let mut cfg = SuiteConfig::new(suite, 1);
            cfg.seed = 7;
            cfg.fault = fault;
            let a = run_suite(&cfg).map(|r| report_render(&r, Format::Json));
            let b = run_suite(&cfg).map(|r| report_render(&r, Format::Json));
            match (a, b) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => return Some(format!("{suite} reports differ")),
                (Err(e), _) | (_, Err(e)) => return Some(format!("{suite}: {e}")),
            }
        }
    }
    None
}

fn main() {
    let mut failed = 0;
    let mut line = |id: usize, title: &str, outcome: Option<String>, secs: f64| match outcome {
        None => println!("PASS {id:>2} {title} ({secs:.1}s)"),
        Some(why) => {
            failed += 1;
            println!("FAIL {id:>2} {title} ({secs:.1}s): {why}");
        }
    };
    for c in CRITERIA {
        let t = Instant::now();
        let outcome = run_criterion(c);
        line(c.id, c.title, outcome, t.elapsed().as_secs_f64());
    }
    let t = Instant::now();
    let outcome = determinism();
    line(10, "determinism", outcome, t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
