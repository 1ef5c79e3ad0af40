//! Verification suites over deterministic corpora, with JSON and text reports.

mod corpus;
mod suites;

pub use corpus::{corpus_generate, gaunt_part, Specimen, THETA_CORPUS_SIZE};

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::budget::{Budget, Ctx};
use crate::error::{NctError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    KernelLaws,
    PushoutCalculus,
    S00Iso,
    GauntLocality,
    NerveRecognition,
    GridsRetracts,
    Autos,
    UpsilonClosure,
    DeltaRestriction,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::KernelLaws,
        Suite::PushoutCalculus,
        Suite::S00Iso,
        Suite::GauntLocality,
        Suite::NerveRecognition,
        Suite::GridsRetracts,
        Suite::Autos,
        Suite::UpsilonClosure,
        Suite::DeltaRestriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::KernelLaws => "kernel-laws",
            Suite::PushoutCalculus => "pushout-calculus",
            Suite::S00Iso => "s00-iso",
            Suite::GauntLocality => "gaunt-locality",
            Suite::NerveRecognition => "nerve-recognition",
            Suite::GridsRetracts => "grids-retracts",
            Suite::Autos => "autos",
            Suite::UpsilonClosure => "upsilon-closure",
            Suite::DeltaRestriction => "delta-restriction",
        }
    }

    /// The statement the suite checks on its window.
    pub fn claim(self) -> &'static str {
        match self {
            Suite::KernelLaws => {
                "Every constructed object satisfies the strict n-category axioms, and copies with a broken unit are rejected with the broken pair as witness."
            }
            Suite::PushoutCalculus => {
                "Two (k-1)-cells glued along their boundary form the boundary of the k-cell, and contracting two edges of the 3-simplex gives the walking isomorphism; both cocones are universal against the cells."
            }
            Suite::S00Iso => {
                "Fiber products of cells over a cell are iterated pushouts of cells, and the fundamental pushouts of types (a) and (c) induce bijections of values at every window object."
            }
            Suite::GauntLocality => {
                "Nerves of gaunt n-categories are local for the fundamental pushouts and all their fiber-product transports; some type (b) and (d) maps are not bijective on values."
            }
            Suite::NerveRecognition => {
                "A presheaf on Θ_n or Δ^×n is the nerve of a gaunt n-category exactly when it is local for the Segal and completeness maps; the category is recovered from the presheaf."
            }
            Suite::GridsRetracts => {
                "Every Θ_n object is a retract of a grid, Δ[2] is a retract of C_1 × C_1, and retracts of gaunt objects are gaunt."
            }
            Suite::Autos => {
                "The automorphisms of the globular category are exactly the 2^n duality functors r_I, and r_I r_J = r_(I xor J) on every corpus object."
            }
            Suite::UpsilonClosure => {
                "Closing the cells under fiber products over cells and retracts yields Δ[m] for m ≤ 4 and reaches a fixed point."
            }
            Suite::DeltaRestriction => {
                "Values and restriction maps of a presheaf over Δ^×n agree with those over Θ_n along the grid functor."
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| NctError::input(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    /// Window bound; `None` picks the suite default for `n`.
    pub window: Option<usize>,
    pub budget: Budget,
    pub seed: u64,
    /// Random objects added to the corpus.
    pub random_objects: usize,
    /// Developer switch: inject the suite's fault, which must make it fail.
    pub fault: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite, n: usize) -> Self {
        SuiteConfig { suite, n, window: None, budget: Budget::default(), seed: 0, random_objects: 4, fault: false }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(NctError::input("n must be at least 1"));
        }
        if self.window == Some(0) {
            return Err(NctError::input("the window bound must be positive"));
        }
        if self.budget.max_nodes == 0 {
            return Err(NctError::input("the budget must be positive"));
        }
        Ok(())
    }
}

/// The finite window a suite ran on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowInfo {
    pub bound: usize,
    pub description: String,
    pub objects: usize,
}

/// A named check with a JSON payload that reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub claim: String,
    pub n: usize,
    pub seed: u64,
    pub budget: u64,
    pub fault_injected: bool,
    pub window: WindowInfo,
    pub passed: bool,
    pub checks: usize,
    /// Failed checks.
    pub witnesses: Vec<Witness>,
    /// Positive findings the claim relies on.
    pub evidence: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Accumulates checks while a suite runs.
pub(crate) struct Tally {
    checks: usize,
    witnesses: Vec<Witness>,
    evidence: Vec<Witness>,
}

/// Failures beyond this many are counted but not recorded.
const WITNESS_CAP: usize = 20;

impl Tally {
    pub(crate) fn new() -> Self {
        Tally { checks: 0, witnesses: Vec::new(), evidence: Vec::new() }
    }

    pub(crate) fn check(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok && self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness { check: check.into(), detail: detail() });
        } else if !ok {
            self.witnesses.last_mut().unwrap().detail["more failures"] = Value::Bool(true);
        }
    }

    pub(crate) fn evidence(&mut self, check: &str, detail: Value) {
        self.evidence.push(Witness { check: check.into(), detail });
    }

    pub(crate) fn failed(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// Runs one suite. Mathematical failure is a report with `passed = false`;
/// bad configuration and exhausted budgets are errors.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.check()?;
    let ctx = Ctx::new(cfg.budget);
    let mut tally = Tally::new();
    let window = suites::run(cfg, &ctx, &mut tally)?;
    Ok(VerificationReport {
        suite: cfg.suite.name().into(),
        claim: cfg.suite.claim().into(),
        n: cfg.n,
        seed: cfg.seed,
        budget: cfg.budget.max_nodes,
        fault_injected: cfg.fault,
        window,
        passed: !tally.failed(),
        checks: tally.checks,
        witnesses: tally.witnesses,
        evidence: tally.evidence,
        elapsed_ms: None,
    })
}

/// [`run_suite`] with the wall-clock time recorded in the report.
pub fn run_suite_timed(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = run_suite(cfg)?;
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(NctError::input(format!("unknown format `{s}`"))),
        }
    }
}

pub fn report_render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => render_text(report),
    }
}

fn render_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite   {}", r.suite);
    let _ = writeln!(s, "claim   {}", r.claim);
    let _ = writeln!(s, "n       {}", r.n);
    let _ = writeln!(s, "window  {} ({} objects, bound {})", r.window.description, r.window.objects, r.window.bound);
    let _ = writeln!(s, "seed    {}  budget {}", r.seed, r.budget);
    if r.fault_injected {
        let _ = writeln!(s, "fault   injected");
    }
    let _ = writeln!(s, "result  {} ({} checks, {} failed)", if r.passed { "PASS" } else { "FAIL" }, r.checks, r.witnesses.len());
    for w in &r.witnesses {
        let _ = writeln!(s, "  witness  {}: {}", w.check, w.detail);
    }
    for e in &r.evidence {
        let _ = writeln!(s, "  evidence {}: {}", e.check, e.detail);
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(s, "time    {ms} ms");
    }
    s
}

/// Process exit code for a finished run or an error.
pub fn exit_code(outcome: &Result<VerificationReport>) -> i32 {
    match outcome {
        Ok(r) if r.passed => 0,
        Ok(_) => 1,
        Err(e) => error_exit_code(e),
    }
}

pub fn error_exit_code(e: &NctError) -> i32 {
    match e {
        NctError::Input(_) | NctError::Dimension(_) => 2,
        NctError::Resource { .. } | NctError::Indeterminate(_) => 3,
        NctError::Internal(_) => 1,
    }
}
