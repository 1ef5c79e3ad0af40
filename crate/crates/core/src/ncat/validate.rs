use serde::{Deserialize, Serialize};

use super::NCat;

/// One violated axiom with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// One of `idempotence`, `comp-domain`, `comp-boundary`, `unit`,
    /// `associativity`, `interchange`, `globularity`.
    pub axiom: String,
    /// Structure levels involved (1-based).
    pub levels: Vec<usize>,
    /// Cell names forming the witness tuple.
    pub witness: Vec<String>,
}

/// Result of [`validate`]; valid exactly when `violations` is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// True if the violation list was cut at the reporting cap.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// First violation of the given axiom, if any.
    pub fn find(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

const CAP: usize = 256;

struct Sink<'a> {
    x: &'a NCat,
    report: ValidationReport,
}

impl Sink<'_> {
    fn push(&mut self, axiom: &str, levels: &[usize], cells: &[u32]) {
        if self.report.violations.len() >= CAP {
            self.report.truncated = true;
            return;
        }
        self.report.violations.push(Violation {
            axiom: axiom.to_string(),
            levels: levels.to_vec(),
            witness: cells.iter().map(|&c| self.x.name(c).to_string()).collect(),
        });
    }

    fn full(&self) -> bool {
        self.report.truncated
    }
}

/// Checks every axiom of a strict n-category and lists each violation.
pub fn validate(x: &NCat) -> ValidationReport {
    let mut sink = Sink { x, report: ValidationReport::default() };
    let n = x.n();
    for i in 1..=n {
        idempotence(x, i, &mut sink);
        domain_and_boundary(x, i, &mut sink);
        units(x, i, &mut sink);
    }
    if !sink.report.is_valid() {
        // Later checks assume total, well-typed structure maps.
        return sink.report;
    }
    for i in 1..=n {
        associativity(x, i, &mut sink);
        if sink.full() {
            return sink.report;
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            globularity(x, i, j, &mut sink);
            interchange(x, i, j, &mut sink);
            if sink.full() {
                return sink.report;
            }
        }
    }
    sink.report
}

fn idempotence(x: &NCat, i: usize, sink: &mut Sink) {
    for c in x.cells() {
        let s = x.src(i, c);
        let t = x.tgt(i, c);
        if x.src(i, s) != s || x.tgt(i, s) != s || x.tgt(i, t) != t || x.src(i, t) != t {
            sink.push("idempotence", &[i], &[c]);
        }
    }
}

fn domain_and_boundary(x: &NCat, i: usize, sink: &mut Sink) {
    for a in x.cells() {
        for b in x.cells() {
            let composable = x.src(i, a) == x.tgt(i, b);
            match x.comp(i, a, b) {
                None if composable => sink.push("comp-domain", &[i], &[a, b]),
                Some(_) if !composable => sink.push("comp-domain", &[i], &[a, b]),
                Some(r) => {
                    if x.src(i, r) != x.src(i, b) || x.tgt(i, r) != x.tgt(i, a) {
                        sink.push("comp-boundary", &[i], &[a, b, r]);
                    }
                }
                None => {}
            }
        }
    }
}

fn units(x: &NCat, i: usize, sink: &mut Sink) {
    for y in x.cells() {
        let t = x.tgt(i, y);
        if x.comp(i, t, y) != Some(y) {
            sink.push("unit", &[i], &[t, y]);
        }
        let s = x.src(i, y);
        if x.comp(i, y, s) != Some(y) {
            sink.push("unit", &[i], &[y, s]);
        }
    }
}

fn associativity(x: &NCat, i: usize, sink: &mut Sink) {
    let by_tgt = x.by_tgt(i);
    for a in x.cells() {
        for &b in &by_tgt[x.src(i, a) as usize] {
            let ab = x.comp(i, a, b).unwrap();
            for &c in &by_tgt[x.src(i, b) as usize] {
                let bc = x.comp(i, b, c).unwrap();
                if x.comp(i, ab, c) != x.comp(i, a, bc) {
                    sink.push("associativity", &[i], &[a, b, c]);
                }
            }
        }
    }
}

fn globularity(x: &NCat, i: usize, j: usize, sink: &mut Sink) {
    for c in x.cells() {
        for b in [x.src(i, c), x.tgt(i, c)] {
            if x.src(j, b) != b || x.tgt(j, b) != b {
                sink.push("globularity", &[i, j], &[c, b]);
            }
        }
        // src_i and tgt_i commute with src_j and tgt_j.
        for (f, g) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let outer = |z: u32| if f == 0 { x.src(i, z) } else { x.tgt(i, z) };
            let inner = |z: u32| if g == 0 { x.src(j, z) } else { x.tgt(j, z) };
            if outer(inner(c)) != inner(outer(c)) {
                sink.push("interchange", &[i, j], &[c]);
            }
        }
    }
}

fn interchange(x: &NCat, i: usize, j: usize, sink: &mut Sink) {
    let by_tgt_j = x.by_tgt(j);
    let by_tgt_i = x.by_tgt(i);
    // src_i, tgt_i preserve comp_j.
    for a in x.cells() {
        for &b in &by_tgt_j[x.src(j, a) as usize] {
            let ab = x.comp(j, a, b).unwrap();
            for side in 0..2 {
                let f = |z: u32| if side == 0 { x.src(i, z) } else { x.tgt(i, z) };
                if x.comp(j, f(a), f(b)) != Some(f(ab)) {
                    sink.push("interchange", &[i, j], &[a, b]);
                }
            }
        }
    }
    // comp_i commutes with src_j, tgt_j.
    for a in x.cells() {
        for &b in &by_tgt_i[x.src(i, a) as usize] {
            let ab = x.comp(i, a, b).unwrap();
            for side in 0..2 {
                let f = |z: u32| if side == 0 { x.src(j, z) } else { x.tgt(j, z) };
                if x.comp(i, f(a), f(b)) != Some(f(ab)) {
                    sink.push("interchange", &[i, j], &[a, b]);
                }
            }
        }
    }
    // (a *_j a') *_i (b *_j b') = (a *_i b) *_j (a' *_i b').
    for a in x.cells() {
        for &a2 in &by_tgt_j[x.src(j, a) as usize] {
            let aa = x.comp(j, a, a2).unwrap();
            for &b in &by_tgt_i[x.src(i, a) as usize] {
                for &b2 in &by_tgt_j[x.src(j, b) as usize] {
                    if x.tgt(i, b2) != x.src(i, a2) {
                        continue;
                    }
                    let bb = x.comp(j, b, b2).unwrap();
                    let lhs = x.comp(i, aa, bb);
                    let rhs = match (x.comp(i, a, b), x.comp(i, a2, b2)) {
                        (Some(p), Some(q)) => x.comp(j, p, q),
                        _ => None,
                    };
                    if lhs.is_none() || lhs != rhs {
                        sink.push("interchange", &[i, j], &[a, a2, b, b2]);
                    }
                }
            }
        }
    }
}
