use std::sync::Arc;

use super::{NCat, NONE};
use crate::budget::Budget;
use crate::error::{NctError, Result};

/// A map of cell sets respecting every source, target and composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctorMap {
    source: Arc<NCat>,
    target: Arc<NCat>,
    map: Vec<u32>,
}

impl FunctorMap {
    /// Checks the functor laws before accepting `map`.
    pub fn new(source: &NCat, target: &NCat, map: Vec<u32>) -> Result<FunctorMap> {
        let f = FunctorMap::new_unchecked(source, target, map);
        match f.defect() {
            None => Ok(f),
            Some(msg) => Err(NctError::input(format!("not a functor: {msg}"))),
        }
    }

    pub fn new_unchecked(source: &NCat, target: &NCat, map: Vec<u32>) -> FunctorMap {
        FunctorMap { source: Arc::new(source.clone()), target: Arc::new(target.clone()), map }
    }

    pub(crate) fn from_arcs(source: Arc<NCat>, target: Arc<NCat>, map: Vec<u32>) -> FunctorMap {
        FunctorMap { source, target, map }
    }

    pub fn identity(x: &NCat) -> FunctorMap {
        let arc = Arc::new(x.clone());
        FunctorMap { source: arc.clone(), target: arc, map: x.cells().collect() }
    }

    pub fn source(&self) -> &NCat {
        &self.source
    }

    pub fn target(&self) -> &NCat {
        &self.target
    }

    pub(crate) fn source_arc(&self) -> &Arc<NCat> {
        &self.source
    }

    pub(crate) fn target_arc(&self) -> &Arc<NCat> {
        &self.target
    }

    /// The underlying assignment, indexed by source cell.
    pub fn assignment(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FunctorMap) -> Result<FunctorMap> {
        if self.target.shape_key() != next.source.shape_key() {
            return Err(NctError::input("composing functors with mismatched ends"));
        }
        let map = self.map.iter().map(|&c| next.map[c as usize]).collect();
        Ok(FunctorMap { source: self.source.clone(), target: next.target.clone(), map })
    }

    /// Same assignment, with the target replaced by a structurally equal object.
    pub fn retarget(&self, target: &NCat) -> FunctorMap {
        FunctorMap { source: self.source.clone(), target: Arc::new(target.clone()), map: self.map.clone() }
    }

    /// Describes the first broken functor law, if any.
    pub fn defect(&self) -> Option<String> {
        let (a, x) = (&*self.source, &*self.target);
        if self.map.len() != a.len() {
            return Some("assignment length differs from source size".into());
        }
        if a.n() != x.n() {
            return Some("ambient dimensions differ".into());
        }
        if self.map.iter().any(|&c| c as usize >= x.len()) {
            return Some("assignment leaves the target".into());
        }
        for i in 1..=a.n() {
            for c in a.cells() {
                let fc = self.apply(c);
                if x.src(i, fc) != self.apply(a.src(i, c)) || x.tgt(i, fc) != self.apply(a.tgt(i, c)) {
                    return Some(format!("boundary of {} at level {i}", a.name(c)));
                }
            }
            for (lvl, p, q, r) in a.comp_entries() {
                if lvl == i && x.comp(i, self.apply(p), self.apply(q)) != Some(self.apply(r)) {
                    return Some(format!("composite of {} and {} at level {i}", a.name(p), a.name(q)));
                }
            }
        }
        None
    }

    /// True when bijective (a bijective functor is an isomorphism).
    pub fn is_bijective(&self) -> bool {
        if self.map.len() != self.target.len() {
            return false;
        }
        let mut seen = vec![false; self.target.len()];
        for &c in &self.map {
            if std::mem::replace(&mut seen[c as usize], true) {
                return false;
            }
        }
        true
    }
}

/// Options for [`fun_enum_with`].
#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub max_nodes: u64,
    /// Only injective assignments.
    pub injective: bool,
    /// Require equal dimension and equal local degree signature (iso search).
    pub match_signature: bool,
    /// Stop after this many results.
    pub limit: Option<usize>,
    /// Pre-assigned values, indexed by source cell.
    pub fixed: Vec<(u32, u32)>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_nodes: Budget::default().max_nodes,
            injective: false,
            match_signature: false,
            limit: None,
            fixed: Vec::new(),
        }
    }
}

/// All functors `a -> x` in lexicographic order of assignments.
pub fn fun_enum(a: &NCat, x: &NCat, budget: &Budget) -> Result<Vec<FunctorMap>> {
    let opts = EnumOptions { max_nodes: budget.max_nodes, ..EnumOptions::default() };
    let sa = Arc::new(a.clone());
    let sx = Arc::new(x.clone());
    Ok(fun_enum_with(a, x, &opts)?
        .into_iter()
        .map(|m| FunctorMap::from_arcs(sa.clone(), sx.clone(), m))
        .collect())
}

struct Step {
    cell: u32,
    forced: Option<(usize, u32, u32)>,
    /// Levels where the cell is not an identity: (level, src cell, tgt cell).
    bounds: Vec<(usize, u32, u32)>,
    /// Levels where the cell is an identity.
    idents: Vec<usize>,
    /// Composite triples whose last member is this step.
    checks: Vec<(usize, u32, u32, u32)>,
}

fn plan(a: &NCat) -> Vec<Step> {
    let len = a.len();
    let n = a.n();
    let mut decomps: Vec<Vec<(usize, u32, u32)>> = vec![Vec::new(); len];
    let entries = a.comp_entries();
    for &(lvl, p, q, r) in &entries {
        if p != r && q != r {
            decomps[r as usize].push((lvl, p, q));
        }
    }
    let mut order: Vec<(u32, Option<(usize, u32, u32)>)> = Vec::with_capacity(len);
    let mut done = vec![false; len];
    let boundary: Vec<Vec<u32>> = a
        .cells()
        .map(|c| {
            (1..=n)
                .flat_map(|i| [a.src(i, c), a.tgt(i, c)])
                .filter(|&b| b != c)
                .collect()
        })
        .collect();
    // Cells become eligible once their boundary is assigned; composites of
    // assigned cells go first, then other eligible cells, and only then a new
    // object, preferring one adjacent to what is already placed.
    while order.len() < len {
        let eligible = |c: u32| !done[c as usize] && boundary[c as usize].iter().all(|&b| done[b as usize]);
        let mut pick = None;
        'scan: for c in a.cells().filter(|&c| eligible(c) && a.dim(c) > 0) {
            for &(lvl, p, q) in &decomps[c as usize] {
                if done[p as usize] && done[q as usize] {
                    pick = Some((c, Some((lvl, p, q))));
                    break 'scan;
                }
            }
        }
        if pick.is_none() {
            pick = a.cells().find(|&c| eligible(c) && a.dim(c) > 0).map(|c| (c, None));
        }
        if pick.is_none() {
            let adjacent = a.cells().find(|&c| {
                eligible(c)
                    && a.cells().any(|e| {
                        boundary[e as usize].contains(&c) && boundary[e as usize].iter().any(|&b| done[b as usize])
                    })
            });
            pick = Some((adjacent.or_else(|| a.cells().find(|&c| eligible(c))).expect("some object is free"), None));
        }
        let (c, forced) = pick.unwrap();
        done[c as usize] = true;
        order.push((c, forced));
    }
    let mut pos = vec![0usize; len];
    for (k, &(c, _)) in order.iter().enumerate() {
        pos[c as usize] = k;
    }
    let mut steps: Vec<Step> = order
        .iter()
        .map(|&(c, forced)| {
            let mut bounds = Vec::new();
            let mut idents = Vec::new();
            for i in 1..=n {
                if a.is_identity(i, c) {
                    idents.push(i);
                } else {
                    bounds.push((i, a.src(i, c), a.tgt(i, c)));
                }
            }
            Step { cell: c, forced, bounds, idents, checks: Vec::new() }
        })
        .collect();
    for &(lvl, p, q, r) in &entries {
        // Unit triples hold automatically once boundaries are respected.
        if (a.is_identity(lvl, p) && q == r) || (a.is_identity(lvl, q) && p == r) {
            continue;
        }
        let last = pos[p as usize].max(pos[q as usize]).max(pos[r as usize]);
        steps[last].checks.push((lvl, p, q, r));
    }
    steps
}

fn signature(x: &NCat) -> Vec<Vec<u32>> {
    let n = x.n();
    let mut sig: Vec<Vec<u32>> = x.cells().map(|c| vec![x.dim(c) as u32]).collect();
    for i in 1..=n {
        let mut out_deg = vec![0u32; x.len()];
        let mut in_deg = vec![0u32; x.len()];
        for c in x.cells() {
            if !x.is_identity(i, c) {
                out_deg[x.src(i, c) as usize] += 1;
                in_deg[x.tgt(i, c) as usize] += 1;
            }
        }
        for c in x.cells() {
            sig[c as usize].push(out_deg[c as usize]);
            sig[c as usize].push(in_deg[c as usize]);
        }
    }
    sig
}

struct Search<'a> {
    a: &'a NCat,
    x: &'a NCat,
    steps: Vec<Step>,
    x_by_src: Vec<Vec<Vec<u32>>>,
    x_objects: Vec<u32>,
    sig: Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)>,
    fixed: Vec<u32>,
    opts: &'a EnumOptions,
    assign: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    out: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn admissible(&self, step: &Step, v: u32) -> bool {
        let x = self.x;
        for &i in &step.idents {
            if x.src(i, v) != v || x.tgt(i, v) != v {
                return false;
            }
        }
        for &(i, s, t) in &step.bounds {
            if x.src(i, v) != self.assign[s as usize] || x.tgt(i, v) != self.assign[t as usize] {
                return false;
            }
        }
        if self.opts.injective && self.used[v as usize] {
            return false;
        }
        if let Some((sa, sx)) = &self.sig {
            if sa[step.cell as usize] != sx[v as usize] {
                return false;
            }
        }
        let f = self.fixed[step.cell as usize];
        if f != NONE && f != v {
            return false;
        }
        true
    }

    fn checks_hold(&self, step: &Step) -> bool {
        step.checks.iter().all(|&(lvl, p, q, r)| {
            self.x.comp(lvl, self.assign[p as usize], self.assign[q as usize]) == Some(self.assign[r as usize])
        })
    }

    fn done(&self) -> bool {
        self.opts.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn run(&mut self, k: usize) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        if k == self.steps.len() {
            self.out.push(self.assign.clone());
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.opts.max_nodes {
            return Err(NctError::resource(
                format!("functor enumeration {} cells -> {} cells", self.a.len(), self.x.len()),
                self.opts.max_nodes,
            ));
        }
        let step = &self.steps[k];
        let cands: Vec<u32> = if let Some((lvl, p, q)) = step.forced {
            match self.x.comp(lvl, self.assign[p as usize], self.assign[q as usize]) {
                Some(v) => vec![v],
                None => vec![],
            }
        } else if let Some(&(i, s, _)) = step.bounds.last() {
            self.x_by_src[i - 1][self.assign[s as usize] as usize].clone()
        } else {
            self.x_objects.clone()
        };
        let cell = step.cell as usize;
        for v in cands {
            let step = &self.steps[k];
            if !self.admissible(step, v) {
                continue;
            }
            self.assign[cell] = v;
            if !self.checks_hold(&self.steps[k]) {
                self.assign[cell] = NONE;
                continue;
            }
            self.used[v as usize] = true;
            self.run(k + 1)?;
            self.used[v as usize] = false;
            self.assign[cell] = NONE;
            if self.done() {
                break;
            }
        }
        Ok(())
    }
}

/// Backtracking enumeration of functors `a -> x` as raw assignments.
///
/// Cells are assigned by increasing dimension; a cell that is a composite of
/// already assigned cells is forced. Results are sorted lexicographically.
pub fn fun_enum_with(a: &NCat, x: &NCat, opts: &EnumOptions) -> Result<Vec<Vec<u32>>> {
    if a.n() != x.n() {
        return Err(NctError::input(format!(
            "ambient dimensions differ ({} vs {})",
            a.n(),
            x.n()
        )));
    }
    let mut fixed = vec![NONE; a.len()];
    for &(c, v) in &opts.fixed {
        fixed[c as usize] = v;
    }
    let mut s = Search {
        a,
        x,
        steps: plan(a),
        x_by_src: (1..=x.n()).map(|i| x.by_src(i)).collect(),
        x_objects: x.objects(),
        sig: opts.match_signature.then(|| (signature(a), signature(x))),
        fixed,
        opts,
        assign: vec![NONE; a.len()],
        used: vec![false; x.len()],
        nodes: 0,
        out: Vec::new(),
    };
    s.run(0)?;
    let mut out = s.out;
    out.sort();
    Ok(out)
}

pub(crate) fn signatures(x: &NCat) -> Vec<Vec<u32>> {
    signature(x)
}
