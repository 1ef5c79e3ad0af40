//! Pushouts of finite strict n-categories and checks of their universal property.
//!
//! [`pushout`] quotients the disjoint union by the span, closes the quotient
//! under the congruence generated by the structure maps, and then adjoins
//! formal composites for composable pairs that still lack one. Unit laws,
//! interchange of recorded formal composites and left-nested associativity
//! are applied while adjoining; the result is validated afterwards.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Ctx};
use crate::error::{NctError, Result};
use crate::ncat::standard::{coproduct, disjoint_names, simplex, suspend_map_times};
use crate::ncat::{build_from_keys, validate, FunctorMap, NCat, NONE};

/// A span `X <- A -> Y`.
#[derive(Debug, Clone)]
pub struct SpanDiagram {
    pub left: FunctorMap,
    pub right: FunctorMap,
}

impl SpanDiagram {
    pub fn new(left: FunctorMap, right: FunctorMap) -> Result<Self> {
        if left.source().shape_key() != right.source().shape_key() {
            return Err(NctError::input("span legs have different apexes"));
        }
        Ok(SpanDiagram { left, right })
    }

    pub fn apex(&self) -> &NCat {
        self.left.source()
    }

    /// Suspends the whole diagram `k` times.
    pub fn suspended(&self, k: usize) -> Result<SpanDiagram> {
        SpanDiagram::new(suspend_map_times(&self.left, k)?, suspend_map_times(&self.right, k)?)
    }
}

/// Record of the free-composition closure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionTrace {
    pub rounds: usize,
    pub added_cells: Vec<String>,
    pub bound: usize,
}

/// Pushout object with its cocone.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: NCat,
    pub to_left: FunctorMap,
    pub to_right: FunctorMap,
    pub trace: CompletionTrace,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Merges keeping the smaller index as root; returns true if merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Working state of the closure: cells with boundaries and a sparse composite table.
struct Closure {
    n: usize,
    names: Vec<String>,
    src: Vec<Vec<u32>>,
    tgt: Vec<Vec<u32>>,
    comp: Vec<HashMap<(u32, u32), u32>>,
    formal: Vec<Option<(usize, u32, u32)>>,
    added: Vec<String>,
    max_cells: usize,
}

impl Closure {
    fn len(&self) -> usize {
        self.names.len()
    }

    fn s(&self, i: usize, x: u32) -> u32 {
        self.src[i - 1][x as usize]
    }

    fn t(&self, i: usize, x: u32) -> u32 {
        self.tgt[i - 1][x as usize]
    }

    fn is_id(&self, i: usize, x: u32) -> bool {
        self.s(i, x) == x
    }

    fn composable(&self, i: usize, x: u32, y: u32) -> bool {
        self.s(i, x) == self.t(i, y)
    }

    fn missing(&self) -> Vec<(usize, u32, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            let mut by_tgt: Vec<Vec<u32>> = vec![Vec::new(); self.len()];
            for y in 0..self.len() as u32 {
                by_tgt[self.t(i, y) as usize].push(y);
            }
            for x in 0..self.len() as u32 {
                for &y in &by_tgt[self.s(i, x) as usize] {
                    if !self.comp[i - 1].contains_key(&(x, y)) {
                        out.push((i, x, y));
                    }
                }
            }
        }
        out
    }

    /// Composite `x *_i y`, adjoining formal cells where nothing else applies.
    fn derive(&mut self, i: usize, x: u32, y: u32, depth: usize) -> Result<u32> {
        if depth > 64 {
            return Err(NctError::internal("composite derivation does not terminate"));
        }
        if let Some(&r) = self.comp[i - 1].get(&(x, y)) {
            return Ok(r);
        }
        debug_assert!(self.composable(i, x, y));
        let r = if self.is_id(i, x) {
            y
        } else if self.is_id(i, y) {
            x
        } else if let Some(r) = self.via_interchange(i, x, y, depth)? {
            r
        } else if let Some((_, y1, y2)) = self.formal[y as usize].filter(|f| f.0 == i) {
            // x (y1 y2) = (x y1) y2
            let xy1 = self.derive(i, x, y1, depth + 1)?;
            self.derive(i, xy1, y2, depth + 1)?
        } else {
            self.adjoin(i, x, y, depth)?
        };
        self.comp[i - 1].insert((x, y), r);
        Ok(r)
    }

    /// `(x1 *_j x2) *_i (y1 *_j y2) = (x1 *_i y1) *_j (x2 *_i y2)` for j < i.
    fn via_interchange(&mut self, i: usize, x: u32, y: u32, depth: usize) -> Result<Option<u32>> {
        let fx = self.formal[x as usize].filter(|f| f.0 < i);
        let fy = self.formal[y as usize].filter(|f| f.0 < i);
        let (j, x1, x2, y1, y2) = match (fx, fy) {
            (Some((j, x1, x2)), Some((k, y1, y2))) if j == k => (j, x1, x2, y1, y2),
            (Some((j, x1, x2)), None) => {
                let (a, b) = self.unit_split(j, y, x1, x2, i);
                (j, x1, x2, a, b)
            }
            (None, Some((j, y1, y2))) => {
                let (a, b) = self.unit_split_left(j, x, y1, y2, i);
                (j, a, b, y1, y2)
            }
            _ => return Ok(None),
        };
        if !(self.composable(i, x1, y1) && self.composable(i, x2, y2)) {
            return Ok(None);
        }
        let top = self.derive(i, x1, y1, depth + 1)?;
        let bot = self.derive(i, x2, y2, depth + 1)?;
        if !self.composable(j, top, bot) {
            return Ok(None);
        }
        Ok(Some(self.derive(j, top, bot, depth + 1)?))
    }

    /// Writes `y` as `y *_j src_j y` or `tgt_j y *_j y`, whichever lines up with `(x1, x2)`.
    fn unit_split(&self, j: usize, y: u32, x1: u32, x2: u32, i: usize) -> (u32, u32) {
        let a = (y, self.s(j, y));
        if self.composable(i, x1, a.0) && self.composable(i, x2, a.1) {
            return a;
        }
        (self.t(j, y), y)
    }

    fn unit_split_left(&self, j: usize, x: u32, y1: u32, y2: u32, i: usize) -> (u32, u32) {
        let a = (x, self.s(j, x));
        if self.composable(i, a.0, y1) && self.composable(i, a.1, y2) {
            return a;
        }
        (self.t(j, x), x)
    }

    fn adjoin(&mut self, i: usize, x: u32, y: u32, depth: usize) -> Result<u32> {
        if self.len() >= self.max_cells {
            return Err(NctError::resource("pushout completion cells", self.max_cells as u64));
        }
        let c = self.len() as u32;
        let name = format!("({} *{} {})", self.names[x as usize], i, self.names[y as usize]);
        self.names.push(name.clone());
        self.added.push(name);
        self.formal.push(Some((i, x, y)));
        for l in 0..self.n {
            self.src[l].push(NONE);
            self.tgt[l].push(NONE);
        }
        for j in 1..=self.n {
            let (s, t) = if j < i {
                (self.s(j, y), self.t(j, x))
            } else if j == i {
                (self.s(i, y), self.t(i, x))
            } else if self.is_id(j, x) && self.is_id(j, y) {
                (c, c)
            } else {
                let (sx, sy, tx, ty) = (self.s(j, x), self.s(j, y), self.t(j, x), self.t(j, y));
                (self.derive(i, sx, sy, depth + 1)?, self.derive(i, tx, ty, depth + 1)?)
            };
            self.src[j - 1][c as usize] = s;
            self.tgt[j - 1][c as usize] = t;
        }
        Ok(c)
    }
}

fn congruence(
    n: usize,
    uf: &mut UnionFind,
    src: &[Vec<u32>],
    tgt: &[Vec<u32>],
    comp: &[(usize, u32, u32, u32)],
) {
    let len = uf.parent.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for table in [src, tgt] {
                let mut rep: HashMap<usize, usize> = HashMap::new();
                for c in 0..len {
                    let cls = uf.find(c);
                    let img = table[i][c] as usize;
                    match rep.get(&cls) {
                        Some(&other) => changed |= uf.union(other, img),
                        None => {
                            rep.insert(cls, img);
                        }
                    }
                }
            }
        }
        let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for &(l, p, q, r) in comp {
            let key = (l, uf.find(p as usize), uf.find(q as usize));
            match seen.get(&key) {
                Some(&other) => changed |= uf.union(other, r as usize),
                None => {
                    seen.insert(key, r as usize);
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Pushout of a span, with cocone maps and the completion trace.
pub fn pushout(d: &SpanDiagram, budget: &Budget) -> Result<Pushout> {
    let (x, y) = (d.left.target(), d.right.target());
    let n = x.n();
    if y.n() != n || d.apex().n() != n {
        return Err(NctError::input("span objects have different ambient dimensions"));
    }
    let off = x.len() as u32;
    let total = x.len() + y.len();
    let mut raw_names = x.names().to_vec();
    raw_names.extend(disjoint_names(x.names(), y.names()));
    let mut src = vec![Vec::with_capacity(total); n];
    let mut tgt = vec![Vec::with_capacity(total); n];
    for i in 1..=n {
        src[i - 1] = x.cells().map(|c| x.src(i, c)).chain(y.cells().map(|c| y.src(i, c) + off)).collect();
        tgt[i - 1] = x.cells().map(|c| x.tgt(i, c)).chain(y.cells().map(|c| y.tgt(i, c) + off)).collect();
    }
    let mut entries = x.comp_entries();
    entries.extend(y.comp_entries().into_iter().map(|(l, a, b, r)| (l, a + off, b + off, r + off)));

    let mut uf = UnionFind::new(total);
    for a in d.apex().cells() {
        uf.union(d.left.apply(a) as usize, (d.right.apply(a) + off) as usize);
    }
    congruence(n, &mut uf, &src, &tgt, &entries);

    let mut class_of = vec![NONE; total];
    let mut reps = Vec::new();
    for c in 0..total {
        let r = uf.find(c);
        if class_of[r] == NONE {
            class_of[r] = reps.len() as u32;
            reps.push(r);
        }
        class_of[c] = class_of[r];
    }
    let mut cl = Closure {
        n,
        names: reps.iter().map(|&r| raw_names[r].clone()).collect(),
        src: (0..n).map(|i| reps.iter().map(|&r| class_of[src[i][r] as usize]).collect()).collect(),
        tgt: (0..n).map(|i| reps.iter().map(|&r| class_of[tgt[i][r] as usize]).collect()).collect(),
        comp: vec![HashMap::new(); n],
        formal: vec![None; reps.len()],
        added: Vec::new(),
        max_cells: budget.max_cells,
    };
    for &(l, p, q, r) in &entries {
        cl.comp[l - 1].insert((class_of[p as usize], class_of[q as usize]), class_of[r as usize]);
    }
    let mut rounds = 0;
    loop {
        let todo = cl.missing();
        if todo.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > budget.max_rounds {
            return Err(NctError::resource(
                format!(
                    "pushout completion rounds ({} formal cells added: {})",
                    cl.added.len(),
                    cl.added.iter().take(8).cloned().collect::<Vec<_>>().join(", ")
                ),
                budget.max_rounds as u64,
            ));
        }
        for (i, a, b) in todo {
            cl.derive(i, a, b, 0)?;
        }
    }
    let comp: Vec<(usize, u32, u32, u32)> = cl
        .comp
        .iter()
        .enumerate()
        .flat_map(|(l, m)| m.iter().map(move |(&(a, b), &r)| (l + 1, a, b, r)))
        .collect();
    let object = NCat::from_tables(n, cl.names.clone(), cl.src.clone(), cl.tgt.clone(), &comp)?;
    let report = validate(&object);
    if let Some(v) = report.violations.first() {
        return Err(NctError::internal(format!(
            "pushout completion is not a strict n-category ({} at {:?})",
            v.axiom, v.witness
        )));
    }
    let arc = Arc::new(object.clone());
    let to_left = FunctorMap::from_arcs(
        d.left.target_arc().clone(),
        arc.clone(),
        x.cells().map(|c| class_of[c as usize]).collect(),
    );
    let to_right = FunctorMap::from_arcs(
        d.right.target_arc().clone(),
        arc,
        y.cells().map(|c| class_of[(c + off) as usize]).collect(),
    );
    Ok(Pushout {
        object,
        to_left,
        to_right,
        trace: CompletionTrace { rounds, added_cells: cl.added, bound: budget.max_rounds },
    })
}

/// The span `Δ^3 <- Δ^{02} ⊔ Δ^{13} -> Δ^0 ⊔ Δ^0` contracting two edges.
pub fn k_span(n: usize) -> Result<SpanDiagram> {
    let d3 = simplex(&[0, 1, 2, 3], n)?;
    let (apex, _, _) = coproduct(&simplex(&[0, 2], n)?, &simplex(&[1, 3], n)?)?;
    let (points, _, _) = coproduct(&simplex(&[0], n)?, &simplex(&[0], n)?)?;
    let by_name = |from: &NCat, to: &NCat| -> Vec<u32> {
        from.names().iter().map(|nm| to.cell(nm).expect("vertex present")).collect()
    };
    let left = FunctorMap::new(&apex, &d3, by_name(&apex, &d3))?;
    // Δ^{02} goes to the first point, Δ^{13} to the second.
    let right = FunctorMap::new(&apex, &points, vec![0, 0, 0, 1, 1, 1])?;
    SpanDiagram::new(left, right)
}

/// The pushout of [`k_span`].
pub fn k_pushout(n: usize, budget: &Budget) -> Result<(NCat, Pushout)> {
    let p = pushout(&k_span(n)?, budget)?;
    Ok((p.object.clone(), p))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum WKey {
    L(u32),
    R(u32),
    P(u32, u32),
}

/// The unique object with nothing leaving it (for `final`) or entering it.
fn endpoint(x: &NCat, last: bool) -> Option<u32> {
    if x.n() == 0 {
        return (x.len() == 1).then_some(0);
    }
    let cands: Vec<u32> = x
        .objects()
        .into_iter()
        .filter(|&o| {
            x.cells().all(|c| c == o || if last { x.src(1, c) != o } else { x.tgt(1, c) != o })
        })
        .collect();
    (cands.len() == 1).then(|| cands[0])
}

/// `X ∪^{C_0} Y`, gluing the final object of `X` to the initial object of `Y`.
pub fn wedge_at_endpoints(x: &NCat, y: &NCat) -> Result<Pushout> {
    if x.n() != y.n() {
        return Err(NctError::input("wedge of objects with different ambient dimension"));
    }
    let n = x.n();
    let bot = endpoint(x, true).ok_or_else(|| NctError::input("left object has no designated final object"))?;
    let top = endpoint(y, false).ok_or_else(|| NctError::input("right object has no designated initial object"))?;
    if n == 0 {
        return Ok(Pushout {
            object: x.clone(),
            to_left: FunctorMap::identity(x),
            to_right: FunctorMap::new_unchecked(y, x, vec![0]),
            trace: CompletionTrace::default(),
        });
    }
    let r = |c: u32| if c == top { WKey::L(bot) } else { WKey::R(c) };
    let mut keys: Vec<WKey> = x.cells().map(WKey::L).collect();
    keys.extend(y.cells().filter(|&c| c != top).map(WKey::R));
    let lefts: Vec<u32> = x.cells().filter(|&u| x.tgt(1, u) == bot && x.src(1, u) != bot).collect();
    let rights: Vec<u32> = y.cells().filter(|&v| y.src(1, v) == top && y.tgt(1, v) != top).collect();
    for &u in &lefts {
        for &v in &rights {
            keys.push(WKey::P(u, v));
        }
    }
    let ynames = disjoint_names(x.names(), y.names());
    let (object, index) = build_from_keys(
        n,
        &keys,
        |k| match k {
            WKey::L(c) => x.name(*c).to_string(),
            WKey::R(c) => ynames[*c as usize].clone(),
            WKey::P(u, v) => format!("{};{}", x.name(*u), ynames[*v as usize]),
        },
        |i, k| match k {
            WKey::L(c) => WKey::L(x.src(i, *c)),
            WKey::R(c) => r(y.src(i, *c)),
            WKey::P(u, v) if i == 1 => WKey::L(x.src(1, *u)),
            WKey::P(u, v) => WKey::P(x.src(i, *u), y.src(i, *v)),
        },
        |i, k| match k {
            WKey::L(c) => WKey::L(x.tgt(i, *c)),
            WKey::R(c) => r(y.tgt(i, *c)),
            WKey::P(_, v) if i == 1 => r(y.tgt(1, *v)),
            WKey::P(u, v) => WKey::P(x.tgt(i, *u), y.tgt(i, *v)),
        },
        |i, a, b| match (a, b) {
            (WKey::L(p), WKey::L(q)) => x.comp(i, *p, *q).map(WKey::L),
            (WKey::R(p), WKey::R(q)) => y.comp(i, *p, *q).map(r),
            (WKey::R(v), WKey::L(u)) if i == 1 => {
                Some(if *u == bot { WKey::R(*v) } else { WKey::P(*u, *v) })
            }
            (WKey::P(u, v), WKey::L(w)) if i == 1 => Some(WKey::P(x.comp(1, *u, *w)?, *v)),
            (WKey::R(w), WKey::P(u, v)) if i == 1 => Some(WKey::P(*u, y.comp(1, *w, *v)?)),
            (WKey::P(u, v), WKey::P(u2, v2)) => Some(WKey::P(x.comp(i, *u, *u2)?, y.comp(i, *v, *v2)?)),
            _ => None,
        },
    )?;
    let arc = Arc::new(object.clone());
    let to_left = FunctorMap::from_arcs(Arc::new(x.clone()), arc.clone(), x.cells().map(|c| index[&WKey::L(c)]).collect());
    let to_right = FunctorMap::from_arcs(Arc::new(y.clone()), arc, y.cells().map(|c| index[&r(c)]).collect());
    Ok(Pushout { object, to_left, to_right, trace: CompletionTrace::default() })
}

/// Outcome of [`verify_cocone_universal`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoconeCheck {
    pub universal: bool,
    /// Index into the test family of the first failure.
    pub failing_test: Option<usize>,
    /// `(|Fun(Z,T)|, |compatible pairs|)` per test object.
    pub counts: Vec<(usize, usize)>,
}

/// Checks that maps out of `z` correspond bijectively to compatible pairs of
/// maps out of the span legs, for every test object.
pub fn verify_cocone_universal(
    d: &SpanDiagram,
    z: &NCat,
    to_left: &FunctorMap,
    to_right: &FunctorMap,
    tests: &[NCat],
    ctx: &Ctx,
) -> Result<CoconeCheck> {
    let mut counts = Vec::new();
    for (k, t) in tests.iter().enumerate() {
        let out_z = ctx.functors(z, t)?;
        let out_x = ctx.functors(d.left.target(), t)?;
        let out_y = ctx.functors(d.right.target(), t)?;
        let restrict = |f: &[u32], leg: &FunctorMap| -> Vec<u32> {
            leg.assignment().iter().map(|&c| f[c as usize]).collect()
        };
        let mut by_apex: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (iy, h) in out_y.iter().enumerate() {
            by_apex.entry(restrict(h, &d.right)).or_default().push(iy);
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (ix, g) in out_x.iter().enumerate() {
            if let Some(list) = by_apex.get(&restrict(g, &d.left)) {
                pairs.extend(list.iter().map(|&iy| (ix, iy)));
            }
        }
        let x_index: HashMap<&Vec<u32>, usize> = out_x.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let y_index: HashMap<&Vec<u32>, usize> = out_y.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut images: Vec<(usize, usize)> = Vec::with_capacity(out_z.len());
        let mut ok = true;
        for f in out_z.iter() {
            let gx = restrict(f, to_left);
            let gy = restrict(f, to_right);
            match (x_index.get(&gx), y_index.get(&gy)) {
                (Some(&a), Some(&b)) => images.push((a, b)),
                _ => ok = false,
            }
        }
        images.sort_unstable();
        let distinct = images.windows(2).all(|w| w[0] != w[1]);
        pairs.sort_unstable();
        ok &= distinct && images == pairs;
        counts.push((out_z.len(), pairs.len()));
        if !ok {
            return Ok(CoconeCheck { universal: false, failing_test: Some(k), counts });
        }
    }
    Ok(CoconeCheck { universal: true, failing_test: None, counts })
}
