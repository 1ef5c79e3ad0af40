use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Atom, AtomMap, CellularPresheaf, Edge, Indexing, PresheafMap, TestObj};
use crate::budget::{fingerprint, Budget, Ctx};
use crate::colimit::{k_span, pushout, wedge_at_endpoints, SpanDiagram};
use crate::error::{NctError, Result};
use crate::ncat::decompose::product_of_cells_span;
use crate::ncat::limits::{fiber_product, to_point};
use crate::ncat::standard::{boundary, cell, coproduct, point, suspend_map_times};
use crate::ncat::iso::find_iso;
use crate::ncat::{FunctorMap, NCat};
use crate::theta::{
    iota_obj, realize_mor, sigma_obj, theta_cell, theta_enumerate_objects, MultiIndex, MultiMor, ThetaMor, ThetaObj,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorLabel {
    SegalDelta,
    GlobDelta,
    CompDelta,
    SegalTheta,
    CompTheta,
    S00,
    S0Window,
}

impl GeneratorLabel {
    pub const ALL: [GeneratorLabel; 7] = [
        GeneratorLabel::SegalDelta,
        GeneratorLabel::GlobDelta,
        GeneratorLabel::CompDelta,
        GeneratorLabel::SegalTheta,
        GeneratorLabel::CompTheta,
        GeneratorLabel::S00,
        GeneratorLabel::S0Window,
    ];

    pub fn indexing(self) -> Indexing {
        match self {
            GeneratorLabel::SegalDelta | GeneratorLabel::GlobDelta | GeneratorLabel::CompDelta => Indexing::Delta,
            _ => Indexing::Theta,
        }
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorLabel::SegalDelta => "Segal_Δ×n",
            GeneratorLabel::GlobDelta => "Glob_Δ×n",
            GeneratorLabel::CompDelta => "Comp_Δ×n",
            GeneratorLabel::SegalTheta => "Segal_Θn",
            GeneratorLabel::CompTheta => "Comp_Θn",
            GeneratorLabel::S00 => "S00",
            GeneratorLabel::S0Window => "S0-window",
        })
    }
}

/// A generator together with the clause it instantiates.
#[derive(Debug, Clone)]
pub struct Tagged {
    /// `(a)`–`(d)` for S00 and its transports, else the family name.
    pub clause: String,
    /// Human-readable description of the instance.
    pub name: String,
    pub map: PresheafMap,
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub label: GeneratorLabel,
    pub n: usize,
    /// Size bound used for the infinite families (ignored by S00).
    pub bound: usize,
    pub maps: Vec<Tagged>,
}

/// Builds a generator family. `bound` caps the size of the Θ objects (node
/// count) or Δ^×n indices (coordinate sum) involved.
pub fn build_generators(label: GeneratorLabel, n: usize, bound: usize, ctx: &Ctx) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(NctError::input("generators need n ≥ 1"));
    }
    let maps = match label {
        GeneratorLabel::S00 => s00(n, &ctx.budget, false)?,
        GeneratorLabel::S0Window => s0_window(n, &window_cells(n, bound)?, ctx)?,
        GeneratorLabel::SegalTheta => segal_theta(n, bound)?,
        GeneratorLabel::CompTheta => comp_theta(n)?,
        GeneratorLabel::SegalDelta => segal_delta(n, bound)?,
        GeneratorLabel::GlobDelta => glob_delta(n, bound)?,
        GeneratorLabel::CompDelta => comp_delta(n, bound)?,
    };
    Ok(GeneratorSet { label, n, bound, maps })
}

fn by_names(from: &NCat, to: &NCat) -> Result<FunctorMap> {
    let map = from
        .names()
        .iter()
        .map(|nm| to.cell(nm).ok_or_else(|| NctError::internal(format!("cell {nm} missing"))))
        .collect::<Result<Vec<_>>>()?;
    FunctorMap::new(from, to, map)
}

fn nerve_map(d: &SpanDiagram, to_left: &FunctorMap, to_right: &FunctorMap) -> Result<PresheafMap> {
    PresheafMap::from_cocone(d, to_left, to_right, Indexing::Theta)
}

/// The generating set S00 over Θ_n, clauses (a)–(d) in order.
///
/// With `drop_glue` the (c) sources lose their glue atom, which breaks them.
pub fn s00_generators(n: usize, budget: &Budget, drop_glue: bool) -> Result<Vec<Tagged>> {
    s00(n, budget, drop_glue)
}

fn s00(n: usize, budget: &Budget, drop_glue: bool) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    // (a): two i-cells glued along their boundary, and the empty presheaf.
    for i in 0..n {
        let (c, b) = (cell(i, n)?, boundary(i, n)?);
        let inc = by_names(&b, &c)?;
        let d = SpanDiagram::new(inc.clone(), inc)?;
        let p = pushout(&d, budget)?;
        out.push(Tagged {
            clause: "(a)".into(),
            name: format!("C_{i} ∪ C_{i} along ∂C_{i}"),
            map: nerve_map(&d, &p.to_left, &p.to_right)?,
        });
    }
    out.push(Tagged {
        clause: "(a)".into(),
        name: "∅ -> ν∅".into(),
        map: PresheafMap {
            source: CellularPresheaf::empty(Indexing::Theta, n),
            target: CellularPresheaf::nerve(&NCat::empty(n), Indexing::Theta),
            legs: Vec::new(),
        },
    });
    // (b): C_j ∪^{C_i} C_j, composable.
    for i in 0..n {
        for j in i + 1..=n {
            let c = cell(j - i, n)?;
            let w = wedge_at_endpoints(&c, &c)?;
            let p0 = point(n);
            let d = SpanDiagram::new(
                FunctorMap::new(&p0, &c, vec![c.cell("-").unwrap()])?,
                FunctorMap::new(&p0, &c, vec![c.cell("+").unwrap()])?,
            )?
            .suspended(i)?;
            let (l, r) = (suspend_map_times(&w.to_left, i)?, suspend_map_times(&w.to_right, i)?);
            out.push(Tagged {
                clause: "(b)".into(),
                name: format!("C_{j} ∪ C_{j} along C_{i}"),
                map: nerve_map(&d, &l, &r)?,
            });
        }
    }
    // (c): σ^i of the product recipe, into C_{i+j} ×_{C_i} C_{i+k}.
    for i in 0..n {
        for j in 1..=n - i {
            for k in 1..=n - i {
                out.push(Tagged {
                    clause: "(c)".into(),
                    name: format!("C_{} ×_C_{i} C_{}", i + j, i + k),
                    map: product_generator(i, j, k, n, budget, drop_glue)?,
                });
            }
        }
    }
    // (d): σ^k K -> C_k; the top member collapses K to its components.
    for k in 0..=n {
        let d = if k < n { k_span(n)?.suspended(k)? } else { truncated_k_span(n)?.suspended(n)? };
        let legs_to = cell(k, n)?;
        let source = CellularPresheaf::span_pushout(&d, Indexing::Theta);
        let unsuspended = if k < n { k_span(n)? } else { truncated_k_span(n)? };
        let down = |x: &NCat| suspend_map_times(&to_point(x), k);
        let legs = vec![
            (0, AtomMap::Functor(down(unsuspended.left.target())?.retarget(&legs_to))),
            (0, AtomMap::Functor(down(unsuspended.right.target())?.retarget(&legs_to))),
            (0, AtomMap::Functor(down(unsuspended.apex())?.retarget(&legs_to))),
        ];
        out.push(Tagged {
            clause: "(d)".into(),
            name: format!("σ^{k} K -> C_{k}"),
            map: PresheafMap { source, target: CellularPresheaf::nerve(&legs_to, Indexing::Theta), legs },
        });
    }
    Ok(out)
}

/// K with every edge collapsed to its component: `C_0 <- C_0 ⊔ C_0 -> C_0 ⊔ C_0`.
fn truncated_k_span(n: usize) -> Result<SpanDiagram> {
    let p = point(n);
    let (two, _, _) = coproduct(&p, &p)?;
    SpanDiagram::new(FunctorMap::new(&two, &p, vec![0, 0])?, FunctorMap::identity(&two))
}

fn product_generator(i: usize, j: usize, k: usize, n: usize, budget: &Budget, drop_glue: bool) -> Result<PresheafMap> {
    let span = product_of_cells_span(j, k, n)?;
    let recipe = pushout(&span, budget)?;
    let sus = |f: &FunctorMap| suspend_map_times(f, i);
    let (w1, w2, glue) = (sus(&recipe.to_left)?, sus(&recipe.to_right)?, sus(&span.left)?);
    let glue_right = sus(&span.right)?;
    let down = |x: usize| suspend_map_times(&to_point(&cell(x, n)?), i);
    let fp = fiber_product(&down(j)?, &down(k)?)?;
    let iso = find_iso(w1.target(), &fp.object, budget)?
        .ok_or_else(|| NctError::internal("product recipe is not the fiber product"))?;
    let mut source = CellularPresheaf::empty(Indexing::Theta, n);
    source.add_atom(Atom::nerve(w1.source()));
    source.add_atom(Atom::nerve(w2.source()));
    let mut legs = vec![(0, AtomMap::Functor(w1.then(&iso)?)), (0, AtomMap::Functor(w2.then(&iso)?))];
    if !drop_glue {
        source.add_atom(Atom::nerve(glue.source()));
        source.add_edge(2, 0, AtomMap::Functor(glue.clone()));
        source.add_edge(2, 1, AtomMap::Functor(glue_right));
        legs.push((0, AtomMap::Functor(glue.then(&w1)?.then(&iso)?)));
    }
    Ok(PresheafMap { source, target: CellularPresheaf::nerve(&fp.object, Indexing::Theta), legs })
}

/// `H ×_{C_l} g` for `g: U -> νY`, `ρ: Y -> C_l` and `h: H -> C_l`.
pub fn transport_fiber_product(g: &PresheafMap, rho: &FunctorMap, h: &FunctorMap) -> Result<PresheafMap> {
    let y = g
        .target
        .as_single_nerve()
        .ok_or_else(|| NctError::input("transport needs a nerve as target"))?;
    if y.shape_key() != rho.source().shape_key() || rho.target().shape_key() != h.target().shape_key() {
        return Err(NctError::input("incompatible maps for the fiber product"));
    }
    let n = g.source.n;
    let fv = fiber_product(h, rho)?;
    let legs_f: Vec<FunctorMap> = g.legs.iter().map(|(_, m)| m.functor(n)).collect::<Result<_>>()?;
    let fps = legs_f
        .iter()
        .map(|f| fiber_product(h, &f.retarget(y).then(rho)?))
        .collect::<Result<Vec<_>>>()?;
    let mut source = CellularPresheaf::empty(g.source.indexing, n);
    for fp in &fps {
        source.add_atom(Atom::nerve(&fp.object));
    }
    for e in &g.source.edges {
        let f = e.map.functor(n)?;
        let (a, b) = (&fps[e.from], &fps[e.to]);
        source.add_edge(e.from, e.to, AtomMap::Functor(b.pair_into(&a.left, &a.right.then(&f)?)?));
    }
    let legs = fps
        .iter()
        .zip(&legs_f)
        .map(|(fp, f)| Ok((0, AtomMap::Functor(fv.pair_into(&fp.left, &fp.right.then(&f.retarget(y))?)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PresheafMap { source, target: CellularPresheaf::nerve(&fv.object, g.source.indexing), legs })
}

/// The objects `H` used for transports: cells and realizations of Θ_n objects up to `bound` nodes.
pub fn window_cells(n: usize, bound: usize) -> Result<Vec<NCat>> {
    let mut out: Vec<NCat> = (0..=n).map(|k| cell(k, n)).collect::<Result<_>>()?;
    let mut seen: HashSet<(u64, u64)> = out.iter().map(fingerprint).collect();
    for o in theta_enumerate_objects(n, bound) {
        let x = TestObj::Theta(o.raised(n)?).realize(n)?;
        if seen.insert(fingerprint(&x)) {
            out.push(x);
        }
    }
    Ok(out)
}

fn map_key(g: &PresheafMap) -> Vec<u64> {
    let mut key = Vec::new();
    let atom_fp = |a: &Atom| match a {
        Atom::Nerve { cat, .. } => fingerprint(cat).0,
        Atom::Grid(m) => m.0.iter().fold(7u64, |h, &v| h.wrapping_mul(31).wrapping_add(v as u64)),
    };
    for p in [&g.source, &g.target] {
        key.push(p.atoms.len() as u64);
        key.extend(p.atoms.iter().map(atom_fp));
        for e in &p.edges {
            key.push(e.from as u64);
            key.push(e.to as u64);
            if let Ok(f) = e.map.functor(p.n) {
                key.extend(f.assignment().iter().map(|&c| c as u64));
            }
        }
    }
    for (b, m) in &g.legs {
        key.push(*b as u64);
        if let Ok(f) = m.functor(g.source.n) {
            key.extend(f.assignment().iter().map(|&c| c as u64));
        }
    }
    key
}

/// S00 together with every transport `H ×_{C_l} (−)` for `H` in `hs`, all
/// `ρ: V -> C_l` and all `h: H -> C_l`, deduplicated by shape.
pub fn s0_window(n: usize, hs: &[NCat], ctx: &Ctx) -> Result<Vec<Tagged>> {
    let base = s00(n, &ctx.budget, false)?;
    let mut seen: HashSet<Vec<u64>> = base.iter().map(|t| map_key(&t.map)).collect();
    let mut out = base.clone();
    for g in &base {
        let y = g.map.target.as_single_nerve().expect("S00 targets are nerves").clone();
        for l in 0..=n {
            let cl = cell(l, n)?;
            let rhos = ctx.functors(&y, &cl)?;
            for rho in rhos.iter() {
                let rho = FunctorMap::new_unchecked(&y, &cl, rho.clone());
                for (hi, hobj) in hs.iter().enumerate() {
                    for h in ctx.functors(hobj, &cl)?.iter() {
                        let h = FunctorMap::new_unchecked(hobj, &cl, h.clone());
                        let t = transport_fiber_product(&g.map, &rho, &h)?;
                        if seen.insert(map_key(&t)) {
                            out.push(Tagged {
                                clause: g.clause.clone(),
                                name: format!("H{hi} ×_C_{l} ({})", g.name),
                                map: t,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn rep(o: &ThetaObj, n: usize) -> Result<Atom> {
    Atom::representable(&TestObj::Theta(o.clone()), n)
}

fn theta_edge(f: &ThetaMor, n: usize) -> Result<AtomMap> {
    Ok(AtomMap::Functor(realize_mor(f, n)?))
}

pub(crate) fn sigma_mor(f: &ThetaMor) -> ThetaMor {
    ThetaMor { dom: sigma_obj(&f.dom), cod: sigma_obj(&f.cod), phi: vec![0, 1], comps: vec![f.clone()] }
}

/// The pieces of a Segal map `A ∪^P B -> W`.
#[derive(Clone)]
struct SegalShape {
    whole: ThetaObj,
    left: ThetaObj,
    right: ThetaObj,
    mid: ThetaObj,
    mid_left: ThetaMor,
    mid_right: ThetaMor,
    left_whole: ThetaMor,
    right_whole: ThetaMor,
}

impl SegalShape {
    fn sigma(&self) -> SegalShape {
        SegalShape {
            whole: sigma_obj(&self.whole),
            left: sigma_obj(&self.left),
            right: sigma_obj(&self.right),
            mid: sigma_obj(&self.mid),
            mid_left: sigma_mor(&self.mid_left),
            mid_right: sigma_mor(&self.mid_right),
            left_whole: sigma_mor(&self.left_whole),
            right_whole: sigma_mor(&self.right_whole),
        }
    }

    fn to_map(&self, n: usize) -> Result<PresheafMap> {
        let mut source = CellularPresheaf::empty(Indexing::Theta, n);
        source.add_atom(rep(&self.left, n)?);
        source.add_atom(rep(&self.right, n)?);
        source.add_atom(rep(&self.mid, n)?);
        source.add_edge(2, 0, theta_edge(&self.mid_left, n)?);
        source.add_edge(2, 1, theta_edge(&self.mid_right, n)?);
        let target = CellularPresheaf::representable(&TestObj::Theta(self.whole.clone()), n)?;
        let legs = vec![
            (0, theta_edge(&self.left_whole, n)?),
            (0, theta_edge(&self.right_whole, n)?),
            (0, AtomMap::Functor(realize_mor(&self.mid_left, n)?.then(&realize_mor(&self.left_whole, n)?)?)),
        ];
        Ok(PresheafMap { source, target, legs })
    }
}

/// Every Segal map whose whole object is `o`: the top-level splits, and σ of
/// the splits of the child when `o = σ(o')`.
fn shapes_for(o: &ThetaObj) -> Result<Vec<SegalShape>> {
    let level = o.level();
    let mut out = Vec::new();
    if level == 0 {
        return Ok(out);
    }
    let (kids, m) = (o.kids(), o.m());
    for k in 1..m {
        let left = ThetaObj::new(level, kids[..k].to_vec())?;
        let right = ThetaObj::new(level, kids[k..].to_vec())?;
        let mid = iota_obj(0, level);
        let ids = |ks: &[ThetaObj]| ks.iter().map(ThetaMor::identity).collect::<Vec<_>>();
        out.push(SegalShape {
            mid_left: ThetaMor::new(&mid, &left, vec![k], vec![])?,
            mid_right: ThetaMor::new(&mid, &right, vec![0], vec![])?,
            left_whole: ThetaMor::new(&left, o, (0..=k).collect(), ids(&kids[..k]))?,
            right_whole: ThetaMor::new(&right, o, (k..=m).collect(), ids(&kids[k..]))?,
            whole: o.clone(),
            left,
            right,
            mid,
        });
    }
    if m == 1 {
        out.extend(shapes_for(&kids[0])?.iter().map(SegalShape::sigma));
    }
    Ok(out)
}

fn segal_tagged(s: SegalShape, n: usize) -> Result<Tagged> {
    Ok(Tagged {
        clause: "segal".into(),
        name: format!("{} ∪^{} {} -> {}", s.left, s.mid, s.right, s.whole),
        map: s.to_map(n)?,
    })
}

/// The Segal maps of Θ_n with whole object `o`.
pub fn segal_theta_at(o: &ThetaObj, n: usize) -> Result<Vec<Tagged>> {
    shapes_for(&o.raised(n)?)?.into_iter().map(|s| segal_tagged(s, n)).collect()
}

fn segal_theta(n: usize, bound: usize) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    for o in theta_enumerate_objects(n, bound) {
        out.extend(segal_theta_at(&o, n)?);
    }
    Ok(out)
}

fn iota_mor(phi: Vec<usize>, m: usize, level: usize) -> Result<ThetaMor> {
    let dom = iota_obj(phi.len() - 1, level);
    let cod = iota_obj(m, level);
    let count = phi.last().copied().unwrap_or(0) - phi[0];
    let unit = ThetaMor::identity(&iota_obj(0, level - 1));
    ThetaMor::new(&dom, &cod, phi, vec![unit; count])
}

pub(crate) fn sigma_times(f: &ThetaMor, k: usize) -> ThetaMor {
    (0..k).fold(f.clone(), |g, _| sigma_mor(&g))
}

fn comp_theta(n: usize) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    for k in 0..n {
        let level = n - k;
        let sk = |phi: Vec<usize>, m: usize| -> Result<ThetaMor> { Ok(sigma_times(&iota_mor(phi, m, level)?, k)) };
        let d02 = sk(vec![0, 2], 3)?;
        let d13 = sk(vec![1, 3], 3)?;
        let c02 = sk(vec![0, 0], 0)?;
        let mut source = CellularPresheaf::empty(Indexing::Theta, n);
        let a3 = source.add_atom(rep(&d02.cod, n)?);
        let e1 = source.add_atom(rep(&d02.dom, n)?);
        let e2 = source.add_atom(rep(&d13.dom, n)?);
        let p1 = source.add_atom(rep(&c02.cod, n)?);
        let p2 = source.add_atom(rep(&c02.cod, n)?);
        source.add_edge(e1, a3, theta_edge(&d02, n)?);
        source.add_edge(e2, a3, theta_edge(&d13, n)?);
        source.add_edge(e1, p1, theta_edge(&c02, n)?);
        source.add_edge(e2, p2, theta_edge(&c02, n)?);
        let target_obj = theta_cell(k, n)?;
        let target = CellularPresheaf::representable(&TestObj::Theta(target_obj.clone()), n)?;
        let collapse = |m: usize| -> Result<AtomMap> { theta_edge(&sk(vec![0; m + 1], 0)?, n) };
        let legs = vec![(0, collapse(3)?), (0, collapse(1)?), (0, collapse(1)?), (0, collapse(0)?), (0, collapse(0)?)];
        debug_assert_eq!(c02.cod, target_obj);
        out.push(Tagged { clause: "comp".into(), name: format!("σ^{k} ι K -> C_{k}"), map: PresheafMap { source, target, legs } });
    }
    Ok(out)
}

fn with_coord(m: &MultiIndex, c: usize, v: usize) -> MultiIndex {
    let mut out = m.clone();
    out.0[c] = v;
    out
}

/// The map that is `phi` at coordinate `c` and the identity elsewhere.
pub(crate) fn coord_mor(dom: &MultiIndex, cod: &MultiIndex, c: usize, phi: Vec<usize>) -> MultiMor {
    let mut f = MultiMor::identity(dom);
    f.cod = cod.clone();
    f.maps[c] = phi;
    f
}

fn grid_rep(m: &MultiIndex) -> CellularPresheaf {
    CellularPresheaf { indexing: Indexing::Delta, n: m.n(), atoms: vec![Atom::Grid(m.clone())], edges: Vec::new() }
}

/// The Segal map of Δ^×n splitting coordinate `c` of `m` at `s`.
pub fn segal_delta_at(m: &MultiIndex, c: usize, s: usize) -> Result<Tagged> {
    let (n, mc) = (m.n(), m.0[c]);
    if s == 0 || s >= mc {
        return Err(NctError::input("Segal split point must be interior"));
    }
    let (left, right, mid) = (with_coord(m, c, s), with_coord(m, c, mc - s), with_coord(m, c, 0));
    let mut source = CellularPresheaf::empty(Indexing::Delta, n);
    source.atoms = vec![Atom::Grid(left.clone()), Atom::Grid(right.clone()), Atom::Grid(mid.clone())];
    source.edges = vec![
        Edge { from: 2, to: 0, map: AtomMap::Grid(coord_mor(&mid, &left, c, vec![s])) },
        Edge { from: 2, to: 1, map: AtomMap::Grid(coord_mor(&mid, &right, c, vec![0])) },
    ];
    let legs = vec![
        (0, AtomMap::Grid(coord_mor(&left, m, c, (0..=s).collect()))),
        (0, AtomMap::Grid(coord_mor(&right, m, c, (s..=mc).collect()))),
        (0, AtomMap::Grid(coord_mor(&mid, m, c, vec![s]))),
    ];
    Ok(Tagged {
        clause: "segal".into(),
        name: format!("{left} ∪^{mid} {right} -> {m}"),
        map: PresheafMap { source, target: grid_rep(m), legs },
    })
}

fn segal_delta(n: usize, bound: usize) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    for m in MultiIndex::window(n, bound) {
        for c in 0..n {
            for s in 1..m.0[c].max(1) {
                out.push(segal_delta_at(&m, c, s)?);
            }
        }
    }
    Ok(out)
}

/// `m̂`: coordinate `j` drops to 0 when some coordinate at or above `j` is 0.
pub fn glob_collapse(m: &MultiIndex) -> MultiIndex {
    let n = m.n();
    MultiIndex((0..n).map(|j| if m.0[j..].contains(&0) { 0 } else { m.0[j] }).collect())
}

fn glob_delta(n: usize, bound: usize) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    for m in MultiIndex::window(n, bound) {
        let hat = glob_collapse(&m);
        if hat == m {
            continue;
        }
        let maps = m.0.iter().zip(&hat.0).map(|(&a, &b)| (0..=a).map(|v| if b == 0 { 0 } else { v }).collect()).collect();
        let f = MultiMor { dom: m.clone(), cod: hat.clone(), maps };
        out.push(Tagged {
            clause: "glob".into(),
            name: format!("{m} -> {hat}"),
            map: PresheafMap { source: grid_rep(&m), target: grid_rep(&hat), legs: vec![(0, AtomMap::Grid(f))] },
        });
    }
    Ok(out)
}

fn comp_delta(n: usize, bound: usize) -> Result<Vec<Tagged>> {
    let mut out = Vec::new();
    for m in MultiIndex::window(n, bound) {
        for c in 0..n {
            if m.0[c] != 3 || m.0[..c].iter().any(|&v| v != 0) {
                continue;
            }
            let (a3, a1, a0) = (m.clone(), with_coord(&m, c, 1), with_coord(&m, c, 0));
            let mut source = CellularPresheaf::empty(Indexing::Delta, n);
            source.atoms = vec![
                Atom::Grid(a3.clone()),
                Atom::Grid(a1.clone()),
                Atom::Grid(a1.clone()),
                Atom::Grid(a0.clone()),
                Atom::Grid(a0.clone()),
            ];
            source.edges = vec![
                Edge { from: 1, to: 0, map: AtomMap::Grid(coord_mor(&a1, &a3, c, vec![0, 2])) },
                Edge { from: 2, to: 0, map: AtomMap::Grid(coord_mor(&a1, &a3, c, vec![1, 3])) },
                Edge { from: 1, to: 3, map: AtomMap::Grid(coord_mor(&a1, &a0, c, vec![0, 0])) },
                Edge { from: 2, to: 4, map: AtomMap::Grid(coord_mor(&a1, &a0, c, vec![0, 0])) },
            ];
            let legs = vec![
                (0, AtomMap::Grid(coord_mor(&a3, &a0, c, vec![0; 4]))),
                (0, AtomMap::Grid(coord_mor(&a1, &a0, c, vec![0; 2]))),
                (0, AtomMap::Grid(coord_mor(&a1, &a0, c, vec![0; 2]))),
                (0, AtomMap::Grid(MultiMor::identity(&a0))),
                (0, AtomMap::Grid(MultiMor::identity(&a0))),
            ];
            out.push(Tagged {
                clause: "comp".into(),
                name: format!("K in coordinate {} over {a0}", c + 1),
                map: PresheafMap { source, target: grid_rep(&a0), legs },
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::Evaluator;

    #[test]
    fn s00_has_fourteen_members_at_n2() {
        let ctx = Ctx::default();
        let set = build_generators(GeneratorLabel::S00, 2, 0, &ctx).unwrap();
        let clauses: Vec<&str> = set.maps.iter().map(|t| t.clause.as_str()).collect();
        assert_eq!(set.maps.len(), 14);
        for (c, k) in [("(a)", 3), ("(b)", 3), ("(c)", 5), ("(d)", 3)] {
            assert_eq!(clauses.iter().filter(|x| **x == c).count(), k, "{c}");
        }
        for t in &set.maps {
            t.map.source.check().unwrap();
        }
    }

    #[test]
    fn glob_example() {
        assert_eq!(glob_collapse(&MultiIndex(vec![3, 0])), MultiIndex(vec![0, 0]));
        assert_eq!(glob_collapse(&MultiIndex(vec![0, 3])), MultiIndex(vec![0, 3]));
    }

    #[test]
    fn segal_theta_is_local_for_an_arrow() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let set = build_generators(GeneratorLabel::SegalTheta, 1, 3, &ctx).unwrap();
        assert_eq!(set.maps.len(), 1);
        let x = CellularPresheaf::nerve(&cell(1, 1).unwrap(), Indexing::Theta);
        let r = ev.is_local(&x, &set.maps[0].map).unwrap();
        assert!(r.local);
        assert_eq!((r.from_target, r.from_source), (4, 4));
    }
}
