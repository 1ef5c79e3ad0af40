//! Automorphisms of the globular category, the duality functors r_I,
//! retracts by idempotent splitting, bounded Υ_n windows and natural
//! endo-transformations of the identity.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Ctx;
use crate::error::{NctError, Result};
use crate::ncat::functor::signatures;
use crate::ncat::gaunt::is_gaunt;
use crate::ncat::iso::find_iso;
use crate::ncat::limits::fiber_product;
use crate::ncat::standard::cell;
use crate::ncat::{fun_enum_with, validate, EnumOptions, FunctorMap, NCat};

/// The full subcategory on `C_0, …, C_n` with all functors as morphisms.
#[derive(Debug, Clone)]
pub struct GlobularWindow {
    pub n: usize,
    pub cells: Vec<NCat>,
    /// `homs[a][b]` lists the functors `C_a -> C_b`.
    pub homs: Vec<Vec<Arc<Vec<Vec<u32>>>>>,
    index: Vec<Vec<HashMap<Vec<u32>, u32>>>,
}

impl GlobularWindow {
    pub fn new(n: usize, ctx: &Ctx) -> Result<Self> {
        let cells: Vec<NCat> = (0..=n).map(|k| cell(k, n)).collect::<Result<_>>()?;
        let mut homs = Vec::new();
        let mut index = Vec::new();
        for a in &cells {
            let mut row = Vec::new();
            let mut irow = Vec::new();
            for b in &cells {
                let h = ctx.functors(a, b)?;
                irow.push(h.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect());
                row.push(h);
            }
            homs.push(row);
            index.push(irow);
        }
        Ok(GlobularWindow { n, cells, homs, index })
    }

    /// Index of `g ∘ f` for `f: C_a -> C_b`, `g: C_b -> C_c`.
    pub fn compose(&self, a: usize, b: usize, c: usize, g: u32, f: u32) -> u32 {
        let (gm, fm) = (&self.homs[b][c][g as usize], &self.homs[a][b][f as usize]);
        let h: Vec<u32> = fm.iter().map(|&x| gm[x as usize]).collect();
        self.index[a][c][&h]
    }

    fn morphisms(&self) -> Vec<(usize, usize, u32)> {
        let k = self.n + 1;
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for f in 0..self.homs[a][b].len() as u32 {
                    out.push((a, b, f));
                }
            }
        }
        out
    }
}

/// An automorphism of the globular window, with the `r_I` it agrees with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoEquivalence {
    /// Object assignment `k ↦ objects[k]`.
    pub objects: Vec<usize>,
    /// `action[a][b][f]`: the image of the `f`-th functor `C_a -> C_b`.
    pub action: Vec<Vec<Vec<u32>>>,
    /// The levels flipped by the matching `r_I`, if any.
    pub flips: Option<Vec<bool>>,
}

/// All automorphisms of the globular window, each matched to an `r_I`.
pub fn autos_of_globular(n: usize, ctx: &Ctx) -> Result<Vec<AutoEquivalence>> {
    let g = GlobularWindow::new(n, ctx)?;
    let k = n + 1;
    // Hom-set sizes |Fun(C_a, C_a)| = 2a + 1 are distinct, so objects are fixed.
    let sizes: Vec<usize> = (0..k).map(|a| g.homs[a][a].len()).collect();
    for a in 0..k {
        for b in 0..k {
            if a != b && sizes[a] == sizes[b] {
                return Err(NctError::internal("globular objects not separated by endomorphism counts"));
            }
        }
    }
    let morphisms = g.morphisms();
    // Generators first: maps between adjacent cells.
    let mut order: Vec<(usize, usize, u32)> = morphisms.iter().copied().filter(|&(a, b, _)| a.abs_diff(b) == 1).collect();
    order.extend(morphisms.iter().copied().filter(|&(a, b, _)| a.abs_diff(b) != 1));
    let mut found = Vec::new();
    let empty: Vec<Vec<Vec<u32>>> = (0..k).map(|a| (0..k).map(|b| vec![u32::MAX; g.homs[a][b].len()]).collect()).collect();
    search_autos(&g, &order, 0, empty, &mut found);
    let mut out = Vec::new();
    let table = rI_actions(&g, ctx)?;
    for action in found {
        let flips = table.iter().find(|(_, act)| *act == action).map(|(f, _)| f.clone());
        out.push(AutoEquivalence { objects: (0..k).collect(), action, flips });
    }
    Ok(out)
}

/// Closes a partial assignment under composition; false on conflict.
fn propagate(g: &GlobularWindow, act: &mut [Vec<Vec<u32>>]) -> bool {
    let k = g.n + 1;
    loop {
        let mut changed = false;
        for a in 0..k {
            for b in 0..k {
                for f in 0..g.homs[a][b].len() {
                    let ff = act[a][b][f];
                    if ff == u32::MAX {
                        continue;
                    }
                    for c in 0..k {
                        for h in 0..g.homs[b][c].len() {
                            let hh = act[b][c][h];
                            if hh == u32::MAX {
                                continue;
                            }
                            let comp = g.compose(a, b, c, h as u32, f as u32) as usize;
                            let image = g.compose(a, b, c, hh, ff);
                            match act[a][c][comp] {
                                u32::MAX => {
                                    act[a][c][comp] = image;
                                    changed = true;
                                }
                                v if v != image => return false,
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search_autos(
    g: &GlobularWindow,
    order: &[(usize, usize, u32)],
    pos: usize,
    act: Vec<Vec<Vec<u32>>>,
    out: &mut Vec<Vec<Vec<Vec<u32>>>>,
) {
    let Some(&(a, b, f)) = order[pos..].iter().find(|&&(a, b, f)| act[a][b][f as usize] == u32::MAX) else {
        // Complete: keep it if every hom-set is permuted.
        let k = g.n + 1;
        let bijective = (0..k).all(|a| {
            (0..k).all(|b| {
                let mut seen = vec![false; g.homs[a][b].len()];
                act[a][b].iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
            })
        });
        if bijective {
            out.push(act);
        }
        return;
    };
    for v in 0..g.homs[a][b].len() as u32 {
        if act[a][b].contains(&v) {
            continue;
        }
        let mut next = act.clone();
        next[a][b][f as usize] = v;
        if propagate(g, &mut next) {
            search_autos(g, order, pos, next, out);
        }
    }
}

fn all_flips(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n).map(|m| (0..n).map(|i| m >> i & 1 == 1).collect()).collect()
}

/// The action of each `r_I` on the window: `f ↦ φ_b^{-1} ∘ f ∘ φ_a` with `φ_k: C_k ≅ r_I(C_k)`.
#[allow(non_snake_case)]
fn rI_actions(g: &GlobularWindow, ctx: &Ctx) -> Result<Vec<(Vec<bool>, Vec<Vec<Vec<u32>>>)>> {
    let k = g.n + 1;
    let mut out = Vec::new();
    for flips in all_flips(g.n) {
        let mut phi = Vec::with_capacity(k);
        for c in &g.cells {
            let iso = find_iso(c, &c.opposite_r(&flips), &ctx.budget)?
                .ok_or_else(|| NctError::internal("a cell is not self-dual"))?;
            phi.push(iso.assignment().to_vec());
        }
        let inv: Vec<Vec<u32>> = phi
            .iter()
            .map(|p| {
                let mut v = vec![0; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    v[x as usize] = i as u32;
                }
                v
            })
            .collect();
        let mut action = Vec::with_capacity(k);
        for a in 0..k {
            let mut row = Vec::with_capacity(k);
            for b in 0..k {
                let images = g.homs[a][b]
                    .iter()
                    .map(|f| {
                        let h: Vec<u32> = phi[a].iter().map(|&x| inv[b][f[x as usize] as usize]).collect();
                        g.index[a][b].get(&h).copied().ok_or_else(|| NctError::internal("r_I leaves the window"))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                row.push(images);
            }
            action.push(row);
        }
        out.push((flips, action));
    }
    Ok(out)
}

/// Outcome of [`verify_r_group`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGroupReport {
    pub n: usize,
    pub objects: usize,
    /// Every `r_I ∘ r_J = r_{I ⊕ J}` on the cell data of every corpus object.
    pub group_law: bool,
    /// Every `r_I` sends gaunt objects to gaunt objects and others to others.
    pub gaunt_preserved: bool,
    pub failures: Vec<String>,
}

/// Checks the group law of the `r_I` and that they preserve gauntness on a corpus.
pub fn verify_r_group(n: usize, corpus: &[NCat], ctx: &Ctx) -> Result<RGroupReport> {
    let flips = all_flips(n);
    let mut failures = Vec::new();
    let (mut group_law, mut gaunt_preserved) = (true, true);
    for (k, x) in corpus.iter().enumerate() {
        if x.n() != n {
            return Err(NctError::input("corpus object in the wrong ambient dimension"));
        }
        let gaunt = is_gaunt(x, ctx)?.gaunt;
        for i in &flips {
            let ri = x.opposite_r(i);
            if is_gaunt(&ri, ctx)?.gaunt != gaunt || !validate(&ri).is_valid() {
                gaunt_preserved = false;
                failures.push(format!("object {k}: r_{} changes gauntness or validity", bits(i)));
            }
            for j in &flips {
                let xor: Vec<bool> = i.iter().zip(j).map(|(a, b)| a ^ b).collect();
                if ri.opposite_r(j) != x.opposite_r(&xor) {
                    group_law = false;
                    failures.push(format!("object {k}: r_{} r_{} differs from r_{}", bits(j), bits(i), bits(&xor)));
                }
            }
        }
    }
    Ok(RGroupReport { n, objects: corpus.len(), group_law, gaunt_preserved, failures })
}

pub fn bits(flags: &[bool]) -> String {
    flags.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A retract of `ambient` split off by an idempotent.
#[derive(Debug, Clone)]
pub struct RetractCertificate {
    pub idempotent: FunctorMap,
    pub object: NCat,
    pub section: FunctorMap,
    pub retraction: FunctorMap,
}

impl RetractCertificate {
    /// `retraction ∘ section = id` and `section ∘ retraction = idempotent`.
    pub fn verify(&self) -> Result<bool> {
        let rs = self.section.then(&self.retraction)?;
        let sr = self.retraction.then(&self.section)?;
        Ok(rs.assignment().iter().enumerate().all(|(i, &c)| c == i as u32)
            && sr.assignment() == self.idempotent.assignment())
    }
}

/// Largest object whose sub-n-categories [`retracts_of`] will scan.
pub const RETRACT_SCAN_LIMIT: usize = 22;

/// One retract of `x` per isomorphism class: each closed sub-n-category that
/// admits a retraction fixing it, split as inclusion and retraction.
pub fn retracts_of(x: &NCat, ctx: &Ctx) -> Result<Vec<RetractCertificate>> {
    let len = x.len();
    if len > RETRACT_SCAN_LIMIT {
        return Err(NctError::resource(format!("retract scan over {len} cells"), RETRACT_SCAN_LIMIT as u64));
    }
    if len == 0 {
        let id = FunctorMap::identity(x);
        return Ok(vec![RetractCertificate { idempotent: id.clone(), object: x.clone(), section: id.clone(), retraction: id }]);
    }
    let n = x.n();
    let boundary: Vec<u32> = x
        .cells()
        .map(|c| (1..=n).flat_map(|i| [x.src(i, c), x.tgt(i, c)]).fold(0u32, |m, b| m | 1 << b))
        .collect();
    let comps: Vec<(u32, u32, u32)> = x.comp_entries().into_iter().map(|(_, p, q, r)| (p, q, r)).collect();
    let mut out: Vec<RetractCertificate> = Vec::new();
    let mut store = IsoStore { objects: Vec::new(), buckets: HashMap::new() };
    for mask in 1u32..(1u32 << len) {
        let inside = |c: u32| mask >> c & 1 == 1;
        if x.cells().any(|c| inside(c) && boundary[c as usize] & !mask != 0) {
            continue;
        }
        if comps.iter().any(|&(p, q, r)| inside(p) && inside(q) && !inside(r)) {
            continue;
        }
        let keep: Vec<u32> = x.cells().filter(|&c| inside(c)).collect();
        let (object, section) = x.restrict_to(&keep)?;
        let opts = EnumOptions {
            max_nodes: ctx.budget.max_nodes,
            limit: Some(1),
            fixed: keep.iter().enumerate().map(|(k, &c)| (c, k as u32)).collect(),
            ..EnumOptions::default()
        };
        let Some(r) = fun_enum_with(x, &object, &opts)?.into_iter().next() else {
            continue;
        };
        if !store.insert(object.clone(), ctx)? {
            continue;
        }
        if !validate(&object).is_valid() {
            return Err(NctError::internal("retract violates the axioms"));
        }
        let retraction = FunctorMap::new(x, &object, r)?;
        let idempotent = retraction.then(&section)?;
        out.push(RetractCertificate { idempotent, object, section, retraction });
    }
    Ok(out)
}

/// Isomorphism-class store with cheap invariant buckets.
struct IsoStore {
    objects: Vec<NCat>,
    buckets: HashMap<(usize, Vec<usize>, Vec<Vec<u32>>), Vec<usize>>,
}

impl IsoStore {
    fn key(x: &NCat) -> (usize, Vec<usize>, Vec<Vec<u32>>) {
        let mut s = signatures(x);
        s.sort();
        (x.len(), x.dim_profile(), s)
    }

    fn insert(&mut self, x: NCat, ctx: &Ctx) -> Result<bool> {
        let key = Self::key(&x);
        if let Some(ids) = self.buckets.get(&key) {
            for &i in ids {
                if find_iso(&self.objects[i], &x, &ctx.budget)?.is_some() {
                    return Ok(false);
                }
            }
        }
        self.buckets.entry(key).or_default().push(self.objects.len());
        self.objects.push(x);
        Ok(true)
    }
}

/// A bounded Υ_n window and its closure status.
#[derive(Debug, Clone)]
pub struct UpsilonWindow {
    pub objects: Vec<NCat>,
    /// Objects added in each round.
    pub added: Vec<usize>,
    /// Whether one further round adds nothing.
    pub closed: bool,
}

/// Closes the cells under fiber products over cells and retracts, discarding
/// objects with more than `size_bound` cells. Each round pairs the objects
/// found in the previous round with everything so far, then splits retracts
/// of whatever it added. Stops early at a fixed point, and otherwise runs one
/// round beyond `rounds` to test closure.
pub fn upsilon_window(n: usize, size_bound: usize, rounds: usize, ctx: &Ctx) -> Result<UpsilonWindow> {
    upsilon_window_with(n, size_bound, rounds, true, ctx)
}

/// [`upsilon_window`], optionally without the retract step.
pub fn upsilon_window_with(
    n: usize,
    size_bound: usize,
    rounds: usize,
    split_retracts: bool,
    ctx: &Ctx,
) -> Result<UpsilonWindow> {
    let mut store = IsoStore { objects: Vec::new(), buckets: HashMap::new() };
    let cells: Vec<NCat> = (0..=n).map(|k| cell(k, n)).collect::<Result<_>>()?;
    for c in &cells {
        store.insert(c.clone(), ctx)?;
    }
    let mut frontier = 0;
    let mut added = Vec::new();
    let mut closed = false;
    for _ in 0..=rounds {
        let start = store.objects.len();
        let pairs: Vec<(usize, usize)> =
            (frontier..start).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
        for batch in pairs.chunks(64) {
            let found: Vec<Result<Vec<NCat>>> = batch
                .par_iter()
                .map(|&(i, j)| fiber_products_within(&store.objects[i], &store.objects[j], &cells, size_bound, ctx))
                .collect();
            for r in found {
                for x in r? {
                    store.insert(x, ctx)?;
                }
            }
        }
        let grown = store.objects.len();
        let splits: Vec<Result<Vec<RetractCertificate>>> = if split_retracts {
            (start..grown).into_par_iter().map(|k| retracts_of(&store.objects[k], ctx)).collect()
        } else {
            Vec::new()
        };
        for r in splits {
            for cert in r? {
                store.insert(cert.object, ctx)?;
            }
        }
        let fresh = store.objects.len() - start;
        if fresh == 0 {
            closed = true;
            break;
        }
        added.push(fresh);
        frontier = start;
    }
    Ok(UpsilonWindow { objects: store.objects, added, closed })
}

/// Every `x ×_{C_k} y` with at most `size_bound` cells, deduplicated.
fn fiber_products_within(x: &NCat, y: &NCat, cells: &[NCat], size_bound: usize, ctx: &Ctx) -> Result<Vec<NCat>> {
    let mut local = IsoStore { objects: Vec::new(), buckets: HashMap::new() };
    for c in cells {
        let fs = ctx.functors(x, c)?;
        let gs = ctx.functors(y, c)?;
        for f in fs.iter() {
            let mut fcount = vec![0usize; c.len()];
            for &v in f {
                fcount[v as usize] += 1;
            }
            for g in gs.iter() {
                let size: usize = g.iter().map(|&v| fcount[v as usize]).sum();
                if size > size_bound {
                    continue;
                }
                let fp = fiber_product(
                    &FunctorMap::new_unchecked(x, c, f.clone()),
                    &FunctorMap::new_unchecked(y, c, g.clone()),
                )?;
                local.insert(fp.object, ctx)?;
            }
        }
    }
    Ok(local.objects)
}

/// Which functors a natural family must commute with.
#[derive(Debug, Clone)]
pub enum FunctorFamily {
    /// Every functor between corpus objects.
    All,
    /// Only identities, making naturality vacuous.
    Identities,
}

/// Families `η_X ∈ Fun(X, X)` natural for the chosen functors; each entry
/// indexes into the endofunctor list of the corresponding corpus object.
pub fn natural_endo_probe(corpus: &[NCat], family: FunctorFamily, ctx: &Ctx) -> Result<Vec<Vec<u32>>> {
    let k = corpus.len();
    let endos: Vec<Arc<Vec<Vec<u32>>>> = corpus.iter().map(|x| ctx.functors(x, x)).collect::<Result<_>>()?;
    let maps: Vec<Vec<Arc<Vec<Vec<u32>>>>> = match family {
        FunctorFamily::All => corpus
            .iter()
            .map(|x| corpus.iter().map(|y| ctx.functors(x, y)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
        FunctorFamily::Identities => Vec::new(),
    };
    // Smallest objects first, so the point pins everything down early.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (corpus[i].len(), i));
    let mut out = Vec::new();
    let mut assign = vec![u32::MAX; k];
    fn natural(maps: &[Vec<Arc<Vec<Vec<u32>>>>], endos: &[Arc<Vec<Vec<u32>>>], a: usize, b: usize, assign: &[u32]) -> bool {
        let (ea, eb) = (&endos[a][assign[a] as usize], &endos[b][assign[b] as usize]);
        maps[a][b].iter().all(|f| f.iter().enumerate().all(|(c, &fc)| eb[fc as usize] == f[ea[c] as usize]))
    }
    fn go(
        pos: usize,
        order: &[usize],
        maps: &[Vec<Arc<Vec<Vec<u32>>>>],
        endos: &[Arc<Vec<Vec<u32>>>],
        assign: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == order.len() {
            out.push(assign.clone());
            return;
        }
        let x = order[pos];
        for v in 0..endos[x].len() as u32 {
            assign[x] = v;
            let ok = maps.is_empty()
                || order[..=pos].iter().all(|&y| natural(maps, endos, x, y, assign) && natural(maps, endos, y, x, assign));
            if ok {
                go(pos + 1, order, maps, endos, assign, out);
            }
        }
        assign[x] = u32::MAX;
    }
    go(0, &order, &maps, &endos, &mut assign, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncat::iso::is_iso;
    use crate::ncat::limits::product;
    use crate::ncat::standard::{coproduct, delta, point};
    use crate::theta::{realize, ThetaObj};

    #[test]
    fn autos_count() {
        let ctx = Ctx::default();
        for n in 1..=2 {
            let autos = autos_of_globular(n, &ctx).unwrap();
            assert_eq!(autos.len(), 1 << n);
            assert!(autos.iter().all(|a| a.flips.is_some()));
        }
    }

    #[test]
    fn probe_counts() {
        let ctx = Ctx::default();
        let p = point(1);
        let (two, _, _) = coproduct(&p, &p).unwrap();
        assert_eq!(natural_endo_probe(&[two], FunctorFamily::Identities, &ctx).unwrap().len(), 4);
        let cells: Vec<NCat> = (0..=2).map(|k| cell(k, 2).unwrap()).collect();
        assert_eq!(natural_endo_probe(&cells, FunctorFamily::All, &ctx).unwrap().len(), 1);
    }

    #[test]
    fn group_law_and_non_commuting_flips() {
        let ctx = Ctx::default();
        let o = ThetaObj::parse("[2; [1], [0]]", 2).unwrap();
        let x = realize(&o, 2).unwrap();
        let corpus = vec![cell(2, 2).unwrap(), x.clone()];
        let report = verify_r_group(2, &corpus, &ctx).unwrap();
        assert!(report.group_law && report.gaunt_preserved, "{:?}", report.failures);
        let a = x.opposite_r(&[true, false]);
        let b = x.opposite_r(&[false, true]);
        assert_ne!(a, b);
    }

    #[test]
    fn retracts_of_square() {
        let ctx = Ctx::default();
        let c1 = cell(1, 1).unwrap();
        let sq = product(&c1, &c1).unwrap().object;
        let rs = retracts_of(&sq, &ctx).unwrap();
        assert!(rs.iter().all(|r| r.verify().unwrap()));
        let d2 = delta(2, 1).unwrap();
        assert!(rs.iter().any(|r| is_iso(&r.object, &d2, &ctx.budget).unwrap()));
        assert_eq!(retracts_of(&point(1), &ctx).unwrap().len(), 1);
    }

    #[test]
    fn upsilon_contains_simplices() {
        let ctx = Ctx::default();
        let w = upsilon_window(1, 15, 2, &ctx).unwrap();
        for m in 0..=4 {
            let d = delta(m, 1).unwrap();
            assert!(
                w.objects.iter().any(|x| is_iso(x, &d, &ctx.budget).unwrap()),
                "missing Δ[{m}] among {} objects",
                w.objects.len()
            );
        }
    }

    #[test]
    fn small_window_reaches_fixed_point() {
        let ctx = Ctx::default();
        let w = upsilon_window(1, 9, 10, &ctx).unwrap();
        assert!(w.closed);
        assert!(w.objects.iter().all(|x| is_gaunt(x, &ctx).unwrap().gaunt));
    }

    #[test]
    fn cells_retract_onto_lower_cells() {
        let ctx = Ctx::default();
        for k in 1..=2 {
            let rs = retracts_of(&cell(k, 2).unwrap(), &ctx).unwrap();
            let lower = cell(k - 1, 2).unwrap();
            assert!(rs.iter().any(|r| is_iso(&r.object, &lower, &ctx.budget).unwrap()));
        }
    }
}
