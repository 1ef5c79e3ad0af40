use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::eval::Elem;
use super::generators::{coord_mor, sigma_times};
use super::{
    build_generators, segal_delta_at, segal_theta_at, CellularPresheaf, Evaluator, GeneratorLabel, Indexing,
    LocalityReport, Tagged, TestMor, TestObj,
};
use crate::error::{NctError, Result};
use crate::ncat::{validate, NCat};
use crate::theta::{multi_hom, theta_cell, theta_enumerate_objects, theta_hom, MultiIndex, ThetaMor, ThetaObj};

/// Why a presheaf was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Rejection {
    /// Not local for a generator.
    Generator { family: String, generator: String, report: LocalityReport },
    /// The reconstructed tables break an axiom.
    Invalid { axiom: String, witness: Vec<String> },
    /// The nerve of the reconstruction differs from the presheaf at a window object.
    Mismatch { test: String, presheaf: usize, nerve: usize },
}

#[derive(Debug, Clone)]
pub struct Recognition {
    pub accepted: bool,
    pub rejection: Option<Rejection>,
    pub reconstruction: Option<NCat>,
    /// Test objects used, in order.
    pub window: Vec<String>,
    pub generators_checked: usize,
}

fn level_coord(n: usize, i: usize) -> usize {
    n - i
}

fn cell_object(indexing: Indexing, n: usize) -> Result<TestObj> {
    Ok(match indexing {
        Indexing::Theta => TestObj::Theta(theta_cell(n, n)?),
        Indexing::Delta => TestObj::Grid(MultiIndex(vec![1; n])),
    })
}

/// The test objects of the window.
pub fn recognition_window(indexing: Indexing, n: usize, bound: usize) -> Result<Vec<TestObj>> {
    Ok(match indexing {
        Indexing::Theta => theta_enumerate_objects(n, bound)
            .into_iter()
            .map(|o| o.raised(n).map(TestObj::Theta))
            .collect::<Result<_>>()?,
        Indexing::Delta => MultiIndex::window(n, bound).into_iter().map(TestObj::Grid).collect(),
    })
}

/// `W_i`, with the two pieces `C_n -> W_i` and the composite `{0, 2}`.
fn composition_shape(indexing: Indexing, n: usize, i: usize) -> Result<(TestObj, [TestMor; 3])> {
    match indexing {
        Indexing::Theta => {
            let low = theta_cell(n - i, n - i)?;
            let base = ThetaObj::new(n - i + 1, vec![low.clone(); 2])?;
            let piece = ThetaObj::new(n - i + 1, vec![low.clone()])?;
            let id = ThetaMor::identity(&low);
            let mk = |phi: Vec<usize>, comps: Vec<ThetaMor>| -> Result<TestMor> {
                Ok(TestMor::Theta(sigma_times(&ThetaMor::new(&piece, &base, phi, comps)?, i - 1)))
            };
            let w = sigma_times(&ThetaMor::identity(&base), i - 1).cod;
            Ok((
                TestObj::Theta(w),
                [mk(vec![0, 1], vec![id.clone()])?, mk(vec![1, 2], vec![id.clone()])?, mk(vec![0, 2], vec![id.clone(), id])?],
            ))
        }
        Indexing::Delta => {
            let c = level_coord(n, i);
            let one = MultiIndex(vec![1; n]);
            let mut w = one.clone();
            w.0[c] = 2;
            let mk = |phi: Vec<usize>| TestMor::Grid(coord_mor(&one, &w, c, phi));
            Ok((TestObj::Grid(w.clone()), [mk(vec![0, 1]), mk(vec![1, 2]), mk(vec![0, 2])]))
        }
    }
}

/// The endomorphism of `C_n` sending the top cell to its `i`-source (`tgt = false`) or `i`-target.
fn collapse(ev: &Evaluator, indexing: Indexing, n: usize, i: usize, tgt: bool) -> Result<TestMor> {
    let cn = cell_object(indexing, n)?;
    let real = ev.realization(&cn)?;
    let top = real.cells().find(|&c| real.dim(c) == n).ok_or_else(|| NctError::internal("cell without top"))?;
    let want = if tgt { real.tgt(i, top) } else { real.src(i, top) };
    let candidates: Vec<TestMor> = match &cn {
        TestObj::Theta(o) => theta_hom(o, o, ev.ctx.budget.max_nodes)?.into_iter().map(TestMor::Theta).collect(),
        TestObj::Grid(m) => {
            let c = level_coord(n, i);
            (0..2).map(|v| TestMor::Grid(coord_mor(m, m, c, vec![v, v]))).collect()
        }
    };
    for u in candidates {
        if u.realize(n)?.apply(top) == want {
            return Ok(u);
        }
    }
    Err(NctError::internal("no collapse endomorphism of the cell"))
}

fn generators(ev: &Evaluator, indexing: Indexing, n: usize, bound: usize) -> Result<Vec<(String, Tagged)>> {
    let ctx = ev.ctx;
    let labels: &[GeneratorLabel] = match indexing {
        Indexing::Theta => &[GeneratorLabel::SegalTheta, GeneratorLabel::CompTheta],
        Indexing::Delta => &[GeneratorLabel::SegalDelta, GeneratorLabel::GlobDelta, GeneratorLabel::CompDelta],
    };
    let mut out = Vec::new();
    for &l in labels {
        // K needs a coordinate equal to 3, whatever the window.
        let b = if l == GeneratorLabel::CompDelta { bound.max(3) } else { bound };
        for t in build_generators(l, n, b, ctx)?.maps {
            out.push((l.to_string(), t));
        }
    }
    // The Segal maps behind composition, even when W_i lies outside the window.
    for i in 1..=n {
        let (w, _) = composition_shape(indexing, n, i)?;
        let extra = match &w {
            TestObj::Theta(o) => segal_theta_at(o, n)?,
            TestObj::Grid(m) => vec![segal_delta_at(m, level_coord(n, i), 1)?],
        };
        let label = if indexing == Indexing::Theta { GeneratorLabel::SegalTheta } else { GeneratorLabel::SegalDelta };
        for t in extra {
            if !out.iter().any(|(_, g): &(String, Tagged)| g.name == t.name) {
                out.push((label.to_string(), t));
            }
        }
    }
    Ok(out)
}

fn element_name(x: &CellularPresheaf, atom: usize, e: &Elem, top: u32) -> String {
    let base = match e {
        Elem::Fun(f) => match &x.atoms[atom] {
            super::Atom::Nerve { cat, .. } => cat.name(f[top as usize]).to_string(),
            super::Atom::Grid(_) => format!("{f:?}"),
        },
        Elem::Grid(g) => g.maps.iter().map(|m| m.iter().map(|v| v.to_string()).collect::<String>()).collect::<Vec<_>>().join("."),
    };
    if x.atoms.len() == 1 {
        base
    } else {
        format!("{atom}:{base}")
    }
}

/// Decides whether `x` is the nerve of a gaunt n-category on the window and reconstructs it.
pub fn recognize_gaunt_nerve(ev: &Evaluator, x: &CellularPresheaf, bound: usize) -> Result<Recognition> {
    let (indexing, n) = (x.indexing, x.n);
    if n != ev.n || n == 0 {
        return Err(NctError::input("recognition needs n ≥ 1 matching the evaluator"));
    }
    x.check()?;
    let window = recognition_window(indexing, n, bound)?;
    let names: Vec<String> = window.iter().map(|t| t.to_string()).collect();
    let reject = |r: Rejection, checked: usize| Recognition {
        accepted: false,
        rejection: Some(r),
        reconstruction: None,
        window: names.clone(),
        generators_checked: checked,
    };
    let gens = generators(ev, indexing, n, bound)?;
    for (k, (family, g)) in gens.iter().enumerate() {
        let report = ev.is_local(x, &g.map)?;
        if !report.local {
            return Ok(reject(Rejection::Generator { family: family.clone(), generator: g.name.clone(), report }, k + 1));
        }
    }
    let checked = gens.len();

    let cn = cell_object(indexing, n)?;
    let at_cell = ev.evaluate(x, &cn)?;
    let real = ev.realization(&cn)?;
    let top = real.cells().find(|&c| real.dim(c) == n).unwrap();
    let count = at_cell.count();
    let mut src = Vec::with_capacity(n);
    let mut tgt = Vec::with_capacity(n);
    for i in 1..=n {
        src.push(ev.restriction(&at_cell, &at_cell, &collapse(ev, indexing, n, i, false)?)?);
        tgt.push(ev.restriction(&at_cell, &at_cell, &collapse(ev, indexing, n, i, true)?)?);
    }
    let mut comp = Vec::new();
    for i in 1..=n {
        let (w, [a, b, whole]) = composition_shape(indexing, n, i)?;
        let at_w = ev.evaluate(x, &w)?;
        let (ra, rb, rc) = (
            ev.restriction(&at_w, &at_cell, &a)?,
            ev.restriction(&at_w, &at_cell, &b)?,
            ev.restriction(&at_w, &at_cell, &whole)?,
        );
        let wreal = ev.realization(&w)?;
        let (ta, tb) = (a.realize(n)?.apply(top), b.realize(n)?.apply(top));
        let a_first = wreal.tgt(i, ta) == wreal.src(i, tb);
        let mut table: HashMap<(u32, u32), u32> = HashMap::new();
        for c in 0..at_w.count() {
            let (first, second) = if a_first { (ra[c], rb[c]) } else { (rb[c], ra[c]) };
            if let Some(prev) = table.insert((second, first), rc[c]) {
                if prev != rc[c] {
                    return Err(NctError::Indeterminate(format!("two composites at level {i}")));
                }
            }
        }
        for ((xx, yy), r) in table {
            comp.push((i, xx, yy, r));
        }
    }
    comp.sort_unstable();
    let mut taken = HashSet::new();
    let cell_names: Vec<String> = (0..count as u32)
        .map(|c| {
            let (atom, e) = at_cell.representative(c);
            let mut nm = element_name(x, atom, &e, top);
            while !taken.insert(nm.clone()) {
                nm.push('\'');
            }
            nm
        })
        .collect();
    let recon = NCat::from_tables(n, cell_names, src, tgt, &comp)?;
    let report = validate(&recon);
    if let Some(v) = report.violations.first() {
        return Ok(reject(Rejection::Invalid { axiom: v.axiom.clone(), witness: v.witness.clone() }, checked));
    }
    for t in &window {
        let probes: Vec<TestMor> = match (&cn, t) {
            (TestObj::Theta(c), TestObj::Theta(o)) => {
                theta_hom(c, o, ev.ctx.budget.max_nodes)?.into_iter().map(TestMor::Theta).collect()
            }
            (TestObj::Grid(c), TestObj::Grid(m)) => multi_hom(c, m).into_iter().map(TestMor::Grid).collect(),
            _ => unreachable!("window matches the indexing"),
        };
        let at_t = ev.evaluate(x, t)?;
        let mut cols = Vec::with_capacity(probes.len());
        let mut tops = Vec::with_capacity(probes.len());
        for u in &probes {
            cols.push(ev.restriction(&at_t, &at_cell, u)?);
            tops.push(u.realize(n)?.apply(top));
        }
        let ours: BTreeSet<Vec<u32>> = (0..at_t.count()).map(|c| cols.iter().map(|col| col[c]).collect()).collect();
        let funs = ev.ctx.functors(&*ev.realization(t)?, &recon)?;
        let theirs: BTreeSet<Vec<u32>> = funs.iter().map(|f| tops.iter().map(|&c| f[c as usize]).collect()).collect();
        if ours.len() != at_t.count() || theirs.len() != funs.len() || ours != theirs {
            return Ok(reject(Rejection::Mismatch { test: t.to_string(), presheaf: at_t.count(), nerve: funs.len() }, checked));
        }
    }
    Ok(Recognition { accepted: true, rejection: None, reconstruction: Some(recon), window: names, generators_checked: checked })
}

/// Two 2-simplices sharing their spine: local for nothing but Segal-shaped
/// data, so recognition must reject it with a Segal witness.
pub fn segal_fault(indexing: Indexing, n: usize) -> Result<CellularPresheaf> {
    let mut p = CellularPresheaf::empty(indexing, n);
    match indexing {
        Indexing::Theta => {
            let obj = |m: usize| crate::theta::iota_obj(m, n);
            let rep = |m: usize| super::Atom::representable(&TestObj::Theta(obj(m)), n);
            let edge = |phi: Vec<usize>| -> Result<super::AtomMap> {
                let units = vec![ThetaMor::identity(&crate::theta::iota_obj(0, n - 1)); phi[1] - phi[0]];
                let f = ThetaMor::new(&obj(1), &obj(2), phi, units)?;
                Ok(super::AtomMap::Functor(crate::theta::realize_mor(&f, n)?))
            };
            let (y, a, b, z) = (p.add_atom(rep(2)?), p.add_atom(rep(1)?), p.add_atom(rep(1)?), p.add_atom(rep(2)?));
            for target in [y, z] {
                p.add_edge(a, target, edge(vec![0, 1])?);
                p.add_edge(b, target, edge(vec![1, 2])?);
            }
        }
        Indexing::Delta => {
            let grid = |m: usize| {
                let mut v = vec![0; n];
                v[n - 1] = m;
                MultiIndex(v)
            };
            let edge = |phi: Vec<usize>| super::AtomMap::Grid(coord_mor(&grid(1), &grid(2), n - 1, phi));
            let (y, a, b, z) = (
                p.add_atom(super::Atom::Grid(grid(2))),
                p.add_atom(super::Atom::Grid(grid(1))),
                p.add_atom(super::Atom::Grid(grid(1))),
                p.add_atom(super::Atom::Grid(grid(2))),
            );
            for target in [y, z] {
                p.add_edge(a, target, edge(vec![0, 1]));
                p.add_edge(b, target, edge(vec![1, 2]));
            }
        }
    }
    p.check()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Ctx;
    use crate::ncat::iso::is_iso;
    use crate::ncat::standard::{cell, walking_iso};

    #[test]
    fn round_trip_c2_over_grids() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 2);
        let c2 = cell(2, 2).unwrap();
        let r = recognize_gaunt_nerve(&ev, &CellularPresheaf::nerve(&c2, Indexing::Delta), 3).unwrap();
        assert!(r.accepted, "{:?}", r.rejection);
        assert!(is_iso(r.reconstruction.as_ref().unwrap(), &c2, &ctx.budget).unwrap());
    }

    #[test]
    fn walking_iso_is_rejected_by_completeness() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let e = walking_iso(1).unwrap();
        let r = recognize_gaunt_nerve(&ev, &CellularPresheaf::nerve(&e, Indexing::Theta), 4).unwrap();
        assert!(!r.accepted);
        match r.rejection.unwrap() {
            Rejection::Generator { family, .. } => assert_eq!(family, GeneratorLabel::CompTheta.to_string()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
