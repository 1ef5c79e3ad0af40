use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{Atom, AtomMap, CellularPresheaf, Indexing, PresheafMap, TestMor, TestObj};
use crate::budget::Ctx;
use crate::error::{NctError, Result};
use crate::ncat::{FunctorMap, NCat};
use crate::theta::{multi_hom, MultiMor};

/// One element of an atom's value: a functor out of the test realization, or a Δ^×n map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Fun(Vec<u32>),
    Grid(MultiMor),
}

#[derive(Debug)]
enum AtomElems {
    Fun(Arc<Vec<Vec<u32>>>, HashMap<Vec<u32>, u32>),
    Grid(Vec<MultiMor>, HashMap<MultiMor, u32>),
}

impl AtomElems {
    fn len(&self) -> usize {
        match self {
            AtomElems::Fun(v, _) => v.len(),
            AtomElems::Grid(v, _) => v.len(),
        }
    }

    fn get(&self, i: usize) -> Elem {
        match self {
            AtomElems::Fun(v, _) => Elem::Fun(v[i].clone()),
            AtomElems::Grid(v, _) => Elem::Grid(v[i].clone()),
        }
    }

    fn index(&self, e: &Elem) -> Option<u32> {
        match (self, e) {
            (AtomElems::Fun(_, ix), Elem::Fun(f)) => ix.get(f).copied(),
            (AtomElems::Grid(_, ix), Elem::Grid(g)) => ix.get(g).copied(),
            _ => None,
        }
    }
}

/// The value of a presheaf at one test object, as a quotient of the atoms' values.
#[derive(Debug)]
pub struct Evaluation {
    pub test: TestObj,
    atoms: Vec<AtomElems>,
    offsets: Vec<usize>,
    class_of: Vec<u32>,
    reps: Vec<(usize, usize)>,
}

impl Evaluation {
    /// Number of elements.
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// The class of an element of an atom.
    pub fn class(&self, atom: usize, e: &Elem) -> Option<u32> {
        let i = self.atoms[atom].index(e)?;
        Some(self.class_of[self.offsets[atom] + i as usize])
    }

    /// A representative `(atom, element)` of a class.
    pub fn representative(&self, class: u32) -> (usize, Elem) {
        let (a, i) = self.reps[class as usize];
        (a, self.atoms[a].get(i))
    }

    /// Class sizes in class order; identifies the evaluation up to relabeling.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count()];
        for &c in &self.class_of {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// Evaluates presheaves, caching realizations and functor sets for one run.
pub struct Evaluator<'a> {
    pub ctx: &'a Ctx,
    pub n: usize,
    realized: Mutex<HashMap<TestObj, Arc<NCat>>>,
    realized_mor: Mutex<HashMap<MultiMor, Arc<FunctorMap>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a Ctx, n: usize) -> Self {
        Evaluator { ctx, n, realized: Mutex::new(HashMap::new()), realized_mor: Mutex::new(HashMap::new()) }
    }

    pub fn realization(&self, t: &TestObj) -> Result<Arc<NCat>> {
        if let Some(x) = self.realized.lock().unwrap().get(t) {
            return Ok(x.clone());
        }
        let x = Arc::new(t.realize(self.n)?);
        self.realized.lock().unwrap().insert(t.clone(), x.clone());
        Ok(x)
    }

    fn grid_functor(&self, g: &MultiMor) -> Result<Arc<FunctorMap>> {
        if let Some(f) = self.realized_mor.lock().unwrap().get(g) {
            return Ok(f.clone());
        }
        let f = Arc::new(TestMor::Grid(g.clone()).realize(self.n)?);
        self.realized_mor.lock().unwrap().insert(g.clone(), f.clone());
        Ok(f)
    }

    fn atom_elems(&self, atom: &Atom, t: &TestObj) -> Result<AtomElems> {
        match atom {
            Atom::Nerve { cat, .. } => {
                let r = self.realization(t)?;
                let funs = self.ctx.functors(&r, cat)?;
                let ix = funs.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
                Ok(AtomElems::Fun(funs, ix))
            }
            Atom::Grid(m) => match t {
                TestObj::Grid(s) => {
                    let homs = multi_hom(s, m);
                    let ix = homs.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
                    Ok(AtomElems::Grid(homs, ix))
                }
                TestObj::Theta(_) => Err(NctError::input("Δ^×n representable evaluated at a Θ object")),
            },
        }
    }

    /// Image of an element of the source atom under an atom map.
    pub fn push(&self, map: &AtomMap, e: &Elem) -> Result<Elem> {
        Ok(match (map, e) {
            (AtomMap::Functor(f), Elem::Fun(x)) => Elem::Fun(x.iter().map(|&c| f.apply(c)).collect()),
            (AtomMap::Grid(g), Elem::Grid(x)) => Elem::Grid(g.after(x)?),
            (AtomMap::Element(f), Elem::Grid(x)) => {
                let r = self.grid_functor(x)?;
                Elem::Fun(r.assignment().iter().map(|&c| f.apply(c)).collect())
            }
            _ => return Err(NctError::input("atom map applied to an element of the wrong kind")),
        })
    }

    /// Restriction of an element along a test morphism `u: s -> t`.
    pub fn pull(&self, u: &TestMor, e: &Elem) -> Result<Elem> {
        Ok(match (u, e) {
            (TestMor::Grid(g), Elem::Grid(x)) => Elem::Grid(x.after(g)?),
            (TestMor::Grid(g), Elem::Fun(x)) => {
                let r = self.grid_functor(g)?;
                Elem::Fun(r.assignment().iter().map(|&c| x[c as usize]).collect())
            }
            (TestMor::Theta(_), Elem::Fun(x)) => {
                let r = u.realize(self.n)?;
                Elem::Fun(r.assignment().iter().map(|&c| x[c as usize]).collect())
            }
            _ => return Err(NctError::input("test morphism does not act on this element")),
        })
    }

    /// Restriction of an element along a functor between realizations.
    pub fn pull_functor(&self, r: &FunctorMap, e: &Elem) -> Result<Elem> {
        match e {
            Elem::Fun(x) => Ok(Elem::Fun(r.assignment().iter().map(|&c| x[c as usize]).collect())),
            Elem::Grid(_) => Err(NctError::input("functor restriction of a Δ^×n element")),
        }
    }

    /// `P(t)`: the atoms' values glued along the edges.
    pub fn evaluate(&self, p: &CellularPresheaf, t: &TestObj) -> Result<Evaluation> {
        if t.indexing() != p.indexing {
            return Err(NctError::input(format!("test object {t} does not index this presheaf")));
        }
        let atoms: Vec<AtomElems> = p.atoms.iter().map(|a| self.atom_elems(a, t)).collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(atoms.len());
        let mut total = 0;
        for a in &atoms {
            offsets.push(total);
            total += a.len();
        }
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        for e in &p.edges {
            for i in 0..atoms[e.from].len() {
                let img = self.push(&e.map, &atoms[e.from].get(i))?;
                let j = atoms[e.to].index(&img).ok_or_else(|| NctError::internal("edge image is not an element"))?;
                let (ra, rb) = (find(&mut parent, offsets[e.from] + i), find(&mut parent, offsets[e.to] + j as usize));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut class_of = vec![u32::MAX; total];
        let mut reps = Vec::new();
        let mut atom_of = Vec::with_capacity(total);
        for (a, el) in atoms.iter().enumerate() {
            for i in 0..el.len() {
                atom_of.push((a, i));
            }
        }
        for x in 0..total {
            let r = find(&mut parent, x);
            if class_of[r] == u32::MAX {
                class_of[r] = reps.len() as u32;
                reps.push(atom_of[x]);
            }
            class_of[x] = class_of[r];
        }
        Ok(Evaluation { test: t.clone(), atoms, offsets, class_of, reps })
    }

    /// `P(u)`: the restriction map `P(t) -> P(s)` along `u: s -> t`, on class ids.
    pub fn restriction(&self, at_t: &Evaluation, at_s: &Evaluation, u: &TestMor) -> Result<Vec<u32>> {
        let realized = match u {
            TestMor::Theta(_) => Some(u.realize(self.n)?),
            TestMor::Grid(_) => None,
        };
        (0..at_t.count() as u32)
            .map(|c| {
                let (a, e) = at_t.representative(c);
                let img = match &realized {
                    Some(r) => self.pull_functor(r, &e)?,
                    None => self.pull(u, &e)?,
                };
                at_s.class(a, &img).ok_or_else(|| NctError::internal("restriction leaves the presheaf"))
            })
            .collect()
    }

    /// The map `U(t) -> V(t)` induced by a presheaf map, on class ids.
    pub fn induced(&self, g: &PresheafMap, at_u: &Evaluation, at_v: &Evaluation) -> Result<Vec<u32>> {
        (0..at_u.count() as u32)
            .map(|c| {
                let (a, e) = at_u.representative(c);
                let (b, map) = &g.legs[a];
                let img = self.push(map, &e)?;
                at_v.class(*b, &img).ok_or_else(|| NctError::internal("presheaf map leaves its target"))
            })
            .collect()
    }

    /// Whether `g` is bijective at `t`; returns `(|U(t)|, |V(t)|, bijective)`.
    pub fn bijective_at(&self, g: &PresheafMap, t: &TestObj) -> Result<(usize, usize, bool)> {
        let (u, v) = (self.evaluate(&g.source, t)?, self.evaluate(&g.target, t)?);
        let map = self.induced(g, &u, &v)?;
        let mut seen = vec![false; v.count()];
        for &c in &map {
            seen[c as usize] = true;
        }
        let bij = u.count() == v.count() && seen.iter().all(|&s| s);
        Ok((u.count(), v.count(), bij))
    }

    pub fn indexing_of(&self, t: &TestObj) -> Indexing {
        t.indexing()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::{wedge_at_endpoints, SpanDiagram};
    use crate::ncat::standard::{cell, delta, point};
    use crate::ncat::FunctorMap;
    use crate::theta::{ThetaObj, MultiIndex};

    #[test]
    fn nerve_values() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let c1 = cell(1, 1).unwrap();
        let nerve = CellularPresheaf::nerve(&c1, Indexing::Theta);
        let t = TestObj::Theta(ThetaObj::simplex(2));
        assert_eq!(ev.evaluate(&nerve, &t).unwrap().count(), 4);
        let objects = ev.evaluate(&nerve, &TestObj::Theta(ThetaObj::simplex(0))).unwrap();
        assert_eq!(objects.count(), 2);
    }

    #[test]
    fn presheaf_pushout_is_not_the_categorical_one() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let (c0, c1) = (point(1), cell(1, 1).unwrap());
        let at = |name: &str| FunctorMap::new(&c0, &c1, vec![c1.cell(name).unwrap()]).unwrap();
        let span = SpanDiagram::new(at("-"), at("+")).unwrap();
        let glued = CellularPresheaf::span_pushout(&span, Indexing::Theta);
        let t = TestObj::Theta(ThetaObj::simplex(2));
        assert_eq!(ev.evaluate(&glued, &t).unwrap().count(), 7);
        let d2 = CellularPresheaf::nerve(&delta(2, 1).unwrap(), Indexing::Theta);
        assert_eq!(ev.evaluate(&d2, &t).unwrap().count(), 10);
        let w = wedge_at_endpoints(&c1, &c1).unwrap();
        let g = crate::presheaf::PresheafMap::from_cocone(&span, &w.to_left, &w.to_right, Indexing::Theta).unwrap();
        let (u, v, bij) = ev.bijective_at(&g, &t).unwrap();
        assert_eq!((u, v, bij), (7, 10, false));
    }

    #[test]
    fn nerve_of_c2_on_a_grid() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 2);
        let c2 = cell(2, 2).unwrap();
        let nerve = CellularPresheaf::nerve(&c2, Indexing::Delta);
        let t = TestObj::Grid(MultiIndex(vec![1, 1]));
        assert_eq!(ev.evaluate(&nerve, &t).unwrap().count(), 5);
        let point_nerve = CellularPresheaf::nerve(&point(2), Indexing::Delta);
        for m in MultiIndex::window(2, 3) {
            assert_eq!(ev.evaluate(&point_nerve, &TestObj::Grid(m)).unwrap().count(), 1);
        }
    }
}
