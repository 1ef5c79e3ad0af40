use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::eval::{Elem, Evaluation};
use super::{AtomMap, CellularPresheaf, Evaluator, PresheafMap, TestMor, TestObj};
use crate::error::{NctError, Result};
use crate::ncat::NCat;

/// Candidate values for one atom of a source presheaf.
enum Domain {
    /// Functors from the atom's category into the target nerve.
    Funs { list: Arc<Vec<Vec<u32>>>, index: HashMap<Vec<u32>, u32> },
    /// Elements of the target at the atom's test object.
    Classes(Arc<Evaluation>),
}

impl Domain {
    fn len(&self) -> usize {
        match self {
            Domain::Funs { list, .. } => list.len(),
            Domain::Classes(e) => e.count(),
        }
    }
}

/// All maps `U -> X`, each given by one value per atom of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSet {
    pub families: Vec<Vec<u32>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocalityWitness {
    /// A map out of the source with no extension along the generator.
    NotLifted { family: Vec<u32> },
    /// A map out of the source with two distinct extensions.
    NotUnique { family: Vec<u32>, first: Vec<u32>, second: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub local: bool,
    /// `|Hom(V, X)|` for the generator `U -> V`.
    pub from_target: usize,
    /// `|Hom(U, X)|`.
    pub from_source: usize,
    pub witness: Option<LocalityWitness>,
}

/// Maps into a fixed presheaf `X`, with evaluations shared across atoms.
struct Solver<'e, 'a> {
    ev: &'e Evaluator<'a>,
    x: &'e CellularPresheaf,
    nerve: Option<Arc<NCat>>,
    evals: HashMap<TestObj, Arc<Evaluation>>,
}

impl<'e, 'a> Solver<'e, 'a> {
    fn new(ev: &'e Evaluator<'a>, x: &'e CellularPresheaf) -> Self {
        Solver { ev, x, nerve: x.as_single_nerve().cloned(), evals: HashMap::new() }
    }

    fn domains(&mut self, u: &CellularPresheaf) -> Result<Vec<Domain>> {
        if u.indexing != self.x.indexing || u.n != self.x.n {
            return Err(NctError::input("presheaves over different index categories"));
        }
        let mut out = Vec::with_capacity(u.atoms.len());
        for atom in &u.atoms {
            if let Some(y) = &self.nerve {
                let list = self.ev.ctx.functors(&*atom.category(u.n)?, y)?;
                let index = list.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
                out.push(Domain::Funs { list, index });
                continue;
            }
            let Some(t) = atom.represented() else {
                return Err(NctError::Indeterminate(
                    "maps from a non-representable atom into a glued presheaf".into(),
                ));
            };
            if !self.evals.contains_key(&t) {
                let e = Arc::new(self.ev.evaluate(self.x, &t)?);
                self.evals.insert(t.clone(), e);
            }
            out.push(Domain::Classes(self.evals[&t].clone()));
        }
        Ok(out)
    }

    /// For each value on the codomain atom, its restriction along `map` (None if it leaves the domain).
    fn restriction_table(&self, map: &AtomMap, from: &Domain, to: &Domain) -> Result<Vec<Option<u32>>> {
        match (from, to) {
            (Domain::Funs { index, .. }, Domain::Funs { list, .. }) => {
                let f = map.functor(self.ev.n)?;
                Ok(list
                    .iter()
                    .map(|y| index.get(&f.assignment().iter().map(|&c| y[c as usize]).collect::<Vec<_>>()).copied())
                    .collect())
            }
            (Domain::Classes(at_a), Domain::Classes(at_b)) => (0..at_b.count() as u32)
                .map(|c| {
                    let (atom, e) = at_b.representative(c);
                    let pulled = match (map, &e) {
                        (AtomMap::Functor(f), Elem::Fun(_)) => self.ev.pull_functor(f, &e)?,
                        (AtomMap::Grid(g), _) => self.ev.pull(&TestMor::Grid(g.clone()), &e)?,
                        _ => {
                            return Err(NctError::Indeterminate(
                                "restriction along this atom map is not a test morphism".into(),
                            ))
                        }
                    };
                    Ok(at_a.class(atom, &pulled))
                })
                .collect(),
            _ => Err(NctError::internal("mixed hom domains")),
        }
    }

    fn hom(&mut self, u: &CellularPresheaf) -> Result<(Vec<Domain>, HomSet)> {
        let doms = self.domains(u)?;
        let tables: Vec<Vec<Option<u32>>> = u
            .edges
            .iter()
            .map(|e| self.restriction_table(&e.map, &doms[e.from], &doms[e.to]))
            .collect::<Result<_>>()?;
        let families = search(u, &doms, &tables, self.ev.ctx.budget.max_nodes)?;
        Ok((doms, HomSet { families }))
    }
}

/// Backtracking over atoms; each edge `a -> b` demands `value(a) = table[value(b)]`.
fn search(u: &CellularPresheaf, doms: &[Domain], tables: &[Vec<Option<u32>>], max: u64) -> Result<Vec<Vec<u32>>> {
    let k = u.atoms.len();
    let preimages: Vec<Vec<Vec<u32>>> = u
        .edges
        .iter()
        .zip(tables)
        .map(|(e, t)| {
            let mut pre = vec![Vec::new(); doms[e.from].len()];
            for (vb, va) in t.iter().enumerate() {
                if let Some(va) = va {
                    pre[*va as usize].push(vb as u32);
                }
            }
            pre
        })
        .collect();
    let mut out = Vec::new();
    let mut assign = vec![u32::MAX; k];
    let mut nodes = 0u64;
    fn go(
        x: usize,
        u: &CellularPresheaf,
        doms: &[Domain],
        tables: &[Vec<Option<u32>>],
        pre: &[Vec<Vec<u32>>],
        assign: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        nodes: &mut u64,
        max: u64,
    ) -> Result<()> {
        if x == assign.len() {
            out.push(assign.clone());
            return Ok(());
        }
        *nodes += 1;
        if *nodes > max {
            return Err(NctError::resource("hom-set search nodes", max));
        }
        let mut candidates: Option<Vec<u32>> = None;
        for (i, e) in u.edges.iter().enumerate() {
            if e.from == x && e.to < x {
                match tables[i][assign[e.to] as usize] {
                    Some(v) => candidates = Some(vec![v]),
                    None => return Ok(()),
                }
                break;
            }
        }
        if candidates.is_none() {
            if let Some((i, e)) = u.edges.iter().enumerate().find(|(_, e)| e.to == x && e.from < x) {
                candidates = Some(pre[i][assign[e.from] as usize].clone());
            }
        }
        let candidates = candidates.unwrap_or_else(|| (0..doms[x].len() as u32).collect());
        'next: for v in candidates {
            assign[x] = v;
            for (i, e) in u.edges.iter().enumerate() {
                let (a, b) = (e.from, e.to);
                if a.max(b) == x && a <= x && b <= x && tables[i][assign[b] as usize] != Some(assign[a]) {
                    continue 'next;
                }
            }
            go(x + 1, u, doms, tables, pre, assign, out, nodes, max)?;
        }
        assign[x] = u32::MAX;
        Ok(())
    }
    go(0, u, doms, tables, &preimages, &mut assign, &mut out, &mut nodes, max)?;
    Ok(out)
}

impl Evaluator<'_> {
    /// `Hom(U, X)`: exact when `X` is one nerve or every atom of `U` is representable.
    pub fn hom_set(&self, u: &CellularPresheaf, x: &CellularPresheaf) -> Result<HomSet> {
        Ok(Solver::new(self, x).hom(u)?.1)
    }

    /// Whether precomposition with `g: U -> V` is a bijection `Hom(V, X) -> Hom(U, X)`.
    pub fn is_local(&self, x: &CellularPresheaf, g: &PresheafMap) -> Result<LocalityReport> {
        let mut solver = Solver::new(self, x);
        let (dv, hv) = solver.hom(&g.target)?;
        let (du, hu) = solver.hom(&g.source)?;
        let legs: Vec<Vec<Option<u32>>> = g
            .legs
            .iter()
            .enumerate()
            .map(|(a, (b, map))| solver.restriction_table(map, &du[a], &dv[*b]))
            .collect::<Result<_>>()?;
        let index: HashMap<&Vec<u32>, usize> = hu.families.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut hit: Vec<Option<usize>> = vec![None; hu.len()];
        let mut witness = None;
        for (j, fam) in hv.families.iter().enumerate() {
            let image: Option<Vec<u32>> =
                g.legs.iter().zip(&legs).map(|((b, _), t)| t[fam[*b] as usize]).collect();
            let Some(i) = image.and_then(|img| index.get(&img).copied()) else {
                return Err(NctError::internal("precomposition left the hom-set"));
            };
            if let Some(prev) = hit[i] {
                witness.get_or_insert(LocalityWitness::NotUnique {
                    family: hu.families[i].clone(),
                    first: hv.families[prev].clone(),
                    second: hv.families[j].clone(),
                });
            } else {
                hit[i] = Some(j);
            }
        }
        if witness.is_none() {
            if let Some(i) = hit.iter().position(|h| h.is_none()) {
                witness = Some(LocalityWitness::NotLifted { family: hu.families[i].clone() });
            }
        }
        Ok(LocalityReport { local: witness.is_none(), from_target: hv.len(), from_source: hu.len(), witness })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Ctx;
    use crate::colimit::k_span;
    use crate::ncat::standard::{cell, delta, walking_iso};
    use crate::presheaf::Indexing;

    #[test]
    fn nerve_hom_is_functor_count() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let c1 = cell(1, 1).unwrap();
        let d2 = delta(2, 1).unwrap();
        let h = ev.hom_set(&CellularPresheaf::nerve(&d2, Indexing::Theta), &CellularPresheaf::nerve(&c1, Indexing::Theta));
        assert_eq!(h.unwrap().len(), 4);
    }

    #[test]
    fn walking_iso_fails_completeness() {
        let ctx = Ctx::default();
        let ev = Evaluator::new(&ctx, 1);
        let e = walking_iso(1).unwrap();
        let k = CellularPresheaf::span_pushout(&k_span(1).unwrap(), Indexing::Theta);
        let h = ev.hom_set(&k, &CellularPresheaf::nerve(&e, Indexing::Theta)).unwrap();
        assert_eq!(h.len(), 4);
    }
}
