use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Atom, AtomMap, CellularPresheaf, Edge, Indexing, TestObj};
use crate::error::{NctError, Result};
use crate::ncat::json::NCatJson;
use crate::ncat::{FunctorMap, NCat};
use crate::theta::{MultiIndex, MultiMor, ThetaObj};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum AtomJson {
    Grid { grid: Vec<usize> },
    Theta { theta: String },
    Nerve(NCatJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum MapJson {
    Grid { grid: Vec<Vec<usize>> },
    Cells(BTreeMap<String, String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    map: MapJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PresheafJson {
    indexing: Indexing,
    n: usize,
    atoms: Vec<AtomJson>,
    edges: Vec<EdgeJson>,
}

/// Serializes a presheaf diagram. Nerve atoms are written as n-category JSON,
/// representables as `{"theta": text}` or `{"grid": [m_1, …]}`.
pub fn presheaf_to_json(p: &CellularPresheaf) -> Result<String> {
    let atoms = p
        .atoms
        .iter()
        .map(|a| match a {
            Atom::Nerve { rep: Some(o), .. } => AtomJson::Theta { theta: o.to_string() },
            Atom::Nerve { cat, rep: None } => AtomJson::Nerve(NCatJson::from_ncat(cat)),
            Atom::Grid(m) => AtomJson::Grid { grid: m.0.clone() },
        })
        .collect();
    let edges = p
        .edges
        .iter()
        .map(|e| {
            let map = match &e.map {
                AtomMap::Grid(g) => MapJson::Grid { grid: g.maps.clone() },
                AtomMap::Functor(f) | AtomMap::Element(f) => MapJson::Cells(
                    f.source()
                        .cells()
                        .map(|c| (f.source().name(c).to_string(), f.target().name(f.apply(c)).to_string()))
                        .collect(),
                ),
            };
            EdgeJson { from: e.from, to: e.to, map }
        })
        .collect();
    let doc = PresheafJson { indexing: p.indexing, n: p.n, atoms, edges };
    serde_json::to_string_pretty(&doc).map_err(|e| NctError::internal(e.to_string()))
}

fn cell_map(from: &NCat, to: &NCat, m: &BTreeMap<String, String>) -> Result<FunctorMap> {
    let assignment = from
        .names()
        .iter()
        .map(|nm| {
            let image = m.get(nm).ok_or_else(|| NctError::input(format!("edge map misses cell {nm}")))?;
            to.cell(image).ok_or_else(|| NctError::input(format!("edge map hits unknown cell {image}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if m.len() != from.len() {
        return Err(NctError::input("edge map names cells outside its source"));
    }
    FunctorMap::new(from, to, assignment)
}

/// Reads a presheaf diagram, checking every edge.
pub fn presheaf_from_json(text: &str) -> Result<CellularPresheaf> {
    let doc: PresheafJson = serde_json::from_str(text).map_err(|e| NctError::input(format!("bad presheaf JSON: {e}")))?;
    let n = doc.n;
    let mut atoms = Vec::with_capacity(doc.atoms.len());
    for a in &doc.atoms {
        atoms.push(match a {
            AtomJson::Grid { grid } => {
                if doc.indexing != Indexing::Delta || grid.len() != n {
                    return Err(NctError::input("grid atom outside Δ^×n indexing"));
                }
                Atom::Grid(MultiIndex(grid.clone()))
            }
            AtomJson::Theta { theta } => {
                let o = ThetaObj::parse(theta, n)?;
                Atom::representable(&TestObj::Theta(o), n)?
            }
            AtomJson::Nerve(x) => {
                let cat = x.to_ncat()?;
                if cat.n() != n {
                    return Err(NctError::input("atom in the wrong ambient dimension"));
                }
                Atom::Nerve { cat: Arc::new(cat), rep: None }
            }
        });
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let (Some(a), Some(b)) = (atoms.get(e.from), atoms.get(e.to)) else {
            return Err(NctError::input("edge between missing atoms"));
        };
        let map = match (&e.map, a, b) {
            (MapJson::Grid { grid }, Atom::Grid(m), Atom::Grid(k)) => {
                let f = MultiMor { dom: m.clone(), cod: k.clone(), maps: grid.clone() };
                let ok = f.maps.len() == n
                    && f.maps.iter().zip(&m.0).zip(&k.0).all(|((phi, &dm), &cm)| {
                        phi.len() == dm + 1 && phi.windows(2).all(|w| w[0] <= w[1]) && phi.iter().all(|&v| v <= cm)
                    });
                if !ok {
                    return Err(NctError::input("grid edge is not a morphism of Δ^×n"));
                }
                AtomMap::Grid(f)
            }
            (MapJson::Cells(m), Atom::Grid(_), Atom::Nerve { cat, .. }) => {
                AtomMap::Element(cell_map(&*a.category(n)?, cat, m)?)
            }
            (MapJson::Cells(m), Atom::Nerve { cat: x, .. }, Atom::Nerve { cat: y, .. }) => {
                AtomMap::Functor(cell_map(x, y, m)?)
            }
            _ => return Err(NctError::input("edge map does not fit its atoms")),
        };
        edges.push(Edge { from: e.from, to: e.to, map });
    }
    let p = CellularPresheaf { indexing: doc.indexing, n, atoms, edges };
    p.check()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::k_span;

    #[test]
    fn round_trip() {
        let p = CellularPresheaf::span_pushout(&k_span(1).unwrap(), Indexing::Theta);
        let text = presheaf_to_json(&p).unwrap();
        let q = presheaf_from_json(&text).unwrap();
        assert_eq!(presheaf_to_json(&q).unwrap(), text);
        assert_eq!(q.atoms.len(), 3);
        let mut r = CellularPresheaf::empty(Indexing::Delta, 2);
        r.add_atom(Atom::Grid(MultiIndex(vec![1, 2])));
        r.add_atom(Atom::Grid(MultiIndex(vec![1, 0])));
        r.add_edge(1, 0, AtomMap::Grid(MultiMor { dom: MultiIndex(vec![1, 0]), cod: MultiIndex(vec![1, 2]), maps: vec![vec![0, 1], vec![2]] }));
        let text = presheaf_to_json(&r).unwrap();
        assert_eq!(presheaf_from_json(&text).unwrap(), r);
    }
}
