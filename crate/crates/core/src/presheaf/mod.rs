//! Set-valued presheaves on Θ_n and Δ^×n, kept as finite colimits of nerve
//! atoms and representables, with evaluation, hom-sets and locality.

mod eval;
mod generators;
mod hom;
mod json;
mod recognize;

pub use eval::{Elem, Evaluation, Evaluator};
pub use generators::{
    build_generators, glob_collapse, s00_generators, s0_window, segal_delta_at, segal_theta_at, transport_fiber_product, window_cells, GeneratorLabel,
    GeneratorSet, Tagged,
};

pub use hom::{HomSet, LocalityReport, LocalityWitness};
pub use json::{presheaf_from_json, presheaf_to_json};
pub use recognize::{recognition_window, recognize_gaunt_nerve, segal_fault, Recognition, Rejection};



use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::colimit::SpanDiagram;
use crate::error::{NctError, Result};
use crate::ncat::{FunctorMap, NCat};
use crate::theta::{delta_n, delta_n_mor, realize, realize_mor, MultiIndex, MultiMor, ThetaMor, ThetaObj};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indexing {
    Theta,
    Delta,
}

/// An object of the index category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestObj {
    Theta(ThetaObj),
    Grid(MultiIndex),
}

impl TestObj {
    pub fn indexing(&self) -> Indexing {
        match self {
            TestObj::Theta(_) => Indexing::Theta,
            TestObj::Grid(_) => Indexing::Delta,
        }
    }

    /// The Θ object whose realization computes nerve values here.
    pub fn theta(&self) -> ThetaObj {
        match self {
            TestObj::Theta(o) => o.clone(),
            TestObj::Grid(m) => delta_n(m),
        }
    }

    /// The realization as an n-category in ambient dimension `n`.
    pub fn realize(&self, n: usize) -> Result<NCat> {
        realize(&self.theta().raised(n)?, n)
    }
}

impl fmt::Display for TestObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestObj::Theta(o) => write!(f, "{o}"),
            TestObj::Grid(m) => write!(f, "{m}"),
        }
    }
}

/// A morphism of the index category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestMor {
    Theta(ThetaMor),
    Grid(MultiMor),
}

impl TestMor {
    pub fn dom(&self) -> TestObj {
        match self {
            TestMor::Theta(f) => TestObj::Theta(f.dom.clone()),
            TestMor::Grid(f) => TestObj::Grid(f.dom.clone()),
        }
    }

    pub fn cod(&self) -> TestObj {
        match self {
            TestMor::Theta(f) => TestObj::Theta(f.cod.clone()),
            TestMor::Grid(f) => TestObj::Grid(f.cod.clone()),
        }
    }

    pub fn realize(&self, n: usize) -> Result<FunctorMap> {
        let theta = match self {
            TestMor::Theta(f) => f.clone(),
            TestMor::Grid(f) => delta_n_mor(f),
        };
        if theta.dom.level() != n {
            return Err(NctError::input("test morphism at the wrong level"));
        }
        realize_mor(&theta, n)
    }
}

/// One piece of a cellular presheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// The nerve of a gaunt n-category; `rep` records a Θ object it realizes.
    Nerve { cat: Arc<NCat>, rep: Option<ThetaObj> },
    /// The representable presheaf `j(m)` on Δ^×n.
    Grid(MultiIndex),
}

impl Atom {
    pub fn nerve(cat: &NCat) -> Atom {
        Atom::Nerve { cat: Arc::new(cat.clone()), rep: None }
    }

    /// The representable at a test object.
    pub fn representable(t: &TestObj, n: usize) -> Result<Atom> {
        Ok(match t {
            TestObj::Theta(o) => Atom::Nerve { cat: Arc::new(t.realize(n)?), rep: Some(o.clone()) },
            TestObj::Grid(m) => Atom::Grid(m.clone()),
        })
    }

    /// The test object representing this atom, if any.
    pub fn represented(&self) -> Option<TestObj> {
        match self {
            Atom::Nerve { rep: Some(o), .. } => Some(TestObj::Theta(o.clone())),
            Atom::Nerve { rep: None, .. } => None,
            Atom::Grid(m) => Some(TestObj::Grid(m.clone())),
        }
    }

    /// The n-category whose functors out of it are the maps out of this atom into a nerve.
    pub fn category(&self, n: usize) -> Result<Arc<NCat>> {
        match self {
            Atom::Nerve { cat, .. } => Ok(cat.clone()),
            Atom::Grid(m) => Ok(Arc::new(TestObj::Grid(m.clone()).realize(n)?)),
        }
    }
}

/// A map between atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomMap {
    /// Between nerve atoms.
    Functor(FunctorMap),
    /// Between representables of Δ^×n.
    Grid(MultiMor),
    /// From `j(m)` to a nerve atom: an element of its value at `m`.
    Element(FunctorMap),
}

impl AtomMap {
    /// The underlying functor between the atoms' categories.
    pub fn functor(&self, n: usize) -> Result<FunctorMap> {
        match self {
            AtomMap::Functor(f) | AtomMap::Element(f) => Ok(f.clone()),
            AtomMap::Grid(g) => TestMor::Grid(g.clone()).realize(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub map: AtomMap,
}

/// The colimit of nerves of `atoms` along `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularPresheaf {
    pub indexing: Indexing,
    pub n: usize,
    pub atoms: Vec<Atom>,
    pub edges: Vec<Edge>,
}

impl CellularPresheaf {
    pub fn empty(indexing: Indexing, n: usize) -> Self {
        CellularPresheaf { indexing, n, atoms: Vec::new(), edges: Vec::new() }
    }

    /// The single-atom nerve of `x`.
    pub fn nerve(x: &NCat, indexing: Indexing) -> Self {
        CellularPresheaf { indexing, n: x.n(), atoms: vec![Atom::nerve(x)], edges: Vec::new() }
    }

    /// The representable presheaf at `t`.
    pub fn representable(t: &TestObj, n: usize) -> Result<Self> {
        Ok(CellularPresheaf { indexing: t.indexing(), n, atoms: vec![Atom::representable(t, n)?], edges: Vec::new() })
    }

    /// The presheaf pushout `νX ∪^{νA} νY` of a span.
    pub fn span_pushout(d: &SpanDiagram, indexing: Indexing) -> Self {
        let n = d.apex().n();
        CellularPresheaf {
            indexing,
            n,
            atoms: vec![Atom::nerve(d.left.target()), Atom::nerve(d.right.target()), Atom::nerve(d.apex())],
            edges: vec![
                Edge { from: 2, to: 0, map: AtomMap::Functor(d.left.clone()) },
                Edge { from: 2, to: 1, map: AtomMap::Functor(d.right.clone()) },
            ],
        }
    }

    /// A single nerve `νY` (one nerve atom, no edges).
    pub fn as_single_nerve(&self) -> Option<&Arc<NCat>> {
        match (self.atoms.as_slice(), self.edges.is_empty()) {
            ([Atom::Nerve { cat, .. }], true) => Some(cat),
            _ => None,
        }
    }

    pub fn add_atom(&mut self, a: Atom) -> usize {
        self.atoms.push(a);
        self.atoms.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, map: AtomMap) {
        self.edges.push(Edge { from, to, map });
    }

    /// Checks that every edge is well-typed between its atoms.
    pub fn check(&self) -> Result<()> {
        for e in &self.edges {
            let (a, b) = (self.atoms.get(e.from), self.atoms.get(e.to));
            let (Some(a), Some(b)) = (a, b) else {
                return Err(NctError::input("edge between missing atoms"));
            };
            let ok = match (&e.map, a, b) {
                (AtomMap::Functor(f), Atom::Nerve { cat: x, .. }, Atom::Nerve { cat: y, .. }) => {
                    f.source().shape_key() == x.shape_key() && f.target().shape_key() == y.shape_key()
                }
                (AtomMap::Grid(g), Atom::Grid(m), Atom::Grid(k)) => g.dom == *m && g.cod == *k,
                (AtomMap::Element(f), Atom::Grid(_), Atom::Nerve { cat: y, .. }) => {
                    f.target().shape_key() == y.shape_key()
                }
                _ => false,
            };
            if !ok {
                return Err(NctError::input(format!("edge {} -> {} is ill-typed", e.from, e.to)));
            }
        }
        Ok(())
    }
}

/// A map `U -> V` sending each atom of `U` into one atom of `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    pub source: CellularPresheaf,
    pub target: CellularPresheaf,
    /// For each source atom, the target atom and the map into it.
    pub legs: Vec<(usize, AtomMap)>,
}

impl PresheafMap {
    /// The map from a span's presheaf pushout to the nerve of a cocone vertex.
    pub fn from_cocone(d: &SpanDiagram, to_left: &FunctorMap, to_right: &FunctorMap, indexing: Indexing) -> Result<Self> {
        let source = CellularPresheaf::span_pushout(d, indexing);
        let target = CellularPresheaf::nerve(to_left.target(), indexing);
        let apex = d.left.then(to_left)?;
        Ok(PresheafMap {
            source,
            target,
            legs: vec![
                (0, AtomMap::Functor(to_left.clone())),
                (0, AtomMap::Functor(to_right.clone())),
                (0, AtomMap::Functor(apex)),
            ],
        })
    }

    /// The identity-shaped map `U -> V` for a single-atom source into a single-atom target.
    pub fn between_atoms(source: CellularPresheaf, target: CellularPresheaf, map: AtomMap) -> Self {
        PresheafMap { source, target, legs: vec![(0, map)] }
    }
}
