use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ThetaObj;
use crate::error::{NctError, Result};

/// A morphism `(φ; φ_ij)` of Θ_n.
///
/// `phi` lists the images of `0..=m`; `comps` lists φ_ij for `i` in `1..=m`
/// and `φ(i-1) < j ≤ φ(i)`, ordered by `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ThetaMor {
    pub dom: ThetaObj,
    pub cod: ThetaObj,
    pub phi: Vec<usize>,
    pub comps: Vec<ThetaMor>,
}

impl ThetaMor {
    pub fn identity(o: &ThetaObj) -> ThetaMor {
        ThetaMor {
            dom: o.clone(),
            cod: o.clone(),
            phi: (0..=o.m()).collect(),
            comps: o.kids().iter().map(ThetaMor::identity).collect(),
        }
    }

    /// Builds and type-checks a morphism.
    pub fn new(dom: &ThetaObj, cod: &ThetaObj, phi: Vec<usize>, comps: Vec<ThetaMor>) -> Result<ThetaMor> {
        let f = ThetaMor { dom: dom.clone(), cod: cod.clone(), phi, comps };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(NctError::input(format!("ill-typed Θ morphism: {msg}")));
        if self.dom.level() != self.cod.level() {
            return bad("levels differ");
        }
        if self.phi.len() != self.dom.m() + 1 || self.phi.windows(2).any(|w| w[0] > w[1]) {
            return bad("φ is not a monotone map on [m]");
        }
        if self.phi.iter().any(|&v| v > self.cod.m()) {
            return bad("φ leaves the codomain");
        }
        let mut k = 0;
        for i in 1..=self.dom.m() {
            for j in self.phi[i - 1] + 1..=self.phi[i] {
                let c = self.comps.get(k).ok_or_else(|| NctError::input("missing component"))?;
                if c.dom != self.dom.kids()[i - 1] || c.cod != self.cod.kids()[j - 1] {
                    return bad("component with wrong endpoints");
                }
                c.check()?;
                k += 1;
            }
        }
        if k != self.comps.len() {
            return bad("surplus components");
        }
        Ok(())
    }

    /// The component φ_ij.
    pub fn component(&self, i: usize, j: usize) -> Option<&ThetaMor> {
        let mut k = 0;
        for a in 1..=self.dom.m() {
            for b in self.phi[a - 1] + 1..=self.phi[a] {
                if (a, b) == (i, j) {
                    return self.comps.get(k);
                }
                k += 1;
            }
        }
        None
    }

    pub fn is_identity(&self) -> bool {
        *self == ThetaMor::identity(&self.dom)
    }
}

/// `g ∘ f`.
pub fn theta_compose(g: &ThetaMor, f: &ThetaMor) -> Result<ThetaMor> {
    if f.cod != g.dom {
        return Err(NctError::input(format!("cannot compose: {} is not {}", f.cod, g.dom)));
    }
    let phi: Vec<usize> = f.phi.iter().map(|&v| g.phi[v]).collect();
    let mut comps = Vec::new();
    for i in 1..=f.dom.m() {
        for k in phi[i - 1] + 1..=phi[i] {
            let j = (f.phi[i - 1] + 1..=f.phi[i])
                .find(|&j| g.phi[j - 1] < k && k <= g.phi[j])
                .expect("monotone intervals cover the image");
            let inner = theta_compose(g.component(j, k).unwrap(), f.component(i, j).unwrap())?;
            comps.push(inner);
        }
    }
    Ok(ThetaMor { dom: f.dom.clone(), cod: g.cod.clone(), phi, comps })
}

/// Monotone maps `[m] -> [k]`, lexicographically.
pub fn monotone_maps(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn go(m: usize, k: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            go(m, k, v, cur, out);
            cur.pop();
        }
    }
    go(m, k, 0, &mut cur, &mut out);
    out
}

/// All morphisms `a -> b`, in lexicographic order of `(φ, components)`.
pub fn theta_hom(a: &ThetaObj, b: &ThetaObj, max_count: u64) -> Result<Vec<ThetaMor>> {
    if a.level() != b.level() {
        return Err(NctError::input("Θ objects at different levels"));
    }
    let mut memo = HashMap::new();
    Ok((*hom_memo(a, b, max_count, &mut memo)?).clone())
}

type Memo = HashMap<(ThetaObj, ThetaObj), std::rc::Rc<Vec<ThetaMor>>>;

fn hom_memo(a: &ThetaObj, b: &ThetaObj, max_count: u64, memo: &mut Memo) -> Result<std::rc::Rc<Vec<ThetaMor>>> {
    if let Some(v) = memo.get(&(a.clone(), b.clone())) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    if a.level() == 0 {
        out.push(ThetaMor::identity(a));
    } else {
        for phi in monotone_maps(a.m(), b.m()) {
            let mut slots = Vec::new();
            for i in 1..=a.m() {
                for j in phi[i - 1] + 1..=phi[i] {
                    slots.push(hom_memo(&a.kids()[i - 1], &b.kids()[j - 1], max_count, memo)?);
                }
            }
            if slots.iter().any(|s| s.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; slots.len()];
            loop {
                out.push(ThetaMor {
                    dom: a.clone(),
                    cod: b.clone(),
                    phi: phi.clone(),
                    comps: idx.iter().zip(&slots).map(|(&i, s)| s[i].clone()).collect(),
                });
                if out.len() as u64 > max_count {
                    return Err(NctError::resource(format!("Θ hom-set {a} -> {b}"), max_count));
                }
                // Odometer, last slot fastest.
                let mut done = true;
                let mut p = slots.len();
                while p > 0 {
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] < slots[p].len() {
                        done = false;
                        break;
                    }
                    idx[p] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    let rc = std::rc::Rc::new(out);
    memo.insert((a.clone(), b.clone()), rc.clone());
    Ok(rc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{theta_cell, theta_enumerate_objects, ThetaObj};

    #[test]
    fn hom_counts() {
        let a = ThetaObj::parse("[1; [0]]", 2).unwrap();
        let b = ThetaObj::parse("[1; [1]]", 2).unwrap();
        assert_eq!(theta_hom(&a, &b, 1000).unwrap().len(), 4);
        assert_eq!(theta_hom(&ThetaObj::simplex(2), &ThetaObj::simplex(1), 1000).unwrap().len(), 4);
        assert_eq!(monotone_maps(2, 1).len(), 4);
    }

    #[test]
    fn delta_composition() {
        let p0 = ThetaObj::simplex(0);
        let p1 = ThetaObj::simplex(1);
        let f = ThetaMor::new(&p0, &p1, vec![0], vec![]).unwrap();
        let g = ThetaMor::new(&p1, &p1, vec![1, 1], vec![]).unwrap();
        assert_eq!(theta_compose(&g, &f).unwrap().phi, vec![1]);
    }

    #[test]
    fn identities_and_associativity() {
        let objs: Vec<ThetaObj> = theta_enumerate_objects(2, 4);
        let homs = |a: &ThetaObj, b: &ThetaObj| theta_hom(a, b, 100_000).unwrap();
        for a in &objs {
            assert!(homs(a, a).contains(&ThetaMor::identity(a)));
        }
        for a in &objs {
            for b in &objs {
                for f in homs(a, b) {
                    assert_eq!(theta_compose(&ThetaMor::identity(b), &f).unwrap(), f);
                    assert_eq!(theta_compose(&f, &ThetaMor::identity(a)).unwrap(), f);
                    for c in &objs {
                        let gs = homs(b, c);
                        for g in &gs {
                            let gf = theta_compose(g, &f).unwrap();
                            for d in &objs {
                                for h in homs(c, d) {
                                    let lhs = theta_compose(&h, &gf).unwrap();
                                    let rhs = theta_compose(&theta_compose(&h, g).unwrap(), &f).unwrap();
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(theta_cell(1, 2).is_ok());
    }
}
