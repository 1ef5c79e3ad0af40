use std::collections::HashMap;
use std::sync::Arc;

use super::{ThetaMor, ThetaObj};
use crate::error::{NctError, Result};
use crate::ncat::standard::point;
use crate::ncat::{build_from_keys, FunctorMap, NCat};

/// A cell `p -> q` with one component cell per factor of the hom.
type Key = (usize, usize, Vec<u32>);

struct Realized {
    cat: NCat,
    index: HashMap<Key, u32>,
}

/// The strict n-category of an object of Θ_level, level ≤ n.
///
/// Objects are `0..=m`; the hom from `p` to `q` is the product of the
/// realizations of the children `p+1..=q`, and composition along objects
/// concatenates component tuples.
pub fn realize(o: &ThetaObj, n: usize) -> Result<NCat> {
    Ok(realize_keyed(o, n)?.cat)
}

fn realize_keyed(o: &ThetaObj, n: usize) -> Result<Realized> {
    if o.level() > n {
        return Err(NctError::Dimension(format!("{o} has level {} above ambient {n}", o.level())));
    }
    if o.level() == 0 {
        let cat = point(n);
        let mut index = HashMap::new();
        index.insert((0, 0, Vec::new()), 0);
        return Ok(Realized { cat, index });
    }
    let parts: Vec<NCat> = o.kids().iter().map(|k| realize(k, n - 1)).collect::<Result<_>>()?;
    let m = o.m();
    let mut keys: Vec<Key> = (0..=m).map(|p| (p, p, Vec::new())).collect();
    for gap in 1..=m {
        for p in 0..=m - gap {
            let q = p + gap;
            let sizes: Vec<usize> = parts[p..q].iter().map(NCat::len).collect();
            if sizes.contains(&0) {
                continue;
            }
            let mut t = vec![0u32; gap];
            loop {
                keys.push((p, q, t.clone()));
                let mut k = gap;
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    t[k] += 1;
                    if (t[k] as usize) < sizes[k] {
                        done = false;
                        break;
                    }
                    t[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    let leaf = o.kids().iter().all(|k| k.level() == 0);
    let (cat, index) = build_from_keys(
        n,
        &keys,
        |(p, q, t)| {
            if p == q {
                p.to_string()
            } else if leaf {
                format!("{p}-{q}")
            } else {
                let names: Vec<&str> = t.iter().enumerate().map(|(i, &c)| parts[p + i].name(c)).collect();
                format!("{p}-{q}({})", names.join(","))
            }
        },
        |i, (p, q, t)| {
            if i == 1 {
                (*p, *p, Vec::new())
            } else if p == q {
                (*p, *q, Vec::new())
            } else {
                (*p, *q, t.iter().enumerate().map(|(k, &c)| parts[p + k].src(i - 1, c)).collect())
            }
        },
        |i, (p, q, t)| {
            if i == 1 {
                (*q, *q, Vec::new())
            } else if p == q {
                (*p, *q, Vec::new())
            } else {
                (*p, *q, t.iter().enumerate().map(|(k, &c)| parts[p + k].tgt(i - 1, c)).collect())
            }
        },
        |i, (q2, r, t2), (p, q, t1)| {
            if i == 1 {
                debug_assert_eq!(q, q2);
                let mut t = t1.clone();
                t.extend(t2);
                Some((*p, *r, t))
            } else if p == q {
                Some((*p, *q, Vec::new()))
            } else {
                let t = t2
                    .iter()
                    .zip(t1)
                    .enumerate()
                    .map(|(k, (&a, &b))| parts[p + k].comp(i - 1, a, b))
                    .collect::<Option<Vec<u32>>>()?;
                Some((*p, *q, t))
            }
        },
    )?;
    Ok(Realized { cat, index })
}

/// The functor `realize(dom) -> realize(cod)` of a Θ morphism.
pub fn realize_mor(f: &ThetaMor, n: usize) -> Result<FunctorMap> {
    let a = realize_keyed(&f.dom, n)?;
    let b = realize_keyed(&f.cod, n)?;
    let map = mor_assignment(f, n, &a, &b)?;
    Ok(FunctorMap::from_arcs(Arc::new(a.cat), Arc::new(b.cat), map))
}

fn mor_assignment(f: &ThetaMor, n: usize, a: &Realized, b: &Realized) -> Result<Vec<u32>> {
    if f.dom.level() == 0 {
        return Ok(vec![0]);
    }
    let mut inner: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    for i in 1..=f.dom.m() {
        for j in f.phi[i - 1] + 1..=f.phi[i] {
            let c = f.component(i, j).unwrap();
            inner.insert((i, j), realize_mor(c, n - 1)?.assignment().to_vec());
        }
    }
    let mut keys: Vec<(&Key, u32)> = a.index.iter().map(|(k, &v)| (k, v)).collect();
    keys.sort_by_key(|&(_, v)| v);
    let mut out = Vec::with_capacity(keys.len());
    for ((p, q, t), _) in keys {
        let (fp, fq) = (f.phi[*p], f.phi[*q]);
        let image: Key = if fp == fq {
            (fp, fp, Vec::new())
        } else {
            let mut u = Vec::with_capacity(fq - fp);
            for j in fp + 1..=fq {
                let i = (p + 1..=*q).find(|&i| f.phi[i - 1] < j && j <= f.phi[i]).unwrap();
                u.push(inner[&(i, j)][t[i - p - 1] as usize]);
            }
            (fp, fq, u)
        };
        out.push(*b.index.get(&image).ok_or_else(|| NctError::internal("realized morphism leaves its codomain"))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::{Budget, Ctx};
    use crate::ncat::gaunt::is_gaunt;
    use crate::ncat::iso::is_iso;
    use crate::ncat::standard::{cell, delta};
    use crate::ncat::validate;
    use crate::theta::{theta_enumerate_objects, theta_hom};

    #[test]
    fn cells_and_simplices() {
        let b = Budget::default();
        let c1 = ThetaObj::parse("[1; [0]]", 2).unwrap();
        assert!(is_iso(&realize(&c1, 2).unwrap(), &cell(1, 2).unwrap(), &b).unwrap());
        let c2 = ThetaObj::parse("[1; [1; [0]]]", 3).unwrap();
        assert!(is_iso(&realize(&c2, 3).unwrap(), &cell(2, 3).unwrap(), &b).unwrap());
        for m in 0..4 {
            assert!(is_iso(&realize(&ThetaObj::simplex(m), 1).unwrap(), &delta(m, 1).unwrap(), &b).unwrap());
        }
    }

    #[test]
    fn realization_is_gaunt_and_valid() {
        let ctx = Ctx::default();
        for o in theta_enumerate_objects(2, 5) {
            let x = realize(&o, 2).unwrap();
            assert!(validate(&x).is_valid(), "{o}");
            assert!(is_gaunt(&x, &ctx).unwrap().gaunt, "{o}");
        }
    }

    #[test]
    fn realization_is_fully_faithful_on_small_objects() {
        let objs = theta_enumerate_objects(2, 4);
        let ctx = Ctx::default();
        for a in &objs {
            for b in &objs {
                let homs = theta_hom(a, b, 1_000_000).unwrap();
                let (ra, rb) = (realize(a, 2).unwrap(), realize(b, 2).unwrap());
                let funs = ctx.functors(&ra, &rb).unwrap();
                assert_eq!(homs.len(), funs.len(), "{a} -> {b}");
                let mut images: Vec<Vec<u32>> =
                    homs.iter().map(|f| realize_mor(f, 2).unwrap().assignment().to_vec()).collect();
                images.sort();
                images.dedup();
                assert_eq!(images.len(), homs.len());
                for im in &images {
                    assert!(funs.contains(im));
                }
            }
        }
    }
}
