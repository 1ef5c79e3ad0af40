use nct_core::budget::{Budget, Ctx};
use nct_core::colimit::{k_pushout, pushout, verify_cocone_universal, wedge_at_endpoints, SpanDiagram};
use nct_core::ncat::decompose::{decompose_cell_pullback, cell_maps, Fiber, PullbackCase};
use nct_core::ncat::gaunt::is_gaunt;
use nct_core::ncat::iso::is_iso;
use nct_core::ncat::json::{from_json, to_json};
use nct_core::ncat::limits::{fiber_product, product};
use nct_core::ncat::standard::*;
use nct_core::ncat::{fun_enum, validate, FunctorMap, NCat};

/// Every assignment checked against the functor laws.
fn brute_force_count(a: &NCat, x: &NCat) -> usize {
    let (la, lx) = (a.len(), x.len());
    let mut count = 0;
    let mut map = vec![0u32; la];
    loop {
        if FunctorMap::new(a, x, map.clone()).is_ok() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == la {
                return count;
            }
            map[i] += 1;
            if (map[i] as usize) < lx {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

fn b() -> Budget {
    Budget::default()
}

#[test]
fn standard_cell_counts() {
    for n in 0..=3 {
        for k in 0..=n {
            let c = cell(k, n).unwrap();
            assert_eq!(c.len(), 2 * k + 1);
            assert!(validate(&c).is_valid());
            let bd = boundary(k, n).unwrap();
            assert_eq!(bd.len(), 2 * k);
            assert!(validate(&bd).is_valid());
        }
    }
    assert_eq!(walking_iso(1).unwrap().len(), 4);
    for m in 0..=4 {
        assert_eq!(delta(m, 1).unwrap().len(), (m + 1) * (m + 2) / 2);
    }
    assert!(cell(3, 2).is_err());
}

#[test]
fn functor_counts_match_brute_force() {
    let objs = vec![
        point(2),
        cell(1, 2).unwrap(),
        cell(2, 2).unwrap(),
        boundary(2, 2).unwrap(),
        walking_iso(2).unwrap(),
        delta(2, 2).unwrap(),
    ];
    for a in &objs {
        for x in &objs {
            if (x.len() as f64).powi(a.len() as i32) > 2e6 {
                continue;
            }
            let fast = fun_enum(a, x, &b()).unwrap().len();
            assert_eq!(fast, brute_force_count(a, x), "{:?} -> {:?}", a.names(), x.names());
        }
    }
}

#[test]
fn functor_count_examples() {
    let c0 = point(1);
    let c1 = cell(1, 1).unwrap();
    let e = walking_iso(1).unwrap();
    assert_eq!(fun_enum(&c0, &c1, &b()).unwrap().len(), 2);
    assert_eq!(fun_enum(&c1, &c1, &b()).unwrap().len(), 3);
    assert_eq!(fun_enum(&e, &e, &b()).unwrap().len(), 4);
}

#[test]
fn broken_unit_is_reported() {
    let mut c1 = cell(1, 1).unwrap();
    let f = c1.cell("^o").unwrap();
    let a = c1.cell("+").unwrap();
    c1.set_comp_unchecked(1, f, a, a);
    let report = validate(&c1);
    let v = report.find("unit").expect("unit violation");
    assert!(v.witness.contains(&"^o".to_string()) && v.witness.contains(&"+".to_string()));
}

#[test]
fn suspension_examples() {
    let c0 = point(2);
    assert!(is_iso(&suspension(&c0).unwrap(), &cell(1, 2).unwrap(), &b()).unwrap());
    let se = suspension(&NCat::empty(2)).unwrap();
    assert!(is_iso(&se, &boundary(1, 2).unwrap(), &b()).unwrap());
    let sigma_e = suspension(&walking_iso(2).unwrap()).unwrap();
    assert_eq!(sigma_e.len(), 6);
    assert!(validate(&sigma_e).is_valid());
    assert!(!is_gaunt(&sigma_e, &Ctx::default()).unwrap().gaunt);
    assert!(is_iso(&cell(2, 2).unwrap(), &suspend_times(&point(2), 2).unwrap(), &b()).unwrap());
    assert!(!is_iso(&cell(1, 2).unwrap(), &boundary(2, 2).unwrap(), &b()).unwrap());
}

#[test]
fn gauntness() {
    let ctx = Ctx::default();
    for k in 0..=3 {
        let r = is_gaunt(&cell(k, 3).unwrap(), &ctx).unwrap();
        assert!(r.gaunt && r.criteria_agree);
    }
    let e = walking_iso(1).unwrap();
    let r = is_gaunt(&e, &ctx).unwrap();
    assert!(!r.gaunt && r.criteria_agree);
    assert_eq!(r.failing_level, Some(1));
    assert!(is_gaunt(&delta(3, 1).unwrap(), &ctx).unwrap().gaunt);
}

#[test]
fn products_and_fiber_products() {
    let c1 = cell(1, 1).unwrap();
    let p = product(&c1, &c1).unwrap();
    assert_eq!(p.object.len(), 9);
    assert!(validate(&p.object).is_valid());
    let c2 = cell(2, 2).unwrap();
    let c1 = cell(1, 2).unwrap();
    let bang = nct_core::ncat::limits::to_point(&c1);
    let sbang = suspend_map(&bang).unwrap();
    assert_eq!(sbang.source().len(), c2.len());
    let fp = fiber_product(&sbang, &sbang).unwrap();
    assert!(validate(&fp.object).is_valid());
}

#[test]
fn max_sub_and_opposites() {
    let c2 = cell(2, 2).unwrap();
    assert!(is_iso(&c2.max_sub_k(1), &boundary(2, 2).unwrap(), &b()).unwrap());
    assert_eq!(c2.max_sub_k(2).shape_key(), c2.shape_key());
    assert_eq!(walking_iso(1).unwrap().max_sub_k(0).len(), 2);
    let x = delta(2, 2).unwrap();
    for flips in [[false, false], [true, false], [false, true], [true, true]] {
        let y = x.opposite_r(&flips);
        assert!(validate(&y).is_valid());
        assert_eq!(y.opposite_r(&flips).shape_key(), x.shape_key());
        assert!(is_iso(&c2.opposite_r(&flips), &c2, &b()).unwrap());
    }
    assert_eq!(x.opposite_r(&[false, false]).shape_key(), x.shape_key());
}

#[test]
fn pushout_calculus() {
    for n in 1..=3 {
        for k in 1..=n {
            let ck = cell(k - 1, n).unwrap();
            let bd = boundary(k - 1, n).unwrap();
            let incl = FunctorMap::new(&bd, &ck, (0..bd.len() as u32).collect()).unwrap();
            let po = pushout(&SpanDiagram::new(incl.clone(), incl).unwrap(), &b()).unwrap();
            assert!(is_iso(&po.object, &boundary(k, n).unwrap(), &b()).unwrap(), "k={k} n={n}");
        }
    }
    let c1 = cell(1, 1).unwrap();
    let c0 = point(1);
    let at = |name: &str| FunctorMap::new(&c0, &c1, vec![c1.cell(name).unwrap()]).unwrap();
    let span = SpanDiagram::new(at("-"), at("+")).unwrap();
    let po = pushout(&span, &b()).unwrap();
    assert_eq!(po.object.len(), 6);
    assert!(is_iso(&po.object, &delta(2, 1).unwrap(), &b()).unwrap());
    let ctx = Ctx::default();
    let check = verify_cocone_universal(&span, &po.object, &po.to_left, &po.to_right, &[c0.clone(), c1.clone()], &ctx).unwrap();
    assert!(check.universal);
    let (k1, _) = k_pushout(1, &b()).unwrap();
    assert!(is_iso(&k1, &walking_iso(1).unwrap(), &b()).unwrap());
    let w = wedge_at_endpoints(&c1, &c1).unwrap();
    assert!(is_iso(&w.object, &delta(2, 1).unwrap(), &b()).unwrap());
    let w0 = wedge_at_endpoints(&c0, &c1).unwrap();
    assert!(is_iso(&w0.object, &c1, &b()).unwrap());
}

#[test]
fn decomposition_cases() {
    let n = 3;
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                for phi in cell_maps(i, j, n, &b()).unwrap() {
                    for psi in cell_maps(k, j, n, &b()).unwrap() {
                        let d = decompose_cell_pullback(&phi, &psi, &b()).unwrap();
                        assert!(d.verified, "i={i} j={j} k={k} {:?} {:?}", phi.assignment(), psi.assignment());
                    }
                }
            }
        }
    }
    let c1 = cell(1, 1).unwrap();
    let c0 = point(1);
    let at = |name: &str| FunctorMap::new(&c0, &c1, vec![c1.cell(name).unwrap()]).unwrap();
    let d = decompose_cell_pullback(&at("+"), &at("-"), &b()).unwrap();
    assert_eq!(d.case, PullbackCase::Disjoint);
    assert_eq!(d.fiber, Fiber::Empty);
    assert!(d.pullback.object.is_empty());
}

#[test]
fn json_round_trip() {
    let x = realize_like();
    let text = to_json(&x);
    let y = from_json(&text).unwrap();
    assert_eq!(to_json(&y), text);
}

fn realize_like() -> NCat {
    product(&cell(1, 2).unwrap(), &cell(2, 2).unwrap()).unwrap().object
}
