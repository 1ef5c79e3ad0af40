use serde_json::{json, Value};

use super::corpus::{corpus_generate, gaunt_part, Specimen, THETA_CORPUS_SIZE};
use super::{Suite, SuiteConfig, Tally, WindowInfo};
use crate::budget::Ctx;
use crate::colimit::{k_pushout, pushout, verify_cocone_universal, SpanDiagram};
use crate::error::{NctError, Result};
use crate::ncat::decompose::{cell_maps, decompose_cell_pullback};
use crate::ncat::gaunt::is_gaunt;
use crate::ncat::iso::is_iso;
use crate::ncat::limits::product;
use crate::ncat::standard::{boundary, cell, coproduct, delta, suspension, walking_iso};
use crate::ncat::{validate, FunctorMap, NCat};
use crate::presheaf::{
    recognition_window, recognize_gaunt_nerve, s00_generators, s0_window, segal_fault, window_cells,
    CellularPresheaf, Evaluator, Indexing, Rejection, TestMor, TestObj,
};
use crate::symmetry::{
    autos_of_globular, bits, natural_endo_probe, retracts_of, upsilon_window, upsilon_window_with, verify_r_group,
    FunctorFamily, RETRACT_SCAN_LIMIT,
};
use crate::theta::{delta_n, delta_n_mor, grid_retract, multi_hom, theta_enumerate_objects, MultiIndex};

pub(super) fn run(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    match cfg.suite {
        Suite::KernelLaws => kernel_laws(cfg, t),
        Suite::PushoutCalculus => pushout_calculus(cfg, ctx, t),
        Suite::S00Iso => s00_iso(cfg, ctx, t),
        Suite::GauntLocality => gaunt_locality(cfg, ctx, t),
        Suite::NerveRecognition => nerve_recognition(cfg, ctx, t),
        Suite::GridsRetracts => grids_retracts(cfg, ctx, t),
        Suite::Autos => autos(cfg, ctx, t),
        Suite::UpsilonClosure => upsilon_closure(cfg, ctx, t),
        Suite::DeltaRestriction => delta_restriction(cfg, ctx, t),
    }
}

/// Default node bound for Θ_n windows.
pub fn theta_window_default(n: usize) -> usize {
    match n {
        1 | 2 => 6,
        3 => 5,
        _ => 4,
    }
}

fn corpus(cfg: &SuiteConfig) -> Result<Vec<Specimen>> {
    corpus_generate(cfg.n, cfg.seed, cfg.random_objects, THETA_CORPUS_SIZE)
}

fn corpus_window(cfg: &SuiteConfig, size: usize, objects: usize) -> WindowInfo {
    WindowInfo {
        bound: size,
        description: format!(
            "corpus: cells, boundaries, E, Δ[2], C_1 × C_1, Θ_{} objects with at most {size} nodes, {} random posets (seed {})",
            cfg.n, cfg.random_objects, cfg.seed
        ),
        objects,
    }
}

fn inclusion_by_names(from: &NCat, to: &NCat) -> Result<FunctorMap> {
    let map = from
        .names()
        .iter()
        .map(|nm| to.cell(nm).ok_or_else(|| NctError::internal(format!("cell {nm} missing"))))
        .collect::<Result<Vec<_>>>()?;
    FunctorMap::new(from, to, map)
}

fn first_violations(x: &NCat) -> Value {
    let r = validate(x);
    json!(r.violations.iter().take(3).collect::<Vec<_>>())
}

fn kernel_laws(cfg: &SuiteConfig, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let size = cfg.window.unwrap_or(THETA_CORPUS_SIZE);
    let base = corpus_generate(n, cfg.seed, cfg.random_objects, size)?;
    let mut outputs: Vec<Specimen> = base.clone();
    let flips: Vec<Vec<bool>> = (0..1u32 << n).map(|m| (0..n).map(|i| m >> i & 1 == 1).collect()).collect();
    let c0 = cell(0, n)?;
    let c1 = cell(1, n)?;
    for s in base.iter().filter(|s| s.object.len() <= 12) {
        for f in flips.iter().skip(1) {
            outputs.push(Specimen { name: format!("r_{} of {}", bits(f), s.name), object: s.object.opposite_r(f) });
        }
        outputs.push(Specimen { name: format!("{} + C_0", s.name), object: coproduct(&s.object, &c0)?.0 });
        if s.object.len() <= 6 {
            outputs.push(Specimen { name: format!("{} × C_1", s.name), object: product(&s.object, &c1)?.object });
        }
        if s.object.top_dim() < n {
            outputs.push(Specimen { name: format!("suspension of {}", s.name), object: suspension(&s.object)? });
        }
    }
    if cfg.fault {
        let mut broken = c1.clone();
        let arrow = broken.cells().find(|&c| !broken.is_identity(1, c)).expect("C_1 has an arrow");
        let top = broken.tgt(1, arrow);
        broken.set_comp_unchecked(1, top, arrow, top);
        outputs.push(Specimen { name: "C_1 with a broken unit".into(), object: broken });
    }
    for s in &outputs {
        t.check(validate(&s.object).is_valid(), "axioms hold", || {
            json!({ "object": s.name, "violations": first_violations(&s.object) })
        });
    }
    // Broken copies must be caught, with the broken cells as witness.
    for s in &base {
        let x = &s.object;
        let Some(arrow) = x.cells().find(|&c| !x.is_identity(1, c)) else {
            continue;
        };
        let top = x.tgt(1, arrow);
        let mut unit = x.clone();
        unit.set_comp_unchecked(1, top, arrow, top);
        let report = validate(&unit);
        let expected = vec![x.name(top).to_string(), x.name(arrow).to_string()];
        let caught = report.violations.iter().any(|v| v.axiom == "unit" && v.witness == expected);
        t.check(caught, "broken unit reported", || {
            json!({ "object": s.name, "expected witness": expected, "violations": first_violations(&unit) })
        });
        let mut source = x.clone();
        source.set_src_unchecked(1, arrow, arrow);
        let report = validate(&source);
        let name = x.name(arrow).to_string();
        let caught = report.violations.iter().any(|v| v.axiom == "idempotence" && v.witness.contains(&name));
        t.check(caught, "broken source reported", || json!({ "object": s.name, "cell": x.name(arrow) }));
    }
    Ok(corpus_window(cfg, size, outputs.len()))
}

fn pushout_calculus(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let tests: Vec<NCat> = (0..=n).map(|k| cell(k, n)).collect::<Result<_>>()?;
    for k in 1..=n {
        let (c, b) = (cell(k - 1, n)?, boundary(k - 1, n)?);
        let inc = inclusion_by_names(&b, &c)?;
        let d = SpanDiagram::new(inc.clone(), inc)?;
        let p = pushout(&d, &ctx.budget)?;
        let expected = if cfg.fault { cell(k, n)? } else { boundary(k, n)? };
        let iso = is_iso(&p.object, &expected, &ctx.budget)?;
        t.check(iso, "glued cells form the boundary", || {
            json!({ "k": k, "pushout cells": p.object.len(), "expected cells": expected.len() })
        });
        let cc = verify_cocone_universal(&d, &p.object, &p.to_left, &p.to_right, &tests, ctx)?;
        t.check(cc.universal, "cocone universal", || json!({ "k": k, "check": cc }));
    }
    let mut dims = vec![1];
    if n > 1 {
        dims.push(n);
    }
    for m in dims {
        let (object, p) = k_pushout(m, &ctx.budget)?;
        let expected = if cfg.fault { delta(1, m)? } else { walking_iso(m)? };
        let iso = is_iso(&object, &expected, &ctx.budget)?;
        t.check(iso, "contracted 3-simplex is E", || json!({ "ambient": m, "pushout cells": object.len() }));
        let cells: Vec<NCat> = (0..=m).map(|k| cell(k, m)).collect::<Result<_>>()?;
        let d = crate::colimit::k_span(m)?;
        let cc = verify_cocone_universal(&d, &object, &p.to_left, &p.to_right, &cells, ctx)?;
        t.check(cc.universal, "cocone universal", || json!({ "ambient": m, "check": cc }));
    }
    Ok(WindowInfo { bound: n, description: format!("test objects C_0..C_{n}"), objects: n + 1 })
}

fn s00_iso(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let bound = cfg.window.unwrap_or(theta_window_default(n));
    for i in 0..=n {
        for a in i..=n {
            for b in a..=n {
                for phi in cell_maps(a, i, n, &ctx.budget)? {
                    for psi in cell_maps(b, i, n, &ctx.budget)? {
                        let cp = decompose_cell_pullback(&phi, &psi, &ctx.budget)?;
                        t.check(cp.verified, "fiber product of cells is a pushout of cells", || {
                            json!({
                                "over": i, "left": a, "right": b,
                                "left map": phi.assignment(), "right map": psi.assignment(),
                                "case": format!("{:?}", cp.case),
                            })
                        });
                    }
                }
            }
        }
    }
    let gens = s00_generators(n, &ctx.budget, cfg.fault)?;
    let window = recognition_window(Indexing::Theta, n, bound)?;
    let ev = Evaluator::new(ctx, n);
    for g in gens.iter().filter(|g| g.clause == "(a)" || g.clause == "(c)") {
        for obj in &window {
            let (u, v, ok) = ev.bijective_at(&g.map, obj)?;
            t.check(ok, "values bijective", || {
                json!({ "clause": g.clause, "generator": g.name, "test": obj.to_string(), "source count": u, "target count": v })
            });
        }
    }
    Ok(WindowInfo {
        bound,
        description: format!("Θ_{n} objects with at most {bound} nodes"),
        objects: window.len(),
    })
}

fn gaunt_locality(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let hb = cfg.window.unwrap_or(3);
    let hs = window_cells(n, hb)?;
    let gens = s0_window(n, &hs, ctx)?;
    let all = corpus(cfg)?;
    let mut objects = gaunt_part(&all, ctx)?;
    if cfg.fault {
        objects.push(Specimen { name: "E".into(), object: walking_iso(n)? });
    }
    let ev = Evaluator::new(ctx, n);
    for s in &objects {
        let x = CellularPresheaf::nerve(&s.object, Indexing::Theta);
        for g in &gens {
            let report = ev.is_local(&x, &g.map)?;
            t.check(report.local, "nerve is local", || {
                json!({ "object": s.name, "clause": g.clause, "generator": g.name, "report": report })
            });
        }
    }
    // Locality must not follow from bijectivity on values.
    let probe = recognition_window(Indexing::Theta, n, 4)?;
    for clause in ["(b)", "(d)"] {
        let mut found = None;
        'search: for g in gens.iter().filter(|g| g.clause == clause) {
            for obj in &probe {
                let (u, v, ok) = ev.bijective_at(&g.map, obj)?;
                if !ok {
                    found = Some(json!({ "generator": g.name, "test": obj.to_string(), "source count": u, "target count": v }));
                    break 'search;
                }
            }
        }
        t.check(found.is_some(), "a generator is not bijective on values", || json!({ "clause": clause }));
        if let Some(e) = found {
            t.evidence(&format!("type {clause} not bijective on values"), e);
        }
    }
    t.evidence("generators", json!({ "count": gens.len(), "transport objects": hs.len() }));
    Ok(WindowInfo {
        bound: hb,
        description: format!(
            "fiber-product transports along cells and Θ_{n} objects with at most {hb} nodes; {} gaunt corpus objects",
            objects.len()
        ),
        objects: hs.len(),
    })
}

fn rejected_by(r: &Option<Rejection>, prefix: &str) -> bool {
    matches!(r, Some(Rejection::Generator { family, .. }) if family.starts_with(prefix))
}

fn nerve_recognition(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let theta_bound = cfg.window.unwrap_or(theta_window_default(n));
    let delta_bound = n + 1;
    let all = corpus(cfg)?;
    let mut objects = gaunt_part(&all, ctx)?;
    if cfg.fault {
        objects.push(Specimen { name: "E".into(), object: walking_iso(n)? });
    }
    let ev = Evaluator::new(ctx, n);
    let mut sizes = Vec::new();
    for (ix, bound) in [(Indexing::Theta, theta_bound), (Indexing::Delta, delta_bound)] {
        sizes.push(recognition_window(ix, n, bound)?.len());
        for s in &objects {
            let r = recognize_gaunt_nerve(&ev, &CellularPresheaf::nerve(&s.object, ix), bound)?;
            let same = match &r.reconstruction {
                Some(y) if r.accepted => is_iso(y, &s.object, &ctx.budget)?,
                _ => false,
            };
            t.check(same, "accepted and reconstructed", || {
                json!({ "object": s.name, "indexing": ix, "rejection": r.rejection })
            });
        }
        let e = recognize_gaunt_nerve(&ev, &CellularPresheaf::nerve(&walking_iso(n)?, ix), bound)?;
        t.check(!e.accepted && rejected_by(&e.rejection, "Comp"), "E rejected by completeness", || {
            json!({ "indexing": ix, "rejection": e.rejection })
        });
        let f = recognize_gaunt_nerve(&ev, &segal_fault(ix, n)?, bound)?;
        t.check(!f.accepted && rejected_by(&f.rejection, "Segal"), "Segal fault rejected", || {
            json!({ "indexing": ix, "rejection": f.rejection })
        });
        if let Some(rej) = &e.rejection {
            t.evidence("E rejection", json!({ "indexing": ix, "rejection": rej }));
        }
    }
    Ok(WindowInfo {
        bound: theta_bound,
        description: format!(
            "Θ_{n} objects with at most {theta_bound} nodes ({} objects); Δ^×{n} indices with coordinate sum at most {delta_bound} ({} objects)",
            sizes[0], sizes[1]
        ),
        objects: sizes[0] + sizes[1],
    })
}

fn grids_retracts(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let bound = cfg.window.unwrap_or(theta_window_default(n));
    let objs = theta_enumerate_objects(n, bound);
    for o in &objs {
        let gr = grid_retract(o)?;
        let ok = gr.verify()? && gr.grid == delta_n(&gr.index);
        t.check(ok, "retract of a grid", || json!({ "object": o.to_string(), "grid": gr.index.to_string() }));
    }
    let c1 = cell(1, n)?;
    let square = product(&c1, &c1)?.object;
    let certs = retracts_of(&square, ctx)?;
    for c in &certs {
        t.check(c.verify()?, "retraction after section is the identity", || json!({ "retract cells": c.object.names() }));
    }
    let wanted = if cfg.fault { delta(3, n)? } else { delta(2, n)? };
    let mut found = false;
    for c in &certs {
        found |= is_iso(&c.object, &wanted, &ctx.budget)?;
    }
    t.check(found, "Δ[2] is a retract of C_1 × C_1", || json!({ "retracts": certs.len() }));
    let all = corpus(cfg)?;
    for s in gaunt_part(&all, ctx)?.iter().filter(|s| s.object.len() <= RETRACT_SCAN_LIMIT.min(14)) {
        for c in retracts_of(&s.object, ctx)? {
            let gaunt = is_gaunt(&c.object, ctx)?.gaunt;
            t.check(gaunt, "retracts of gaunt objects are gaunt", || {
                json!({ "object": s.name, "retract cells": c.object.names() })
            });
        }
    }
    Ok(WindowInfo { bound, description: format!("Θ_{n} objects with at most {bound} nodes"), objects: objs.len() })
}

fn autos(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let autos = autos_of_globular(n, ctx)?;
    t.check(autos.len() == 1 << n, "automorphism count is 2^n", || json!({ "count": autos.len(), "expected": 1u64 << n }));
    let mut matched: Vec<String> = Vec::new();
    for a in &autos {
        t.check(a.flips.is_some(), "automorphism is some r_I", || json!({ "action": a.action }));
        if let Some(f) = &a.flips {
            matched.push(bits(f));
        }
    }
    matched.sort();
    matched.dedup();
    t.check(matched.len() == autos.len(), "distinct automorphisms match distinct r_I", || json!({ "matched": matched }));
    t.evidence("matched r_I", json!(matched));
    let objects: Vec<NCat> = corpus(cfg)?.into_iter().map(|s| s.object).collect();
    let report = verify_r_group(n, &objects, ctx)?;
    t.check(report.group_law, "r_I r_J = r_(I xor J)", || json!({ "failures": report.failures.iter().take(5).collect::<Vec<_>>() }));
    t.check(report.gaunt_preserved, "r_I preserves gauntness", || json!({ "failures": report.failures.iter().take(5).collect::<Vec<_>>() }));
    if cfg.fault {
        // r_I r_I against r_(I or I) = r_I.
        for x in &objects {
            let flips: Vec<bool> = (0..n).map(|i| i == 0).collect();
            let same = x.opposite_r(&flips).opposite_r(&flips) == x.opposite_r(&flips);
            t.check(same, "r_I r_J = r_(I or J)", || json!({ "cells": x.names() }));
        }
    }
    let cells: Vec<NCat> = (0..=n).map(|k| cell(k, n)).collect::<Result<_>>()?;
    let natural = natural_endo_probe(&cells, FunctorFamily::All, ctx)?;
    t.check(natural.len() == 1, "identity is the only natural endo-transformation on the cells", || {
        json!({ "families": natural.len() })
    });
    Ok(WindowInfo {
        bound: n,
        description: format!("globular category on C_0..C_{n}; {} corpus objects for the group law", objects.len()),
        objects: n + 1,
    })
}

/// Cells of `Δ^[4]` at n = 1, the size the fiber-product chain needs.
const SIMPLEX_CHAIN_SIZE: usize = 15;

fn upsilon_closure(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    if cfg.n != 1 {
        return Err(NctError::input("upsilon-closure runs at n = 1"));
    }
    let bound = cfg.window.unwrap_or(10);
    let rounds = cfg.n + 1;
    let chain = upsilon_window_with(1, SIMPLEX_CHAIN_SIZE, rounds, !cfg.fault, ctx)?;
    for m in 0..=4 {
        let d = delta(m, 1)?;
        let mut found = false;
        for x in &chain.objects {
            if is_iso(x, &d, &ctx.budget)? {
                found = true;
                break;
            }
        }
        t.check(found, "Δ[m] in the window", || json!({ "m": m, "window objects": chain.objects.len() }));
    }
    t.evidence(
        "containment window",
        json!({ "size bound": SIMPLEX_CHAIN_SIZE, "rounds": rounds + 1, "objects": chain.objects.len(), "added per round": chain.added }),
    );
    let closed = if cfg.fault { upsilon_window_with(1, bound, 0, true, ctx)? } else { upsilon_window(1, bound, 64, ctx)? };
    t.check(closed.closed, "one more round adds nothing", || {
        json!({ "size bound": bound, "objects": closed.objects.len(), "added per round": closed.added })
    });
    for x in &closed.objects {
        t.check(is_gaunt(x, ctx)?.gaunt, "window objects are gaunt", || json!({ "cells": x.names() }));
    }
    t.evidence("closure", json!({ "size bound": bound, "objects": closed.objects.len(), "added per round": closed.added }));
    Ok(WindowInfo {
        bound,
        description: format!(
            "closure of the cells at most {bound} cells; simplex chain at most {SIMPLEX_CHAIN_SIZE} cells after {} rounds",
            rounds + 1
        ),
        objects: closed.objects.len(),
    })
}

fn delta_restriction(cfg: &SuiteConfig, ctx: &Ctx, t: &mut Tally) -> Result<WindowInfo> {
    let n = cfg.n;
    let bound = cfg.window.unwrap_or((n + 1).min(3));
    let window = MultiIndex::window(n, bound);
    let mut pairs: Vec<(CellularPresheaf, CellularPresheaf, String)> = corpus(cfg)?
        .into_iter()
        .map(|s| {
            (
                CellularPresheaf::nerve(&s.object, Indexing::Delta),
                CellularPresheaf::nerve(&s.object, Indexing::Theta),
                s.name,
            )
        })
        .collect();
    for k in 0..n {
        let (c, b) = (cell(k, n)?, boundary(k, n)?);
        let inc = inclusion_by_names(&b, &c)?;
        let d = SpanDiagram::new(inc.clone(), inc)?;
        pairs.push((
            CellularPresheaf::span_pushout(&d, Indexing::Delta),
            CellularPresheaf::span_pushout(&d, Indexing::Theta),
            format!("two {k}-cells glued along their boundary"),
        ));
    }
    let ev = Evaluator::new(ctx, n);
    // The fault shifts the first coordinate, so values are compared at the wrong grid.
    let image = |m: &MultiIndex| {
        let mut v = m.0.clone();
        if cfg.fault {
            v[0] += 1;
        }
        MultiIndex(v)
    };
    for (pd, pt, name) in &pairs {
        let mut grid_vals = Vec::new();
        let mut theta_vals = Vec::new();
        for m in &window {
            let gv = ev.evaluate(pd, &TestObj::Grid(m.clone()))?;
            let tv = ev.evaluate(pt, &TestObj::Theta(delta_n(&image(m))))?;
            t.check(gv.count() == tv.count(), "values agree", || {
                json!({ "presheaf": name, "index": m.to_string(), "grid count": gv.count(), "theta count": tv.count() })
            });
            grid_vals.push(gv);
            theta_vals.push(tv);
        }
        for (a, ma) in window.iter().enumerate() {
            for (b, mb) in window.iter().enumerate() {
                if cfg.fault
                    || grid_vals[a].count() != theta_vals[a].count()
                    || grid_vals[b].count() != theta_vals[b].count()
                {
                    continue;
                }
                for f in multi_hom(ma, mb) {
                    let along_grid = ev.restriction(&grid_vals[b], &grid_vals[a], &TestMor::Grid(f.clone()))?;
                    let along_theta = ev.restriction(&theta_vals[b], &theta_vals[a], &TestMor::Theta(delta_n_mor(&f)))?;
                    t.check(along_grid == along_theta, "restriction maps agree", || {
                        json!({ "presheaf": name, "from": mb.to_string(), "to": ma.to_string(), "map": f })
                    });
                }
            }
        }
    }
    Ok(WindowInfo {
        bound,
        description: format!("Δ^×{n} indices with coordinate sum at most {bound}; {} presheaves", pairs.len()),
        objects: window.len(),
    })
}
