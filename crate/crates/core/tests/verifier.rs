use nct_core::ncat::iso::is_iso;
use nct_core::ncat::limits::product;
use nct_core::ncat::standard::{cell, delta, walking_iso};
use nct_core::symmetry::{autos_of_globular, retracts_of, upsilon_window};
use nct_core::verifier::{report_render, run_suite, Format, Suite, SuiteConfig, VerificationReport};
use nct_core::{Budget, Ctx, NctError};

#[test]
fn s00_iso_passes_at_n2_and_fault_leaves_count_witness() {
    let mut cfg = SuiteConfig::new(Suite::S00Iso, 2);
    cfg.window = Some(6);
    let r = run_suite(&cfg).unwrap();
    assert!(r.passed);
    assert_eq!(r.window.bound, 6);

    cfg.fault = true;
    let r = run_suite(&cfg).unwrap();
    assert!(!r.passed);
    let w = &r.witnesses[0].detail;
    assert_ne!(w["source count"], w["target count"]);
}

#[test]
fn gaunt_locality_passes_at_n2() {
    assert!(run_suite(&SuiteConfig::new(Suite::GauntLocality, 2)).unwrap().passed);
}

#[test]
fn json_report_round_trips() {
    let mut cfg = SuiteConfig::new(Suite::KernelLaws, 2);
    cfg.fault = true;
    let r = run_suite(&cfg).unwrap();
    let text = report_render(&r, Format::Json);
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(report_render(&back, Format::Json), text);
}

#[test]
fn failing_text_report_shows_witness_and_window() {
    let mut cfg = SuiteConfig::new(Suite::PushoutCalculus, 1);
    cfg.fault = true;
    let text = report_render(&run_suite(&cfg).unwrap(), Format::Text);
    assert!(text.contains("FAIL"));
    assert!(text.contains("window"));
    assert!(text.contains("witness"));
}

#[test]
fn bad_configs_are_input_errors() {
    let mut cfg = SuiteConfig::new(Suite::Autos, 1);
    cfg.window = Some(0);
    assert!(matches!(run_suite(&cfg), Err(NctError::Input(_))));
    assert!(matches!(run_suite(&SuiteConfig::new(Suite::Autos, 0)), Err(NctError::Input(_))));
    let mut cfg = SuiteConfig::new(Suite::Autos, 3);
    cfg.budget = Budget { max_nodes: 5, ..Budget::default() };
    assert!(matches!(run_suite(&cfg), Err(NctError::Resource { .. })));
}

#[test]
fn suite_names_parse_back() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
}

#[test]
fn globular_automorphism_counts() {
    let ctx = Ctx::default();
    for n in 1..=3 {
        assert_eq!(autos_of_globular(n, &ctx).unwrap().len(), 1 << n);
    }
}

#[test]
fn square_retracts_onto_triangle() {
    let ctx = Ctx::default();
    let c1 = cell(1, 1).unwrap();
    let square = product(&c1, &c1).unwrap().object;
    let triangle = delta(2, 1).unwrap();
    let found = retracts_of(&square, &ctx).unwrap();
    assert!(found.iter().all(|r| r.verify().unwrap()));
    assert!(found.iter().any(|r| is_iso(&r.object, &triangle, &Budget::default()).unwrap()));
}

#[test]
fn walking_iso_retracts_only_onto_point_and_itself() {
    let ctx = Ctx::default();
    let e = walking_iso(1).unwrap();
    let sizes: Vec<usize> = retracts_of(&e, &ctx).unwrap().iter().map(|r| r.object.len()).collect();
    assert!(sizes.contains(&1) && sizes.contains(&e.len()));
    assert!(!sizes.contains(&0));
}

#[test]
fn upsilon_window_holds_short_simplices() {
    let ctx = Ctx::default();
    let w = upsilon_window(1, 9, 2, &ctx).unwrap();
    for m in 0..=2 {
        let d = delta(m, 1).unwrap();
        assert!(w.objects.iter().any(|x| is_iso(x, &d, &Budget::default()).unwrap()));
    }
}
