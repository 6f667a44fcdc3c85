use std::collections::BTreeSet;

use fluidsymp::scenarios::ScenarioSpec;
use fluidsymp::verify::{self, catalogue, user_function_checks, Status, Suite, VerifyConfig};

fn config(name: &str, suites: &[Suite], n: usize) -> VerifyConfig {
    let mut c = VerifyConfig::new(ScenarioSpec::builtin(name).unwrap()).with_suites(suites);
    c.n_points = n;
    c
}

#[test]
fn manifests_are_byte_identical() {
    let cfg = config("accelerating_vortex", &[Suite::Core, Suite::Contact], 64);
    let a = verify::run(&cfg).to_json();
    assert_eq!(a, verify::run(&cfg).to_json());
    let mut other = cfg.clone();
    other.seed = 43;
    assert_ne!(a, verify::run(&other).to_json());
}

#[test]
fn manifest_schema() {
    let m = verify::run(&config("accelerating_vortex", &[Suite::Viscous, Suite::Contact], 16));
    let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
    for key in ["schema_version", "scenario", "params", "gauge", "jet_order", "seed", "box", "n_points", "suites", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["conventions"]["symplectisation_sign"], -1.0);
    let checks = v["checks"].as_array().unwrap();
    let printed = checks.iter().find(|c| c["id"] == "contact.reeb.printed").unwrap();
    assert!(printed["tolerance"].is_null());
    let visc = checks.iter().find(|c| c["id"] == "closedness.viscous").unwrap();
    assert_eq!(visc["status"], "scoped-out");
    // Floats carry 17 significant digits.
    assert!(m.to_json().contains("\"seed\":42") && m.to_json().contains("5.0000000000000000e-1"));
}

#[test]
fn every_identity_is_catalogued() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/identities.md")).unwrap();
    let documented: BTreeSet<&str> = doc
        .lines()
        .filter_map(|l| l.strip_prefix("### `")?.strip_suffix('`'))
        .collect();
    let f = fluidsymp::expr::parse("x*y").unwrap();
    let used: BTreeSet<&str> = catalogue()
        .iter()
        .chain(user_function_checks(Some(&f), Some(&f)).iter())
        .map(|d| d.identity_ref)
        .collect();
    let missing: Vec<_> = used.difference(&documented).collect();
    assert!(missing.is_empty(), "undocumented: {missing:?}");
    let unused: Vec<_> = documented.difference(&used).collect();
    assert!(unused.is_empty(), "documented but unused: {unused:?}");
}

#[test]
fn steady_abc_is_degenerate_not_failing() {
    let m = verify::run(&config("steady_abc", &[Suite::Core], 200));
    assert!(!m.any_failed());
    assert_eq!(m.check("hamiltonian.t.defect").unwrap().status, Status::Degenerate);
    assert_eq!(m.check("closedness.ideal").unwrap().status, Status::Pass);
    assert_eq!(m.exit_code(true), 3);
    assert_eq!(m.exit_code(false), 0);
}

#[test]
fn user_functions_join_the_core_suite() {
    let mut cfg = config("accelerating_vortex", &[Suite::Core], 32);
    cfg.user_f = Some(fluidsymp::expr::parse("x*y + sin(z)").unwrap());
    cfg.user_g = Some(fluidsymp::expr::parse("t^2 - z").unwrap());
    let m = verify::run(&cfg);
    for id in ["hamiltonian.user_f.closed_form", "hamiltonian.user_g.defect", "poisson.user.routes"] {
        assert_eq!(m.check(id).unwrap().status, Status::Pass, "{id}");
    }
}

#[test]
fn low_jet_order_scopes_out_deep_checks() {
    let mut cfg = config("accelerating_vortex", &[Suite::Algebra], 8);
    cfg.jet_order = 2;
    let m = verify::run(&cfg);
    assert!(m.checks.iter().all(|c| c.status == Status::ScopedOut));
}
