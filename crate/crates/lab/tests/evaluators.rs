use std::collections::BTreeMap;

use driftlap::config::RunConfig;
use driftlap::evaluate::Evaluator;
use driftlap::runner::{run, RunOptions};
use driftlap_core::bounds::EVALUATOR_NAMES;

#[test]
fn every_evaluator_name_is_reachable_both_ways() {
    for name in EVALUATOR_NAMES {
        let e = Evaluator::from_name(name).unwrap_or_else(|| panic!("{name} has no dispatch"));
        assert_eq!(e.name(), name);
    }
    for e in Evaluator::ALL {
        assert!(EVALUATOR_NAMES.contains(&e.name()), "{} is not a bound evaluator", e.name());
    }
}

fn suite_json() -> String {
    let names: Vec<String> = EVALUATOR_NAMES.iter().map(|n| format!("{n:?}")).collect();
    format!("[{}]", names.join(","))
}

#[test]
fn full_suite_runs_from_config_with_one_record_per_k() {
    let body = format!(
        r#"{{"experiments": [
            {{
                "id": "gauss",
                "domain": {{"kind": "box", "lo": [-4, -4], "hi": [4, 4]}},
                "weight": {{"kind": "quadratic", "coeff": 0.25}},
                "geometry": {{"soliton_rho": 0.5}},
                "source": {{"solve": {{"base_points": 15, "levels": 2}}}},
                "suite": {suite},
                "k_max": 6
            }},
            {{
                "id": "cylinder",
                "source": {{"oracle": {{"name": "product", "left": {{"name": "interval", "length": "pi"}}, "right": {{"name": "sphere", "m": 1, "radius": 1}}}}}},
                "suite": ["ppw", "hp", "yang1", "yang2", "recursion", "zlz_upper", "thm11_gap", "product_gap", "ricci_soliton_gap", "conjecture"],
                "k_max": 6
            }},
            {{
                "id": "sphere",
                "source": {{"oracle": {{"name": "sphere", "m": 2, "radius": 1}}}},
                "suite": ["ppw", "conjecture"],
                "k_max": 6
            }}
        ]}}"#,
        suite = suite_json()
    );
    let cfg = RunConfig::parse(&body).unwrap();
    let (report, _) = run(&cfg, &RunOptions { jobs: Some(2), ..RunOptions::default() }).unwrap();
    let gauss = &report.experiments[0];
    assert!(gauss.evaluator_errors.is_empty(), "{:?}", gauss.evaluator_errors);

    let mut per_name: BTreeMap<(&str, usize), usize> = BTreeMap::new();
    for c in &gauss.checks {
        *per_name.entry((c.name.as_str(), c.k)).or_default() += 1;
    }
    assert!(per_name.values().all(|&n| n == 1));
    for name in EVALUATOR_NAMES.iter().filter(|n| **n != "recursion") {
        let ks: Vec<usize> = gauss.checks.iter().filter(|c| c.name == *name).map(|c| c.k).collect();
        assert_eq!(ks, (1..=6).collect::<Vec<_>>(), "{name}");
    }
    let nonneg = gauss.checks.iter().filter(|c| c.name == "recursion_nonneg").count();
    assert_eq!(nonneg, 6);

    let cyl = &report.experiments[1];
    assert!(cyl.evaluator_errors.is_empty(), "{:?}", cyl.evaluator_errors);
    assert_eq!(cyl.checks.iter().filter(|c| c.name == "conjecture").count(), 6);

    let sphere = &report.experiments[2];
    assert!(sphere.checks.iter().all(|c| c.name == "ppw"));
    assert_eq!(sphere.notes.len(), 1);
}
