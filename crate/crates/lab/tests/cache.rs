use driftlap::cache::{cache_key, SpectrumCache, CACHE_FORMAT};
use driftlap::config::RunConfig;
use driftlap::model::{acquire_spectrum, build_model};
use driftlap::runner::{run, RunOptions};
use driftlap::LabError;
use serde_json::json;

#[test]
fn identical_specs_share_a_key() {
    let desc = json!({"domain": {"kind": "interval", "a": 0, "b": 1}, "grid": [256]});
    assert_eq!(cache_key(&desc).unwrap(), cache_key(&desc.clone()).unwrap());
}

#[test]
fn grid_size_changes_the_key() {
    let a = json!({"domain": "square", "grid": [256, 256]});
    let b = json!({"domain": "square", "grid": [512, 512]});
    assert_ne!(cache_key(&a).unwrap(), cache_key(&b).unwrap());
}

#[test]
fn field_order_does_not_matter() {
    let a: serde_json::Value =
        serde_json::from_str(r#"{"grid": [64], "solver": {"tol": 1e-8, "k": 4}, "route": "weighted"}"#).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(r#"{"route": "weighted", "solver": {"k": 4, "tol": 1e-8}, "grid": [64]}"#).unwrap();
    assert_eq!(cache_key(&a).unwrap(), cache_key(&b).unwrap());
}

const CONFIG: &str = r#"{
    "experiments": [{
        "id": "square",
        "domain": {"kind": "box", "lo": [0, 0], "hi": ["pi", "pi"]},
        "source": {"solve": {"base_points": 11, "levels": 2}},
        "suite": ["ppw", "yang1"],
        "k_max": 4
    }]
}"#;

#[test]
fn reordered_experiment_config_hits_the_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = SpectrumCache::new(tmp.path()).unwrap();
    let cfg = RunConfig::parse(CONFIG).unwrap();
    let e = &cfg.experiments[0];
    let model = build_model(e).unwrap();
    let cold = acquire_spectrum(e, &model, 1, Some(&cache)).unwrap();
    assert!(!cold.cache_hit);

    let reordered = CONFIG
        .replace(r#""domain": {"kind": "box", "lo": [0, 0], "hi": ["pi", "pi"]},"#, "")
        .replace(r#""k_max": 4"#, r#""k_max": 4, "domain": {"hi": ["pi", "pi"], "lo": [0, 0], "kind": "box"}"#);
    let cfg2 = RunConfig::parse(&reordered).unwrap();
    let e2 = &cfg2.experiments[0];
    let warm = acquire_spectrum(e2, &build_model(e2).unwrap(), 1, Some(&cache)).unwrap();
    assert!(warm.cache_hit);
    assert_eq!(warm.cache_key, cold.cache_key);
    assert_eq!(warm.spectrum, cold.spectrum);
}

#[test]
fn foreign_format_is_refused_then_recomputed() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = SpectrumCache::new(tmp.path()).unwrap();
    let cfg = RunConfig::parse(CONFIG).unwrap();
    let e = &cfg.experiments[0];
    let model = build_model(e).unwrap();
    let first = acquire_spectrum(e, &model, 1, Some(&cache)).unwrap();
    let key = first.cache_key.unwrap();
    let path = tmp.path().join(format!("{key}.json"));
    std::fs::write(&path, r#"{"format": "driftlap-spectrum-cache/v0", "key": "x"}"#).unwrap();

    match cache.load(&key) {
        Err(LabError::CacheFormat { found, expected, .. }) => {
            assert_eq!(found, "driftlap-spectrum-cache/v0");
            assert_eq!(expected, CACHE_FORMAT);
        }
        other => panic!("expected a format error, got {other:?}"),
    }
    let again = acquire_spectrum(e, &model, 1, Some(&cache)).unwrap();
    assert!(!again.cache_hit);
    assert_eq!(again.spectrum, first.spectrum);
    assert!(cache.load(&key).unwrap().is_some());
}

#[test]
fn warm_cache_reproduces_reports_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(CONFIG).unwrap();
    let opts =
        RunOptions { seed: Some(3), jobs: Some(2), cache: Some(SpectrumCache::new(tmp.path().join("cache")).unwrap()) };
    let (cold, t1) = run(&cfg, &opts).unwrap();
    let (warm, t2) = run(&cfg, &opts).unwrap();
    assert!(!t1.experiments[0].cache_hit);
    assert!(t2.experiments[0].cache_hit);
    assert_eq!(cold.checks_csv(), warm.checks_csv());
    assert_eq!(cold.to_json().unwrap(), warm.to_json().unwrap());
}
