use brstq::config::{ConfigError, ScenarioConfig, Stage, WeightEntry};
use brstq::registry;
use brstq_core::Scalar;

#[test]
fn builtin_scenarios_validate_and_survive_toml() {
    let all = registry::builtin();
    assert_eq!(all.len(), 8);
    for c in &all {
        let sc = c.validate().unwrap_or_else(|e| panic!("{}: {e}", c.name));
        assert_eq!(sc.moment.len(), c.lie.dim);
        let back = ScenarioConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(&back, c);
    }
}

#[test]
fn lookup_accepts_sizes() {
    assert_eq!(registry::lookup("angular-momentum-m3").unwrap().variables.len(), 12);
    let n4 = registry::lookup("commuting-n4").unwrap();
    assert_eq!((n4.variables.len(), n4.lie.dim), (20, 6));
    assert!(registry::lookup("commuting-n1").is_none());
    assert!(registry::lookup("nope").is_none());
}

#[test]
fn so3_structure_constants() {
    // Basis (2,3), (3,1), (1,2) with bracket −[X, Y] gives f_12^3 = 1 cyclically.
    let sc = registry::commuting(3).validate().unwrap();
    let mut s: Vec<_> = sc.structure.iter().map(|(a, b, c, v)| (*a, *b, *c, v.clone())).collect();
    s.sort_by_key(|e| (e.0, e.1, e.2));
    assert_eq!(
        s,
        vec![(0, 1, 2, Scalar::from_i64(1)), (0, 2, 1, Scalar::from_i64(-1)), (1, 2, 0, Scalar::from_i64(1))]
    );
}

#[test]
fn torus_weights_evaluate_parameters() {
    let sc = registry::t2_c4().validate().unwrap();
    assert_eq!(sc.ctx.weight_rows()[0], vec![-1, 0, 1, 0, 1, 0, -1, 0]);
    assert_eq!(sc.ctx.weight_rows()[1], vec![1, -1, 0, 1, -1, 1, 0, -1]);
}

const MINIMAL: &str = r#"
name = "plane"
variables = ["q", "p"]
order = 2
moment = ["q"]

[[poisson]]
left = "q"
right = "p"
value = "1"

[lie]
dim = 1
"#;

#[test]
fn defaults_fill_optional_fields() {
    let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
    assert_eq!(c.degree, 8);
    assert_eq!((c.probes, c.seed, c.generator_degree), (50, 1, 4));
    assert!(c.reduction && c.generators.is_none() && c.stages.is_none());
    assert!(Stage::ALL.iter().all(|s| c.stage_enabled(*s)));
    c.validate().unwrap();
}

fn invalid(c: &ScenarioConfig) -> String {
    match c.validate() {
        Err(e @ (ConfigError::Invalid(_) | ConfigError::Parse { .. })) => e.to_string(),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn validation_errors() {
    let mut c = registry::t2_c4();
    c.parameters.insert("alpha".into(), 1);
    assert!(invalid(&c).contains("nonpositivity condition requires alpha < 0"));

    let mut c = registry::s1_c4();
    c.variables[1] = "z1".into();
    assert!(invalid(&c).contains("declared twice"));

    let mut c = registry::s1_c4();
    c.poisson[0].left = "w".into();
    assert!(invalid(&c).contains("unknown variable `w`"));

    let mut c = registry::s1_c4();
    c.poisson.push(c.poisson[0].clone());
    c.poisson[4].value = "2".into();
    assert!(invalid(&c).contains("conflicting"));

    let mut c = registry::s1_c4();
    c.moment.push("z1".into());
    assert!(invalid(&c).contains("moment map components"));

    let mut c = registry::s1_c4();
    c.weights[0].pop();
    assert!(invalid(&c).contains("weight row 1"));

    let mut c = registry::s1_c4();
    c.weights[0][0] = WeightEntry::Expr("1/2".into());
    assert!(invalid(&c).contains("not an integer"));

    let mut c = registry::commuting(3);
    c.lie.structure[0].c = 4;
    assert!(invalid(&c).contains("out of range"));

    let mut c = registry::s1_c4();
    c.moment[0] = "z1 zb1".into();
    assert!(invalid(&c).contains("moment[0]"));

    let mut c = registry::s1_c4();
    c.order = 0;
    assert!(invalid(&c).contains("order"));
}

#[test]
fn toml_errors() {
    assert!(matches!(ScenarioConfig::from_toml("name = "), Err(ConfigError::Toml(_))));
    let extra = format!("{MINIMAL}\n[extra]\nx = 1\n");
    assert!(matches!(ScenarioConfig::from_toml(&extra), Err(ConfigError::Toml(_))));
    let bad_stage = MINIMAL.replace("order = 2", "order = 2\nstages = [\"load\", \"bogus\"]");
    assert!(matches!(ScenarioConfig::from_toml(&bad_stage), Err(ConfigError::Toml(_))));
    let missing = std::path::Path::new("/nonexistent/scenario.toml");
    assert!(matches!(ScenarioConfig::from_path(missing), Err(ConfigError::Io { .. })));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.toml");
    std::fs::write(&path, registry::s1_c4().to_toml()).unwrap();
    assert_eq!(ScenarioConfig::from_path(&path).unwrap(), registry::s1_c4());
}
