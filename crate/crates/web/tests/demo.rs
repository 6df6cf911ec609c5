use orbitlab_web::{bound_report, formula_list, lrs_report, orbit_report};
use serde_json::Value;

#[test]
fn orbit_demo_finds_the_start_point() {
    let payload = r#"{"map": [[2, 0], [0, 2]], "point": ["2", "3"],
        "hypersurface": [{"coeff": "1", "exps": [1, 0]}, {"coeff": "-1", "exps": [0, 1]}, {"coeff": "1", "exps": [0, 0]}]}"#;
    let v: Value = serde_json::from_str(&orbit_report(payload, 10).unwrap()).unwrap();
    assert_eq!(v["result"]["intersection"]["members"][0]["n"], 0);
    assert_eq!(v["settings"]["n_max"], 10);
}

#[test]
fn lrs_demo_certifies_progressions() {
    let v: Value = serde_json::from_str(&lrs_report(r#"{"coeffs": [0, 4], "init": [2, 0]}"#, 20).unwrap()).unwrap();
    assert_eq!(v["result"]["zero_set"]["progressions"][0]["offset"], 1);
}

#[test]
fn bound_demo_evaluates_formulas() {
    let v: Value = serde_json::from_str(&bound_report("L2.1-simple", r#"{"m": 2}"#).unwrap()).unwrap();
    assert!((v["log10"].as_f64().unwrap() - 154.13).abs() < 0.01);
    assert!(bound_report("L2.6", r#"{"k": 3}"#).unwrap_err().contains("r"));
    assert!(bound_report("nope", "{}").is_err());
    assert!(orbit_report("not json", 3).unwrap_err().starts_with("invalid JSON"));
}

#[test]
fn formula_list_names_parameters() {
    let v: Value = serde_json::from_str(&formula_list()).unwrap();
    let t32 = v.as_array().unwrap().iter().find(|f| f["id"] == "T3.2").unwrap();
    assert_eq!(t32["parameters"], serde_json::json!(["n", "D"]));
}
