use etwist_web::{fss_json, gamma_slice_json, sweep_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn fss_matches_core_for_iwasawa() {
    let v = parse(fss_json("iwasawa", 3).unwrap());
    assert_eq!(v["betti"], serde_json::json!([1, 4, 8, 10, 8, 4, 1]));
    assert_eq!(v["degeneration_page"], 2);
}

#[test]
fn sweep_counts_track_pages_in_degree_one() {
    let v = parse(sweep_json("iwasawa", 1, 8).unwrap());
    assert_eq!(v["counts"], serde_json::json!([5, 4, 4]));
    assert_eq!(v["page_dimensions"], serde_json::json!([5, 4, 4]));
    assert_eq!(v["betti"], 4);
    assert_eq!(v["h_values"].as_array().unwrap().len(), 8);
}

#[test]
fn gamma_slice_is_positive_for_ball_log() {
    let v = parse(gamma_slice_json("ball-log", 1.0, 0.9, 21).unwrap());
    assert_eq!(v["positive"], true);
    let cells = v["min_eigenvalue"].as_array().unwrap();
    assert_eq!(cells.len(), 21 * 21);
    // corners lie outside the disc
    assert!(cells[0].is_null());
    // at the origin γ is the identity for -log(1-|z|^2)
    let centre = cells[10 * 21 + 10].as_f64().unwrap();
    assert!((centre - 1.0).abs() < 1e-12, "{centre}");
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(fss_json("klein", 3).is_err());
    assert!(fss_json("torus2", 0).is_err());
    assert!(sweep_json("torus2", 5, 8).is_err());
    assert!(sweep_json("torus2", 1, 2).is_err());
    assert!(gamma_slice_json("ball-log", 1.0, 1.0, 10).is_err());
    assert!(gamma_slice_json("cubic", 1.0, 0.5, 10).is_err());
    assert!(gamma_slice_json("quadratic", -1.0, 0.5, 10).is_err());
}
