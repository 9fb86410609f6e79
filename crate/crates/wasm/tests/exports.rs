use parry_wasm::{compare, explore, histogram, parse_base};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn base_specs() {
    assert_eq!(parse_base("pq:1,1").unwrap().to_decimal(6), "1.618034");
    assert_eq!(parse_base("pq+1:1,1").unwrap().to_decimal(6), "2.618034");
    assert_eq!(parse_base("poly:-1,-1,0,1").unwrap().to_decimal(6), "1.324718");
    assert_eq!(parse_base(" poly: -2,0,1 @0").unwrap().to_decimal(6), "1.414214");
    assert!(parse_base("pq:3,2").is_err());
    assert!(parse_base("poly:-1,-1,1@1").is_err());
    assert!(parse_base("golden").is_err());
}

#[test]
fn explore_golden() {
    let v = parse(explore("pq:1,1", 1000));
    assert_eq!(v["beta_poly"], "x^2 - x - 1");
    assert_eq!(v["orbit"]["classification"], "SimpleParry");
    let d = v["density"].as_array().unwrap();
    assert_eq!(d.len(), 2);
    assert!((d[0]["value"].as_f64().unwrap() - 1.1708203932499369).abs() < 1e-12);
    assert_eq!(v["map"].as_array().unwrap().len(), 2);
}

#[test]
fn explore_unresolved_orbit_has_no_density() {
    let v = parse(explore("poly:-3,-1,1", 40));
    assert_eq!(v["orbit"]["classification"], "BudgetExceeded");
    assert!(v["density"].is_null());
}

#[test]
fn compare_pairs() {
    let v = parse(compare("pq:2,3", "pq+1:2,3", 1000));
    assert_eq!(v["coincide"], true);
    assert_eq!(v["theorem_verdict"], true);
    let v = parse(compare("pq:1,1", "pq:1,2", 1000));
    assert_eq!(v["coincide"], false);
    let v = parse(compare("pq:1,1", "pq:1,1", 1000));
    assert!(v["error"].as_str().unwrap().contains("equal"));
}

#[test]
fn histogram_runs() {
    let v = parse(histogram("pq:1,1", 20_000, 10, 3));
    assert_eq!(v["empirical"].as_array().unwrap().len(), 10);
    assert!(v["max_deviation"].as_f64().unwrap() < 0.03);
    assert!(parse(histogram("pq:1,1", 0, 10, 3))["error"].is_string());
}
