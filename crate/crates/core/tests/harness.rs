use num_bigint::BigInt;
use num_rational::BigRational;
use parry_core::harness::{
    emit_figure1, enumerate_parry_catalogue, search_coincident_pairs, search_in_catalogue, to_json, FigureFormat,
    SearchConfig,
};

fn config(max_degree: usize, coeff_bound: i64, root_max: i64) -> SearchConfig {
    SearchConfig {
        max_degree,
        coeff_bound,
        root_max: BigRational::from_integer(BigInt::from(root_max)),
        orbit_budget: 1000,
        ..SearchConfig::default()
    }
}

#[test]
fn quadratic_search_finds_exactly_the_family() {
    let r = search_coincident_pairs(&config(2, 6, 7)).unwrap();
    assert!(r.matches);
    let mut params: Vec<(i64, i64)> = r.found.iter().map(|p| p.family_params.unwrap()).collect();
    params.sort();
    // β₂ = β₁ + 1 has minimal polynomial x² − (q + 2)x + (q + 1 − p), so both
    // members need q + 2 ≤ 6 and β₁ + 1 ≤ 7
    let mut expected = Vec::new();
    for q in 1..=4 {
        for p in 1..=q {
            expected.push((p, q));
        }
    }
    expected.sort();
    assert_eq!(params, expected);
}

#[test]
fn cubic_bases_never_coincide() {
    let r = search_coincident_pairs(&config(3, 2, 4)).unwrap();
    assert!(r.matches);
    assert!(!r.found.is_empty());
    assert_eq!(r.max_found_degree, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let c = config(2, 3, 4);
    let a = to_json(&search_coincident_pairs(&c).unwrap());
    let b = to_json(&search_coincident_pairs(&c).unwrap());
    assert_eq!(a, b);
    let cat = enumerate_parry_catalogue(&c).unwrap();
    assert_eq!(to_json(&search_in_catalogue(&c, &cat).unwrap()), a);
    assert_eq!(emit_figure1(FigureFormat::Svg).unwrap(), emit_figure1(FigureFormat::Svg).unwrap());
}
