//! WebAssembly bindings for the browser demo in `www/`.
//!
//! A base is named by a short spec string:
//! `pq:P,Q` is the root β₁ of x² − qx − p, `pq+1:P,Q` is β₁ + 1, and
//! `poly:C0,C1,…,1` is the smallest root above 1 of that monic polynomial
//! (append `@k` for the k-th one). Every export returns a JSON document; on
//! failure it is `{"error": "..."}`.

use parry_core::coincidence::{coincide, make_pair, theorem_verdict};
use parry_core::density::{build_density, StepFunction};
use parry_core::dynamics::{orbit_of_one, OrbitReport};
use parry_core::exactnum::{isolate_roots_above_one, parse_poly, FieldElement};
use parry_core::harness::{mc_validate, SearchConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn parse_base(spec: &str) -> Res<FieldElement> {
    let (kind, rest) = spec
        .trim()
        .split_once(':')
        .ok_or_else(|| format!("expected pq:P,Q, pq+1:P,Q or poly:COEFFS, got {spec:?}"))?;
    match kind.trim() {
        "pq" | "pq+1" => {
            let (p, q) = rest.split_once(',').ok_or("expected P,Q")?;
            let p: i64 = p.trim().parse().map_err(err)?;
            let q: i64 = q.trim().parse().map_err(err)?;
            let (b1, b2) = make_pair(p, q).map_err(err)?;
            Ok(if kind.trim() == "pq" { b1 } else { b2 })
        }
        "poly" => {
            let (coeffs, index) = match rest.split_once('@') {
                Some((c, k)) => (c, k.trim().parse::<usize>().map_err(err)?),
                None => (rest, 0),
            };
            let fields = isolate_roots_above_one(&parse_poly(coeffs).map_err(err)?).map_err(err)?;
            let field = fields
                .get(index)
                .ok_or_else(|| format!("only {} roots above 1", fields.len()))?;
            Ok(FieldElement::theta(field))
        }
        other => Err(format!("unknown base kind {other:?}")),
    }
}

#[derive(Serialize)]
struct Step {
    lo: f64,
    hi: f64,
    value: f64,
    exact: String,
}

fn steps(h: &StepFunction) -> Vec<Step> {
    h.pieces()
        .map(|(lo, hi, v)| Step {
            lo: lo.to_f64(),
            hi: hi.to_f64(),
            value: v.to_f64(),
            exact: v.to_string(),
        })
        .collect()
}

/// Branches of `T_β` as `[x0, x1, y1]` with `y0 = 0`.
fn branches(beta: &FieldElement) -> Vec<[f64; 3]> {
    let b = beta.to_f64();
    let top = beta.floor();
    let top: i64 = top.try_into().unwrap_or(i64::MAX);
    (0..=top.min(64))
        .map(|k| {
            let x0 = k as f64 / b;
            let x1 = ((k + 1) as f64 / b).min(1.0);
            [x0, x1, b * x1 - k as f64]
        })
        .collect()
}

#[derive(Serialize)]
struct Exploration {
    beta: String,
    beta_poly: String,
    orbit: OrbitReport,
    map: Vec<[f64; 3]>,
    density: Option<Vec<Step>>,
    normalization: Option<String>,
}

fn explore_inner(spec: &str, budget: usize) -> Res<Exploration> {
    let beta = parse_base(spec)?;
    let orbit = orbit_of_one(&beta, budget).map_err(err)?;
    let (density, normalization) = if orbit.is_complete() {
        let h = build_density(&orbit).map_err(err)?;
        let k = h.integral();
        (Some(steps(&h.normalize().map_err(err)?)), Some(k.to_decimal(15)))
    } else {
        (None, None)
    };
    Ok(Exploration {
        beta: beta.to_decimal(15),
        beta_poly: beta.field().modulus_poly().to_string(),
        map: branches(&beta),
        orbit: orbit.to_report(),
        density,
        normalization,
    })
}

#[derive(Serialize)]
struct Comparison {
    coincide: bool,
    theorem_verdict: bool,
    family_params: Option<(i64, i64)>,
    normalizations_equal: bool,
    zero_membership: (bool, bool),
    beta1: String,
    beta2: String,
    density1: Vec<Step>,
    density2: Vec<Step>,
}

fn compare_inner(spec1: &str, spec2: &str, budget: usize) -> Res<Comparison> {
    let b1 = parse_base(spec1)?;
    let b2 = parse_base(spec2)?;
    let r = coincide(&b1, &b2, budget).map_err(err)?;
    Ok(Comparison {
        coincide: r.coincide,
        theorem_verdict: theorem_verdict(&b1, &b2).map_err(err)?,
        family_params: r.family_params,
        normalizations_equal: r.k_equal,
        zero_membership: r.zero_membership,
        beta1: r.beta1.to_decimal(15),
        beta2: r.beta2.to_decimal(15),
        density1: steps(&r.densities.0.normalize().map_err(err)?),
        density2: steps(&r.densities.1.normalize().map_err(err)?),
    })
}

fn respond<T: Serialize>(r: Res<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

/// Orbit of 1, the graph of `T_β` and the normalized density.
#[wasm_bindgen]
pub fn explore(spec: &str, budget: usize) -> String {
    respond(explore_inner(spec, budget))
}

/// Exact coincidence test for two bases with both normalized densities.
#[wasm_bindgen]
pub fn compare(spec1: &str, spec2: &str, budget: usize) -> String {
    respond(compare_inner(spec1, spec2, budget))
}

/// Histogram of simulated orbits against exact bin masses.
#[wasm_bindgen]
pub fn histogram(spec: &str, samples: u32, bins: u32, seed: u32) -> String {
    respond(parse_base(spec).and_then(|beta| {
        let cfg = SearchConfig {
            mc_samples: samples.into(),
            mc_bins: bins as usize,
            seed: seed.into(),
            ..SearchConfig::default()
        };
        mc_validate(&beta, &cfg).map_err(err)
    }))
}
