//! The golden-mean picture: the graph of `T_β` and the normalized density.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::density::{build_density, StepFunction};
use crate::dynamics::{orbit_of_one, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exactnum::{quadratic_family_field, ExactValue, FieldElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureFormat {
    Csv,
    Svg,
    Json,
}

impl FromStr for FigureFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FigureFormat::Csv),
            "svg" => Ok(FigureFormat::Svg),
            "json" => Ok(FigureFormat::Json),
            other => Err(Error::Config(format!("unknown figure format {other:?}"))),
        }
    }
}

/// A straight piece of a graph from `(x0, y0)` to `(x1, y1)`, `x1` excluded.
struct Piece {
    kind: &'static str,
    x0: FieldElement,
    x1: FieldElement,
    y0: FieldElement,
    y1: FieldElement,
}

#[derive(Serialize)]
struct PieceView {
    kind: &'static str,
    x0: ExactValue,
    x1: ExactValue,
    y0: ExactValue,
    y1: ExactValue,
}

#[derive(Serialize)]
struct Figure {
    beta_poly: Vec<String>,
    beta: ExactValue,
    pieces: Vec<PieceView>,
}

fn figure_pieces() -> Result<(FieldElement, Vec<Piece>)> {
    let field = quadratic_family_field(1, 1)?;
    let beta = FieldElement::theta(&field);
    let density = build_density(&orbit_of_one(&beta, DEFAULT_BUDGET)?)?.normalize()?;
    let one = FieldElement::from_int(&field, 1);
    let inv = beta.invert()?;

    let mut pieces = Vec::new();
    // branch k of T_β runs over [k/β, min(1, (k+1)/β)) rising from 0
    let top = num_traits::ToPrimitive::to_i64(&beta.floor()).expect("small base");
    for k in 0..=top {
        let x0 = FieldElement::from_int(&field, k).checked_mul(&inv)?;
        let end = FieldElement::from_int(&field, k + 1).checked_mul(&inv)?;
        let x1 = if end.cmp_real(&one).is_lt() { end } else { one.clone() };
        let y1 = (&beta * &x1).add_int(-k);
        pieces.push(Piece {
            kind: "map",
            x0,
            x1,
            y0: FieldElement::zero(&field),
            y1,
        });
    }
    for (lo, hi, v) in density.pieces() {
        pieces.push(Piece {
            kind: "density",
            x0: lo.clone(),
            x1: hi.clone(),
            y0: v.clone(),
            y1: v.clone(),
        });
    }
    Ok((beta, pieces))
}

/// Renders the figure as CSV (`kind,x0,x1,y0,y1` to 12 places), SVG or JSON.
pub fn emit_figure1(format: FigureFormat) -> Result<String> {
    let (beta, pieces) = figure_pieces()?;
    Ok(match format {
        FigureFormat::Json => {
            let fig = Figure {
                beta_poly: beta.field().modulus().iter().map(ToString::to_string).collect(),
                beta: ExactValue::from(&beta),
                pieces: pieces
                    .iter()
                    .map(|p| PieceView {
                        kind: p.kind,
                        x0: ExactValue::from(&p.x0),
                        x1: ExactValue::from(&p.x1),
                        y0: ExactValue::from(&p.y0),
                        y1: ExactValue::from(&p.y1),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&fig).expect("figure serializes") + "\n"
        }
        FigureFormat::Csv => {
            let mut out = String::from("kind,x0,x1,y0,y1\n");
            for p in &pieces {
                let d = |x: &FieldElement| x.to_decimal(12);
                let _ = writeln!(out, "{},{},{},{},{}", p.kind, d(&p.x0), d(&p.x1), d(&p.y0), d(&p.y1));
            }
            out
        }
        FigureFormat::Svg => svg(&pieces),
    })
}

fn svg(pieces: &[Piece]) -> String {
    const W: f64 = 400.0;
    const H: f64 = 400.0;
    const YMAX: f64 = 1.5;
    let px = |x: f64| 20.0 + x * (W - 40.0);
    let py = |y: f64| H - 20.0 - y / YMAX * (H - 40.0);
    let f = FieldElement::to_f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#999"/>"##,
        px(0.0),
        py(YMAX),
        px(1.0) - px(0.0),
        py(0.0) - py(YMAX)
    );
    for p in pieces {
        let colour = if p.kind == "map" { "#1f77b4" } else { "#d62728" };
        let _ = writeln!(
            out,
            r#"  <line class="{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"><title>{} on [{}, {})</title></line>"#,
            p.kind,
            px(f(&p.x0)),
            py(f(&p.y0)),
            px(f(&p.x1)),
            py(f(&p.y1)),
            p.y0.to_decimal(12),
            p.x0.to_decimal(12),
            p.x1.to_decimal(12)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One row per piece: `lo,hi,value,value_exact` where `value_exact` is the
/// coefficient vector in the power basis, `;`-separated.
pub fn density_csv(h: &StepFunction) -> String {
    let mut out = String::from("segment_lo,segment_hi,value,value_exact\n");
    for (lo, hi, v) in h.pieces() {
        let exact: Vec<String> = v.coeffs().iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            lo.to_decimal(12),
            hi.to_decimal(12),
            v.to_decimal(12),
            exact.join(";")
        );
    }
    out
}

/// Axis-aligned step plot of `h` over `[0, 1)`.
pub fn density_svg(h: &StepFunction) -> String {
    const W: f64 = 400.0;
    const H: f64 = 300.0;
    let ymax = h.values().iter().map(FieldElement::to_f64).fold(0.0, f64::max) * 1.1;
    let px = |x: f64| 30.0 + x * (W - 50.0);
    let py = |y: f64| H - 20.0 - y / ymax * (H - 40.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        out,
        r##"  <path d="M{:.2} {:.2} V{:.2} H{:.2}" fill="none" stroke="#999"/>"##,
        px(0.0),
        py(ymax),
        py(0.0),
        px(1.0)
    );
    let mut d = String::new();
    for (i, (lo, hi, v)) in h.pieces().enumerate() {
        let y = py(v.to_f64());
        if i == 0 {
            let _ = write!(d, "M{:.2} {y:.2} ", px(lo.to_f64()));
        } else {
            let _ = write!(d, "V{y:.2} ");
        }
        let _ = write!(d, "H{:.2} ", px(hi.to_f64()));
    }
    let _ = writeln!(
        out,
        r##"  <path class="density" d="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
        d.trim_end()
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_the_two_density_values() {
        let csv = emit_figure1(FigureFormat::Csv).unwrap();
        let density: Vec<&str> = csv.lines().filter(|l| l.starts_with("density")).collect();
        assert_eq!(density.len(), 2);
        assert_eq!(
            density[0],
            "density,0.000000000000,0.618033988750,1.170820393250,1.170820393250"
        );
        assert_eq!(
            density[1],
            "density,0.618033988750,1.000000000000,0.723606797750,0.723606797750"
        );
        let map: Vec<&str> = csv.lines().filter(|l| l.starts_with("map")).collect();
        assert_eq!(map.len(), 2);
        assert!(map[1].ends_with(",0.000000000000,0.618033988750"));
    }

    #[test]
    fn density_renderings() {
        let (beta, _) = crate::coincidence::make_pair(1, 2).unwrap();
        let h = build_density(&orbit_of_one(&beta, 100).unwrap()).unwrap();
        let csv = density_csv(&h);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("0.000000000000,0.414213562373,1.414213562373,"));
        let svg = density_svg(&h);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains(" V"));
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = emit_figure1(FigureFormat::Svg).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches(r#"class="density""#).count(), 2);
        assert_eq!(svg.matches("<line").count(), svg.matches("</line>").count());
    }

    #[test]
    fn json_carries_exact_coefficients() {
        let v: serde_json::Value = serde_json::from_str(&emit_figure1(FigureFormat::Json).unwrap()).unwrap();
        let pieces = v["pieces"].as_array().unwrap();
        let d: Vec<_> = pieces.iter().filter(|p| p["kind"] == "density").collect();
        assert_eq!(d[0]["y0"]["coeffs"], serde_json::json!(["1/5", "3/5"]));
        assert_eq!(d[1]["y0"]["coeffs"], serde_json::json!(["2/5", "1/5"]));
    }
}
