//! `parry`: exact Rényi–Parry densities from the command line.
//!
//! Reports go to stdout as JSON unless `--out` is given. Exit status is 0
//! when every checked property holds, 1 when one fails or the answer is
//! undecided within the orbit budget, and 2 on a usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parry_core::coincidence::{coincide, make_pair, theorem_verdict, CoincidenceView};
use parry_core::density::{build_density, Segment, StepFunction};
use parry_core::dynamics::{orbit_of_one, DEFAULT_BUDGET};
use parry_core::exactnum::{isolate_roots_above_one, parse_poly, ExactValue, FieldElement};
use parry_core::harness::{
    audit_catalogue, density_csv, density_svg, emit_figure1, enumerate_parry_catalogue, family_sweep_with_budget,
    mc_validate, parse_rational, search_in_catalogue, to_json, CatalogueAudit, FigureFormat, SearchConfig,
    SearchReport,
};
use parry_core::transfer::invariance_report;
use parry_core::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "parry", version, about = "Exact invariant densities of beta-transformations")]
struct Cli {
    /// Flat TOML file with search settings; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Base {
    /// The base β₁ with β₁² = qβ₁ + p, for 1 ≤ p ≤ q.
    #[arg(long, value_name = "P,Q", conflicts_with = "poly")]
    pq: Option<String>,
    /// With --pq, use β₁ + 1 instead of β₁.
    #[arg(long, requires = "pq")]
    plus_one: bool,
    /// Monic integer polynomial, constant term first: "-1,-1,1" is x² − x − 1.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    poly: Option<String>,
    /// Which root above 1 of --poly, counting from the smallest.
    #[arg(long, default_value_t = 0, requires = "poly")]
    root: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigFormat {
    Csv,
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Candidate {
    /// The Rényi–Parry density h_β.
    Parry,
    /// The constant function 1.
    Lebesgue,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit of 1 under x ↦ βx mod 1.
    Orbit {
        #[command(flatten)]
        base: Base,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// The invariant density as a step function.
    Density {
        #[command(flatten)]
        base: Base,
        /// Scale to total mass 1.
        #[arg(long)]
        normalized: bool,
        #[arg(long, value_enum, default_value_t = DensityFormat::Json)]
        format: DensityFormat,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Checks that a density is a fixed point of the transfer operator.
    Invariance {
        #[command(flatten)]
        base: Base,
        #[arg(long, value_enum, default_value_t = Candidate::Parry)]
        function: Candidate,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Decides whether two bases share the same invariant measure.
    Coincide {
        /// Compare β₁ and β₁ + 1 for the (p, q) family member.
        #[arg(long, value_name = "P,Q", conflicts_with_all = ["poly1", "poly2"])]
        pq: Option<String>,
        /// First base as a monic polynomial, constant term first.
        #[arg(long, value_name = "COEFFS", allow_hyphen_values = true, requires = "poly2")]
        poly1: Option<String>,
        /// Second base as a monic polynomial.
        #[arg(long, value_name = "COEFFS", allow_hyphen_values = true, requires = "poly1")]
        poly2: Option<String>,
        /// Which root above 1 of --poly1.
        #[arg(long, default_value_t = 0)]
        root1: usize,
        /// Which root above 1 of --poly2.
        #[arg(long, default_value_t = 0)]
        root2: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Checks every pair (β₁, β₁ + 1) with 1 ≤ p ≤ q ≤ N.
    Sweep {
        /// Largest q in the sweep [default: 20].
        #[arg(long, value_name = "N")]
        bound: Option<i64>,
    },
    /// Exhaustive coincidence search over small monic polynomials.
    Search {
        /// Largest polynomial degree.
        #[arg(long, value_name = "D")]
        degree: Option<usize>,
        /// Largest absolute value of a non-leading coefficient.
        #[arg(long, value_name = "C")]
        coeff_bound: Option<i64>,
        /// Ignore roots above R (integer, fraction or decimal).
        #[arg(long, value_name = "R")]
        root_max: Option<String>,
        /// Orbit steps before a base counts as unresolved.
        #[arg(long, value_name = "B")]
        budget: Option<usize>,
    },
    /// The golden-mean map and its normalized density.
    Figure1 {
        #[arg(long, value_enum, default_value_t = FigFormat::Csv)]
        format: FigFormat,
    },
    /// Monte-Carlo histogram against the exact density (not a proof).
    McValidate {
        #[command(flatten)]
        base: Base,
        /// Number of simulated orbits.
        #[arg(long, value_name = "N")]
        samples: Option<u64>,
        /// Number of equal-width histogram bins.
        #[arg(long, value_name = "B")]
        bins: Option<usize>,
        /// RNG seed.
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Undecided(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IncompleteOrbit { .. } => Failure::Undecided(format!("undecided: {e}")),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn json<T: Serialize>(report: &T, pass: bool) -> Self {
        Outcome {
            text: to_json(report),
            pass,
        }
    }
}

fn parse_pq(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("expected P,Q but got {text:?}"));
    let (p, q) = text.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn root_of(poly: &str, index: usize) -> Result<FieldElement, Failure> {
    let fields = isolate_roots_above_one(&parse_poly(poly)?)?;
    let count = fields.len();
    let field = fields
        .into_iter()
        .nth(index)
        .ok_or_else(|| Failure::Usage(format!("root index {index} out of range: {count} roots above 1")))?;
    Ok(FieldElement::theta(&field))
}

fn resolve(base: &Base) -> Result<FieldElement, Failure> {
    match (&base.pq, &base.poly) {
        (Some(pq), _) => {
            let (p, q) = parse_pq(pq)?;
            let (b1, b2) = make_pair(p, q)?;
            Ok(if base.plus_one { b2 } else { b1 })
        }
        (None, Some(poly)) => root_of(poly, base.root),
        (None, None) => Err(Failure::Usage("give the base with --pq or --poly".into())),
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<SearchConfig, Failure> {
    let Some(path) = path else {
        return Ok(SearchConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn poly_strings(beta: &FieldElement) -> Vec<String> {
    beta.field().modulus().iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct DensityReport {
    beta_poly: Vec<String>,
    beta: ExactValue,
    normalized: bool,
    integral: ExactValue,
    segments: Vec<Segment>,
}

#[derive(Serialize)]
struct CoincideOutput {
    #[serde(flatten)]
    report: CoincidenceView,
    theorem_verdict: bool,
    diagnostics_consistent: bool,
}

#[derive(Serialize)]
struct SearchOutput {
    search: SearchReport,
    audit: CatalogueAudit,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut cfg = load_config(cli.config.as_ref())?;
    let budget = |b: &Option<usize>| b.unwrap_or(if cli.config.is_some() { cfg.orbit_budget } else { DEFAULT_BUDGET });
    match &cli.command {
        Command::Orbit { base, budget: b } => {
            let beta = resolve(base)?;
            let orbit = orbit_of_one(&beta, budget(b))?;
            Ok(Outcome::json(&orbit.to_report(), orbit.is_complete()))
        }
        Command::Density {
            base,
            normalized,
            format,
            budget: b,
        } => {
            let beta = resolve(base)?;
            let mut h: StepFunction = build_density(&orbit_of_one(&beta, budget(b))?)?;
            if *normalized {
                h = h.normalize()?;
            }
            let text = match format {
                DensityFormat::Csv => density_csv(&h),
                DensityFormat::Svg => density_svg(&h),
                DensityFormat::Json => to_json(&DensityReport {
                    beta_poly: poly_strings(&beta),
                    beta: ExactValue::from(&beta),
                    normalized: *normalized,
                    integral: ExactValue::from(&h.integral()),
                    segments: h.to_report().segments,
                }),
            };
            Ok(Outcome { text, pass: true })
        }
        Command::Invariance {
            base,
            function,
            budget: b,
        } => {
            let beta = resolve(base)?;
            let f = match function {
                Candidate::Parry => build_density(&orbit_of_one(&beta, budget(b))?)?,
                Candidate::Lebesgue => StepFunction::constant(FieldElement::from_int(beta.field(), 1)),
            };
            let r = invariance_report(&beta, &f)?;
            let pass = r.fixed_point;
            Ok(Outcome::json(&r, pass))
        }
        Command::Coincide {
            pq,
            poly1,
            poly2,
            root1,
            root2,
            budget: b,
        } => {
            let (b1, b2) = match (pq, poly1, poly2) {
                (Some(pq), _, _) => {
                    let (p, q) = parse_pq(pq)?;
                    make_pair(p, q)?
                }
                (None, Some(a), Some(c)) => (root_of(a, *root1)?, root_of(c, *root2)?),
                _ => return Err(Failure::Usage("give --pq or both --poly1 and --poly2".into())),
            };
            let r = coincide(&b1, &b2, budget(b))?;
            let verdict = theorem_verdict(&b1, &b2)?;
            let consistent = r.diagnostics_consistent();
            let out = CoincideOutput {
                report: r.to_view(),
                theorem_verdict: verdict,
                diagnostics_consistent: consistent,
            };
            Ok(Outcome::json(&out, consistent && verdict == r.coincide))
        }
        Command::Sweep { bound } => {
            let bound = bound.unwrap_or(cfg.family_bound);
            let r = family_sweep_with_budget(bound, budget(&None))?;
            let pass = r.all_pass;
            Ok(Outcome::json(&r, pass))
        }
        Command::Search {
            degree,
            coeff_bound,
            root_max,
            budget: b,
        } => {
            if let Some(d) = degree {
                cfg.max_degree = *d;
            }
            if let Some(c) = coeff_bound {
                cfg.coeff_bound = *c;
            }
            if let Some(r) = root_max {
                cfg.root_max = parse_rational(r)?;
            }
            if let Some(b) = b {
                cfg.orbit_budget = *b;
            }
            let catalogue = enumerate_parry_catalogue(&cfg)?;
            let search = search_in_catalogue(&cfg, &catalogue)?;
            let audit = audit_catalogue(&catalogue)?;
            let pass = search.matches && audit.pass;
            Ok(Outcome::json(&SearchOutput { search, audit }, pass))
        }
        Command::Figure1 { format } => {
            let format = match format {
                FigFormat::Csv => FigureFormat::Csv,
                FigFormat::Svg => FigureFormat::Svg,
                FigFormat::Json => FigureFormat::Json,
            };
            Ok(Outcome {
                text: emit_figure1(format)?,
                pass: true,
            })
        }
        Command::McValidate {
            base,
            samples,
            bins,
            seed,
        } => {
            let beta = resolve(base)?;
            if let Some(s) = samples {
                cfg.mc_samples = *s;
            }
            if let Some(b) = bins {
                cfg.mc_bins = *b;
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if cfg.mc_samples > 0 {
                cfg.validate()?;
            }
            let r = mc_validate(&beta, &cfg)?;
            let pass = r.pass;
            Ok(Outcome::json(&r, pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &outcome.text) {
                        eprintln!("parry: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", outcome.text),
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("parry: property check failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("parry: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Undecided(msg)) => {
            eprintln!("parry: {msg}");
            ExitCode::from(1)
        }
    }
}
