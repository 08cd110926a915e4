//! `hga`: bounds among weighted harmonic, geometric, and arithmetic means.
//!
//! Every subcommand prints one JSON report (or `key = value` lines with
//! `--format text`) and exits 0 on success, 1 on malformed input, 2 on an
//! infeasible problem, and 3 when a verification run finds a violation.

mod input;
mod report;

use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hga_core::oracle::{random_feasible_search, two_value_extremes, verify_sharpness, KnownPair};
use hga_core::{
    applications::matrix::{verify_trace_bound, SymmetricMatrix},
    applications::poly::PolynomialCoeffs,
    arithmetic_bounds, geometric_bounds, harmonic_bounds, simple, BoundInterval, CounterRng,
    MeanTriple, WeightedSample,
};

use report::{envelope, num, num_list, rel_error, to_text, witness};

#[derive(Parser)]
#[command(name = "hga", version, about = "Two-sided bounds among weighted means")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Relative tolerance for residual checks. Defaults to 1e-12, except
    /// `verify`, which defaults to the oracle's 1e-6.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the three means of a sample (JSON or CSV; `-` for stdin).
    Means { input: String },

    /// Sharp harmonic-mean bounds from the arithmetic and geometric means.
    BoundH {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        g: f64,
        #[command(flatten)]
        weights: WeightArgs,
    },

    /// Sharp geometric-mean bounds from the arithmetic and harmonic means.
    BoundG {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        h: f64,
        #[command(flatten)]
        weights: WeightArgs,
    },

    /// Sharp arithmetic-mean bounds from the harmonic and geometric means.
    BoundA {
        #[arg(long)]
        h: f64,
        #[arg(long)]
        g: f64,
        #[command(flatten)]
        weights: WeightArgs,
    },

    /// Closed-form bounds that need no equation solving (give exactly two of
    /// --a, --g, --h).
    Simple {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        /// The smallest weight.
        #[arg(long)]
        alpha: f64,
        /// Sample size; required when bounding the geometric mean.
        #[arg(long)]
        n: Option<usize>,
    },

    /// The limiting improvement threshold t0 (root of t e^(t+1) = 1).
    Threshold,

    /// Cross-check sharp intervals against the two-value oracle and random
    /// feasible search on randomized problems.
    Verify {
        /// Which pair of means is known: ga, ha, or ag (alias hg).
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        weights: VerifyWeights,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        /// Random feasible samples per trial.
        #[arg(long, default_value_t = 64)]
        samples: u32,
    },

    /// Upper-bound trace(A^-1) from the trace and determinant of an SPD
    /// matrix read from a file.
    TraceInvBound { input: String },

    /// Fransen-Lohne bounds on the second-highest coefficient of a
    /// polynomial with positive roots.
    PolyBound {
        /// Coefficients (descending degree) as an inline list, a file, or `-`.
        input: String,
        /// Interpret the numbers as roots and expand the monic polynomial.
        #[arg(long)]
        from_roots: bool,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Known geometric and arithmetic means; harmonic mean bounded.
    Ga,
    /// Known harmonic and arithmetic means; geometric mean bounded.
    Ha,
    /// Known harmonic and geometric means; arithmetic mean bounded.
    #[value(alias = "hg")]
    Ag,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WeightArgs {
    /// Comma-separated weights summing to 1.
    #[arg(long)]
    weights: Option<String>,
    /// Equal weights over N points.
    #[arg(long, value_name = "N")]
    equal: Option<usize>,
}

impl WeightArgs {
    fn resolve(&self) -> Result<Vec<f64>, CliError> {
        if let Some(list) = &self.weights {
            return Ok(input::parse_weights(list)?);
        }
        let n = self.equal.expect("clap group guarantees one source");
        if n < 2 {
            return Err(CliError::Malformed("--equal needs at least 2 points".into()));
        }
        Ok(vec![1.0 / n as f64; n])
    }

    fn describe(&self) -> Value {
        match (&self.weights, self.equal) {
            (Some(list), _) => json!(list),
            (None, Some(n)) => json!(format!("equal over {n}")),
            _ => Value::Null,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyWeights {
    /// Fixed comma-separated weights used for every trial.
    #[arg(long)]
    weights: Option<String>,
    /// Draw fresh random weights over N points each trial.
    #[arg(long)]
    n: Option<usize>,
}

enum CliError {
    Malformed(String),
    Core(hga_core::Error),
}

impl From<input::ParseError> for CliError {
    fn from(e: input::ParseError) -> Self {
        CliError::Malformed(e.0)
    }
}

impl From<hga_core::Error> for CliError {
    fn from(e: hga_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Core(e) => match e {
                hga_core::Error::Infeasible { .. }
                | hga_core::Error::NotPositiveDefinite { .. } => 2,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Malformed(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((body, code)) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&body).expect("report serializes");
                    s.push('\n');
                    s
                }
                Format::Text => to_text(&body),
            };
            emit(&rendered);
            process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            process::exit(e.exit_code());
        }
    }
}

/// Write to stdout, shrugging off a closed pipe (`hga ... | head` must not
/// panic and must keep its exit code).
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn run(cli: &Cli) -> Result<(Value, i32), CliError> {
    let tol = cli.tolerance.unwrap_or(1e-12);
    if let Some(t) = cli.tolerance {
        if !(t > 0.0) {
            return Err(CliError::Malformed(format!(
                "--tolerance must be positive, got {t}"
            )));
        }
    }
    match &cli.command {
        Command::Means { input } => cmd_means(input),
        Command::BoundH { a, g, weights } => {
            let w = weights.resolve()?;
            let interval = harmonic_bounds(&w, *a, *g)?;
            Ok(bound_report(
                "bound-h",
                weights.describe(),
                &w,
                [("a", *a), ("g", *g)],
                "h",
                g / a,
                &interval,
                tol,
            ))
        }
        Command::BoundG { a, h, weights } => {
            let w = weights.resolve()?;
            let interval = geometric_bounds(&w, *a, *h)?;
            Ok(bound_report(
                "bound-g",
                weights.describe(),
                &w,
                [("a", *a), ("h", *h)],
                "g",
                h / a,
                &interval,
                tol,
            ))
        }
        Command::BoundA { h, g, weights } => {
            let w = weights.resolve()?;
            let interval = arithmetic_bounds(&w, *h, *g)?;
            Ok(bound_report(
                "bound-a",
                weights.describe(),
                &w,
                [("h", *h), ("g", *g)],
                "a",
                h / g,
                &interval,
                tol,
            ))
        }
        Command::Simple { a, g, h, alpha, n } => cmd_simple(*a, *g, *h, *alpha, *n),
        Command::Threshold => Ok(cmd_threshold()),
        Command::Verify {
            kind,
            weights,
            trials,
            samples,
        } => cmd_verify(
            *kind,
            weights,
            *trials,
            *samples,
            cli.tolerance.unwrap_or(1e-6),
            cli.seed,
        ),
        Command::TraceInvBound { input } => cmd_trace_inv_bound(input),
        Command::PolyBound { input, from_roots } => cmd_poly_bound(input, *from_roots),
    }
}

fn mean_by_key(m: &MeanTriple, key: &str) -> f64 {
    match key {
        "h" => m.h,
        "g" => m.g,
        _ => m.a,
    }
}

fn cmd_means(path: &str) -> Result<(Value, i32), CliError> {
    let (values, weights) = input::parse_sample(path)?;
    let sample = match &weights {
        Some(w) => WeightedSample::new(&values, w)?,
        None => WeightedSample::equal_weights(&values)?,
    };
    let m = sample.means();
    let (_, alpha) = sample.min_weight();
    let body = envelope(
        "means",
        json!({
            "source": path,
            "n": sample.len(),
            "values": num_list(sample.values()),
            "weights": num_list(sample.weights()),
        }),
        (None, None),
        vec![],
        json!({}),
        json!({
            "means": { "h": num(m.h), "g": num(m.g), "a": num(m.a) },
            "alpha": num(alpha),
        }),
    );
    Ok((body, 0))
}

/// Residuals of one witness: how well it reproduces each known mean and
/// attains its endpoint. Returns the JSON object and the worst residual.
fn witness_residuals(
    sample: &WeightedSample,
    known: [(&str, f64); 2],
    target_key: &str,
    endpoint: f64,
) -> (Value, f64) {
    let m = sample.means();
    let mut worst = 0.0f64;
    let mut obj = serde_json::Map::new();
    for (key, value) in known {
        let r = rel_error(mean_by_key(&m, key), value);
        worst = worst.max(r);
        obj.insert(key.to_string(), num(r));
    }
    let r = rel_error(mean_by_key(&m, target_key), endpoint);
    worst = worst.max(r);
    obj.insert("endpoint".into(), num(r));
    (Value::Object(obj), worst)
}

/// Report for the three sharp-bound commands: interval, witnesses, and the
/// residuals tying the witnesses to the knowns and endpoints.
#[allow(clippy::too_many_arguments)]
fn bound_report(
    command: &str,
    weight_spec: Value,
    weights: &[f64],
    known: [(&str, f64); 2],
    target_key: &str,
    ratio: f64,
    interval: &BoundInterval,
    tol: f64,
) -> (Value, i32) {
    let (lower_res, worst_lo) =
        witness_residuals(&interval.lower_witness, known, target_key, interval.lower);
    let (upper_res, worst_hi) =
        witness_residuals(&interval.upper_witness, known, target_key, interval.upper);
    let max_residual = worst_lo.max(worst_hi);

    let mut inputs = serde_json::Map::new();
    for (key, value) in known {
        inputs.insert(key.to_string(), num(value));
    }
    inputs.insert("weights_spec".into(), weight_spec);
    inputs.insert("weights".into(), num_list(weights));

    let body = envelope(
        command,
        Value::Object(inputs),
        (Some(interval.lower), Some(interval.upper)),
        vec![
            witness("lower", &interval.lower_witness),
            witness("upper", &interval.upper_witness),
        ],
        json!({
            "lower": lower_res,
            "upper": upper_res,
            "max": num(max_residual),
            "within_tolerance": max_residual <= tol,
        }),
        json!({
            "target": target_key,
            "clamped": ratio > 1.0,
        }),
    );
    (body, 0)
}

fn cmd_simple(
    a: Option<f64>,
    g: Option<f64>,
    h: Option<f64>,
    alpha: f64,
    n: Option<usize>,
) -> Result<(Value, i32), CliError> {
    let inputs = |target: &str| {
        json!({
            "a": a.map(num).unwrap_or(Value::Null),
            "g": g.map(num).unwrap_or(Value::Null),
            "h": h.map(num).unwrap_or(Value::Null),
            "alpha": num(alpha),
            "n": n,
            "target": target,
        })
    };
    let body = match (a, g, h) {
        (Some(a), Some(g), None) => {
            let lower = simple::harmonic_lower(a, g, alpha)?;
            envelope(
                "simple",
                inputs("h"),
                (Some(lower), Some(g)),
                vec![],
                json!({}),
                json!({ "kind": "harmonic-lower", "strict": true, "trivial_side": "upper" }),
            )
        }
        (None, Some(g), Some(h)) => {
            let upper = simple::arithmetic_upper(h, g, alpha)?;
            envelope(
                "simple",
                inputs("a"),
                (Some(g), Some(upper)),
                vec![],
                json!({}),
                json!({ "kind": "arithmetic-upper", "strict": true, "trivial_side": "lower" }),
            )
        }
        (Some(a), None, Some(h)) => {
            let n = n.ok_or_else(|| {
                CliError::Malformed("--n is required when bounding the geometric mean".into())
            })?;
            let interval = simple::geometric_interval(h, a, alpha, n)?;
            let improves = simple::improves_over_trivial(h / a, n)?;
            envelope(
                "simple",
                inputs("g"),
                (Some(interval.lower), Some(interval.upper)),
                vec![],
                json!({}),
                json!({
                    "kind": ["geometric-lower", "geometric-upper"],
                    "strict": true,
                    "factor": num(interval.factor),
                    "improves_over_trivial": improves,
                }),
            )
        }
        _ => {
            return Err(CliError::Malformed(
                "simple needs exactly two of --a, --g, --h".into(),
            ))
        }
    };
    Ok((body, 0))
}

fn cmd_threshold() -> (Value, i32) {
    let t0 = simple::improvement_threshold();
    let residual = t0 * (t0 + 1.0).exp() - 1.0;
    let body = envelope(
        "threshold",
        json!({}),
        (None, None),
        vec![],
        json!({ "threshold_equation": num(residual) }),
        json!({ "t0": num(t0) }),
    );
    (body, 0)
}

fn cmd_verify(
    kind: Kind,
    weights: &VerifyWeights,
    trials: u32,
    samples: u32,
    tol: f64,
    seed: u64,
) -> Result<(Value, i32), CliError> {
    let fixed: Option<Vec<f64>> = match (&weights.weights, weights.n) {
        (Some(list), _) => Some(input::parse_weights(list)?),
        (None, Some(n)) => {
            if !(2..=hga_core::oracle::MAX_POINTS).contains(&n) {
                return Err(CliError::Malformed(format!(
                    "--n must be between 2 and {} for the exhaustive oracle",
                    hga_core::oracle::MAX_POINTS
                )));
            }
            None
        }
        _ => unreachable!("clap group guarantees one source"),
    };
    if trials == 0 {
        return Err(CliError::Malformed("--trials must be positive".into()));
    }

    let mut rng = CounterRng::new(seed);
    let mut failures: Vec<Value> = Vec::new();
    let mut failed_count: u32 = 0;
    let mut max_lower = 0.0f64;
    let mut max_upper = 0.0f64;

    for trial in 0..trials {
        let w: Vec<f64> = match &fixed {
            Some(w) => w.clone(),
            None => {
                let n = weights.n.expect("checked above");
                let raw: Vec<f64> = (0..n).map(|_| rng.range(0.1, 1.0)).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / s).collect()
            }
        };
        let alpha = w.iter().cloned().fold(f64::INFINITY, f64::min);
        // Keep the singleton root of the minimal-weight subset clear of the
        // oracle's boundary cutoff: ratio^(1/alpha) must stay above ~1e-12,
        // hence the exp(-23 alpha) floor.
        let lo = (-23.0 * alpha).exp().max(0.35);
        let r = rng.range(lo, 0.99);

        let (interval, known) = match kind {
            Kind::Ga => (
                harmonic_bounds(&w, 1.0, r)?,
                KnownPair::GeometricArithmetic { g: r, a: 1.0 },
            ),
            Kind::Ha => (
                geometric_bounds(&w, 1.0, r)?,
                KnownPair::HarmonicArithmetic { h: r, a: 1.0 },
            ),
            Kind::Ag => (
                arithmetic_bounds(&w, r, 1.0)?,
                KnownPair::HarmonicGeometric { h: r, g: 1.0 },
            ),
        };
        let oracle = two_value_extremes(&w, known)?;
        let verdict = verify_sharpness(&interval, &oracle, tol);
        max_lower = max_lower.max(verdict.lower_error);
        max_upper = max_upper.max(verdict.upper_error);

        let search = random_feasible_search(&w, known, samples, &mut rng)?;
        let lo_slack = interval.lower - tol * interval.lower.abs().max(1e-300);
        let hi_slack = interval.upper + tol * interval.upper.abs().max(1e-300);
        let search_contained =
            search.observed_min >= lo_slack && search.observed_max <= hi_slack;

        if !(verdict.holds() && search_contained) {
            failed_count += 1;
            // Keep the first few in full; the count covers the rest.
            if failures.len() < 5 {
                failures.push(json!({
                    "trial": trial,
                    "weights": num_list(&w),
                    "ratio": num(r),
                    "interval": { "lower": num(interval.lower), "upper": num(interval.upper) },
                    "oracle": { "min": num(oracle.observed_min), "max": num(oracle.observed_max) },
                    "search": { "min": num(search.observed_min), "max": num(search.observed_max) },
                    "contained": verdict.contained,
                    "endpoints_match": verdict.endpoints_match,
                    "search_contained": search_contained,
                }));
            }
        }
    }

    let body = envelope(
        "verify",
        json!({
            "kind": match kind { Kind::Ga => "ga", Kind::Ha => "ha", Kind::Ag => "ag" },
            "weights": weights.weights.clone().map(Value::from).unwrap_or(Value::Null),
            "n": weights.n,
            "trials": trials,
            "samples": samples,
            "seed": seed,
            "tolerance": num(tol),
        }),
        (None, None),
        vec![],
        json!({
            "max_lower_error": num(max_lower),
            "max_upper_error": num(max_upper),
        }),
        json!({
            "passed": trials - failed_count,
            "failed": failed_count,
            "failures": failures,
            "ok": failed_count == 0,
        }),
    );
    Ok((body, if failed_count > 0 { 3 } else { 0 }))
}

fn cmd_trace_inv_bound(path: &str) -> Result<(Value, i32), CliError> {
    let (n, entries) = input::parse_matrix(path)?;
    let matrix = SymmetricMatrix::new(n, &entries)?;
    let report = verify_trace_bound(&matrix)?;
    // trace(A^-1) >= n^2/trace is the harmonic-arithmetic half of the same
    // inequality family, so the report carries a two-sided interval.
    let lower = (n * n) as f64 / report.trace;
    let body = envelope(
        "trace-inv-bound",
        json!({ "source": path, "n": n }),
        (Some(lower), Some(report.bound)),
        vec![],
        json!({ "slack_ratio": num(report.slack_ratio) }),
        json!({
            "trace": num(report.trace),
            "det": num(report.det),
            "log_det": num(report.log_det),
            "trace_inverse": num(report.trace_inverse),
            "holds": report.holds,
        }),
    );
    Ok((body, if report.holds { 0 } else { 3 }))
}

fn cmd_poly_bound(raw: &str, from_roots: bool) -> Result<(Value, i32), CliError> {
    let numbers = input::parse_number_list(raw)?;
    let poly = if from_roots {
        PolynomialCoeffs::from_roots(&numbers)?
    } else {
        PolynomialCoeffs::new(&numbers)?
    };
    let report = hga_core::applications::poly::verify_bounds(&poly)?;
    let body = envelope(
        "poly-bound",
        json!({
            "input": raw,
            "from_roots": from_roots,
            "degree": poly.degree(),
            "coeffs": num_list(poly.coeffs()),
        }),
        (Some(report.lower), Some(report.upper)),
        vec![],
        json!({
            "lower_slack": num((report.observed - report.lower) / report.lower.abs().max(1e-300)),
            "upper_slack": num((report.upper - report.observed) / report.upper.abs().max(1e-300)),
        }),
        json!({
            "observed": num(report.observed),
            "holds": report.holds,
        }),
    );
    Ok((body, if report.holds { 0 } else { 3 }))
}
