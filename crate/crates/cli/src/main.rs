//! `tn2`: bracket evaluation, identity sweeps, derivation solves, and
//! automorphism checks from the command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 for usage errors. Reports go to stdout and are byte-identical across
//! runs; timing goes to stderr.

use clap::{Parser as ClapParser, Subcommand};
use twisted_n2_cli::parser::{Evaluator, SourceError};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use twisted_n2::{
    classify, coboundary, cybe, generalized_auto, homomorphism_residuals, identity_sweep,
    skew_check, solve_derivation_space, AlgebraInstance, AutoError, AutoSpec, AutoTable,
    DerivationError, GeneralizedAutoSpec, MatchLine, Parity, Scalar, Window,
};

#[derive(ClapParser)]
#[command(
    name = "tn2",
    version,
    about = "Exact computations in the twisted N=2 superconformal algebra"
)]
struct Cli {
    /// Algebra instance: `twisted` (half-integer indices) or `rank2` (Z + Zθ).
    #[arg(long, global = true, default_value = "twisted")]
    instance: String,
    /// Report format: `text` or `json`.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its canonical form.
    Eval {
        expr: String,
        /// Automorphism in scope for `auto(...)`, as `k=1,beta=2`.
        #[arg(long)]
        auto: Option<String>,
        /// Generalized automorphism, as `eps=-1,a1=-4,es=2,root=i`.
        #[arg(long)]
        gauto: Option<String>,
        /// Automorphism table file, one `L(1) -> -1*L(-1)` line per vector.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Half of the table domain when built from --auto/--gauto.
        #[arg(long, default_value = "4")]
        window: String,
    },
    /// Exhaustive antisymmetry and super-Jacobi sweep over a window.
    Jacobi {
        #[arg(long)]
        window: String,
    },
    /// Solve the homogeneous-derivation system and match the kernel.
    #[command(name = "solve-der")]
    SolveDer {
        #[arg(long)]
        parity: String,
        #[arg(long)]
        degree: String,
        #[arg(long)]
        window: String,
        #[arg(long)]
        inner: String,
    },
    /// Certify that a table is an automorphism on a window.
    #[command(name = "check-auto")]
    CheckAuto {
        #[arg(long)]
        auto: Option<String>,
        #[arg(long)]
        gauto: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value = "4")]
        window: String,
    },
    /// Recover classification data `(k, β)` from a table file.
    Classify {
        #[arg(long)]
        table: PathBuf,
    },
    /// Evaluate the classical Yang–Baxter sum of a candidate r-matrix.
    Cybe { expr: String },
    /// Apply the coboundary of an r-matrix to an element.
    #[command(name = "delta-r")]
    DeltaR {
        expr: String,
        #[arg(long)]
        x: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SourceError> for Failure {
    fn from(e: SourceError) -> Self {
        Failure::usage(e.to_string())
    }
}

struct Report {
    pass: bool,
    text: Vec<String>,
    json: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let inst = match cli.instance.as_str() {
        "twisted" => AlgebraInstance::twisted(),
        "rank2" => AlgebraInstance::rank_two(),
        other => {
            eprintln!("error: unknown instance '{other}' (expected twisted or rank2)");
            return ExitCode::from(2);
        }
    };
    if cli.format != "text" && cli.format != "json" {
        eprintln!("error: unknown format '{}' (expected text or json)", cli.format);
        return ExitCode::from(2);
    }

    let started = Instant::now();
    let outcome = run(&inst, &cli.command);
    let elapsed = started.elapsed();

    match outcome {
        Ok(report) => {
            let echo: Vec<String> = std::env::args().skip(1).collect();
            if cli.format == "json" {
                let doc = json!({
                    "command": echo.join(" "),
                    "instance": inst.name,
                    "status": if report.pass { "pass" } else { "fail" },
                    "results": report.json,
                });
                println!("{doc}");
            } else {
                for line in &report.text {
                    println!("{line}");
                }
            }
            eprintln!("elapsed: {elapsed:?}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(inst: &AlgebraInstance, command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Eval {
            expr,
            auto,
            gauto,
            table,
            window,
        } => {
            let scope = auto_scope(inst, auto, gauto, table, window)?;
            let ev = match &scope {
                Some(t) => Evaluator::with_auto(inst, t),
                None => Evaluator::new(inst),
            };
            let value = ev.eval_str(expr)?;
            let rendered = value.render(inst);
            Ok(Report {
                pass: true,
                text: vec![rendered.clone()],
                json: json!({ "value": rendered, "type": value.type_name() }),
            })
        }
        Command::Jacobi { window } => {
            let w = parse_window(window)?;
            let report = identity_sweep(inst, w);
            let mut text = vec![
                format!(
                    "instance={} window={} pairs={} triples={}",
                    inst.name,
                    window,
                    report.pairs_checked,
                    report.triples_checked
                ),
                format!(
                    "antisymmetry_violations={} jacobi_violations={}",
                    report.antisymmetry_violations.len(),
                    report.jacobi_violations.len()
                ),
            ];
            for (x, y) in &report.antisymmetry_violations {
                text.push(format!(
                    "  antisymmetry: ({}, {})",
                    x.render(inst),
                    y.render(inst)
                ));
            }
            for (x, y, z) in &report.jacobi_violations {
                text.push(format!(
                    "  jacobi: ({}, {}, {})",
                    x.render(inst),
                    y.render(inst),
                    z.render(inst)
                ));
            }
            let pass = report.is_clean();
            text.push(format!("sweep: {}", if pass { "pass" } else { "fail" }));
            Ok(Report {
                pass,
                text,
                json: json!({
                    "pairs": report.pairs_checked,
                    "triples": report.triples_checked,
                    "antisymmetry_violations": report.antisymmetry_violations.len(),
                    "jacobi_violations": report.jacobi_violations.len(),
                }),
            })
        }
        Command::SolveDer {
            parity,
            degree,
            window,
            inner,
        } => {
            let parity = match parity.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown parity '{other}' (expected even or odd)"
                    )))
                }
            };
            let ev = Evaluator::new(inst);
            let degree_gv = ev.parse_gamma(degree)?;
            let outer = parse_window(window)?;
            let inner_w = parse_window(inner)?;
            let report = solve_derivation_space(inst, parity, degree_gv, outer, inner_w)
                .map_err(derivation_failure)?;

            let summary = if report
                .matches
                .iter()
                .all(|m| matches!(m, MatchLine::Inner { .. }))
            {
                report.oracle_name.clone()
            } else if report.all_matched() {
                "span(δ_φ)".to_string()
            } else {
                "unmatched".to_string()
            };
            let mut text = vec![
                format!(
                    "instance={} parity={} degree={} window={} inner={}",
                    inst.name,
                    if parity == Parity::Even { "even" } else { "odd" },
                    degree_gv.render(inst),
                    window,
                    inner
                ),
                format!("dim={}, match={}", report.dimension, summary),
            ];
            let mut match_json = Vec::new();
            for (k, m) in report.matches.iter().enumerate() {
                match m {
                    MatchLine::Inner { coefficient } => {
                        text.push(format!(
                            "  vector {k}: inner multiple, coefficient={coefficient}"
                        ));
                        match_json.push(json!({
                            "kind": "inner",
                            "coefficient": coefficient.to_string(),
                        }));
                    }
                    MatchLine::HomSpan { coefficients } => {
                        let coeffs: Vec<String> =
                            coefficients.iter().map(Scalar::to_string).collect();
                        text.push(format!(
                            "  vector {k}: hom combination [{}]",
                            coeffs.join(", ")
                        ));
                        match_json.push(json!({
                            "kind": "hom_span",
                            "coefficients": coeffs,
                        }));
                    }
                    MatchLine::Unmatched => {
                        text.push(format!("  vector {k}: unmatched"));
                        match_json.push(json!({ "kind": "unmatched" }));
                    }
                }
            }
            let pass = report.all_matched();
            Ok(Report {
                pass,
                text,
                json: json!({
                    "dimension": report.dimension,
                    "unknowns": report.unknowns,
                    "oracle": report.oracle_name,
                    "match": summary,
                    "vectors": match_json,
                }),
            })
        }
        Command::CheckAuto {
            auto,
            gauto,
            table,
            window,
        } => {
            let w = parse_window(window)?;
            let scope = match auto_scope(inst, auto, gauto, table, window) {
                Ok(Some(t)) => t,
                Ok(None) => {
                    return Err(Failure::usage(
                        "check-auto needs one of --auto, --gauto or --table",
                    ))
                }
                // A violated generalized constraint is itself a check result.
                Err(failure) if failure.code == 1 => {
                    return Ok(Report {
                        pass: false,
                        text: vec![format!("constraint check: fail ({})", failure.message)],
                        json: json!({ "constraint_error": failure.message }),
                    });
                }
                Err(failure) => return Err(failure),
            };
            let residuals = homomorphism_residuals(inst, &scope, w).map_err(auto_failure)?;
            let pairs = w.pairs(inst);
            let nonzero: Vec<String> = pairs
                .iter()
                .zip(&residuals)
                .filter(|(_, r)| !r.is_zero())
                .map(|((x, y), _)| format!("({}, {})", x.render(inst), y.render(inst)))
                .collect();
            let pass = nonzero.is_empty();
            let mut text = vec![format!(
                "instance={} window={} pairs={} nonzero_residuals={}",
                inst.name,
                window,
                pairs.len(),
                nonzero.len()
            )];
            for witness in nonzero.iter().take(5) {
                text.push(format!("  residual at {witness}"));
            }
            text.push(format!(
                "automorphism check: {}",
                if pass { "pass" } else { "fail" }
            ));
            Ok(Report {
                pass,
                text,
                json: json!({
                    "pairs": pairs.len(),
                    "nonzero_residuals": nonzero.len(),
                    "witnesses": nonzero,
                }),
            })
        }
        Command::Classify { table } => {
            let t = load_table(inst, table)?;
            match classify(inst, &t) {
                Ok(spec) => Ok(Report {
                    pass: true,
                    text: vec![format!("k={} beta={}", spec.k, spec.beta)],
                    json: json!({ "k": spec.k, "beta": spec.beta.to_string() }),
                }),
                Err(AutoError::MissingVector { vector }) => Err(Failure::usage(format!(
                    "table does not cover the classification window: missing {vector}"
                ))),
                Err(err) => Ok(Report {
                    pass: false,
                    text: vec![format!("classification: fail ({err})")],
                    json: json!({ "error": err.to_string() }),
                }),
            }
        }
        Command::Cybe { expr } => {
            let ev = Evaluator::new(inst);
            let r = ev.eval_tensor2(expr)?;
            let skew = skew_check(&r);
            let c = cybe(inst, &r);
            let pass = c.is_zero();
            Ok(Report {
                pass,
                text: vec![
                    format!("skew={skew}"),
                    format!("c(r) = {}", c.render(inst)),
                    format!("yang-baxter: {}", if pass { "pass" } else { "fail" }),
                ],
                json: json!({
                    "skew": skew,
                    "cybe": c.render(inst),
                }),
            })
        }
        Command::DeltaR { expr, x } => {
            let ev = Evaluator::new(inst);
            let r = ev.eval_tensor2(expr)?;
            let arg = ev.eval_element(x)?;
            let d = coboundary(inst, &r, &arg)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let rendered = d.render(inst);
            Ok(Report {
                pass: true,
                text: vec![rendered.clone()],
                json: json!({ "delta_r": rendered }),
            })
        }
    }
}

fn parse_window_halves(s: &str) -> Result<i64, Failure> {
    let parse_int = |t: &str| -> Result<i64, Failure> {
        t.parse()
            .map_err(|_| Failure::usage(format!("bad window bound '{s}'")))
    };
    let halves = if let Some((num, den)) = s.split_once('/') {
        if den.trim() != "2" {
            return Err(Failure::usage(format!(
                "window bounds are integers or halves, got '{s}'"
            )));
        }
        parse_int(num.trim())?
    } else {
        2 * parse_int(s.trim())?
    };
    if halves < 0 {
        return Err(Failure::usage("window bounds must be nonnegative"));
    }
    Ok(halves)
}

fn parse_window(s: &str) -> Result<Window, Failure> {
    parse_window_halves(s).map(Window::half_steps)
}

fn derivation_failure(err: DerivationError) -> Failure {
    Failure::usage(err.to_string())
}

fn auto_failure(err: AutoError) -> Failure {
    Failure::usage(err.to_string())
}

/// Builds the automorphism named by the flags, if any. Generalized-constraint
/// violations surface with code 1 so `check-auto` can report them as results.
fn auto_scope(
    inst: &AlgebraInstance,
    auto: &Option<String>,
    gauto: &Option<String>,
    table: &Option<PathBuf>,
    window: &str,
) -> Result<Option<AutoTable>, Failure> {
    let given = [auto.is_some(), gauto.is_some(), table.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given > 1 {
        return Err(Failure::usage(
            "--auto, --gauto and --table are mutually exclusive",
        ));
    }
    let domain = Window::half_steps(2 * parse_window_halves(window)?);
    if let Some(spec) = auto {
        let spec = parse_auto_spec(inst, spec)?;
        if inst.rank != 1 {
            return Err(Failure::usage(
                "--auto describes rank-1 automorphisms; use --gauto for rank2",
            ));
        }
        return Ok(Some(spec.table(inst, domain)));
    }
    if let Some(spec) = gauto {
        let spec = parse_gauto_spec(inst, spec)?;
        return match generalized_auto(inst, &spec, domain) {
            Ok(t) => Ok(Some(t)),
            Err(err @ AutoError::ConstraintViolation { .. }) => Err(Failure {
                code: 1,
                message: err.to_string(),
            }),
            Err(err) => Err(auto_failure(err)),
        };
    }
    if let Some(path) = table {
        return Ok(Some(load_table(inst, path)?));
    }
    Ok(None)
}

fn parse_auto_spec(inst: &AlgebraInstance, s: &str) -> Result<AutoSpec, Failure> {
    let fields = parse_key_values(s)?;
    let k: u8 = fields
        .get("k")
        .ok_or_else(|| Failure::usage("--auto needs k=..."))?
        .parse()
        .map_err(|_| Failure::usage("k must be an integer mod 4"))?;
    let ev = Evaluator::new(inst);
    let beta = ev.eval_scalar(
        fields
            .get("beta")
            .ok_or_else(|| Failure::usage("--auto needs beta=..."))?,
    )?;
    AutoSpec::new(k, beta).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_gauto_spec(inst: &AlgebraInstance, s: &str) -> Result<GeneralizedAutoSpec, Failure> {
    let fields = parse_key_values(s)?;
    let ev = Evaluator::new(inst);
    let eps: i64 = fields
        .get("eps")
        .ok_or_else(|| Failure::usage("--gauto needs eps=1 or eps=-1"))?
        .parse()
        .map_err(|_| Failure::usage("eps must be 1 or -1"))?;
    let mut a_gen = Vec::new();
    for j in 1..=inst.rank {
        let key = format!("a{j}");
        let value = fields
            .get(key.as_str())
            .ok_or_else(|| Failure::usage(format!("--gauto needs {key}=...")))?;
        a_gen.push(ev.eval_scalar(value)?);
    }
    let e_s = ev.eval_scalar(
        fields
            .get("es")
            .ok_or_else(|| Failure::usage("--gauto needs es=..."))?,
    )?;
    let root = ev.eval_scalar(
        fields
            .get("root")
            .ok_or_else(|| Failure::usage("--gauto needs root=..."))?,
    )?;
    GeneralizedAutoSpec::new(eps, a_gen, e_s, root).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })
}

fn parse_key_values(s: &str) -> Result<BTreeMap<&str, &str>, Failure> {
    let mut out = BTreeMap::new();
    for piece in s.split(',') {
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("expected key=value, got '{piece}'")))?;
        out.insert(key.trim(), value.trim());
    }
    Ok(out)
}

/// Table files: one image per line, `L(1) -> -1*L(-1)`; blank lines and
/// `#` comments are skipped.
fn load_table(inst: &AlgebraInstance, path: &Path) -> Result<AutoTable, Failure> {
    let contents = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let ev = Evaluator::new(inst);
    let mut images = BTreeMap::new();
    for (lineno, line) in contents.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| {
            Failure::usage(format!("{}:{}: expected 'vector -> image'", path.display(), lineno + 1))
        })?;
        let source = ev.eval_element(lhs.trim())?;
        let mut terms = source.terms();
        let bv = match (terms.next(), terms.next()) {
            (Some((bv, coeff)), None) if coeff.is_one() => *bv,
            _ => {
                return Err(Failure::usage(format!(
                    "{}:{}: the left side must be a single basis vector",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        let image = ev.eval_element(rhs.trim())?;
        images.insert(bv, image);
    }
    Ok(AutoTable::from_images(images))
}
