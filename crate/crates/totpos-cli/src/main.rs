//! `totpos` — command-line front end for the total-positivity toolkit.
//!
//! Every subcommand prints one UTF-8 JSON report on standard output and
//! reserves standard error for diagnostics. Exit codes: 0 when the property
//! holds or the command succeeded, 1 when a property fails or a
//! counterexample was found (the report carries the evidence), 2 for usage,
//! IO, or parse errors, and 3 when a float check was inconclusive.

use std::error::Error;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use totpos::checker::{check, CheckOptions, Property, Verdict};
use totpos::completion::{self, CompletionError};
use totpos::expr::parse_expr;
use totpos::io::{self, MatrixFile};
use totpos::matrix::Matrix;
use totpos::scalar::{Scalar, DEFAULT_PRECISION};
use totpos::transforms::{
    self, FalsifyOptions, FalsifyOutcome, FunctionDescriptor, Mode,
};

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Total positivity toolkit: check matrix positivity classes, apply
/// entrywise transforms, classify which functions preserve each class, hunt
/// for counterexamples, and build structured completions.
#[derive(Parser)]
#[command(name = "totpos", version)]
struct Cli {
    /// Mantissa bits for float evaluation.
    #[arg(long, global = true, env = "TOTPOS_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a positivity property of a matrix file.
    Check {
        /// Property: tn, tp, pd, psd, or hankel-tp.
        #[arg(long)]
        property: String,
        /// Restrict tn/tp to minors of size at most R.
        #[arg(long, value_name = "R")]
        order: Option<usize>,
        /// Matrix file: JSON schema, `.csv` for float CSV, `-` for stdin.
        #[arg(long)]
        file: String,
        /// Reject float matrix files; guarantees an exact verdict.
        #[arg(long)]
        exact: bool,
        /// Round entries to floats at the working precision first.
        #[arg(long, conflicts_with = "exact")]
        float: bool,
        /// Base tolerance for float minors (scaled per minor by row maxima).
        #[arg(long)]
        tol: Option<f64>,
        /// Accepted for compatibility; scans are always deterministic.
        #[arg(long)]
        deterministic: bool,
    },
    /// Apply a function entrywise and emit the image matrix.
    Apply {
        /// Expression in x, e.g. "exp(x)-1" or "x^2 + 1/2".
        #[arg(long = "fn", value_name = "EXPR", conflicts_with = "power")]
        function: Option<String>,
        /// Power map c·x^α, written "c,α" with rational c and α.
        #[arg(long, value_name = "C,ALPHA")]
        power: Option<String>,
        #[arg(long)]
        file: String,
    },
    /// Print the family of entrywise preservers for a mode and threshold.
    Classify {
        /// Class: tn, tp, tn-sym, tp-sym, hankel-fixed, or hankel-all.
        #[arg(long)]
        mode: Mode,
        /// Dimension threshold Δ = min(rows, cols).
        #[arg(long)]
        delta: usize,
    },
    /// Decide whether the power map c·x^α preserves a class.
    IsPreserver {
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        delta: usize,
        /// The map c·x^α, written "c,α" with rational c > 0 and α.
        #[arg(long, value_name = "C,ALPHA")]
        power: String,
    },
    /// Search for a matrix in the class whose image under F leaves it.
    Falsify {
        /// Expression in x, e.g. "exp(x)-1".
        #[arg(long = "fn", value_name = "EXPR", conflicts_with = "power")]
        function: Option<String>,
        /// Power map c·x^α, written "c,α".
        #[arg(long, value_name = "C,ALPHA")]
        power: Option<String>,
        /// Constant map F(x) = c, rational c.
        #[arg(long, conflicts_with_all = ["function", "power"])]
        constant: Option<String>,
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        delta: usize,
        /// Maximum number of candidate matrices examined.
        #[arg(long, default_value_t = 512)]
        budget: usize,
        /// Seed for the random tail of the candidate schedule.
        #[arg(long, default_value_t = 0xbeef)]
        seed: u64,
        /// Base tolerance for float image verdicts.
        #[arg(long, default_value_t = 1e-30)]
        tol: f64,
    },
    /// Emit a matrix from one of the built-in witness families.
    Witness {
        /// Family name; run with an unknown name to list the catalog.
        #[arg(long)]
        family: String,
        /// Comma-separated rational parameters, e.g. "1/2,3".
        #[arg(long, value_name = "P1,P2,...")]
        params: Option<String>,
        /// Seed for the random families.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Embed a totally positive 2x2 in the top-left of a generalized
    /// Vandermonde matrix.
    Embed {
        /// Matrix file holding the 2x2 seed.
        #[arg(long, conflicts_with = "entries")]
        file: Option<String>,
        /// Seed entries "a,b,c,d" (row-major rationals).
        #[arg(long, value_name = "A,B,C,D")]
        entries: Option<String>,
        /// Output rows.
        #[arg(long, default_value_t = 4)]
        rows: usize,
        /// Output columns (defaults to --rows).
        #[arg(long)]
        cols: Option<usize>,
    },
    /// Embed a totally positive 2x2 at prescribed row and column pairs.
    EmbedAt {
        #[arg(long, conflicts_with = "entries")]
        file: Option<String>,
        #[arg(long, value_name = "A,B,C,D")]
        entries: Option<String>,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long)]
        cols: Option<usize>,
        /// Placement "p,p',q,q'": the seed lands on rows p < p' and
        /// columns q < q'.
        #[arg(long, value_name = "P,P',Q,Q'")]
        at: String,
    },
    /// Complete three Hankel moments (a, b, c) to a totally positive
    /// moment matrix of a given size.
    CompleteHankel {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        /// Matrix size Δ; the completion carries 2Δ − 1 moments.
        #[arg(long, value_name = "DELTA")]
        size: usize,
        /// Stretch placement "n,k,N": entries a, b, c land at moment
        /// indices n, n+k, n+2k inside a matrix of size N.
        #[arg(long, value_name = "N,K,BIG_N")]
        spacing: Option<String>,
    },
    /// Prepend two moments to a totally positive Hankel moment sequence.
    ExtendBackwards {
        /// Comma-separated moments s_0, s_1, ..., s_{2k} (odd count).
        #[arg(long, value_name = "S0,S1,...")]
        moments: String,
        /// Slack added beyond the critical root (default max(1, |root|)).
        #[arg(long)]
        margin: Option<String>,
    },
    /// Smear a full-rank totally nonnegative matrix into a totally
    /// positive one by a Gaussian sandwich.
    Densify {
        #[arg(long)]
        file: String,
        /// Bound on the entrywise distance to the input.
        #[arg(long, default_value = "1/1000000")]
        tol: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = cli.precision;
    match run(cli.command, precision) {
        Ok((report, code)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => EXIT_HOLDS,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn run(command: Command, precision: usize) -> Result<(Value, u8), Box<dyn Error>> {
    match command {
        Command::Check { property, order, file, exact, float, tol, deterministic: _ } => {
            let m = io::load_matrix(&file, precision)?;
            if exact && !m.is_exact() {
                return Err("--exact requires a rational matrix file".into());
            }
            let m = if float { m.to_float(precision) } else { m };
            let prop = parse_property(&property, order)?;
            let mut opts = CheckOptions::default();
            if let Some(t) = tol {
                opts.tol_base = t;
            }
            let cert = check(&m, prop, &opts)?;
            let code = verdict_exit(cert.verdict);
            let report = json!({
                "command": "check",
                "file": file,
                "rows": m.rows(),
                "cols": m.cols(),
                "exact": m.is_exact(),
                "certificate": cert,
            });
            Ok((report, code))
        }

        Command::Apply { function, power, file } => {
            let f = function_from_args(function, power, None)?;
            let m = io::load_matrix(&file, precision)?;
            let image = transforms::apply_entrywise(&m, &f, precision)?;
            let report = json!({
                "command": "apply",
                "function": f.to_string(),
                "matrix": MatrixFile::from_matrix(&image),
            });
            Ok((report, EXIT_HOLDS))
        }

        Command::Classify { mode, delta } => {
            let class = transforms::classify(mode, delta)?;
            let report = json!({
                "command": "classify",
                "mode": mode,
                "delta": delta,
                "class": class,
                "description": class.description(),
            });
            Ok((report, EXIT_HOLDS))
        }

        Command::IsPreserver { mode, delta, power } => {
            let (c, alpha) = parse_power_arg(&power)?;
            let preserves = transforms::is_power_preserver(mode, delta, &c, &alpha)?;
            let class = transforms::classify(mode, delta)?;
            let report = json!({
                "command": "is-preserver",
                "mode": mode,
                "delta": delta,
                "c": c,
                "alpha": alpha,
                "preserves": preserves,
                "class": class.description(),
            });
            Ok((report, if preserves { EXIT_HOLDS } else { EXIT_FAILS }))
        }

        Command::Falsify { function, power, constant, mode, delta, budget, seed, tol } => {
            let f = function_from_args(function, power, constant)?;
            let opts = FalsifyOptions { budget, seed, precision, tol_base: tol };
            match transforms::falsify(mode, delta, &f, &opts)? {
                FalsifyOutcome::Counterexample(cex) => {
                    let report = json!({
                        "command": "falsify",
                        "function": f.to_string(),
                        "mode": mode,
                        "delta": delta,
                        "outcome": "counterexample",
                        "family": cex.family,
                        "matrix": MatrixFile::from_matrix(&cex.matrix),
                        "transformed": MatrixFile::from_matrix(&cex.transformed),
                        "source_certificate": cex.source,
                        "violation": cex.violation,
                    });
                    Ok((report, EXIT_FAILS))
                }
                FalsifyOutcome::BudgetExhausted { tried, sources_rejected, evaluations_failed } => {
                    let report = json!({
                        "command": "falsify",
                        "function": f.to_string(),
                        "mode": mode,
                        "delta": delta,
                        "outcome": "budget-exhausted",
                        "tried": tried,
                        "sources_rejected": sources_rejected,
                        "evaluations_failed": evaluations_failed,
                    });
                    Ok((report, EXIT_HOLDS))
                }
            }
        }

        Command::Witness { family, params, seed } => {
            let params = match params {
                Some(p) => parse_scalar_list(&p)?,
                None => Vec::new(),
            };
            let m = build_witness(&family, &params, seed)?;
            let report = json!({
                "command": "witness",
                "family": family,
                "matrix": MatrixFile::from_matrix(&m),
            });
            Ok((report, EXIT_HOLDS))
        }

        Command::Embed { file, entries, rows, cols } => {
            let seed = seed_matrix(file, entries, precision)?;
            let cols = cols.unwrap_or(rows);
            match completion::embed_2x2_vandermonde(&seed, rows, cols, precision) {
                Ok(emb) => {
                    let realized = emb.realize(precision)?;
                    Ok((embedding_report("embed", &emb, &realized), EXIT_HOLDS))
                }
                Err(e) => completion_failure("embed", e),
            }
        }

        Command::EmbedAt { file, entries, rows, cols, at } => {
            let seed = seed_matrix(file, entries, precision)?;
            let cols = cols.unwrap_or(rows);
            let pos = parse_usize_list(&at, 4, "--at expects four indices p,p',q,q'")?;
            match completion::embed_2x2_at_position(
                &seed,
                rows,
                cols,
                (pos[0], pos[1]),
                (pos[2], pos[3]),
                precision,
            ) {
                Ok(emb) => {
                    let realized = emb.realize(precision)?;
                    Ok((embedding_report("embed-at", &emb, &realized), EXIT_HOLDS))
                }
                Err(e) => completion_failure("embed-at", e),
            }
        }

        Command::CompleteHankel { a, b, c, size, spacing } => {
            let a = parse_scalar_arg(&a)?;
            let b = parse_scalar_arg(&b)?;
            let c = parse_scalar_arg(&c)?;
            let result = match spacing {
                None => completion::complete_hankel_sym(&a, &b, &c, size, precision),
                Some(s) => {
                    let nk = parse_usize_list(&s, 3, "--spacing expects n,k,N")?;
                    completion::embed_equally_spaced(&a, &b, &c, nk[0], nk[1], nk[2], precision)
                }
            };
            match result {
                Ok(h) => {
                    let report = json!({
                        "command": "complete-hankel",
                        "s": h.s,
                        "rho": h.rho,
                        "scale": h.scale,
                        "spacing": h.params.map(|(n, k, big_n)| json!({"n": n, "k": k, "N": big_n})),
                        "moments": h.moments,
                        "matrix": MatrixFile::from_matrix(&h.matrix),
                        "certificate": h.certificate,
                    });
                    Ok((report, EXIT_HOLDS))
                }
                Err(e) => completion_failure("complete-hankel", e),
            }
        }

        Command::ExtendBackwards { moments, margin } => {
            let moments = parse_scalar_list(&moments)?;
            let margin = margin.map(|m| parse_scalar_arg(&m)).transpose()?;
            match completion::extend_backwards(&moments, margin.as_ref(), precision) {
                Ok(ext) => {
                    let report = json!({
                        "command": "extend-backwards",
                        "s_minus_1": ext.s_minus_1,
                        "s_minus_2": ext.s_minus_2,
                        "margin": ext.margin,
                        "moments": ext.moments,
                        "matrix": MatrixFile::from_matrix(&ext.matrix),
                        "certificate": ext.certificate,
                    });
                    Ok((report, EXIT_HOLDS))
                }
                Err(e) => completion_failure("extend-backwards", e),
            }
        }

        Command::Densify { file, tol } => {
            let m = io::load_matrix(&file, precision)?;
            let tol = parse_scalar_arg(&tol)?;
            match completion::densify_to_tp(&m, &tol) {
                Ok(d) => {
                    let report = json!({
                        "command": "densify",
                        "delta": d.delta,
                        "distance": d.distance,
                        "matrix": MatrixFile::from_matrix(&d.matrix),
                        "certificate": d.certificate,
                    });
                    Ok((report, EXIT_HOLDS))
                }
                Err(e) => completion_failure("densify", e),
            }
        }
    }
}

fn parse_property(name: &str, order: Option<usize>) -> Result<Property, String> {
    match (name, order) {
        ("tn", None) => Ok(Property::TotallyNonneg),
        ("tn", Some(r)) => Ok(Property::TotallyNonnegOrder(r)),
        ("tp", None) => Ok(Property::TotallyPositive),
        ("tp", Some(r)) => Ok(Property::TotallyPositiveOrder(r)),
        ("pd", None) => Ok(Property::PositiveDefinite),
        ("psd", None) => Ok(Property::PositiveSemidefinite),
        ("hankel-tp", None) => Ok(Property::HankelTotallyPositive),
        (_, Some(_)) => Err("--order applies to tn and tp only".to_string()),
        _ => Err(format!("unknown property `{name}` (expected tn, tp, pd, psd, hankel-tp)")),
    }
}

fn parse_scalar_arg(text: &str) -> Result<Scalar, String> {
    Scalar::parse(text.trim(), false, DEFAULT_PRECISION).map_err(|e| format!("`{text}`: {e}"))
}

fn parse_scalar_list(text: &str) -> Result<Vec<Scalar>, String> {
    text.split(',').map(parse_scalar_arg).collect()
}

fn parse_usize_list(text: &str, want: usize, usage: &str) -> Result<Vec<usize>, String> {
    let items: Result<Vec<usize>, _> =
        text.split(',').map(|t| t.trim().parse::<usize>()).collect();
    match items {
        Ok(v) if v.len() == want => Ok(v),
        _ => Err(usage.to_string()),
    }
}

fn parse_power_arg(text: &str) -> Result<(Scalar, Scalar), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("--power expects \"c,alpha\"".to_string());
    }
    Ok((parse_scalar_arg(parts[0])?, parse_scalar_arg(parts[1])?))
}

fn function_from_args(
    function: Option<String>,
    power: Option<String>,
    constant: Option<String>,
) -> Result<FunctionDescriptor, String> {
    match (function, power, constant) {
        (Some(expr), None, None) => {
            let e = parse_expr(&expr).map_err(|err| format!("--fn: {err}"))?;
            Ok(FunctionDescriptor::Expression(e))
        }
        (None, Some(p), None) => {
            let (c, alpha) = parse_power_arg(&p)?;
            Ok(FunctionDescriptor::Power { c, alpha })
        }
        (None, None, Some(c)) => Ok(FunctionDescriptor::Constant(parse_scalar_arg(&c)?)),
        _ => Err("provide exactly one of --fn, --power, --constant".to_string()),
    }
}

fn seed_matrix(
    file: Option<String>,
    entries: Option<String>,
    precision: usize,
) -> Result<Matrix, Box<dyn Error>> {
    match (file, entries) {
        (Some(path), None) => Ok(io::load_matrix(&path, precision)?),
        (None, Some(list)) => {
            let v = parse_scalar_list(&list)?;
            if v.len() != 4 {
                return Err("--entries expects four values a,b,c,d".into());
            }
            Ok(Matrix::from_rows(vec![vec![v[0].clone(), v[1].clone()], vec![
                v[2].clone(),
                v[3].clone(),
            ]])?)
        }
        _ => Err("provide exactly one of --file, --entries".into()),
    }
}

fn embedding_report(
    command: &str,
    emb: &completion::VandermondeEmbedding,
    realized: &Matrix,
) -> Value {
    json!({
        "command": command,
        "mu": emb.mu,
        "nodes": emb.nodes,
        "exponents": emb.exponents,
        "seed_rows": [emb.rows.0, emb.rows.1],
        "seed_cols": [emb.cols.0, emb.cols.1],
        "case": emb.case,
        "matrix": MatrixFile::from_matrix(realized),
        "certificate": emb.certificate,
    })
}

/// A completion that failed post-hoc verification is a first-class negative
/// result (exit 1 with the refuting certificate); everything else is usage.
fn completion_failure(command: &str, e: CompletionError) -> Result<(Value, u8), Box<dyn Error>> {
    match e {
        CompletionError::VerificationFailed(cert) => {
            let report = json!({
                "command": command,
                "outcome": "verification-failed",
                "certificate": *cert,
            });
            Ok((report, EXIT_FAILS))
        }
        other => Err(other.into()),
    }
}

fn build_witness(family: &str, params: &[Scalar], seed: Option<u64>) -> Result<Matrix, String> {
    use rand::SeedableRng;
    use totpos::witnesses as w;

    let p = |i: usize| -> Result<&Scalar, String> {
        params.get(i).ok_or_else(|| {
            format!("family `{family}` needs at least {} parameter(s)", i + 1)
        })
    };
    let int = |i: usize| -> Result<usize, String> {
        p(i)?
            .as_exact()
            .and_then(|r| if r.is_integer() { r.to_integer().try_into().ok() } else { None })
            .ok_or_else(|| format!("parameter {} of `{family}` must be a nonnegative integer", i + 1))
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.unwrap_or(0xbeef));

    match family {
        "pair-a" => Ok(w::family_a(p(0)?, p(1)?)),
        "pair-a-tp" => Ok(w::family_a_tp(p(0)?, p(1)?, p(2)?)),
        "pair-b" => Ok(w::family_b(p(0)?, p(1)?)),
        "pair-b-tp" => Ok(w::family_b_tp(p(0)?, p(1)?, p(2)?)),
        "mono-pair" => Ok(w::mono_pair(p(0)?, p(1)?)),
        "sym-rank1" => Ok(w::sym_rank1(p(0)?, p(1)?)),
        "sym-rank1-tp" => Ok(w::sym_rank1_tp(p(0)?, p(1)?, p(2)?)),
        "sym-rank1-shifted" => Ok(w::sym_rank1_shifted(p(0)?, p(1)?, p(2)?)),
        "rank1-sym3" => Ok(w::rank1_sym3(p(0)?, p(1)?)),
        "c-boundary" => Ok(w::matrix_c_rational()),
        "c-perturbed" => Ok(w::matrix_c_perturbed(p(0)?)),
        "n-family" => Ok(w::matrix_n(p(0)?, p(1)?)),
        "t-family" => Ok(w::matrix_t(p(0)?)),
        "t-sandwich" => Ok(w::t_sandwich(p(0)?, p(1)?, p(2)?)),
        "d-moment" => Ok(w::matrix_d(p(0)?, int(1)?)),
        "tp-moment-4" => Ok(w::tp_moment_4()),
        "tp-moment-5" => Ok(w::tp_moment_5()),
        "random-tn" => Ok(w::random_tn(int(0)?, int(1)?, &mut rng)),
        "random-tn-sym" => Ok(w::random_tn_sym(int(0)?, &mut rng)),
        "random-hankel" => Ok(w::random_hankel_moment(int(0)?, &mut rng)),
        "random-tp2" => Ok(w::random_tp2(&mut rng)),
        other => Err(format!(
            "unknown family `{other}`; available: pair-a, pair-a-tp, pair-b, pair-b-tp, \
             mono-pair, sym-rank1, sym-rank1-tp, sym-rank1-shifted, rank1-sym3, c-boundary, \
             c-perturbed, n-family, t-family, t-sandwich, d-moment, tp-moment-4, tp-moment-5, \
             random-tn, random-tn-sym, random-hankel, random-tp2"
        )),
    }
}
