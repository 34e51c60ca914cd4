//! `tautring`: exact verification and cycle arithmetic for the
//! tautological rings of the Fano variety of lines, its square, and K3
//! powers.

mod engine;
mod eval;
mod manifest;
mod parser;
mod report_io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tautring::cohom;
use tautring::config::EngineConfig;
use tautring::fano::{reduced_gc_monomials, RelationCoefficients, SquareImages};
use tautring::Scalar;

use engine::Engine;
use eval::{render_value, EvalError, Evaluator, RingContext, Value};

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CLOSURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tautring",
    about = "Exact tautological-ring calculator and verification suite",
    version
)]
struct Cli {
    /// Configuration file (key = value); the TAUTRING_CONFIG environment
    /// variable supplies a default path.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification manifest.
    Verify {
        /// Run only entries whose id matches this prefix.
        #[arg(long)]
        only: Option<String>,
        /// Write a machine-readable aggregate report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Parallelism for the manifest groups.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Alternative relation-coefficient data file.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        /// Largest K3 power to verify (5 is best-effort).
        #[arg(long, default_value_t = 4)]
        k3_max_power: usize,
        /// Omit wall-clock fields from the report body.
        #[arg(long)]
        no_time: bool,
    },
    /// Reduce an expression to its normal form.
    Reduce {
        #[arg(long)]
        ring: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Integrate a top-degree expression.
    Integrate {
        #[arg(long)]
        ring: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the graded dimension table of a ring.
    Dims {
        #[arg(long)]
        ring: String,
    },
    /// Solve for the coefficients expressing a target in a family.
    Derive {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Family: `gc:<degree>` (reduced per-factor monomials),
        /// `gc-raw:<degree>`, or a semicolon-separated expression list.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "FxF")]
        ring: String,
    },
    /// Compose two correspondences.
    Compose {
        #[arg(long, default_value = "FxF")]
        ring: String,
        /// `chow` (default; may hit a closure violation) or `cohom`.
        #[arg(long, default_value = "chow")]
        model: String,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type Fail = (u8, String);

fn load_config(path: &Option<PathBuf>) -> Result<EngineConfig, Fail> {
    let chosen = path.clone().or_else(|| {
        std::env::var_os("TAUTRING_CONFIG").map(PathBuf::from)
    });
    match chosen {
        None => Ok(EngineConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", p.display())))?;
            EngineConfig::parse(&text).map_err(|e| (EXIT_USAGE, e.to_string()))
        }
    }
}

fn parse_ring(s: &str) -> Result<RingContext, Fail> {
    RingContext::parse(s).ok_or((
        EXIT_USAGE,
        format!("unknown ring `{s}` (expected F, FxF, Gr or K3:r,d)"),
    ))
}

fn eval_error_code(e: &EvalError) -> u8 {
    match e {
        EvalError::ClosureViolation(_) => EXIT_CLOSURE,
        _ => EXIT_USAGE,
    }
}

fn evaluate(engine: &Engine, ring: RingContext, text: &str) -> Result<(Value, Vec<String>), Fail> {
    let ast = parser::parse(text).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let mut ev = Evaluator::new(engine, ring);
    let value = ev
        .eval(&ast)
        .map_err(|e| (eval_error_code(&e), e.to_string()))?;
    Ok((value, ev.warnings))
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let cfg = load_config(&cli.config)?;
    match cli.command {
        Command::Verify {
            only,
            report,
            jobs,
            coefficients,
            k3_max_power,
            no_time,
        } => {
            let coeffs = match coefficients {
                None => RelationCoefficients::builtin(),
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| {
                        (EXIT_USAGE, format!("cannot read {}: {e}", p.display()))
                    })?;
                    RelationCoefficients::parse(&text)
                        .map_err(|e| (EXIT_USAGE, e.to_string()))?
                }
            };
            if k3_max_power == 0 || k3_max_power > 5 {
                return Err((EXIT_USAGE, "k3-max-power must be between 1 and 5".into()));
            }
            let params = manifest::ManifestParams {
                cfg,
                coeffs,
                only,
                jobs: jobs.max(1),
                k3_max_power,
            };
            let result = manifest::run_manifest(&params);
            print!("{}", report_io::render_lines(&result, !no_time));
            if let Some(path) = report {
                let json = report_io::to_json(&result);
                std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap())
                    .map_err(|e| (EXIT_USAGE, format!("cannot write report: {e}")))?;
            }
            Ok(manifest::exit_code(&result) as u8)
        }
        Command::Reduce { ring, expr } => {
            let ring = parse_ring(&ring)?;
            let engine = Engine::new(cfg, None).map_err(|e| (EXIT_USAGE, e))?;
            let (value, warnings) = evaluate(&engine, ring, &expr)?;
            for w in warnings {
                eprintln!("note: {w}");
            }
            println!("{}", render_value(&value));
            Ok(EXIT_OK)
        }
        Command::Integrate { ring, expr } => {
            let ring = parse_ring(&ring)?;
            let engine = Engine::new(cfg, None).map_err(|e| (EXIT_USAGE, e))?;
            let (value, _) = evaluate(&engine, ring, &format!("int({expr})"))?;
            println!("{}", render_value(&value));
            Ok(EXIT_OK)
        }
        Command::Dims { ring } => {
            let ring_ctx = parse_ring(&ring)?;
            let engine = Engine::new(cfg, None).map_err(|e| (EXIT_USAGE, e))?;
            let dims: Vec<(u32, usize)> = match ring_ctx {
                RingContext::Fano => {
                    let r = &engine.fano().ring;
                    (0..=4).map(|d| (d, r.graded_dimension(d))).collect()
                }
                RingContext::FanoSquare => {
                    let r = &engine.sq.ring;
                    (0..=8).map(|d| (d, r.graded_dimension(d))).collect()
                }
                RingContext::Grassmann => {
                    let r = &engine.gr.ring;
                    (0..=8).map(|d| (d, r.graded_dimension(d))).collect()
                }
                RingContext::K3 { r, d } => {
                    let ring = tautring::k3::K3PowerRing::build(r, d);
                    (0..=2 * r as u32)
                        .map(|k| (k, ring.ring.graded_dimension(k)))
                        .collect()
                }
            };
            let line: Vec<String> = dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
            println!("{}", line.join(" "));
            Ok(EXIT_OK)
        }
        Command::Derive {
            target,
            family,
            ring,
        } => {
            let ring_ctx = parse_ring(&ring)?;
            if ring_ctx != RingContext::FanoSquare {
                return Err((
                    EXIT_USAGE,
                    "derivation runs in the FxF cohomology model".into(),
                ));
            }
            let engine = Engine::new(cfg, None).map_err(|e| (EXIT_USAGE, e))?;
            let images =
                SquareImages::new(&engine.model_fxf).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let (target_value, _) = evaluate(&engine, ring_ctx, &target)?;
            let target_class = match target_value {
                Value::Cohom(c) => c,
                Value::Chow(x) => engine
                    .sq
                    .cycle_map(&engine.model_fxf)
                    .map_err(|e| (EXIT_USAGE, e.to_string()))?
                    .apply(&x),
                Value::Num(_) => {
                    return Err((EXIT_USAGE, "target must be a cycle expression".into()))
                }
            };
            let (names, family_classes): (Vec<String>, Vec<cohom::CohomClass>) =
                if let Some(deg) = family.strip_prefix("gc:") {
                    let d: u32 = deg
                        .parse()
                        .map_err(|_| (EXIT_USAGE, "bad family degree".to_string()))?;
                    let exps = reduced_gc_monomials(d);
                    exps.iter()
                        .map(|e| (gc_name(e), images.gc_class(e)))
                        .unzip()
                } else if let Some(deg) = family.strip_prefix("gc-raw:") {
                    let d: u32 = deg
                        .parse()
                        .map_err(|_| (EXIT_USAGE, "bad family degree".to_string()))?;
                    let exps = raw_gc_monomials(d);
                    exps.iter()
                        .map(|e| (gc_name(e), images.gc_class(e)))
                        .unzip()
                } else {
                    let mut names = Vec::new();
                    let mut classes = Vec::new();
                    for part in family.split(';') {
                        let (v, _) = evaluate(&engine, ring_ctx, part)?;
                        let class = match v {
                            Value::Cohom(c) => c,
                            Value::Chow(x) => engine
                                .sq
                                .cycle_map(&engine.model_fxf)
                                .map_err(|e| (EXIT_USAGE, e.to_string()))?
                                .apply(&x),
                            Value::Num(_) => {
                                return Err((
                                    EXIT_USAGE,
                                    "family members must be cycle expressions".into(),
                                ))
                            }
                        };
                        names.push(part.trim().to_string());
                        classes.push(class);
                    }
                    (names, classes)
                };
            match cohom::derive_relation(&target_class, &family_classes) {
                None => {
                    println!("no solution in the span");
                    Ok(EXIT_VERIFICATION)
                }
                Some((solution, kernel)) => {
                    for (name, coef) in names.iter().zip(&solution) {
                        if !coef.is_zero() {
                            println!("{name}: {coef}");
                        }
                    }
                    if solution.iter().all(Scalar::is_zero) {
                        println!("0");
                    }
                    println!("kernel dimension: {}", kernel.len());
                    for vec in &kernel {
                        let terms: Vec<String> = names
                            .iter()
                            .zip(vec)
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(n, c)| format!("{c}*{n}"))
                            .collect();
                        println!("kernel: {}", terms.join(" + "));
                    }
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Compose {
            ring,
            model,
            left,
            right,
        } => {
            let ring_ctx = parse_ring(&ring)?;
            if ring_ctx != RingContext::FanoSquare {
                return Err((EXIT_USAGE, "composition runs on the square".into()));
            }
            let engine = Engine::new(cfg, None).map_err(|e| (EXIT_USAGE, e))?;
            let (a, _) = evaluate(&engine, ring_ctx, &left)?;
            let (b, _) = evaluate(&engine, ring_ctx, &right)?;
            let value = match model.as_str() {
                "cohom" => {
                    let to_class = |v: Value| -> Result<cohom::CohomClass, Fail> {
                        match v {
                            Value::Cohom(c) => Ok(c),
                            Value::Chow(x) => Ok(engine
                                .sq
                                .cycle_map(&engine.model_fxf)
                                .map_err(|e| (EXIT_USAGE, e.to_string()))?
                                .apply(&x)),
                            Value::Num(_) => {
                                Err((EXIT_USAGE, "operands must be classes".into()))
                            }
                        }
                    };
                    Value::Cohom(tautring::corresp::compose(&to_class(a)?, &to_class(b)?))
                }
                "chow" => match (a, b) {
                    (Value::Chow(x), Value::Chow(y)) => {
                        let composed = tautring::corresp::compose_chow(
                            &engine.sq,
                            &x,
                            &y,
                            &engine.cubic_h4(),
                        )
                        .map_err(|v| (EXIT_CLOSURE, v.to_string()))?;
                        Value::Chow(composed)
                    }
                    _ => {
                        return Err((
                            EXIT_USAGE,
                            "chow composition needs two cycle expressions".into(),
                        ))
                    }
                },
                other => return Err((EXIT_USAGE, format!("unknown model `{other}`"))),
            };
            println!("{}", render_value(&value));
            Ok(EXIT_OK)
        }
    }
}

fn gc_name(e: &[u8; 4]) -> String {
    let names = ["g1", "g2", "c1", "c2"];
    let mut parts = Vec::new();
    for (i, &exp) in e.iter().enumerate() {
        match exp {
            0 => {}
            1 => parts.push(names[i].to_string()),
            _ => parts.push(format!("{}^{}", names[i], exp)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn raw_gc_monomials(degree: u32) -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a1 in 0..=degree.min(4) as u8 {
        for a2 in 0..=degree.min(4) as u8 {
            for b1 in 0..=(degree / 2) as u8 {
                for b2 in 0..=(degree / 2) as u8 {
                    let total = a1 as u32 + a2 as u32 + 2 * (b1 as u32 + b2 as u32);
                    let f1 = a1 as u32 + 2 * b1 as u32;
                    let f2 = a2 as u32 + 2 * b2 as u32;
                    if total == degree && f1 <= 4 && f2 <= 4 {
                        out.push([a1, a2, b1, b2]);
                    }
                }
            }
        }
    }
    out
}
