//! Command-line front end: object tables, Hall-number tables, the
//! verification suites, and direct structure-constant queries, all with
//! deterministic JSON output.  Exit codes: 0 all pass, 1 identity
//! violation, 2 truncation/budget abort, 3 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use sdhall::backend::{Category, IsoClass};
use sdhall::complexes::ComplexAlgebra;
use sdhall::double::DoubleAlgebra;
use sdhall::hallcore::HallAlgebra;
use sdhall::k0::K0Class;
use sdhall::quiver::QuiverFile;
use sdhall::report::{Report, SuiteOutcome};
use sdhall::sdh::{SdhAlgebra, SdhKey};
use sdhall::{Error, Result};

#[derive(Parser)]
#[command(name = "sdhall", version, about = "Exact Hall-algebra tables and identity verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List isomorphism classes within the bound.
    Objects(ConfigArgs),
    /// Tabulate Hall numbers within the bound, computed by both routes.
    HallTable(HallTableArgs),
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Evaluate a product or coproduct in the semi-derived basis.
    Sdh(SdhArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Backend: "vect" (one-vertex, no arrows) or "quiver" (see --quiver).
    #[arg(long, default_value = "vect")]
    backend: String,
    /// Quiver description file (JSON with vertices, arrows, q).
    #[arg(long)]
    quiver: Option<PathBuf>,
    /// Field size (prime); required for the vect backend.
    #[arg(long)]
    q: Option<u32>,
    /// Dimension-vector bound, comma-separated.
    #[arg(long)]
    bound: String,
    /// Worker threads for independent suites.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file (defaults to standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HallTableArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Corrupt one table row to exercise downstream agreement checks.
    #[arg(long, hide = true)]
    inject_disagreement: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated suite names (default: all).
    #[arg(long)]
    suite: Option<String>,
}

#[derive(Args)]
struct SdhArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Operation: "mul" or "coprod".
    #[arg(long)]
    op: String,
    /// Left operand as JSON {"alpha":[..],"beta":[..],"a":"V1","b":"V0"}.
    #[arg(long)]
    left: String,
    /// Right operand (mul only).
    #[arg(long)]
    right: Option<String>,
}

struct Context {
    cat: Arc<Category>,
    bound: K0Class,
    config: serde_json::Value,
}

fn build_context(args: &ConfigArgs) -> Result<Context> {
    let cat = match args.backend.as_str() {
        "vect" => {
            let q = args
                .q
                .ok_or_else(|| Error::Config("--q is required for the vect backend".into()))?;
            Category::vect(q)?
        }
        "quiver" => {
            let path = args
                .quiver
                .as_ref()
                .ok_or_else(|| Error::Config("--quiver FILE is required".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let (spec, file_q) = QuiverFile::parse(&text)?;
            if let Some(q) = args.q {
                if q != file_q {
                    return Err(Error::Config(format!(
                        "--q {q} conflicts with q={file_q} in the quiver file"
                    )));
                }
            }
            Category::quiver(spec, file_q)?
        }
        other => return Err(Error::Config(format!("unknown backend {other:?}"))),
    };
    let entries: Vec<i64> = args
        .bound
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Config(format!("bad bound entry {s:?}")))
        })
        .collect::<Result<_>>()?;
    if entries.len() != cat.k0_rank() || entries.iter().any(|&x| x < 0) {
        return Err(Error::Config(format!(
            "bound must have {} nonnegative entries",
            cat.k0_rank()
        )));
    }
    let config = serde_json::json!({
        "backend": args.backend,
        "q": cat.q,
        "bound": entries,
    });
    Ok(Context { cat, bound: K0Class(entries), config })
}

fn emit(args: &ConfigArgs, text: &str) -> Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_objects(args: &ConfigArgs) -> Result<()> {
    let ctx = build_context(args)?;
    let mut objects = Vec::new();
    for m in ctx.cat.objects_up_to(&ctx.bound)? {
        objects.push(serde_json::json!({
            "name": ctx.cat.name_of(m),
            "class": ctx.cat.class_of(m).0,
            "aut": ctx.cat.aut_count(m).to_string(),
        }));
    }
    let doc = serde_json::json!({
        "version": 1,
        "config": ctx.config,
        "objects": objects,
    });
    emit(args, &serde_json::to_string_pretty(&doc).expect("serialization"))
}

fn cmd_hall_table(args: &HallTableArgs) -> Result<()> {
    let ctx = build_context(&args.config)?;
    let hall = HallAlgebra::new(ctx.cat.clone());
    let objs = ctx.cat.objects_up_to(&ctx.bound)?;
    let mut rows = Vec::new();
    for &m in &objs {
        for &n in &objs {
            let target = &ctx.cat.class_of(m) + &ctx.cat.class_of(n);
            if !target.leq(&ctx.bound) {
                continue;
            }
            for r in ctx.cat.objects_of_class(&target)? {
                let filtration = hall.hall_number(m, n, r)?;
                if filtration.is_zero() {
                    continue;
                }
                let direct = hall.hall_number_direct(m, n, r)?;
                let mut agree = filtration == direct;
                if args.inject_disagreement && rows.is_empty() {
                    agree = !agree;
                }
                rows.push(serde_json::json!({
                    "m": ctx.cat.name_of(m),
                    "n": ctx.cat.name_of(n),
                    "r": ctx.cat.name_of(r),
                    "hall": filtration.to_json(),
                    "direct": direct.to_json(),
                    "agree": agree,
                }));
            }
        }
    }
    let doc = serde_json::json!({
        "version": 1,
        "config": ctx.config,
        "rows": rows,
    });
    emit(&args.config, &serde_json::to_string_pretty(&doc).expect("serialization"))
}

const ALL_SUITES: &[&str] = &[
    "gaussian-binomial",
    "hall-number-double-entry",
    "hall-associativity",
    "green-formula",
    "green-corollary",
    "hall-coassociativity",
    "hall-bialgebra",
    "hall-counit",
    "torus-well-defined",
    "normal-form",
    "product-oracle",
    "sdh-coassociativity",
    "sdh-compatibility",
    "sdh-counit",
    "extended-bialgebra",
    "hopf-pairing",
    "double-relations",
    "coproduct-iso",
];

fn run_suite(ctx: &Context, name: &str) -> Result<SuiteOutcome> {
    let cat = &ctx.cat;
    let bound = &ctx.bound;
    match name {
        "gaussian-binomial" => {
            HallAlgebra::verify_gaussian_counts(cat.q, bound.total().min(4))
        }
        "hall-number-double-entry" => HallAlgebra::new(cat.clone()).verify_hall_numbers(bound),
        "hall-associativity" => HallAlgebra::new(cat.clone()).verify_associativity(bound),
        "green-formula" => HallAlgebra::new(cat.clone()).verify_green_formula(bound),
        "green-corollary" => HallAlgebra::new(cat.clone()).verify_green_corollary(bound),
        "hall-coassociativity" => HallAlgebra::new(cat.clone()).verify_coassociativity(bound),
        "hall-bialgebra" => HallAlgebra::new(cat.clone()).verify_bialgebra(bound),
        "hall-counit" => HallAlgebra::new(cat.clone()).verify_counit(bound),
        "torus-well-defined" => {
            let sdh = SdhAlgebra::new(cat.clone());
            let cpx = ComplexAlgebra::new(cat.clone());
            sdh.verify_torus_well_defined(&cpx, bound)
        }
        "normal-form" => {
            let sdh = SdhAlgebra::new(cat.clone());
            let cpx = ComplexAlgebra::new(cat.clone());
            sdh.verify_normal_forms(&cpx, bound, bound)
        }
        "product-oracle" => {
            let sdh = SdhAlgebra::new(cat.clone());
            let cpx = ComplexAlgebra::new(cat.clone());
            sdh.verify_product_oracle(&cpx, bound, 0)
        }
        "sdh-coassociativity" => SdhAlgebra::new(cat.clone()).verify_coassociativity(bound, 0),
        "sdh-compatibility" => SdhAlgebra::new(cat.clone()).verify_compatibility(bound, 0),
        "sdh-counit" => SdhAlgebra::new(cat.clone()).verify_counit(bound, 0),
        "extended-bialgebra" => DoubleAlgebra::new(cat.clone()).verify_ext_bialgebra(bound),
        "hopf-pairing" => DoubleAlgebra::new(cat.clone()).verify_hopf_pairing(bound),
        "double-relations" => {
            let dbl = DoubleAlgebra::new(cat.clone());
            let sdh = SdhAlgebra::new(cat.clone());
            dbl.verify_double_relations(&sdh, bound)
        }
        "coproduct-iso" => {
            let dbl = DoubleAlgebra::new(cat.clone());
            let sdh = SdhAlgebra::new(cat.clone());
            dbl.verify_coproduct_iso(&sdh, bound)
        }
        other => Err(Error::Config(format!("unknown suite {other:?}"))),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let ctx = build_context(&args.config)?;
    let names: Vec<String> = match &args.suite {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => ALL_SUITES.iter().map(|s| s.to_string()).collect(),
    };
    for n in &names {
        if !ALL_SUITES.contains(&n.as_str()) {
            return Err(Error::Config(format!("unknown suite {n:?}")));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.config.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<SuiteOutcome> = pool.install(|| {
        names
            .par_iter()
            .map(|name| match run_suite(&ctx, name) {
                Ok(outcome) => outcome,
                Err(e) => {
                    // Budget/truncation boundaries abort the suite instead
                    // of producing a verdict.
                    let mut outcome = SuiteOutcome::new(name.clone());
                    outcome.abort(e.to_string());
                    outcome
                }
            })
            .collect()
    });
    let mut report = Report::new(ctx.config.clone());
    report.suites = outcomes;
    for s in &report.suites {
        eprintln!(
            "{}: {} instances, {} failures, {} aborted",
            s.name, s.instances, s.failure_count, s.aborted
        );
    }
    let code = if !report.all_passed() && report.suites.iter().any(|s| s.failure_count > 0) {
        1
    } else if report.any_aborted() {
        2
    } else {
        0
    };
    emit(&args.config, &report.to_json_string())?;
    Ok(code)
}

fn parse_key(ctx: &Context, text: &str) -> Result<SdhKey> {
    #[derive(serde::Deserialize)]
    struct KeySpec {
        alpha: Vec<i64>,
        beta: Vec<i64>,
        a: String,
        b: String,
    }
    let spec: KeySpec =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad key: {e}")))?;
    if spec.alpha.len() != ctx.cat.k0_rank() || spec.beta.len() != ctx.cat.k0_rank() {
        return Err(Error::Config("key torus parts have the wrong rank".into()));
    }
    let lookup = |name: &str| -> Result<IsoClass> {
        for m in ctx.cat.objects_up_to(&ctx.bound)? {
            if ctx.cat.name_of(m) == name {
                return Ok(m);
            }
        }
        Err(Error::Config(format!("unknown object {name:?} within bound")))
    };
    Ok(SdhKey {
        alpha: K0Class(spec.alpha),
        beta: K0Class(spec.beta),
        a: lookup(&spec.a)?,
        b: lookup(&spec.b)?,
    })
}

fn key_json(ctx: &Context, k: &SdhKey) -> serde_json::Value {
    serde_json::json!({
        "alpha": k.alpha.0,
        "beta": k.beta.0,
        "a": ctx.cat.name_of(k.a),
        "b": ctx.cat.name_of(k.b),
    })
}

fn cmd_sdh(args: &SdhArgs) -> Result<()> {
    let ctx = build_context(&args.config)?;
    let sdh = SdhAlgebra::new(ctx.cat.clone());
    let left = parse_key(&ctx, &args.left)?;
    let terms: Vec<serde_json::Value> = match args.op.as_str() {
        "mul" => {
            let right_text = args
                .right
                .as_ref()
                .ok_or_else(|| Error::Config("--right is required for mul".into()))?;
            let right = parse_key(&ctx, right_text)?;
            let prod = sdh.product_keys(&left, &right, 0)?;
            prod.terms
                .iter()
                .map(|(k, c)| {
                    serde_json::json!({ "key": key_json(&ctx, k), "coeff": c.to_json() })
                })
                .collect()
        }
        "coprod" => {
            let d = sdh.coproduct_key(&left, 0)?;
            d.terms
                .iter()
                .map(|((l, r), c)| {
                    serde_json::json!({
                        "left": key_json(&ctx, l),
                        "right": key_json(&ctx, r),
                        "coeff": c.to_json(),
                    })
                })
                .collect()
        }
        other => return Err(Error::Config(format!("unknown op {other:?}"))),
    };
    let doc = serde_json::json!({
        "version": 1,
        "config": ctx.config,
        "op": args.op,
        "terms": terms,
    });
    emit(&args.config, &serde_json::to_string_pretty(&doc).expect("serialization"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<u8> = match &cli.cmd {
        Cmd::Objects(a) => cmd_objects(a).map(|()| 0),
        Cmd::HallTable(a) => cmd_hall_table(a).map(|()| 0),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Sdh(a) => cmd_sdh(a).map(|()| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Error::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(3)
        }
        Err(Error::Budget(msg)) | Err(Error::Truncation(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
