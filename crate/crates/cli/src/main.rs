//! Command-line front end for the exact precover/preenvelope engines.
//!
//! Every command reads JSON inputs, prints a single JSON report to stdout,
//! and exits 0 on success, 2 on malformed input, and 3 when a
//! certification fails.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use repcot::base::oracle::{pair_by_name, subcategory_by_name, CotorsionPairOracle};
use repcot::base::{BaseObject, Instance};
use repcot::construct::{
    phi_precover, phi_sub_precover, psi_preenvelope, psi_sub_preenvelope, Certificate, Check,
    ConstructionTrace,
};
use repcot::ext::{base_ext1, ext1_dim, euler_ext1};
use repcot::io::{
    certificate_json, instance_by_name, parse_quiver, parse_rep, rep_json, rep_ses_json,
    trace_json, QuiverSpec,
};
use repcot::quiver::{Quiver, Side};
use repcot::rep::{hom_rep_dim, Representation};
use repcot::sample::{demo_quiver, random_object, random_rep, seeded_rng};
use repcot::Error;

#[derive(Parser)]
#[command(
    name = "repcot",
    version,
    about = "Exact special precovers and preenvelopes for quiver representations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the rootedness filtrations of a quiver, on both sides
    Rooted {
        #[arg(long)]
        quiver: PathBuf,
    },
    /// Enumerate all paths between two vertices as arrow-id sequences
    Paths {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Exact Ext¹ between two representations, with the Euler-form
    /// cross-check over plain vector spaces
    Ext1 {
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        rep2: PathBuf,
    },
    /// Certified special precover of a representation for a built-in pair
    Precover {
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        pair: String,
        /// Write the full level-by-level trace to this file
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Certified special preenvelope of a representation for a built-in pair
    Preenvelope {
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Certified special precover whose structure-map cokernels land in a
    /// built-in precovering subcategory
    PrecoverSub {
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Certified special preenvelope whose structure-map kernels land in a
    /// built-in preenveloping subcategory
    PreenvelopeSub {
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Stress-test a built-in pair on seeded samples: approximations,
    /// orthogonality, and (over a quiver) full engine runs
    VerifyCotorsion {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long)]
        quiver: Option<PathBuf>,
    },
    /// Run the demo quiver construction and print its full trace
    DemoAppendix {
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(exit_code(&e));
        }
    }
}

/// 3 for certification failures, 2 for anything wrong with the input.
fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(re) = cause.downcast_ref::<Error>() {
            return match re {
                Error::OracleSoundness { .. } | Error::NotExact(_) => 3,
                _ => 2,
            };
        }
    }
    2
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_quiver(path: &Path) -> Result<Arc<Quiver>> {
    Ok(Arc::new(parse_quiver(&read(path)?).with_context(|| format!("in {}", path.display()))?))
}

fn ambient_instance(base: &Option<String>, p: Option<u64>) -> Result<Option<Instance>> {
    match (base, p) {
        (Some(kind), Some(p)) => Ok(Some(instance_by_name(kind, p)?)),
        (Some(_), None) => anyhow::bail!("--base needs --p"),
        (None, Some(_)) => anyhow::bail!("--p needs --base"),
        (None, None) => Ok(None),
    }
}

fn load_rep(
    path: &Path,
    quiver: &Option<PathBuf>,
    base: &Option<String>,
    p: Option<u64>,
) -> Result<Representation> {
    let ambient_quiver = quiver.as_ref().map(|q| load_quiver(q)).transpose()?;
    let ambient = ambient_instance(base, p)?;
    parse_rep(&read(path)?, ambient_quiver, ambient)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Into::into)
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports always serialize"));
}

fn write_trace(trace: &ConstructionTrace, out: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&trace_json(trace));
        std::fs::write(path, format!("{}\n", text?))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Condensed report for an engine run; the full evidence goes to
/// `--trace-out`.
fn trace_report(trace: &ConstructionTrace, target: &Representation) -> Value {
    let mut m = Map::new();
    m.insert(
        "kind".into(),
        json!(match trace.kind {
            repcot::construct::TowerKind::Cover => "precover",
            repcot::construct::TowerKind::Envelope => "preenvelope",
        }),
    );
    m.insert("oracle".into(), json!(trace.oracle));
    m.insert("target".into(), rep_json(target));
    m.insert("levels".into(), json!(trace.levels.len()));
    m.insert("result".into(), rep_ses_json(trace.result()));
    m.insert("certificate".into(), certificate_json(&trace.certificate));
    Value::Object(m)
}

fn finish_trace(
    trace: &ConstructionTrace,
    target: &Representation,
    trace_out: &Option<PathBuf>,
) -> Result<i32> {
    write_trace(trace, trace_out)?;
    emit(&trace_report(trace, target));
    Ok(if trace.certificate.pass { 0 } else { 3 })
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Rooted { quiver } => {
            let q = load_quiver(&quiver)?;
            let side = |s: Side| -> Value {
                let r = q.rootedness(s);
                json!({
                    "rooted": r.rooted,
                    "filtration": r.filtration.levels.iter().map(|level| {
                        level.iter().map(|&v| q.vertex_name(v)).collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                    "stabilized_at": r.filtration.stabilized_at,
                })
            };
            emit(&json!({
                "quiver": serde_json::to_value(QuiverSpec::of(&q))?,
                "left": side(Side::Into),
                "right": side(Side::OutOf),
                "acyclic": q.is_acyclic(),
            }));
            Ok(0)
        }
        Cmd::Paths { quiver, from, to } => {
            let q = load_quiver(&quiver)?;
            let i = q.vertex_index(&from)?;
            let j = q.vertex_index(&to)?;
            let paths = q.enumerate_paths(i, j)?;
            let ids: Vec<Vec<&str>> = paths
                .iter()
                .map(|path| path.iter().map(|&k| q.arrows()[k].id.as_str()).collect())
                .collect();
            emit(&json!({"from": from, "to": to, "count": ids.len(), "paths": ids}));
            Ok(0)
        }
        Cmd::Ext1 { quiver, base, p, rep, rep2 } => {
            let m = load_rep(&rep, &quiver, &base, p)?;
            let n = load_rep(&rep2, &quiver, &base, p)?;
            let hom = hom_rep_dim(&m, &n)?;
            let ext = ext1_dim(&m, &n)?;
            let oracle = if m.instance().is_dual() {
                Value::Null
            } else {
                let value = euler_ext1(&m, &n)?;
                json!({"name": "euler-form", "value": value, "agrees": value == ext})
            };
            let pass = oracle.is_null() || oracle["agrees"] == json!(true);
            emit(&json!({
                "base": {"kind": m.instance().name(), "p": m.instance().p()},
                "hom": hom,
                "ext1": ext,
                "oracle": oracle,
                "pass": pass,
            }));
            Ok(if pass { 0 } else { 3 })
        }
        Cmd::Precover { quiver, base, p, rep, pair, trace_out } => {
            let x = load_rep(&rep, &quiver, &base, p)?;
            let pair = pair_by_name(x.instance(), &pair)?;
            let trace = phi_precover(&x, &pair)?;
            finish_trace(&trace, &x, &trace_out)
        }
        Cmd::Preenvelope { quiver, base, p, rep, pair, trace_out } => {
            let x = load_rep(&rep, &quiver, &base, p)?;
            let pair = pair_by_name(x.instance(), &pair)?;
            let trace = psi_preenvelope(&x, &pair)?;
            finish_trace(&trace, &x, &trace_out)
        }
        Cmd::PrecoverSub { quiver, base, p, rep, sub, trace_out } => {
            let x = load_rep(&rep, &quiver, &base, p)?;
            let l = subcategory_by_name(x.instance(), &sub)?;
            let trace = phi_sub_precover(&x, &l)?;
            finish_trace(&trace, &x, &trace_out)
        }
        Cmd::PreenvelopeSub { quiver, base, p, rep, sub, trace_out } => {
            let x = load_rep(&rep, &quiver, &base, p)?;
            let l = subcategory_by_name(x.instance(), &sub)?;
            let trace = psi_sub_preenvelope(&x, &l)?;
            finish_trace(&trace, &x, &trace_out)
        }
        Cmd::VerifyCotorsion { pair, base, p, seed, max_dim, samples, quiver } => {
            let instance = instance_by_name(&base, p)?;
            let oracle = pair_by_name(instance, &pair)?;
            let quiver = quiver.as_ref().map(|q| load_quiver(q)).transpose()?;
            let report = verify_cotorsion(&oracle, seed, max_dim, samples, quiver.as_ref())?;
            let pass = report["pass"] == json!(true);
            emit(&report);
            Ok(if pass { 0 } else { 3 })
        }
        Cmd::DemoAppendix { trace_out } => {
            let fv = Instance::finvect(2)?;
            let q = demo_quiver();
            let one = BaseObject::vector_space(fv, 1);
            let id = repcot::base::BaseMorphism::identity(&one);
            let x = Representation::new(
                q.clone(),
                fv,
                vec![one.clone(), one.clone(), one.clone(), one],
                vec![id.clone(), id.clone(), id],
            )?;
            let pair = pair_by_name(fv, "all-all")?;
            let trace = phi_precover(&x, &pair)?;
            write_trace(&trace, &trace_out)?;
            emit(&trace_json(&trace));
            Ok(if trace.certificate.pass { 0 } else { 3 })
        }
    }
}

/// Sample objects (and representations, over a quiver), push each through
/// the validating oracle, and probe the pair's orthogonality exactly.
fn verify_cotorsion(
    oracle: &CotorsionPairOracle,
    seed: u64,
    max_dim: usize,
    samples: usize,
    quiver: Option<&Arc<Quiver>>,
) -> Result<Value> {
    let instance = oracle.instance();
    let mut rng = seeded_rng(seed);
    let mut checks: Vec<Check> = Vec::new();
    let mut objects: Vec<BaseObject> = Vec::new();
    for i in 0..samples {
        let m = random_object(&mut rng, instance, max_dim);
        let cover = oracle.cover(&m)?;
        let envelope = oracle.envelope(&m)?;
        checks.push(Check {
            name: format!("approximations #{i}"),
            pass: true,
            detail: format!(
                "dim {}: cover middle dim {}, envelope middle dim {}",
                m.dim(),
                cover.middle().dim(),
                envelope.middle().dim()
            ),
        });
        objects.push(m);
    }
    let mut ortho_pairs = 0usize;
    for m in &objects {
        for n in &objects {
            if oracle.member_x(m) && oracle.member_y(n) {
                let e = base_ext1(m, n)?;
                if e != 0 {
                    return Err(Error::oracle(
                        format!("pair `{}`", oracle.name()),
                        format!("Ext¹ is {e} on a sampled member pair"),
                    )
                    .into());
                }
                ortho_pairs += 1;
            }
        }
    }
    checks.push(Check {
        name: "orthogonality".into(),
        pass: true,
        detail: format!("Ext¹ vanished on {ortho_pairs} sampled member pairs"),
    });
    if let Some(q) = quiver {
        let runs = samples.min(8).max(1);
        for i in 0..runs {
            let x = random_rep(&mut rng, q, instance, max_dim)?;
            if q.rootedness(Side::Into).rooted {
                let trace = phi_precover(&x, oracle)?;
                checks.push(Check {
                    name: format!("precover run #{i}"),
                    pass: trace.certificate.pass,
                    detail: format!(
                        "target dims {:?}, {} levels, {} checks",
                        x.dims(),
                        trace.levels.len(),
                        trace.certificate.checks.len()
                    ),
                });
            }
            if q.rootedness(Side::OutOf).rooted {
                let trace = psi_preenvelope(&x, oracle)?;
                checks.push(Check {
                    name: format!("preenvelope run #{i}"),
                    pass: trace.certificate.pass,
                    detail: format!(
                        "target dims {:?}, {} levels, {} checks",
                        x.dims(),
                        trace.levels.len(),
                        trace.certificate.checks.len()
                    ),
                });
            }
        }
    }
    let cert = Certificate { pass: checks.iter().all(|c| c.pass), checks };
    let mut m = Map::new();
    m.insert("pair".into(), json!(oracle.name()));
    m.insert("base".into(), json!({"kind": instance.name(), "p": instance.p()}));
    m.insert("seed".into(), json!(seed));
    m.insert("max_dim".into(), json!(max_dim));
    m.insert("samples".into(), json!(samples));
    m.insert("certificate".into(), certificate_json(&cert));
    m.insert("pass".into(), json!(cert.pass));
    Ok(Value::Object(m))
}
