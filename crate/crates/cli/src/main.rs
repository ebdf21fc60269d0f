//! `schur`: batch front end for the Coxeter, Hecke, Schur-algebroid and
//! Demazure computations in `schur-core`.

mod cache;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use schur_core::schur::decomposition_json;
use schur_core::{
    run_suite, CoxeterSpec, CoxeterSystem, Demazure, Error, GeneratorSubset, HeckeAlgebra, Limits, SchurAlgebroid,
    SuiteConfig,
};
use serde_json::{json, Value};

use cache::{CacheMismatch, KlCache};

#[derive(Parser)]
#[command(name = "schur", version, about = "Exact Hecke-algebra, Schur-algebroid and Demazure computations")]
struct Cli {
    #[command(flatten)]
    group: GroupArgs,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Read and extend a KL cache file: `--cache` for ./klcache.json or `--cache=PATH`.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "klcache.json", global = true)]
    cache: Option<PathBuf>,

    /// Print the number of KL basis elements computed to stderr.
    #[arg(long, global = true)]
    stats: bool,

    /// Worker threads for parallel steps.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArgs {
    /// Group by short name: A3, B2, I2(5), A1xB2.
    #[arg(long = "type", global = true, conflicts_with = "spec")]
    kind: Option<String>,

    /// Group as JSON, e.g. '{"type":"A","rank":3}', or a path to such a file.
    #[arg(long, global = true)]
    spec: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// KL basis elements h_w in the standard basis.
    Kl {
        /// Element as a dotted word, e.g. s1.s2 (e for the identity).
        #[arg(long, required_unless_present = "all")]
        w: Option<String>,
        /// Every element of the group.
        #[arg(long, conflicts_with = "w")]
        all: bool,
    },
    /// Double cosets W_I \ W / W_J.
    Cosets {
        #[arg(long = "I", default_value = "")]
        i: String,
        #[arg(long = "J", default_value = "")]
        j: String,
    },
    /// Product M_p *_J M_q of standard basis elements.
    SchurMult {
        #[arg(long = "I", default_value = "")]
        i: String,
        #[arg(long = "J", default_value = "")]
        j: String,
        #[arg(long = "K", default_value = "")]
        k: String,
        /// Any element of the (I, J) coset p.
        #[arg(long)]
        p: String,
        /// Any element of the (J, K) coset q.
        #[arg(long)]
        q: String,
    },
    /// Bott-Samelson character along a nested chain of subsets.
    Char {
        /// Subsets separated by commas, braces grouping labels: "∅,{s1},∅".
        #[arg(long)]
        chain: String,
        /// Rewrite the character in the KL basis.
        #[arg(long)]
        decompose: bool,
    },
    /// The φ basis of R(p).
    Phi {
        #[arg(long = "I", default_value = "")]
        i: String,
        #[arg(long = "J", default_value = "")]
        j: String,
        #[arg(long)]
        p: String,
    },
    /// Dimensions of W_K x W_L invariants of R(p), per even degree.
    Invariants {
        #[arg(long = "I", default_value = "")]
        i: String,
        #[arg(long = "J", default_value = "")]
        j: String,
        #[arg(long)]
        p: String,
        #[arg(long = "K", default_value = "")]
        k: String,
        #[arg(long = "L", default_value = "")]
        l: String,
        /// Largest degree (even).
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Run verification suites; exit 1 on any mismatch.
    Verify {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Degree cap for the invariant-theory suites.
        #[arg(long, default_value_t = 6)]
        cap: u32,
        /// Longest Bott-Samelson chain, in steps.
        #[arg(long, default_value_t = 3)]
        chain_steps: usize,
        /// Random triples for the associativity check.
        #[arg(long, default_value_t = 200)]
        triples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Errors that mean the invocation itself was wrong.
fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<Error>().is_some_and(|e| {
            matches!(
                e,
                Error::InvalidSpec(_)
                    | Error::Parse(_)
                    | Error::UnknownGenerator(_)
                    | Error::NotInCoset { .. }
                    | Error::SubsetPrecondition(_)
                    | Error::DegreeCap { .. }
                    | Error::Unsupported(_)
            )
        }) || c.downcast_ref::<Usage>().is_some()
    })
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.downcast_ref::<CacheMismatch>().is_some()) {
                ExitCode::from(3)
            } else if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn load_system(g: &GroupArgs) -> Result<CoxeterSystem> {
    let spec = match (&g.kind, &g.spec) {
        (Some(name), _) => CoxeterSpec::from_short_name(name)?,
        (None, Some(text)) => {
            let text = if text.trim_start().starts_with('{') {
                text.clone()
            } else {
                std::fs::read_to_string(text).with_context(|| format!("reading spec file {text}"))?
            };
            serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(e.to_string()))?
        }
        (None, None) => return Err(Usage("a group is required: pass --type or --spec".into()).into()),
    };
    Ok(CoxeterSystem::new(spec)?)
}

/// Split a chain such as `∅,{s1,s2},s3` at top-level commas.
fn parse_chain(sys: &CoxeterSystem, text: &str) -> Result<Vec<GeneratorSubset>> {
    let mut items = Vec::new();
    let (mut depth, mut cur) = (0, String::new());
    for ch in text.chars() {
        match ch {
            '{' => {
                depth += 1;
                cur.push(ch);
            }
            '}' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => items.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    items.push(cur);
    if depth != 0 {
        bail!(Usage(format!("unbalanced braces in chain {text:?}")));
    }
    Ok(items.iter().map(|s| sys.parse_subset(s)).collect::<schur_core::Result<_>>()?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().ok();
    }
    let sys = load_system(&cli.group)?;
    let alg = SchurAlgebroid::new(HeckeAlgebra::new(sys.clone()));
    let cache = cli.cache.as_ref().map(|p| KlCache::new(p, &sys));
    if let Some(c) = &cache {
        c.load(alg.hecke())?;
    }
    let limits = Limits::from_env()?;
    let table = matches!(cli.format, Format::Table);
    let mut out = String::new();
    let mut code = ExitCode::SUCCESS;
    let sub = |t: &str| sys.parse_subset(t);

    match &cli.command {
        Command::Kl { w, all } => {
            let h = alg.hecke();
            let ws = if *all { sys.all_elements().to_vec() } else { vec![sys.parse_element(w.as_deref().unwrap_or("e"))?] };
            if table {
                for w in &ws {
                    let text = h.format(&h.kl_element(w));
                    if *all {
                        out += &format!("{}\t{}\n", sys.word_string(w), text);
                    } else {
                        out += &format!("{text}\n");
                    }
                }
            } else {
                let rows: Vec<Value> =
                    ws.iter().map(|w| json!({"w": sys.word_string(w), "h": h.to_json(&h.kl_element(w))})).collect();
                out = json_text(&Value::Array(rows));
            }
        }
        Command::Cosets { i, j } => {
            let part = alg.partition(sub(i)?, sub(j)?);
            if table {
                for p in &part.cosets {
                    out += &format!(
                        "{}\t{}\t{}\t{}\n",
                        sys.word_string(p.p_minus()),
                        sys.word_string(p.p_plus()),
                        p.size(),
                        sys.subset_string(p.kilmoyer())
                    );
                }
            } else {
                let rows: Vec<Value> = part
                    .cosets
                    .iter()
                    .map(|p| {
                        let mut v = p.to_json();
                        v["kilmoyer"] = json!(sys.subset_labels(p.kilmoyer()));
                        v["poincare"] = p.poincare().to_json();
                        v
                    })
                    .collect();
                out = json_text(&Value::Array(rows));
            }
        }
        Command::SchurMult { i, j, k, p, q } => {
            let (i, j, k) = (sub(i)?, sub(j)?, sub(k)?);
            let f = alg.standard_elt(&alg.coset(&sys.parse_element(p)?, i, j));
            let g = alg.standard_elt(&alg.coset(&sys.parse_element(q)?, j, k));
            let r = alg.star(&f, &g)?;
            out = if table { format!("{}\n", r.format(&sys)) } else { json_text(&r.to_json(&sys)) };
        }
        Command::Char { chain, decompose } => {
            let chain = parse_chain(&sys, chain)?;
            let f = alg.bott_samelson_char(&chain)?;
            if *decompose {
                let rows = alg.decompose_kl(&f);
                if table {
                    for r in &rows {
                        out += &format!("{}\t{}\n", sys.word_string(r.coset.p_minus()), r.coeff);
                    }
                } else {
                    out = json_text(&decomposition_json(&sys, &rows));
                }
            } else {
                out = if table { format!("{}\n", f.format(&sys)) } else { json_text(&f.to_json(&sys)) };
            }
        }
        Command::Phi { i, j, p } => {
            let dem = Demazure::new(&sys)?.with_limits(limits);
            let p = alg.coset(&sys.parse_element(p)?, sub(i)?, sub(j)?);
            let basis = dem.phi_basis(&p)?;
            dem.check_phi(&p, &basis)?;
            if table {
                for (x, phi) in &basis {
                    let comps: Vec<String> =
                        phi.components().map(|(y, f)| format!("{}: {}", sys.word_string(y), f)).collect();
                    out += &format!("{}\t{}\t{}\n", sys.word_string(x), phi.graded_degree().unwrap_or(0), comps.join("; "));
                }
            } else {
                let rows: Vec<Value> = basis
                    .iter()
                    .map(|(x, phi)| json!({"x": sys.word_string(x), "degree": phi.graded_degree(), "phi": phi.to_json(&sys)}))
                    .collect();
                out = json_text(&json!({"p": p.to_json(), "basis": rows}));
            }
        }
        Command::Invariants { i, j, p, k, l, cap } => {
            let dem = Demazure::new(&sys)?.with_limits(limits);
            let p = alg.coset(&sys.parse_element(p)?, sub(i)?, sub(j)?);
            let dims = dem.invariant_dims(&p, sub(k)?, sub(l)?, *cap)?;
            if table {
                for (d, n) in dims.iter().enumerate() {
                    out += &format!("{}\t{}\n", 2 * d, n);
                }
            } else {
                let degrees: Vec<u32> = (0..=*cap).step_by(2).collect();
                out = json_text(&json!({"p": p.to_json(), "degrees": degrees, "dims": dims}));
            }
        }
        Command::Verify { suite, cap, chain_steps, triples, seed } => {
            let cfg = SuiteConfig { random_triples: *triples, seed: *seed, chain_steps: *chain_steps, degree_cap: *cap, limits };
            let reports = run_suite(&alg, suite, &cfg)?;
            if reports.iter().any(|r| !r.ok()) {
                code = ExitCode::from(1);
            }
            if table {
                for r in &reports {
                    let d = r.detail();
                    out += &format!(
                        "{}\t{}\t{}/{}\n",
                        if r.ok() { "ok" } else { "mismatch" },
                        r.claim(),
                        d["checked"].as_u64().unwrap_or(0) - d["failed"].as_u64().unwrap_or(0),
                        d["checked"].as_u64().unwrap_or(0)
                    );
                }
            } else {
                out = json_text(&Value::Array(reports.iter().map(|r| r.to_json()).collect()));
            }
        }
    }

    std::io::stdout().lock().write_all(out.as_bytes())?;
    if let Some(c) = &cache {
        c.save(alg.hecke())?;
    }
    if cli.stats {
        eprintln!("kl_computations: {}", alg.hecke().kl_table().computations());
    }
    Ok(code)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}
