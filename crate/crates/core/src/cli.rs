//! The `arbortile` command line. Every subcommand prints one JSON document
//! carrying the tool version and the run configuration.
//!
//! Exit codes: 0 on success, 1 when the answer is a verified negative (no
//! factor, no connector, ...), 2 on errors and usage problems.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::absorb;
use crate::config::Caps;
use crate::embed::{embed_q_with, ClusterSystem};
use crate::error::{Error, Result};
use crate::extremal::{self, Family};
use crate::factor::{has_factor_with, max_tiling_with};
use crate::graph::io::{emit_edge_list, read_graph};
use crate::graph::{Graph, VertexSet};
use crate::invariants::{f_value, invariant_report_with};
use crate::qgraph::{build_q, h_factor_in_q, plan_q_with, verify_q_with};
use crate::rational::{self, Rational};
use crate::reduced::{
    almost_tiling_pipeline_with, build_reduced, check_degree_bound, convert_4_to_2, convert_4_to_3,
    fractional_tiling, Multigraph2, Thresholds,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CAPS_ENV: &str = "ARBORTILE_CAPS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub caps: BTreeMap<String, usize>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Parser, Debug)]
#[command(name = "arbortile", version, about = "Vertex arboricity invariants and H-factor tooling")]
struct Cli {
    /// Seed for randomised generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Budget overrides as `key=value,...`, applied after the environment.
    #[arg(long, global = true)]
    caps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, default_value = "1/10")]
    beta: String,
    #[arg(long, default_value = "1/100")]
    epsilon: String,
    #[arg(long, default_value = "1/10")]
    mu: String,
    #[arg(long, default_value = "1/10")]
    eta: String,
}

impl ThresholdArgs {
    fn parse(&self) -> Result<Thresholds> {
        Thresholds::new(
            rational::parse(&self.beta)?,
            rational::parse(&self.epsilon)?,
            rational::parse(&self.mu)?,
            rational::parse(&self.eta)?,
        )
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arboricity, f, hcf and critical arboricity of a pattern.
    Invariants { graph: PathBuf },
    /// Decide whether the host has an H-factor.
    Factor {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        /// Report a largest tiling instead of deciding a factor.
        #[arg(long)]
        max_tiling: bool,
    },
    /// Build Q(a, b) with its H-factor certificate.
    Qbuild {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Also write Q as an edge list.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Embed Q(a, b) into a host along a cluster system.
    EmbedQ {
        #[arg(long)]
        host: PathBuf,
        /// JSON array of vertex arrays.
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value = "1/10")]
        beta: String,
    },
    /// Reduced multigraph of a cluster system.
    Reduce {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        /// Check the minimum-degree bound for this pattern's f.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[command(flatten)]
        th: ThresholdArgs,
    },
    /// Optimal fractional K_r tiling of a multigraph file.
    Fractile {
        #[arg(long)]
        multigraph: PathBuf,
        #[arg(long)]
        r: usize,
        /// Rewrite a K_4 optimum as a K_3 or K_2 tiling.
        #[arg(long)]
        convert: Option<usize>,
    },
    /// Almost-perfect H-tiling through the reduced multigraph.
    Pipeline {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        th: ThresholdArgs,
    },
    /// Extremal graph without an H-factor, with its certificate.
    Extremal {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        /// Independence ratio target of the generated blocks.
        #[arg(long, default_value = "1/4")]
        alpha: String,
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Connectors, absorbers, robust index vectors and transferrals.
    Absorb {
        #[arg(long)]
        host: Option<PathBuf>,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[command(subcommand)]
        task: AbsorbTask,
    },
}

#[derive(Subcommand, Debug)]
enum AbsorbTask {
    Connector {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Comma-separated vertices to avoid.
        #[arg(long, default_value = "")]
        avoid: String,
    },
    Absorber {
        /// Comma-separated `h`-set to absorb.
        #[arg(long)]
        s: String,
        /// Comma-separated candidate absorber.
        #[arg(long)]
        a: String,
        #[arg(long)]
        t: usize,
    },
    Robust {
        /// JSON array of vertex arrays.
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        mu: String,
    },
    Transferral {
        /// Comma-separated index vector; repeat for each member.
        #[arg(long = "vector", required = true)]
        vectors: Vec<String>,
    },
}

/// Result of one subcommand: the JSON body and whether it is a negative answer.
struct Outcome {
    body: Value,
    negative: bool,
}

impl Outcome {
    fn ok(body: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            body: to_value(body)?,
            negative: false,
        })
    }

    fn negative(body: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            body: to_value(body)?,
            negative: true,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Invalid(format!("serialisation: {e}")))
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Invalid(format!("{s:?} is not a vertex index"))))
        .collect()
}

fn read_sets(path: &Path) -> Result<Vec<VertexSet>> {
    let text = std::fs::read_to_string(path)?;
    let raw: Vec<Vec<usize>> =
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    Ok(raw.into_iter().map(VertexSet::from).collect())
}

fn need(path: &Option<PathBuf>, flag: &str) -> Result<Graph> {
    match path {
        Some(p) => read_graph(p),
        None => Err(Error::Invalid(format!("--{flag} is required for this task"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn execute(cmd: &Command, caps: &Caps, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Invariants { graph } => Outcome::ok(invariant_report_with(&read_graph(graph)?, caps)?),
        Command::Factor {
            host,
            pattern,
            max_tiling,
        } => {
            let (g, h) = (read_graph(host)?, read_graph(pattern)?);
            if *max_tiling {
                let cert = max_tiling_with(&g, &h, caps)?;
                return Outcome::ok(json!({ "copies": cert.len(), "certificate": cert }));
            }
            match has_factor_with(&g, &h, caps) {
                Ok(Some(cert)) => Outcome::ok(json!({ "factor": true, "certificate": cert })),
                Ok(None) => Outcome::negative(json!({ "factor": false, "reason": "exhaustive search" })),
                Err(e @ Error::Divisibility { .. }) => {
                    Outcome::negative(json!({ "factor": false, "reason": e.to_string() }))
                }
                Err(e) => Err(e),
            }
        }
        Command::Qbuild {
            pattern,
            a,
            b,
            graph_out,
        } => {
            let h = read_graph(pattern)?;
            let spec = plan_q_with(&h, *a, *b, caps)?;
            let q = build_q(&spec);
            let certificate = h_factor_in_q(&h, &spec)?;
            let verification = verify_q_with(&h, &spec, caps);
            let edge_list = emit_edge_list(&q.graph);
            if let Some(p) = graph_out {
                write_file(p, &edge_list)?;
            }
            Outcome::ok(json!({
                "spec": spec,
                "clusters": q.clusters,
                "edge_list": edge_list,
                "certificate": certificate,
                "verification": verification,
            }))
        }
        Command::EmbedQ {
            host,
            clusters,
            pattern,
            a,
            b,
            beta,
        } => {
            let cs = ClusterSystem::new(read_graph(host)?, read_sets(clusters)?)?;
            let h = read_graph(pattern)?;
            let spec = plan_q_with(&h, *a, *b, caps)?;
            match embed_q_with(&cs, &spec, &rational::parse(beta)?, caps, None) {
                Ok(e) => Outcome::ok(e),
                Err(Error::EmbedFail {
                    level,
                    budget_exhausted: false,
                    detail,
                }) => Outcome::negative(json!({ "embedded": false, "level": level, "detail": detail })),
                Err(e) => Err(e),
            }
        }
        Command::Reduce {
            host,
            clusters,
            pattern,
            th,
        } => {
            let cs = ClusterSystem::new(read_graph(host)?, read_sets(clusters)?)?;
            let th = th.parse()?;
            let r = build_reduced(&cs, &th)?;
            let degree = match pattern {
                Some(p) => {
                    let f = f_value(&read_graph(p)?)?;
                    json!({ "f": f, "bound_holds": check_degree_bound(&r, f, &th.mu) })
                }
                None => Value::Null,
            };
            Outcome::ok(json!({
                "thresholds": th,
                "multigraph": r,
                "min_degree": r.min_degree(),
                "text": r.emit(),
                "degree_bound": degree,
            }))
        }
        Command::Fractile { multigraph, r, convert } => {
            let m = Multigraph2::parse(&std::fs::read_to_string(multigraph)?)?;
            let lp = fractional_tiling(&m, *r)?;
            let converted = match convert {
                None => Value::Null,
                Some(3) => to_value(convert_4_to_3(&lp.tiling)?)?,
                Some(2) => to_value(convert_4_to_2(&lp.tiling))?,
                Some(x) => return Err(Error::Invalid(format!("--convert {x}: expected 2 or 3"))),
            };
            Outcome::ok(json!({ "lp": lp, "converted": converted }))
        }
        Command::Pipeline {
            host,
            clusters,
            pattern,
            th,
        } => {
            let cs = ClusterSystem::new(read_graph(host)?, read_sets(clusters)?)?;
            let report = almost_tiling_pipeline_with(&cs, &read_graph(pattern)?, &th.parse()?, caps);
            if !report.verified {
                return Err(Error::ConstructionBug(format!(
                    "pipeline certificate rejected: {:?}",
                    report.diagnostics
                )));
            }
            Outcome::ok(report)
        }
        Command::Extremal {
            family,
            pattern,
            n,
            alpha,
            graph_out,
        } => {
            let h = read_graph(pattern)?;
            let alpha = rational::parse(alpha)?;
            let inst = match family {
                Family::G0 => extremal::construct_g0_with(*n, &h, caps)?,
                Family::TwoPart => extremal::construct_two_part_with(*n, &h, &alpha, seed, caps)?,
                Family::MultiPart => extremal::construct_multi_part_with(*n, &h, &alpha, seed, caps)?,
                Family::SpaceBarrier => extremal::construct_space_barrier_with(*n, &h, &alpha, seed, caps)?,
            };
            let certificate = extremal::certify_no_factor_with(&inst, &h, caps)?;
            let claims = extremal::verify_claims_with(&inst, &h, &alpha, caps)?;
            let edge_list = emit_edge_list(&inst.graph);
            if let Some(p) = graph_out {
                write_file(p, &edge_list)?;
            }
            Outcome::ok(json!({
                "meta": inst.meta,
                "blocks": inst.blocks,
                "block_girths": extremal::block_girths(&inst),
                "certificate": certificate,
                "claims": claims,
                "edge_list": edge_list,
            }))
        }
        Command::Absorb { host, pattern, task } => absorb_task(host, pattern, task, caps),
    }
}

fn absorb_task(host: &Option<PathBuf>, pattern: &Option<PathBuf>, task: &AbsorbTask, caps: &Caps) -> Result<Outcome> {
    match task {
        AbsorbTask::Connector { u, v, t, avoid } => {
            let (g, h) = (need(host, "host")?, need(pattern, "pattern")?);
            let avoid: VertexSet = parse_list(avoid)?.into();
            let search = absorb::find_connector_with(&g, &h, *u, *v, *t, &avoid, caps);
            match (&search.connector, search.exhausted) {
                (Some(_), _) => Outcome::ok(search),
                (None, true) => Outcome::negative(search),
                (None, false) => Err(Error::cap("connector candidates", caps.connector_candidates, search.candidates)),
            }
        }
        AbsorbTask::Absorber { s, a, t } => {
            let (g, h) = (need(host, "host")?, need(pattern, "pattern")?);
            let (s, a): (VertexSet, VertexSet) = (parse_list(s)?.into(), parse_list(a)?.into());
            let ok = absorb::verify_absorber_with(&g, &h, &s, &a, *t, caps);
            let body = json!({ "s": s, "a": a, "t": t, "absorber": ok });
            if ok {
                Outcome::ok(body)
            } else {
                Outcome::negative(body)
            }
        }
        AbsorbTask::Robust { partition, mu } => {
            let (g, h) = (need(host, "host")?, need(pattern, "pattern")?);
            let blocks = read_sets(partition)?;
            let mu: Rational = rational::parse(mu)?;
            let found = absorb::robust_vectors_with(&g, &h, &blocks, &mu, caps)?;
            Outcome::ok(json!({ "mu": rational::to_pq(&mu), "robust": found }))
        }
        AbsorbTask::Transferral { vectors } => {
            let iset = vectors
                .iter()
                .map(|v| parse_list(v).map(absorb::IndexVector))
                .collect::<Result<Vec<_>>>()?;
            match absorb::transferral(&iset) {
                Some(tr) => {
                    let mut target = vec![0i64; tr.s.0.len()];
                    target[tr.i] = 1;
                    target[tr.j] = -1;
                    let in_lattice = absorb::lattice_member(&absorb::differences(&iset), &target);
                    Outcome::ok(json!({ "transferral": tr, "in_difference_lattice": in_lattice }))
                }
                None => Outcome::negative(json!({ "transferral": null })),
            }
        }
    }
}

fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            match v {
                Value::Object(inner) if k == "result" => {
                    for (ik, iv) in inner {
                        out.push_str(&format!("{ik}: {iv}\n"));
                    }
                }
                _ => out.push_str(&format!("{k}: {v}\n")),
            }
        }
    }
    out
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut caps = Caps::default();
    let overrides = std::env::var(CAPS_ENV).ok().into_iter().chain(cli.caps.clone());
    for text in overrides {
        if let Err(e) = caps.apply_overrides(&text) {
            let _ = writeln!(err, "arbortile: {e}");
            return 2;
        }
    }
    let config = RunConfig {
        seed: cli.seed,
        caps: caps.to_map(),
        output: cli.output.clone(),
        format: cli.format,
    };
    let (code, body) = match execute(&cli.command, &caps, cli.seed) {
        Ok(o) => (if o.negative { 1 } else { 0 }, json!({ "status": "ok", "result": o.body })),
        Err(e) => {
            let _ = writeln!(err, "arbortile: {e}");
            (2, json!({ "status": "error", "error": e.to_string() }))
        }
    };
    let mut doc = json!({
        "tool": "arbortile",
        "version": VERSION,
        "config": config,
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let text = match cli.format {
        OutputFormat::Json => serde_json::to_string_pretty(&doc).expect("JSON values serialise") + "\n",
        OutputFormat::Text => render_text(&doc),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(Error::from),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "arbortile: {e}");
        return 2;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("arbortile").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = call(&["factor", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        assert_eq!(call(&[]).0, 2);
    }

    #[test]
    fn transferral_needs_no_graphs() {
        let (code, out, _) = call(&["absorb", "transferral", "--vector", "2,1", "--vector", "1,2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["transferral"]["i"], 0);
        assert_eq!(v["result"]["in_difference_lattice"], true);
        assert_eq!(v["version"], VERSION);
        let (code, _, _) = call(&["absorb", "transferral", "--vector", "3,0", "--vector", "0,3"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn missing_file_is_an_error() {
        let (code, out, _) = call(&["invariants", "/nonexistent/graph.el"]);
        assert_eq!(code, 2);
        assert!(out.contains("\"status\": \"error\""));
    }
}
