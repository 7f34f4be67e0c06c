//! Command-line front end. Every subcommand prints one JSON report on stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::parse_gen_spec;
use crate::haxell::{find_it, find_it_unguaranteed};
use crate::instance::{irreducible_components, is_disjoint_kdd_union, Instance};
use crate::markov::{run_chains, tv_distance, RNG_NAME};
use crate::reconfig::graph::{build_reconfig_graph, default_cap};
use crate::reconfig::{constructive_reconfigure, Outcome};
use crate::transversal::Transversal;
use crate::verify::PathValidator;

#[derive(Parser, Debug)]
#[command(
    name = "itrans",
    version,
    about = "Independent transversals: find, reconfigure, sample"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find an independent transversal by augmenting-sequence descent.
    Solve {
        /// Instance file or generator spec (`gen:...`).
        instance: String,
        /// Include the descent trace.
        #[arg(long)]
        trace: bool,
    },
    /// Enumerate ITs and analyse the reconfigurability graph. Without flags,
    /// every analysis runs.
    Analyze {
        #[arg(required = true, num_args = 1..)]
        instances: Vec<String>,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        connectivity: bool,
        #[arg(long)]
        diameter: bool,
        #[arg(long)]
        kdd_check: bool,
    },
    /// Reconfigure one IT into another, or report why that is impossible.
    Reconfigure {
        instance: String,
        /// Source IT as comma-separated vertices.
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<usize>,
        /// Target IT as comma-separated vertices.
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<usize>,
    },
    /// Run the single-site chain and report the empirical distribution.
    Mcmc {
        instance: String,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        chains: u64,
        /// Start configuration (default: the descent's IT).
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<usize>>,
    },
    /// Generate a corpus and check the reconfiguration properties on it.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        max_delta: usize,
        #[arg(long, default_value_t = 4)]
        max_blocks: usize,
        /// Compare IT counts with `2Δ^|U|`.
        #[arg(long)]
        conjecture: bool,
        /// Also write a per-instance CSV summary.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Loads an instance from a JSON file or a `gen:` spec.
pub fn load_instance(source: &str) -> Result<Instance> {
    if source.starts_with("gen:") {
        return parse_gen_spec(source);
    }
    Instance::from_json(&std::fs::read_to_string(source)?)
}

fn report(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn solve(inst: &Instance, trace: bool) -> Result<Value> {
    let guaranteed = inst.is_haxell_thick();
    let run = if guaranteed {
        find_it(inst)?
    } else {
        find_it_unguaranteed(inst)?
    };
    let mut v = json!({
        "transversal": run.transversal,
        "guaranteed": guaranteed,
        "steps": run.trace.len(),
    });
    if trace {
        v["trace"] = serde_json::to_value(&run.trace)?;
    }
    Ok(v)
}

fn analyze(
    inst: &Instance,
    enumerate: bool,
    connectivity: bool,
    diameter: bool,
    kdd: bool,
) -> Result<Value> {
    let all = !(enumerate || connectivity || diameter || kdd);
    let mut v = json!({
        "n": inst.n(),
        "blocks": inst.num_blocks(),
        "delta": inst.delta(),
        "thickness": inst.thickness(),
        "haxell_thick": inst.is_haxell_thick(),
        "irreducible": inst.is_irreducible(),
    });
    if all || kdd {
        v["kdd_union"] = json!(is_disjoint_kdd_union(inst));
    }
    if all || enumerate || connectivity || diameter {
        let rg = build_reconfig_graph(inst)?;
        if all || enumerate {
            v["it_count"] = json!(rg.len());
            v["its"] = serde_json::to_value(&rg.its)?;
        }
        if all || connectivity {
            v["components"] = json!(rg.components().len());
            v["component_sizes"] = json!(rg.components().iter().map(Vec::len).collect::<Vec<_>>());
        }
        if all || diameter {
            let cap = usize::try_from(default_cap())
                .unwrap_or(usize::MAX)
                .min(20_000);
            let d = rg.diameters(cap)?;
            v["diameters"] = json!(d);
            if d.len() == 1 {
                v["diameter"] = json!(d[0]);
            }
        }
    }
    Ok(v)
}

fn reconfigure(inst: &Instance, from: &[usize], to: &[usize]) -> Result<Value> {
    let s = Transversal::from_vertices(inst, from)?;
    let t = Transversal::from_vertices(inst, to)?;
    let run = constructive_reconfigure(inst, &s, &t)?;
    if let Outcome::Path { path } = &run.outcome {
        let raw: Vec<Vec<usize>> = path.iter().map(Transversal::vertices).collect();
        PathValidator::new(&inst.to_schema())
            .check_path(&raw, &s.vertices(), &t.vertices())
            .map_err(|e| Error::invariant(format!("emitted path failed validation: {e}")))?;
    }
    let mut v = serde_json::to_value(&run)?;
    if let Some(p) = run.outcome.path() {
        v["length"] = json!(p.len() - 1);
    }
    if run.outcome.path().is_none() {
        // the obstruction concerns this pair; say whether other pairs connect
        if let Ok(rg) = build_reconfig_graph(inst) {
            v["reconfigurability_components"] = json!(rg.components().len());
        }
    }
    Ok(v)
}

fn mcmc(
    inst: &Instance,
    steps: u64,
    seed: u64,
    chains: u64,
    start: Option<&[usize]>,
) -> Result<Value> {
    let start = start
        .map(|s| Transversal::from_vertices(inst, s))
        .transpose()?;
    let runs = run_chains(inst, start.as_ref(), steps, seed, chains)?;
    let start = runs.first().map(|r| r.metadata.start.clone());
    // reference: uniform on the start's component, when enumeration is affordable
    let reference = start.as_ref().and_then(|s| {
        let rg = build_reconfig_graph(inst).ok()?;
        let ids = rg.component_ids();
        let id = ids[rg.index_of(s)?];
        let members: Vec<Vec<usize>> = (0..rg.len())
            .filter(|&i| ids[i] == id)
            .map(|i| rg.its[i].vertices())
            .collect();
        let p = 1.0 / members.len() as f64;
        Some(
            members
                .into_iter()
                .map(|k| (k, p))
                .collect::<std::collections::BTreeMap<_, _>>(),
        )
    });
    let chains_out: Vec<Value> = runs
        .iter()
        .map(|r| {
            let dist = r.distribution();
            let mut c = json!({
                "metadata": r.metadata,
                "moves": r.moves,
                "distribution": dist.iter().map(|(k, p)| json!({"it": k, "p": p})).collect::<Vec<_>>(),
            });
            if let Some(reference) = &reference {
                c["tv_to_uniform_on_component"] = json!(tv_distance(&dist, reference));
            }
            c
        })
        .collect();
    Ok(json!({ "rng": RNG_NAME, "chains": chains_out }))
}

#[derive(Debug, Serialize)]
struct CorpusRow {
    spec: String,
    n: usize,
    blocks: usize,
    delta: usize,
    thickness: usize,
    it_count: usize,
    irreducible_components: usize,
    kdd_union: bool,
    /// Every irreducible `2Δ`-thick component that is not a `K_{Δ,Δ}` union has a
    /// connected reconfigurability graph.
    connectivity_ok: bool,
    /// With thickness `≥ 2Δ+1`, every irreducible component is connected.
    thick_plus_ok: bool,
    conjecture_bound: Option<u128>,
    below_bound: bool,
}

fn corpus_row(spec: String, inst: &Instance) -> Result<CorpusRow> {
    let rg = build_reconfig_graph(inst)?;
    let comps = irreducible_components(inst);
    let mut connectivity_ok = true;
    let mut thick_plus_ok = true;
    for c in &comps {
        let ci = &c.instance;
        let connected = build_reconfig_graph(ci)?.is_connected();
        if ci.is_haxell_thick() && !is_disjoint_kdd_union(ci) && !connected {
            connectivity_ok = false;
        }
        if ci.thickness() > 2 * ci.delta() && !connected {
            thick_plus_ok = false;
        }
    }
    let d = inst.delta();
    let bound =
        (inst.is_haxell_thick() && d > 0).then(|| 2 * (d as u128).pow(inst.num_blocks() as u32));
    Ok(CorpusRow {
        spec,
        n: inst.n(),
        blocks: inst.num_blocks(),
        delta: d,
        thickness: inst.thickness(),
        it_count: rg.len(),
        irreducible_components: comps.len(),
        kdd_union: is_disjoint_kdd_union(inst),
        connectivity_ok,
        thick_plus_ok,
        below_bound: bound.is_some_and(|b| (rg.len() as u128) < b),
        conjecture_bound: bound,
    })
}

/// Parameters of the `i`-th corpus instance, as a generator spec.
pub fn corpus_spec(seed: u64, i: usize, max_delta: usize, max_blocks: usize) -> String {
    let delta = 1 + i % max_delta.max(1);
    let blocks = 1 + (i / max_delta.max(1)) % max_blocks.max(1);
    let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
    match i % 3 {
        0 => format!("gen:random:{delta}:{blocks}:{}:seed{s}", 2 * delta),
        1 => format!("gen:planted:{delta}:{blocks}:{}:seed{s}", 1 + i % blocks),
        _ => format!("gen:random:{delta}:{blocks}:{}:seed{s}", 2 * delta + 1),
    }
}

fn corpus(
    seed: u64,
    count: usize,
    max_delta: usize,
    max_blocks: usize,
    conjecture: bool,
    csv_path: Option<&PathBuf>,
) -> Result<Value> {
    let rows: Vec<CorpusRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let spec = corpus_spec(seed, i, max_delta, max_blocks);
            let inst = parse_gen_spec(&spec)?;
            corpus_row(spec, &inst)
        })
        .collect::<Result<_>>()?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
        for r in &rows {
            w.serialize(r).map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
    }
    let connectivity_failures: Vec<&str> = rows
        .iter()
        .filter(|r| !r.connectivity_ok)
        .map(|r| r.spec.as_str())
        .collect();
    let thick_failures: Vec<&str> = rows
        .iter()
        .filter(|r| !r.thick_plus_ok)
        .map(|r| r.spec.as_str())
        .collect();
    let mut v = json!({
        "seed": seed,
        "count": count,
        "instances": rows.iter().map(|r| &r.spec).collect::<Vec<_>>(),
        "connectivity": { "pass": connectivity_failures.is_empty(), "failures": connectivity_failures },
        "thick_plus_one": { "pass": thick_failures.is_empty(), "failures": thick_failures },
    });
    if conjecture {
        let scanned: Vec<&CorpusRow> = rows
            .iter()
            .filter(|r| r.conjecture_bound.is_some())
            .collect();
        let flags: Vec<Value> = scanned
            .iter()
            .filter(|r| r.below_bound)
            .map(|r| json!({"spec": r.spec, "it_count": r.it_count, "bound": r.conjecture_bound}))
            .collect();
        let min_ratio = scanned
            .iter()
            .map(|r| r.it_count as f64 / r.conjecture_bound.unwrap() as f64)
            .fold(f64::INFINITY, f64::min);
        v["conjecture"] = json!({
            "scanned": scanned.len(),
            "min_it_count": scanned.iter().map(|r| r.it_count).min(),
            "min_ratio_to_bound": if scanned.is_empty() { Value::Null } else { json!(min_ratio) },
            "flags": flags,
        });
    }
    Ok(v)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Solve { instance, trace } => {
            report(out, &solve(&load_instance(&instance)?, trace)?)
        }
        Command::Analyze {
            instances,
            enumerate,
            connectivity,
            diameter,
            kdd_check,
        } => {
            let mut reports = Vec::new();
            for src in &instances {
                let mut v = analyze(
                    &load_instance(src)?,
                    enumerate,
                    connectivity,
                    diameter,
                    kdd_check,
                )?;
                v["source"] = json!(src);
                reports.push(v);
            }
            let value = if reports.len() == 1 {
                reports.pop().unwrap()
            } else {
                Value::Array(reports)
            };
            report(out, &value)
        }
        Command::Reconfigure { instance, from, to } => {
            report(out, &reconfigure(&load_instance(&instance)?, &from, &to)?)
        }
        Command::Mcmc {
            instance,
            steps,
            seed,
            chains,
            start,
        } => report(
            out,
            &mcmc(
                &load_instance(&instance)?,
                steps,
                seed,
                chains,
                start.as_deref(),
            )?,
        ),
        Command::Corpus {
            seed,
            count,
            max_delta,
            max_blocks,
            conjecture,
            csv,
        } => report(
            out,
            &corpus(seed, count, max_delta, max_blocks, conjecture, csv.as_ref())?,
        ),
    }
}

/// Parses `args`, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analyze_k22() {
        let (code, out, _) = run_str(&["itrans", "analyze", "gen:kdd:2:1:trivial"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["it_count"], 4);
        assert_eq!(v["components"], 2);
        assert_eq!(v["kdd_union"], true);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["itrans", "analyze"]).0, 1);
        assert_eq!(run_str(&["itrans", "solve", "/nonexistent.json"]).0, 1);
        assert_eq!(run_str(&["itrans", "solve", "gen:bogus"]).0, 1);
        assert_eq!(run_str(&["itrans", "--help"]).0, 0);
    }

    #[test]
    fn reconfigure_precondition() {
        // two separate edges: reducible
        let (code, _, err) = run_str(&[
            "itrans",
            "reconfigure",
            "gen:kdd:1:2:trivial",
            "--from",
            "0,2",
            "--to",
            "1,3",
        ]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn corpus_is_deterministic() {
        let args = [
            "itrans",
            "corpus",
            "--count",
            "12",
            "--seed",
            "5",
            "--conjecture",
        ];
        let (c1, o1, _) = run_str(&args);
        let (c2, o2, _) = run_str(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(o1, o2);
    }
}
