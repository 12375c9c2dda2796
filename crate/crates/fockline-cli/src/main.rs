mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fockline::adaptive::{bleed_two_photons, optimize_schedule, optimize_schedules, BleedSchedule};
use fockline::resources::{optimize_primate_transmissivity, table2, LiveProbabilities};
use fockline::schemes::{run_scheme, SCHEME_IDS};
use fockline::Error;
use serde_json::{json, Value};

use output::{monte_carlo, Emitter, Format};

#[derive(Parser)]
#[command(name = "fockline", version, about = "Exact linear-optics scheme reports")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Defaults to CSV for `figure5` and JSON elsewhere.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Adds a sampled-frequency overlay drawn with this seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Re-evaluates reported checks at this tolerance; exit codes keep the
    /// built-in tolerances.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Heralded scheme reports.
    Scheme {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Temporal bleeding on |1111>.
    Bleed {
        #[arg(long)]
        stages: usize,
        /// `equal`, `optimal`, or a file of reflectivities.
        #[arg(long, default_value = "equal")]
        schedule: String,
    },
    /// Bell probability against stage count for both schedules.
    Figure5 {
        #[arg(long, default_value_t = 20)]
        max_stages: usize,
    },
    Resources {
        #[command(subcommand)]
        table: ResourceTable,
    },
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
    },
}

#[derive(Subcommand)]
enum SchemeAction {
    Run {
        id: String,
        /// `key=value`, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
    },
    List,
}

#[derive(Subcommand)]
enum ResourceTable {
    /// Photon cost of a 4-GHZ state for each multiplexed route.
    Table2,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    All,
}

fn parse_param(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or_else(|| format!("expected key=value, got {s}"))
}

const MONTE_CARLO_SHOTS: usize = 10_000;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let unknown = e.downcast_ref::<Error>().is_some_and(|e| matches!(e, Error::UnknownScheme(_)));
            ExitCode::from(if unknown { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let em = Emitter::new(cli.format.unwrap_or(Format::Json), cli.out.clone());
    match &cli.command {
        Command::Scheme { action: SchemeAction::List } => {
            em.emit(&json!({ "schema_version": output::SCHEMA_VERSION, "schemes": SCHEME_IDS }), || {
                Ok((vec!["id".into()], SCHEME_IDS.iter().map(|s| vec![s.to_string()]).collect()))
            })?;
        }
        Command::Scheme { action: SchemeAction::Run { id, params } } => {
            let params: BTreeMap<String, String> = params.iter().cloned().collect();
            let report = run_scheme(id, &params)?;
            let mut doc = output::document("scheme", serde_json::to_value(&report)?);
            doc["parameters"] = json!(params);
            if let Some(t) = cli.tolerance {
                output::override_tolerance(&mut doc, t);
            }
            if let Some(seed) = cli.seed {
                let probs: Vec<(String, f64)> =
                    report.outcomes.iter().map(|o| (o.pattern.clone(), o.probability)).collect();
                doc["monte_carlo"] = monte_carlo(&probs, seed, MONTE_CARLO_SHOTS);
            }
            em.emit(&doc, || {
                let header = ["pattern", "probability", "class", "fidelity", "success", "kind"];
                let rows = report
                    .outcomes
                    .iter()
                    .map(|o| {
                        vec![
                            o.pattern.clone(),
                            output::num(o.probability),
                            o.class.name().to_string(),
                            output::num(o.fidelity),
                            o.success.to_string(),
                            o.kind.clone().unwrap_or_default(),
                        ]
                    })
                    .collect();
                Ok((header.map(String::from).to_vec(), rows))
            })?;
        }
        Command::Bleed { stages, schedule } => {
            let sch = match schedule.as_str() {
                "equal" => BleedSchedule::equal_spread(*stages)?,
                "optimal" => optimize_schedule(*stages)?.schedule,
                path => read_schedule(path, *stages)?,
            };
            let out = bleed_two_photons(&sch)?;
            let mut doc = output::document("bleed", serde_json::to_value(&out)?);
            doc["schedule"] = json!(sch.reflectivities());
            if let Some(seed) = cli.seed {
                let probs: Vec<(String, f64)> = out.traces.iter().map(|t| (t.key(), t.probability)).collect();
                doc["monte_carlo"] = monte_carlo(&probs, seed, MONTE_CARLO_SHOTS);
            }
            em.emit(&doc, || {
                let header = ["trace", "probability", "status", "detected", "class"];
                let rows = out
                    .traces
                    .iter()
                    .map(|t| {
                        vec![
                            t.key(),
                            output::num(t.probability),
                            serde_json::to_value(t.status).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default(),
                            t.detected.to_string(),
                            t.class.map(|c| c.name().to_string()).unwrap_or_default(),
                        ]
                    })
                    .collect();
                Ok((header.map(String::from).to_vec(), rows))
            })?;
        }
        Command::Figure5 { max_stages } => {
            let em = Emitter::new(cli.format.unwrap_or(Format::Csv), cli.out.clone());
            let opt = optimize_schedules(*max_stages)?;
            let rows: Vec<(usize, f64, f64)> = opt
                .iter()
                .map(|o| {
                    let s = o.schedule.stages();
                    (s, o.p_two_photon / 2.0, fockline::adaptive::bleed_closed_form_equal(s) / 2.0)
                })
                .collect();
            let doc = output::document(
                "figure5",
                json!({ "rows": rows.iter().map(|r| json!({"S": r.0, "p_optimal": r.1, "p_equal_spread": r.2})).collect::<Vec<_>>() }),
            );
            em.emit(&doc, || {
                let header = vec!["S".into(), "p_optimal".into(), "p_equal_spread".into()];
                Ok((header, rows.iter().map(|r| vec![r.0.to_string(), output::num(r.1), output::num(r.2)]).collect()))
            })?;
        }
        Command::Resources { table: ResourceTable::Table2 } => {
            let opt = optimize_primate_transmissivity()?;
            let live = LiveProbabilities::compute(opt.t_star)?;
            let plans = table2(&live)?;
            let doc = output::document(
                "resources-table2",
                json!({
                    "probabilities": live,
                    "t_star": opt.t_star,
                    "plans": plans,
                    "notes": [
                        "join probability uses t(1-t)[l1 + l2 - l1 l2 (1 - t^2)]; the form without the l1 l2 factor goes negative for small l and disagrees with the Fock simulation",
                    ],
                }),
            );
            em.emit(&doc, || {
                let header = vec!["scheme".into(), "exact".into(), "total".into()];
                Ok((header, plans.iter().map(|p| vec![p.scheme.clone(), p.exact.clone(), output::round_to(p.total, 6).to_string()]).collect()))
            })?;
        }
        Command::Verify { target: VerifyTarget::All } => {
            let results = fockline::verify::run_all();
            let all = results.iter().all(|r| r.pass);
            for r in &results {
                let worst = r.checks.iter().find(|c| !c.pass).map(|c| format!(" first failure: {} measured {}", c.name, c.measured));
                eprintln!(
                    "{} {:>2} {}{}{}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    worst.unwrap_or_default(),
                    r.error.as_ref().map(|e| format!(" error: {e}")).unwrap_or_default()
                );
            }
            let mut doc = output::document("verify", json!({ "pass": all, "criteria": results }));
            if let Some(t) = cli.tolerance {
                output::override_tolerance(&mut doc, t);
            }
            em.emit(&doc, || {
                let header = vec!["id".into(), "name".into(), "pass".into(), "checks".into()];
                Ok((header, results.iter().map(|r| vec![r.id.to_string(), r.name.to_string(), r.pass.to_string(), r.checks.len().to_string()]).collect()))
            })?;
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Reflectivities separated by commas or whitespace, or a JSON array.
fn read_schedule(path: &str, stages: usize) -> Result<BleedSchedule> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading schedule {path}"))?;
    let values: Vec<f64> = match serde_json::from_str::<Value>(&text) {
        Ok(Value::Array(a)) => a.iter().map(|v| v.as_f64().ok_or_else(|| anyhow!("non-numeric entry {v}"))).collect::<Result<_>>()?,
        _ => text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().with_context(|| format!("bad reflectivity {t}")))
            .collect::<Result<_>>()?,
    };
    if values.len() != stages {
        bail!("schedule file has {} stages, --stages says {stages}", values.len());
    }
    Ok(BleedSchedule::new(values)?)
}
