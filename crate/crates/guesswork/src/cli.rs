//! Command-line front end: argument parsing, result serialization and exit
//! codes. All computation lives in the library; the binary stays thin.
//!
//! ```text
//! guesswork solve    --channel <name|path> [--cost identity|file:<path>]
//!                    [--threads N] [--regime auto|general|transitive|cs|transitive-cs]
//!                    [--time-budget SECONDS] [--format json|csv]
//! guesswork oracle   --channel <name|path> [--cost ...] [--regime ...]
//!                    [--cap N] [--format json|csv]
//! guesswork simulate --channel <name|path> [--cost ...] --shots N --seed S
//!                    [--threads N] [--format json|csv]
//! guesswork channels list
//! guesswork channels export --family <name> [--out <path>]
//! ```
//!
//! Exit codes: 0 success, 2 invalid input (validation, parsing, unavailable
//! regime, enumeration cap), 3 unbalanced cost, 4 time budget exceeded (the
//! incumbent is still printed, flagged `"bound_only": true`).
//!
//! Every JSON output embeds a manifest `{input_hash, version, threads}`;
//! the hash covers the channel and cost (never seeds or thread counts), so
//! identical inputs are recognizable across runs. Floats are printed with
//! shortest round-trip precision and parse back bit-exactly.

use crate::channels::{generate_hsic, load_channel_file, save_channel, ChannelFile, HsicFamily};
use crate::model::{CostFunction, Numbering, Prior, QubitCqChannel};
use crate::oracle::{self, DEFAULT_CAP};
use crate::score;
use crate::sim;
use crate::solver::{self, Regime, SolveError, SolveOptions, SolveResult};
use serde_json::json;
use std::collections::HashMap;
use std::time::Duration;

const USAGE: &str = "usage: guesswork <solve|oracle|simulate|channels> [flags]
  solve    --channel <name|path> [--cost identity|file:<path>] [--threads N]
           [--regime auto|general|transitive|cs|transitive-cs]
           [--time-budget SECONDS] [--format json|csv]
  oracle   --channel <name|path> [--cost ...] [--regime ...] [--cap N] [--format json|csv]
  simulate --channel <name|path> [--cost ...] --shots N --seed S [--threads N] [--format json|csv]
  channels list
  channels export --family <name> [--out <path>]";

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn unbalanced() -> Failure {
        Failure { code: 3, message: "cost function is not balanced".into() }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(args: &[String]) -> Result<i32, Failure> {
    let Some(command) = args.first() else {
        return Err(Failure::invalid(USAGE));
    };
    match command.as_str() {
        "solve" => cmd_solve(&parse_flags(&args[1..])?),
        "oracle" => cmd_oracle(&parse_flags(&args[1..])?),
        "simulate" => cmd_simulate(&parse_flags(&args[1..])?),
        "channels" => cmd_channels(&args[1..]),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(0)
        }
        other => Err(Failure::invalid(format!("unknown command `{other}`\n{USAGE}"))),
    }
}

fn parse_flags(args: &[String]) -> Result<HashMap<String, String>, Failure> {
    let mut flags = HashMap::new();
    let mut i = 0;
    while i < args.len() {
        let key = args[i]
            .strip_prefix("--")
            .ok_or_else(|| Failure::invalid(format!("expected a --flag, got `{}`", args[i])))?;
        let value = args
            .get(i + 1)
            .ok_or_else(|| Failure::invalid(format!("flag --{key} needs a value")))?;
        flags.insert(key.to_string(), value.clone());
        i += 2;
    }
    Ok(flags)
}

/// A channel input together with its prior and the canonical bytes hashed
/// into the manifest.
struct ChannelInput {
    name: String,
    channel: QubitCqChannel,
    prior: Prior,
    canonical: String,
}

fn load_input(source: &str) -> Result<ChannelInput, Failure> {
    if let Ok(family) = source.parse::<HsicFamily>() {
        let channel = generate_hsic(family);
        let canonical =
            serde_json::to_string(&ChannelFile::from_channel(&channel, Some(family.name())))
                .expect("channel serializes");
        return Ok(ChannelInput {
            name: family.name().to_string(),
            channel: channel.clone(),
            prior: Prior::uniform(channel.len()),
            canonical,
        });
    }
    let file = load_channel_file(source).map_err(|e| Failure::invalid(e.to_string()))?;
    let channel = file.channel().map_err(|e| Failure::invalid(e.to_string()))?;
    let prior = file.prior().map_err(|e| Failure::invalid(e.to_string()))?;
    let canonical = serde_json::to_string(&file).expect("channel file serializes");
    Ok(ChannelInput {
        name: file.name.clone().unwrap_or_else(|| source.to_string()),
        channel,
        prior,
        canonical,
    })
}

fn load_cost(source: &str, size: usize) -> Result<(CostFunction, String), Failure> {
    if source == "identity" {
        return Ok((CostFunction::identity(size), "identity".to_string()));
    }
    let path = source
        .strip_prefix("file:")
        .ok_or_else(|| Failure::invalid("--cost expects `identity` or `file:<path>`"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read cost file: {e}")))?;
    let values: Vec<f64> = serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("cannot parse cost file: {e}")))?;
    if values.len() != size {
        return Err(Failure::invalid(format!(
            "cost file has {} entries for a channel of {size} states",
            values.len()
        )));
    }
    let cost = CostFunction::new(values).map_err(|e| Failure::invalid(e.to_string()))?;
    Ok((cost, source.to_string()))
}

fn parse_regime(flags: &HashMap<String, String>) -> Result<Option<Regime>, Failure> {
    match flags.get("regime").map(String::as_str) {
        None | Some("auto") => Ok(None),
        Some(name) => name.parse::<Regime>().map(Some).map_err(Failure::invalid),
    }
}

fn parse_number<T: std::str::FromStr>(
    flags: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, Failure> {
    match flags.get(key) {
        None => Ok(default),
        Some(raw) => {
            raw.parse().map_err(|_| Failure::invalid(format!("cannot parse --{key} `{raw}`")))
        }
    }
}

fn resolve_threads(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        requested
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF29CE484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001B3);
    }
    hash
}

fn manifest(canonical_channel: &str, cost: &CostFunction, threads: usize) -> serde_json::Value {
    let mut payload = canonical_channel.as_bytes().to_vec();
    payload.push(b'|');
    for v in cost.values() {
        payload.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    json!({
        "input_hash": format!("fnv1a64:{:016x}", fnv1a64(&payload)),
        "version": env!("CARGO_PKG_VERSION"),
        "threads": threads,
    })
}

fn label_sequence(channel: &QubitCqChannel, numbering: &Numbering) -> Vec<String> {
    numbering.order().iter().map(|&m| channel.labels()[m].clone()).collect()
}

fn map_solve_error(e: &SolveError) -> Failure {
    match e {
        SolveError::NotBalanced => Failure::unbalanced(),
        other => Failure::invalid(other.to_string()),
    }
}

fn solve_output(
    input: &ChannelInput,
    cost: &CostFunction,
    cost_name: &str,
    result: &SolveResult,
    threads: usize,
    format: &str,
) -> String {
    let numbering = label_sequence(&input.channel, &result.best_numbering);
    match format {
        "csv" => {
            let header = "command,channel,cost,value,best_norm,regime,leaves_visited,\
                          nodes_expanded,wall_time_s,bound_only,numbering";
            format!(
                "{header}\nsolve,{},{},{},{},{},{},{},{},{},{}",
                input.name,
                cost_name,
                result.value,
                result.best_norm,
                result.regime,
                result.leaves_visited,
                result.nodes_expanded,
                result.wall_time.as_secs_f64(),
                result.bound_only,
                numbering.join(" ")
            )
        }
        _ => serde_json::to_string_pretty(&json!({
            "command": "solve",
            "channel": input.name,
            "cost": cost_name,
            "value": result.value,
            "best_norm": result.best_norm,
            "numbering": numbering,
            "regime": result.regime.name(),
            "leaves_visited": result.leaves_visited,
            "nodes_expanded": result.nodes_expanded,
            "wall_time_s": result.wall_time.as_secs_f64(),
            "bound_only": result.bound_only,
            "manifest": manifest(&input.canonical, cost, threads),
        }))
        .expect("serializable"),
    }
}

fn cmd_solve(flags: &HashMap<String, String>) -> Result<i32, Failure> {
    let source = flags.get("channel").ok_or_else(|| Failure::invalid("--channel is required"))?;
    let input = load_input(source)?;
    let (cost, cost_name) =
        load_cost(flags.get("cost").map_or("identity", String::as_str), input.channel.len())?;
    let threads = resolve_threads(parse_number(flags, "threads", 0usize)?);
    let budget_s: Option<f64> = flags
        .get("time-budget")
        .map(|raw| {
            raw.parse().map_err(|_| Failure::invalid(format!("cannot parse --time-budget `{raw}`")))
        })
        .transpose()?;
    let options = SolveOptions {
        threads,
        force_regime: parse_regime(flags)?,
        time_budget: budget_s.map(Duration::from_secs_f64),
        prune: true,
    };
    let format = flags.get("format").map_or("json", String::as_str);
    match solver::solve(&input.channel, &cost, &options) {
        Ok(result) => {
            println!("{}", solve_output(&input, &cost, &cost_name, &result, threads, format));
            Ok(0)
        }
        Err(SolveError::TimeBudgetExceeded { partial }) => {
            println!("{}", solve_output(&input, &cost, &cost_name, &partial, threads, format));
            Ok(4)
        }
        Err(e) => Err(map_solve_error(&e)),
    }
}

fn cmd_oracle(flags: &HashMap<String, String>) -> Result<i32, Failure> {
    let source = flags.get("channel").ok_or_else(|| Failure::invalid("--channel is required"))?;
    let input = load_input(source)?;
    let n = input.channel.len();
    let (cost, cost_name) = load_cost(flags.get("cost").map_or("identity", String::as_str), n)?;
    let cap = parse_number(flags, "cap", DEFAULT_CAP)?;
    let normalized = score::normalize_cost(&cost);
    if !normalized.balanced {
        return Err(Failure::unbalanced());
    }
    let info = crate::symmetry::detect_symmetries(&input.channel);
    let regime = parse_regime(flags)?
        .unwrap_or_else(|| Regime::from_flags(info.transitive, info.centrally_symmetric));
    let result = oracle::brute_force_norm(&input.channel, &normalized.weights, regime, cap)
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let best_norm = result.norm / n as f64;
    let value = normalized.mean - best_norm;
    let numbering =
        label_sequence(&input.channel, &normalized.to_query_order(&result.numbering));
    let format = flags.get("format").map_or("json", String::as_str);
    let rendered = match format {
        "csv" => {
            let header = "command,channel,cost,value,norm,regime,leaves,numbering";
            format!(
                "{header}\noracle,{},{},{},{},{},{},{}",
                input.name,
                cost_name,
                value,
                best_norm,
                regime,
                result.leaves,
                numbering.join(" ")
            )
        }
        _ => serde_json::to_string_pretty(&json!({
            "command": "oracle",
            "channel": input.name,
            "cost": cost_name,
            "value": value,
            "norm": best_norm,
            "numbering": numbering,
            "regime": regime.name(),
            "leaves": result.leaves,
            "manifest": manifest(&input.canonical, &cost, 1),
        }))
        .expect("serializable"),
    };
    println!("{rendered}");
    Ok(0)
}

fn cmd_simulate(flags: &HashMap<String, String>) -> Result<i32, Failure> {
    let source = flags.get("channel").ok_or_else(|| Failure::invalid("--channel is required"))?;
    let input = load_input(source)?;
    let n = input.channel.len();
    let (cost, cost_name) = load_cost(flags.get("cost").map_or("identity", String::as_str), n)?;
    let shots = parse_number(flags, "shots", 4000u64)?;
    let seed = parse_number(flags, "seed", 0u64)?;
    let threads = resolve_threads(parse_number(flags, "threads", 0usize)?);

    let options = SolveOptions { threads, ..SolveOptions::default() };
    let solved = solver::solve(&input.channel, &cost, &options).map_err(|e| map_solve_error(&e))?;
    let measurement =
        score::build_optimal_measurement(&input.channel, &cost, &solved.best_numbering)
            .map_err(|e| Failure::invalid(e.to_string()))?;
    let report =
        sim::simulate_game(&input.channel, &input.prior, &cost, &measurement, shots, seed)
            .map_err(|e| Failure::invalid(e.to_string()))?;

    let format = flags.get("format").map_or("json", String::as_str);
    let rendered = match format {
        "csv" => {
            let header = "command,channel,cost,shots_per_state,seed,empirical_guesswork,\
                          standard_error,exact_value";
            format!(
                "{header}\nsimulate,{},{},{},{},{},{},{}",
                input.name,
                cost_name,
                shots,
                seed,
                report.empirical_guesswork,
                report.standard_error,
                solved.value
            )
        }
        _ => serde_json::to_string_pretty(&json!({
            "command": "simulate",
            "channel": input.name,
            "cost": cost_name,
            "seed": seed,
            "report": report,
            "exact_value": solved.value,
            "manifest": manifest(&input.canonical, &cost, threads),
        }))
        .expect("serializable"),
    };
    println!("{rendered}");
    Ok(0)
}

fn cmd_channels(args: &[String]) -> Result<i32, Failure> {
    match args.first().map(String::as_str) {
        Some("list") => {
            let families: Vec<_> = HsicFamily::ALL
                .iter()
                .map(|f| json!({"family": f.name(), "states": f.size()}))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "command": "channels-list",
                    "families": families,
                    "manifest": {
                        "input_hash": "fnv1a64:0000000000000000",
                        "version": env!("CARGO_PKG_VERSION"),
                        "threads": 1,
                    },
                }))
                .expect("serializable")
            );
            Ok(0)
        }
        Some("export") => {
            let flags = parse_flags(&args[1..])?;
            let family: HsicFamily = flags
                .get("family")
                .ok_or_else(|| Failure::invalid("--family is required"))?
                .parse()
                .map_err(|e: crate::channels::ChannelError| Failure::invalid(e.to_string()))?;
            let channel = generate_hsic(family);
            match flags.get("out") {
                Some(path) => {
                    save_channel(&channel, Some(family.name()), path)
                        .map_err(|e| Failure::invalid(e.to_string()))?;
                    let canonical = serde_json::to_string(&ChannelFile::from_channel(
                        &channel,
                        Some(family.name()),
                    ))
                    .expect("serializable");
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "command": "channels-export",
                            "family": family.name(),
                            "out": path,
                            "states": channel.len(),
                            "manifest": manifest(
                                &canonical,
                                &CostFunction::identity(channel.len()),
                                1
                            ),
                        }))
                        .expect("serializable")
                    );
                }
                None => {
                    // Print the channel file itself; loaders ignore the
                    // embedded manifest key.
                    let mut value = serde_json::to_value(ChannelFile::from_channel(
                        &channel,
                        Some(family.name()),
                    ))
                    .expect("serializable");
                    let canonical = value.to_string();
                    value["manifest"] =
                        manifest(&canonical, &CostFunction::identity(channel.len()), 1);
                    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
                }
            }
            Ok(0)
        }
        _ => Err(Failure::invalid("usage: guesswork channels <list|export --family <name> [--out <path>]>")),
    }
}
