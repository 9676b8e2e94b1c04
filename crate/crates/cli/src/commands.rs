use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use popmat::gen::{generate_random_instance, Family};
use popmat::instance::InstanceFile;
use popmat::kernel::find_kernel;
use popmat::lexpop::{
    build_example1, build_x3c_reduction, equalize_capacities, example1_candidate, find_lex_dominating,
    is_lex_popular, lex_vote_total, x3c_domination_witness, BMatchingInstance, LexStatus, X3CInstance,
};
use popmat::popular::{classify, max_weakly_defendable_size, solve, PopularInstance};
use popmat::trials::{bases_trial, exchange_trial, BasesFamily};
use popmat::voting::{vote, vote_weak, Pairing};
use popmat::{ElemSet, Error};

use crate::{Cli, Command, GenCommand, LexCommand, LexSearch};

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_SCALE: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;
pub const EXIT_INCOMPLETE: u8 = 4;

/// Reached when a failed check should still print its report.
#[derive(Debug)]
pub struct CheckFailed(pub u8);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            EXIT_INCOMPLETE => f.write_str("search budget exhausted before a verdict"),
            _ => f.write_str("a check failed; see the report"),
        }
    }
}

impl std::error::Error for CheckFailed {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(CheckFailed(code)) = err.downcast_ref::<CheckFailed>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Scale { .. }) => EXIT_SCALE,
        Some(Error::Invariant(_)) | Some(Error::NoFeasiblePairing) => EXIT_INVARIANT,
        _ => EXIT_PARSE,
    }
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

struct Outcome {
    seed: Option<u64>,
    result: Value,
    verification: Option<Value>,
    summary: String,
    failure: Option<u8>,
}

impl Outcome {
    fn new(result: Value, summary: impl Into<String>) -> Self {
        Outcome {
            seed: None,
            result,
            verification: None,
            summary: summary.into(),
            failure: None,
        }
    }
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<ExitCode> {
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Gen(GenCommand::Random { family, size, seed }) => {
            let file = generate_random_instance(*family, *size, *seed)?;
            return emit_instance(&file, &format!("{family} instance with {size} elements, seed {seed}"));
        }
        Command::Lex(LexCommand::GenExample1 { q, dummies }) => {
            let inst = build_example1(*q, *dummies)?;
            let mut file = InstanceFile::from(&inst);
            if *dummies {
                let mu = example1_candidate(&inst)?;
                file.metadata.insert("candidate".into(), format_matching(&inst, &mu));
            }
            return emit_instance(&file, &format!("gadget with q = {q}, {} agents", inst.num_agents()));
        }
        Command::Lex(LexCommand::GenX3c { sets, cover }) => return gen_x3c(sets, cover.as_deref()),
        Command::Lex(LexCommand::Equalize { instance }) => {
            let inst = load_bmatching(instance)?;
            let eq = equalize_capacities(&inst)?;
            let mut file = InstanceFile::from(&eq.instance);
            file.metadata.insert("fixed".into(), format_matching(&eq.instance, &eq.fixed));
            return emit_instance(
                &file,
                &format!("capacities raised to {}, {} fixed edges", eq.instance.max_capacity(), eq.fixed.len()),
            );
        }
        Command::Solve { instance, verify, bound } => solve_cmd(&load_popular(instance)?, *verify, *bound)?,
        Command::Kernel { instance } => kernel_cmd(&load_popular(instance)?)?,
        Command::Vote { instance, set_i, set_j, weak } => {
            vote_cmd(&load_popular(instance)?, set_i, set_j, *weak)?
        }
        Command::Verify { instance, set, bound } => verify_cmd(&load_popular(instance)?, set, *bound)?,
        Command::CheckTheorems { trials, seed, families, max_size } => {
            check_theorems(*trials, *seed, families, *max_size)?
        }
        Command::Lex(LexCommand::Verify(args)) => lex_cmd(args, true)?,
        Command::Lex(LexCommand::Dominate(args)) => lex_cmd(args, false)?,
        Command::Lex(LexCommand::Compare { instance, matching, against }) => {
            compare_cmd(instance, matching.as_deref(), against.as_deref())?
        }
    };
    let report = RunReport {
        command: argv,
        seed: outcome.seed,
        result: outcome.result,
        verification: outcome.verification,
        elapsed_ms: (!cli.no_timing).then(|| start.elapsed().as_millis()),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    eprintln!("{}", outcome.summary);
    match outcome.failure {
        Some(code) => Err(CheckFailed(code).into()),
        None => Ok(ExitCode::SUCCESS),
    }
}

fn emit_instance(file: &InstanceFile, summary: &str) -> Result<ExitCode> {
    println!("{}", file.to_json());
    eprintln!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn load_file(path: &str) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    InstanceFile::from_json(&text).with_context(|| format!("in {path}"))
}

fn load_popular(path: &str) -> Result<PopularInstance> {
    let file = load_file(path)?;
    if !file.has_matroid_part() {
        bail!("{path} has no matroid sides");
    }
    file.to_popular().with_context(|| format!("in {path}"))
}

fn load_bmatching(path: &str) -> Result<BMatchingInstance> {
    load_file(path)?
        .to_bmatching()
        .with_context(|| format!("in {path}"))?
        .ok_or_else(|| anyhow!("{path} has no bmatching section"))
}

fn parse_set(pi: &PopularInstance, text: &str) -> Result<ElemSet> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(pi.ground().set(&names)?)
}

fn names(pi: &PopularInstance, x: &ElemSet) -> Vec<String> {
    pi.ground().names_of(x)
}

fn solve_cmd(pi: &PopularInstance, verify: bool, bound: usize) -> Result<Outcome> {
    let sol = solve(pi)?;
    let mut out = Outcome::new(
        json!({
            "set": names(pi, &sol.set),
            "size": sol.set.len(),
            "kernel_rounds": sol.trace.rounds.len(),
        }),
        format!("popular set of size {}: {{{}}}", sol.set.len(), names(pi, &sol.set).join(", ")),
    );
    if verify {
        let verdict = classify(pi, &sol.set, bound)?;
        let best = max_weakly_defendable_size(pi, bound)?;
        let ok = verdict.super_popular && best == sol.set.len();
        out.verification = Some(json!({
            "verdict": verdict,
            "max_weakly_defendable_size": best,
            "holds": ok,
        }));
        out.summary.push_str(if ok { "; verified" } else { "; VERIFICATION FAILED" });
        if !ok {
            out.failure = Some(EXIT_INVARIANT);
        }
    }
    Ok(out)
}

fn kernel_cmd(pi: &PopularInstance) -> Result<Outcome> {
    let ki = pi.kernel_instance()?;
    let (k, trace) = find_kernel(&ki)?;
    let rounds: Vec<Value> = trace
        .rounds
        .iter()
        .map(|r| json!({"proposed": names(pi, &r.proposed), "rejected": names(pi, &r.rejected)}))
        .collect();
    Ok(Outcome::new(
        json!({"kernel": names(pi, &k), "size": k.len(), "rounds": rounds}),
        format!("kernel of size {} after {} rounds", k.len(), trace.rounds.len()),
    ))
}

fn pairing_names(pi: &PopularInstance, p: &Pairing) -> Vec<[String; 2]> {
    p.pairs
        .iter()
        .map(|&(u, v)| [pi.ground().name(u).to_string(), pi.ground().name(v).to_string()])
        .collect()
}

fn vote_cmd(pi: &PopularInstance, set_i: &str, set_j: &str, weak: bool) -> Result<Outcome> {
    let i = parse_set(pi, set_i)?;
    let j = parse_set(pi, set_j)?;
    for (name, x) in [("set-i", &i), ("set-j", &j)] {
        if !pi.is_common_independent(x) {
            return Err(Error::Input(format!("{name} is not common independent")).into());
        }
    }
    let mut sides = Vec::new();
    let mut total = 0;
    for k in 0..2 {
        let side = pi.side(k);
        let r = if weak { vote_weak(side, &i, &j)? } else { vote(side, &i, &j)? };
        total += r.value;
        sides.push(json!({"side": k + 1, "value": r.value, "witness": pairing_names(pi, &r.witness)}));
    }
    let mode = if weak { "weakly-feasible" } else { "feasible" };
    Ok(Outcome::new(
        json!({"mode": mode, "sides": sides, "total": total}),
        format!("{mode} vote of I against J: {total}"),
    ))
}

fn verify_cmd(pi: &PopularInstance, set: &str, bound: usize) -> Result<Outcome> {
    let x = parse_set(pi, set)?;
    let verdict = classify(pi, &x, bound)?;
    let counter = |c: &Option<Vec<usize>>| {
        c.as_ref()
            .map(|v| v.iter().map(|&e| pi.ground().name(e).to_string()).collect::<Vec<_>>())
    };
    let summary = format!(
        "super popular {}, popular {}, defendable {}, weakly defendable {}",
        verdict.super_popular, verdict.popular, verdict.defendable, verdict.weakly_defendable
    );
    Ok(Outcome::new(
        json!({
            "set": names(pi, &x),
            "super_popular": verdict.super_popular,
            "popular": verdict.popular,
            "defendable": verdict.defendable,
            "weakly_defendable": verdict.weakly_defendable,
            "counterexamples": {
                "super_popular": counter(&verdict.counterexamples.super_popular),
                "popular": counter(&verdict.counterexamples.popular),
                "defendable": counter(&verdict.counterexamples.defendable),
                "weakly_defendable": counter(&verdict.counterexamples.weakly_defendable),
            },
            "sets_compared": verdict.sets_compared,
        }),
        summary,
    ))
}

fn check_theorems(trials: u64, seed: u64, families: &[Family], max_size: usize) -> Result<Outcome> {
    use rayon::prelude::*;
    if families.is_empty() {
        bail!(Error::Input("no families given".into()));
    }
    if max_size == 0 || max_size > popmat::voting::BRUTE_FORCE_DIFF_LIMIT {
        return Err(Error::Scale {
            what: "trial ground set",
            size: max_size,
            limit: popmat::voting::BRUTE_FORCE_DIFF_LIMIT,
        }
        .into());
    }
    let results: Vec<Result<Value, Error>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.wrapping_add(t);
            let family = families[t as usize % families.len()];
            let ex = exchange_trial(family, max_size, s)?;
            let bf = if t % 2 == 0 { BasesFamily::Graphic } else { BasesFamily::Explicit };
            let bases = bases_trial(bf, s)?;
            Ok(json!({
                "seed": s,
                "holds": ex.passed() && bases.passed(),
                "exchange": ex,
                "disjoint_bases": bases,
            }))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut holds = 0;
    for r in results {
        let row = r?;
        if row["holds"] == json!(true) {
            holds += 1;
        }
        rows.push(row);
    }
    let failed: Vec<u64> = rows
        .iter()
        .filter(|r| r["holds"] != json!(true))
        .filter_map(|r| r["seed"].as_u64())
        .collect();
    let mut out = Outcome::new(
        json!({"trials": trials, "holds": holds, "failed_seeds": failed, "details": rows}),
        format!("{holds}/{trials} trials hold"),
    );
    out.seed = Some(seed);
    if holds != trials {
        out.failure = Some(EXIT_INVARIANT);
    }
    Ok(out)
}

fn format_matching(inst: &BMatchingInstance, mu: &ElemSet) -> String {
    inst.edge_names(mu)
        .into_iter()
        .map(|(u, w)| format!("{u}:{w}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_matching(inst: &BMatchingInstance, text: &str) -> Result<ElemSet> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("edge {item:?} is not of the form a:b")))?;
        pairs.push((a.to_string(), b.to_string()));
    }
    let mu = inst.edge_set(&pairs)?;
    if !inst.is_b_matching(&mu) {
        return Err(Error::Input("the given edges exceed a capacity".into()).into());
    }
    Ok(mu)
}

/// A b-matching from the command line or, failing that, from the file's metadata.
fn matching_arg(file: &InstanceFile, inst: &BMatchingInstance, given: Option<&str>, key: &str) -> Result<ElemSet> {
    let text = match given {
        Some(t) => t.to_string(),
        None => file
            .metadata
            .get(key)
            .cloned()
            .ok_or_else(|| Error::Input(format!("no matching given and no {key} in the file")))?,
    };
    parse_matching(inst, &text)
}

fn lex_file(path: &str) -> Result<(InstanceFile, BMatchingInstance)> {
    let file = load_file(path)?;
    let inst = file
        .to_bmatching()?
        .ok_or_else(|| anyhow!("{path} has no bmatching section"))?;
    Ok((file, inst))
}

fn compare_cmd(path: &str, matching: Option<&str>, against: Option<&str>) -> Result<Outcome> {
    let (file, inst) = lex_file(path)?;
    let mu = matching_arg(&file, &inst, matching, "candidate")?;
    let other = matching_arg(&file, &inst, against, "witness")?;
    let mut better = Vec::new();
    let mut worse = Vec::new();
    for v in 0..inst.num_agents() {
        match popmat::lexpop::lex_vote_agent(&inst, &mu, &other, v) {
            1 => better.push(inst.agent(v).name.clone()),
            -1 => worse.push(inst.agent(v).name.clone()),
            _ => {}
        }
    }
    let total = lex_vote_total(&inst, &mu, &other);
    Ok(Outcome::new(
        json!({"total": total, "prefer_first": better, "prefer_second": worse}),
        format!("vote of the first b-matching against the second: {total}"),
    ))
}

fn lex_cmd(args: &LexSearch, verify: bool) -> Result<Outcome> {
    let (file, inst) = lex_file(&args.instance)?;
    let mu = matching_arg(&file, &inst, args.matching.as_deref(), "candidate")?;
    let status = if verify {
        is_lex_popular(&inst, &mu, args.budget)?
    } else {
        find_lex_dominating(&inst, &mu, args.budget)?
    };
    let (result, summary, failure) = match &status {
        LexStatus::Popular => (
            json!({"status": "popular"}),
            "lexicographically popular (exhaustive)".to_string(),
            None,
        ),
        LexStatus::Dominated { witness, margin } => (
            json!({
                "status": "dominated",
                "margin": margin,
                "witness": format_matching(&inst, witness),
            }),
            format!("dominated by a b-matching winning by {margin}"),
            None,
        ),
        LexStatus::Incomplete { explored } => (
            json!({"status": "incomplete", "explored": explored}),
            format!("incomplete after {explored} search leaves"),
            Some(EXIT_INCOMPLETE),
        ),
    };
    let mut out = Outcome::new(result, summary);
    out.failure = failure;
    Ok(out)
}

fn gen_x3c(sets: &str, cover: Option<&[usize]>) -> Result<ExitCode> {
    let mut parsed = Vec::new();
    for part in sets.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let items = part
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad element {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if items.len() != 3 || items.contains(&0) {
            return Err(Error::Input(format!("set {part:?} must list three elements numbered from 1")).into());
        }
        parsed.push([items[0] - 1, items[1] - 1, items[2] - 1]);
    }
    let x3c = X3CInstance::new(parsed.len() / 3, parsed)?;
    let red = build_x3c_reduction(&x3c)?;
    let mut file = InstanceFile::from(&red.instance);
    file.metadata
        .insert("candidate".into(), format_matching(&red.instance, &red.candidate));
    file.metadata
        .insert("gadget_order".into(), red.gadget_order_convention.to_string());
    let mut summary = format!("reduction with {} agents", red.instance.num_agents());
    if let Some(cover) = cover {
        if cover.contains(&0) {
            return Err(Error::Input("cover indices are numbered from 1".into()).into());
        }
        let idx: Vec<usize> = cover.iter().map(|c| c - 1).collect();
        let w = x3c_domination_witness(&red, &idx)?;
        file.metadata
            .insert("witness".into(), format_matching(&red.instance, &w));
        let total = lex_vote_total(&red.instance, &red.candidate, &w);
        summary.push_str(&format!("; witness beats the candidate by {}", -total));
    }
    emit_instance(&file, &summary)
}
