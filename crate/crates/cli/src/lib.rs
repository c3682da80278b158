//! Command implementations behind the `reflex` binary.
//!
//! Every command returns an [`Outcome`] holding the text to print and the
//! process exit code; `main` only does the printing. Errors map to exit 1.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use reflex_core::codec::expand;
use reflex_core::neuron::{simulate, NeuronParams, Pulse};
use reflex_core::report::{self, fmt_g};
use reflex_core::rgt::{canonical_coefficients, fold_graph, forward_task, inverse_task, DecisionResult};
use reflex_core::scenario::{run_scenario, RunOutcome, Scenario, ScenarioConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FRUSTRATED: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
pub struct SolveArgs {
    pub config: PathBuf,
    pub task: Task,
    pub subject: Option<String>,
    pub target: Option<String>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct TraceArgs {
    pub omega: f64,
    pub pulses: String,
    pub duration: f64,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let cfg = ScenarioConfig::load(path)?;
    Scenario::from_config(&cfg).with_context(|| format!("invalid scenario {}", path.display()))
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn frustration_code<'a>(decisions: impl IntoIterator<Item = &'a DecisionResult>) -> i32 {
    if decisions.into_iter().any(DecisionResult::is_frustration) {
        EXIT_FRUSTRATED
    } else {
        EXIT_OK
    }
}

/// Solves the forward or inverse task on the scenario's graph directly,
/// without the channel.
pub fn cmd_solve(args: &SolveArgs) -> Result<Outcome> {
    let s = load_scenario(&args.config)?;
    let seed = args.seed.unwrap_or(s.seed);
    let graph = s.relationship_graph(seed)?;
    let (poly, folded) = fold_graph(&graph)?;

    match args.task {
        Task::Forward => {
            let m = s.influence_matrix()?;
            let decisions = forward_task(&folded, &m)?;
            let coeffs = m
                .subjects()
                .iter()
                .map(|x| canonical_coefficients(&folded, x, &m.column(x)?, &s.universe))
                .collect::<Result<Vec<_>, _>>()?;
            let text = report::to_pretty(&report::forward_report(&poly, &folded, &coeffs, &decisions));
            write(&args.out_dir, "decisions.json", text.as_bytes())?;
            Ok(Outcome {
                code: frustration_code(decisions.values()),
                stdout: text,
            })
        }
        Task::Inverse => {
            let control = s.control.as_ref();
            let subject = match (&args.subject, control) {
                (Some(x), _) => x.clone(),
                (None, Some(c)) => c.subject.clone(),
                (None, None) => bail!("--task inverse needs --subject"),
            };
            let target = match (&args.target, control) {
                (Some(t), _) => s.universe.parse_set(t).context("--target")?,
                (None, Some(c)) => c.target.clone(),
                (None, None) => bail!("--task inverse needs --target"),
            };
            if !graph.subjects().contains(&subject) {
                bail!("--subject: unknown unit {subject:?}");
            }
            let solutions = inverse_task(&folded, &subject, &target)?;
            let text = report::to_pretty(&report::inverse_report(&poly, &subject, &target, &solutions));
            write(&args.out_dir, "inverse.json", text.as_bytes())?;
            Ok(Outcome {
                code: EXIT_OK,
                stdout: text,
            })
        }
    }
}

/// Parses `mag@time,mag@time,...`. An empty or blank spec means no pulses.
pub fn parse_pulses(spec: &str) -> Result<Vec<Pulse>> {
    let mut out = Vec::new();
    for (i, item) in spec.split(',').map(str::trim).enumerate() {
        if item.is_empty() {
            if spec.trim().is_empty() {
                break;
            }
            bail!("pulse {}: empty entry", i + 1);
        }
        let (mag, time) = item
            .split_once('@')
            .with_context(|| format!("pulse {}: expected mag@time, got {item:?}", i + 1))?;
        let mag: f64 = mag
            .trim()
            .parse()
            .with_context(|| format!("pulse {}: bad magnitude {mag:?}", i + 1))?;
        let time: f64 = time
            .trim()
            .parse()
            .with_context(|| format!("pulse {}: bad time {time:?}", i + 1))?;
        if !mag.is_finite() {
            bail!("pulse {}: magnitude must be finite", i + 1);
        }
        out.push(Pulse::new(time, mag));
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(out)
}

/// Simulates one resonator and writes its `t,x,y,spike` trace.
pub fn cmd_neuron_trace(args: &TraceArgs) -> Result<Outcome> {
    let pulses = parse_pulses(&args.pulses)?;
    let params = NeuronParams::with_omega(args.omega);
    let trace = simulate(&params, &pulses, args.duration)?;
    let mut buf = Vec::new();
    report::write_trace_csv(&mut buf, &trace)?;
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(&args.out, buf).with_context(|| format!("cannot write {}", args.out.display()))?;

    let mut stdout = format!("spikes: {}\n", trace.spikes.len());
    for t in &trace.spikes {
        stdout.push_str(&fmt_g(*t));
        stdout.push('\n');
    }
    Ok(Outcome { code: EXIT_OK, stdout })
}

/// Continuous trace of one channel's resonator over everything sent on the
/// medium.
fn channel_trace(out: &RunOutcome, channel: &str) -> Result<Vec<u8>> {
    let params = out.group.units()[0]
        .bank
        .get(channel)
        .with_context(|| format!("no resonator for {channel:?}"))?;
    let mut pulses: Vec<Pulse> = out.group.medium().log.iter().flat_map(expand).collect();
    pulses.sort_by(|a, b| a.time.total_cmp(&b.time));
    let trace = simulate(params, &pulses, out.group.medium().clock)?;
    let mut buf = Vec::new();
    report::write_trace_csv(&mut buf, &trace)?;
    Ok(buf)
}

/// Negotiation, influence exchange and inference over the simulated
/// channel. Writes `messages.csv`, `decisions.json` and, when the scenario
/// asks for them, `trace_<unit>.csv`.
pub fn cmd_run(args: &RunArgs) -> Result<Outcome> {
    let s = load_scenario(&args.config)?;
    let seed = args.seed.unwrap_or(s.seed);
    let out = run_scenario(&s, seed).context("simulation failed")?;

    let mut csv = Vec::new();
    report::write_messages_csv(&mut csv, out.messages())?;
    write(&args.out_dir, "messages.csv", &csv)?;
    let doc = report::to_pretty(&report::run_report(&out));
    write(&args.out_dir, "decisions.json", doc.as_bytes())?;
    if s.traces {
        for id in s.ids() {
            write(&args.out_dir, &format!("trace_{id}.csv"), &channel_trace(&out, &id)?)?;
        }
    }

    let mut stdout = format!(
        "seed {seed}: {} messages, polynomial {}\n",
        out.messages().len(),
        out.round.polynomial
    );
    for (subject, r) in &out.round.decisions {
        stdout.push_str(&format!("{subject}: {r}\n"));
    }
    if let Some((c, plan)) = &out.plan {
        match plan {
            Some(p) => {
                let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
                stdout.push_str(&format!(
                    "plan for {} = {} by {}: {}\n",
                    c.subject,
                    c.target,
                    c.planner,
                    parts.join(", ")
                ));
            }
            None => stdout.push_str(&format!("no influence pins {} to {}\n", c.subject, c.target)),
        }
    }
    Ok(Outcome {
        code: frustration_code(out.round.decisions.values()),
        stdout,
    })
}
