//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails at the end if any criterion failed.
//!
//! Run with `cargo test -p reflex-cli --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use reflex_cli::{cmd_run, cmd_solve, load_scenario, RunArgs, SolveArgs, Task, EXIT_OK};
use reflex_core::algebra::{all_elements, assignments, equivalent, eval, ActionSet, Assignment, Expr, UniversalSet};
use reflex_core::codec::{Codebook, Symbol};
use reflex_core::netsim::{draw_relationship_intents, rng_from_seed, DEFAULT_P_ALLIANCE};
use reflex_core::neuron::{pulse_triple, simulate, NeuronParams};
use reflex_core::rgt::{
    canonical_coefficients, fold_diagonal, forward_task, graph_to_polynomial, inverse_task, stratify, DecisionResult,
    InfluenceMatrix, Relation, RelationshipGraph, RgtError,
};
use reflex_core::scenario::run_scenario;

const RUNTIME_LIMIT: Duration = Duration::from_secs(1);
const ALLIANCE_TOLERANCE: f64 = 0.01;
const PAIR_DRAWS: usize = 100_000;
const STATS_SEED: u64 = 20_240_061;
/// Listening time after the last pulse of a train.
const TAIL: f64 = 3.0;
const TRAIN_START: f64 = 1.0;

type Check = Result<(), String>;
/// subject, expected A, expected B
type Coefficients<'a> = &'a [(&'a str, &'a str, &'a str)];
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn u2() -> UniversalSet {
    UniversalSet::new(["alpha", "beta"]).unwrap()
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn parse(text: &str, u: &UniversalSet) -> Expr {
    Expr::parse(text, u).unwrap()
}

fn vars(e: &Expr) -> Vec<String> {
    e.variables().into_iter().collect()
}

fn folded(text: &str, u: &UniversalSet) -> Expr {
    fold_diagonal(&stratify(&parse(text, u)).unwrap())
}

fn point(u: &UniversalSet, text: &str) -> DecisionResult {
    let s = u.parse_set(text).unwrap();
    DecisionResult::Interval {
        lower: s.clone(),
        upper: s,
    }
}

fn interval(u: &UniversalSet, lo: &str, hi: &str) -> DecisionResult {
    DecisionResult::Interval {
        lower: u.parse_set(lo).unwrap(),
        upper: u.parse_set(hi).unwrap(),
    }
}

fn fold_identity() -> Check {
    let u = u2();
    let started = Instant::now();
    for (text, count) in [("ab + c", 64), ("abc + d", 256)] {
        let p = parse(text, &u);
        let f = folded(text, &u);
        let vs = vars(&p);
        ensure(assignments(&vs, &u).len() == count, || format!("{text}: assignment count"))?;
        ensure(equivalent(&f, &p, &vs, &u).unwrap(), || format!("fold of {text} is {f}"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < RUNTIME_LIMIT, || format!("took {elapsed:?}"))
}

fn canonical_forms() -> Check {
    let u = u2();
    let cases: [(&str, Coefficients); 2] = [
        ("ab + c", &[("a", "b + c", "c"), ("b", "a + c", "c"), ("c", "1", "ab")]),
        (
            "abc + d",
            &[
                ("a", "bc + d", "d"),
                ("b", "ac + d", "d"),
                ("c", "ab + d", "d"),
                ("d", "1", "abc"),
            ],
        ),
    ];
    for (poly, rows) in cases {
        let f = folded(poly, &u);
        for &(x, a_text, b_text) in rows {
            let others: Vec<String> = vars(&f).into_iter().filter(|v| v != x).collect();
            let (a_expr, b_expr) = (parse(a_text, &u), parse(b_text, &u));
            for env in assignments(&others, &u) {
                let c = canonical_coefficients(&f, x, &env, &u).unwrap();
                let mut full = env.clone();
                full.insert(x.to_string(), u.empty());
                let want_a = eval(&a_expr, &full).unwrap();
                let want_b = eval(&b_expr, &full).unwrap();
                ensure(c.a == want_a && c.b == want_b, || {
                    format!("{poly}, {x}: got A={} B={}, want A={want_a} B={want_b}", c.a, c.b)
                })?;
            }
        }
    }
    Ok(())
}

fn example2_forward() -> Check {
    let s = load_scenario(&scenario("example2.json")).map_err(|e| e.to_string())?;
    let u = &s.universe;
    let graph = s.relationship_graph(s.seed).unwrap();
    let poly = graph_to_polynomial(&graph).unwrap();
    ensure(poly.to_string() == "a + bc", || format!("polynomial {poly}"))?;
    let got = forward_task(&fold_diagonal(&stratify(&poly).unwrap()), &s.influence_matrix().unwrap()).unwrap();
    let want = BTreeMap::from([
        ("a".to_string(), interval(u, "0", "1")),
        ("b".to_string(), point(u, "{alpha}")),
        ("c".to_string(), interval(u, "0", "{beta}")),
    ]);
    ensure(got == want, || format!("{got:?}"))
}

fn example3_forward() -> Check {
    for u in [UniversalSet::new(["open"]).unwrap(), u2()] {
        let f = folded("abc + d", &u);
        for d_value in all_elements(&u) {
            let mut m = InfluenceMatrix::new(u.clone(), ["a", "b", "c", "d"]);
            for from in ["a", "b", "c"] {
                for to in ["a", "b", "c", "d"] {
                    if from != to {
                        m.set(from, to, u.empty()).unwrap();
                    }
                }
                m.set("d", from, d_value.clone()).unwrap();
            }
            let got = forward_task(&f, &m).unwrap();
            for x in ["a", "b", "c"] {
                ensure(got[x].point() == Some(&d_value), || format!("d={d_value}: {x} -> {}", got[x]))?;
            }
            let full = DecisionResult::Interval {
                lower: u.empty(),
                upper: u.full(),
            };
            ensure(got["d"] == full, || format!("d={d_value}: d -> {}", got["d"]))?;
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_solve(&SolveArgs {
        config: scenario("example3.json"),
        task: Task::Forward,
        subject: None,
        target: None,
        seed: None,
        out_dir: dir.path().to_path_buf(),
    })
    .map_err(|e| e.to_string())?;
    ensure(out.code == EXIT_OK, || format!("exit {}", out.code))?;
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for x in ["a", "b", "c"] {
        let r = &doc["decisions"][x];
        ensure(r["result"] == "point" && r["lower"] == "1", || format!("{x}: {r}"))?;
    }
    Ok(())
}

/// Fixed points of `x = f(x)` for the controlled subject, by direct search.
fn fixed_points(poly: &Expr, controlled: &str, env: &Assignment, u: &UniversalSet) -> Vec<ActionSet> {
    all_elements(u)
        .into_iter()
        .filter(|x| {
            let mut full = env.clone();
            full.insert(controlled.to_string(), x.clone());
            &eval(poly, &full).unwrap() == x
        })
        .collect()
}

fn inverse_task_example() -> Check {
    let u = u2();
    let poly = parse("ab + c", &u);
    let target = u.parse_set("{alpha}").unwrap();
    let mut oracle = Vec::new();
    for b in all_elements(&u) {
        for c in all_elements(&u) {
            let env: Assignment = [("b".to_string(), b.clone()), ("c".to_string(), c.clone())].into();
            if fixed_points(&poly, "a", &env, &u) == vec![target.clone()] {
                oracle.push(env);
            }
        }
    }
    let got = inverse_task(&folded("ab + c", &u), "a", &target).unwrap();
    let key = |a: &Assignment| a.values().map(ActionSet::bits).collect::<Vec<_>>();
    let mut sorted_got = got.clone();
    sorted_got.sort_by_key(key);
    oracle.sort_by_key(key);
    ensure(sorted_got == oracle, || format!("inverse {got:?} vs oracle {oracle:?}"))?;
    let expected: Vec<Assignment> = [("0", "{alpha}"), ("{alpha}", "{alpha}")]
        .iter()
        .map(|(b, c)| [("b".to_string(), u.parse_set(b).unwrap()), ("c".to_string(), u.parse_set(c).unwrap())].into())
        .collect();
    ensure(sorted_got == expected, || format!("{sorted_got:?}"))
}

fn trace_spikes(omega: f64, carrier: f64, mags: [f64; 3]) -> usize {
    let pulses = pulse_triple(carrier, TRAIN_START, mags);
    let end = pulses.last().unwrap().time + TAIL;
    simulate(&NeuronParams::with_omega(omega), &pulses, end).unwrap().spikes.len()
}

fn neuron_selectivity() -> Check {
    let started = Instant::now();
    let carriers = [3.0 * PI / 2.0, 4.0 * PI / 3.0];
    let series = [[0.4; 3], [-0.4; 3], [0.1, 0.4, 0.6], [-0.1, -0.4, -0.6]];
    for mags in series {
        for &carrier in &carriers {
            for &omega in &carriers {
                let n = trace_spikes(omega, carrier, mags);
                let resonant = omega == carrier;
                ensure(resonant == (n > 0), || {
                    format!("{mags:?} on {carrier:.4} into {omega:.4}: {n} spikes")
                })?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < RUNTIME_LIMIT, || format!("took {elapsed:?}"))
}

fn codebook_detection() -> Check {
    let u = u2();
    let book = Codebook::default_for(&u);
    let carriers = [3.0 * PI / 2.0, 4.0 * PI / 3.0, 5.0 * PI / 3.0];
    let mut leaks = Vec::new();
    for (mags, kind) in book.entries() {
        for &carrier in &carriers {
            for &omega in &carriers {
                let n = trace_spikes(omega, carrier, *mags);
                if (omega == carrier) != (n > 0) {
                    leaks.push(format!("{} {mags:?} on {carrier:.4} -> {omega:.4}: {n} spikes", kind.label()));
                }
            }
        }
    }
    ensure(book.entries().len() == 6, || "default codebook size".into())?;
    ensure(leaks.is_empty(), || leaks.join("; "))
}

fn example1_end_to_end() -> Check {
    let s = load_scenario(&scenario("example1.json")).map_err(|e| e.to_string())?;
    let out = run_scenario(&s, s.seed).map_err(|e| e.to_string())?;
    let codes = [
        ("a", "b", 0),
        ("a", "c", 0),
        ("b", "a", 0),
        ("b", "c", 1),
        ("c", "a", 1),
        ("c", "b", 1),
    ];
    for unit in out.group.units() {
        for (from, to, bit) in codes {
            let seen = unit.knowledge.relationship_codes.get(&(from.to_string(), to.to_string()));
            let want = if bit == 1 { Relation::Alliance } else { Relation::Conflict };
            ensure(seen == Some(&want), || format!("unit {} saw {from}->{to} as {seen:?}", unit.id))?;
        }
    }
    let sent = out
        .messages()
        .iter()
        .filter(|m| matches!(m.symbol, Symbol::AllianceCode | Symbol::ConflictCode))
        .count();
    ensure(sent == 6, || format!("{sent} relationship codes sent"))?;
    let want = [
        ("a", "b", Relation::Conflict),
        ("a", "c", Relation::Conflict),
        ("b", "c", Relation::Alliance),
    ];
    for (a, b, r) in want {
        ensure(out.graph.relation(a, b) == Some(r), || format!("{a}-{b}: {:?}", out.graph.relation(a, b)))?;
    }
    ensure(out.round.polynomial.to_string() == "a + bc", || format!("polynomial {}", out.round.polynomial))
}

fn negotiation_statistics() -> Check {
    let units: Vec<String> = ["a", "b", "c"].iter().map(ToString::to_string).collect();
    let mut rng = rng_from_seed(STATS_SEED);
    let (mut draws, mut alliances) = (0usize, 0usize);
    while draws < PAIR_DRAWS {
        let t = draw_relationship_intents(&units, DEFAULT_P_ALLIANCE, &mut rng);
        draws += t.intents.len();
        alliances += t.intents.values().filter(|r| **r == Relation::Alliance).count();
    }
    let freq = alliances as f64 / draws as f64;
    ensure((freq - DEFAULT_P_ALLIANCE).abs() <= ALLIANCE_TOLERANCE, || {
        format!("alliance frequency {freq:.4} over {draws} draws")
    })
}

fn non_decomposability() -> Check {
    use Relation::{Alliance, Conflict};
    let path = RelationshipGraph::new(
        ["w", "x", "y", "z"],
        [
            ("w", "x", Alliance),
            ("x", "y", Alliance),
            ("y", "z", Alliance),
            ("w", "y", Conflict),
            ("w", "z", Conflict),
            ("x", "z", Conflict),
        ]
        .map(|(a, b, r)| (a.to_string(), b.to_string(), r)),
    )
    .unwrap();
    ensure(matches!(graph_to_polynomial(&path), Err(RgtError::NotDecomposable(_))), || {
        "alliance path decomposed".into()
    })?;
    for mask in 0..8u8 {
        let rel = |bit: u8| if mask & (1 << bit) != 0 { Alliance } else { Conflict };
        let g = RelationshipGraph::new(
            ["a", "b", "c"],
            [("a", "b", rel(0)), ("a", "c", rel(1)), ("b", "c", rel(2))].map(|(a, b, r)| (a.to_string(), b.to_string(), r)),
        )
        .unwrap();
        graph_to_polynomial(&g).map_err(|e| format!("labeling {mask:03b}: {e}"))?;
    }
    Ok(())
}

fn determinism() -> Check {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        cmd_run(&RunArgs {
            config: scenario("example3.json"),
            seed: Some(7),
            out_dir: d.path().to_path_buf(),
        })
        .map_err(|e| format!("{e:#}"))?;
    }
    for name in ["messages.csv", "decisions.json"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        ensure(!a.is_empty() && a == b, || format!("{name} differs between runs"))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("fold identity for ab+c and abc+d", fold_identity),
        ("canonical coefficients of ab+c and abc+d", canonical_forms),
        ("forward task, example 2", example2_forward),
        ("forward task, example 3", example3_forward),
        ("inverse task against brute force", inverse_task_example),
        ("neuron frequency selectivity", neuron_selectivity),
        ("codebook detection on every carrier", codebook_detection),
        ("example 1 negotiation end to end", example1_end_to_end),
        ("alliance frequency over 1e5 draws", negotiation_statistics),
        ("non-decomposable graphs", non_decomposability),
        ("byte-identical reruns", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
