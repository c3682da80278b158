//! Scenario files.
//!
//! A scenario is JSON. [`ScenarioConfig`] is the literal file content and
//! round-trips through serde; [`Scenario`] is the validated form. Only one
//! of `relations`, `intents` and `draws` may be given; with none of them the
//! relationship intents are drawn from the seeded generator.
//!
//! ```json
//! {
//!   "universe": ["alpha", "beta"],
//!   "units": [{"id": "a"}, {"id": "b"}, {"id": "c", "omega": 5.235988}],
//!   "draws": {"a": {"b": 0.81, "c": 0.92}, "b": {"a": 0.63, "c": 0.12},
//!             "c": {"a": 0.09, "b": 0.27}},
//!   "influences": {"a": {"b": "{alpha}", "c": "0"}, "...": {}},
//!   "seed": 7
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{ActionSet, UniversalSet};
use crate::codec::{CodeEntry, Codebook, DEFAULT_EPSILON};
use crate::netsim::{
    self, draw_relationship_intents, intents_from_draws, rng_from_seed, Group, IntentTable, Message, NetError,
    RoundResult, DEFAULT_OMEGAS, DEFAULT_P_ALLIANCE,
};
use crate::rgt::{InfluenceMatrix, Relation, RelationshipGraph};

/// A validation failure, naming the offending field.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed scenario: {0}")]
    Syntax(String),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

pub type Table<T> = BTreeMap<String, BTreeMap<String, T>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationConfig {
    pub between: [String; 2],
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodebookConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub entries: Vec<CodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    /// Unit doing the planning; defaults to the first other unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planner: Option<String>,
    pub subject: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub traces: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub universe: Vec<String>,
    pub units: Vec<UnitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<RelationConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intents: Option<Table<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<Table<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub influences: Option<Table<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codebook: Option<CodebookConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_alliance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputConfig>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Where the relationship graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationSource {
    /// Symmetric labels; both directions send the same code.
    Graph(RelationshipGraph),
    /// Per-direction intents.
    Intents(BTreeMap<(String, String), Relation>),
    /// Raw uniform draws, compared against `p_alliance`.
    Draws(BTreeMap<(String, String), f64>),
    /// Draw intents from the seeded generator.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Control {
    pub planner: String,
    pub subject: String,
    pub target: ActionSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub universe: UniversalSet,
    /// (id, carrier) in file order.
    pub members: Vec<(String, f64)>,
    pub relations: RelationSource,
    pub influences: Option<BTreeMap<(String, String), ActionSet>>,
    pub codebook: Codebook,
    pub p_alliance: f64,
    pub seed: u64,
    pub control: Option<Control>,
    pub traces: bool,
}

impl Scenario {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self, ConfigError> {
        let universe = UniversalSet::new(cfg.universe.iter().cloned()).map_err(|e| invalid("universe", e))?;

        if cfg.units.len() < 2 {
            return Err(invalid("units", "at least two units are required"));
        }
        let mut members = Vec::new();
        for (i, u) in cfg.units.iter().enumerate() {
            if u.id.is_empty() || !u.id.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(invalid(format!("units[{i}].id"), format!("invalid id {:?}", u.id)));
            }
            if members.iter().any(|(id, _)| id == &u.id) {
                return Err(invalid(format!("units[{i}].id"), format!("duplicate id {:?}", u.id)));
            }
            let omega = match u.omega {
                Some(w) if w > 0.0 && w.is_finite() => w,
                Some(w) => return Err(invalid(format!("units[{i}].omega"), format!("must be positive, got {w}"))),
                None => *DEFAULT_OMEGAS
                    .get(i)
                    .ok_or_else(|| invalid(format!("units[{i}].omega"), "required beyond the fourth unit"))?,
            };
            members.push((u.id.clone(), omega));
        }
        let ids: Vec<String> = members.iter().map(|(id, _)| id.clone()).collect();

        let given = [cfg.relations.is_some(), cfg.intents.is_some(), cfg.draws.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(invalid("relations", "give only one of relations, intents and draws"));
        }
        let relations = if let Some(rels) = &cfg.relations {
            let mut pairs = Vec::new();
            for (i, r) in rels.iter().enumerate() {
                let [a, b] = &r.between;
                let field = format!("relations[{i}] ({a}-{b})");
                for s in [a, b] {
                    if !ids.contains(s) {
                        return Err(invalid(&field, format!("unknown unit {s:?}")));
                    }
                }
                let rel: Relation = r.relation.parse().map_err(|e| invalid(&field, e))?;
                pairs.push((a.clone(), b.clone(), rel));
            }
            RelationSource::Graph(RelationshipGraph::new(ids.iter().cloned(), pairs).map_err(|e| invalid("relations", e))?)
        } else if let Some(t) = &cfg.intents {
            let table = read_table(t, &ids, "intents", |s| s.parse::<Relation>())?;
            RelationSource::Intents(table)
        } else if let Some(t) = &cfg.draws {
            let table = read_table(t, &ids, "draws", |d: &f64| {
                if *d > 0.0 && *d < 1.0 {
                    Ok(*d)
                } else {
                    Err(format!("draw must lie in (0, 1), got {d}"))
                }
            })?;
            RelationSource::Draws(table)
        } else {
            RelationSource::Random
        };

        let influences = cfg
            .influences
            .as_ref()
            .map(|t| read_table(t, &ids, "influences", |s| universe.parse_set(s).map_err(|e| e.to_string())))
            .transpose()?;

        let codebook = match &cfg.codebook {
            None => Codebook::default_for(&universe),
            Some(cb) => Codebook::from_entries(&cb.entries, cb.epsilon.unwrap_or(DEFAULT_EPSILON), &universe)
                .map_err(|e| invalid("codebook", e))?,
        };

        let p_alliance = cfg.p_alliance.unwrap_or(DEFAULT_P_ALLIANCE);
        if !(0.0..=1.0).contains(&p_alliance) {
            return Err(invalid("p_alliance", format!("must lie in [0, 1], got {p_alliance}")));
        }

        let control = cfg
            .control
            .as_ref()
            .map(|c| -> Result<Control, ConfigError> {
                if !ids.contains(&c.subject) {
                    return Err(invalid("control.subject", format!("unknown unit {:?}", c.subject)));
                }
                let planner = match &c.planner {
                    Some(p) if ids.contains(p) => p.clone(),
                    Some(p) => return Err(invalid("control.planner", format!("unknown unit {p:?}"))),
                    None => ids.iter().find(|i| **i != c.subject).cloned().expect("two units"),
                };
                let target = universe.parse_set(&c.target).map_err(|e| invalid("control.target", e))?;
                Ok(Control {
                    planner,
                    subject: c.subject.clone(),
                    target,
                })
            })
            .transpose()?;

        Ok(Scenario {
            universe,
            members,
            relations,
            influences,
            codebook,
            p_alliance,
            seed: cfg.seed.unwrap_or(0),
            control,
            traces: cfg.outputs.as_ref().is_some_and(|o| o.traces),
        })
    }

    pub fn ids(&self) -> Vec<String> {
        self.members.iter().map(|(id, _)| id.clone()).collect()
    }

    /// Per-direction relationship intents (and the draws behind them, if
    /// any). `Random` sources draw from a generator seeded with `seed`.
    pub fn relationship_intents(&self, seed: u64) -> IntentTable {
        match &self.relations {
            RelationSource::Graph(g) => {
                let mut intents = BTreeMap::new();
                for (a, b, r) in g.pairs() {
                    intents.insert((a.to_string(), b.to_string()), r);
                    intents.insert((b.to_string(), a.to_string()), r);
                }
                IntentTable {
                    draws: BTreeMap::new(),
                    intents,
                }
            }
            RelationSource::Intents(t) => IntentTable {
                draws: BTreeMap::new(),
                intents: t.clone(),
            },
            RelationSource::Draws(d) => intents_from_draws(d.clone(), self.p_alliance),
            RelationSource::Random => {
                let mut rng = rng_from_seed(seed);
                draw_relationship_intents(&self.ids(), self.p_alliance, &mut rng)
            }
        }
    }

    /// The graph installed by the AND rule, without any channel simulation.
    pub fn relationship_graph(&self, seed: u64) -> Result<RelationshipGraph, ConfigError> {
        if let RelationSource::Graph(g) = &self.relations {
            return Ok(g.clone());
        }
        let intents = self.relationship_intents(seed).intents;
        let ids = self.ids();
        let mut pairs = Vec::new();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                let ab = intents[&(a.clone(), b.clone())];
                let ba = intents[&(b.clone(), a.clone())];
                pairs.push((a.clone(), b.clone(), netsim::and_rule(ab, ba)));
            }
        }
        RelationshipGraph::new(ids.iter().cloned(), pairs).map_err(|e| invalid("relations", e))
    }

    pub fn influence_matrix(&self) -> Result<InfluenceMatrix, ConfigError> {
        let cells = self
            .influences
            .as_ref()
            .ok_or_else(|| invalid("influences", "required"))?;
        let mut m = InfluenceMatrix::new(self.universe.clone(), self.ids());
        for ((from, to), v) in cells {
            m.set(from, to, v.clone())
                .map_err(|e| invalid(format!("influences.{from}.{to}"), e))?;
        }
        Ok(m)
    }
}

/// Reads a from → to table that must cover every ordered pair of distinct
/// units exactly.
fn read_table<T, U, E: ToString>(
    table: &Table<T>,
    ids: &[String],
    field: &str,
    parse: impl Fn(&T) -> Result<U, E>,
) -> Result<BTreeMap<(String, String), U>, ConfigError> {
    let mut out = BTreeMap::new();
    for (from, row) in table {
        if !ids.contains(from) {
            return Err(invalid(format!("{field}.{from}"), "unknown unit"));
        }
        for (to, v) in row {
            let f = format!("{field}.{from}.{to}");
            if !ids.contains(to) {
                return Err(invalid(f, "unknown unit"));
            }
            if from == to {
                return Err(invalid(f, "a unit does not influence or relate to itself"));
            }
            out.insert((from.clone(), to.clone()), parse(v).map_err(|e| invalid(&f, e))?);
        }
    }
    for from in ids {
        for to in ids {
            if from != to && !out.contains_key(&(from.clone(), to.clone())) {
                return Err(invalid(format!("{field}.{from}.{to}"), "missing"));
            }
        }
    }
    Ok(out)
}

/// Outcome of a full simulated round.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub seed: u64,
    pub intents: IntentTable,
    pub graph: RelationshipGraph,
    pub matrix: InfluenceMatrix,
    pub round: RoundResult,
    pub plan: Option<(Control, Option<crate::algebra::Assignment>)>,
    pub group: Group,
}

impl RunOutcome {
    pub fn messages(&self) -> &[Message] {
        self.group.messages()
    }
}

/// Negotiation → influence exchange → per-unit inference, all over the
/// simulated channel.
pub fn run_scenario(s: &Scenario, seed: u64) -> Result<RunOutcome, NetError> {
    let mut group = Group::new(s.universe.clone(), s.codebook.clone(), &s.members)?;
    let intents = s.relationship_intents(seed);
    let graph = group.install_relationships(&intents.intents)?;
    let influences = s.influences.as_ref().ok_or_else(|| NetError::MissingIntent {
        from: "*".into(),
        to: "*".into(),
    })?;
    let matrix = group.exchange_influences(influences)?;
    let round = group.rgt_round()?;
    let plan = match &s.control {
        Some(c) => Some((c.clone(), netsim::plan_influence(&c.planner, &graph, &c.subject, &c.target)?)),
        None => None,
    };
    Ok(RunOutcome {
        seed,
        intents,
        graph,
        matrix,
        round,
        plan,
        group,
    })
}
