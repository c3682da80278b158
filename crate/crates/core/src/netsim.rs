//! Shared-medium group simulation.
//!
//! Every unit listens to every carrier through its own resonator bank. A
//! transmission has two phases: the sender's ID-code on its own carrier,
//! then, [`PAYLOAD_DELAY`] after the ID spike, the payload on the
//! addressee's carrier. Every unit observes both phases, so all units end a
//! round with the same knowledge.
//!
//! Transmissions are serialized on a single clock. Each train is detected
//! by resonators starting at rest at the train's first pulse; a train's
//! listening window closes [`LISTEN_TAIL`] after its last pulse, and the
//! next ID-code starts when the previous payload window has closed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::distr::{Distribution, Open01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{ActionSet, Assignment, Expr, UniversalSet};
use crate::codec::{detect, expand, CodecError, Codebook, Detection, PulseTrain, Symbol, Window};
use crate::neuron::NeuronParams;
use crate::rgt::{
    fold_graph, forward_task, inverse_task, DecisionResult, InfluenceMatrix, Relation, RelationshipGraph,
    RgtError,
};

/// Delay between the ID spike and the payload train.
pub const PAYLOAD_DELAY: f64 = 0.5;
/// How long a train is listened to after its last pulse.
pub const LISTEN_TAIL: f64 = 1.5;
pub const DEFAULT_P_ALLIANCE: f64 = 0.61;

/// Carriers assigned to the first four units when none are configured.
pub const DEFAULT_OMEGAS: [f64; 4] = [3.0 * PI / 2.0, 4.0 * PI / 3.0, 5.0 * PI / 3.0, 2.0 * PI];

/// The generator behind every random draw.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("unit {0:?} cannot send to itself")]
    SelfSend(String),
    #[error("unknown unit {0:?}")]
    UnknownUnit(String),
    #[error("duplicate unit {0:?}")]
    DuplicateUnit(String),
    #[error("units {0:?} and {1:?} share a carrier frequency")]
    SharedFrequency(String, String),
    #[error("a group needs at least two units")]
    TooFewUnits,
    #[error("{phase} train from {sender:?} to {addressee:?} raised no spike on channel {channel:?}")]
    DeliveryFailed {
        phase: &'static str,
        sender: String,
        addressee: String,
        channel: String,
    },
    #[error("carrier of {carrier:?} is not selective: a {code} code leaks into channel {channel:?}")]
    NotSelective {
        carrier: String,
        channel: String,
        code: &'static str,
    },
    #[error("missing intent from {from:?} to {to:?}")]
    MissingIntent { from: String, to: String },
    #[error("units disagree after the round ({0:?} differs from {1:?})")]
    Disagreement(String, String),
    #[error("p_alliance must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Rgt(#[from] RgtError),
}

pub type Result<T> = std::result::Result<T, NetError>;

/// What a unit has learned from the medium.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Knowledge {
    /// Relationship codes seen, keyed by (sender, addressee).
    pub relationship_codes: BTreeMap<(String, String), Relation>,
    /// Influences seen, keyed by (sender, addressee).
    pub influences: BTreeMap<(String, String), ActionSet>,
    /// Every (sender, addressee, decoded symbol) observed.
    pub log: Vec<(String, String, Symbol)>,
}

impl Knowledge {
    /// Canonical serialized form (stable key order).
    pub fn serialize(&self) -> String {
        let rel: Vec<_> = self
            .relationship_codes
            .iter()
            .map(|((f, t), r)| json!([f, t, r.to_string()]))
            .collect();
        let inf: Vec<_> = self
            .influences
            .iter()
            .map(|((f, t), s)| json!([f, t, s.to_string()]))
            .collect();
        let log: Vec<_> = self
            .log
            .iter()
            .map(|(f, t, s)| json!([f, t, s.to_string()]))
            .collect();
        json!({ "relationship_codes": rel, "influences": inf, "log": log }).to_string()
    }

    /// The graph installed by the AND rule over the observed codes.
    pub fn relationship_graph(&self, members: &[String]) -> Result<RelationshipGraph> {
        let mut pairs = Vec::new();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let ab = self.code(a, b)?;
                let ba = self.code(b, a)?;
                pairs.push((a.clone(), b.clone(), and_rule(ab, ba)));
            }
        }
        Ok(RelationshipGraph::new(members.iter().cloned(), pairs)?)
    }

    fn code(&self, from: &str, to: &str) -> Result<Relation> {
        self.relationship_codes
            .get(&(from.to_string(), to.to_string()))
            .copied()
            .ok_or_else(|| NetError::MissingIntent {
                from: from.into(),
                to: to.into(),
            })
    }

    pub fn influence_matrix(&self, universe: &UniversalSet, members: &[String]) -> Result<InfluenceMatrix> {
        let mut m = InfluenceMatrix::new(universe.clone(), members.iter().cloned());
        for ((from, to), v) in &self.influences {
            m.set(from, to, v.clone())?;
        }
        for from in members {
            for to in members {
                if from != to {
                    m.get(from, to)?;
                }
            }
        }
        Ok(m)
    }
}

/// Alliance only when both directions propose it.
pub fn and_rule(a_to_b: Relation, b_to_a: Relation) -> Relation {
    if a_to_b == Relation::Alliance && b_to_a == Relation::Alliance {
        Relation::Alliance
    } else {
        Relation::Conflict
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unit {
    pub id: String,
    pub own_omega: f64,
    /// One resonator per group member, keyed by member id.
    pub bank: BTreeMap<String, NeuronParams>,
    pub relationship_intents: BTreeMap<String, Relation>,
    pub influence_intents: BTreeMap<String, ActionSet>,
    pub knowledge: Knowledge,
    /// Payloads whose carrier was this unit's own channel.
    pub inbox: Vec<(String, Symbol)>,
}

/// A completed two-phase transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub sender: String,
    pub addressee: String,
    pub symbol: Symbol,
    pub decoded: Symbol,
    pub id_train: PulseTrain,
    pub payload_train: PulseTrain,
    /// Spike time of the ID-code on the sender's channel.
    pub id_phase_time: f64,
    /// Start of the payload train.
    pub payload_time: f64,
    /// Channels other than the carrier that spiked during the payload.
    pub crosstalk: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Medium {
    pub log: Vec<PulseTrain>,
    pub clock: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegotiationParams {
    pub p_alliance: f64,
    pub seed: u64,
}

impl NegotiationParams {
    pub fn new(p_alliance: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_alliance) {
            return Err(NetError::BadProbability(p_alliance));
        }
        Ok(Self { p_alliance, seed })
    }
}

/// Raw uniform draws and the intents they imply, keyed by (from, to).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntentTable {
    pub draws: BTreeMap<(String, String), f64>,
    pub intents: BTreeMap<(String, String), Relation>,
}

/// A draw above `p_alliance` means conflict.
pub fn intent_from_draw(draw: f64, p_alliance: f64) -> Relation {
    if draw > p_alliance {
        Relation::Conflict
    } else {
        Relation::Alliance
    }
}

pub fn intents_from_draws(draws: BTreeMap<(String, String), f64>, p_alliance: f64) -> IntentTable {
    let intents = draws
        .iter()
        .map(|(k, &d)| (k.clone(), intent_from_draw(d, p_alliance)))
        .collect();
    IntentTable { draws, intents }
}

/// One uniform draw in (0, 1) per ordered pair, sender-major in
/// lexicographic order.
pub fn draw_relationship_intents(units: &[String], p_alliance: f64, rng: &mut SimRng) -> IntentTable {
    let mut sorted = units.to_vec();
    sorted.sort();
    let mut draws = BTreeMap::new();
    for from in &sorted {
        for to in &sorted {
            if from != to {
                let d: f64 = Open01.sample(rng);
                draws.insert((from.clone(), to.clone()), d);
            }
        }
    }
    intents_from_draws(draws, p_alliance)
}

/// A queued transmission request.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub time: f64,
    pub sender: String,
    pub addressee: String,
    pub symbol: Symbol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    universe: UniversalSet,
    codebook: Codebook,
    units: Vec<Unit>,
    medium: Medium,
    messages: Vec<Message>,
}

impl Group {
    /// Builds the group and runs the carrier selectivity self-test.
    pub fn new(universe: UniversalSet, codebook: Codebook, members: &[(String, f64)]) -> Result<Self> {
        let group = Self::new_unchecked(universe, codebook, members)?;
        group.selectivity_self_test()?;
        Ok(group)
    }

    fn new_unchecked(universe: UniversalSet, codebook: Codebook, members: &[(String, f64)]) -> Result<Self> {
        if members.len() < 2 {
            return Err(NetError::TooFewUnits);
        }
        let mut sorted = members.to_vec();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(NetError::DuplicateUnit(w[0].0.clone()));
            }
        }
        for (i, (a, wa)) in sorted.iter().enumerate() {
            for (b, wb) in &sorted[i + 1..] {
                if crate::codec::same_frequency(*wa, *wb) {
                    return Err(NetError::SharedFrequency(a.clone(), b.clone()));
                }
            }
        }
        let bank: BTreeMap<String, NeuronParams> = sorted
            .iter()
            .map(|(id, w)| (id.clone(), NeuronParams::with_omega(*w)))
            .collect();
        for p in bank.values() {
            p.validate().map_err(CodecError::from)?;
        }
        let units = sorted
            .iter()
            .map(|(id, w)| Unit {
                id: id.clone(),
                own_omega: *w,
                bank: bank.clone(),
                relationship_intents: BTreeMap::new(),
                influence_intents: BTreeMap::new(),
                knowledge: Knowledge::default(),
                inbox: Vec::new(),
            })
            .collect();
        Ok(Self {
            universe,
            codebook,
            units,
            medium: Medium::default(),
            messages: Vec::new(),
        })
    }

    /// Both relationship tuples (±0.4) on every carrier must fire that
    /// carrier's resonator and no other.
    pub fn selectivity_self_test(&self) -> Result<()> {
        let bank = &self.units[0].bank;
        for (carrier, params) in bank {
            for (sym, code) in [(Symbol::AllianceCode, "alliance"), (Symbol::ConflictCode, "conflict")] {
                let train = self.codebook.encode(&sym, params.omega, 0.0, carrier)?;
                let hits = detect(bank, &expand(&train), listen_window(&train))?;
                if !hits.iter().any(|d| &d.channel == carrier) {
                    return Err(NetError::NotSelective {
                        carrier: carrier.clone(),
                        channel: carrier.clone(),
                        code,
                    });
                }
                if let Some(d) = hits.iter().find(|d| &d.channel != carrier) {
                    return Err(NetError::NotSelective {
                        carrier: carrier.clone(),
                        channel: d.channel.clone(),
                        code,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn universe(&self) -> &UniversalSet {
        &self.universe
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn unit(&self, id: &str) -> Result<&Unit> {
        self.units
            .iter()
            .find(|u| u.id == id)
            .ok_or_else(|| NetError::UnknownUnit(id.to_string()))
    }

    fn unit_mut(&mut self, id: &str) -> Result<&mut Unit> {
        self.units
            .iter_mut()
            .find(|u| u.id == id)
            .ok_or_else(|| NetError::UnknownUnit(id.to_string()))
    }

    pub fn member_ids(&self) -> Vec<String> {
        self.units.iter().map(|u| u.id.clone()).collect()
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    /// Two-phase addressed transmission starting at the medium clock.
    pub fn send(&mut self, from: &str, to: &str, sym: &Symbol) -> Result<Message> {
        if from == to {
            return Err(NetError::SelfSend(from.to_string()));
        }
        let from_omega = self.unit(from)?.own_omega;
        let to_omega = self.unit(to)?.own_omega;

        // phase 1: announce the sender
        let id_train = self
            .codebook
            .encode(&Symbol::IdCode, from_omega, self.medium.clock, from)?;
        let id_hits = self.listen(&id_train)?;
        let id_time = first_spike(&id_hits, from).ok_or_else(|| NetError::DeliveryFailed {
            phase: "ID",
            sender: from.to_string(),
            addressee: to.to_string(),
            channel: from.to_string(),
        })?;
        self.medium.log.push(id_train.clone());

        // phase 2: payload on the addressee's carrier
        let payload_time = id_time + PAYLOAD_DELAY;
        let payload_train = self.codebook.encode(sym, to_omega, payload_time, from)?;
        let hits = self.listen(&payload_train)?;
        if first_spike(&hits, to).is_none() {
            return Err(NetError::DeliveryFailed {
                phase: "payload",
                sender: from.to_string(),
                addressee: to.to_string(),
                channel: to.to_string(),
            });
        }
        self.medium.log.push(payload_train.clone());
        let mut crosstalk: Vec<String> = hits
            .iter()
            .filter(|d| d.channel != to)
            .map(|d| d.channel.clone())
            .collect();
        crosstalk.dedup();

        let decoded = self.codebook.decode(&payload_train, from_omega)?;
        for unit in &mut self.units {
            unit.knowledge
                .log
                .push((from.to_string(), to.to_string(), decoded.clone()));
            let key = (from.to_string(), to.to_string());
            match &decoded {
                Symbol::AllianceCode => {
                    unit.knowledge.relationship_codes.insert(key, Relation::Alliance);
                }
                Symbol::ConflictCode => {
                    unit.knowledge.relationship_codes.insert(key, Relation::Conflict);
                }
                Symbol::AltCode(s) => {
                    unit.knowledge.influences.insert(key, s.clone());
                }
                Symbol::IdCode => {}
            }
            if unit.id == to {
                unit.inbox.push((from.to_string(), decoded.clone()));
            }
        }
        self.medium.clock = listen_window(&payload_train).end;

        let msg = Message {
            sender: from.to_string(),
            addressee: to.to_string(),
            symbol: sym.clone(),
            decoded,
            id_train,
            payload_train,
            id_phase_time: id_time,
            payload_time,
            crosstalk,
        };
        self.messages.push(msg.clone());
        Ok(msg)
    }

    /// Runs every unit's bank over the train. All banks are tuned alike, so
    /// the detections must agree; the union is returned.
    fn listen(&self, train: &PulseTrain) -> Result<Vec<Detection>> {
        let window = listen_window(train);
        let pulses = expand(train);
        let mut all: Vec<Detection> = Vec::new();
        for unit in &self.units {
            for d in detect(&unit.bank, &pulses, window)? {
                if !all.contains(&d) {
                    all.push(d);
                }
            }
        }
        all.sort_by(|a, b| a.time.total_cmp(&b.time).then_with(|| a.channel.cmp(&b.channel)));
        Ok(all)
    }

    /// Serves queued requests in (time, sender, addressee) order; each
    /// starts no earlier than its request time.
    pub fn transmit(&mut self, mut queue: Vec<Request>) -> Result<Vec<Message>> {
        queue.sort_by(|a, b| {
            a.time
                .total_cmp(&b.time)
                .then_with(|| a.sender.cmp(&b.sender))
                .then_with(|| a.addressee.cmp(&b.addressee))
        });
        let mut out = Vec::with_capacity(queue.len());
        for r in queue {
            if r.time > self.medium.clock {
                self.medium.clock = r.time;
            }
            out.push(self.send(&r.sender, &r.addressee, &r.symbol)?);
        }
        Ok(out)
    }

    /// Transmits every relationship intent as an alliance or conflict code
    /// and returns the graph every unit installs by the AND rule.
    pub fn install_relationships(&mut self, intents: &BTreeMap<(String, String), Relation>) -> Result<RelationshipGraph> {
        let ids = self.member_ids();
        let now = self.medium.clock;
        let mut queue = Vec::new();
        for from in &ids {
            for to in &ids {
                if from == to {
                    continue;
                }
                let rel = intents
                    .get(&(from.clone(), to.clone()))
                    .copied()
                    .ok_or_else(|| NetError::MissingIntent {
                        from: from.clone(),
                        to: to.clone(),
                    })?;
                self.unit_mut(from)?.relationship_intents.insert(to.clone(), rel);
                let symbol = match rel {
                    Relation::Alliance => Symbol::AllianceCode,
                    Relation::Conflict => Symbol::ConflictCode,
                };
                queue.push(Request {
                    time: now,
                    sender: from.clone(),
                    addressee: to.clone(),
                    symbol,
                });
            }
        }
        self.transmit(queue)?;
        self.agreed(|u| u.knowledge.relationship_graph(&ids))
    }

    /// Transmits every influence intent as an alternative code and returns
    /// the matrix every unit assembles.
    pub fn exchange_influences(&mut self, intents: &BTreeMap<(String, String), ActionSet>) -> Result<InfluenceMatrix> {
        let ids = self.member_ids();
        let now = self.medium.clock;
        let mut queue = Vec::new();
        for from in &ids {
            for to in &ids {
                if from == to {
                    continue;
                }
                let value = intents
                    .get(&(from.clone(), to.clone()))
                    .cloned()
                    .ok_or_else(|| NetError::MissingIntent {
                        from: from.clone(),
                        to: to.clone(),
                    })?;
                self.unit_mut(from)?.influence_intents.insert(to.clone(), value.clone());
                queue.push(Request {
                    time: now,
                    sender: from.clone(),
                    addressee: to.clone(),
                    symbol: Symbol::AltCode(value),
                });
            }
        }
        self.transmit(queue)?;
        let universe = self.universe.clone();
        self.agreed(|u| u.knowledge.influence_matrix(&universe, &ids))
    }

    /// Every unit solves the forward task from its own knowledge.
    pub fn rgt_round(&self) -> Result<RoundResult> {
        let ids = self.member_ids();
        let universe = self.universe.clone();
        self.agreed(|u| {
            let graph = u.knowledge.relationship_graph(&ids)?;
            let matrix = u.knowledge.influence_matrix(&universe, &ids)?;
            rgt_inference(&graph, &matrix)
        })
    }

    /// Evaluates `f` at every unit and checks they all agree.
    fn agreed<T: PartialEq>(&self, f: impl Fn(&Unit) -> Result<T>) -> Result<T> {
        let mut first: Option<(T, &str)> = None;
        for u in &self.units {
            let v = f(u)?;
            match &first {
                None => first = Some((v, &u.id)),
                Some((w, id)) if *w != v => return Err(NetError::Disagreement(id.to_string(), u.id.clone())),
                Some(_) => {}
            }
        }
        Ok(first.expect("group has units").0)
    }
}

fn listen_window(train: &PulseTrain) -> Window {
    Window {
        start: train.start_time,
        end: train.end_time() + LISTEN_TAIL,
    }
}

fn first_spike(hits: &[Detection], channel: &str) -> Option<f64> {
    hits.iter().find(|d| d.channel == channel).map(|d| d.time)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub polynomial: Expr,
    pub folded: Expr,
    pub decisions: BTreeMap<String, DecisionResult>,
}

/// Graph → polynomial → fold → forward task.
pub fn rgt_inference(graph: &RelationshipGraph, matrix: &InfluenceMatrix) -> Result<RoundResult> {
    let (polynomial, folded) = fold_graph(graph)?;
    let decisions = forward_task(&folded, matrix)?;
    Ok(RoundResult {
        polynomial,
        folded,
        decisions,
    })
}

/// Joint influence that pins `controlled` to `target`, chosen from all
/// solutions by comparing coordinates in subject order, preferring the
/// larger set (higher bitmask) at the first difference. `None` when no
/// influence achieves it.
pub fn plan_influence(
    unit: &str,
    graph: &RelationshipGraph,
    controlled: &str,
    target: &ActionSet,
) -> Result<Option<Assignment>> {
    for s in [unit, controlled] {
        if !graph.subjects().iter().any(|x| x == s) {
            return Err(NetError::UnknownUnit(s.to_string()));
        }
    }
    let (_, folded) = fold_graph(graph)?;
    let solutions = inverse_task(&folded, controlled, target)?;
    Ok(solutions.into_iter().min_by(|x, y| {
        let kx: Vec<u32> = x.values().map(|s| u32::MAX - s.bits()).collect();
        let ky: Vec<u32> = y.values().map(|s| u32::MAX - s.bits()).collect();
        kx.cmp(&ky)
    }))
}
