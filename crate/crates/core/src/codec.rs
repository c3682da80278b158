//! Pulse codes: the codebook between three-pulse magnitude series and
//! protocol symbols, pulse-train assembly on a carrier, and detection by a
//! bank of resonators sharing one medium.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ActionSet, UniversalSet};
use crate::neuron::{simulate, NeuronError, NeuronParams, Pulse};

pub const DEFAULT_EPSILON: f64 = 0.04;

pub type Magnitudes = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("no code for {0}")]
    UnknownSymbol(String),
    #[error("magnitudes {0:?} match no code")]
    UnknownCode(Magnitudes),
    #[error("codes {0:?} and {1:?} are not separable at epsilon {2}")]
    Ambiguous(Magnitudes, Magnitudes, f64),
    #[error("symbol {0} is assigned to more than one code")]
    DuplicateSymbol(String),
    #[error("invalid codebook entry: {0}")]
    BadEntry(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Neuron(#[from] NeuronError),
}

pub type Result<T> = std::result::Result<T, CodecError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// Sender announcement, sent on the sender's own carrier.
    IdCode,
    /// Alliance proposal, same pulses as the ID-code on another carrier.
    AllianceCode,
    ConflictCode,
    /// An alternative (element of the algebra) used as an influence.
    AltCode(ActionSet),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::IdCode => f.write_str("id"),
            Symbol::AllianceCode => f.write_str("alliance"),
            Symbol::ConflictCode => f.write_str("conflict"),
            Symbol::AltCode(s) => write!(f, "alt:{s}"),
        }
    }
}

/// What a codebook tuple stands for. ID and alliance codes share a tuple and
/// are told apart by the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeKind {
    IdOrAlliance,
    Conflict,
    Alt(ActionSet),
}

impl CodeKind {
    fn of(sym: &Symbol) -> CodeKind {
        match sym {
            Symbol::IdCode | Symbol::AllianceCode => CodeKind::IdOrAlliance,
            Symbol::ConflictCode => CodeKind::Conflict,
            Symbol::AltCode(s) => CodeKind::Alt(s.clone()),
        }
    }

    /// File form: `id`, `conflict` or `alt:<set literal>`.
    pub fn label(&self) -> String {
        match self {
            CodeKind::IdOrAlliance => "id".into(),
            CodeKind::Conflict => "conflict".into(),
            CodeKind::Alt(s) => format!("alt:{s}"),
        }
    }

    pub fn parse(label: &str, universe: &UniversalSet) -> Result<CodeKind> {
        match label {
            "id" => Ok(CodeKind::IdOrAlliance),
            "conflict" => Ok(CodeKind::Conflict),
            other => match other.strip_prefix("alt:") {
                Some(set) => Ok(CodeKind::Alt(universe.parse_set(set)?)),
                None => Err(CodecError::BadEntry(format!(
                    "symbol must be \"id\", \"conflict\" or \"alt:<set>\", got {other:?}"
                ))),
            },
        }
    }
}

/// One codebook entry as stored in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeEntry {
    pub magnitudes: Magnitudes,
    pub symbol: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    entries: Vec<(Magnitudes, CodeKind)>,
    epsilon: f64,
}

fn linf(a: &Magnitudes, b: &Magnitudes) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

impl Codebook {
    /// Rejects entry sets whose ε-neighbourhoods (componentwise) overlap, or
    /// that give a symbol two codes.
    pub fn new(entries: Vec<(Magnitudes, CodeKind)>, epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(CodecError::BadEntry("epsilon must be positive".into()));
        }
        for (i, (m1, k1)) in entries.iter().enumerate() {
            if m1.iter().any(|m| !m.is_finite()) {
                return Err(CodecError::BadEntry(format!("non-finite magnitude in {m1:?}")));
            }
            for (m2, k2) in &entries[i + 1..] {
                if linf(m1, m2) <= 2.0 * epsilon {
                    return Err(CodecError::Ambiguous(*m1, *m2, epsilon));
                }
                if k1 == k2 {
                    return Err(CodecError::DuplicateSymbol(k1.label()));
                }
            }
        }
        Ok(Self { entries, epsilon })
    }

    /// The six standard codes. Singleton alternatives are only defined for a
    /// two-action universe (first action, then second).
    pub fn default_for(universe: &UniversalSet) -> Self {
        let mut entries = vec![
            ([0.4, 0.4, 0.4], CodeKind::IdOrAlliance),
            ([-0.4, -0.4, -0.4], CodeKind::Conflict),
            ([0.2, 0.3, 0.7], CodeKind::Alt(universe.full())),
            ([0.7, 0.3, 0.2], CodeKind::Alt(universe.empty())),
        ];
        if universe.len() == 2 {
            entries.push(([0.5, 0.2, 0.5], CodeKind::Alt(universe.from_bits(0b01).unwrap())));
            entries.push(([0.3, 0.6, 0.3], CodeKind::Alt(universe.from_bits(0b10).unwrap())));
        }
        Self::new(entries, DEFAULT_EPSILON).expect("standard codes are separable")
    }

    pub fn from_entries(entries: &[CodeEntry], epsilon: f64, universe: &UniversalSet) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|e| Ok((e.magnitudes, CodeKind::parse(&e.symbol, universe)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed, epsilon)
    }

    pub fn to_entries(&self) -> Vec<CodeEntry> {
        self.entries
            .iter()
            .map(|(m, k)| CodeEntry {
                magnitudes: *m,
                symbol: k.label(),
            })
            .collect()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn entries(&self) -> &[(Magnitudes, CodeKind)] {
        &self.entries
    }

    /// The magnitudes that carry `sym`.
    pub fn magnitudes(&self, sym: &Symbol) -> Result<Magnitudes> {
        let kind = CodeKind::of(sym);
        self.entries
            .iter()
            .find(|(_, k)| *k == kind)
            .map(|(m, _)| *m)
            .ok_or_else(|| CodecError::UnknownSymbol(sym.to_string()))
    }

    pub fn encode(&self, sym: &Symbol, carrier_omega: f64, start_time: f64, sender: &str) -> Result<PulseTrain> {
        Ok(PulseTrain {
            carrier_omega,
            magnitudes: self.magnitudes(sym)?,
            start_time,
            sender: sender.to_string(),
        })
    }

    /// Nearest code within ε componentwise. The ID/alliance tuple decodes
    /// to [`Symbol::IdCode`] when the carrier is the sender's own frequency.
    pub fn decode(&self, train: &PulseTrain, sender_omega: f64) -> Result<Symbol> {
        let (_, kind) = self
            .entries
            .iter()
            .map(|(m, k)| (linf(m, &train.magnitudes), k))
            .filter(|(d, _)| *d <= self.epsilon)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or(CodecError::UnknownCode(train.magnitudes))?;
        Ok(match kind {
            CodeKind::IdOrAlliance if same_frequency(train.carrier_omega, sender_omega) => Symbol::IdCode,
            CodeKind::IdOrAlliance => Symbol::AllianceCode,
            CodeKind::Conflict => Symbol::ConflictCode,
            CodeKind::Alt(s) => Symbol::AltCode(s.clone()),
        })
    }
}

pub fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

/// Three pulses one carrier period apart.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrain {
    pub carrier_omega: f64,
    pub magnitudes: Magnitudes,
    pub start_time: f64,
    pub sender: String,
}

impl PulseTrain {
    pub fn period(&self) -> f64 {
        2.0 * PI / self.carrier_omega
    }

    pub fn end_time(&self) -> f64 {
        self.start_time + 2.0 * self.period()
    }
}

pub fn expand(train: &PulseTrain) -> Vec<Pulse> {
    let period = train.period();
    train
        .magnitudes
        .iter()
        .enumerate()
        .map(|(i, &m)| Pulse::new(train.start_time + i as f64 * period, m))
        .collect()
}

/// Observation window, absolute times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub channel: String,
    pub time: f64,
}

/// Feeds `pulses` to every resonator of the bank, each starting at rest at
/// `window.start`, and reports every spike inside the window ordered by
/// time, then channel.
pub fn detect(bank: &BTreeMap<String, NeuronParams>, pulses: &[Pulse], window: Window) -> Result<Vec<Detection>> {
    let local: Vec<Pulse> = pulses
        .iter()
        .filter(|p| p.time >= window.start && p.time <= window.end)
        .map(|p| Pulse::new(p.time - window.start, p.magnitude))
        .collect();
    let mut out = Vec::new();
    if local.is_empty() {
        return Ok(out);
    }
    for (channel, params) in bank {
        let trace = simulate(params, &local, window.end - window.start)?;
        out.extend(trace.spikes.iter().map(|&t| Detection {
            channel: channel.clone(),
            time: window.start + t,
        }));
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time).then_with(|| a.channel.cmp(&b.channel)));
    Ok(out)
}
