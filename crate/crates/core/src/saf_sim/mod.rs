//! Store-and-forward transmission of constant-weight codewords over
//! random layered DAGs, with adversarial corruption and erasure.
//!
//! The source maps each constituent index of a codeword to a nonzero element
//! of F_q and sends the resulting `k`-symbol packet. Every node forwards the
//! first `k` distinct nonzero symbols it sees on its incoming edges, or fails.
//! The sink pads with zeros, maps back and decodes.

mod topology;

use std::collections::BTreeSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cwcode::{Codeword, CodeError, ConstantWeightCode, DecodeOutcome, ReceivedSet};
use crate::gf_poly::{is_prime, next_prime_above};
use crate::ideal_lattice::{ConstituentPool, PoolError};

pub use topology::{NetworkTopology, TopologyConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("topology: {0}")]
    Topology(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("symbol map: {0}")]
    SymbolMap(String),
    #[error("constituent index {index} outside the symbol map (size {size})")]
    IndexOutsideMap { index: usize, size: usize },
    #[error("code has n = {n} but the symbol map covers {size} constituents")]
    MapMismatch { n: usize, size: usize },
    #[error("code has n = {n} but the pool holds {pool} constituents")]
    PoolMismatch { n: usize, pool: usize },
    #[error("message index {index} out of range for a code of size {size}")]
    MessageOutOfRange { index: usize, size: usize },
    #[error("edge ({0},{1}) is not in the topology")]
    UnknownEdge(usize, usize),
    #[error("invalid substitution {from} -> {to} over F_{q}")]
    InvalidSubstitution { from: u64, to: u64, q: u64 },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pool(#[from] PoolError),
}

/// Injective map from constituent indices to nonzero elements of F_q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolMap {
    q: u64,
    table: Vec<u64>,
}

/// Result of inverting a received symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inverse {
    Zero,
    Index(usize),
    Invalid,
}

impl SymbolMap {
    pub fn new(q: u64, table: Vec<u64>) -> Result<Self, SimError> {
        if !is_prime(q) {
            return Err(SimError::SymbolMap(format!("{q} is not prime")));
        }
        let mut seen = BTreeSet::new();
        for &x in &table {
            if x == 0 || x >= q {
                return Err(SimError::SymbolMap(format!("{x} is not a nonzero element of F_{q}")));
            }
            if !seen.insert(x) {
                return Err(SimError::SymbolMap(format!("{x} is used twice")));
            }
        }
        Ok(SymbolMap { q, table })
    }

    /// `i -> i + 1` over the smallest prime field with `q > n`.
    pub fn default_for(n: usize) -> Self {
        let q = next_prime_above(n as u64);
        SymbolMap {
            q,
            table: (1..=n as u64).collect(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn apply(&self, index: usize) -> Result<u64, SimError> {
        self.table.get(index).copied().ok_or(SimError::IndexOutsideMap {
            index,
            size: self.table.len(),
        })
    }

    pub fn inverse(&self, x: u64) -> Inverse {
        if x == 0 {
            return Inverse::Zero;
        }
        match self.table.iter().position(|&y| y == x) {
            Some(i) => Inverse::Index(i),
            None => Inverse::Invalid,
        }
    }

    /// Nonzero field elements outside the image.
    pub fn invalid_symbols(&self) -> Vec<u64> {
        (1..self.q).filter(|x| !self.table.contains(x)).collect()
    }
}

/// Symbols carried on one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Packet(pub Vec<u64>);

impl Packet {
    pub fn symbols(&self) -> &[u64] {
        &self.0
    }
}

pub fn source_encode(codeword: &Codeword, map: &SymbolMap) -> Result<Packet, SimError> {
    codeword
        .indices()
        .iter()
        .map(|&i| map.apply(i))
        .collect::<Result<_, _>>()
        .map(Packet)
}

/// First `limit` distinct nonzero symbols in scan order.
fn first_distinct(incoming: &[Packet], limit: usize) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(limit);
    for &x in incoming.iter().flat_map(|p| p.0.iter()) {
        if out.len() == limit {
            break;
        }
        if x != 0 && seen.insert(x) {
            out.push(x);
        }
    }
    out
}

/// Forwards the first `k` distinct nonzero symbols, or `None` (node failure).
pub fn node_process(incoming: &[Packet], k: usize) -> Option<Packet> {
    let out = first_distinct(incoming, k);
    (out.len() == k).then_some(Packet(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinkRecovery {
    pub received: ReceivedSet,
    /// Nonzero symbols outside the map image, dropped as erasures.
    pub invalid_symbols: usize,
}

pub fn sink_recover(incoming: &[Packet], k: usize, map: &SymbolMap) -> Result<SinkRecovery, SimError> {
    let mut symbols = first_distinct(incoming, k);
    symbols.resize(k, 0);
    let mut indices = Vec::new();
    let mut invalid = 0;
    for x in symbols {
        match map.inverse(x) {
            Inverse::Zero => {}
            Inverse::Index(i) => indices.push(i),
            Inverse::Invalid => invalid += 1,
        }
    }
    Ok(SinkRecovery {
        received: ReceivedSet::new(indices, map.len())?,
        invalid_symbols: invalid,
    })
}

/// Corruption applied to packets as they cross edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Adversary {
    Clean,
    /// Each symbol on each edge is replaced with probability `prob` by a
    /// different nonzero element.
    RandomSubstitution { prob: f64, seed: u64 },
    /// On the listed edges, every symbol equal to `from` becomes `to`.
    TargetedSubstitution {
        edges: Vec<(usize, usize)>,
        substitutions: Vec<(u64, u64)>,
    },
    /// Drops the packets on the listed edges, and any other packet with
    /// probability `prob`.
    EdgeErasure {
        #[serde(default)]
        prob: f64,
        #[serde(default)]
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        seed: u64,
    },
}

impl Adversary {
    pub fn validate(&self, topology: &NetworkTopology, q: u64) -> Result<(), SimError> {
        let check_edges = |edges: &[(usize, usize)]| {
            edges.iter().try_for_each(|&(s, d)| {
                if topology.edges().contains(&(s, d)) {
                    Ok(())
                } else {
                    Err(SimError::UnknownEdge(s, d))
                }
            })
        };
        match self {
            Adversary::Clean => Ok(()),
            Adversary::RandomSubstitution { prob, .. } => check_prob(*prob),
            Adversary::TargetedSubstitution {
                edges,
                substitutions,
            } => {
                check_edges(edges)?;
                for &(from, to) in substitutions {
                    if from == to || to == 0 || to >= q || from == 0 || from >= q {
                        return Err(SimError::InvalidSubstitution { from, to, q });
                    }
                }
                Ok(())
            }
            Adversary::EdgeErasure { prob, edges, .. } => {
                check_prob(*prob)?;
                check_edges(edges)
            }
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Adversary::RandomSubstitution { seed, .. } | Adversary::EdgeErasure { seed, .. } => *seed,
            _ => 0,
        }
    }

    /// Modifies or drops the packet crossing `edge`.
    pub fn apply(&self, edge: (usize, usize), packet: Packet, q: u64, rng: &mut ChaCha8Rng) -> Option<Packet> {
        match self {
            Adversary::Clean => Some(packet),
            Adversary::RandomSubstitution { prob, .. } => {
                let mut p = packet;
                for x in p.0.iter_mut() {
                    if *prob > 0.0 && rng.gen_bool(*prob) && q > 2 {
                        // Uniform over F_q^x without the current value.
                        let mut y = rng.gen_range(1..q - 1);
                        if y >= *x {
                            y += 1;
                        }
                        *x = y;
                    }
                }
                Some(p)
            }
            Adversary::TargetedSubstitution {
                edges,
                substitutions,
            } => {
                let mut p = packet;
                if edges.contains(&edge) {
                    for x in p.0.iter_mut() {
                        if let Some(&(_, to)) = substitutions.iter().find(|&&(from, _)| from == *x) {
                            *x = to;
                        }
                    }
                }
                Some(p)
            }
            Adversary::EdgeErasure { prob, edges, .. } => {
                let hit = edges.contains(&edge) || (*prob > 0.0 && rng.gen_bool(*prob));
                (!hit).then_some(packet)
            }
        }
    }
}

fn check_prob(p: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SimError::BadProbability(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Success,
    DetectedError { ties: Vec<Codeword> },
    DecodeWrong { decoded: Codeword },
    NodeFailure,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::DetectedError { .. } => "detected_error",
            Outcome::DecodeWrong { .. } => "decode_wrong",
            Outcome::NodeFailure => "node_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub transmitted: Codeword,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub received: Option<ReceivedSet>,
    /// Received indices outside the transmitted codeword.
    pub t: usize,
    /// `k` minus the number of received indices.
    pub e: usize,
    pub invalid_symbols: usize,
    /// Whether the decoded codeword composes to the transmitted element.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_ok: Option<bool>,
}

impl TrialResult {
    pub fn decoded_ok(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// Everything a trial needs besides the topology and the message.
#[derive(Debug, Clone, Copy)]
pub struct Setup<'a> {
    pub code: &'a ConstantWeightCode,
    pub pool: Option<&'a ConstituentPool>,
    pub map: &'a SymbolMap,
    pub adversary: &'a Adversary,
}

impl Setup<'_> {
    pub fn check(&self) -> Result<(), SimError> {
        let n = self.code.n();
        if self.map.len() != n {
            return Err(SimError::MapMismatch {
                n,
                size: self.map.len(),
            });
        }
        if let Some(pool) = self.pool {
            if pool.len() != n {
                return Err(SimError::PoolMismatch { n, pool: pool.len() });
            }
        }
        if self.code.is_empty() {
            return Err(SimError::Code(CodeError::EmptyCode));
        }
        Ok(())
    }
}

/// Sends codeword `message` of the code through the topology once.
pub fn run_trial(
    topology: &NetworkTopology,
    setup: &Setup,
    message: usize,
    seed: u64,
) -> Result<TrialResult, SimError> {
    setup.check()?;
    setup.adversary.validate(topology, setup.map.q())?;
    let code = setup.code;
    let transmitted = code
        .codewords()
        .get(message)
        .ok_or(SimError::MessageOutOfRange {
            index: message,
            size: code.len(),
        })?
        .clone();
    let k = code.k();
    let q = setup.map.q();
    let mut rng = ChaCha8Rng::seed_from_u64(setup.adversary.seed());
    rng.set_stream(seed);

    let m = topology.node_count();
    let mut outputs: Vec<Option<Packet>> = vec![None; m];
    outputs[0] = Some(source_encode(&transmitted, setup.map)?);
    let mut at_sink = Vec::new();
    let edges = topology.edges();
    let mut i = 0;
    for v in 1..m {
        let mut incoming = Vec::new();
        while i < edges.len() && edges[i].1 == v {
            let (s, d) = edges[i];
            if let Some(p) = outputs[s].clone() {
                if let Some(p) = setup.adversary.apply((s, d), p, q, &mut rng) {
                    incoming.push(p);
                }
            }
            i += 1;
        }
        if v == topology.sink() {
            at_sink = incoming;
        } else if !incoming.is_empty() {
            outputs[v] = node_process(&incoming, k);
        }
    }

    if at_sink.is_empty() {
        return Ok(TrialResult {
            transmitted,
            outcome: Outcome::NodeFailure,
            received: None,
            t: 0,
            e: k,
            invalid_symbols: 0,
            element_ok: None,
        });
    }
    let rec = sink_recover(&at_sink, k, setup.map)?;
    let r = rec.received.indices();
    let t = r.iter().filter(|i| transmitted.indices().binary_search(i).is_err()).count();
    let e = k - r.len();
    let (outcome, decoded) = match code.decode(&rec.received)? {
        DecodeOutcome::Decoded(c) if c == transmitted => (Outcome::Success, Some(c)),
        DecodeOutcome::Decoded(c) => (Outcome::DecodeWrong { decoded: c.clone() }, Some(c)),
        DecodeOutcome::Ambiguous(ties) => (Outcome::DetectedError { ties }, None),
    };
    let element_ok = match (setup.pool, decoded) {
        (Some(pool), Some(c)) => Some(pool.compose(c.indices())? == pool.compose(transmitted.indices())?),
        _ => None,
    };
    Ok(TrialResult {
        transmitted,
        outcome,
        received: Some(rec.received),
        t,
        e,
        invalid_symbols: rec.invalid_symbols,
        element_ok,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub trials: usize,
    pub success: usize,
    pub detected_error: usize,
    pub decode_wrong: usize,
    pub node_failure: usize,
}

impl ExperimentStats {
    pub fn from_results(results: &[TrialResult]) -> Self {
        let mut s = ExperimentStats {
            trials: results.len(),
            ..Default::default()
        };
        for r in results {
            match r.outcome {
                Outcome::Success => s.success += 1,
                Outcome::DetectedError { .. } => s.detected_error += 1,
                Outcome::DecodeWrong { .. } => s.decode_wrong += 1,
                Outcome::NodeFailure => s.node_failure += 1,
            }
        }
        s
    }

    pub fn rate(&self, count: usize) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            count as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub topology: TopologyConfig,
    pub trials: usize,
    /// Seeds message choice and per-trial adversary streams.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub stats: ExperimentStats,
    pub results: Vec<TrialResult>,
}

/// Runs `trials` independent trials. Trial `i` uses a fresh random DAG seeded
/// from `(topology.seed, i)` and a message drawn from `(seed, i)`.
pub fn run_experiment(exp: &Experiment, setup: &Setup) -> Result<ExperimentReport, SimError> {
    setup.check()?;
    let derive = |base: u64, i: usize| {
        let mut r = ChaCha8Rng::seed_from_u64(base);
        r.set_stream(i as u64);
        r.next_u64()
    };
    let results = (0..exp.trials)
        .into_par_iter()
        .map(|i| {
            let topo = NetworkTopology::random(&TopologyConfig {
                seed: derive(exp.topology.seed, i),
                ..exp.topology.clone()
            })?;
            let message = (derive(exp.seed, i) % setup.code.len() as u64) as usize;
            run_trial(&topo, setup, message, derive(exp.seed ^ 0x5A5A_5A5A, i))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport {
        stats: ExperimentStats::from_results(&results),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwcode::correction_guaranteed;

    fn cw(ix: &[usize]) -> Codeword {
        Codeword::new(ix.to_vec(), 7).unwrap()
    }

    fn single_edge() -> NetworkTopology {
        NetworkTopology::new(vec![1, 1], vec![(0, 1)], 1).unwrap()
    }

    #[test]
    fn symbol_map() {
        let m = SymbolMap::default_for(7);
        assert_eq!(m.q(), 11);
        assert_eq!(m.apply(6).unwrap(), 7);
        assert_eq!(m.inverse(0), Inverse::Zero);
        assert_eq!(m.inverse(3), Inverse::Index(2));
        assert_eq!(m.inverse(9), Inverse::Invalid);
        assert_eq!(m.invalid_symbols(), vec![8, 9, 10]);
        assert!(SymbolMap::new(10, vec![1]).is_err());
        assert!(SymbolMap::new(7, vec![1, 1]).is_err());
        assert!(SymbolMap::new(7, vec![0]).is_err());
        assert!(SymbolMap::new(7, vec![7]).is_err());
        assert!(SymbolMap::new(7, vec![3, 1]).is_ok());
    }

    #[test]
    fn encode() {
        let m = SymbolMap::default_for(10);
        assert_eq!(m.q(), 11);
        let c = Codeword::new(vec![0, 1, 2, 5], 10).unwrap();
        assert_eq!(source_encode(&c, &m).unwrap(), Packet(vec![1, 2, 3, 6]));
        let c = Codeword::new(vec![3], 10).unwrap();
        assert_eq!(source_encode(&c, &m).unwrap(), Packet(vec![4]));
        let c = Codeword::new(vec![3, 12], 13).unwrap();
        assert!(matches!(source_encode(&c, &m), Err(SimError::IndexOutsideMap { .. })));
    }

    #[test]
    fn node_dedup() {
        let a = Packet(vec![3, 5, 2, 7]);
        assert_eq!(node_process(&[a.clone(), a.clone()], 4), Some(a.clone()));
        assert_eq!(node_process(&[a.clone(), Packet(vec![1, 5, 9, 4])], 4), Some(a.clone()));
        assert_eq!(node_process(&[Packet(vec![3, 3, 3, 3])], 4), None);
        assert_eq!(node_process(&[Packet(vec![3, 0, 5]), Packet(vec![0, 6])], 3), Some(Packet(vec![3, 5, 6])));
    }

    #[test]
    fn node_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let k = rng.gen_range(1..6);
            let inc: Vec<Packet> = (0..rng.gen_range(1..4))
                .map(|_| Packet((0..k).map(|_| rng.gen_range(0..9)).collect()))
                .collect();
            if let Some(x) = node_process(&inc, k) {
                let reps = rng.gen_range(1..5);
                assert_eq!(node_process(&vec![x.clone(); reps], k), Some(x));
            }
        }
    }

    #[test]
    fn sink_cases() {
        let m = SymbolMap::default_for(7);
        // Transmitted {p2,p4,p6,p7} -> symbols (2,4,6,7).
        let sent = Packet(vec![2, 4, 6, 7]);
        let r = sink_recover(&[sent], 4, &m).unwrap();
        assert_eq!(r.received.indices(), &[1, 3, 5, 6]);
        let r = sink_recover(&[Packet(vec![2, 4, 7])], 4, &m).unwrap();
        assert_eq!(r.received.indices(), &[1, 3, 6]);
        let r = sink_recover(&[Packet(vec![2, 4, 5, 7])], 4, &m).unwrap();
        assert_eq!(r.received.indices(), &[1, 3, 4, 6]);
        let r = sink_recover(&[Packet(vec![2, 4, 9, 7])], 4, &m).unwrap();
        assert_eq!(r.received.indices(), &[1, 3, 6]);
        assert_eq!(r.invalid_symbols, 1);
    }

    #[test]
    fn targeted_substitution_and_erasure() {
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(7);
        let pool = ConstituentPool::example_binary();
        let msg = code.codewords().iter().position(|c| c == &cw(&[1, 3, 5, 6])).unwrap();
        let topo = single_edge();

        let sub = Adversary::TargetedSubstitution {
            edges: vec![(0, 1)],
            substitutions: vec![(6, 5)],
        };
        let setup = Setup { code: &code, pool: Some(&pool), map: &map, adversary: &sub };
        let r = run_trial(&topo, &setup, msg, 0).unwrap();
        assert_eq!(r.received.as_ref().unwrap().indices(), &[1, 3, 4, 6]);
        match &r.outcome {
            Outcome::DetectedError { ties } => {
                assert_eq!(ties, &vec![cw(&[0, 1, 3, 4]), cw(&[1, 2, 4, 6]), cw(&[1, 3, 5, 6])])
            }
            o => panic!("{o:?}"),
        }
        assert_eq!((r.t, r.e), (1, 0));

        let era = Adversary::TargetedSubstitution {
            edges: vec![(0, 1)],
            substitutions: vec![(6, 9)],
        };
        let setup = Setup { adversary: &era, ..setup };
        let r = run_trial(&topo, &setup, msg, 0).unwrap();
        assert_eq!(r.received.as_ref().unwrap().indices(), &[1, 3, 6]);
        assert_eq!(r.outcome, Outcome::Success);
        assert_eq!(r.element_ok, Some(true));
        assert_eq!((r.t, r.e), (0, 1));
    }

    #[test]
    fn edge_erasure_two_paths() {
        let topo = NetworkTopology::new(vec![1, 2, 1], vec![(0, 1), (0, 2), (1, 3), (2, 3)], 2).unwrap();
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(7);
        let one = Adversary::EdgeErasure { prob: 0.0, edges: vec![(0, 1)], seed: 0 };
        let setup = Setup { code: &code, pool: None, map: &map, adversary: &one };
        assert_eq!(run_trial(&topo, &setup, 2, 0).unwrap().outcome, Outcome::Success);
        let both = Adversary::EdgeErasure { prob: 0.0, edges: vec![(0, 1), (2, 3)], seed: 0 };
        let setup = Setup { adversary: &both, ..setup };
        assert_eq!(run_trial(&topo, &setup, 2, 0).unwrap().outcome, Outcome::NodeFailure);
        let bad = Adversary::EdgeErasure { prob: 0.0, edges: vec![(0, 3)], seed: 0 };
        let setup = Setup { adversary: &bad, ..setup };
        assert_eq!(run_trial(&topo, &setup, 2, 0).unwrap_err(), SimError::UnknownEdge(0, 3));
    }

    #[test]
    fn random_substitution_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let adv = Adversary::RandomSubstitution { prob: 0.0, seed: 4 };
        let p = Packet(vec![1, 2, 3, 4]);
        assert_eq!(adv.apply((0, 1), p.clone(), 11, &mut rng), Some(p.clone()));
        let adv = Adversary::RandomSubstitution { prob: 1.0, seed: 4 };
        let out = adv.apply((0, 1), p.clone(), 11, &mut rng).unwrap();
        for (a, b) in out.0.iter().zip(&p.0) {
            assert!(a != b && *a != 0 && *a < 11);
        }
    }

    #[test]
    fn clean_experiment_all_success() {
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(7);
        let pool = ConstituentPool::example_binary();
        let setup = Setup { code: &code, pool: Some(&pool), map: &map, adversary: &Adversary::Clean };
        let exp = Experiment {
            topology: TopologyConfig { layers: 4, width: 3, max_indegree: 3, density: 0.5, seed: 1 },
            trials: 200,
            seed: 9,
        };
        let rep = run_experiment(&exp, &setup).unwrap();
        assert_eq!(rep.stats.success, 200);
        assert!(rep.results.iter().all(|r| r.element_ok == Some(true)));
        assert_eq!(run_experiment(&exp, &setup).unwrap(), rep);
    }

    #[test]
    fn random_adversary_is_deterministic() {
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(7);
        let adv = Adversary::RandomSubstitution { prob: 0.1, seed: 77 };
        let setup = Setup { code: &code, pool: None, map: &map, adversary: &adv };
        let exp = Experiment {
            topology: TopologyConfig { layers: 5, width: 3, max_indegree: 2, density: 0.6, seed: 3 },
            trials: 300,
            seed: 5,
        };
        let a = run_experiment(&exp, &setup).unwrap();
        assert_eq!(a, run_experiment(&exp, &setup).unwrap());
        assert!(a.stats.success < 300);
        let s = &a.stats;
        assert_eq!(s.success + s.detected_error + s.decode_wrong + s.node_failure, 300);
    }

    // Any received set that the guarantee covers decodes correctly.
    #[test]
    fn correctable_patterns_succeed() {
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(7);
        let topo = single_edge();
        let invalid = map.invalid_symbols();
        for (msg, c) in code.codewords().iter().enumerate() {
            let sent = source_encode(c, &map).unwrap();
            for &from in &sent.0 {
                let mut targets: Vec<u64> = (1..map.q()).filter(|&x| x != from).collect();
                targets.push(invalid[0]);
                for to in targets {
                    let adv = Adversary::TargetedSubstitution { edges: vec![(0, 1)], substitutions: vec![(from, to)] };
                    let setup = Setup { code: &code, pool: None, map: &map, adversary: &adv };
                    let r = run_trial(&topo, &setup, msg, 0).unwrap();
                    if correction_guaranteed(4, r.t, r.e) {
                        assert_eq!(r.outcome, Outcome::Success);
                    }
                    assert!(!matches!(r.outcome, Outcome::DecodeWrong { .. }));
                }
            }
        }
    }

    #[test]
    fn setup_mismatch() {
        let code = ConstantWeightCode::example_7_4_4();
        let map = SymbolMap::default_for(6);
        let setup = Setup { code: &code, pool: None, map: &map, adversary: &Adversary::Clean };
        assert!(matches!(run_trial(&single_edge(), &setup, 0, 0), Err(SimError::MapMismatch { .. })));
        let map = SymbolMap::default_for(7);
        let setup = Setup { map: &map, ..setup };
        assert!(matches!(run_trial(&single_edge(), &setup, 7, 0), Err(SimError::MessageOutOfRange { .. })));
    }

    #[test]
    fn adversary_json() {
        let a: Adversary = serde_json::from_str(
            r#"{"model":"targeted_substitution","edges":[[0,1]],"substitutions":[[6,5]]}"#,
        )
        .unwrap();
        assert_eq!(
            a,
            Adversary::TargetedSubstitution { edges: vec![(0, 1)], substitutions: vec![(6, 5)] }
        );
        let e: Adversary = serde_json::from_str(r#"{"model":"edge_erasure","prob":0.25}"#).unwrap();
        assert_eq!(e, Adversary::EdgeErasure { prob: 0.25, edges: vec![], seed: 0 });
        assert_eq!(serde_json::to_string(&Adversary::Clean).unwrap(), r#"{"model":"clean"}"#);
    }
}
