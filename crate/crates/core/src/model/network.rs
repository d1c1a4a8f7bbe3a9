//! Networks of states connected by coupling and decay processes.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Photon continuum a decay emits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bath {
    /// Emission by qubit 1 (rate Γ1).
    B1,
    /// Emission by qubit 2 (rate Γ2).
    B2,
    /// Cavity leakage (rate κ).
    B3,
}

impl Bath {
    pub const ALL: [Bath; 3] = [Bath::B1, Bath::B2, Bath::B3];

    pub fn name(&self) -> &'static str {
        match self {
            Bath::B1 => "b1",
            Bath::B2 => "b2",
            Bath::B3 => "b3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Qubit 1 and cavity.
    G1,
    /// Qubit 2 and cavity.
    G2,
    /// Dipole coupling between the qubits.
    G12,
}

/// Qubit occupations and cavity Fock number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SystemState {
    pub qubit1_excited: bool,
    pub qubit2_excited: bool,
    pub photons: u8,
}

impl SystemState {
    pub const fn new(qubit1_excited: bool, qubit2_excited: bool, photons: u8) -> Self {
        Self {
            qubit1_excited,
            qubit2_excited,
            photons,
        }
    }

    pub fn excitations(&self) -> u32 {
        self.qubit1_excited as u32 + self.qubit2_excited as u32 + self.photons as u32
    }

    pub fn is_ground(&self) -> bool {
        self.excitations() == 0
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |e: bool| if e { 'e' } else { 'g' };
        write!(
            f,
            "{}1{}2,{}",
            q(self.qubit1_excited),
            q(self.qubit2_excited),
            self.photons
        )
    }
}

/// A network node: system state plus the multiset of photons emitted so far.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeLabel {
    pub system: SystemState,
    /// Emitted photons in emission order.
    pub emitted: Vec<Bath>,
    /// True when the system has no excitation left.
    pub terminal: bool,
}

impl NodeLabel {
    pub fn level(&self) -> Level {
        match self.emitted.len() {
            0 => Level::System,
            1 => Level::OnePhoton,
            _ => Level::TwoPhoton,
        }
    }

    pub fn excitations(&self) -> u32 {
        self.system.excitations() + self.emitted.len() as u32
    }

    fn key(&self) -> (SystemState, Vec<Bath>) {
        let mut photons = self.emitted.clone();
        photons.sort();
        (self.system, photons)
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.system)?;
        for b in &self.emitted {
            write!(f, "+{}", b.name())?;
        }
        Ok(())
    }
}

/// Number of photons already emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    System,
    OnePhoton,
    TwoPhoton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeKind {
    /// Coherent coupling with matrix element `factor·g`.
    Coupling { coupling: Coupling, factor: f64 },
    /// Emission into `bath` with amplitude rate `factor·√rate`.
    Decay { bath: Bath, factor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// Which physical system a network describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    /// Two qubits, qubit 1 excited.
    TwoQubitSingle,
    /// Two qubits, both excited.
    TwoQubitDouble,
    /// One qubit, excited, in a cavity holding one photon.
    JcmTwoExcitation,
    /// Two qubits in an empty cavity, qubit 1 excited.
    TcmSingle,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 4] = [
        NetworkKind::TwoQubitSingle,
        NetworkKind::TwoQubitDouble,
        NetworkKind::JcmTwoExcitation,
        NetworkKind::TcmSingle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NetworkKind::TwoQubitSingle => "two_qubit_1ex",
            NetworkKind::TwoQubitDouble => "two_qubit_2ex",
            NetworkKind::JcmTwoExcitation => "jcm_2ex",
            NetworkKind::TcmSingle => "tcm_1ex",
        }
    }

    fn initial(&self) -> SystemState {
        match self {
            NetworkKind::TwoQubitSingle | NetworkKind::TcmSingle => {
                SystemState::new(true, false, 0)
            }
            NetworkKind::TwoQubitDouble => SystemState::new(true, true, 0),
            NetworkKind::JcmTwoExcitation => SystemState::new(true, false, 1),
        }
    }

    fn couplings(&self) -> &'static [Coupling] {
        match self {
            NetworkKind::TwoQubitSingle | NetworkKind::TwoQubitDouble => &[Coupling::G12],
            NetworkKind::JcmTwoExcitation => &[Coupling::G1],
            NetworkKind::TcmSingle => &[Coupling::G1, Coupling::G2, Coupling::G12],
        }
    }

    fn baths(&self) -> &'static [Bath] {
        match self {
            NetworkKind::TwoQubitSingle | NetworkKind::TwoQubitDouble => &[Bath::B1, Bath::B2],
            NetworkKind::JcmTwoExcitation => &[Bath::B1, Bath::B3],
            NetworkKind::TcmSingle => &[Bath::B1, Bath::B2, Bath::B3],
        }
    }
}

/// States reachable from the initial state, with the processes linking them.
/// Node 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateNetwork {
    pub kind: NetworkKind,
    pub nodes: Vec<NodeLabel>,
    pub edges: Vec<Edge>,
}

impl StateNetwork {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn find(&self, system: SystemState, emitted: &[Bath]) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.system == system && n.emitted == emitted)
    }

    /// One line per node and edge; stable across runs.
    pub fn render(&self) -> String {
        let mut out = format!("network {}\n", self.kind.name());
        for (i, n) in self.nodes.iter().enumerate() {
            let flag = if n.terminal { " terminal" } else { "" };
            out.push_str(&format!("node {i} {n}{flag}\n"));
        }
        for e in &self.edges {
            let what = match e.kind {
                EdgeKind::Coupling { coupling, factor } => {
                    format!("coupling {coupling:?} x{factor}")
                }
                EdgeKind::Decay { bath, factor } => format!("decay {} x{factor}", bath.name()),
            };
            out.push_str(&format!("edge {} -> {} {what}\n", e.from, e.to));
        }
        out
    }
}

/// Transitions out of a system state: coupled partner states with their
/// matrix-element factor, and decays with the emitted bath.
fn couplings_from(s: SystemState, allowed: &[Coupling]) -> Vec<(SystemState, Coupling, f64)> {
    let mut out = Vec::new();
    for &c in allowed {
        match c {
            Coupling::G12 => {
                if s.qubit1_excited != s.qubit2_excited {
                    out.push((
                        SystemState::new(s.qubit2_excited, s.qubit1_excited, s.photons),
                        c,
                        1.0,
                    ));
                }
            }
            Coupling::G1 => {
                if s.qubit1_excited {
                    let n = s.photons + 1;
                    out.push((
                        SystemState::new(false, s.qubit2_excited, n),
                        c,
                        (n as f64).sqrt(),
                    ));
                } else if s.photons > 0 {
                    out.push((
                        SystemState::new(true, s.qubit2_excited, s.photons - 1),
                        c,
                        (s.photons as f64).sqrt(),
                    ));
                }
            }
            Coupling::G2 => {
                if s.qubit2_excited {
                    let n = s.photons + 1;
                    out.push((
                        SystemState::new(s.qubit1_excited, false, n),
                        c,
                        (n as f64).sqrt(),
                    ));
                } else if s.photons > 0 {
                    out.push((
                        SystemState::new(s.qubit1_excited, true, s.photons - 1),
                        c,
                        (s.photons as f64).sqrt(),
                    ));
                }
            }
        }
    }
    out
}

fn decays_from(s: SystemState, allowed: &[Bath]) -> Vec<(SystemState, Bath, f64)> {
    let mut out = Vec::new();
    for &b in allowed {
        match b {
            Bath::B1 if s.qubit1_excited => {
                out.push((SystemState::new(false, s.qubit2_excited, s.photons), b, 1.0))
            }
            Bath::B2 if s.qubit2_excited => {
                out.push((SystemState::new(s.qubit1_excited, false, s.photons), b, 1.0))
            }
            Bath::B3 if s.photons > 0 => out.push((
                SystemState::new(s.qubit1_excited, s.qubit2_excited, s.photons - 1),
                b,
                (s.photons as f64).sqrt(),
            )),
            _ => {}
        }
    }
    out
}

/// Builds the network of states reachable from the initial state of `kind`.
///
/// Nodes are discovered breadth first, so they come out grouped by the
/// number of emitted photons. Nodes holding the same photons in a different
/// order are distinct, since the order fixes which continuum mode each
/// amplitude refers to; the exception is the terminal level, where order is
/// irrelevant and nodes are merged.
pub fn build_network(kind: NetworkKind) -> StateNetwork {
    let mut nodes: Vec<NodeLabel> = Vec::new();
    let mut edges = Vec::new();
    let mut index: BTreeMap<(SystemState, Vec<Bath>), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();

    let mut intern = |label: NodeLabel, nodes: &mut Vec<NodeLabel>, queue: &mut VecDeque<usize>| {
        let key = if label.terminal {
            label.key()
        } else {
            (label.system, label.emitted.clone())
        };
        *index.entry(key).or_insert_with(|| {
            nodes.push(label);
            queue.push_back(nodes.len() - 1);
            nodes.len() - 1
        })
    };

    let start = NodeLabel {
        system: kind.initial(),
        emitted: Vec::new(),
        terminal: false,
    };
    intern(start, &mut nodes, &mut queue);

    while let Some(i) = queue.pop_front() {
        let node = nodes[i].clone();
        if node.terminal {
            continue;
        }
        for (s, coupling, factor) in couplings_from(node.system, kind.couplings()) {
            let label = NodeLabel {
                system: s,
                emitted: node.emitted.clone(),
                terminal: s.is_ground(),
            };
            let j = intern(label, &mut nodes, &mut queue);
            // each coupling is recorded once, from the lower index
            if i < j {
                edges.push(Edge {
                    from: i,
                    to: j,
                    kind: EdgeKind::Coupling { coupling, factor },
                });
            }
        }
        for (s, bath, factor) in decays_from(node.system, kind.baths()) {
            let mut emitted = node.emitted.clone();
            emitted.push(bath);
            let label = NodeLabel {
                system: s,
                emitted,
                terminal: s.is_ground(),
            };
            let j = intern(label, &mut nodes, &mut queue);
            edges.push(Edge {
                from: i,
                to: j,
                kind: EdgeKind::Decay { bath, factor },
            });
        }
    }
    StateNetwork { kind, nodes, edges }
}
