//! Gate-level intermediate representation.
//!
//! A [`Netlist`] is a combinational DAG of single-output primitive gates over
//! single-bit nets. Every net is driven either by one primary-input bit or by
//! exactly one gate, so the net count is always `input bits + gate count`.
//!
//! Netlists are assembled with a [`NetlistBuilder`], which can only append
//! gates over nets that already exist; the result is acyclic by construction.
//! Arbitrary (possibly broken) netlists can also be described as raw
//! [`NetlistParts`], e.g. when read back from JSON, and are checked by
//! [`NetlistParts::validate`] before being frozen into a [`Netlist`].
//!
//! Multi-output arithmetic cells (adders, compressors, muxes) are not IR
//! primitives. They are recorded as [`Cell`] annotations grouping the gates a
//! cell builder emitted, which block-level timing and cost reports consume.

mod json;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::FORMAT_VERSION;

/// Primitive gate kinds. Wider fan-in is always composed from these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "AND2")]
    And2,
    #[serde(rename = "OR2")]
    Or2,
    #[serde(rename = "XOR2")]
    Xor2,
    #[serde(rename = "NAND2")]
    Nand2,
    #[serde(rename = "NOR2")]
    Nor2,
    #[serde(rename = "XNOR2")]
    Xnor2,
    #[serde(rename = "NOT")]
    Not,
    /// Inputs are `[d0, d1, sel]`; output is `sel ? d1 : d0`.
    #[serde(rename = "MUX2")]
    Mux2,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And2,
        GateKind::Or2,
        GateKind::Xor2,
        GateKind::Nand2,
        GateKind::Nor2,
        GateKind::Xnor2,
        GateKind::Not,
        GateKind::Mux2,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Mux2 => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And2 => "AND2",
            GateKind::Or2 => "OR2",
            GateKind::Xor2 => "XOR2",
            GateKind::Nand2 => "NAND2",
            GateKind::Nor2 => "NOR2",
            GateKind::Xnor2 => "XNOR2",
            GateKind::Not => "NOT",
            GateKind::Mux2 => "MUX2",
        }
    }

    /// Evaluates 64 independent lanes at once, one per bit of each word.
    pub fn eval_word(self, inputs: &[u64]) -> u64 {
        match self {
            GateKind::And2 => inputs[0] & inputs[1],
            GateKind::Or2 => inputs[0] | inputs[1],
            GateKind::Xor2 => inputs[0] ^ inputs[1],
            GateKind::Nand2 => !(inputs[0] & inputs[1]),
            GateKind::Nor2 => !(inputs[0] | inputs[1]),
            GateKind::Xnor2 => !(inputs[0] ^ inputs[1]),
            GateKind::Not => !inputs[0],
            GateKind::Mux2 => (inputs[0] & !inputs[2]) | (inputs[1] & inputs[2]),
        }
    }

    pub fn eval(self, inputs: &[bool]) -> bool {
        let mut words = [0u64; 3];
        for (w, &b) in words.iter_mut().zip(inputs) {
            *w = b as u64;
        }
        self.eval_word(&words[..inputs.len()]) & 1 == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = NetlistError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| NetlistError::UnknownGateKind(s.to_string()))
    }
}

/// Identifier of a single-bit signal. Ids are dense indices in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NetId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GateId(pub u32);

impl GateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    /// Block label, e.g. `"Reduction S1"`.
    pub tag: String,
}

/// A named bit vector; bit 0 is the LSB.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub bits: Vec<NetId>,
}

impl Port {
    pub fn width(&self) -> usize {
        self.bits.len()
    }
}

/// Arithmetic building blocks that cell builders annotate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    /// One partial-product gate.
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "HA")]
    HalfAdder,
    #[serde(rename = "FA")]
    FullAdder,
    /// 5-3 compressor built from two chained full adders.
    #[serde(rename = "CFA")]
    Cfa,
    #[serde(rename = "MUX")]
    Mux,
}

impl CellKind {
    pub fn name(self) -> &'static str {
        match self {
            CellKind::And => "AND",
            CellKind::HalfAdder => "HA",
            CellKind::FullAdder => "FA",
            CellKind::Cfa => "CFA",
            CellKind::Mux => "MUX",
        }
    }
}

/// Groups the gates one cell builder emitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub kind: CellKind,
    pub gates: Vec<GateId>,
    /// Select net of a mux cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<NetId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    Input { port: usize, bit: usize },
    Gate(GateId),
}

#[derive(Debug, Error)]
pub enum NetlistError {
    #[error("net {0} does not exist")]
    UnknownNet(NetId),
    #[error("{kind} takes {expected} inputs, got {found}")]
    Arity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("unknown gate kind `{0}`")]
    UnknownGateKind(String),
    #[error("port `{0}` is declared twice")]
    DuplicatePort(String),
    #[error("no port named `{0}`")]
    UnknownPort(String),
    #[error("cell builders cannot be nested across different cells")]
    NestedCell,
    #[error("invalid netlist:\n{0}")]
    Invalid(ValidationReport),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = NetlistError> = std::result::Result<T, E>;

/// A single structural rule violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    GateIdMismatch { index: usize, id: GateId },
    UnknownNet { gate: GateId, net: NetId },
    UnknownPortNet { port: String, bit: usize, net: NetId },
    Arity { gate: GateId, kind: GateKind, found: usize },
    MultipleDrivers { net: NetId, drivers: Vec<String> },
    FloatingInput { gate: GateId, net: NetId },
    UndrivenOutput { port: String, bit: usize, net: NetId },
    Cycle { gates: Vec<GateId> },
    BadCell { cell: usize, gate: GateId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GateIdMismatch { index, id } => {
                write!(f, "gate at index {index} has id {id}")
            }
            Violation::UnknownNet { gate, net } => {
                write!(f, "gate {gate} references undeclared net {net}")
            }
            Violation::UnknownPortNet { port, bit, net } => {
                write!(f, "port {port}[{bit}] references undeclared net {net}")
            }
            Violation::Arity { gate, kind, found } => write!(
                f,
                "gate {gate} ({kind}) has {found} inputs, expected {}",
                kind.arity()
            ),
            Violation::MultipleDrivers { net, drivers } => {
                write!(f, "net {net} has multiple drivers: {}", drivers.join(", "))
            }
            Violation::FloatingInput { gate, net } => {
                write!(f, "gate {gate} reads undriven net {net}")
            }
            Violation::UndrivenOutput { port, bit, net } => {
                write!(f, "output {port}[{bit}] is bound to undriven net {net}")
            }
            Violation::Cycle { gates } => {
                let ids: Vec<String> = gates.iter().map(|g| g.to_string()).collect();
                write!(f, "combinational cycle through {}", ids.join(", "))
            }
            Violation::BadCell { cell, gate } => {
                write!(f, "cell {cell} lists unknown or already claimed gate {gate}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Unchecked netlist contents, as read from a document or handed over by a builder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetlistParts {
    pub ports_in: Vec<Port>,
    pub ports_out: Vec<Port>,
    /// Net names, indexed by [`NetId`].
    pub nets: Vec<String>,
    pub gates: Vec<Gate>,
    pub cells: Vec<Cell>,
}

struct Analysis {
    drivers: Vec<Option<Driver>>,
    order: Vec<GateId>,
    fanout: Vec<Vec<GateId>>,
}

impl NetlistParts {
    /// Checks every structural rule and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        self.analyze().0
    }

    fn analyze(&self) -> (ValidationReport, Analysis) {
        let mut violations = Vec::new();
        let net_count = self.nets.len();
        let known = |n: NetId| n.index() < net_count;

        let mut drivers: Vec<Vec<Driver>> = vec![Vec::new(); net_count];
        for (p, port) in self.ports_in.iter().enumerate() {
            for (bit, &net) in port.bits.iter().enumerate() {
                if known(net) {
                    drivers[net.index()].push(Driver::Input { port: p, bit });
                } else {
                    violations.push(Violation::UnknownPortNet {
                        port: port.name.clone(),
                        bit,
                        net,
                    });
                }
            }
        }
        for (i, gate) in self.gates.iter().enumerate() {
            if gate.id.index() != i {
                violations.push(Violation::GateIdMismatch { index: i, id: gate.id });
            }
            if gate.inputs.len() != gate.kind.arity() {
                violations.push(Violation::Arity {
                    gate: gate.id,
                    kind: gate.kind,
                    found: gate.inputs.len(),
                });
            }
            for &net in gate.inputs.iter().chain(std::iter::once(&gate.output)) {
                if !known(net) {
                    violations.push(Violation::UnknownNet { gate: gate.id, net });
                }
            }
            if known(gate.output) {
                drivers[gate.output.index()].push(Driver::Gate(GateId(i as u32)));
            }
        }
        for (n, ds) in drivers.iter().enumerate() {
            if ds.len() > 1 {
                let names = ds
                    .iter()
                    .map(|d| match *d {
                        Driver::Input { port, bit } => {
                            format!("input {}[{bit}]", self.ports_in[port].name)
                        }
                        Driver::Gate(g) => format!("gate {g}"),
                    })
                    .collect();
                violations.push(Violation::MultipleDrivers {
                    net: NetId(n as u32),
                    drivers: names,
                });
            }
        }
        let drivers: Vec<Option<Driver>> = drivers.into_iter().map(|d| d.first().copied()).collect();

        for gate in &self.gates {
            for &net in &gate.inputs {
                if known(net) && drivers[net.index()].is_none() {
                    violations.push(Violation::FloatingInput { gate: gate.id, net });
                }
            }
        }
        for port in &self.ports_out {
            for (bit, &net) in port.bits.iter().enumerate() {
                if !known(net) {
                    violations.push(Violation::UnknownPortNet {
                        port: port.name.clone(),
                        bit,
                        net,
                    });
                } else if drivers[net.index()].is_none() {
                    violations.push(Violation::UndrivenOutput {
                        port: port.name.clone(),
                        bit,
                        net,
                    });
                }
            }
        }

        let mut claimed = vec![false; self.gates.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for &g in &cell.gates {
                match claimed.get_mut(g.index()) {
                    Some(seen) if !*seen => *seen = true,
                    _ => violations.push(Violation::BadCell { cell: c, gate: g }),
                }
            }
        }

        // Kahn's algorithm, always releasing the lowest ready gate id so the
        // order is a pure function of the gate list.
        let mut fanout: Vec<Vec<GateId>> = vec![Vec::new(); net_count];
        let mut pending = vec![0usize; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            for &net in &gate.inputs {
                if let Some(Some(Driver::Gate(_))) = drivers.get(net.index()) {
                    pending[i] += 1;
                }
                if known(net) && fanout[net.index()].last() != Some(&GateId(i as u32)) {
                    fanout[net.index()].push(GateId(i as u32));
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<u32>> = pending
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 0)
            .map(|(i, _)| Reverse(i as u32))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(Reverse(g)) = ready.pop() {
            order.push(GateId(g));
            let out = self.gates[g as usize].output;
            if !known(out) || drivers[out.index()] != Some(Driver::Gate(GateId(g))) {
                continue;
            }
            for &succ in &fanout[out.index()] {
                let succ_gate = &self.gates[succ.index()];
                for &net in &succ_gate.inputs {
                    if net == out {
                        pending[succ.index()] -= 1;
                    }
                }
                if pending[succ.index()] == 0 {
                    ready.push(Reverse(succ.0));
                }
            }
        }
        if order.len() < self.gates.len() {
            let gates = (0..self.gates.len())
                .filter(|&i| pending[i] > 0)
                .map(|i| GateId(i as u32))
                .collect();
            violations.push(Violation::Cycle { gates });
        }

        (
            ValidationReport { violations },
            Analysis {
                drivers,
                order,
                fanout,
            },
        )
    }
}

/// A validated, immutable netlist.
#[derive(Debug, Clone)]
pub struct Netlist {
    parts: NetlistParts,
    drivers: Vec<Driver>,
    order: Vec<GateId>,
    fanout: Vec<Vec<GateId>>,
}

impl TryFrom<NetlistParts> for Netlist {
    type Error = NetlistError;

    fn try_from(parts: NetlistParts) -> Result<Self> {
        let (report, analysis) = parts.analyze();
        if !report.is_valid() {
            return Err(NetlistError::Invalid(report));
        }
        Ok(Netlist {
            drivers: analysis.drivers.into_iter().map(|d| d.expect("validated")).collect(),
            order: analysis.order,
            fanout: analysis.fanout,
            parts,
        })
    }
}

impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Netlist {
    pub fn parts(&self) -> &NetlistParts {
        &self.parts
    }

    pub fn into_parts(self) -> NetlistParts {
        self.parts
    }

    pub fn ports_in(&self) -> &[Port] {
        &self.parts.ports_in
    }

    pub fn ports_out(&self) -> &[Port] {
        &self.parts.ports_out
    }

    pub fn port_in(&self, name: &str) -> Option<&Port> {
        self.parts.ports_in.iter().find(|p| p.name == name)
    }

    pub fn port_out(&self, name: &str) -> Option<&Port> {
        self.parts.ports_out.iter().find(|p| p.name == name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.parts.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.parts.gates[id.index()]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.parts.cells
    }

    pub fn net_count(&self) -> usize {
        self.parts.nets.len()
    }

    pub fn net_name(&self, net: NetId) -> &str {
        &self.parts.nets[net.index()]
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.index()]
    }

    /// Gates reading `net`, in gate id order.
    pub fn fanout(&self, net: NetId) -> &[GateId] {
        &self.fanout[net.index()]
    }

    /// Total number of primary input bits.
    pub fn input_bit_count(&self) -> usize {
        self.parts.ports_in.iter().map(Port::width).sum()
    }

    /// Input nets flattened in port order, LSB first within each port.
    pub fn input_nets(&self) -> impl Iterator<Item = NetId> + '_ {
        self.parts.ports_in.iter().flat_map(|p| p.bits.iter().copied())
    }

    pub fn output_nets(&self) -> impl Iterator<Item = NetId> + '_ {
        self.parts.ports_out.iter().flat_map(|p| p.bits.iter().copied())
    }

    /// Gates such that every gate follows the drivers of all its inputs.
    pub fn topo_order(&self) -> &[GateId] {
        &self.order
    }

    pub fn inventory(&self) -> Inventory {
        Inventory::from_kinds(self.gates().iter().map(|g| g.kind))
    }

    /// Per-tag inventories, in order of each tag's first appearance.
    pub fn inventory_by_tag(&self) -> Vec<(String, Inventory)> {
        let mut groups: Vec<(String, Inventory)> = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::new();
        for gate in self.gates() {
            let slot = *index.entry(gate.tag.as_str()).or_insert_with(|| {
                groups.push((gate.tag.clone(), Inventory::default()));
                groups.len() - 1
            });
            groups[slot].1.add(gate.kind, 1);
        }
        groups
    }

    /// The tag of each cell, taken from its first gate.
    pub fn cell_tag(&self, cell: &Cell) -> &str {
        cell.gates
            .first()
            .map(|g| self.gate(*g).tag.as_str())
            .unwrap_or("")
    }

    pub fn to_json(&self) -> String {
        json::serialize(&self.parts)
    }

    pub fn from_json(text: &str) -> Result<Netlist> {
        Netlist::try_from(json::deserialize(text)?)
    }
}

/// Gate counts by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Inventory {
    counts: BTreeMap<GateKind, usize>,
}

impl Inventory {
    pub fn from_kinds(kinds: impl IntoIterator<Item = GateKind>) -> Self {
        let mut inv = Inventory::default();
        for k in kinds {
            inv.add(k, 1);
        }
        inv
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (GateKind, usize)>) -> Self {
        let mut inv = Inventory::default();
        for (k, n) in counts {
            inv.add(k, n);
        }
        inv
    }

    pub fn add(&mut self, kind: GateKind, n: usize) {
        if n > 0 {
            *self.counts.entry(kind).or_insert(0) += n;
        }
    }

    pub fn merge(&mut self, other: &Inventory) {
        for (&k, &n) in &other.counts {
            self.add(k, n);
        }
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.counts.iter().map(|(&k, &n)| (k, n))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl fmt::Display for Inventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|(k, n)| format!("{k}: {n}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Single-writer netlist construction.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    parts: NetlistParts,
    open_cell: Option<usize>,
    inverters: HashMap<NetId, NetId>,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_port_name(&self, name: &str) -> Result<()> {
        let taken = self
            .parts
            .ports_in
            .iter()
            .chain(&self.parts.ports_out)
            .any(|p| p.name == name);
        if taken {
            return Err(NetlistError::DuplicatePort(name.to_string()));
        }
        Ok(())
    }

    /// Declares an input port and returns its fresh nets, LSB first.
    pub fn add_input_port(&mut self, name: &str, width: usize) -> Result<Vec<NetId>> {
        self.check_port_name(name)?;
        let bits: Vec<NetId> = (0..width)
            .map(|bit| {
                let id = NetId(self.parts.nets.len() as u32);
                self.parts.nets.push(format!("{name}[{bit}]"));
                id
            })
            .collect();
        self.parts.ports_in.push(Port {
            name: name.to_string(),
            bits: bits.clone(),
        });
        Ok(bits)
    }

    pub fn add_output_port(&mut self, name: &str, bits: Vec<NetId>) -> Result<()> {
        self.check_port_name(name)?;
        for &b in &bits {
            self.check_net(b)?;
        }
        self.parts.ports_out.push(Port {
            name: name.to_string(),
            bits,
        });
        Ok(())
    }

    fn check_net(&self, net: NetId) -> Result<()> {
        if net.index() < self.parts.nets.len() {
            Ok(())
        } else {
            Err(NetlistError::UnknownNet(net))
        }
    }

    /// Appends a gate and returns the fresh net it drives.
    pub fn add_gate(&mut self, kind: GateKind, inputs: &[NetId], tag: &str) -> Result<NetId> {
        if inputs.len() != kind.arity() {
            return Err(NetlistError::Arity {
                kind,
                expected: kind.arity(),
                found: inputs.len(),
            });
        }
        for &net in inputs {
            self.check_net(net)?;
        }
        let id = GateId(self.parts.gates.len() as u32);
        let output = NetId(self.parts.nets.len() as u32);
        self.parts.nets.push(format!("n{}", output.0));
        self.parts.gates.push(Gate {
            id,
            kind,
            inputs: inputs.to_vec(),
            output,
            tag: tag.to_string(),
        });
        if let Some(c) = self.open_cell {
            self.parts.cells[c].gates.push(id);
        }
        Ok(output)
    }

    /// Runs `f`, recording every gate it emits as one cell of `kind`.
    ///
    /// Calls nested inside an open cell are absorbed into the outer cell, so a
    /// compressor built from two full adders is recorded as one compressor.
    pub fn cell<T>(
        &mut self,
        kind: CellKind,
        f: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        if self.open_cell.is_some() {
            return f(self);
        }
        self.parts.cells.push(Cell {
            kind,
            gates: Vec::new(),
            select: None,
        });
        let index = self.parts.cells.len() - 1;
        self.open_cell = Some(index);
        let result = f(self);
        self.open_cell = None;
        if self.parts.cells[index].gates.is_empty() {
            self.parts.cells.pop();
        }
        result
    }

    /// Marks `net` as the select input of the currently open mux cell.
    pub fn set_cell_select(&mut self, net: NetId) -> Result<()> {
        self.check_net(net)?;
        let c = self.open_cell.ok_or(NetlistError::NestedCell)?;
        self.parts.cells[c].select = Some(net);
        Ok(())
    }

    /// Returns an inverted copy of `net`, reusing an inverter already placed on it.
    /// The inverter is not part of any open cell since several cells may share it.
    pub fn shared_inverter(&mut self, net: NetId, tag: &str) -> Result<NetId> {
        if let Some(&inv) = self.inverters.get(&net) {
            return Ok(inv);
        }
        let open = self.open_cell.take();
        let inv = self.add_gate(GateKind::Not, &[net], tag);
        self.open_cell = open;
        let inv = inv?;
        self.inverters.insert(net, inv);
        Ok(inv)
    }

    pub fn net_count(&self) -> usize {
        self.parts.nets.len()
    }

    pub fn gate_count(&self) -> usize {
        self.parts.gates.len()
    }

    pub fn inventory(&self) -> Inventory {
        Inventory::from_kinds(self.parts.gates.iter().map(|g| g.kind))
    }

    pub fn build(self) -> Result<Netlist> {
        Netlist::try_from(self.parts)
    }
}
