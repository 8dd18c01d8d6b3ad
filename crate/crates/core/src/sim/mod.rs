//! Zero-delay evaluation, verification against integer oracles, timed
//! simulation and worst-case input search.

mod search;
mod timed;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::netlist::{GateKind, Netlist};

pub use search::{search_worst_case, Strategy, WorstCase};
pub use timed::{timed_simulate, TimedTrace, VectorPair};
pub use verify::{verify, Failure, Mode, Oracle, VerifyReport};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("assignment is missing input bits: {}", .0.join(", "))]
    MissingBits(Vec<String>),
    #[error("assignment names unknown input bits: {}", .0.join(", "))]
    UnknownBits(Vec<String>),
    #[error("expected {expected} input bits, got {found}")]
    VectorWidth { expected: usize, found: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
}

/// Values for input port bits, keyed by `(port, bit)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    bits: BTreeMap<(String, usize), bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, port: &str, bit: usize, value: bool) {
        self.bits.insert((port.to_string(), bit), value);
    }

    /// Assigns whole ports from integers, LSB first.
    pub fn from_ports(netlist: &Netlist, values: &[(&str, u64)]) -> Self {
        let mut a = Assignment::new();
        for &(name, value) in values {
            let width = netlist.port_in(name).map(|p| p.width()).unwrap_or(64);
            for bit in 0..width.min(64) {
                a.set(name, bit, value >> bit & 1 == 1);
            }
        }
        a
    }

    /// Builds an assignment from a flat vector in port order.
    pub fn from_vector(netlist: &Netlist, vector: &[bool]) -> Self {
        let mut a = Assignment::new();
        let mut values = vector.iter();
        for port in netlist.ports_in() {
            for bit in 0..port.width() {
                a.set(&port.name, bit, *values.next().unwrap_or(&false));
            }
        }
        a
    }

    /// Flattens to port order; every input bit must be assigned.
    pub fn to_vector(&self, netlist: &Netlist) -> Result<Vec<bool>, SimError> {
        let mut missing = Vec::new();
        let mut vector = Vec::with_capacity(netlist.input_bit_count());
        for port in netlist.ports_in() {
            for bit in 0..port.width() {
                match self.bits.get(&(port.name.clone(), bit)) {
                    Some(&v) => vector.push(v),
                    None => missing.push(format!("{}[{bit}]", port.name)),
                }
            }
        }
        if !missing.is_empty() {
            return Err(SimError::MissingBits(missing));
        }
        let unknown: Vec<String> = self
            .bits
            .keys()
            .filter(|(port, bit)| netlist.port_in(port).is_none_or(|p| *bit >= p.width()))
            .map(|(port, bit)| format!("{port}[{bit}]"))
            .collect();
        if !unknown.is_empty() {
            return Err(SimError::UnknownBits(unknown));
        }
        Ok(vector)
    }
}

/// Output port values from one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortValues {
    pub ports: Vec<(String, Vec<bool>)>,
}

impl PortValues {
    pub fn bits(&self, name: &str) -> Option<&[bool]> {
        self.ports
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, bits)| bits.as_slice())
    }

    /// Port value as an integer (ports wider than 128 bits are truncated).
    pub fn value(&self, name: &str) -> Option<u128> {
        self.bits(name).map(|bits| {
            bits.iter()
                .take(128)
                .enumerate()
                .map(|(i, &b)| (b as u128) << i)
                .sum()
        })
    }
}

impl fmt::Display for PortValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, bits)) in self.ports.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let text: String = bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect();
            write!(f, "{name}={text}")?;
        }
        Ok(())
    }
}

/// A netlist flattened into a straight-line program over net indices.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    ops: Vec<Op>,
    net_count: usize,
    inputs: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
struct Op {
    kind: GateKind,
    arity: u8,
    ins: [u32; 3],
    out: u32,
}

impl Program {
    pub(crate) fn new(netlist: &Netlist) -> Self {
        let ops = netlist
            .topo_order()
            .iter()
            .map(|&g| {
                let gate = netlist.gate(g);
                let mut ins = [0u32; 3];
                for (slot, net) in ins.iter_mut().zip(&gate.inputs) {
                    *slot = net.0;
                }
                Op {
                    kind: gate.kind,
                    arity: gate.inputs.len() as u8,
                    ins,
                    out: gate.output.0,
                }
            })
            .collect();
        Program {
            ops,
            net_count: netlist.net_count(),
            inputs: netlist.input_nets().map(|n| n.0).collect(),
        }
    }

    /// Evaluates 64 input vectors at once; `inputs[i]` holds input bit `i` of every lane.
    pub(crate) fn run_words(&self, inputs: &[u64], values: &mut Vec<u64>) {
        values.clear();
        values.resize(self.net_count, 0);
        for (&net, &w) in self.inputs.iter().zip(inputs) {
            values[net as usize] = w;
        }
        for op in &self.ops {
            let mut ins = [0u64; 3];
            for k in 0..op.arity as usize {
                ins[k] = values[op.ins[k] as usize];
            }
            values[op.out as usize] = op.kind.eval_word(&ins[..op.arity as usize]);
        }
    }
}

/// Values of every net for one input vector given in port order.
pub fn net_values(netlist: &Netlist, inputs: &[bool]) -> Vec<bool> {
    let program = Program::new(netlist);
    let words: Vec<u64> = inputs.iter().map(|&b| b as u64).collect();
    let mut values = Vec::new();
    program.run_words(&words, &mut values);
    values.into_iter().map(|w| w & 1 == 1).collect()
}

fn check_width(netlist: &Netlist, vector: &[bool]) -> Result<(), SimError> {
    let expected = netlist.input_bit_count();
    if vector.len() != expected {
        return Err(SimError::VectorWidth {
            expected,
            found: vector.len(),
        });
    }
    Ok(())
}

/// Output values for an input vector in port order.
pub fn eval_vector(netlist: &Netlist, vector: &[bool]) -> Result<PortValues, SimError> {
    check_width(netlist, vector)?;
    let values = net_values(netlist, vector);
    Ok(collect_outputs(netlist, |n| values[n]))
}

pub(crate) fn collect_outputs(netlist: &Netlist, value: impl Fn(usize) -> bool) -> PortValues {
    PortValues {
        ports: netlist
            .ports_out()
            .iter()
            .map(|p| (p.name.clone(), p.bits.iter().map(|n| value(n.index())).collect()))
            .collect(),
    }
}

/// Zero-delay evaluation: one pass over the gates in topological order.
pub fn eval(netlist: &Netlist, assignment: &Assignment) -> Result<PortValues, SimError> {
    let vector = assignment.to_vector(netlist)?;
    eval_vector(netlist, &vector)
}

/// Splits an integer into `width` little-endian bits.
pub fn to_bits(value: u128, width: usize) -> Vec<bool> {
    (0..width).map(|i| i < 128 && value >> i & 1 == 1).collect()
}

pub fn from_bits(bits: &[bool]) -> u128 {
    bits.iter()
        .take(128)
        .enumerate()
        .map(|(i, &b)| (b as u128) << i)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_multiplier, MultiplierConfig};
    use crate::netlist::NetlistBuilder;

    #[test]
    fn multiplier_reference_cases() {
        let n = build_multiplier(&MultiplierConfig::default()).unwrap().netlist;
        for (a, b, p) in [(27, 31, 837), (0, 255, 0), (1, 1, 1), (255, 255, 65025)] {
            let out = eval(&n, &Assignment::from_ports(&n, &[("a", a), ("b", b)])).unwrap();
            assert_eq!(out.value("p"), Some(p));
        }
    }

    #[test]
    fn not_chain_is_identity() {
        let mut b = NetlistBuilder::new();
        let x = b.add_input_port("x", 1).unwrap()[0];
        let y = b.add_gate(GateKind::Not, &[x], "").unwrap();
        let z = b.add_gate(GateKind::Not, &[y], "").unwrap();
        b.add_output_port("z", vec![z]).unwrap();
        let n = b.build().unwrap();
        for v in [false, true] {
            assert_eq!(eval_vector(&n, &[v]).unwrap().bits("z"), Some(&[v][..]));
        }
    }

    #[test]
    fn partial_assignment_lists_missing_bits() {
        let n = build_multiplier(&MultiplierConfig::with_width(2)).unwrap().netlist;
        let mut a = Assignment::new();
        a.set("a", 0, true);
        a.set("a", 1, false);
        a.set("b", 0, true);
        match eval(&n, &a) {
            Err(SimError::MissingBits(bits)) => assert_eq!(bits, vec!["b[1]".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_bits_are_rejected() {
        let n = build_multiplier(&MultiplierConfig::with_width(2)).unwrap().netlist;
        let a = Assignment::from_ports(&n, &[("a", 1), ("b", 1), ("q", 1)]);
        assert!(matches!(eval(&n, &a), Err(SimError::UnknownBits(_))));
    }

    #[test]
    fn bit_helpers_round_trip() {
        for v in [0u128, 1, 837, 65025, u64::MAX as u128] {
            assert_eq!(from_bits(&to_bits(v, 64)), v);
        }
    }
}
