use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use super::{net_values, Assignment, SimError};
use crate::analysis::DelayTable;
use crate::netlist::{GateId, Netlist};

/// An input transition: every input bit switches from `before` to `after` at t = 0.
/// Both vectors are in port order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorPair {
    pub before: Vec<bool>,
    pub after: Vec<bool>,
}

impl VectorPair {
    pub fn new(before: Vec<bool>, after: Vec<bool>) -> Self {
        VectorPair { before, after }
    }

    pub fn from_assignments(netlist: &Netlist, before: &Assignment, after: &Assignment) -> Result<Self, SimError> {
        Ok(VectorPair {
            before: before.to_vector(netlist)?,
            after: after.to_vector(netlist)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedTrace {
    /// Per net, the `(time, new value)` transitions after t = 0.
    pub transitions: Vec<Vec<(f64, bool)>>,
    /// Time of the last output transition; 0 when no output changes.
    pub settle_time: f64,
    pub final_values: Vec<bool>,
}

impl TimedTrace {
    /// Glitch pulses on a net: transition pairs beyond a single clean edge.
    pub fn pulse_count(&self, net: usize) -> usize {
        self.transitions[net].len() / 2
    }

    pub fn total_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    net: u32,
    value: bool,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

/// Precomputed per-gate delays so repeated simulations skip table lookups.
pub(crate) struct TimedSim<'a> {
    netlist: &'a Netlist,
    delays: Vec<f64>,
}

impl<'a> TimedSim<'a> {
    pub(crate) fn new(netlist: &'a Netlist, table: &DelayTable) -> Result<Self, SimError> {
        let delays = netlist
            .gates()
            .iter()
            .map(|g| table.gate_delay(g.kind))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TimedSim { netlist, delays })
    }

    pub(crate) fn run(&self, pair: &VectorPair) -> Result<TimedTrace, SimError> {
        let netlist = self.netlist;
        let expected = netlist.input_bit_count();
        for v in [&pair.before, &pair.after] {
            if v.len() != expected {
                return Err(SimError::VectorWidth {
                    expected,
                    found: v.len(),
                });
            }
        }
        let mut values = net_values(netlist, &pair.before);
        let mut transitions: Vec<Vec<(f64, bool)>> = vec![Vec::new(); netlist.net_count()];
        let mut queue = BinaryHeap::new();
        let mut seq = 0u64;
        for (net, (&old, &new)) in netlist.input_nets().zip(pair.before.iter().zip(&pair.after)) {
            if old != new {
                queue.push(Reverse(Event {
                    time: 0.0,
                    seq,
                    net: net.0,
                    value: new,
                }));
                seq += 1;
            }
        }
        let mut touched = BTreeSet::new();
        let mut ins = Vec::with_capacity(3);
        while let Some(Reverse(first)) = queue.pop() {
            let now = first.time;
            let mut batch = vec![first];
            while let Some(Reverse(e)) = queue.peek() {
                if e.time.total_cmp(&now) != Ordering::Equal {
                    break;
                }
                batch.push(queue.pop().expect("peeked").0);
            }
            touched.clear();
            for e in batch {
                let net = e.net as usize;
                if values[net] == e.value {
                    continue;
                }
                values[net] = e.value;
                record(&mut transitions[net], now, e.value);
                touched.extend(netlist.fanout(crate::NetId(e.net)).iter().copied());
            }
            for &g in &touched {
                let GateId(id) = g;
                let gate = netlist.gate(g);
                ins.clear();
                ins.extend(gate.inputs.iter().map(|n| values[n.index()]));
                let value = gate.kind.eval(&ins);
                queue.push(Reverse(Event {
                    time: now + self.delays[id as usize],
                    seq,
                    net: gate.output.0,
                    value,
                }));
                seq += 1;
            }
        }
        let settle_time = netlist
            .output_nets()
            .filter_map(|n| transitions[n.index()].last().map(|&(t, _)| t))
            .fold(0.0, f64::max);
        Ok(TimedTrace {
            transitions,
            settle_time,
            final_values: values,
        })
    }
}

/// Zero-delay gates can toggle a net twice at one instant; keep times strictly increasing.
fn record(list: &mut Vec<(f64, bool)>, time: f64, value: bool) {
    if let Some(&(t, _)) = list.last() {
        if t == time {
            list.pop();
            if list.last().map(|&(_, v)| v) == Some(value) {
                return;
            }
            list.push((time, value));
            return;
        }
    }
    list.push((time, value));
}

/// Transport-delay event simulation of one input transition.
///
/// Nets start at the zero-delay steady state of `before`; inputs switch at
/// t = 0 and every gate output change is scheduled `delay(kind)` later.
/// Glitches are kept.
pub fn timed_simulate(netlist: &Netlist, pair: &VectorPair, delays: &DelayTable) -> Result<TimedTrace, SimError> {
    TimedSim::new(netlist, delays)?.run(pair)
}
