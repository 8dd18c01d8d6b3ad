#![allow(dead_code)]

use wallace_core::analysis::DelayTable;
use wallace_core::assembly::{FinalAdder, MultiplierConfig};
use wallace_core::cells::Logic;
use wallace_core::netlist::{Driver, GateKind, NetId, Netlist};
use wallace_core::reduction::Scheduler;

pub const SCHEDULERS: [Scheduler; 3] = [Scheduler::Wallace, Scheduler::Dadda, Scheduler::Cfa];
pub const ADDERS: [FinalAdder; 2] = [FinalAdder::Rca, FinalAdder::SqrtCsa];
pub const LOGICS: [Logic; 2] = [Logic::Standard, Logic::Negated];

/// The twelve scheduler x final adder x logic combinations at width `n`.
pub fn all_configs(n: usize) -> Vec<MultiplierConfig> {
    let mut out = Vec::new();
    for reduction in SCHEDULERS {
        for final_adder in ADDERS {
            for logic in LOGICS {
                out.push(MultiplierConfig {
                    width: n,
                    reduction,
                    final_adder,
                    logic,
                    ..MultiplierConfig::default()
                });
            }
        }
    }
    out
}

pub fn label(c: &MultiplierConfig) -> String {
    format!(
        "{}/{}/{}",
        c.reduction.name(),
        c.final_adder.name(),
        match c.logic {
            Logic::Standard => "standard",
            Logic::Negated => "negated",
        }
    )
}

/// Longest path found by walking every input-to-output path explicitly,
/// without topological ordering or memoization.
pub fn brute_force_longest(netlist: &Netlist, delays: &DelayTable) -> f64 {
    fn walk(netlist: &Netlist, delays: &DelayTable, net: NetId) -> f64 {
        match netlist.driver(net) {
            Driver::Input { .. } => 0.0,
            Driver::Gate(g) => {
                let gate = netlist.gate(g);
                let d = delays.gate_delay(gate.kind).unwrap();
                gate.inputs
                    .iter()
                    .map(|&i| walk(netlist, delays, i) + d)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }
    netlist
        .output_nets()
        .map(|o| walk(netlist, delays, o))
        .fold(0.0, f64::max)
}

/// Number of distinct input-to-output paths.
pub fn path_count(netlist: &Netlist) -> u128 {
    let mut paths = vec![0u128; netlist.net_count()];
    for net in netlist.input_nets() {
        paths[net.index()] = 1;
    }
    for &g in netlist.topo_order() {
        let gate = netlist.gate(g);
        paths[gate.output.index()] = gate.inputs.iter().map(|i| paths[i.index()]).sum();
    }
    netlist.output_nets().map(|o| paths[o.index()]).sum()
}

/// A delay table with distinct rational delays `k / 8`.
pub fn rational_delays(seed: u64) -> DelayTable {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = DelayTable::default();
    for k in GateKind::ALL {
        t.gates.insert(k, rng.gen_range(1..=40) as f64 / 8.0);
    }
    t
}

/// Gates whose output reaches some output port.
pub fn output_cone(netlist: &Netlist) -> Vec<bool> {
    let mut live = vec![false; netlist.gates().len()];
    let mut stack: Vec<NetId> = netlist.output_nets().collect();
    while let Some(net) = stack.pop() {
        if let Driver::Gate(g) = netlist.driver(net) {
            if !live[g.index()] {
                live[g.index()] = true;
                stack.extend(netlist.gate(g).inputs.iter().copied());
            }
        }
    }
    live
}

pub const TWO_INPUT: [GateKind; 6] = [
    GateKind::And2,
    GateKind::Or2,
    GateKind::Xor2,
    GateKind::Nand2,
    GateKind::Nor2,
    GateKind::Xnor2,
];
