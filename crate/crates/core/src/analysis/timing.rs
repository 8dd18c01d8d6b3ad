use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::Serialize;

use super::{AnalysisError, BlockDelays, DelayTable};
use crate::netlist::{CellKind, Driver, GateId, GateKind, Netlist};

/// One maximal input-to-output path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaPath {
    pub delay: f64,
    /// Gates from the path's input side to its output side.
    pub gates: Vec<GateId>,
}

/// Longest weighted input-to-output path, computed in one topological pass.
/// Ties go to the lowest gate id.
pub fn sta_critical_path(netlist: &Netlist, delays: &DelayTable) -> Result<StaPath, AnalysisError> {
    let mut arrival = vec![0.0f64; netlist.net_count()];
    let mut pred: Vec<Option<GateId>> = vec![None; netlist.gates().len()];
    for &g in netlist.topo_order() {
        let gate = netlist.gate(g);
        let d = delays.gate_delay(gate.kind)?;
        let mut best: Option<(f64, Option<GateId>)> = None;
        for &net in &gate.inputs {
            let from = match netlist.driver(net) {
                Driver::Gate(src) => Some(src),
                Driver::Input { .. } => None,
            };
            let t = arrival[net.index()];
            let take = match best {
                None => true,
                Some((bt, bf)) => t > bt || (t == bt && from < bf),
            };
            if take {
                best = Some((t, from));
            }
        }
        let (t, from) = best.unwrap_or((0.0, None));
        pred[g.index()] = from;
        arrival[gate.output.index()] = t + d;
    }
    let mut end: Option<(f64, GateId)> = None;
    for net in netlist.output_nets() {
        if let Driver::Gate(g) = netlist.driver(net) {
            let t = arrival[net.index()];
            let take = match end {
                None => true,
                Some((bt, bg)) => t > bt || (t == bt && g < bg),
            };
            if take {
                end = Some((t, g));
            }
        }
    }
    let Some((delay, last)) = end else {
        return Ok(StaPath {
            delay: 0.0,
            gates: Vec::new(),
        });
    };
    let mut gates = vec![last];
    while let Some(p) = pred[gates.last().expect("non-empty").index()] {
        gates.push(p);
    }
    gates.reverse();
    Ok(StaPath { delay, gates })
}

/// Atomic blocks of block-level timing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockKind {
    And,
    HalfAdder,
    FullAdder,
    Cfa,
    Mux,
    Not,
}

impl BlockKind {
    pub const ALL: [BlockKind; 6] = [
        BlockKind::And,
        BlockKind::HalfAdder,
        BlockKind::FullAdder,
        BlockKind::Cfa,
        BlockKind::Mux,
        BlockKind::Not,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BlockKind::And => "t_AND",
            BlockKind::HalfAdder => "t_HA",
            BlockKind::FullAdder => "t_FA",
            BlockKind::Cfa => "t_CFA",
            BlockKind::Mux => "t_mux",
            BlockKind::Not => "t_NOT",
        }
    }

    pub fn delay(self, d: &BlockDelays) -> f64 {
        match self {
            BlockKind::And => d.and,
            BlockKind::HalfAdder => d.ha,
            BlockKind::FullAdder => d.fa,
            BlockKind::Cfa => d.cfa,
            BlockKind::Mux => d.mux,
            BlockKind::Not => d.not,
        }
    }

    fn from_cell(kind: CellKind) -> Self {
        match kind {
            CellKind::And => BlockKind::And,
            CellKind::HalfAdder => BlockKind::HalfAdder,
            CellKind::FullAdder => BlockKind::FullAdder,
            CellKind::Cfa => BlockKind::Cfa,
            CellKind::Mux => BlockKind::Mux,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Coefficients over `t_AND, t_HA, t_FA, t_CFA, t_mux, t_NOT`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeffs(pub [u32; 6]);

impl Coeffs {
    pub fn of(terms: &[(BlockKind, u32)]) -> Self {
        let mut c = Coeffs::default();
        for &(k, n) in terms {
            c.0[k.index()] += n;
        }
        c
    }

    pub fn get(&self, kind: BlockKind) -> u32 {
        self.0[kind.index()]
    }

    pub fn plus(mut self, kind: BlockKind) -> Self {
        self.0[kind.index()] += 1;
        self
    }

    pub fn add(mut self, other: Coeffs) -> Self {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
        self
    }

    pub fn eval(&self, d: &BlockDelays) -> f64 {
        BlockKind::ALL.iter().map(|&k| self.get(k) as f64 * k.delay(d)).sum()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True when every coefficient is at most the other's.
    pub fn dominated_by(&self, other: &Coeffs) -> bool {
        self.0.iter().zip(other.0).all(|(&a, b)| a <= b)
    }

    /// Counts half adders as full-adder positions.
    pub fn ha_as_fa(mut self) -> Self {
        let ha = self.0[BlockKind::HalfAdder.index()];
        self.0[BlockKind::HalfAdder.index()] = 0;
        self.0[BlockKind::FullAdder.index()] += ha;
        self
    }
}

impl fmt::Display for Coeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = BlockKind::ALL
            .iter()
            .filter(|&&k| self.get(k) > 0)
            .map(|&k| match self.get(k) {
                1 => k.symbol().to_string(),
                n => format!("{n}{}", k.symbol()),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Serialize for Coeffs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        for k in BlockKind::ALL {
            if self.get(k) > 0 {
                map.serialize_entry(k.symbol(), &self.get(k))?;
            }
        }
        map.end()
    }
}

/// Keeps only vectors not dominated by another, sorted.
fn prune(mut set: Vec<Coeffs>) -> Vec<Coeffs> {
    set.sort();
    set.dedup();
    let keep: Vec<bool> = set
        .iter()
        .enumerate()
        .map(|(i, c)| !set.iter().enumerate().any(|(j, o)| j != i && c.dominated_by(o)))
        .collect();
    set.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStep {
    pub kind: BlockKind,
    pub tag: String,
    /// False for a mux entered through a data input, which adds no delay.
    pub counted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPath {
    pub delay: f64,
    pub coeffs: Coeffs,
    pub steps: Vec<BlockStep>,
    /// Non-dominated coefficient vectors over all input-to-output block paths.
    pub frontier: Vec<Coeffs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Gate-level result used when the netlist cannot be split into blocks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<StaPath>,
}

impl BlockPath {
    /// Coefficients of the counted steps whose tag satisfies `pred`.
    pub fn region(&self, pred: impl Fn(&str) -> bool) -> Coeffs {
        self.steps
            .iter()
            .filter(|s| s.counted && pred(&s.tag))
            .fold(Coeffs::default(), |c, s| c.plus(s.kind))
    }

    pub fn depth(&self, pred: impl Fn(&str) -> bool) -> usize {
        self.steps.iter().filter(|s| s.counted && pred(&s.tag)).count()
    }
}

struct Node {
    kind: BlockKind,
    tag: String,
    /// `(predecessor block, arc counts this block's delay)`; `None` is a source.
    arcs: Vec<(Option<usize>, bool)>,
    sink: bool,
}

struct BlockGraph {
    nodes: Vec<Node>,
    order: Vec<usize>,
}

impl BlockGraph {
    /// Blocks for the gates whose tag satisfies `keep`; nets from outside are sources.
    fn new(netlist: &Netlist, keep: &dyn Fn(&str) -> bool) -> Result<BlockGraph, String> {
        let mut node_of: Vec<Option<usize>> = vec![None; netlist.gates().len()];
        let mut members: Vec<Vec<GateId>> = Vec::new();
        let mut nodes = Vec::new();
        let mut selects = Vec::new();
        for cell in netlist.cells() {
            let tag = netlist.cell_tag(cell);
            if !keep(tag) {
                continue;
            }
            for &g in &cell.gates {
                node_of[g.index()] = Some(nodes.len());
            }
            members.push(cell.gates.clone());
            selects.push(cell.select);
            nodes.push(Node {
                kind: BlockKind::from_cell(cell.kind),
                tag: tag.to_string(),
                arcs: Vec::new(),
                sink: false,
            });
        }
        for gate in netlist.gates() {
            if node_of[gate.id.index()].is_some() || !keep(&gate.tag) {
                continue;
            }
            if gate.kind != GateKind::Not {
                return Err(format!(
                    "gate {} ({}) tagged `{}` is not part of a block; using gate-level timing",
                    gate.id, gate.kind, gate.tag
                ));
            }
            node_of[gate.id.index()] = Some(nodes.len());
            members.push(vec![gate.id]);
            selects.push(None);
            nodes.push(Node {
                kind: BlockKind::Not,
                tag: gate.tag.clone(),
                arcs: Vec::new(),
                sink: false,
            });
        }
        let is_output: Vec<bool> = {
            let mut v = vec![false; netlist.net_count()];
            for n in netlist.output_nets() {
                v[n.index()] = true;
            }
            v
        };
        for (i, gates) in members.iter().enumerate() {
            let mut arcs = Vec::new();
            for &g in gates {
                let gate = netlist.gate(g);
                for &net in &gate.inputs {
                    let from = match netlist.driver(net) {
                        Driver::Gate(src) => node_of[src.index()],
                        Driver::Input { .. } => None,
                    };
                    if from == Some(i) {
                        continue;
                    }
                    let counted = nodes[i].kind != BlockKind::Mux || selects[i] == Some(net);
                    arcs.push((from, counted));
                }
                let out = gate.output;
                let leaves = is_output[out.index()]
                    || netlist.fanout(out).iter().any(|&f| node_of[f.index()].is_none());
                if leaves {
                    nodes[i].sink = true;
                }
            }
            arcs.sort();
            arcs.dedup();
            nodes[i].arcs = arcs;
        }
        let order = topo(&nodes).ok_or_else(|| "block graph has a cycle; using gate-level timing".to_string())?;
        Ok(BlockGraph { nodes, order })
    }

    fn frontiers(&self) -> Vec<Vec<Coeffs>> {
        let mut front: Vec<Vec<Coeffs>> = vec![Vec::new(); self.nodes.len()];
        for &i in &self.order {
            let node = &self.nodes[i];
            let mut set = Vec::new();
            for &(from, counted) in &node.arcs {
                let base: &[Coeffs] = match from {
                    Some(p) => &front[p],
                    None => &[Coeffs([0; 6])],
                };
                for &c in base {
                    set.push(if counted { c.plus(node.kind) } else { c });
                }
            }
            if node.arcs.is_empty() {
                set.push(Coeffs::default().plus(node.kind));
            }
            front[i] = prune(set);
        }
        front
    }

    fn sink_frontier(&self) -> Vec<Coeffs> {
        let front = self.frontiers();
        prune(
            self.nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.sink)
                .flat_map(|(i, _)| front[i].iter().copied())
                .collect(),
        )
    }
}

fn topo(nodes: &[Node]) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; nodes.len()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        let mut preds: Vec<usize> = n.arcs.iter().filter_map(|a| a.0).collect();
        preds.dedup();
        for p in preds {
            indegree[i] += 1;
            succ[p].push(i);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..nodes.len()).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &s in &succ[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    (order.len() == nodes.len()).then_some(order)
}

/// Block-level longest path: cells are atomic blocks, loose inverters are
/// `t_NOT` blocks, and a mux adds `t_mux` only on its select arc.
///
/// Netlists with loose gates other than inverters fall back to gate-level
/// timing with a warning.
pub fn block_critical_path(netlist: &Netlist, delays: &DelayTable) -> Result<BlockPath, AnalysisError> {
    let graph = match BlockGraph::new(netlist, &|_| true) {
        Ok(g) => g,
        Err(warning) => {
            let sta = sta_critical_path(netlist, delays)?;
            return Ok(BlockPath {
                delay: sta.delay,
                coeffs: Coeffs::default(),
                steps: Vec::new(),
                frontier: Vec::new(),
                warning: Some(warning),
                fallback: Some(sta),
            });
        }
    };
    let blocks = &delays.blocks;
    let n = graph.nodes.len();
    let mut arrival = vec![0.0f64; n];
    let mut back: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut entered: Vec<bool> = vec![true; n];
    for &i in &graph.order {
        let node = &graph.nodes[i];
        let mut best: Option<(f64, Option<usize>, bool)> = None;
        for &(from, counted) in &node.arcs {
            let base = from.map_or(0.0, |p| arrival[p]);
            let t = base + if counted { node.kind.delay(blocks) } else { 0.0 };
            if best.is_none_or(|(bt, _, _)| t > bt) {
                best = Some((t, from, counted));
            }
        }
        let (t, from, counted) = best.unwrap_or((node.kind.delay(blocks), None, true));
        arrival[i] = t;
        back[i] = from.map(|p| (p, counted));
        entered[i] = counted;
    }
    let end = (0..n)
        .filter(|&i| graph.nodes[i].sink)
        .fold(None, |acc: Option<usize>, i| match acc {
            Some(j) if arrival[j] >= arrival[i] => Some(j),
            _ => Some(i),
        });
    let frontier = graph.sink_frontier();
    let Some(end) = end else {
        return Ok(BlockPath {
            delay: 0.0,
            coeffs: Coeffs::default(),
            steps: Vec::new(),
            frontier,
            warning: None,
            fallback: None,
        });
    };
    let mut chain = vec![(end, entered[end])];
    let mut cur = end;
    while let Some((p, _)) = back[cur] {
        chain.push((p, entered[p]));
        cur = p;
    }
    chain.reverse();
    let steps: Vec<BlockStep> = chain
        .iter()
        .map(|&(i, counted)| BlockStep {
            kind: graph.nodes[i].kind,
            tag: graph.nodes[i].tag.clone(),
            counted,
        })
        .collect();
    let coeffs = steps
        .iter()
        .filter(|s| s.counted)
        .fold(Coeffs::default(), |c, s| c.plus(s.kind));
    Ok(BlockPath {
        delay: arrival[end],
        coeffs,
        steps,
        frontier,
        warning: None,
        fallback: None,
    })
}

/// Non-dominated block paths through the blocks whose tag satisfies `region`,
/// taking nets that enter the region as zero-delay sources.
pub fn block_frontier(netlist: &Netlist, region: impl Fn(&str) -> bool) -> Result<Vec<Coeffs>, AnalysisError> {
    BlockGraph::new(netlist, &region)
        .map(|g| g.sink_frontier())
        .map_err(AnalysisError::Config)
}
