//! Static timing (gate-level and block-level) and transistor-count cost.
//!
//! Delay and cost tables can be loaded from JSON:
//!
//! ```json
//! {"delays": {"AND2": 1, "OR2": 1, "XOR2": 1, "NAND2": 1, "NOR2": 1,
//!             "XNOR2": 1, "NOT": 1, "MUX2": 1, "t_FA": 3},
//!  "costs":  {"AND2": [3,3], "OR2": [3,3], "XOR2": [4,4], "NAND2": [2,2],
//!             "NOR2": [2,2], "XNOR2": [4,4], "NOT": [1,1], "MUX2": [3,3]}}
//! ```
//!
//! A section that is present must list every gate kind. Block delays
//! (`t_AND`, `t_HA`, `t_FA`, `t_CFA`, `t_mux`, `t_NOT`) are optional.

mod cost;
mod timing;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::GateKind;

pub use cost::{
    closed_form_savings, cost_report, negated_savings, transistor_cost, ClosedFormSavings, CostReport, CostRow,
    MosCount, SavingsReport,
};
pub use timing::{
    block_critical_path, block_frontier, sta_critical_path, BlockKind, BlockPath, BlockStep, Coeffs, StaPath,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("delay table has no entry for {0}")]
    MissingDelay(GateKind),
    #[error("cost table has no entry for {0}")]
    MissingCost(GateKind),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Named block delays for block-level timing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockDelays {
    #[serde(rename = "t_AND")]
    pub and: f64,
    #[serde(rename = "t_HA")]
    pub ha: f64,
    #[serde(rename = "t_FA")]
    pub fa: f64,
    #[serde(rename = "t_CFA")]
    pub cfa: f64,
    #[serde(rename = "t_mux")]
    pub mux: f64,
    #[serde(rename = "t_NOT")]
    pub not: f64,
}

impl Default for BlockDelays {
    fn default() -> Self {
        BlockDelays {
            and: 1.0,
            ha: 2.0,
            fa: 3.0,
            cfa: 6.0,
            mux: 1.0,
            not: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayTable {
    pub gates: BTreeMap<GateKind, f64>,
    pub blocks: BlockDelays,
}

impl Default for DelayTable {
    fn default() -> Self {
        DelayTable {
            gates: GateKind::ALL.iter().map(|&k| (k, 1.0)).collect(),
            blocks: BlockDelays::default(),
        }
    }
}

impl DelayTable {
    pub fn gate_delay(&self, kind: GateKind) -> Result<f64, AnalysisError> {
        self.gates.get(&kind).copied().ok_or(AnalysisError::MissingDelay(kind))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostTable {
    pub name: String,
    pub costs: BTreeMap<GateKind, (u64, u64)>,
}

impl Default for CostTable {
    fn default() -> Self {
        use GateKind::*;
        CostTable {
            name: "default".into(),
            costs: [
                (And2, (3, 3)),
                (Or2, (3, 3)),
                (Xor2, (4, 4)),
                (Nand2, (2, 2)),
                (Nor2, (2, 2)),
                (Xnor2, (4, 4)),
                (Not, (1, 1)),
                (Mux2, (3, 3)),
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl CostTable {
    /// Static-CMOS variant with 12T XOR/XNOR.
    pub fn static12() -> Self {
        let mut t = CostTable::default();
        t.name = "static12".into();
        t.costs.insert(GateKind::Xor2, (6, 6));
        t.costs.insert(GateKind::Xnor2, (6, 6));
        t
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "default" => Some(CostTable::default()),
            "static12" => Some(CostTable::static12()),
            _ => None,
        }
    }

    pub fn cost(&self, kind: GateKind) -> Result<(u64, u64), AnalysisError> {
        self.costs.get(&kind).copied().ok_or(AnalysisError::MissingCost(kind))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tables {
    pub delays: DelayTable,
    pub costs: CostTable,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TablesDoc {
    delays: Option<BTreeMap<String, f64>>,
    costs: Option<BTreeMap<String, (u64, u64)>>,
}

fn kind_map<V: Copy>(section: &str, entries: &BTreeMap<String, V>) -> Result<BTreeMap<GateKind, V>, AnalysisError> {
    let mut map = BTreeMap::new();
    for (key, &value) in entries {
        if let Ok(kind) = key.parse::<GateKind>() {
            map.insert(kind, value);
        }
    }
    let missing: Vec<&str> = GateKind::ALL
        .iter()
        .filter(|k| !map.contains_key(*k))
        .map(|k| k.name())
        .collect();
    if !missing.is_empty() {
        return Err(AnalysisError::Config(format!(
            "`{section}` is missing gate kinds: {}",
            missing.join(", ")
        )));
    }
    Ok(map)
}

impl Tables {
    pub fn from_json(text: &str) -> Result<Tables, AnalysisError> {
        let doc: TablesDoc =
            serde_json::from_str(text).map_err(|e| AnalysisError::Config(format!("tables file: {e}")))?;
        let mut tables = Tables::default();
        if let Some(delays) = doc.delays {
            tables.delays.gates = kind_map("delays", &delays)?;
            let mut blocks = serde_json::to_value(tables.delays.blocks).expect("block delays serialize");
            for (key, &value) in &delays {
                if key.parse::<GateKind>().is_ok() {
                    continue;
                }
                match blocks.get_mut(key.as_str()) {
                    Some(slot) => *slot = value.into(),
                    None => return Err(AnalysisError::Config(format!("unknown delay entry `{key}`"))),
                }
            }
            tables.delays.blocks = serde_json::from_value(blocks).expect("block delays deserialize");
            for (&kind, &d) in &tables.delays.gates {
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(AnalysisError::Config(format!("delay for {kind} must be non-negative")));
                }
            }
            let b = tables.delays.blocks;
            if [b.and, b.ha, b.fa, b.cfa, b.mux, b.not].iter().any(|&d| !(d > 0.0 && d.is_finite())) {
                return Err(AnalysisError::Config("block delays must be positive".into()));
            }
        }
        if let Some(costs) = doc.costs {
            for key in costs.keys() {
                if key.parse::<GateKind>().is_err() {
                    return Err(AnalysisError::Config(format!("unknown cost entry `{key}`")));
                }
            }
            tables.costs = CostTable {
                name: "custom".into(),
                costs: kind_map("costs", &costs)?,
            };
            if tables.costs.costs.values().any(|&(p, n)| p == 0 || n == 0) {
                return Err(AnalysisError::Config("transistor counts must be positive".into()));
            }
        }
        Ok(tables)
    }
}
