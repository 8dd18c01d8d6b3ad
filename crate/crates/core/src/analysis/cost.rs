use std::fmt;

use serde::Serialize;

use super::{AnalysisError, CostTable};
use crate::netlist::{CellKind, GateKind, Inventory, Netlist};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MosCount {
    pub pmos: u64,
    pub nmos: u64,
}

impl MosCount {
    pub fn total(&self) -> u64 {
        self.pmos + self.nmos
    }
}

impl std::ops::Add for MosCount {
    type Output = MosCount;
    fn add(self, o: MosCount) -> MosCount {
        MosCount {
            pmos: self.pmos + o.pmos,
            nmos: self.nmos + o.nmos,
        }
    }
}

/// Transistor count of an inventory under `costs`.
pub fn transistor_cost(inventory: &Inventory, costs: &CostTable) -> Result<MosCount, AnalysisError> {
    let mut mos = MosCount::default();
    for (kind, n) in inventory.iter() {
        let (p, q) = costs.cost(kind)?;
        mos.pmos += p * n as u64;
        mos.nmos += q * n as u64;
    }
    Ok(mos)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostRow {
    pub tag: String,
    #[serde(rename = "HA")]
    pub ha: usize,
    #[serde(rename = "FA")]
    pub fa: usize,
    #[serde(rename = "CFA")]
    pub cfa: usize,
    pub gates: Inventory,
    #[serde(rename = "PMOS")]
    pub pmos: u64,
    #[serde(rename = "NMOS")]
    pub nmos: u64,
}

impl CostRow {
    fn new(tag: &str, gates: Inventory, costs: &CostTable) -> Result<CostRow, AnalysisError> {
        let mos = transistor_cost(&gates, costs)?;
        Ok(CostRow {
            tag: tag.to_string(),
            ha: 0,
            fa: 0,
            cfa: 0,
            gates,
            pmos: mos.pmos,
            nmos: mos.nmos,
        })
    }
}

/// Per-tag component and transistor counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub cost_table: String,
    pub rows: Vec<CostRow>,
    pub totals: CostRow,
    pub total_mos: u64,
}

impl CostReport {
    /// A report over a bare inventory with a single row.
    pub fn from_inventory(tag: &str, inventory: &Inventory, costs: &CostTable) -> Result<CostReport, AnalysisError> {
        let row = CostRow::new(tag, inventory.clone(), costs)?;
        let mut totals = row.clone();
        totals.tag = "Total".into();
        Ok(CostReport {
            cost_table: costs.name.clone(),
            total_mos: row.pmos + row.nmos,
            rows: vec![row],
            totals,
        })
    }

    pub fn row(&self, tag: &str) -> Option<&CostRow> {
        self.rows.iter().find(|r| r.tag == tag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all = self.rows.iter().chain(std::iter::once(&self.totals));
        let kinds: Vec<GateKind> = GateKind::ALL
            .iter()
            .copied()
            .filter(|&k| self.totals.gates.count(k) > 0)
            .collect();
        let tag_w = all.clone().map(|r| r.tag.len()).max().unwrap_or(0).max(9);
        let mut header = format!("{:<tag_w$} {:>5} {:>5} {:>5}", "Component", "HA", "FA", "CFA");
        for k in &kinds {
            header.push_str(&format!(" {:>6}", k.name()));
        }
        header.push_str(&format!(" {:>7} {:>7}", "PMOS", "NMOS"));
        writeln!(f, "{header}")?;
        writeln!(f, "{}", "-".repeat(header.len()))?;
        for (i, r) in all.enumerate() {
            if i == self.rows.len() {
                writeln!(f, "{}", "-".repeat(header.len()))?;
            }
            let mut line = format!("{:<tag_w$} {:>5} {:>5} {:>5}", r.tag, r.ha, r.fa, r.cfa);
            for &k in &kinds {
                line.push_str(&format!(" {:>6}", r.gates.count(k)));
            }
            line.push_str(&format!(" {:>7} {:>7}", r.pmos, r.nmos));
            writeln!(f, "{}", line.trim_end())?;
        }
        writeln!(f, "Total MOS: {}", self.total_mos)?;
        writeln!(f, "Cost table: {} (transistor count is the only area measure)", self.cost_table)
    }
}

/// One row per tag in construction order, then totals.
pub fn cost_report(netlist: &Netlist, costs: &CostTable) -> Result<CostReport, AnalysisError> {
    let mut rows = Vec::new();
    for (tag, inv) in netlist.inventory_by_tag() {
        rows.push(CostRow::new(&tag, inv, costs)?);
    }
    for cell in netlist.cells() {
        let tag = netlist.cell_tag(cell);
        if let Some(row) = rows.iter_mut().find(|r| r.tag == tag) {
            match cell.kind {
                CellKind::HalfAdder => row.ha += 1,
                CellKind::FullAdder => row.fa += 1,
                CellKind::Cfa => row.cfa += 1,
                CellKind::And | CellKind::Mux => {}
            }
        }
    }
    let mut totals = CostRow::new("Total", Inventory::default(), costs)?;
    for r in &rows {
        totals.ha += r.ha;
        totals.fa += r.fa;
        totals.cfa += r.cfa;
        totals.gates.merge(&r.gates);
        totals.pmos += r.pmos;
        totals.nmos += r.nmos;
    }
    Ok(CostReport {
        cost_table: costs.name.clone(),
        total_mos: totals.pmos + totals.nmos,
        rows,
        totals,
    })
}

/// The closed-form savings estimate: per-FA and per-HA transistor deltas
/// plus the net inverters saved by the NAND array (`n^2` removed, `2n` added).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosedFormSavings {
    pub full_adders: u64,
    pub half_adders: u64,
    pub fa_delta: u64,
    pub ha_delta: u64,
    pub inverters: u64,
    pub total: u64,
}

impl fmt::Display for ClosedFormSavings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} x {} + {} x {} + {} = {}",
            self.full_adders, self.fa_delta, self.half_adders, self.ha_delta, self.inverters, self.total
        )
    }
}

pub fn closed_form_savings(full_adders: u64, half_adders: u64, fa_delta: u64, ha_delta: u64, width: u64) -> ClosedFormSavings {
    let inverters = width * width - 2 * width;
    ClosedFormSavings {
        full_adders,
        half_adders,
        fa_delta,
        ha_delta,
        inverters,
        total: full_adders * fa_delta + half_adders * ha_delta + inverters,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SavingsReport {
    pub standard: MosCount,
    pub negated: MosCount,
    /// Standard total minus negated total.
    pub difference: i64,
}

impl fmt::Display for SavingsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "standard design: {} MOS", self.standard.total())?;
        writeln!(f, "negated design:  {} MOS", self.negated.total())?;
        writeln!(f, "saved:           {}", self.difference)
    }
}

/// Transistor totals of two functionally equivalent designs and their difference.
pub fn negated_savings(
    standard: &Netlist,
    standard_costs: &CostTable,
    negated: &Netlist,
    negated_costs: &CostTable,
) -> Result<SavingsReport, AnalysisError> {
    let s = transistor_cost(&standard.inventory(), standard_costs)?;
    let n = transistor_cost(&negated.inventory(), negated_costs)?;
    Ok(SavingsReport {
        standard: s,
        negated: n,
        difference: s.total() as i64 - n.total() as i64,
    })
}
