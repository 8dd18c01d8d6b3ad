//! Canonical JSON netlist documents.
//!
//! Layout (version 1):
//!
//! ```text
//! {
//!   "version": 1,
//!   "ports_in": [ {"name":"a","bits":[0,1,...]}, ... ],
//!   "ports_out": [ {"name":"p","bits":[...]}, ... ],
//!   "nets": [ "a[0]", ..., "n16", ... ],
//!   "gates": [ {"id":0,"kind":"AND2","inputs":[0,8],"output":16,"tag":"8x8 AND Array"}, ... ],
//!   "cells": [ {"kind":"FA","gates":[...]}, ... ]
//! }
//! ```
//!
//! Net ids index `nets`; gate ids must equal their position in `gates`. MUX2
//! inputs are `[d0, d1, sel]`. `cells` is optional. Output is one array
//! element per line so diffs stay readable, and is byte-stable.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Cell, Gate, NetlistError, NetlistParts, Port, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    ports_in: Vec<Port>,
    ports_out: Vec<Port>,
    nets: Vec<String>,
    gates: Vec<Gate>,
    #[serde(default)]
    cells: Vec<Cell>,
}

fn write_array<T: Serialize>(out: &mut String, key: &str, items: &[T], last: bool) {
    let _ = write!(out, "  \"{key}\": [");
    for (i, item) in items.iter().enumerate() {
        let sep = if i + 1 < items.len() { "," } else { "" };
        let text = serde_json::to_string(item).expect("netlist items serialize");
        let _ = write!(out, "\n    {text}{sep}");
    }
    if !items.is_empty() {
        out.push_str("\n  ");
    }
    out.push(']');
    out.push_str(if last { "\n" } else { ",\n" });
}

pub(super) fn serialize(parts: &NetlistParts) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"version\": {FORMAT_VERSION},");
    write_array(&mut out, "ports_in", &parts.ports_in, false);
    write_array(&mut out, "ports_out", &parts.ports_out, false);
    write_array(&mut out, "nets", &parts.nets, false);
    write_array(&mut out, "gates", &parts.gates, false);
    write_array(&mut out, "cells", &parts.cells, true);
    out.push_str("}\n");
    out
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> NetlistError {
    NetlistError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

pub(super) fn deserialize(text: &str) -> Result<NetlistParts> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(parse_error(
            "version",
            format!("unsupported version {} (expected {FORMAT_VERSION})", doc.version),
        ));
    }
    let net_count = doc.nets.len();
    let check = |location: String, id: usize| {
        if id < net_count {
            Ok(())
        } else {
            Err(parse_error(
                location,
                format!("net {id} is not declared ({net_count} nets)"),
            ))
        }
    };
    for (key, ports) in [("ports_in", &doc.ports_in), ("ports_out", &doc.ports_out)] {
        for (p, port) in ports.iter().enumerate() {
            for (b, net) in port.bits.iter().enumerate() {
                check(format!("{key}[{p}].bits[{b}]"), net.index())?;
            }
        }
    }
    for (g, gate) in doc.gates.iter().enumerate() {
        if gate.id.index() != g {
            return Err(parse_error(
                format!("gates[{g}].id"),
                format!("gate id {} does not match its position", gate.id.0),
            ));
        }
        for (i, net) in gate.inputs.iter().enumerate() {
            check(format!("gates[{g}].inputs[{i}]"), net.index())?;
        }
        check(format!("gates[{g}].output"), gate.output.index())?;
    }
    for (c, cell) in doc.cells.iter().enumerate() {
        for (i, gate) in cell.gates.iter().enumerate() {
            if gate.index() >= doc.gates.len() {
                return Err(parse_error(
                    format!("cells[{c}].gates[{i}]"),
                    format!("gate {} is not declared", gate.0),
                ));
            }
        }
        if let Some(sel) = cell.select {
            check(format!("cells[{c}].select"), sel.index())?;
        }
    }
    Ok(NetlistParts {
        ports_in: doc.ports_in,
        ports_out: doc.ports_out,
        nets: doc.nets,
        gates: doc.gates,
        cells: doc.cells,
    })
}
