//! Text exporters: structural Verilog, DOT and dot diagrams.
//!
//! Verilog output is one module of gate primitives (`and`, `or`, `xor`,
//! `nand`, `nor`, `xnor`, `not`). MUX2 has no primitive and is written as
//! `assign y = sel ? d1 : d0;`. Gate outputs are wires named `n<net id>`,
//! instances are named `g<gate id>`.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::netlist::{Driver, GateKind, NetId, Netlist};
use crate::reduction::{render_group, ReductionTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Verilog,
    Dot,
    Json,
    Diagram,
}

impl std::str::FromStr for Format {
    type Err = EmitError;
    fn from_str(s: &str) -> Result<Self, EmitError> {
        match s {
            "verilog" => Ok(Format::Verilog),
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            "diagram" => Ok(Format::Diagram),
            _ => Err(EmitError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    pub format: Format,
    pub module_name: String,
    pub include_tags: bool,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            format: Format::Verilog,
            module_name: "multiplier".into(),
            include_tags: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("port name `{0}` collides with another name in the module")]
    NameCollision(String),
    #[error("unknown format `{0}` (expected verilog, dot, json or diagram)")]
    UnknownFormat(String),
    #[error("the diagram format needs a reduction trace")]
    NoTrace,
}

const KEYWORDS: &[&str] = &[
    "module", "endmodule", "input", "output", "inout", "wire", "reg", "assign", "and", "or", "xor", "nand", "nor",
    "xnor", "not", "buf", "begin", "end", "always", "initial", "if", "else", "case", "for",
];

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

/// Names of the form `n<digits>` or `g<digits>` are reserved for wires and instances.
fn is_reserved(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('n' | 'g')) && s.len() > 1 && chars.all(|c| c.is_ascii_digit())
}

fn check_names(netlist: &Netlist, module: &str) -> Result<(), EmitError> {
    if !is_identifier(module) || KEYWORDS.contains(&module) {
        return Err(EmitError::BadIdentifier(module.to_string()));
    }
    let mut seen = BTreeSet::new();
    for port in netlist.ports_in().iter().chain(netlist.ports_out()) {
        if !is_identifier(&port.name) || KEYWORDS.contains(&port.name.as_str()) {
            return Err(EmitError::BadIdentifier(port.name.clone()));
        }
        if is_reserved(&port.name) || port.name == module || !seen.insert(port.name.as_str()) {
            return Err(EmitError::NameCollision(port.name.clone()));
        }
    }
    Ok(())
}

fn range(width: usize) -> String {
    if width == 1 {
        String::new()
    } else {
        format!("[{}:0] ", width - 1)
    }
}

fn net_ref(netlist: &Netlist, net: NetId) -> String {
    match netlist.driver(net) {
        Driver::Input { port, bit } => {
            let p = &netlist.ports_in()[port];
            if p.width() == 1 {
                p.name.clone()
            } else {
                format!("{}[{bit}]", p.name)
            }
        }
        Driver::Gate(_) => format!("n{}", net.0),
    }
}

fn primitive(kind: GateKind) -> &'static str {
    match kind {
        GateKind::And2 => "and",
        GateKind::Or2 => "or",
        GateKind::Xor2 => "xor",
        GateKind::Nand2 => "nand",
        GateKind::Nor2 => "nor",
        GateKind::Xnor2 => "xnor",
        GateKind::Not => "not",
        GateKind::Mux2 => "mux",
    }
}

/// Declarations that merge consecutive same-width ports: `input [7:0] a, b;`.
fn declare(out: &mut String, dir: &str, ports: &[crate::netlist::Port]) {
    let mut i = 0;
    while i < ports.len() {
        let w = ports[i].width();
        let mut names = vec![ports[i].name.as_str()];
        while i + names.len() < ports.len() && ports[i + names.len()].width() == w {
            names.push(&ports[i + names.len()].name);
        }
        let _ = writeln!(out, "  {dir} {}{};", range(w), names.join(", "));
        i += names.len();
    }
}

pub fn emit_verilog(netlist: &Netlist, options: &EmitOptions) -> Result<String, EmitError> {
    check_names(netlist, &options.module_name)?;
    let mut out = String::new();
    let ports: Vec<&str> = netlist
        .ports_in()
        .iter()
        .chain(netlist.ports_out())
        .map(|p| p.name.as_str())
        .collect();
    let _ = writeln!(out, "module {} ({});", options.module_name, ports.join(", "));
    declare(&mut out, "input", netlist.ports_in());
    declare(&mut out, "output", netlist.ports_out());
    if !netlist.gates().is_empty() {
        out.push('\n');
        for gate in netlist.gates() {
            let _ = writeln!(out, "  wire n{};", gate.output.0);
        }
    }
    let mut last_tag: Option<&str> = None;
    for gate in netlist.gates() {
        if options.include_tags && last_tag != Some(gate.tag.as_str()) {
            out.push('\n');
            if !gate.tag.is_empty() {
                let _ = writeln!(out, "  // {}", gate.tag);
            }
            last_tag = Some(&gate.tag);
        } else if last_tag.is_none() {
            out.push('\n');
            last_tag = Some(&gate.tag);
        }
        let ins: Vec<String> = gate.inputs.iter().map(|&n| net_ref(netlist, n)).collect();
        let y = format!("n{}", gate.output.0);
        if gate.kind == GateKind::Mux2 {
            let _ = writeln!(out, "  assign {y} = {} ? {} : {};", ins[2], ins[1], ins[0]);
        } else {
            let _ = writeln!(out, "  {} g{} ({y}, {});", primitive(gate.kind), gate.id.0, ins.join(", "));
        }
    }
    if !netlist.ports_out().is_empty() {
        out.push('\n');
    }
    for port in netlist.ports_out() {
        for (bit, &net) in port.bits.iter().enumerate() {
            let lhs = if port.width() == 1 {
                port.name.clone()
            } else {
                format!("{}[{bit}]", port.name)
            };
            let _ = writeln!(out, "  assign {lhs} = {};", net_ref(netlist, net));
        }
    }
    out.push_str("endmodule\n");
    Ok(out)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph: one node per gate and per port bit, one edge per gate input
/// and per output-port bit.
pub fn emit_dot(netlist: &Netlist, options: &EmitOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(&options.module_name));
    out.push_str("  rankdir=LR;\n");
    for port in netlist.ports_in() {
        for bit in 0..port.width() {
            let _ = writeln!(out, "  \"in:{0}[{bit}]\" [shape=box, label=\"{0}[{bit}]\"];", dot_escape(&port.name));
        }
    }
    for gate in netlist.gates() {
        let label = if options.include_tags && !gate.tag.is_empty() {
            format!("{}\\n{}", gate.kind, dot_escape(&gate.tag))
        } else {
            gate.kind.to_string()
        };
        let _ = writeln!(out, "  g{} [label=\"{label}\"];", gate.id.0);
    }
    for port in netlist.ports_out() {
        for bit in 0..port.width() {
            let _ = writeln!(out, "  \"out:{0}[{bit}]\" [shape=box, label=\"{0}[{bit}]\"];", dot_escape(&port.name));
        }
    }
    let source = |net: NetId| match netlist.driver(net) {
        Driver::Input { port, bit } => format!("\"in:{}[{bit}]\"", dot_escape(&netlist.ports_in()[port].name)),
        Driver::Gate(g) => format!("g{}", g.0),
    };
    for gate in netlist.gates() {
        for &net in &gate.inputs {
            let _ = writeln!(out, "  {} -> g{};", source(net), gate.id.0);
        }
    }
    for port in netlist.ports_out() {
        for (bit, &net) in port.bits.iter().enumerate() {
            let _ = writeln!(out, "  {} -> \"out:{}[{bit}]\";", source(net), dot_escape(&port.name));
        }
    }
    out.push_str("}\n");
    out
}

/// Dot diagram of every reduction matrix with captions `S0` (partial
/// products) through `Sk`, most significant column on the left.
pub fn emit_diagram(trace: &ReductionTrace) -> String {
    let width = trace.matrices.iter().map(|m| m.width()).max().unwrap_or(0);
    let groups: Vec<String> = trace
        .matrices
        .iter()
        .enumerate()
        .map(|(k, m)| format!("S{k}\n{}", render_group(m, width)))
        .collect();
    groups.join("\n")
}
