//! Arithmetic cell builders: half and full adders, their complement-logic
//! forms, the 5-3 compressor and the 2:1 mux.
//!
//! Complement cells take nets holding the inverse of the logical operand and
//! produce the inverse of the logical sum and carry. Wrapping one in inverters
//! on every input and output yields the ordinary cell.

use crate::netlist::{CellKind, GateKind, NetId, NetlistBuilder, Result};

/// Sum at the cell's weight `w`, carry at `w + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumCarry {
    pub sum: NetId,
    pub carry: NetId,
}

/// Outputs of a 5-3 compressor: one bit at weight `w`, two at `w + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfaOut {
    pub sum: NetId,
    pub carry1: NetId,
    pub carry2: NetId,
}

/// Signal polarity used throughout a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Logic {
    /// Nets carry the logical value.
    #[default]
    Standard,
    /// Nets between the NAND array and the output inverters carry the complement.
    Negated,
}

impl Logic {
    pub fn half_adder(self, b: &mut NetlistBuilder, x: NetId, y: NetId, tag: &str) -> Result<SumCarry> {
        match self {
            Logic::Standard => build_half_adder(b, x, y, tag),
            Logic::Negated => build_complement_half_adder(b, x, y, tag),
        }
    }

    pub fn full_adder(
        self,
        b: &mut NetlistBuilder,
        x: NetId,
        y: NetId,
        cin: NetId,
        tag: &str,
    ) -> Result<SumCarry> {
        match self {
            Logic::Standard => build_full_adder(b, x, y, cin, tag),
            Logic::Negated => build_complement_full_adder(b, x, y, cin, tag),
        }
    }

    pub fn cfa(self, b: &mut NetlistBuilder, inputs: [NetId; 5], tag: &str) -> Result<CfaOut> {
        b.cell(CellKind::Cfa, |b| {
            let [x0, x1, x2, x3, x4] = inputs;
            let first = self.full_adder(b, x0, x1, x2, tag)?;
            let second = self.full_adder(b, first.sum, x3, x4, tag)?;
            Ok(CfaOut {
                sum: second.sum,
                carry1: first.carry,
                carry2: second.carry,
            })
        })
    }
}

/// `sum = a ^ b`, `carry = a & b`.
pub fn build_half_adder(b: &mut NetlistBuilder, x: NetId, y: NetId, tag: &str) -> Result<SumCarry> {
    b.cell(CellKind::HalfAdder, |b| {
        let sum = b.add_gate(GateKind::Xor2, &[x, y], tag)?;
        let carry = b.add_gate(GateKind::And2, &[x, y], tag)?;
        Ok(SumCarry { sum, carry })
    })
}

/// Two XORs, two ANDs and an OR: `carry = ((a ^ b) & cin) | (a & b)`.
pub fn build_full_adder(
    b: &mut NetlistBuilder,
    x: NetId,
    y: NetId,
    cin: NetId,
    tag: &str,
) -> Result<SumCarry> {
    b.cell(CellKind::FullAdder, |b| {
        let half = b.add_gate(GateKind::Xor2, &[x, y], tag)?;
        let sum = b.add_gate(GateKind::Xor2, &[half, cin], tag)?;
        let propagate = b.add_gate(GateKind::And2, &[half, cin], tag)?;
        let generate = b.add_gate(GateKind::And2, &[x, y], tag)?;
        let carry = b.add_gate(GateKind::Or2, &[propagate, generate], tag)?;
        Ok(SumCarry { sum, carry })
    })
}

/// Complement full adder over inverted operands.
///
/// With `t = XNOR(a', b')`:
/// `sum' = XNOR(t, cin')`, `carry' = NOR(NOR(t, cin'), NOR(a', b'))`.
/// Transmission-gate XNORs need the true polarity of both inputs, so the
/// XNORs read inverted copies of their operands; the four inverters are the
/// ones on `a'`, `b'`, `t` and `cin'`. The carry NORs read the raw nets.
pub fn build_complement_full_adder(
    b: &mut NetlistBuilder,
    x_n: NetId,
    y_n: NetId,
    cin_n: NetId,
    tag: &str,
) -> Result<SumCarry> {
    b.cell(CellKind::FullAdder, |b| {
        let x = b.shared_inverter(x_n, tag)?;
        let y = b.shared_inverter(y_n, tag)?;
        let t = b.add_gate(GateKind::Xnor2, &[x, y], tag)?;
        let t_inv = b.add_gate(GateKind::Not, &[t], tag)?;
        let cin = b.shared_inverter(cin_n, tag)?;
        let sum = b.add_gate(GateKind::Xnor2, &[t_inv, cin], tag)?;
        let kill_cin = b.add_gate(GateKind::Nor2, &[t, cin_n], tag)?;
        let kill_ab = b.add_gate(GateKind::Nor2, &[x_n, y_n], tag)?;
        let carry = b.add_gate(GateKind::Nor2, &[kill_cin, kill_ab], tag)?;
        Ok(SumCarry { sum, carry })
    })
}

/// Complement half adder: `sum' = XNOR(~a', ~b')`, `carry' = NAND(~a', ~b')`.
pub fn build_complement_half_adder(
    b: &mut NetlistBuilder,
    x_n: NetId,
    y_n: NetId,
    tag: &str,
) -> Result<SumCarry> {
    b.cell(CellKind::HalfAdder, |b| {
        let x = b.shared_inverter(x_n, tag)?;
        let y = b.shared_inverter(y_n, tag)?;
        let sum = b.add_gate(GateKind::Xnor2, &[x, y], tag)?;
        let carry = b.add_gate(GateKind::Nand2, &[x, y], tag)?;
        Ok(SumCarry { sum, carry })
    })
}

/// 5-3 compressor: `FA(a, b, c)` then `FA(s1, d, e)`. Callers choose which
/// three inputs feed the first adder by argument order.
pub fn build_cfa(b: &mut NetlistBuilder, inputs: [NetId; 5], tag: &str) -> Result<CfaOut> {
    Logic::Standard.cfa(b, inputs, tag)
}

pub fn build_complement_cfa(b: &mut NetlistBuilder, inputs: [NetId; 5], tag: &str) -> Result<CfaOut> {
    Logic::Negated.cfa(b, inputs, tag)
}

/// `sel ? d1 : d0` as a single MUX2 gate.
pub fn build_mux2(b: &mut NetlistBuilder, d0: NetId, d1: NetId, sel: NetId, tag: &str) -> Result<NetId> {
    b.cell(CellKind::Mux, |b| {
        b.set_cell_select(sel)?;
        b.add_gate(GateKind::Mux2, &[d0, d1, sel], tag)
    })
}
