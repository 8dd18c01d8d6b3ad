//! Final adders and top-level designs.
//!
//! Designs use the port contract `a`, `b` -> `p` for the multiplier and
//! `a`, `b`, `c` -> `out` for the MAC, bit 0 first.

use crate::cells::Logic;
use crate::netlist::{CellKind, GateKind, NetId, Netlist, NetlistBuilder};
use crate::reduction::{gen_partial_products, DotMatrix, ReductionTrace, Scheduler};
use crate::{Error, Result};

pub const RCA_TAG: &str = "Final RCA";
pub const CSA_TAG: &str = "Final CSA";
pub const ACCUMULATOR_TAG: &str = "Accumulator Unit";
pub const OUTPUT_INVERTER_TAG: &str = "Output Inverters";

pub const MIN_WIDTH: usize = 2;
/// Keeps the MAC result within 64 bits.
pub const MAX_WIDTH: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FinalAdder {
    #[default]
    Rca,
    SqrtCsa,
}

impl FinalAdder {
    pub fn name(self) -> &'static str {
        match self {
            FinalAdder::Rca => "rca",
            FinalAdder::SqrtCsa => "sqrt_csa",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierConfig {
    pub width: usize,
    pub reduction: Scheduler,
    pub final_adder: FinalAdder,
    pub logic: Logic,
    /// Segment widths of the carry-select adder, low segment first;
    /// `None` picks [`sqrt_splits`] for the generated chain.
    pub csa_splits: Option<Vec<usize>>,
    /// Drops the carry logic of the most significant adder position.
    pub msb_and_optimization: bool,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        MultiplierConfig {
            width: 8,
            reduction: Scheduler::Wallace,
            final_adder: FinalAdder::Rca,
            logic: Logic::Standard,
            csa_splits: None,
            msb_and_optimization: false,
        }
    }
}

impl MultiplierConfig {
    pub fn with_width(width: usize) -> Self {
        MultiplierConfig {
            width,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&self.width) {
            return Err(Error::Config(format!(
                "width must be between {MIN_WIDTH} and {MAX_WIDTH}, got {}",
                self.width
            )));
        }
        let bad = |s: &Vec<usize>| s.is_empty() || s.contains(&0);
        if self.final_adder == FinalAdder::SqrtCsa && self.csa_splits.as_ref().is_some_and(bad) {
            return Err(Error::Config("carry-select splits must be non-empty and positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[derive(Default)]
pub struct MacConfig {
    pub multiplier: MultiplierConfig,
}


impl MacConfig {
    pub fn addend_width(&self) -> usize {
        2 * self.multiplier.width
    }

    pub fn output_width(&self) -> usize {
        2 * self.multiplier.width + 1
    }
}

/// Shape of the generated final adder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalAdderInfo {
    pub tag: String,
    /// First column holding two operands, where the carry chain starts.
    pub chain_start: usize,
    /// Adder positions from `chain_start` to the top output bit.
    pub chain_len: usize,
    /// Carry-select segments as `[lo, hi)` column ranges; empty for a ripple adder.
    pub segments: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Design {
    pub netlist: Netlist,
    pub trace: ReductionTrace,
    pub final_adder: FinalAdderInfo,
}

/// Options shared by both final adders.
#[derive(Debug, Clone, Copy)]
pub struct AdderOptions<'a> {
    pub logic: Logic,
    pub tag: &'a str,
    /// Emit only sum logic at the top position.
    pub sum_only_msb: bool,
}

/// A logical bit: a constant or a net in the design's polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bit {
    Zero,
    One,
    Net(NetId),
}

fn column_ops(cols: &DotMatrix, w: usize) -> Result<&[NetId]> {
    let ops = cols.column(w);
    if ops.len() > 2 {
        return Err(Error::Precondition(format!(
            "final adder column {w} holds {} bits; at most 2 allowed",
            ops.len()
        )));
    }
    Ok(ops)
}

/// One adder position: column operands plus an incoming carry.
fn position(b: &mut NetlistBuilder, opt: &AdderOptions, ops: &[NetId], carry: Bit, top: bool) -> Result<(Bit, Bit)> {
    let tag = opt.tag;
    let mut nets = ops.to_vec();
    if let Bit::Net(c) = carry {
        nets.push(c);
    }
    let negated = opt.logic == Logic::Negated;
    match (carry, nets.as_slice()) {
        (Bit::One, []) => Ok((Bit::One, Bit::Zero)),
        (Bit::One, &[x]) => Ok(b.cell(CellKind::HalfAdder, |b| {
            let sum = b.add_gate(GateKind::Not, &[x], tag)?;
            Ok((Bit::Net(sum), Bit::Net(x)))
        })?),
        (Bit::One, &[x, y]) => Ok(b.cell(CellKind::HalfAdder, |b| {
            let (s, c) = if negated {
                (GateKind::Xor2, GateKind::And2)
            } else {
                (GateKind::Xnor2, GateKind::Or2)
            };
            let sum = b.add_gate(s, &[x, y], tag)?;
            if top {
                return Ok((Bit::Net(sum), Bit::Zero));
            }
            let carry = b.add_gate(c, &[x, y], tag)?;
            Ok((Bit::Net(sum), Bit::Net(carry)))
        })?),
        (_, []) => Ok((Bit::Zero, Bit::Zero)),
        (_, &[x]) => Ok((Bit::Net(x), Bit::Zero)),
        (_, &[x, y]) if top => Ok(b.cell(CellKind::HalfAdder, |b| {
            let kind = if negated { GateKind::Xnor2 } else { GateKind::Xor2 };
            Ok((Bit::Net(b.add_gate(kind, &[x, y], tag)?), Bit::Zero))
        })?),
        (_, &[x, y]) => {
            let sc = opt.logic.half_adder(b, x, y, tag)?;
            Ok((Bit::Net(sc.sum), Bit::Net(sc.carry)))
        }
        (_, &[x, y, z]) if top => Ok(b.cell(CellKind::FullAdder, |b| {
            let t = b.add_gate(GateKind::Xor2, &[x, y], tag)?;
            Ok((Bit::Net(b.add_gate(GateKind::Xor2, &[t, z], tag)?), Bit::Zero))
        })?),
        (_, &[x, y, z]) => {
            let sc = opt.logic.full_adder(b, x, y, z, tag)?;
            Ok((Bit::Net(sc.sum), Bit::Net(sc.carry)))
        }
        _ => Err(Error::Precondition(format!("adder position with {} operands", nets.len()))),
    }
}

fn require_net(bit: Bit, w: usize) -> Result<NetId> {
    match bit {
        Bit::Net(n) => Ok(n),
        _ => Err(Error::Precondition(format!("output bit {w} would be a constant"))),
    }
}

/// Default carry-select segments for a chain of `positions`: widths
/// 2, 2, 3, 4, 5, ... while they fit; the rest ripples. Gives `[2, 2, 3, 4]`
/// for the 11-position chain of the 8-bit Wallace design.
pub fn sqrt_splits(positions: usize) -> Vec<usize> {
    let mut splits = Vec::new();
    let mut next = 2;
    let mut used = 0;
    while used + next <= positions {
        splits.push(next);
        used += next;
        if splits.len() > 1 {
            next += 1;
        }
    }
    splits
}

/// First column with two operands, if any.
fn chain_start(cols: &DotMatrix, width: usize) -> Option<usize> {
    (0..width.min(cols.width())).find(|&w| cols.column(w).len() >= 2)
}

/// Ripple-carry adder over a two-row matrix, producing `width` output bits.
/// Columns at or above `width` are dropped.
pub fn build_rca(b: &mut NetlistBuilder, cols: &DotMatrix, width: usize, opt: &AdderOptions) -> Result<Vec<NetId>> {
    let mut carry = Bit::Zero;
    let mut out = Vec::with_capacity(width);
    for w in 0..width {
        let ops = column_ops(cols, w)?;
        let (sum, next) = position(b, opt, ops, carry, opt.sum_only_msb && w + 1 == width)?;
        out.push(require_net(sum, w)?);
        carry = next;
    }
    Ok(out)
}

/// A selector between two logical bits on a carry net, simplified when
/// either data input is constant.
fn select(b: &mut NetlistBuilder, opt: &AdderOptions, sel: NetId, when0: Bit, when1: Bit) -> Result<Bit> {
    let negated = opt.logic == Logic::Negated;
    // Physical view: the select net is high for carry 1, or for carry 0 when negated.
    let (p0, p1) = if negated { (when1, when0) } else { (when0, when1) };
    let phys = |bit: Bit| match bit {
        Bit::Zero => Err(negated),
        Bit::One => Err(!negated),
        Bit::Net(n) => Ok(n),
    };
    if p0 == p1 {
        return Ok(p0);
    }
    let tag = opt.tag;
    let out = b.cell(CellKind::Mux, |b| {
        b.set_cell_select(sel)?;
        let out = match (phys(p0), phys(p1)) {
            (Err(v0), Err(v1)) => {
                debug_assert_ne!(v0, v1);
                if v1 {
                    return Ok(Bit::Net(sel));
                }
                b.add_gate(GateKind::Not, &[sel], tag)?
            }
            (Err(false), Ok(y)) => b.add_gate(GateKind::And2, &[sel, y], tag)?,
            (Ok(x), Err(true)) => b.add_gate(GateKind::Or2, &[sel, x], tag)?,
            (Ok(x), Err(false)) => {
                let ns = b.add_gate(GateKind::Not, &[sel], tag)?;
                b.add_gate(GateKind::And2, &[ns, x], tag)?
            }
            (Err(true), Ok(y)) => {
                let ns = b.add_gate(GateKind::Not, &[sel], tag)?;
                b.add_gate(GateKind::Or2, &[ns, y], tag)?
            }
            (Ok(x), Ok(y)) => b.add_gate(GateKind::Mux2, &[x, y, sel], tag)?,
        };
        Ok(Bit::Net(out))
    })?;
    Ok(out)
}

/// Square-root carry-select adder.
///
/// The carry chain starts at the first two-operand column. The first split
/// is a plain ripple segment; each later split is built for carry-in 0 and
/// carry-in 1 and the sums and carry-out are selected by the incoming carry.
/// Positions above the last split ripple.
pub fn build_sqrt_csa(
    b: &mut NetlistBuilder,
    cols: &DotMatrix,
    width: usize,
    splits: &[usize],
    opt: &AdderOptions,
) -> Result<(Vec<NetId>, Vec<(usize, usize)>)> {
    let Some(start) = chain_start(cols, width) else {
        return Ok((build_rca(b, cols, width, opt)?, Vec::new()));
    };
    let covered: usize = splits.iter().sum();
    if start + covered > width {
        return Err(Error::Config(format!(
            "carry-select splits {splits:?} cover {covered} positions but the chain has {}",
            width - start
        )));
    }
    let top = |w: usize| opt.sum_only_msb && w + 1 == width;
    let mut out = Vec::with_capacity(width);
    let mut carry = Bit::Zero;
    for w in 0..start {
        let (sum, next) = position(b, opt, column_ops(cols, w)?, carry, top(w))?;
        out.push(require_net(sum, w)?);
        carry = next;
    }
    let mut segments = Vec::new();
    let mut lo = start;
    for (k, &len) in splits.iter().enumerate() {
        let hi = lo + len;
        segments.push((lo, hi));
        if k == 0 {
            for w in lo..hi {
                let (sum, next) = position(b, opt, column_ops(cols, w)?, carry, top(w))?;
                out.push(require_net(sum, w)?);
                carry = next;
            }
        } else {
            let mut chains = Vec::new();
            for cin in [Bit::Zero, Bit::One] {
                let mut c = cin;
                let mut sums = Vec::new();
                for w in lo..hi {
                    let (s, next) = position(b, opt, column_ops(cols, w)?, c, top(w))?;
                    sums.push(s);
                    c = next;
                }
                chains.push((sums, c));
            }
            let (sums1, c1) = chains.pop().expect("two chains");
            let (sums0, c0) = chains.pop().expect("two chains");
            match carry {
                Bit::Net(sel) => {
                    for (i, (s0, s1)) in sums0.into_iter().zip(sums1).enumerate() {
                        let s = select(b, opt, sel, s0, s1)?;
                        out.push(require_net(s, lo + i)?);
                    }
                    carry = select(b, opt, sel, c0, c1)?;
                }
                Bit::Zero | Bit::One => {
                    let (sums, c) = if carry == Bit::Zero { (sums0, c0) } else { (sums1, c1) };
                    for (i, s) in sums.into_iter().enumerate() {
                        out.push(require_net(s, lo + i)?);
                    }
                    carry = c;
                }
            }
        }
        lo = hi;
    }
    for w in lo..width {
        let (sum, next) = position(b, opt, column_ops(cols, w)?, carry, top(w))?;
        out.push(require_net(sum, w)?);
        carry = next;
    }
    Ok((out, segments))
}

/// Partial products, reduction and final adder; returns the product bits
/// in the design's polarity.
fn build_core(b: &mut NetlistBuilder, config: &MultiplierConfig) -> Result<(Vec<NetId>, ReductionTrace, FinalAdderInfo)> {
    config.validate()?;
    let n = config.width;
    let a = b.add_input_port("a", n)?;
    let x = b.add_input_port("b", n)?;
    let pp = gen_partial_products(b, &a, &x, config.logic)?;
    let trace = config.reduction.reduce(b, pp, config.logic)?;
    let rows = trace.rows().clone();
    let width = 2 * n;
    let tag = match config.final_adder {
        FinalAdder::Rca => RCA_TAG,
        FinalAdder::SqrtCsa => CSA_TAG,
    };
    let opt = AdderOptions {
        logic: config.logic,
        tag,
        sum_only_msb: config.msb_and_optimization,
    };
    let (bits, segments) = match config.final_adder {
        FinalAdder::Rca => (build_rca(b, &rows, width, &opt)?, Vec::new()),
        FinalAdder::SqrtCsa => {
            let splits = match &config.csa_splits {
                Some(s) => s.clone(),
                None => sqrt_splits(width - chain_start(&rows, width).unwrap_or(width)),
            };
            build_sqrt_csa(b, &rows, width, &splits, &opt)?
        }
    };
    let start = chain_start(&rows, width).unwrap_or(width);
    let info = FinalAdderInfo {
        tag: tag.to_string(),
        chain_start: start,
        chain_len: width - start,
        segments,
    };
    Ok((bits, trace, info))
}

fn output_inverters(b: &mut NetlistBuilder, bits: Vec<NetId>) -> Result<Vec<NetId>> {
    bits.into_iter()
        .map(|n| Ok(b.add_gate(GateKind::Not, &[n], OUTPUT_INVERTER_TAG)?))
        .collect()
}

/// `p = a * b` with ports `a[n-1:0]`, `b[n-1:0]`, `p[2n-1:0]`.
pub fn build_multiplier(config: &MultiplierConfig) -> Result<Design> {
    let mut b = NetlistBuilder::new();
    let (mut bits, trace, final_adder) = build_core(&mut b, config)?;
    if config.logic == Logic::Negated {
        bits = output_inverters(&mut b, bits)?;
    }
    b.add_output_port("p", bits)?;
    Ok(Design {
        netlist: b.build()?,
        trace,
        final_adder,
    })
}

/// `out = a * b + c` with ports `a`, `b`, `c[2n-1:0]`, `out[2n:0]`.
///
/// The accumulator is a ripple chain: a half adder at bit 0, full adders
/// above, and the last carry as the top output bit.
pub fn build_mac(config: &MacConfig) -> Result<Design> {
    let mut b = NetlistBuilder::new();
    let (product, trace, final_adder) = build_core(&mut b, &config.multiplier)?;
    let logic = config.multiplier.logic;
    let c = b.add_input_port("c", config.addend_width())?;
    let c_bits: Vec<NetId> = match logic {
        Logic::Standard => c,
        Logic::Negated => c
            .iter()
            .map(|&n| Ok(b.shared_inverter(n, ACCUMULATOR_TAG)?))
            .collect::<Result<_>>()?,
    };
    let mut out = Vec::with_capacity(config.output_width());
    let mut carry: Option<NetId> = None;
    for (&p, &q) in product.iter().zip(&c_bits) {
        let sc = match carry {
            None => logic.half_adder(&mut b, p, q, ACCUMULATOR_TAG)?,
            Some(cin) => logic.full_adder(&mut b, p, q, cin, ACCUMULATOR_TAG)?,
        };
        out.push(sc.sum);
        carry = Some(sc.carry);
    }
    out.push(carry.expect("width >= 2"));
    if logic == Logic::Negated {
        out = output_inverters(&mut b, out)?;
    }
    b.add_output_port("out", out)?;
    Ok(Design {
        netlist: b.build()?,
        trace,
        final_adder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{eval, from_bits, net_values, to_bits, Assignment};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mul(n: &Netlist, a: u64, x: u64) -> u128 {
        eval(n, &Assignment::from_ports(n, &[("a", a), ("b", x)]))
            .unwrap()
            .value("p")
            .unwrap()
    }

    /// Two-row adder harness: ports `x`, `y` of `w` bits, sum output `s` of `w + 1` bits.
    fn adder(w: usize, csa: Option<&[usize]>, logic: Logic) -> Netlist {
        let mut b = NetlistBuilder::new();
        let x = b.add_input_port("x", w).unwrap();
        let y = b.add_input_port("y", w).unwrap();
        let (xs, ys): (Vec<NetId>, Vec<NetId>) = match logic {
            Logic::Standard => (x, y),
            Logic::Negated => (
                x.iter().map(|&n| b.add_gate(GateKind::Not, &[n], "in").unwrap()).collect(),
                y.iter().map(|&n| b.add_gate(GateKind::Not, &[n], "in").unwrap()).collect(),
            ),
        };
        let mut cols: Vec<Vec<NetId>> = xs.iter().zip(&ys).map(|(&p, &q)| vec![p, q]).collect();
        cols.push(Vec::new());
        let m = DotMatrix::new(cols);
        let opt = AdderOptions {
            logic,
            tag: "adder",
            sum_only_msb: false,
        };
        // The top column is empty; its output bit is the final carry.
        let mut bits = match csa {
            None => build_rca(&mut b, &m, w, &opt).unwrap(),
            Some(s) => build_sqrt_csa(&mut b, &m, w, s, &opt).unwrap().0,
        };
        if logic == Logic::Negated {
            bits = bits
                .into_iter()
                .map(|n| b.add_gate(GateKind::Not, &[n], "out").unwrap())
                .collect();
        }
        b.add_output_port("s", bits).unwrap();
        b.build().unwrap()
    }

    fn add(n: &Netlist, w: usize, x: u64, y: u64) -> u128 {
        let mut v = to_bits(x as u128, w);
        v.extend(to_bits(y as u128, w));
        let vals = net_values(n, &v);
        from_bits(
            &n.port_out("s")
                .unwrap()
                .bits
                .iter()
                .map(|b| vals[b.index()])
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn reference_cases() {
        let n = build_multiplier(&MultiplierConfig::default()).unwrap().netlist;
        assert_eq!(mul(&n, 27, 31), 837);
        assert_eq!(mul(&n, 0, 255), 0);
        assert_eq!(mul(&n, 1, 1), 1);
        assert_eq!(mul(&n, 255, 255), 0b1111111000000001);
    }

    #[test]
    fn ports_follow_contract() {
        let n = build_multiplier(&MultiplierConfig::default()).unwrap().netlist;
        assert_eq!(n.port_in("a").unwrap().width(), 8);
        assert_eq!(n.port_in("b").unwrap().width(), 8);
        assert_eq!(n.port_out("p").unwrap().width(), 16);
        let mac = build_mac(&MacConfig::default()).unwrap().netlist;
        assert_eq!(mac.port_in("c").unwrap().width(), 16);
        assert_eq!(mac.port_out("out").unwrap().width(), 17);
    }

    #[test]
    fn rca_and_csa_add_random_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for logic in [Logic::Standard, Logic::Negated] {
            let rca = adder(12, None, logic);
            let csa = adder(12, Some(&[2, 2, 3, 4]), logic);
            for _ in 0..1000 {
                let (x, y) = (rng.gen_range(0..1u64 << 12), rng.gen_range(0..1u64 << 12));
                let want = (x + y) as u128 & 0xfff;
                assert_eq!(add(&rca, 12, x, y), want);
                assert_eq!(add(&csa, 12, x, y), want);
            }
            assert_eq!(add(&rca, 12, 0, 0), 0);
        }
    }

    #[test]
    fn csa_costs_more_than_rca() {
        let rca = build_multiplier(&MultiplierConfig::default()).unwrap();
        let csa = build_multiplier(&MultiplierConfig {
            final_adder: FinalAdder::SqrtCsa,
            ..MultiplierConfig::default()
        })
        .unwrap();
        let count = |d: &Design, tag: &str| {
            d.netlist
                .inventory_by_tag()
                .into_iter()
                .find(|(t, _)| t == tag)
                .map(|(_, inv)| inv.total())
                .unwrap()
        };
        assert!(count(&csa, CSA_TAG) > count(&rca, RCA_TAG));
        assert_eq!(csa.final_adder.segments, vec![(5, 7), (7, 9), (9, 12), (12, 16)]);
    }

    #[test]
    fn splits_beyond_chain_are_rejected() {
        let config = MultiplierConfig {
            final_adder: FinalAdder::SqrtCsa,
            csa_splits: Some(vec![4, 4, 4, 4]),
            ..MultiplierConfig::default()
        };
        assert!(matches!(build_multiplier(&config), Err(Error::Config(_))));
    }

    #[test]
    fn tall_column_is_a_precondition_error() {
        let mut b = NetlistBuilder::new();
        let x = b.add_input_port("x", 3).unwrap();
        let m = DotMatrix::new(vec![x]);
        let opt = AdderOptions {
            logic: Logic::Standard,
            tag: "t",
            sum_only_msb: false,
        };
        assert!(matches!(build_rca(&mut b, &m, 2, &opt), Err(Error::Precondition(_))));
    }

    #[test]
    fn default_splits() {
        assert_eq!(sqrt_splits(11), vec![2, 2, 3, 4]);
        assert_eq!(sqrt_splits(2), vec![2]);
        assert_eq!(sqrt_splits(1), Vec::<usize>::new());
        assert_eq!(sqrt_splits(16), vec![2, 2, 3, 4, 5]);
    }

    #[test]
    fn width_limits() {
        assert!(build_multiplier(&MultiplierConfig::with_width(1)).is_err());
        assert!(build_multiplier(&MultiplierConfig::with_width(32)).is_err());
    }

    #[test]
    fn negated_design_has_output_inverters() {
        let d = build_multiplier(&MultiplierConfig {
            logic: Logic::Negated,
            ..MultiplierConfig::default()
        })
        .unwrap();
        let inv = d
            .netlist
            .inventory_by_tag()
            .into_iter()
            .find(|(t, _)| t == OUTPUT_INVERTER_TAG)
            .unwrap()
            .1;
        assert_eq!(inv.count(GateKind::Not), 16);
        assert_eq!(inv.total(), 16);
        assert_eq!(mul(&d.netlist, 27, 31), 837);
    }

    #[test]
    fn mac_cases() {
        for logic in [Logic::Standard, Logic::Negated] {
            let config = MacConfig {
                multiplier: MultiplierConfig {
                    logic,
                    ..MultiplierConfig::default()
                },
            };
            let n = build_mac(&config).unwrap().netlist;
            for (a, x, c, want) in [(111, 223, 14191, 38944), (255, 255, 65535, 130560), (0, 0, 0, 0)] {
                let out = eval(&n, &Assignment::from_ports(&n, &[("a", a), ("b", x), ("c", c)])).unwrap();
                assert_eq!(out.value("out"), Some(want));
            }
        }
    }
}
