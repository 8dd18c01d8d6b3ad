//! Partial-product generation and dot-matrix reduction schedules.
//!
//! A [`DotMatrix`] holds, per weight, the nets still waiting to be summed.
//! Each scheduler rewrites it stage by stage with adder cells until every
//! column is at most two bits high, recording a [`StageReport`] per stage.
//!
//! Within a column, bits are consumed in the order they were inserted. The
//! next matrix lists untouched bits first, then the sums produced in that
//! column, then the carries arriving from the column below.

use std::fmt::Write;

use crate::cells::Logic;
use crate::netlist::{GateKind, NetId, NetlistBuilder};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotMatrix {
    columns: Vec<Vec<NetId>>,
}

impl DotMatrix {
    pub fn new(columns: Vec<Vec<NetId>>) -> Self {
        let mut m = DotMatrix { columns };
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.columns.last().is_some_and(Vec::is_empty) {
            self.columns.pop();
        }
    }

    pub fn columns(&self) -> &[Vec<NetId>] {
        &self.columns
    }

    pub fn column(&self, weight: usize) -> &[NetId] {
        self.columns.get(weight).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of weights up to and including the highest non-empty column.
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn heights(&self) -> Vec<usize> {
        self.columns.iter().map(Vec::len).collect()
    }

    pub fn max_height(&self) -> usize {
        self.columns.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn dot_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Weighted sum of the bits under a net valuation.
    pub fn value(&self, bit: impl Fn(NetId) -> bool) -> u128 {
        self.columns
            .iter()
            .enumerate()
            .map(|(w, col)| col.iter().filter(|&&n| bit(n)).count() as u128 * (1u128 << w))
            .sum()
    }
}

/// Which reduction schedule to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheduler {
    #[default]
    Wallace,
    Dadda,
    Cfa,
}

impl Scheduler {
    pub fn name(self) -> &'static str {
        match self {
            Scheduler::Wallace => "wallace",
            Scheduler::Dadda => "dadda",
            Scheduler::Cfa => "cfa",
        }
    }

    pub fn reduce(self, b: &mut NetlistBuilder, m: DotMatrix, logic: Logic) -> Result<ReductionTrace> {
        match self {
            Scheduler::Wallace => wallace_reduce(b, m, logic),
            Scheduler::Dadda => dadda_reduce(b, m, logic),
            Scheduler::Cfa => cfa_reduce(b, m, logic),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    /// 1-based stage index.
    pub stage: usize,
    pub fa: usize,
    pub ha: usize,
    pub cfa: usize,
    pub heights: Vec<usize>,
    pub max_height: usize,
}

/// Every intermediate matrix of one reduction, the partial products first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub matrices: Vec<DotMatrix>,
    pub stages: Vec<StageReport>,
}

impl ReductionTrace {
    /// The final two-row matrix handed to the final adder.
    pub fn rows(&self) -> &DotMatrix {
        self.matrices.last().expect("trace holds the initial matrix")
    }

    pub fn total_fa(&self) -> usize {
        self.stages.iter().map(|s| s.fa).sum()
    }

    pub fn total_ha(&self) -> usize {
        self.stages.iter().map(|s| s.ha).sum()
    }

    pub fn total_cfa(&self) -> usize {
        self.stages.iter().map(|s| s.cfa).sum()
    }
}

pub fn and_array_tag(n: usize) -> String {
    format!("{n}x{n} AND Array")
}

pub fn stage_tag(stage: usize) -> String {
    format!("Reduction S{stage}")
}

/// Emits the `n x n` partial-product array; bit `a_i & b_j` lands in column `i + j`.
///
/// Under [`Logic::Negated`] the array uses NAND gates and the matrix holds
/// complemented partial products.
pub fn gen_partial_products(
    b: &mut NetlistBuilder,
    a: &[NetId],
    x: &[NetId],
    logic: Logic,
) -> Result<DotMatrix> {
    let n = a.len();
    if n < 2 || x.len() != n {
        return Err(Error::Config(format!(
            "partial products need two operands of equal width >= 2, got {} and {}",
            a.len(),
            x.len()
        )));
    }
    let kind = match logic {
        Logic::Standard => GateKind::And2,
        Logic::Negated => GateKind::Nand2,
    };
    let tag = and_array_tag(n);
    let mut columns = vec![Vec::new(); 2 * n - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in x.iter().enumerate() {
            let pp = b.cell(crate::netlist::CellKind::And, |b| b.add_gate(kind, &[ai, bj], &tag))?;
            columns[i + j].push(pp);
        }
    }
    Ok(DotMatrix::new(columns))
}

/// Counter groups chosen for one column in one stage.
#[derive(Debug, Clone, Copy, Default)]
struct ColumnPlan {
    cfa: usize,
    fa: usize,
    ha: usize,
}

impl ColumnPlan {
    fn consumed(&self) -> usize {
        5 * self.cfa + 3 * self.fa + 2 * self.ha
    }
}

/// Applies one stage given a per-column plan. `plan` sees the column weight,
/// its height and the number of carries this stage already sends into it.
fn run_stage(
    b: &mut NetlistBuilder,
    m: &DotMatrix,
    stage: usize,
    logic: Logic,
    mut plan: impl FnMut(usize, usize, usize) -> ColumnPlan,
) -> Result<(DotMatrix, StageReport)> {
    let tag = stage_tag(stage);
    let width = m.width();
    let mut kept: Vec<Vec<NetId>> = vec![Vec::new(); width + 1];
    let mut carries: Vec<Vec<NetId>> = vec![Vec::new(); width + 1];
    let (mut fa, mut ha, mut cfa) = (0, 0, 0);
    for (w, col) in m.columns().iter().enumerate() {
        let p = plan(w, col.len(), carries[w].len());
        debug_assert!(p.consumed() <= col.len());
        let mut bits = col.iter().copied();
        let mut next = || bits.next().expect("plan consumes at most the column height");
        for _ in 0..p.cfa {
            let ins = [next(), next(), next(), next(), next()];
            let out = logic.cfa(b, ins, &tag)?;
            kept[w].push(out.sum);
            carries[w + 1].push(out.carry1);
            carries[w + 1].push(out.carry2);
        }
        for _ in 0..p.fa {
            let (x, y, z) = (next(), next(), next());
            let sc = logic.full_adder(b, x, y, z, &tag)?;
            kept[w].push(sc.sum);
            carries[w + 1].push(sc.carry);
        }
        for _ in 0..p.ha {
            let (x, y) = (next(), next());
            let sc = logic.half_adder(b, x, y, &tag)?;
            kept[w].push(sc.sum);
            carries[w + 1].push(sc.carry);
        }
        let rest: Vec<NetId> = col[p.consumed()..].to_vec();
        kept[w].splice(0..0, rest);
        cfa += p.cfa;
        fa += p.fa;
        ha += p.ha;
    }
    let columns = kept
        .into_iter()
        .zip(carries)
        .map(|(mut k, c)| {
            k.extend(c);
            k
        })
        .collect();
    let next = DotMatrix::new(columns);
    let report = StageReport {
        stage,
        fa,
        ha,
        cfa,
        heights: next.heights(),
        max_height: next.max_height(),
    };
    Ok((next, report))
}

fn reduce_with(
    b: &mut NetlistBuilder,
    m: DotMatrix,
    logic: Logic,
    mut more: impl FnMut(&DotMatrix, usize) -> Option<Box<dyn FnMut(usize, usize, usize) -> ColumnPlan>>,
) -> Result<ReductionTrace> {
    let mut matrices = vec![m];
    let mut stages = Vec::new();
    loop {
        let current = matrices.last().expect("non-empty");
        let Some(plan) = more(current, stages.len()) else {
            break;
        };
        let (next, report) = run_stage(b, current, stages.len() + 1, logic, plan)?;
        matrices.push(next);
        stages.push(report);
    }
    Ok(ReductionTrace { matrices, stages })
}

/// Classic maximal reduction: per column `h / 3` full adders plus a half
/// adder when `h % 3 == 2`, repeated until every column is at most 2 high.
///
/// A matrix whose tallest column is exactly 2 still gets one stage, so the
/// 2-bit multiplier goes through a single half-adder stage.
pub fn wallace_reduce(b: &mut NetlistBuilder, m: DotMatrix, logic: Logic) -> Result<ReductionTrace> {
    reduce_with(b, m, logic, |current, done| {
        let h = current.max_height();
        if h > 2 || (done == 0 && h == 2) {
            Some(Box::new(|_, h, _| ColumnPlan {
                cfa: 0,
                fa: h / 3,
                ha: usize::from(h % 3 == 2),
            }))
        } else {
            None
        }
    })
}

/// Dadda's height targets below `n`, largest first: `d1 = 2`, `d(j+1) = floor(3 d(j) / 2)`.
///
/// Returns `[2]` for `n <= 2`, where no stage is needed.
pub fn dadda_targets(n: usize) -> Vec<usize> {
    let mut seq = vec![2usize];
    while seq.last().map(|&d| d * 3 / 2).is_some_and(|d| d < n) {
        let d = seq.last().unwrap() * 3 / 2;
        seq.push(d);
    }
    seq.reverse();
    seq
}

/// Minimal reduction: each stage only places the counters needed to bring
/// every column, carries included, down to that stage's target height.
pub fn dadda_reduce(b: &mut NetlistBuilder, m: DotMatrix, logic: Logic) -> Result<ReductionTrace> {
    let targets = dadda_targets(m.max_height().max(2));
    let mut pending = targets.into_iter();
    reduce_with(b, m, logic, move |current, _| {
        let h = current.max_height();
        let target = pending.by_ref().find(|&t| t < h)?;
        Some(Box::new(move |_, h, carries_in| {
            let mut p = ColumnPlan::default();
            loop {
                let height = h - 2 * p.fa - p.ha + carries_in;
                let free = h - p.consumed();
                if height <= target || free < 2 {
                    break;
                }
                if height - target >= 2 && free >= 3 {
                    p.fa += 1;
                } else {
                    p.ha += 1;
                }
            }
            p
        }))
    })
}

/// Greedy 5-3 compressor reduction: per column as many 5-input compressors as
/// fit, then full adders on groups of 3, then a half adder on a leftover pair.
pub fn cfa_reduce(b: &mut NetlistBuilder, m: DotMatrix, logic: Logic) -> Result<ReductionTrace> {
    reduce_with(b, m, logic, |current, _| {
        if current.max_height() <= 2 {
            return None;
        }
        Some(Box::new(|_, h, _| {
            let cfa = h / 5;
            let rest = h % 5;
            ColumnPlan {
                cfa,
                fa: rest / 3,
                ha: usize::from(rest % 3 == 2),
            }
        }))
    })
}

/// Dot character used by [`render_dot_diagram`].
pub const DOT: char = '*';

/// Renders each matrix of a trace as one group of dots, most significant
/// column on the left, groups top to bottom separated by a blank line.
pub fn render_dot_diagram(trace: &ReductionTrace) -> String {
    let width = trace.matrices.iter().map(DotMatrix::width).max().unwrap_or(0);
    let groups: Vec<String> = trace.matrices.iter().map(|m| render_group(m, width)).collect();
    groups.join("\n")
}

pub(crate) fn render_group(m: &DotMatrix, width: usize) -> String {
    let mut out = String::new();
    for row in 0..m.max_height() {
        let mut line: String = (0..width)
            .rev()
            .map(|w| if m.column(w).len() > row { DOT } else { ' ' })
            .collect();
        line.truncate(line.trim_end().len());
        let _ = writeln!(out, "{line}");
    }
    out
}
