use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Program, SimError};
use crate::netlist::Netlist;

/// Reference function the netlist is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    /// Inputs `a`, `b`; output `p = a * b`.
    Product,
    /// Inputs `a`, `b`, `c`; output `out = a * b + c`.
    Mac,
}

impl Oracle {
    pub fn name(self) -> &'static str {
        match self {
            Oracle::Product => "product",
            Oracle::Mac => "mac",
        }
    }

    /// Picks the oracle matching a netlist's port names.
    pub fn detect(netlist: &Netlist) -> Option<Oracle> {
        let names: Vec<&str> = netlist.ports_in().iter().map(|p| p.name.as_str()).collect();
        match names.as_slice() {
            ["a", "b"] if netlist.port_out("p").is_some() => Some(Oracle::Product),
            ["a", "b", "c"] if netlist.port_out("out").is_some() => Some(Oracle::Mac),
            _ => None,
        }
    }

    fn inputs(self) -> &'static [&'static str] {
        match self {
            Oracle::Product => &["a", "b"],
            Oracle::Mac => &["a", "b", "c"],
        }
    }

    fn output(self) -> &'static str {
        match self {
            Oracle::Product => "p",
            Oracle::Mac => "out",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: BTreeMap<String, u64>,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    /// The first failing vectors in enumeration order, at most [`VerifyReport::MAX_FAILURES`].
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub const MAX_FAILURES: usize = 16;

    pub fn is_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}/{} passed", self.passed, self.total)?;
        if !self.failures.is_empty() {
            writeln!(f, "{} failed; first failures:", self.failed)?;
            writeln!(f, "  {:<40} {:>20} {:>20}", "inputs", "expected", "actual")?;
            for fail in &self.failures {
                let inputs: Vec<String> = fail.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(f, "  {:<40} {:>20} {:>20}", inputs.join(" "), fail.expected, fail.actual)?;
            }
        }
        Ok(())
    }
}

/// Widths of the oracle's ports, in port order.
struct Shape {
    widths: Vec<usize>,
    output_bits: Vec<usize>,
    oracle: Oracle,
}

const MAX_EXHAUSTIVE_BITS: usize = 40;

impl Shape {
    fn new(netlist: &Netlist, oracle: Oracle) -> Result<Shape, SimError> {
        let names: Vec<&str> = netlist.ports_in().iter().map(|p| p.name.as_str()).collect();
        if names != oracle.inputs() {
            return Err(SimError::Config(format!(
                "{} oracle needs input ports {:?}, netlist has {:?}",
                oracle.name(),
                oracle.inputs(),
                names
            )));
        }
        let widths: Vec<usize> = netlist.ports_in().iter().map(|p| p.width()).collect();
        let n = widths[0];
        if widths[1] != n || (oracle == Oracle::Mac && widths[2] != 2 * n) {
            return Err(SimError::Config(format!(
                "{} oracle port widths do not match: {widths:?}",
                oracle.name()
            )));
        }
        let out = netlist.port_out(oracle.output()).ok_or_else(|| {
            SimError::Config(format!("{} oracle needs output port `{}`", oracle.name(), oracle.output()))
        })?;
        let needed = match oracle {
            Oracle::Product => 2 * n,
            Oracle::Mac => 2 * n + 1,
        };
        if out.width() < needed || out.width() > 64 || widths.iter().sum::<usize>() > 64 {
            return Err(SimError::Config(format!(
                "output `{}` has {} bits; {} oracle needs {needed} (at most 64)",
                oracle.output(),
                out.width(),
                oracle.name()
            )));
        }
        let output_bits = out
            .bits
            .iter()
            .map(|&net| {
                netlist
                    .output_nets()
                    .position(|o| o == net)
                    .expect("port bit is an output net")
            })
            .collect();
        Ok(Shape {
            widths,
            output_bits,
            oracle,
        })
    }

    fn input_bits(&self) -> usize {
        self.widths.iter().sum()
    }

    fn split(&self, vector: u64) -> Vec<u64> {
        let mut shift = 0;
        self.widths
            .iter()
            .map(|&w| {
                let v = (vector >> shift) & mask(w);
                shift += w;
                v
            })
            .collect()
    }

    fn expected(&self, vector: u64) -> u64 {
        let ops = self.split(vector);
        match self.oracle {
            Oracle::Product => ops[0] * ops[1],
            Oracle::Mac => ops[0] * ops[1] + ops[2],
        }
    }

    fn failure(&self, vector: u64, actual: u64) -> Failure {
        let inputs = self
            .oracle
            .inputs()
            .iter()
            .zip(self.split(vector))
            .map(|(name, v)| (name.to_string(), v))
            .collect();
        Failure {
            inputs,
            expected: self.expected(vector),
            actual,
        }
    }
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Result of one chunk: failure count and the first few failures.
struct ChunkResult {
    failed: u64,
    failures: Vec<Failure>,
}

const LANES: usize = 64;
const CHUNK: usize = LANES * 64;

fn check_chunk(program: &Program, netlist: &Netlist, shape: &Shape, vectors: &[u64]) -> ChunkResult {
    let bits = shape.input_bits();
    let outputs: Vec<usize> = netlist.output_nets().map(|n| n.index()).collect();
    let mut words = vec![0u64; bits];
    let mut values = Vec::new();
    let mut result = ChunkResult {
        failed: 0,
        failures: Vec::new(),
    };
    for block in vectors.chunks(LANES) {
        words.iter_mut().for_each(|w| *w = 0);
        for (lane, &v) in block.iter().enumerate() {
            for (bit, word) in words.iter_mut().enumerate() {
                *word |= (v >> bit & 1) << lane;
            }
        }
        program.run_words(&words, &mut values);
        for (lane, &v) in block.iter().enumerate() {
            let actual = shape
                .output_bits
                .iter()
                .enumerate()
                .map(|(i, &o)| (values[outputs[o]] >> lane & 1) << i)
                .sum::<u64>();
            if actual != shape.expected(v) {
                result.failed += 1;
                if result.failures.len() < VerifyReport::MAX_FAILURES {
                    result.failures.push(shape.failure(v, actual));
                }
            }
        }
    }
    result
}

/// Checks the netlist against `oracle` on every input vector (`Exhaustive`) or
/// on seeded random vectors. The report does not depend on `jobs`.
pub fn verify(netlist: &Netlist, oracle: Oracle, mode: Mode, jobs: usize) -> Result<VerifyReport, SimError> {
    let shape = Shape::new(netlist, oracle)?;
    let bits = shape.input_bits();
    let program = Program::new(netlist);
    let (total, vectors): (u64, Option<Vec<u64>>) = match mode {
        Mode::Exhaustive => {
            if bits > MAX_EXHAUSTIVE_BITS {
                return Err(SimError::Config(format!(
                    "exhaustive sweep over {bits} input bits is too large (limit {MAX_EXHAUSTIVE_BITS})"
                )));
            }
            (1u64 << bits, None)
        }
        Mode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs: Vec<u64> = (0..count).map(|_| rng.gen::<u64>() & mask(bits)).collect();
            (count, Some(vs))
        }
    };
    let chunks = total.div_ceil(CHUNK as u64);
    let run = |c: u64| {
        let start = c * CHUNK as u64;
        let end = (start + CHUNK as u64).min(total);
        match &vectors {
            Some(vs) => check_chunk(&program, netlist, &shape, &vs[start as usize..end as usize]),
            None => {
                let vs: Vec<u64> = (start..end).collect();
                check_chunk(&program, netlist, &shape, &vs)
            }
        }
    };
    let results: Vec<ChunkResult> = if jobs <= 1 {
        (0..chunks).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| SimError::Config(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| (0..chunks).into_par_iter().map(run).collect())
    };
    let mut report = VerifyReport {
        total,
        passed: total,
        failed: 0,
        failures: Vec::new(),
    };
    for r in results {
        report.failed += r.failed;
        for f in r.failures {
            if report.failures.len() < VerifyReport::MAX_FAILURES {
                report.failures.push(f);
            }
        }
    }
    report.passed = total - report.failed;
    Ok(report)
}
