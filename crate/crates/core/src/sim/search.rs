use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::timed::{TimedSim, VectorPair};
use super::SimError;
use crate::analysis::DelayTable;
use crate::netlist::Netlist;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// `before` = all zeros; every `after` vector is tried.
    FromZeroExhaustive,
    Random { count: u64, seed: u64 },
    /// Single-bit-flip ascent from `starts` random pairs.
    HillClimb { starts: u64, seed: u64 },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::HillClimb { starts: 64, seed: 0 }
    }
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::FromZeroExhaustive => "from-zero-exhaustive",
            Strategy::Random { .. } => "random",
            Strategy::HillClimb { .. } => "hill-climb",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub pair: VectorPair,
    pub settle_time: f64,
    pub vectors_tried: u64,
    pub strategy: Strategy,
}

const MAX_EXHAUSTIVE_BITS: usize = 24;

fn bits_of(value: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| value >> i & 1 == 1).collect()
}

fn random_bits(rng: &mut ChaCha8Rng, width: usize) -> Vec<bool> {
    (0..width).map(|_| rng.gen()).collect()
}

/// Keeps the larger settle time; on ties, the earlier candidate.
fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Searches for the input transition with the latest output settle time.
/// Deterministic for a given strategy and seed.
pub fn search_worst_case(netlist: &Netlist, delays: &DelayTable, strategy: Strategy) -> Result<WorstCase, SimError> {
    let sim = TimedSim::new(netlist, delays)?;
    let width = netlist.input_bit_count();
    let settle = |pair: &VectorPair| sim.run(pair).map(|t| t.settle_time).expect("vector widths match");
    let zero_pair = VectorPair::new(vec![false; width], vec![false; width]);
    let (pair, settle_time, tried) = match strategy {
        Strategy::FromZeroExhaustive => {
            if width > MAX_EXHAUSTIVE_BITS {
                return Err(SimError::Config(format!(
                    "from-zero sweep over {width} input bits is too large (limit {MAX_EXHAUSTIVE_BITS})"
                )));
            }
            let total = 1u64 << width;
            let (best, time) = (0..total)
                .into_par_iter()
                .map(|v| {
                    let pair = VectorPair::new(vec![false; width], bits_of(v, width));
                    (v as usize, settle(&pair))
                })
                .reduce(|| (usize::MAX, f64::NEG_INFINITY), better);
            (
                VectorPair::new(vec![false; width], bits_of(best as u64, width)),
                time,
                total,
            )
        }
        Strategy::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<VectorPair> = (0..count)
                .map(|_| {
                    let before = random_bits(&mut rng, width);
                    VectorPair::new(before, random_bits(&mut rng, width))
                })
                .collect();
            let (best, time) = pairs
                .par_iter()
                .enumerate()
                .map(|(i, p)| (i, settle(p)))
                .reduce(|| (usize::MAX, f64::NEG_INFINITY), better);
            match pairs.into_iter().nth(best) {
                Some(p) => (p, time, count),
                None => (zero_pair, 0.0, 0),
            }
        }
        Strategy::HillClimb { starts, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seeds: Vec<VectorPair> = (0..starts)
                .map(|_| {
                    let before = random_bits(&mut rng, width);
                    VectorPair::new(before, random_bits(&mut rng, width))
                })
                .collect();
            let climbs: Vec<(VectorPair, f64, u64)> = seeds
                .into_par_iter()
                .map(|start| climb(start, &settle))
                .collect();
            let tried = climbs.iter().map(|c| c.2).sum();
            let best = climbs
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.1))
                .fold((usize::MAX, f64::NEG_INFINITY), better);
            match climbs.into_iter().nth(best.0) {
                Some((p, t, _)) => (p, t, tried),
                None => (zero_pair, 0.0, 0),
            }
        }
    };
    Ok(WorstCase {
        pair,
        settle_time,
        vectors_tried: tried,
        strategy,
    })
}

/// First-improvement ascent over single-bit flips of either vector.
fn climb(mut pair: VectorPair, settle: &impl Fn(&VectorPair) -> f64) -> (VectorPair, f64, u64) {
    let width = pair.before.len();
    let mut best = settle(&pair);
    let mut tried = 1;
    loop {
        let mut improved = false;
        for k in 0..2 * width {
            let flip = |p: &mut VectorPair| {
                if k < width {
                    p.before[k] = !p.before[k];
                } else {
                    p.after[k - width] = !p.after[k - width];
                }
            };
            flip(&mut pair);
            let t = settle(&pair);
            tried += 1;
            if t > best {
                best = t;
                improved = true;
            } else {
                flip(&mut pair);
            }
        }
        if !improved {
            return (pair, best, tried);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sta_critical_path;
    use crate::assembly::{build_multiplier, MultiplierConfig};

    #[test]
    fn from_zero_matches_all_pairs_at_width_two() {
        let n = build_multiplier(&MultiplierConfig::with_width(2)).unwrap().netlist;
        let delays = DelayTable::default();
        let found = search_worst_case(&n, &delays, Strategy::FromZeroExhaustive).unwrap();
        assert_eq!(found.vectors_tried, 16);
        let sim = TimedSim::new(&n, &delays).unwrap();
        let mut max = 0.0f64;
        for before in 0..16 {
            for after in 0..16 {
                let pair = VectorPair::new(bits_of(before, 4), bits_of(after, 4));
                max = max.max(sim.run(&pair).unwrap().settle_time);
            }
        }
        assert_eq!(found.settle_time, max);
    }

    #[test]
    fn random_is_reproducible_and_bounded() {
        let n = build_multiplier(&MultiplierConfig::with_width(4)).unwrap().netlist;
        let delays = DelayTable::default();
        let s = Strategy::Random { count: 200, seed: 9 };
        let a = search_worst_case(&n, &delays, s).unwrap();
        let b = search_worst_case(&n, &delays, s).unwrap();
        assert_eq!(a, b);
        let bound = sta_critical_path(&n, &delays).unwrap().delay;
        assert!(a.settle_time <= bound);
    }

    #[test]
    fn hill_climb_is_reproducible_and_bounded() {
        let n = build_multiplier(&MultiplierConfig::with_width(4)).unwrap().netlist;
        let delays = DelayTable::default();
        let s = Strategy::HillClimb { starts: 4, seed: 2 };
        let a = search_worst_case(&n, &delays, s).unwrap();
        assert_eq!(a, search_worst_case(&n, &delays, s).unwrap());
        assert!(a.settle_time <= sta_critical_path(&n, &delays).unwrap().delay);
        assert!(a.vectors_tried > 4);
    }
}
