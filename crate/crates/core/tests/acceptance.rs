//! Acceptance run: one PASS/FAIL line per criterion, supporting figures indented below it.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use wallace_core::analysis::{
    block_critical_path, block_frontier, closed_form_savings, cost_report, negated_savings, sta_critical_path,
    transistor_cost, BlockKind, Coeffs, CostTable, DelayTable,
};
use wallace_core::assembly::{build_mac, build_multiplier, FinalAdder, MacConfig, MultiplierConfig};
use wallace_core::cells::Logic;
use wallace_core::emit::{emit_diagram, emit_dot, emit_verilog, EmitOptions};
use wallace_core::netlist::{GateKind, Inventory, NetId, Netlist, NetlistBuilder};
use wallace_core::reduction::{dadda_targets, gen_partial_products, Scheduler};
use wallace_core::sim::{
    eval, net_values, timed_simulate, verify, Assignment, Mode, Oracle, VectorPair,
};

struct Outcome {
    summary: String,
    notes: Vec<String>,
}

type Check = Result<Outcome, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn exhaustive_correctness() -> Check {
    let mut notes = Vec::new();
    let mut slowest = 0.0f64;
    for config in all_configs(8) {
        let start = Instant::now();
        let design = build_multiplier(&config).map_err(|e| e.to_string())?;
        let report = verify(&design.netlist, Oracle::Product, Mode::Exhaustive, jobs()).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure!(
            report.total == 65536 && report.passed == 65536,
            "{}: {}/{} passed",
            label(&config),
            report.passed,
            report.total
        );
        notes.push(format!("{:<28} 65536/65536 passed in {secs:.2}s", label(&config)));
    }
    ensure!(slowest < 60.0, "slowest configuration took {slowest:.1}s");
    Ok(Outcome {
        summary: format!("12/12 configurations pass all 65536 pairs (slowest {slowest:.2}s)"),
        notes,
    })
}

fn reference_cases() -> Check {
    let mut notes = Vec::new();
    for logic in LOGICS {
        let m = build_multiplier(&MultiplierConfig {
            logic,
            ..MultiplierConfig::default()
        })
        .map_err(|e| e.to_string())?
        .netlist;
        for (a, b, p) in [(0u64, 255u64, 0u128), (1, 1, 1), (27, 31, 837), (255, 255, 65025)] {
            let out = eval(&m, &Assignment::from_ports(&m, &[("a", a), ("b", b)])).map_err(|e| e.to_string())?;
            let bits: String = out.bits("p").unwrap().iter().rev().map(|&v| if v { '1' } else { '0' }).collect();
            ensure!(out.value("p") == Some(p), "{a} x {b}: got {:?}", out.value("p"));
            if a == 255 {
                ensure!(bits == "1111111000000001", "255 x 255 bit pattern {bits}");
            }
            notes.push(format!("{logic:?}: {a} x {b} = {} ({bits})", p));
        }
        let mac = build_mac(&MacConfig {
            multiplier: MultiplierConfig {
                logic,
                ..MultiplierConfig::default()
            },
        })
        .map_err(|e| e.to_string())?
        .netlist;
        for (a, b, c, want) in [(111u64, 223u64, 14191u64, 38944u128), (255, 255, 65535, 130560)] {
            let out = eval(&mac, &Assignment::from_ports(&mac, &[("a", a), ("b", b), ("c", c)]))
                .map_err(|e| e.to_string())?;
            ensure!(out.value("out") == Some(want), "MAC {a} x {b} + {c}: got {:?}", out.value("out"));
            notes.push(format!("{logic:?}: MAC {a} x {b} + {c} = {want}"));
        }
    }
    Ok(Outcome {
        summary: "all multiplier and MAC cases match, standard and negated".into(),
        notes,
    })
}

fn fa_inventory(count: usize) -> Inventory {
    Inventory::from_counts([
        (GateKind::And2, 2 * count),
        (GateKind::Or2, count),
        (GateKind::Xor2, 2 * count),
    ])
}

fn cost_model() -> Check {
    let costs = CostTable::default();
    let mut notes = Vec::new();
    let table1 = Inventory::from_counts([(GateKind::And2, 183), (GateKind::Or2, 52), (GateKind::Xor2, 119)]);
    let t1 = transistor_cost(&table1, &costs).map_err(|e| e.to_string())?;
    ensure!((t1.pmos, t1.nmos, t1.total()) == (1181, 1181, 2362), "reference inventory totals {t1:?}");
    notes.push(format!("{{AND2:183, OR2:52, XOR2:119}} -> PMOS {} NMOS {} total {}", t1.pmos, t1.nmos, t1.total()));

    let design = build_multiplier(&MultiplierConfig::default()).map_err(|e| e.to_string())?;
    let report = cost_report(&design.netlist, &costs).map_err(|e| e.to_string())?;
    let row = report.row("8x8 AND Array").ok_or("no AND array row")?;
    ensure!((row.pmos, row.nmos) == (192, 192), "AND array row {}/{}", row.pmos, row.nmos);
    notes.push(format!("generated `8x8 AND Array` row -> {}/{}", row.pmos, row.nmos));

    let rca = transistor_cost(&fa_inventory(12), &costs).map_err(|e| e.to_string())?;
    ensure!((rca.pmos, rca.nmos) == (204, 204), "12 FA row {rca:?}");
    notes.push(format!("`Final RCA` with 12 FA -> {}/{}", rca.pmos, rca.nmos));
    let generated = report.row("Final RCA").ok_or("no final RCA row")?;
    notes.push(format!(
        "generated `Final RCA` ({} FA + {} HA) -> {}/{}",
        generated.fa, generated.ha, generated.pmos, generated.nmos
    ));

    let table3 = Inventory::from_counts([(GateKind::And2, 217), (GateKind::Or2, 69), (GateKind::Xor2, 153)]);
    let t3 = transistor_cost(&table3, &costs).map_err(|e| e.to_string())?;
    ensure!(t3.total() == 2940, "MAC inventory total {}", t3.total());
    notes.push(format!("{{AND2:217, OR2:69, XOR2:153}} -> total {}", t3.total()));
    let acc = transistor_cost(&fa_inventory(17), &costs).map_err(|e| e.to_string())?;
    ensure!((acc.pmos, acc.nmos) == (289, 289), "accumulator row {acc:?}");
    notes.push(format!("`Accumulator Unit` with 17 FA -> {}/{}", acc.pmos, acc.nmos));
    let mac = build_mac(&MacConfig::default()).map_err(|e| e.to_string())?;
    let mac_report = cost_report(&mac.netlist, &costs).map_err(|e| e.to_string())?;
    let acc_row = mac_report.row("Accumulator Unit").ok_or("no accumulator row")?;
    notes.push(format!(
        "generated `Accumulator Unit` ({} FA + {} HA, 17 output bits) -> {}/{}",
        acc_row.fa, acc_row.ha, acc_row.pmos, acc_row.nmos
    ));
    ensure!(
        report.totals.pmos == report.totals.nmos && report.total_mos == transistor_cost(&design.netlist.inventory(), &costs).unwrap().total(),
        "generated report totals inconsistent"
    );
    Ok(Outcome {
        summary: "2362 (1181/1181), AND array 192/192, 12-FA RCA 204/204, 2940, 17-FA accumulator 289/289".into(),
        notes,
    })
}

fn reduction_structure() -> Check {
    let mut notes = Vec::new();
    let wallace = build_multiplier(&MultiplierConfig::default()).map_err(|e| e.to_string())?;
    let heights: Vec<usize> = wallace.trace.matrices.iter().map(|m| m.max_height()).collect();
    ensure!(heights == [8, 6, 4, 3, 2], "Wallace heights {heights:?}");
    ensure!(wallace.trace.stages.len() == 4, "Wallace stages {}", wallace.trace.stages.len());
    let cfa = build_multiplier(&MultiplierConfig {
        reduction: Scheduler::Cfa,
        ..MultiplierConfig::default()
    })
    .map_err(|e| e.to_string())?;
    ensure!(cfa.trace.stages.len() == 3, "CFA stages {}", cfa.trace.stages.len());
    ensure!(dadda_targets(8) == [6, 4, 3, 2], "Dadda targets {:?}", dadda_targets(8));
    let cfa_heights: Vec<usize> = cfa.trace.matrices.iter().map(|m| m.max_height()).collect();
    notes.push(format!("Wallace max heights {heights:?}; CFA max heights {cfa_heights:?}; Dadda targets [6, 4, 3, 2]"));
    for s in &wallace.trace.stages {
        notes.push(format!("Wallace S{}: {} FA, {} HA", s.stage, s.fa, s.ha));
    }
    let report = cost_report(&wallace.netlist, &CostTable::default()).map_err(|e| e.to_string())?;
    let fin = report.row("Final RCA").ok_or("no final RCA row")?;
    notes.push(format!(
        "generated reduction {} FA + {} HA vs reference 40 FA + 15 HA (text elsewhere says 38 FA + 16 HA)",
        wallace.trace.total_fa(),
        wallace.trace.total_ha()
    ));
    notes.push(format!(
        "generated final RCA {} FA + {} HA over {} chain positions vs reference 12 FA (text says 11)",
        fin.fa, fin.ha, wallace.final_adder.chain_len
    ));
    let dadda = build_multiplier(&MultiplierConfig {
        reduction: Scheduler::Dadda,
        ..MultiplierConfig::default()
    })
    .map_err(|e| e.to_string())?;
    notes.push(format!(
        "Dadda reduction {} FA + {} HA in {} stages; CFA reduction {} CFA + {} FA + {} HA",
        dadda.trace.total_fa(),
        dadda.trace.total_ha(),
        dadda.trace.stages.len(),
        cfa.trace.total_cfa(),
        cfa.trace.total_fa(),
        cfa.trace.total_ha()
    ));
    Ok(Outcome {
        summary: "Wallace 4 stages 8->6->4->3->2, CFA 3 stages, Dadda [6,4,3,2]; counts reported below".into(),
        notes,
    })
}

/// Frontier element with the largest delay under the default block delays.
fn slowest(frontier: &[Coeffs]) -> Coeffs {
    let d = DelayTable::default().blocks;
    frontier
        .iter()
        .copied()
        .fold(None, |best: Option<Coeffs>, c| match best {
            Some(b) if b.eval(&d) >= c.eval(&d) => Some(b),
            _ => Some(c),
        })
        .unwrap_or_default()
}

fn fa(n: u32) -> Coeffs {
    Coeffs::of(&[(BlockKind::FullAdder, n)])
}

fn delay_formulas() -> Check {
    let mut notes = Vec::new();
    let reduction = |t: &str| t.starts_with("Reduction");
    let final_adder = |t: &str| t.starts_with("Final");

    let wallace = build_multiplier(&MultiplierConfig::default()).map_err(|e| e.to_string())?;
    let path = block_critical_path(&wallace.netlist, &DelayTable::default()).map_err(|e| e.to_string())?;
    let depth = path.depth(reduction);
    let l = wallace.final_adder.chain_len as u32;
    ensure!(depth == 4, "reduction depth on the critical block path is {depth}");
    let red = slowest(&block_frontier(&wallace.netlist, reduction).map_err(|e| e.to_string())?);
    ensure!(red == fa(4), "slowest reduction path {red}");
    let fin = block_frontier(&wallace.netlist, final_adder).map_err(|e| e.to_string())?;
    let fin: Vec<Coeffs> = fin.iter().map(|c| c.ha_as_fa()).collect();
    ensure!(fin == [fa(l)], "final adder paths {fin:?}");
    let expected = Coeffs::of(&[(BlockKind::And, 1), (BlockKind::FullAdder, 4 + l)]);
    ensure!(path.coeffs.ha_as_fa() == expected, "critical block path {} (as FA positions {})", path.coeffs, path.coeffs.ha_as_fa());
    notes.push(format!(
        "Wallace+RCA: critical block path {} = {} counting half adders as adder positions; reduction depth {depth}, L = {l}",
        path.coeffs,
        path.coeffs.ha_as_fa()
    ));
    notes.push("reference figures: t_AND + 4t_FA + 11t_FA = t_AND + 15t_FA; claimed carry-select figure t_AND + 9t_FA is inconsistent with both (flagged, not asserted)".to_string());

    let csa = build_multiplier(&MultiplierConfig {
        final_adder: FinalAdder::SqrtCsa,
        ..MultiplierConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let csa_front = block_frontier(&csa.netlist, final_adder).map_err(|e| e.to_string())?;
    let mut normalized: Vec<Coeffs> = csa_front.iter().map(|c| c.ha_as_fa()).collect();
    normalized.sort();
    let mux = |n| (BlockKind::Mux, n);
    let mut want = vec![
        fa(4),
        Coeffs::of(&[(BlockKind::FullAdder, 3), mux(1)]),
        Coeffs::of(&[(BlockKind::FullAdder, 2), mux(3)]),
    ];
    want.sort();
    ensure!(normalized == want, "carry-select paths {csa_front:?}");
    let shown: Vec<String> = normalized.iter().map(|c| c.to_string()).collect();
    notes.push(format!("sqrt-CSA [2,2,3,4]: max({})", shown.join(", ")));

    let cfa = build_multiplier(&MultiplierConfig {
        reduction: Scheduler::Cfa,
        ..MultiplierConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let cfa_red = slowest(&block_frontier(&cfa.netlist, reduction).map_err(|e| e.to_string())?);
    let want_cfa = Coeffs::of(&[(BlockKind::Cfa, 2), (BlockKind::FullAdder, 1)]);
    ensure!(cfa_red == want_cfa, "CFA reduction path {cfa_red}");
    notes.push(format!("CFA reduction path {cfa_red}"));

    let mut designs = 0;
    let mut max_paths = 0u128;
    let tables = [DelayTable::default(), rational_delays(5)];
    for n in 2..=8 {
        for config in all_configs(n) {
            let mut nets = vec![build_multiplier(&config).map_err(|e| e.to_string())?.netlist];
            nets.push(
                build_mac(&MacConfig {
                    multiplier: config.clone(),
                })
                .map_err(|e| e.to_string())?
                .netlist,
            );
            for net in &nets {
                max_paths = max_paths.max(path_count(net));
                for t in &tables {
                    let sta = sta_critical_path(net, t).map_err(|e| e.to_string())?.delay;
                    let brute = brute_force_longest(net, t);
                    ensure!(sta == brute, "{} n={n}: STA {sta} vs brute force {brute}", label(&config));
                }
                designs += 1;
            }
        }
    }
    notes.push(format!(
        "gate-level STA equals path enumeration on {designs} designs (n = 2..8, multiplier and MAC), unit and rational delays; up to {max_paths} paths per design"
    ));
    Ok(Outcome {
        summary: format!("t_AND + 4t_FA + {l}t_FA, sqrt-CSA max formula, 2t_CFA + t_FA, STA exact on {designs} designs"),
        notes,
    })
}

fn single_cell(kind: &str, logic: Logic) -> Netlist {
    let mut b = NetlistBuilder::new();
    let inputs = match kind {
        "HA" => 2,
        "FA" => 3,
        _ => 5,
    };
    let x = b.add_input_port("x", inputs).unwrap();
    let outs = match kind {
        "HA" => {
            let sc = logic.half_adder(&mut b, x[0], x[1], "c").unwrap();
            vec![sc.sum, sc.carry]
        }
        "FA" => {
            let sc = logic.full_adder(&mut b, x[0], x[1], x[2], "c").unwrap();
            vec![sc.sum, sc.carry]
        }
        _ => {
            let o = logic.cfa(&mut b, [x[0], x[1], x[2], x[3], x[4]], "c").unwrap();
            vec![o.sum, o.carry1, o.carry2]
        }
    };
    b.add_output_port("y", outs).unwrap();
    b.build().unwrap()
}

fn property_suite() -> Check {
    let mut notes = Vec::new();

    // Cell conservation, exhaustive.
    for logic in LOGICS {
        for kind in ["HA", "FA", "CFA"] {
            let cell = single_cell(kind, logic);
            let k = cell.input_bit_count();
            for v in 0..1u32 << k {
                let bits: Vec<bool> = (0..k).map(|i| (v >> i & 1 == 1) ^ (logic == Logic::Negated)).collect();
                let vals = net_values(&cell, &bits);
                let outs: Vec<u32> = cell
                    .output_nets()
                    .map(|n| (vals[n.index()] ^ (logic == Logic::Negated)) as u32)
                    .collect();
                let weighted = outs[0] + 2 * outs[1..].iter().sum::<u32>();
                ensure!(weighted == v.count_ones(), "{logic:?} {kind} input {v:b}");
            }
        }
    }
    notes.push("HA/FA/CFA weighted sums conserved on every input, standard and negated".into());

    // Per-stage matrix value conservation.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for reduction in SCHEDULERS {
        for logic in LOGICS {
            let mut b = NetlistBuilder::new();
            let a = b.add_input_port("a", 8).unwrap();
            let x = b.add_input_port("b", 8).unwrap();
            let pp = gen_partial_products(&mut b, &a, &x, logic).unwrap();
            let trace = reduction.reduce(&mut b, pp, logic).unwrap();
            b.add_output_port("p", Vec::new()).unwrap();
            let n = b.build().unwrap();
            for _ in 0..1000 {
                let (va, vb): (u64, u64) = (rng.gen_range(0..256), rng.gen_range(0..256));
                let bits: Vec<bool> = (0..16).map(|i| (va | vb << 8) >> i & 1 == 1).collect();
                let vals = net_values(&n, &bits);
                for m in &trace.matrices {
                    let got = m.value(|net: NetId| vals[net.index()] ^ (logic == Logic::Negated));
                    ensure!(got == (va * vb) as u128, "{} {logic:?}: {va} x {vb}", reduction.name());
                }
            }
        }
    }
    notes.push("every reduction matrix holds a*b on 1000 random vectors for each scheduler and logic".into());

    // Timed settle time against the static bound.
    let design = build_multiplier(&MultiplierConfig::default()).unwrap().netlist;
    let delays = DelayTable::default();
    let bound = sta_critical_path(&design, &delays).unwrap().delay;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let before: Vec<bool> = (0..16).map(|_| rng.gen()).collect();
        let after: Vec<bool> = (0..16).map(|_| rng.gen()).collect();
        let trace = timed_simulate(&design, &VectorPair::new(before, after.clone()), &delays).unwrap();
        ensure!(trace.settle_time <= bound, "settle {} above bound {bound}", trace.settle_time);
        ensure!(trace.final_values == net_values(&design, &after), "timed final values differ");
        worst = worst.max(trace.settle_time);
    }
    notes.push(format!("1000 random pairs: latest settle {worst} <= STA bound {bound}; final values match zero-delay"));

    // Mutation detection.
    let cone = output_cone(&design);
    let candidates: Vec<usize> = design
        .gates()
        .iter()
        .filter(|g| cone[g.id.index()] && TWO_INPUT.contains(&g.kind))
        .map(|g| g.id.index())
        .collect();
    let mut mrng = ChaCha8Rng::seed_from_u64(20);
    let mut caught = 0;
    for _ in 0..20 {
        let g = candidates[mrng.gen_range(0..candidates.len())];
        let mut parts = design.parts().clone();
        let old = parts.gates[g].kind;
        let choices: Vec<GateKind> = TWO_INPUT.iter().copied().filter(|&k| k != old).collect();
        let new = choices[mrng.gen_range(0..choices.len())];
        parts.gates[g].kind = new;
        let mutant = Netlist::try_from(parts).unwrap();
        let report = verify(&mutant, Oracle::Product, Mode::Exhaustive, jobs()).unwrap();
        ensure!(report.failed > 0, "mutation of gate {g} ({old} -> {new}) not detected");
        caught += 1;
    }
    notes.push(format!("{caught}/20 random two-input gate swaps in the output cone detected by exhaustive verify"));

    // Serialization round trip and emitter stability.
    for config in all_configs(8) {
        let d = build_multiplier(&config).unwrap();
        let json = d.netlist.to_json();
        let back = Netlist::from_json(&json).map_err(|e| e.to_string())?;
        ensure!(back.parts() == d.netlist.parts() && back.to_json() == json, "{} JSON round trip", label(&config));
        let opts = EmitOptions::default();
        ensure!(
            emit_verilog(&d.netlist, &opts).unwrap() == emit_verilog(&back, &opts).unwrap()
                && emit_dot(&d.netlist, &opts) == emit_dot(&back, &opts)
                && emit_diagram(&d.trace) == emit_diagram(&build_multiplier(&config).unwrap().trace),
            "{} emitters not byte-stable",
            label(&config)
        );
    }
    notes.push("JSON round trip is identity and Verilog/DOT/diagram output is byte-stable for all 12 configurations".into());

    Ok(Outcome {
        summary: "cell conservation, stage conservation, settle <= STA, 20/20 mutants caught, round trip, stable emitters".into(),
        notes,
    })
}

fn negated_ledger() -> Check {
    let mut notes = Vec::new();
    let price = |kind: &str, logic: Logic, costs: &CostTable| {
        transistor_cost(&single_cell(kind, logic).inventory(), costs).unwrap().total()
    };
    let static12 = CostTable::static12();
    let default = CostTable::default();
    let fa_delta = price("FA", Logic::Standard, &static12) - price("FA", Logic::Negated, &default);
    let ha_delta = price("HA", Logic::Standard, &static12) - price("HA", Logic::Negated, &default);
    ensure!((fa_delta, ha_delta) == (6, 2), "cell deltas FA {fa_delta}, HA {ha_delta}");
    let reference = closed_form_savings(38 + 11, 15, fa_delta, ha_delta, 8);
    ensure!(reference.total == 372, "closed form {}", reference.total);
    notes.push(format!("closed form from reference counts: {reference}"));
    notes.push(format!(
        "cell prices: FA 42 -> 36, HA 18 -> 16 (deltas {fa_delta}, {ha_delta} from built cells)"
    ));

    let std = build_multiplier(&MultiplierConfig::default()).unwrap();
    let neg = build_multiplier(&MultiplierConfig {
        logic: Logic::Negated,
        ..MultiplierConfig::default()
    })
    .unwrap();
    let s = negated_savings(&std.netlist, &static12, &neg.netlist, &default).map_err(|e| e.to_string())?;
    ensure!(s.difference > 0, "negated design is not cheaper: {s:?}");
    let fin = cost_report(&std.netlist, &default).unwrap();
    let fin = fin.row("Final RCA").unwrap();
    let generated = closed_form_savings(
        (std.trace.total_fa() + fin.fa) as u64,
        (std.trace.total_ha() + fin.ha) as u64,
        fa_delta,
        ha_delta,
        8,
    );
    notes.push(format!(
        "generated designs: standard (static 12T XOR) {} MOS, negated (8T XNOR) {} MOS, saving {}",
        s.standard.total(),
        s.negated.total(),
        s.difference
    ));
    notes.push(format!("closed form with generated counts: {generated}"));
    let same = negated_savings(&std.netlist, &default, &neg.netlist, &default).unwrap();
    notes.push(format!(
        "under one table (default) for both: {} vs {} MOS, difference {}",
        same.standard.total(),
        same.negated.total(),
        same.difference
    ));
    Ok(Outcome {
        summary: format!("closed form 372 reproduced; generated saving {} transistors", s.difference),
        notes,
    })
}

fn run(id: u32, name: &str, f: fn() -> Check) -> bool {
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    match result {
        Ok(o) => {
            println!("PASS {id}. {name}: {}", o.summary);
            for n in o.notes {
                println!("       {n}");
            }
            true
        }
        Err(e) => {
            println!("FAIL {id}. {name}: {e}");
            false
        }
    }
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(u32, &str, fn() -> Check); 7] = [
        (1, "exhaustive functional correctness", exhaustive_correctness),
        (2, "verification cases", reference_cases),
        (3, "cost model arithmetic", cost_model),
        (4, "reduction structure", reduction_structure),
        (5, "delay formulas", delay_formulas),
        (6, "negated-logic savings", negated_ledger),
        (7, "property suite", property_suite),
    ];
    let mut ok = true;
    let mut substitutes = true;
    for (id, name, f) in criteria {
        let passed = run(id, name, f);
        ok &= passed;
        if (3..=7).contains(&id) {
            substitutes &= passed;
        }
    }
    if substitutes {
        println!(
            "PASS 8. excluded measurements: post-layout energy, nanosecond delays and areas are not modeled; covered by criteria 3-7"
        );
    } else {
        println!("FAIL 8. excluded measurements: substitute criteria 3-7 did not all pass");
        ok = false;
    }
    if !ok {
        std::process::exit(1);
    }
}
