use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use wallace_core::analysis::{
    block_critical_path, closed_form_savings, cost_report, negated_savings, sta_critical_path, transistor_cost,
    BlockPath, CostReport, CostTable, DelayTable, Tables,
};
use wallace_core::assembly::Design;
use wallace_core::cells::Logic;
use wallace_core::emit::{emit_diagram, emit_dot, emit_verilog, EmitOptions, Format};
use wallace_core::netlist::{GateKind, Inventory, Netlist, NetlistBuilder};
use wallace_core::sim::{from_bits, search_worst_case, verify as run_verify, Mode, Oracle, Strategy};

use crate::manifest::RunManifest;
use crate::{AnalyzeCmd, CostArg, DesignArgs, EmitCmd, GenCmd, ReportCmd, Status, StrategyArg, UsageError, VerifyCmd, WorstCmd};

type Result<T> = anyhow::Result<T>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_netlist(path: &Path) -> Result<Netlist> {
    Netlist::from_json(&read(path)?).with_context(|| format!("loading netlist {}", path.display()))
}

/// Writes to `out`, or stdout when no path is given.
fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tables(path: Option<&Path>, fallback: CostArg) -> Result<Tables> {
    let fallback = match fallback {
        CostArg::Default => CostTable::default(),
        CostArg::Static12 => CostTable::static12(),
    };
    let Some(path) = path else {
        return Ok(Tables {
            delays: DelayTable::default(),
            costs: fallback,
        });
    };
    let text = read(path)?;
    let mut tables = Tables::from_json(&text).with_context(|| format!("tables file {}", path.display()))?;
    let has_costs = serde_json::from_str::<serde_json::Value>(&text)
        .map(|v| v.get("costs").is_some())
        .unwrap_or(false);
    if !has_costs {
        tables.costs = fallback;
    }
    Ok(tables)
}

fn load_inventory(path: &Path) -> Result<Inventory> {
    let map: BTreeMap<String, usize> = serde_json::from_str(&read(path)?)
        .with_context(|| format!("inventory file {} must map gate kinds to counts", path.display()))?;
    let mut inv = Inventory::default();
    for (name, count) in map {
        let kind: GateKind = name.parse().with_context(|| format!("inventory file {}", path.display()))?;
        inv.add(kind, count);
    }
    Ok(inv)
}

fn logic_name(logic: Logic) -> &'static str {
    match logic {
        Logic::Standard => "standard",
        Logic::Negated => "negated",
    }
}

pub fn gen(cmd: &GenCmd) -> Result<Status> {
    let design = cmd.design.build()?;
    let text = design.netlist.to_json();
    write_output(cmd.out.as_deref(), &text)?;
    let summary = design_summary(&cmd.design, &design);
    if cmd.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    if let Some(path) = &cmd.manifest {
        let mut m = RunManifest::new("gen", cmd);
        if let Some(out) = &cmd.out {
            m.output(out)?;
        }
        m.write(path)?;
    }
    Ok(Status::Ok)
}

fn design_summary(args: &DesignArgs, design: &Design) -> String {
    let n = &design.netlist;
    let config = args.multiplier().expect("design was built from these flags");
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}-bit {} {}: {} reduction, {} final adder, {} logic",
        args.width,
        if args.mac { "MAC" } else { "multiplier" },
        n.ports_out().iter().map(|p| format!("{}[{}:0]", p.name, p.width() - 1)).collect::<Vec<_>>().join(" "),
        config.reduction.name(),
        design.final_adder.tag,
        logic_name(config.logic),
    );
    let _ = writeln!(
        s,
        "reduction: {} stages, {} FA, {} HA, {} CFA",
        design.trace.stages.len(),
        design.trace.total_fa(),
        design.trace.total_ha(),
        design.trace.total_cfa()
    );
    let _ = writeln!(s, "gates: {} {}", n.gates().len(), n.inventory());
    s
}

pub fn verify(cmd: &VerifyCmd, jobs: usize) -> Result<Status> {
    let netlist = load_netlist(&cmd.input)?;
    let oracle = Oracle::detect(&netlist).ok_or_else(|| {
        UsageError("netlist ports match neither a multiplier (a, b -> p) nor a MAC (a, b, c -> out)".into())
    })?;
    let mode = match cmd.random {
        Some(count) => Mode::Random { count, seed: cmd.seed },
        None => Mode::Exhaustive,
    };
    let report = run_verify(&netlist, oracle, mode, jobs)?;
    if cmd.json {
        print!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    if let Some(path) = &cmd.manifest {
        let mut m = RunManifest::new("verify", cmd);
        if cmd.random.is_some() {
            m.seeds.push(cmd.seed);
        }
        m.input(&cmd.input)?;
        m.write(path)?;
    }
    Ok(if report.is_pass() { Status::Ok } else { Status::VerificationFailed })
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_path: Option<GatePathJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    block_path: Option<&'a BlockPath>,
    cost: &'a CostReport,
}

#[derive(Serialize)]
struct GatePathJson {
    delay: f64,
    gates: Vec<GateJson>,
}

#[derive(Serialize)]
struct GateJson {
    id: u32,
    kind: GateKind,
    tag: String,
}

fn gate_path(netlist: &Netlist, delays: &DelayTable) -> Result<GatePathJson> {
    let path = sta_critical_path(netlist, delays)?;
    Ok(GatePathJson {
        delay: path.delay,
        gates: path
            .gates
            .iter()
            .map(|&g| {
                let gate = netlist.gate(g);
                GateJson {
                    id: g.0,
                    kind: gate.kind,
                    tag: gate.tag.clone(),
                }
            })
            .collect(),
    })
}

fn block_text(path: &BlockPath) -> String {
    let mut s = String::new();
    if let Some(w) = &path.warning {
        let _ = writeln!(s, "warning: {w}");
    }
    if let Some(fallback) = &path.fallback {
        let _ = writeln!(s, "block-level critical path: unavailable, gate-level delay {}", fallback.delay);
        return s;
    }
    let _ = writeln!(s, "block-level critical path: {} = {}", path.coeffs, path.delay);
    let _ = writeln!(s, "  half adders counted as full-adder positions: {}", path.coeffs.ha_as_fa());
    let mut tags: Vec<&str> = Vec::new();
    for step in &path.steps {
        if !tags.contains(&step.tag.as_str()) {
            tags.push(&step.tag);
        }
    }
    for tag in tags {
        let region = path.region(|t| t == tag);
        let _ = writeln!(s, "  {tag}: {region}");
    }
    let _ = writeln!(s, "  frontier of block-delay vectors:");
    for c in &path.frontier {
        let _ = writeln!(s, "    {c}");
    }
    s
}

pub fn analyze(cmd: &AnalyzeCmd) -> Result<Status> {
    let tables = load_tables(cmd.tables.as_deref(), cmd.cost_table)?;
    if let Some(path) = &cmd.inventory {
        let inv = load_inventory(path)?;
        let cost = CostReport::from_inventory("Inventory", &inv, &tables.costs)?;
        if cmd.json {
            let doc = AnalyzeJson {
                critical_path: None,
                block_path: None,
                cost: &cost,
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
        } else {
            print!("{cost}");
        }
        return Ok(Status::Ok);
    }
    let path = cmd.input.as_deref().expect("clap requires --in or --inventory");
    let netlist = load_netlist(path)?;
    let gates = gate_path(&netlist, &tables.delays)?;
    let blocks = block_critical_path(&netlist, &tables.delays)?;
    let cost = cost_report(&netlist, &tables.costs)?;
    if cmd.json {
        let doc = AnalyzeJson {
            critical_path: Some(gates),
            block_path: Some(&blocks),
            cost: &cost,
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(Status::Ok);
    }
    println!("gate-level critical path: delay {} through {} gates", gates.delay, gates.gates.len());
    for g in &gates.gates {
        println!("  g{} {} ({})", g.id, g.kind, g.tag);
    }
    print!("{}", block_text(&blocks));
    print!("{cost}");
    Ok(Status::Ok)
}

fn port_values(netlist: &Netlist, vector: &[bool]) -> String {
    let mut offset = 0;
    let mut parts = Vec::new();
    for port in netlist.ports_in() {
        let bits = &vector[offset..offset + port.width()];
        offset += port.width();
        parts.push(format!("{}={}", port.name, from_bits(bits)));
    }
    parts.join(" ")
}

#[derive(Serialize)]
struct WorstJson {
    strategy: &'static str,
    before: BTreeMap<String, u128>,
    after: BTreeMap<String, u128>,
    settle_time: f64,
    sta_bound: f64,
    vectors_tried: u64,
}

fn port_map(netlist: &Netlist, vector: &[bool]) -> BTreeMap<String, u128> {
    let mut offset = 0;
    let mut map = BTreeMap::new();
    for port in netlist.ports_in() {
        map.insert(port.name.clone(), from_bits(&vector[offset..offset + port.width()]));
        offset += port.width();
    }
    map
}

pub fn worst(cmd: &WorstCmd) -> Result<Status> {
    let netlist = load_netlist(&cmd.input)?;
    let tables = load_tables(cmd.tables.as_deref(), CostArg::Default)?;
    let strategy = match cmd.strategy {
        StrategyArg::FromZeroExhaustive => Strategy::FromZeroExhaustive,
        StrategyArg::Random => Strategy::Random {
            count: cmd.count,
            seed: cmd.seed,
        },
        StrategyArg::HillClimb => Strategy::HillClimb {
            starts: cmd.starts,
            seed: cmd.seed,
        },
    };
    let found = search_worst_case(&netlist, &tables.delays, strategy)?;
    let bound = sta_critical_path(&netlist, &tables.delays)?.delay;
    if cmd.json {
        let doc = WorstJson {
            strategy: strategy.name(),
            before: port_map(&netlist, &found.pair.before),
            after: port_map(&netlist, &found.pair.after),
            settle_time: found.settle_time,
            sta_bound: bound,
            vectors_tried: found.vectors_tried,
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("strategy:      {} ({} vectors tried)", strategy.name(), found.vectors_tried);
        println!("before:        {}", port_values(&netlist, &found.pair.before));
        println!("after:         {}", port_values(&netlist, &found.pair.after));
        println!("settle time:   {}", found.settle_time);
        println!("STA bound:     {bound}");
    }
    if let Some(path) = &cmd.manifest {
        let mut m = RunManifest::new("worst", cmd);
        if !matches!(strategy, Strategy::FromZeroExhaustive) {
            m.seeds.push(cmd.seed);
        }
        m.input(&cmd.input)?;
        m.write(path)?;
    }
    Ok(Status::Ok)
}

pub fn emit(cmd: &EmitCmd) -> Result<Status> {
    let format: Format = cmd.format.parse().map_err(|e| UsageError(format!("{e}")))?;
    let (netlist, trace) = match &cmd.input {
        Some(path) => (load_netlist(path)?, None),
        None => {
            let design = cmd.design.build()?;
            (design.netlist, Some(design.trace))
        }
    };
    let options = EmitOptions {
        format,
        module_name: cmd.module_name.clone(),
        include_tags: !cmd.no_tags,
    };
    let text = match format {
        Format::Verilog => emit_verilog(&netlist, &options)?,
        Format::Dot => emit_dot(&netlist, &options),
        Format::Json => netlist.to_json(),
        Format::Diagram => {
            let trace = trace.ok_or_else(|| {
                UsageError("the diagram format needs a generated design; use design flags instead of --in".into())
            })?;
            let mut text = emit_diagram(&trace);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            text
        }
    };
    write_output(cmd.out.as_deref(), &text)?;
    if let Some(path) = &cmd.manifest {
        let mut m = RunManifest::new("emit", cmd);
        if let Some(input) = &cmd.input {
            m.input(input)?;
        }
        if let Some(out) = &cmd.out {
            m.output(out)?;
        }
        m.write(path)?;
    }
    Ok(Status::Ok)
}

/// Transistor count of a lone full or half adder in the given logic.
fn cell_price(full: bool, logic: Logic, costs: &CostTable) -> Result<u64> {
    let mut b = NetlistBuilder::new();
    let x = b.add_input_port("x", 3)?;
    if full {
        logic.full_adder(&mut b, x[0], x[1], x[2], "cell")?;
    } else {
        logic.half_adder(&mut b, x[0], x[1], "cell")?;
    }
    Ok(transistor_cost(&b.inventory(), costs)?.total())
}

fn counterpart(args: &DesignArgs, logic: Logic) -> Result<Design> {
    let mut flipped = args.clone();
    flipped.logic = match logic {
        Logic::Standard => crate::LogicArg::Standard,
        Logic::Negated => crate::LogicArg::Negated,
    };
    flipped.build()
}

pub fn report(cmd: &ReportCmd) -> Result<Status> {
    let tables = load_tables(cmd.tables.as_deref(), CostArg::Default)?;
    let design = cmd.design.build()?;
    let netlist = &design.netlist;
    print!("{}", design_summary(&cmd.design, &design));

    println!();
    println!("{:>6} {:>4} {:>4} {:>4}  heights", "stage", "FA", "HA", "CFA");
    for st in &design.trace.stages {
        let heights: Vec<String> = st.heights.iter().map(|h| h.to_string()).collect();
        println!("{:>6} {:>4} {:>4} {:>4}  {}", st.stage, st.fa, st.ha, st.cfa, heights.join(" "));
    }
    let fa = &design.final_adder;
    print!(
        "{}: carry chain from column {} over {} positions",
        fa.tag, fa.chain_start, fa.chain_len
    );
    if fa.segments.is_empty() {
        println!();
    } else {
        let segs: Vec<String> = fa.segments.iter().map(|(lo, hi)| format!("[{lo},{hi})")).collect();
        println!(", segments {}", segs.join(" "));
    }

    println!();
    print!("{}", cost_report(netlist, &tables.costs)?);
    println!();
    let sta = sta_critical_path(netlist, &tables.delays)?;
    println!("gate-level critical path: delay {} through {} gates", sta.delay, sta.gates.len());
    print!("{}", block_text(&block_critical_path(netlist, &tables.delays)?));

    println!();
    let std = counterpart(&cmd.design, Logic::Standard)?;
    let neg = counterpart(&cmd.design, Logic::Negated)?;
    let static12 = CostTable::static12();
    let default = CostTable::default();
    let mixed = negated_savings(&std.netlist, &static12, &neg.netlist, &default)?;
    let same = negated_savings(&std.netlist, &default, &neg.netlist, &default)?;
    println!("negated-logic comparison (standard with static 12T XOR/XNOR, negated with 8T cells):");
    for line in mixed.to_string().lines() {
        println!("  {line}");
    }
    println!(
        "  with the default table for both: {} vs {} MOS, difference {}",
        same.standard.total(),
        same.negated.total(),
        same.difference
    );
    let fa_delta = cell_price(true, Logic::Standard, &static12)? as i64 - cell_price(true, Logic::Negated, &default)? as i64;
    let ha_delta = cell_price(false, Logic::Standard, &static12)? as i64 - cell_price(false, Logic::Negated, &default)? as i64;
    if fa_delta >= 0 && ha_delta >= 0 && !cmd.design.mac {
        let cells = cost_report(&std.netlist, &default)?;
        let (fas, has) = cells.rows.iter().fold((0, 0), |(f, h), r| (f + r.fa, h + r.ha));
        let closed = closed_form_savings(fas as u64, has as u64, fa_delta as u64, ha_delta as u64, cmd.design.width as u64);
        println!("  closed form (FA x delta + HA x delta + inverters): {closed}");
    }
    Ok(Status::Ok)
}
