// SPDX-License-Identifier: Apache-2.0
//! The four flow verbs.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::report::{CircuitResult, ComparisonReport, ModeRow};
use super::{design_name, load_netlist, FlowConfig, FlowError, InputFormat};
use crate::dump::{bind_to_netlist, deserialize, serialize, ActivityDump, Binding};
use crate::equiv::check_equivalence;
use crate::mapper::{
    depth_metrics, mapping_area, select_mapping, simopt_mapping_area, CostMode, DepthMetrics, MapParams, ScoreTable,
};
use crate::netlist::{emit_blif, parse_mapped_blif, MappedNetlist, Netlist};
use crate::sim::{run_simulation, run_untracked, SimConfig, Stimulus};

fn write(out: &Path, file: &str, contents: &[u8], written: &mut Vec<String>) -> Result<(), FlowError> {
    let path = out.join(file);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| FlowError::io(parent, e))?;
    }
    fs::write(&path, contents).map_err(|e| FlowError::io(&path, e))?;
    written.push(file.to_string());
    Ok(())
}

fn manifest(cfg: &FlowConfig, written: &[String]) -> String {
    let mut lines = vec![
        "simopt-manifest v1".to_string(),
        format!("tool simopt {}", env!("CARGO_PKG_VERSION")),
        format!("command {}", cfg.verb.as_str()),
    ];
    if let Some((path, format)) = &cfg.input {
        lines.push(format!("input {} {}", format.as_str(), path.display()));
    }
    if let Some(dir) = &cfg.bench_dir {
        lines.push(format!("bench_dir {}", dir.display()));
    }
    lines.push(match &cfg.stimulus {
        Some(path) => format!("stimulus file {}", path.display()),
        None => "stimulus random".to_string(),
    });
    lines.push(format!("cycles {}", cfg.cycles));
    lines.push(format!("seed {}", cfg.seed));
    lines.extend(cfg.track.iter().map(|g| format!("track {g}")));
    lines.push(format!("k {}", cfg.k));
    lines.push(format!("priority {}", cfg.priority));
    lines.push(format!("hot_percentile {:.6}", cfg.hot_percentile));
    if let Some(mode) = cfg.mode {
        lines.push(format!("mode {}", mode.as_str()));
    }
    if let Some(dump) = &cfg.dump {
        lines.push(format!("dump {}", dump.display()));
    }
    let mut files = written.to_vec();
    files.sort();
    lines.extend(files.iter().map(|f| format!("output {f}")));
    lines.join("\n") + "\n"
}

fn finish(cfg: &FlowConfig, mut written: Vec<String>) -> Result<(), FlowError> {
    written.push("manifest.txt".to_string());
    let text = manifest(cfg, &written);
    let path = cfg.out.join("manifest.txt");
    fs::create_dir_all(&cfg.out).map_err(|e| FlowError::io(&cfg.out, e))?;
    fs::write(&path, text).map_err(|e| FlowError::io(&path, e))
}

fn input(cfg: &FlowConfig) -> Result<(Netlist, String), FlowError> {
    let (path, format) = cfg.input.as_ref().expect("validated config has an input");
    let name = design_name(path).expect("validated config has a design name");
    Ok((load_netlist(path, *format)?, name))
}

fn sim_config(cfg: &FlowConfig, design: &str, stimulus: Option<&Path>) -> SimConfig {
    SimConfig {
        design: design.to_string(),
        cycles: cfg.cycles,
        seed: cfg.seed,
        track_filter: cfg.track.clone(),
        stimulus: stimulus.map_or(Stimulus::Random, |p| Stimulus::File(p.to_path_buf())),
    }
}

struct Simulated {
    dump: ActivityDump,
    runtime: Duration,
    untracked_runtime: Duration,
}

fn simulate(n: &Netlist, sim: &SimConfig) -> Result<Simulated, FlowError> {
    let start = Instant::now();
    let dump = run_simulation(n, sim).map_err(FlowError::from_sim)?;
    let runtime = start.elapsed();
    let start = Instant::now();
    run_untracked(n, sim).map_err(FlowError::from_sim)?;
    Ok(Simulated { dump, runtime, untracked_runtime: start.elapsed() })
}

#[derive(Debug, Clone)]
pub struct SimulateSummary {
    pub dump_path: PathBuf,
    pub tracked_bits: usize,
    pub matched: usize,
    pub unmatched: usize,
    pub overhead: f64,
}

impl fmt::Display for SimulateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dump: {}", self.dump_path.display())?;
        writeln!(f, "tracked bits: {}", self.tracked_bits)?;
        writeln!(f, "nets matched: {} (unmatched {})", self.matched, self.unmatched)?;
        write!(f, "instrumented/uninstrumented runtime: {:.2}x", self.overhead)
    }
}

pub fn cmd_simulate(cfg: &FlowConfig) -> Result<SimulateSummary, FlowError> {
    cfg.validate()?;
    let (n, design) = input(cfg)?;
    let sim = simulate(&n, &sim_config(cfg, &design, cfg.stimulus.as_deref()))?;
    let binding = bind_to_netlist(&sim.dump, &n);
    let mut written = Vec::new();
    let file = format!("{design}.dump");
    write(&cfg.out, &file, &serialize(&sim.dump), &mut written)?;
    finish(cfg, written)?;
    let base = sim.untracked_runtime.as_secs_f64();
    Ok(SimulateSummary {
        dump_path: cfg.out.join(file),
        tracked_bits: sim.dump.entries().len(),
        matched: binding.matched,
        unmatched: binding.unmatched,
        overhead: if base > 0.0 { sim.runtime.as_secs_f64() / base } else { 1.0 },
    })
}

fn metrics_text(design: &str, p: &MapParams, m: &DepthMetrics, area: f64, simopt_area: f64, b: &Binding) -> String {
    let mut lines = vec![
        "simopt-metrics v1".to_string(),
        format!("design {design}"),
        format!("mode {}", p.cost_mode.as_str()),
        format!("k {}", p.k()),
        format!("priority {}", p.priority()),
        format!("lut_count {}", m.lut_count),
        format!("max_level {}", m.max_level),
        format!("hot_depth {}", m.hot_depth),
        format!("hot_threshold {}", m.hot_threshold.map_or("-".to_string(), |t| t.to_string())),
        format!("hot_flag {}", m.flag.map_or("-", |f| f.as_str())),
        format!("area {area:.6}"),
        format!("area_simopt {simopt_area:.6}"),
        format!("nets_matched {}", b.matched),
        format!("nets_unmatched {}", b.unmatched),
        format!("unknown_dump_names {}", b.unknown_names.len()),
    ];
    lines.extend(m.output_levels.iter().map(|(name, level)| format!("output {name} {level}")));
    lines.join("\n") + "\n"
}

struct Mapped {
    netlist: MappedNetlist,
    blif: String,
    row: ModeRow,
    metrics_file: String,
}

fn map_mode(n: &Netlist, design: &str, p: MapParams, scores: &ScoreTable, binding: &Binding, hot: f64) -> Result<Mapped, FlowError> {
    let start = Instant::now();
    let netlist = select_mapping(n, &p, scores);
    let map_runtime = start.elapsed();
    let blif = emit_blif(&netlist, design)
        .map_err(|e| FlowError::Parse { path: PathBuf::from(design), msg: format!("cannot emit mapped netlist: {e}") })?;
    let metrics = depth_metrics(&netlist, scores, hot);
    let area = mapping_area(&netlist, p.k());
    let simopt_area = simopt_mapping_area(&netlist, p.k(), scores);
    let metrics_file = metrics_text(design, &p, &metrics, area, simopt_area, binding);
    Ok(Mapped { netlist, blif, row: ModeRow { mode: p.cost_mode, metrics, area, simopt_area, map_runtime }, metrics_file })
}

fn params(cfg: &FlowConfig, mode: CostMode) -> MapParams {
    MapParams::new(cfg.k, cfg.priority, mode).expect("validated config has valid mapping parameters")
}

#[derive(Debug, Clone)]
pub struct MapSummary {
    pub blif_path: PathBuf,
    pub metrics: DepthMetrics,
    pub matched: usize,
    pub unmatched: usize,
    pub unknown_names: usize,
}

impl fmt::Display for MapSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mapped netlist: {}", self.blif_path.display())?;
        writeln!(f, "luts: {}  max level: {}  hot depth: {}", self.metrics.lut_count, self.metrics.max_level, self.metrics.hot_depth)?;
        write!(f, "nets matched: {} (unmatched {}, unknown dump names {})", self.matched, self.unmatched, self.unknown_names)
    }
}

fn read_dump(path: &Path) -> Result<ActivityDump, FlowError> {
    let bytes = fs::read(path).map_err(|e| FlowError::io(path, e))?;
    deserialize(&bytes).map_err(|e| FlowError::Dump { path: path.to_path_buf(), msg: e.to_string() })
}

pub fn cmd_map(cfg: &FlowConfig) -> Result<MapSummary, FlowError> {
    cfg.validate()?;
    let (n, design) = input(cfg)?;
    let mode = cfg.mode.expect("validated map config has a mode");
    let dump = match &cfg.dump {
        Some(path) => read_dump(path)?,
        None => ActivityDump::empty(&design).map_err(|e| FlowError::Config(vec![e.to_string()]))?,
    };
    if dump.design() != design {
        log::warn!("dump was recorded for `{}`, mapping `{design}`", dump.design());
    }
    let binding = bind_to_netlist(&dump, &n);
    let scores = ScoreTable::from_binding(&binding);
    let mapped = map_mode(&n, &design, params(cfg, mode), &scores, &binding, cfg.hot_percentile)?;

    let mut written = Vec::new();
    let blif = format!("{design}.{}.blif", mode.as_str());
    write(&cfg.out, &blif, mapped.blif.as_bytes(), &mut written)?;
    write(&cfg.out, &format!("{design}.{}.metrics", mode.as_str()), mapped.metrics_file.as_bytes(), &mut written)?;
    finish(cfg, written)?;
    Ok(MapSummary {
        blif_path: cfg.out.join(blif),
        metrics: mapped.row.metrics,
        matched: binding.matched,
        unmatched: binding.unmatched,
        unknown_names: binding.unknown_names.len(),
    })
}

fn verify(n: &Netlist, design: &str, mapped: &Mapped, seed: u64) -> Result<crate::equiv::EquivStats, FlowError> {
    let fail = |msg: String| FlowError::Equivalence { design: design.to_string(), mode: mapped.row.mode.as_str(), msg };
    let stats = check_equivalence(n, &mapped.netlist, seed).map_err(|e| fail(e.to_string()))?;
    let reparsed = parse_mapped_blif(mapped.blif.as_bytes()).map_err(|e| fail(format!("emitted BLIF does not parse: {e}")))?;
    check_equivalence(n, &reparsed, seed).map_err(|e| fail(format!("emitted BLIF: {e}")))?;
    Ok(stats)
}

/// Simulate once, map in both modes, verify both, write per-circuit files under `dir`.
fn compare_circuit(
    cfg: &FlowConfig,
    n: &Netlist,
    design: &str,
    stimulus: Option<&Path>,
    dir: &Path,
    prefix: &str,
    written: &mut Vec<String>,
) -> Result<CircuitResult, FlowError> {
    let sim = simulate(n, &sim_config(cfg, design, stimulus))?;
    let binding = bind_to_netlist(&sim.dump, n);
    let scores = ScoreTable::from_binding(&binding);
    let vanilla = map_mode(n, design, params(cfg, CostMode::Vanilla), &scores, &binding, cfg.hot_percentile)?;
    let simopt = map_mode(n, design, params(cfg, CostMode::Simopt), &scores, &binding, cfg.hot_percentile)?;
    let equivalence = verify(n, design, &vanilla, cfg.seed)?;
    verify(n, design, &simopt, cfg.seed)?;

    write(dir, &format!("{prefix}{design}.dump"), &serialize(&sim.dump), written)?;
    for m in [&vanilla, &simopt] {
        let mode = m.row.mode.as_str();
        write(dir, &format!("{prefix}{design}.{mode}.blif"), m.blif.as_bytes(), written)?;
        write(dir, &format!("{prefix}{design}.{mode}.metrics"), m.metrics_file.as_bytes(), written)?;
    }
    Ok(CircuitResult {
        name: design.to_string(),
        vanilla: vanilla.row,
        simopt: simopt.row,
        sim_runtime: sim.runtime,
        untracked_runtime: sim.untracked_runtime,
        equivalence,
    })
}

fn write_report(cfg: &FlowConfig, report: &ComparisonReport, mut written: Vec<String>) -> Result<(), FlowError> {
    write(&cfg.out, "report.txt", report.to_text().as_bytes(), &mut written)?;
    write(&cfg.out, "report.data", report.to_data().as_bytes(), &mut written)?;
    write(&cfg.out, "timing.txt", report.to_timing().as_bytes(), &mut written)?;
    // timing.txt changes between runs; keep it out of the manifest
    written.retain(|f| f != "timing.txt");
    finish(cfg, written)
}

pub fn cmd_compare(cfg: &FlowConfig) -> Result<ComparisonReport, FlowError> {
    cfg.validate()?;
    let (n, design) = input(cfg)?;
    let mut written = Vec::new();
    let result = compare_circuit(cfg, &n, &design, cfg.stimulus.as_deref(), &cfg.out, "", &mut written)?;
    let report = ComparisonReport { circuits: vec![result], failures: Vec::new() };
    write_report(cfg, &report, written)?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BenchSummary {
    pub report: ComparisonReport,
}

impl fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.report.to_text())?;
        write!(f, "{} circuits, {} failures", self.report.circuits.len(), self.report.failures.len())
    }
}

/// Runs the comparison on every `.aag`/`.blif` file in the directory.
/// Circuit-level failures are collected in the report; only harness faults abort.
pub fn cmd_bench(cfg: &FlowConfig) -> Result<BenchSummary, FlowError> {
    cfg.validate()?;
    let dir = cfg.bench_dir.as_ref().expect("validated bench config has a directory");
    let mut files: Vec<(PathBuf, InputFormat)> = fs::read_dir(dir)
        .map_err(|e| FlowError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| FlowError::io(dir, e)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter_map(|p| InputFormat::from_path(&p).map(|f| (p, f)))
        .collect();
    files.sort_by(|a, b| a.0.cmp(&b.0));

    let mut report = ComparisonReport::default();
    let mut written = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (path, format) in files {
        let label = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
        let Some(design) = design_name(&path) else {
            report.failures.push((label, "cannot derive a design name".to_string()));
            continue;
        };
        if !seen.insert(design.clone()) {
            report.failures.push((label, format!("design name `{design}` is used by another circuit")));
            continue;
        }
        let stim = path.with_extension("stim");
        let stim = stim.is_file().then_some(stim);
        let outcome = load_netlist(&path, format).and_then(|n| {
            let mut files = Vec::new();
            let r = compare_circuit(cfg, &n, &design, stim.as_deref(), &cfg.out, &format!("{design}/"), &mut files)?;
            Ok((r, files))
        });
        match outcome {
            Ok((result, files)) => {
                written.extend(files);
                report.circuits.push(result);
            }
            Err(e) => {
                log::warn!("{label}: {e}");
                report.failures.push((design, e.to_string()));
            }
        }
    }
    report.sort();
    write_report(cfg, &report, written)?;
    Ok(BenchSummary { report })
}
