use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use barrierlab_core::grid::norm;
use barrierlab_core::peaks::detect_peaks;
use barrierlab_core::scattering::{closed_form_amplitudes, probability_partition, terms_for_tail};
use barrierlab_core::spm::{naive_predictions, per_term_predictions, transit_time};
use barrierlab_core::tdse::{compare, init_state};
use barrierlab_core::{Family, PacketIntegrand, Region, Scenario, Snapshot, Source};

use crate::config::{render, RunConfig};
use crate::output;
use crate::CliError;

/// Tail tolerance used to pick the number of bounce terms in the partition check.
const PARTITION_TAIL: f64 = 1e-11;
/// Reported bound on the partition identity.
const PARTITION_LIMIT: f64 = 1e-10;

struct Run<'a> {
    config: &'a RunConfig,
    summary: String,
}

impl<'a> Run<'a> {
    fn new(config: &'a RunConfig, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(&config.out_dir).map_err(|e| CliError::io(&config.out_dir, e))?;
        Ok(Self {
            config,
            summary: format!("# barrierlab {command}\n"),
        })
    }

    fn scenario(&self) -> &Scenario {
        &self.config.scenario
    }

    fn path(&self, name: &str) -> PathBuf {
        self.config.out_dir.join(name)
    }

    fn note(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.summary, "# {}", line.as_ref());
    }

    fn wrote(&mut self, path: &Path) {
        self.note(format!("wrote {}", path.display()));
    }

    /// Writes `summary_<command>.txt`: the notes as comments followed by the
    /// resolved configuration, so the file reloads as a config.
    fn finish(mut self, command: &str) -> Result<String, CliError> {
        self.summary.push_str(&render(self.config));
        let path = self.path(&format!("summary_{command}.txt"));
        fs::write(&path, &self.summary).map_err(|e| CliError::io(&path, e))?;
        Ok(self.summary)
    }
}

fn io_result(path: &Path, result: std::io::Result<()>) -> Result<(), CliError> {
    result.map_err(|e| CliError::io(path, e))
}

fn snapshot_peaks(
    snap: &Snapshot,
    scenario: &Scenario,
    label_t: f64,
) -> Result<Vec<(Region, barrierlab_core::Peak, f64)>, CliError> {
    let barrier = scenario.barrier()?;
    let mut rows = Vec::new();
    if snap.max_abs2() == 0.0 {
        return Ok(rows);
    }
    for region in [Region::Before, Region::Inside, Region::After] {
        for peak in detect_peaks(snap, region, &barrier, scenario.peak_threshold)?.peaks {
            rows.push((region, peak, label_t));
        }
    }
    Ok(rows)
}

pub fn amplitudes(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "amplitudes")?;
    let s = run.scenario();
    let barrier = s.barrier()?;
    let rows = s
        .sweep()?
        .into_iter()
        .map(|k| {
            let kp = barrier.kinematics(k)?;
            Ok((kp, closed_form_amplitudes(&kp, &barrier)))
        })
        .collect::<Result<Vec<_>, barrierlab_core::Error>>()?;
    let worst = rows
        .iter()
        .map(|(_, amp)| (amp.reflection_probability() + amp.transmission_probability() - 1.0).abs())
        .fold(0.0, f64::max);
    let path = run.path("amplitudes.csv");
    io_result(&path, output::write_amplitudes(&path, &rows))?;
    let (first, last) = (rows[0].0.k, rows[rows.len() - 1].0.k);
    run.note(format!("momenta: {} in [{first}, {last}]", rows.len()));
    run.note(format!("max ||R|^2 + |T|^2 - 1|: {worst:e}"));
    run.wrote(&path);
    run.finish("amplitudes")
}

pub fn spm(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "spm")?;
    let s = run.scenario().clone();
    let barrier = s.barrier()?;
    let naive = naive_predictions(s.k0, &barrier)?;
    let impact = s.impact_time();
    let mut rows = naive.trajectories(impact);
    rows.extend(per_term_predictions(s.k0, &barrier, s.series_terms, impact)?);
    let path = run.path("predictions.csv");
    io_result(&path, output::write_predictions(&path, &rows))?;
    let transit = transit_time(&barrier.kinematics(s.k0)?, &barrier);
    run.note(format!("lambda_prime: {}", naive.lambda_prime));
    run.note(format!("dt_R: {}", naive.dt_r));
    run.note(format!("dt_A: {}", naive.dt_a));
    run.note(format!("dt_B_at_x0: {}", naive.dt_b_at_x0));
    run.note(format!("t_T: {}", naive.t_t));
    run.note(format!("impact_time: {impact}"));
    run.note(format!("transit_time: {transit}"));
    match naive.peakless_interval() {
        Some((lo, hi)) => run.note(format!("peakless_interval: ({lo}, {hi})")),
        None => run.note("peakless_interval: none"),
    }
    if naive.negative_delay {
        run.note("warning: negative naive delay");
    }
    run.wrote(&path);
    run.finish("spm")
}

/// Writes one snapshot per time for each source, plus a peak table per source.
fn write_sources(run: &mut Run, sources: &[Source]) -> Result<(), CliError> {
    let s = run.scenario().clone();
    let barrier = s.barrier()?;
    let spectrum = s.spectrum()?;
    let quad = s.quadrature();
    let grid = s.grid()?;
    for &source in sources {
        let integrand = PacketIntegrand::new(&spectrum, &barrier, &quad, source)?;
        let tag = source.tag();
        let mut peaks = Vec::new();
        for &t in &s.times {
            let snap = integrand.snapshot(&grid, t)?;
            let path = run.path(&output::snapshot_file_name(t, &tag));
            io_result(&path, output::write_snapshot(&path, &snap))?;
            let found = snapshot_peaks(&snap, &s, t)?;
            run.note(format!("{tag} t={t}: norm {:.12}, {} peaks", norm(&snap), found.len()));
            peaks.extend(found);
            run.wrote(&path);
        }
        let path = run.path(&format!("peaks_{tag}.csv"));
        io_result(&path, output::write_peaks(&path, &peaks))?;
        run.wrote(&path);
    }
    Ok(())
}

pub fn evolve(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "evolve")?;
    write_sources(&mut run, &[config.source])?;
    run.finish("evolve")
}

pub fn series(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "series")?;
    let n = config.scenario.series_terms;
    let mut sources = vec![Source::Series(n)];
    for family in [Family::Reflected, Family::Transmitted] {
        sources.extend((1..=n).map(|i| Source::Term(family, i)));
    }
    write_sources(&mut run, &sources)?;
    run.finish("series")
}

/// Crank-Nicolson snapshots at the scenario times.
fn propagate(s: &Scenario) -> Result<(Vec<Snapshot>, f64), CliError> {
    let barrier = s.barrier()?;
    let spectrum = s.spectrum()?;
    let grid = s.grid()?;
    let dt = s.time_step()?;
    let mut state = init_state(&spectrum, &barrier, &s.quadrature(), &grid, dt, s.cn_start)?;
    let t_end = s.times.last().copied().unwrap_or(0.0);
    Ok((state.run(t_end, &s.times)?, dt))
}

pub fn oracle(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "oracle")?;
    let s = run.scenario().clone();
    let (snaps, dt) = propagate(&s)?;
    run.note(format!("time step: {dt}"));
    let mut peaks = Vec::new();
    for (&t, snap) in s.times.iter().zip(&snaps) {
        let path = run.path(&output::snapshot_file_name(t, "cn"));
        io_result(&path, output::write_snapshot(&path, snap))?;
        let found = snapshot_peaks(snap, &s, t)?;
        run.note(format!("cn t={t}: norm {:.12}, {} peaks", norm(snap), found.len()));
        peaks.extend(found);
        run.wrote(&path);
    }
    let path = run.path("peaks_cn.csv");
    io_result(&path, output::write_peaks(&path, &peaks))?;
    run.wrote(&path);
    run.finish("oracle")
}

pub fn compare_solvers(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "compare")?;
    let s = run.scenario().clone();
    let (snaps, _) = propagate(&s)?;
    let integrand = PacketIntegrand::new(&s.spectrum()?, &s.barrier()?, &s.quadrature(), Source::ClosedForm)?;
    let grid = s.grid()?;
    let mut rows = Vec::new();
    for (&t, snap) in s.times.iter().zip(&snaps) {
        let d = compare(snap, &integrand.snapshot(&grid, snap.t)?)?;
        run.note(format!("t={t}: l2 {:e}, linf {:e}, linf/peak {:e}", d.l2, d.linf, d.relative_linf()));
        rows.push((t, d.l2, d.linf));
    }
    let path = run.path("compare.jsonl");
    io_result(&path, output::write_comparisons(&path, &rows))?;
    run.wrote(&path);
    run.finish("compare")
}

pub fn conservation(config: &RunConfig) -> Result<String, CliError> {
    let mut run = Run::new(config, "conservation")?;
    let s = run.scenario().clone();
    let barrier = s.barrier()?;
    let (mut unitarity, mut partition, mut most_terms) = (0.0f64, 0.0f64, 0);
    let sweep = s.sweep()?;
    for &k in &sweep {
        let kp = barrier.kinematics(k)?;
        let amp = closed_form_amplitudes(&kp, &barrier);
        unitarity = unitarity.max((amp.reflection_probability() + amp.transmission_probability() - 1.0).abs());
        let n = terms_for_tail(&kp, &barrier, PARTITION_TAIL)?;
        partition = partition.max((probability_partition(&kp, &barrier, n)?.partial_sum - 1.0).abs());
        most_terms = most_terms.max(n);
    }
    let integrand = PacketIntegrand::new(&s.spectrum()?, &barrier, &s.quadrature(), Source::ClosedForm)?;
    let grid = s.grid()?;
    let norms = s
        .times
        .iter()
        .map(|&t| Ok(norm(&integrand.snapshot(&grid, t)?)))
        .collect::<Result<Vec<f64>, barrierlab_core::Error>>()?;
    let drift = norms.iter().copied().fold(f64::MIN, f64::max) - norms.iter().copied().fold(f64::MAX, f64::min);

    run.note(format!("momenta: {}", sweep.len()));
    run.note(format!("unitarity_max_deviation: {unitarity:e}"));
    if partition < PARTITION_LIMIT {
        run.note(format!("partition_limit: 1.0 ± {PARTITION_LIMIT:e}"));
    } else {
        run.note(format!("partition_limit: exceeded, max |sum - 1| = {partition:e}"));
    }
    run.note(format!("partition_max_deviation: {partition:e} (at most {most_terms} terms)"));
    for (t, n) in s.times.iter().zip(&norms) {
        run.note(format!("norm t={t}: {n:.15}"));
    }
    run.note(format!("norm_drift: {}", if norms.is_empty() { 0.0 } else { drift }));
    run.finish("conservation")
}
