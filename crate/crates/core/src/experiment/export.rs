//! CSV, plot-data and metadata files.
//!
//! Numbers are written with `f64`'s `Display`, the shortest representation
//! that round-trips, so identical results give identical bytes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::assignment::ObjectivePair;
use crate::error::Result;

use super::{AggregateRow, ConfigDocument, ExperimentResults, TrialSummary};

pub const TRIALS_HEADER: &str = "speed_lo,speed_hi,seed,j1,j2,power_mw,wall_ms";
pub const AGGREGATE_HEADER: &str =
    "speed_lo,speed_hi,trials,j1_mean,j1_std,j1_rsd,j2_mean,j2_std,j2_rsd,power_mean,power_std,power_rsd";
pub const FRONT_HEADER: &str = "j1,j2,is_compromise";
const HISTORY_HEADER: &str = "speed_lo,speed_hi,seed,iteration,min_j1,min_j2,archive_size";
const ORACLE_HEADER: &str = "speed_lo,speed_hi,seed,hypervolume,oracle_hypervolume,ratio";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExportOptions {
    pub plot_data: bool,
    /// Leave `wall_ms` empty so repeated runs give identical files.
    pub omit_timing: bool,
}

/// `"0-8"` for `[0, 8]`.
pub fn range_label(range: [f64; 2]) -> String {
    format!("{}-{}", range[0], range[1])
}

pub fn write_trials_csv<W: Write>(mut w: W, trials: &[TrialSummary], omit_timing: bool) -> Result<()> {
    writeln!(w, "{TRIALS_HEADER}")?;
    for t in trials {
        let wall = if omit_timing { String::new() } else { t.wall_ms.to_string() };
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            t.speed_range[0], t.speed_range[1], t.seed, t.j1, t.j2, t.power_mw, wall
        )?;
    }
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(mut w: W, rows: &[AggregateRow]) -> Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.speed_range[0],
            r.speed_range[1],
            r.trials,
            r.j1.mean,
            r.j1.std,
            r.j1.rsd,
            r.j2.mean,
            r.j2.std,
            r.j2.rsd,
            r.power_mw.mean,
            r.power_mw.std,
            r.power_mw.rsd
        )?;
    }
    Ok(())
}

pub fn write_front_csv<W: Write>(mut w: W, front: &[ObjectivePair], compromise: usize) -> Result<()> {
    writeln!(w, "{FRONT_HEADER}")?;
    for (i, p) in front.iter().enumerate() {
        writeln!(w, "{},{},{}", p.j1, p.j2, u8::from(i == compromise))?;
    }
    Ok(())
}

fn write_xy<W: Write>(mut w: W, rows: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    for (x, y) in rows {
        writeln!(w, "{x} {y}")?;
    }
    Ok(())
}

fn create(dir: &Path, name: String, written: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    written.push(path);
    Ok(BufWriter::new(file))
}

/// Writes every output file into `dir`, creating it if needed, and returns
/// the paths written.
pub fn export(
    doc: &ConfigDocument,
    results: &ExperimentResults,
    dir: &Path,
    options: ExportOptions,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let summaries: Vec<TrialSummary> = results.trials.iter().map(|t| t.summary.clone()).collect();

    let mut w = create(dir, "trials.csv".into(), &mut written)?;
    write_trials_csv(&mut w, &summaries, options.omit_timing)?;
    w.flush()?;

    let mut w = create(dir, "aggregate.csv".into(), &mut written)?;
    write_aggregate_csv(&mut w, &results.aggregates)?;
    w.flush()?;

    let mut history = create(dir, "history.csv".into(), &mut written)?;
    writeln!(history, "{HISTORY_HEADER}")?;
    for t in &results.trials {
        let label = range_label(t.summary.speed_range);
        let mut w = create(dir, format!("front_{label}_seed{}.csv", t.summary.seed), &mut written)?;
        write_front_csv(&mut w, &t.front, t.compromise)?;
        w.flush()?;
        for h in &t.history {
            writeln!(
                history,
                "{},{},{},{},{},{},{}",
                t.summary.speed_range[0],
                t.summary.speed_range[1],
                t.summary.seed,
                h.iteration,
                h.min_j1,
                h.min_j2,
                h.archive_size
            )?;
        }
        if options.plot_data {
            let mut w = create(dir, format!("plot_front_{label}_seed{}.dat", t.summary.seed), &mut written)?;
            write_xy(&mut w, t.front.iter().map(|p| (p.j1, p.j2)))?;
            w.flush()?;
        }
    }
    history.flush()?;

    if options.plot_data {
        let mid = |r: &AggregateRow| 0.5 * (r.speed_range[0] + r.speed_range[1]);
        let mut w = create(dir, "plot_overhead.dat".into(), &mut written)?;
        write_xy(&mut w, results.aggregates.iter().map(|r| (mid(r), r.overhead)))?;
        w.flush()?;
        let mut w = create(dir, "plot_power.dat".into(), &mut written)?;
        write_xy(&mut w, results.aggregates.iter().map(|r| (mid(r), r.power_mw.mean)))?;
        w.flush()?;
    }

    if !results.oracle.is_empty() {
        let mut summary = create(dir, "oracle.csv".into(), &mut written)?;
        writeln!(summary, "{ORACLE_HEADER}")?;
        for c in &results.oracle {
            let label = range_label(c.speed_range);
            let mut w = create(dir, format!("oracle_front_{label}.csv"), &mut written)?;
            write_front_csv(&mut w, &c.oracle.front_objectives(), c.compromise)?;
            w.flush()?;
            for &(seed, hv) in &c.trial_hypervolumes {
                writeln!(
                    summary,
                    "{},{},{},{},{},{}",
                    c.speed_range[0],
                    c.speed_range[1],
                    seed,
                    hv,
                    c.oracle.hypervolume,
                    hv / c.oracle.hypervolume
                )?;
            }
            if options.plot_data {
                let mut w = create(dir, format!("plot_oracle_front_{label}.dat"), &mut written)?;
                write_xy(&mut w, c.oracle.front_objectives().iter().map(|p| (p.j1, p.j2)))?;
                w.flush()?;
            }
        }
        summary.flush()?;
    }

    let metadata = json!({
        "config": doc,
        "trials": results.trials.len(),
        "definitions": {
            "j1": "TAU plus paging signaling cost of the best-compromise solution",
            "j2": "inter-list handover (MME relocation) cost of the best-compromise solution",
            "power_mw": "10 mW per TAU event, averaged over all UEs",
            "std": "sample standard deviation (n - 1)",
            "rsd": "100 * std / mean",
            "overhead": "mean over seeds of best-compromise j1 + j2; second column of plot_overhead.dat",
            "plot_power": "mean best-compromise power_mw per range",
            "plot_x": "speed range midpoint in m/s",
            "wall_ms": if options.omit_timing { "omitted" } else { "trial wall time in milliseconds" },
        },
    });
    let mut w = create(dir, "metadata.json".into(), &mut written)?;
    serde_json::to_writer_pretty(&mut w, &metadata)?;
    writeln!(w)?;
    w.flush()?;
    Ok(written)
}
