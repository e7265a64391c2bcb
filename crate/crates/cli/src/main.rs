use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use talplan::experiment::{
    attach_oracle, export, run_experiment, ConfigDocument, ExportOptions,
};
use talplan::Error;

/// Seeded speed-sweep experiments for overlapping tracking area list planning.
#[derive(Debug, Parser)]
#[command(name = "talplan", version)]
struct Cli {
    /// JSON configuration; missing keys take the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Base seed; trials use seed, seed+1, ...
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,

    /// Explicit comma-separated trial seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,

    /// Trials per speed range.
    #[arg(long)]
    trials: Option<usize>,

    /// Speed range `lo,hi` in m/s; repeat for several ranges.
    #[arg(long = "speed-range", value_parser = parse_range)]
    speed_ranges: Vec<[f64; 2]>,

    #[arg(long)]
    population: Option<usize>,

    #[arg(long)]
    iterations: Option<usize>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write whitespace-separated plot series.
    #[arg(long)]
    emit_plot_data: bool,

    /// Compare against exhaustive reference fronts (tiny networks only).
    #[arg(long)]
    oracle: bool,

    /// Population 10000 and 400 iterations unless overridden.
    #[arg(long)]
    paper_scale: bool,

    /// Leave the wall_ms column empty.
    #[arg(long)]
    no_timing: bool,
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok([lo, hi])
}

fn build_document(cli: &Cli) -> talplan::Result<ConfigDocument> {
    let mut doc = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                field: "config".into(),
                message: format!("{}: {e}", path.display()),
            })?;
            ConfigDocument::parse(&text)?
        }
        None => ConfigDocument::default(),
    };
    if cli.paper_scale {
        doc.mopso = doc.mopso.full_scale();
    }
    if let Some(p) = cli.population {
        doc.mopso.population = p;
    }
    if let Some(t) = cli.iterations {
        doc.mopso.iterations = t;
    }
    if !cli.speed_ranges.is_empty() {
        doc.experiment.speed_ranges = cli.speed_ranges.clone();
    }
    let plan = &mut doc.experiment;
    if let Some(seeds) = &cli.seeds {
        plan.seeds = seeds.clone();
        plan.trials_per_range = cli.trials.unwrap_or(seeds.len());
    } else if let Some(base) = cli.seed {
        let n = cli.trials.unwrap_or(plan.trials_per_range);
        plan.trials_per_range = n;
        plan.seeds = (0..n as u64).map(|i| base + i).collect();
    } else if let Some(n) = cli.trials {
        plan.trials_per_range = n;
        if plan.seeds.len() != n {
            plan.seeds = (1..=n as u64).collect();
        }
    }
    if let Some(out) = &cli.out {
        plan.output_dir = out.clone();
    }
    doc.validate()?;
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let doc = match build_document(&cli) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let options = ExportOptions {
        plot_data: cli.emit_plot_data,
        omit_timing: cli.no_timing,
    };
    let dir = doc.experiment.output_dir.clone();
    let (mut results, failure) = match run_experiment(&doc) {
        Ok(r) => (r, None),
        Err((partial, e)) => (partial, Some(e)),
    };
    let mut failure = failure;
    if failure.is_none() && cli.oracle {
        if let Err(e) = attach_oracle(&doc, &mut results) {
            failure = Some(e);
        }
    }
    if let Err(e) = export(&doc, &results, &dir, options) {
        eprintln!("export failed: {e}");
        return ExitCode::from(3);
    }
    if let Some(e) = failure {
        eprintln!("run failed after {} trials: {e}", results.trials.len());
        return ExitCode::from(if e.is_config() { 2 } else { 3 });
    }

    println!("speed range   trials  J1 mean      J1 rsd%  J2 mean      J2 rsd%  power mW");
    for r in &results.aggregates {
        println!(
            "[{:>4},{:>4}]  {:>6}  {:<11.4}  {:<7.3}  {:<11.4}  {:<7.3}  {:.4}",
            r.speed_range[0], r.speed_range[1], r.trials, r.j1.mean, r.j1.rsd, r.j2.mean, r.j2.rsd, r.power_mw.mean
        );
    }
    for c in &results.oracle {
        for (seed, hv) in &c.trial_hypervolumes {
            println!(
                "oracle [{},{}] seed {seed}: hypervolume ratio {:.4}",
                c.speed_range[0],
                c.speed_range[1],
                hv / c.oracle.hypervolume
            );
        }
    }
    println!("wrote {}", dir.display());
    ExitCode::SUCCESS
}
