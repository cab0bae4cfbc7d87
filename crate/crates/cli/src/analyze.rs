use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use kzoom::analysis::{
    battery_experiment, bifurcation_grid, cipher_distribution_experiment, export_csv,
    histogram_experiment, kac_report, lag_autocorrelation, return_map_data, BatteryConfig,
    BifurcationConfig, CipherDistConfig, CipherDistResult, CsvExport, HistogramConfig,
    KacConfig, ReturnMapConfig, SourceSpec,
};
use kzoom::cipher::{self, KeyOverrides};
use kzoom::prng::battery::DEFAULT_ALPHA;
use kzoom::seed::{sub_rng, unit_literal};
use kzoom::EvalOrder;

use crate::args::{
    Analyze, BatteryArgs, BifArgs, CipherdistArgs, Common, HistArgs, KacArgs, RetmapArgs,
};
use crate::commands::{load_key, read};
use crate::error::CliError;

/// Share of seeds (or runs) that must pass for `--assert`.
const PASS_SHARE: f64 = 0.9;

pub fn run(seed: u64, cmd: Analyze) -> Result<(), CliError> {
    match cmd {
        Analyze::Hist(a) => hist(seed, a),
        Analyze::Bif(a) => bif(a),
        Analyze::Retmap(a) => retmap(seed, a),
        Analyze::Cipherdist(a) => cipherdist(seed, a),
        Analyze::Kac(a) => kac(a),
        Analyze::Battery(a) => battery(seed, a),
    }
}

fn out_path(common: &Common, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&common.out_dir).map_err(|e| CliError::io(&common.out_dir, e))?;
    Ok(common.out_dir.join(name))
}

fn export<T: CsvExport + ?Sized>(result: &T, path: &Path) -> Result<(), CliError> {
    export_csv(result, path)?;
    Ok(())
}

/// Prints the summary line and turns a failed check into exit 5 when asked.
fn finish(summary: String, passed: bool, assert: bool) -> Result<(), CliError> {
    let verdict = if passed { "pass" } else { "fail" };
    println!("{summary} [{verdict}]");
    if assert && !passed {
        return Err(CliError::Assertion(format!("check failed: {summary}")));
    }
    Ok(())
}

fn enough(passes: usize, total: usize) -> bool {
    total > 0 && passes as f64 >= PASS_SHARE * total as f64
}

fn hist(seed: u64, a: HistArgs) -> Result<(), CliError> {
    let config = HistogramConfig {
        mu: a.mu,
        k: a.k,
        precision: a.precision,
        seeds: a.seeds.unwrap_or(if a.scale.paper_scale { 100 } else { 10 }),
        samples: a.samples,
        bins: a.bins,
        transient: a.transient,
        master_seed: seed,
    };
    let result = histogram_experiment(&config)?;
    let path = out_path(&a.common, &format!("hist_k{}.csv", a.k))?;
    export(&result, &path)?;
    let tests = result.chi_square_per_seed()?;
    let uniform = tests.iter().filter(|t| t.p_value >= DEFAULT_ALPHA).count();
    let summary = format!(
        "hist k={}: {uniform}/{} seeds uniform at p >= {DEFAULT_ALPHA}; wrote {}",
        a.k,
        tests.len(),
        path.display()
    );
    finish(summary, enough(uniform, tests.len()), a.check.assert)
}

fn bif(a: BifArgs) -> Result<(), CliError> {
    let config = BifurcationConfig {
        mu_lo: a.mu_lo,
        mu_hi: a.mu_hi,
        mu_steps: a.steps,
        k: a.k,
        iters: a.iters,
        transient: a.transient,
        x_bins: a.x_bins,
        x0: a.x0,
        precision: a.precision,
    };
    let grid = bifurcation_grid(&config)?;
    let csv = out_path(&a.common, &format!("bif_k{}.csv", a.k))?;
    export(&grid, &csv)?;
    let pgm = a.common.out_dir.join(format!("bif_k{}.pgm", a.k));
    let file = File::create(&pgm).map_err(|e| CliError::io(&pgm, e))?;
    grid.write_pgm(BufWriter::new(file))
        .map_err(|e| CliError::io(&pgm, e))?;
    println!(
        "bif k={}: {} columns x {} bins, {} degenerate; wrote {} and {}",
        a.k,
        grid.mu.len(),
        config.x_bins,
        grid.degenerate.len(),
        csv.display(),
        pgm.display()
    );
    Ok(())
}

fn retmap(seed: u64, a: RetmapArgs) -> Result<(), CliError> {
    let x0 = a
        .x0
        .unwrap_or_else(|| unit_literal(&mut sub_rng(seed, 0), 20));
    let config = ReturnMapConfig {
        mu: a.mu.clone(),
        x0,
        k: a.k,
        n: a.n,
        transient: a.transient,
        dims: a.dims,
        precision: a.precision,
    };
    let data = return_map_data(&config)?;
    let path = out_path(&a.common, &format!("retmap_k{}.csv", a.k))?;
    export(&data, &path)?;
    let r1 = lag_autocorrelation(&data.series, 1)?;
    let mu: f64 = a
        .mu
        .parse()
        .map_err(|_| CliError::Config(format!("mu `{}` is not a number", a.mu)))?;
    let off = data.parabola_deviation(mu, EvalOrder::default());
    let summary = format!(
        "retmap k={}: lag-1 correlation {r1:.4}, largest distance from the parabola {off:.4}; wrote {}",
        a.k,
        path.display()
    );
    finish(summary, r1.abs() < 0.05 && off > 0.1, a.check.assert)
}

fn cipherdist(seed: u64, a: CipherdistArgs) -> Result<(), CliError> {
    let template = match &a.key {
        Some(path) => load_key(path)?,
        None => cipher::keygen(
            seed,
            &KeyOverrides {
                precision: Some(a.precision),
                ..Default::default()
            },
        )?,
    };
    let mut sources: Vec<SourceSpec> = a.k.iter().map(|&k| SourceSpec::KLogistic { k }).collect();
    if a.baseline {
        sources.push(SourceSpec::Baseline);
    }
    for path in &a.external {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let bytes: Arc<[u8]> = read(path)?.into();
        sources.push(SourceSpec::External { name, bytes });
    }
    let paper = a.scale.paper_scale;
    let config = CipherDistConfig {
        plaintexts: a.plaintexts.unwrap_or(if paper { 100 } else { 10 }),
        letters: a.letters.unwrap_or(if paper { 10_000 } else { 1000 }),
        bins: a.bins,
        master_seed: seed,
        ..CipherDistConfig::new(template.fields().clone(), sources)
    };
    let results = cipher_distribution_experiment(&config)?;
    let path = out_path(&a.common, "cipherdist.csv")?;
    export(results.as_slice(), &path)?;
    for r in &results {
        let mean = r
            .mean_total()
            .map_or_else(|| "n/a".to_string(), |m| format!("{m:.0}"));
        println!(
            "  {}: mean total {mean}, {} of {} runs hit N_max",
            r.label,
            r.exhausted_runs(),
            r.totals.len()
        );
    }
    let (passed, detail) = economy(&a.k, &results);
    let summary = format!("cipherdist: {detail}; wrote {}", path.display());
    finish(summary, passed, a.check.assert)
}

/// Whether the deepest zoom needs fewer iterations than the shallowest one
/// in enough paired runs.
fn economy(ks: &[u32], results: &[CipherDistResult]) -> (bool, String) {
    let arms: Vec<(u32, &CipherDistResult)> = ks.iter().copied().zip(results).collect();
    let (Some(lo), Some(hi)) = (
        arms.iter().min_by_key(|(k, _)| *k),
        arms.iter().max_by_key(|(k, _)| *k),
    ) else {
        return (true, "no zoom depths to compare".into());
    };
    if lo.0 == hi.0 {
        return (true, format!("only k={} requested", lo.0));
    }
    let runs = lo.1.totals.len();
    let shorter = lo
        .1
        .totals
        .iter()
        .zip(&hi.1.totals)
        .filter(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => b < a,
            (None, Some(_)) => true,
            _ => false,
        })
        .count();
    (
        shorter as f64 >= 0.95 * runs as f64,
        format!("k={} shorter than k={} in {shorter}/{runs} runs", hi.0, lo.0),
    )
}

fn kac(a: KacArgs) -> Result<(), CliError> {
    let config = KacConfig {
        mu: a.mu,
        x0: a.x0,
        k: a.k,
        precision: a.precision,
        x_min: a.x_min,
        x_max: a.x_max,
        sites: a.sites,
        site: a.site,
        min_returns: a.min_returns,
        transient: a.transient,
        max_steps: a.max_steps,
    };
    let report = kac_report(&config)?;
    let path = out_path(&a.common, &format!("kac_k{}_site{}.csv", a.k, a.site))?;
    export(&report, &path)?;
    let summary = format!(
        "kac k={} site {}: mean return {:.2} against {:.2} predicted ({:.2}% off, {} returns); wrote {}",
        a.k,
        a.site,
        report.empirical_mean,
        report.predicted_mean,
        100.0 * report.relative_error,
        report.returns,
        path.display()
    );
    finish(summary, report.relative_error <= 0.10, a.check.assert)
}

fn battery(seed: u64, a: BatteryArgs) -> Result<(), CliError> {
    let paper = a.scale.paper_scale;
    let config = BatteryConfig {
        mu: a.mu,
        k: a.k,
        precision: a.precision,
        seeds: a.seeds.unwrap_or(if paper { 100 } else { 10 }),
        words: a.words.unwrap_or(if paper { 2_800_000 } else { 31_250 }),
        transient: a.transient,
        alpha: a.alpha,
        block_len: a.block_len,
        master_seed: seed,
    };
    let result = battery_experiment(&config)?;
    let path = out_path(&a.common, &format!("battery_k{}.csv", a.k))?;
    export(&result, &path)?;
    let seeds = result.rows.len();
    let tests = ["frequency", "runs", "block_frequency"];
    let passes: Vec<usize> = tests.iter().map(|t| result.passes(t)).collect();
    let counts = tests
        .iter()
        .zip(&passes)
        .map(|(t, p)| format!("{t} {p}/{seeds}"))
        .collect::<Vec<_>>()
        .join(", ");
    let summary = format!("battery k={}: {counts}; wrote {}", a.k, path.display());
    finish(
        summary,
        passes.iter().all(|&p| enough(p, seeds)),
        a.check.assert,
    )
}
