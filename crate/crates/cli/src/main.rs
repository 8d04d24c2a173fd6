//! Command-line driver: exact dimensions, Monte Carlo estimation,
//! tableau generation and transformation, and uniformity diagnostics,
//! with deterministic seeding and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use taquin_core::dimensions::ln_big;
use taquin_core::{
    chi_square_uniform, estimate_cotransitions_chains, exact_cotransition, exact_dim_3d,
    gaussian_summary, greedy_sequence_estimated, greedy_sequence_exact, hook_dim_2d, max_dim_table,
    nerve_coverage, normalized_dim, run_histogram, sample_plancherel2d_tableau, sample_pp_tableau,
    schutz, schutz_rnd_with_nerve, Diagram3, DimCache, Error, Nerve, RandomSource, Result, Tableau,
    DEFAULT_DIM_CAP, DEFAULT_MAX_DIM_CAP,
};

#[derive(Parser)]
#[command(
    name = "taquin",
    version,
    about = "Jeu de taquin on plane-partition tableaux"
)]
struct Cli {
    /// Worker threads for parallelizable subcommands. Outputs do not
    /// depend on the worker count.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Emit a JSON document instead of CSV/plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the primary output to FILE (plus FILE.manifest.json).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dimension of a diagram (hook formula for partitions,
    /// branching recursion otherwise).
    Dim {
        /// Diagram JSON: `[4,4,3,3,1]` or `[[2,1],[1]]`.
        #[arg(long)]
        shape: PathBuf,
        /// Size cap for the 3D recursion.
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        cap: u64,
    },
    /// Maximum dimension over all diagrams of each size `1..=n`.
    MaxDim {
        #[arg(long)]
        n: u64,
        /// Size cap for the level sweep.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_CAP)]
        cap: u64,
        /// CSV output (the default format).
        #[arg(long)]
        csv: bool,
    },
    /// Monte Carlo co-transition frequencies at every removable corner.
    Cotrans(CotransArgs),
    /// Greedy minimal co-transition growth sequence.
    Greedy(GreedyArgs),
    /// Sample one random tableau from a growth process.
    Generate {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Process::Pp)]
        process: Process,
    },
    /// Apply one taquin transformation to a tableau.
    Step {
        /// Tableau JSON: array of `[x,y,z]` triples in path order.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Classic)]
        variant: Variant,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Re-add the vacated corner, preserving the shape.
        #[arg(long)]
        addlast: bool,
    },
    /// Histogram and uniformity statistics of the randomized chain.
    Uniformity(UniformityArgs),
    /// Iterations until the randomized chain has vacated every corner
    /// of a sampled pseudo-Plancherel shape.
    Coverage {
        /// Shape size to sample.
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Iteration budget; default 50 per removable corner.
        #[arg(long)]
        max_iters: Option<u64>,
        #[arg(long)]
        csv: bool,
    },
    /// Normalized dimensions of a greedy run (reads `greedy` CSV).
    Normdim {
        /// Greedy CSV file; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct CotransArgs {
    #[arg(long)]
    shape: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    #[arg(long, default_value_t = 1)]
    chains: u32,
    /// Compute the exact column even for shapes above the default
    /// feasibility bound.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct GreedyArgs {
    #[arg(long)]
    n: u64,
    /// Exact mode: choose corners by exact dimension ratios.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    /// Largest size for which estimated rows also carry exact columns.
    #[arg(long, default_value_t = 33)]
    exact_limit: u64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    cap: u64,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct UniformityArgs {
    #[arg(long)]
    shape: PathBuf,
    #[arg(long)]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: u32,
    /// Also tally every `thin`-th sample of each chain.
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    cap: u64,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Process {
    /// Pseudo-Plancherel growth on plane partitions.
    Pp,
    /// Classical Plancherel growth on partitions.
    Plancherel2d,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Classic,
    Preserve,
    Inverse,
    Random,
}

#[derive(Serialize)]
struct ManifestOutput {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    subcommand: String,
    argv: Vec<String>,
    seed: Option<u64>,
    version: String,
    started: String,
    finished: String,
    outputs: Vec<ManifestOutput>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = chrono::Utc::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("failed to build worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = pool.install(|| run(&cli));
    let body = match outcome {
        Ok(body) => body,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    let digest = hex_digest(body.as_bytes());
    let target = match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
            path.display().to_string()
        }
        None => {
            print!("{body}");
            "-".to_string()
        }
    };
    let manifest = Manifest {
        subcommand: subcommand_name(&cli.command).to_string(),
        argv: std::env::args().collect(),
        seed: subcommand_seed(&cli.command),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started: started.to_rfc3339(),
        finished: chrono::Utc::now().to_rfc3339(),
        outputs: vec![ManifestOutput {
            path: target,
            sha256: digest,
        }],
    };
    let manifest_json =
        serde_json::to_string(&manifest).expect("manifest serialization cannot fail");
    eprintln!("{manifest_json}");
    if let Some(path) = &cli.out {
        let sidecar = sidecar_path(path);
        if let Err(e) = fs::write(&sidecar, format!("{manifest_json}\n")) {
            eprintln!("cannot write {}: {e}", sidecar.display());
            return ExitCode::FAILURE;
        }
    }
    ExitCode::SUCCESS
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let mut out = String::with_capacity(64);
    for byte in hasher.finalize() {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Dim { .. } => "dim",
        Command::MaxDim { .. } => "max-dim",
        Command::Cotrans(_) => "cotrans",
        Command::Greedy(_) => "greedy",
        Command::Generate { .. } => "generate",
        Command::Step { .. } => "step",
        Command::Uniformity(_) => "uniformity",
        Command::Coverage { .. } => "coverage",
        Command::Normdim { .. } => "normdim",
    }
}

fn subcommand_seed(c: &Command) -> Option<u64> {
    match c {
        Command::Dim { .. } | Command::MaxDim { .. } | Command::Normdim { .. } => None,
        Command::Cotrans(a) => Some(a.seed),
        Command::Greedy(a) => Some(a.seed),
        Command::Generate { seed, .. }
        | Command::Step { seed, .. }
        | Command::Coverage { seed, .. } => Some(*seed),
        Command::Uniformity(a) => Some(a.seed),
    }
}

fn read_diagram(path: &Path) -> Result<Diagram3> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    Diagram3::from_json(&text)
}

fn read_tableau(path: &Path) -> Result<Tableau> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    Tableau::from_json(&text)
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Dim { shape, cap } => cmd_dim(shape, *cap, cli.json),
        Command::MaxDim { n, cap, .. } => cmd_max_dim(*n, *cap, cli.json),
        Command::Cotrans(args) => cmd_cotrans(args, cli.json),
        Command::Greedy(args) => cmd_greedy(args, cli.json),
        Command::Generate { n, seed, process } => cmd_generate(*n, *seed, *process, cli.json),
        Command::Step {
            input,
            variant,
            seed,
            addlast,
        } => cmd_step(input, *variant, *seed, *addlast),
        Command::Uniformity(args) => cmd_uniformity(args, cli.json),
        Command::Coverage {
            n, seed, max_iters, ..
        } => cmd_coverage(*n, *seed, *max_iters, cli.json),
        Command::Normdim { input, .. } => cmd_normdim(input.as_deref(), cli.json),
    }
}

fn cmd_dim(shape: &Path, cap: u64, json: bool) -> Result<String> {
    let d = read_diagram(shape)?;
    let dim = if d.is_planar() {
        hook_dim_2d(&d)?
    } else {
        exact_dim_3d(&d, &DimCache::with_cap(cap))?
    };
    if json {
        Ok(format!(
            "{}\n",
            serde_json::json!({ "size": d.size(), "dimension": dim.to_string() })
        ))
    } else {
        Ok(format!("{dim}\n"))
    }
}

fn cmd_max_dim(n: u64, cap: u64, json: bool) -> Result<String> {
    let rows = max_dim_table(n, cap)?;
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "size": r.size,
                    "dimension": r.dim.to_string(),
                    "shape": r.shape.rows(),
                })
            })
            .collect();
        return Ok(format!("{}\n", serde_json::Value::Array(items)));
    }
    let mut out = String::from("size,dimension,rowform\n");
    for r in &rows {
        // Height-matrix form even for planar shapes, mirroring the JSON
        // output, so the column renders uniformly across the table.
        let rowform =
            serde_json::to_string(r.shape.rows()).expect("serializing heights cannot fail");
        let _ = writeln!(out, "{},{},\"{}\"", r.size, r.dim, rowform);
    }
    Ok(out)
}

fn cmd_cotrans(args: &CotransArgs, json: bool) -> Result<String> {
    let shape = read_diagram(&args.shape)?;
    let est =
        estimate_cotransitions_chains(&shape, args.trials, args.seed, args.burn_in, args.chains)?;
    let with_exact = args.exact || shape.size() <= DEFAULT_MAX_DIM_CAP;
    let cache = DimCache::new();
    let mut rows = Vec::new();
    for b in shape.removable_corners() {
        let exact = if with_exact {
            Some(exact_cotransition(&shape.remove_box(b)?, &shape, &cache)?.value)
        } else {
            None
        };
        rows.push((b, est.count_of(b), est.frequency_of(b), exact));
    }
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|(b, count, freq, exact)| {
                serde_json::json!({
                    "corner": b,
                    "count": count,
                    "frequency": freq,
                    "exact": exact,
                })
            })
            .collect();
        return Ok(format!("{}\n", serde_json::Value::Array(items)));
    }
    let mut out = String::from(if with_exact {
        "corner_x,corner_y,corner_z,count,frequency,exact\n"
    } else {
        "corner_x,corner_y,corner_z,count,frequency\n"
    });
    for (b, count, freq, exact) in rows {
        let _ = write!(out, "{},{},{},{count},{freq:.6}", b.x, b.y, b.z);
        if let Some(e) = exact {
            let _ = write!(out, ",{e:.6}");
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_greedy(args: &GreedyArgs, json: bool) -> Result<String> {
    if args.exact {
        let cache = DimCache::with_cap(args.cap);
        let steps = greedy_sequence_exact(args.n, &cache)?;
        if json {
            let items: Vec<_> = steps
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "size": s.shape.size(),
                        "exact_cotransition": s.cotransition.value,
                        "shape": s.shape.rows(),
                    })
                })
                .collect();
            return Ok(format!("{}\n", serde_json::Value::Array(items)));
        }
        let mut out = String::from("size,exact_cotransition\n");
        for s in &steps {
            let _ = writeln!(out, "{},{:.6}", s.shape.size(), s.cotransition.value);
        }
        return Ok(out);
    }
    let steps = greedy_sequence_estimated(args.n, args.trials, args.seed)?;
    let cache = DimCache::with_cap(args.cap);
    let mut est_log_dim = 0.0;
    let mut prev = Diagram3::empty();
    let mut rows = Vec::new();
    for s in &steps {
        est_log_dim -= s.estimate.ln();
        let exact = if s.shape.size() <= args.exact_limit {
            let cot = exact_cotransition(&prev, &s.shape, &cache)?.value;
            let log_dim = ln_big(&exact_dim_3d(&s.shape, &cache)?);
            Some((cot, (est_log_dim - log_dim).exp()))
        } else {
            None
        };
        rows.push((s.shape.size(), s.estimate, exact));
        prev = s.shape.clone();
    }
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|(size, estimate, exact)| {
                serde_json::json!({
                    "size": size,
                    "estimate": estimate,
                    "exact": exact.map(|(c, _)| c),
                    "ratio_cotrans": exact.map(|(c, _)| estimate / c),
                    "ratio_dim": exact.map(|(_, r)| r),
                })
            })
            .collect();
        return Ok(format!("{}\n", serde_json::Value::Array(items)));
    }
    let mut out = String::from("size,estimate,exact,ratio_cotrans,ratio_dim\n");
    for (size, estimate, exact) in rows {
        match exact {
            Some((cot, ratio_dim)) => {
                let _ = writeln!(
                    out,
                    "{size},{estimate:.6},{cot:.6},{:.6},{ratio_dim:.6}",
                    estimate / cot
                );
            }
            None => {
                let _ = writeln!(out, "{size},{estimate:.6},,,");
            }
        }
    }
    Ok(out)
}

fn cmd_generate(n: u64, seed: u64, process: Process, json: bool) -> Result<String> {
    let mut source = RandomSource::from_seed(seed);
    let t = match process {
        Process::Pp => sample_pp_tableau(n, &mut source),
        Process::Plancherel2d => sample_plancherel2d_tableau(n, &mut source),
    };
    if json {
        Ok(format!(
            "{}\n",
            serde_json::json!({ "n": n, "seed": seed, "tableau": t.path() })
        ))
    } else {
        Ok(format!("{}\n", t.to_json()))
    }
}

fn nerve_json(nerve: &Nerve) -> serde_json::Value {
    serde_json::json!({ "steps": nerve.steps(), "end": nerve.end() })
}

fn cmd_step(input: &Path, variant: Variant, seed: u64, addlast: bool) -> Result<String> {
    let t = read_tableau(input)?;
    let (out, nerve) = match variant {
        Variant::Classic | Variant::Preserve => {
            let (dropped, nerve) = schutz(&t)?;
            let keep = matches!(variant, Variant::Preserve) || addlast;
            let out = if keep {
                let mut path = dropped.into_path();
                path.push(nerve.end());
                Tableau::from_path(path)?
            } else {
                dropped
            };
            (out, Some(nerve))
        }
        Variant::Inverse => (taquin_core::schutz_preserve_inverse(&t)?, None),
        Variant::Random => {
            let mut source = RandomSource::from_seed(seed);
            let (out, nerve) = schutz_rnd_with_nerve(&t, &mut source, addlast)?;
            (out, Some(nerve))
        }
    };
    Ok(format!(
        "{}\n",
        serde_json::json!({
            "tableau": out.path(),
            "nerve": nerve.as_ref().map(nerve_json),
        })
    ))
}

fn histogram_block(
    out: &mut String,
    prefix: &str,
    h: &taquin_core::FrequencyHistogram,
    dim: &num_bigint::BigUint,
) -> Result<()> {
    let _ = writeln!(out, "{prefix}count_value,{prefix}num_tableaux");
    for (count, cells) in h.count_histogram() {
        let _ = writeln!(out, "{count},{cells}");
    }
    let gauss = gaussian_summary(h)?;
    let chi = chi_square_uniform(h, dim)?;
    let _ = writeln!(
        out,
        "{prefix}mean,{prefix}sigma,{prefix}chi2,{prefix}dof,{prefix}pvalue"
    );
    let _ = writeln!(
        out,
        "{:.6},{:.6},{:.6},{},{:.6}",
        gauss.mean, gauss.std_dev, chi.statistic, chi.dof, chi.p_value
    );
    Ok(())
}

fn histogram_json(
    h: &taquin_core::FrequencyHistogram,
    dim: &num_bigint::BigUint,
) -> Result<serde_json::Value> {
    let gauss = gaussian_summary(h)?;
    let chi = chi_square_uniform(h, dim)?;
    let histogram: Vec<_> = h.count_histogram().into_iter().collect();
    Ok(serde_json::json!({
        "histogram": histogram,
        "distinct": h.distinct(),
        "iterations": h.iterations,
        "mean": gauss.mean,
        "sigma": gauss.std_dev,
        "chi2": chi.statistic,
        "dof": chi.dof,
        "p_value": chi.p_value,
    }))
}

fn cmd_uniformity(args: &UniformityArgs, json: bool) -> Result<String> {
    let shape = read_diagram(&args.shape)?;
    let dim = exact_dim_3d(&shape, &DimCache::with_cap(args.cap))?;
    let run = run_histogram(&shape, args.iters, args.seed, args.chains, args.thin)?;
    if json {
        let full = histogram_json(&run.full, &dim)?;
        let thinned = match &run.thinned {
            Some(h) => Some(histogram_json(h, &dim)?),
            None => None,
        };
        return Ok(format!(
            "{}\n",
            serde_json::json!({ "dimension": dim.to_string(), "full": full, "thinned": thinned })
        ));
    }
    let mut out = String::new();
    histogram_block(&mut out, "", &run.full, &dim)?;
    if let Some(thinned) = &run.thinned {
        histogram_block(&mut out, "thinned_", thinned, &dim)?;
    }
    Ok(out)
}

fn cmd_coverage(n: u64, seed: u64, max_iters: Option<u64>, json: bool) -> Result<String> {
    let mut source = RandomSource::from_seed(seed);
    let shape = sample_pp_tableau(n, &mut source).shape();
    let start = Tableau::canonical(&shape);
    let corners = shape.removable_corners().len() as u64;
    let budget = max_iters.unwrap_or(50 * corners);
    let report = nerve_coverage(&start, budget, seed)?;
    if json {
        return Ok(format!(
            "{}\n",
            serde_json::json!({
                "iterations_to_full_coverage": report.covered_at,
                "num_positions": report.targets.len(),
                "iterations_run": report.iterations,
            })
        ));
    }
    let covered = report
        .covered_at
        .map_or_else(|| "none".to_string(), |v| v.to_string());
    Ok(format!(
        "iterations_to_full_coverage,num_positions\n{covered},{}\n",
        report.targets.len()
    ))
}

/// Reads a greedy CSV (exact or estimated form) and folds the chosen
/// co-transition probabilities into normalized dimensions.
fn cmd_normdim(input: Option<&Path>, json: bool) -> Result<String> {
    let text = match input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::MalformedInput(format!("stdin: {e}")))?;
            buf
        }
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedInput("empty input".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    let size_col = 0usize;
    let exact_col = columns
        .iter()
        .position(|c| c.trim() == "exact_cotransition" || c.trim() == "exact");
    let estimate_col = columns.iter().position(|c| c.trim() == "estimate");
    if exact_col.is_none() && estimate_col.is_none() {
        return Err(Error::MalformedInput(format!(
            "unrecognized greedy header: {header}"
        )));
    }
    let mut log_dim = 0.0;
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let n: u64 = fields[size_col]
            .trim()
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad size field: {line}")))?;
        let prob_text = exact_col
            .and_then(|c| fields.get(c))
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .or_else(|| {
                estimate_col
                    .and_then(|c| fields.get(c))
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
            })
            .ok_or_else(|| Error::MalformedInput(format!("no probability field: {line}")))?;
        let p: f64 = prob_text
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad probability field: {line}")))?;
        log_dim -= p.ln();
        rows.push((n, normalized_dim(n, log_dim)));
    }
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|(n, c)| serde_json::json!({ "size": n, "c_lambda": c }))
            .collect();
        return Ok(format!("{}\n", serde_json::Value::Array(items)));
    }
    let mut out = String::from("size,c_lambda\n");
    for (n, c) in rows {
        let _ = writeln!(out, "{n},{c:.6}");
    }
    Ok(out)
}
