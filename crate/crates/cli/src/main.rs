//! Command line front end: lattice/graph dumps, single-shot decoding,
//! Monte Carlo and exhaustive sweeps, and the two data fits.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use mobius_core::analysis;
use mobius_core::decoder::{
    decode_comparative, decode_moebius, ComparativeConfig, DecoderKind, Variant,
};
use mobius_core::lattice::{build_lattice, PauliXError, QubitId};
use mobius_core::noise::{run_exhaustive, run_mc, MCResult};
use mobius_core::unified::build_unified;

#[derive(Parser)]
#[command(name = "mobius", version, about = "Matching decoder for the triangular color code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the code lattice as JSON.
    Lattice(LatticeArgs),
    /// Dump the unified matching graph as JSON.
    Unified(LatticeArgs),
    /// Decode one error read from a file or stdin.
    Decode(DecodeArgs),
    /// Monte Carlo failure-rate estimation; one CSV row per (d, p) point.
    Mc(McArgs),
    /// Exhaustively decode every error up to a weight cutoff.
    Exhaust(ExhaustArgs),
    /// Fit the low-rate scaling ansatz from a CSV of Monte Carlo rows.
    FitLowp(FitLowpArgs),
    /// Fit the finite-size threshold crossing from a CSV of Monte Carlo rows.
    FitThreshold(FitThresholdArgs),
}

#[derive(Args)]
struct LatticeArgs {
    /// Code distance (odd, >= 3).
    #[arg(long)]
    d: u32,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    d: u32,
    /// JSON array of flipped qubit ids; "-" reads stdin.
    #[arg(long)]
    error: String,
    /// Decoder: moebius or comparative.
    #[arg(long, default_value = "comparative")]
    variant: String,
    #[arg(long, default_value_t = 1)]
    upsilon: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    /// Comma-separated list of distances.
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    /// Comma-separated list of physical error rates.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "moebius")]
    variant: String,
    #[arg(long, default_value_t = 1)]
    upsilon: u32,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExhaustArgs {
    #[arg(long)]
    d: u32,
    /// Maximum error weight; defaults to (d-1)/2.
    #[arg(long)]
    w_max: Option<u32>,
    #[arg(long, default_value = "comparative")]
    variant: String,
    #[arg(long, default_value_t = 1)]
    upsilon: u32,
    /// Restrict to one chunk, as INDEX/OF (e.g. 3/16).
    #[arg(long)]
    chunk: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Summary JSON output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Failure log, one JSON line per failing support.
    #[arg(long)]
    failures_out: Option<PathBuf>,
}

#[derive(Args)]
struct FitLowpArgs {
    /// CSV produced by `mc`.
    #[arg(long)]
    input: PathBuf,
    /// Discard points with p_fail below this value.
    #[arg(long, default_value_t = analysis::DEFAULT_DISCARD)]
    discard: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitThresholdArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.07)]
    p_min: f64,
    #[arg(long, default_value_t = 0.11)]
    p_max: f64,
    #[arg(long, default_value_t = 0.09)]
    init_pc: f64,
    #[arg(long, default_value_t = 1.5)]
    init_nu: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit codes: 2 usage (from clap), 3 unreadable input, 4 unwritable output,
/// 5 domain error.
enum Failure {
    Input(anyhow::Error),
    Output(anyhow::Error),
    Domain(anyhow::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 3,
            Failure::Output(_) => 4,
            Failure::Domain(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(e) => format!("input error: {e:#}"),
            Failure::Output(e) => format!("output error: {e:#}"),
            Failure::Domain(e) => format!("error: {e:#}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => println!("{summary}"),
        Err(failure) => {
            eprintln!("{}", failure.message());
            std::process::exit(failure.code());
        }
    }
}

fn domain<T>(r: mobius_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Domain(anyhow!(e)))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Lattice(args) => {
            let lat = domain(build_lattice(args.d))?;
            let json = serde_json::to_string_pretty(&lat.dump()).expect("serializable dump");
            write_output(args.out.as_deref(), &json, None)?;
            Ok(format!(
                "lattice d={} qubits={} faces={}",
                args.d,
                lat.num_qubits(),
                lat.num_faces()
            ))
        }
        Command::Unified(args) => {
            let lat = domain(build_lattice(args.d))?;
            let uni = build_unified(&lat);
            let json = serde_json::to_string_pretty(&uni.dump()).expect("serializable dump");
            write_output(args.out.as_deref(), &json, None)?;
            Ok(format!(
                "unified d={} nodes={} unit_edges={}",
                args.d,
                uni.num_nodes(),
                uni.unit_edges().len()
            ))
        }
        Command::Decode(args) => run_decode(args),
        Command::Mc(args) => run_mc_cmd(args),
        Command::Exhaust(args) => run_exhaust_cmd(args),
        Command::FitLowp(args) => {
            let data = read_csv(&args.input)?;
            let fit = domain(analysis::fit_lowp_with(&data, args.discard))?;
            let json = serde_json::to_string_pretty(&fit).expect("serializable fit");
            write_output(args.out.as_deref(), &json, None)?;
            Ok(format!(
                "fit-lowp alpha={:.4} gamma={:.4} N={:.3} beta={:.4}",
                fit.alpha, fit.gamma, fit.n_entropy, fit.beta
            ))
        }
        Command::FitThreshold(args) => {
            let data = read_csv(&args.input)?;
            let fit = domain(analysis::fit_threshold(
                &data,
                (args.init_pc, args.init_nu),
                (args.p_min, args.p_max),
            ))?;
            let json = serde_json::to_string_pretty(&fit).expect("serializable fit");
            write_output(args.out.as_deref(), &json, None)?;
            Ok(format!(
                "fit-threshold p_c={:.4} nu0={:.3} residual={:.3e}",
                fit.p_c, fit.nu0, fit.residual
            ))
        }
    }
}

fn parse_kind(variant: &str, upsilon: u32) -> Result<DecoderKind, Failure> {
    match variant {
        "moebius" => Ok(DecoderKind::Moebius),
        "comparative" => {
            let cfg = ComparativeConfig::with_upsilon(upsilon)
                .map_err(|e| Failure::Domain(anyhow!(e)))?;
            Ok(DecoderKind::Comparative(cfg))
        }
        other => Err(Failure::Input(anyhow!(
            "unknown decoder variant '{other}' (expected moebius or comparative)"
        ))),
    }
}

fn run_decode(args: DecodeArgs) -> Result<String, Failure> {
    let raw = if args.error == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading error from stdin")
            .map_err(Failure::Input)?;
        buf
    } else {
        std::fs::read_to_string(&args.error)
            .with_context(|| format!("reading {}", args.error))
            .map_err(Failure::Input)?
    };
    let support: Vec<QubitId> = serde_json::from_str(&raw)
        .context("error file must be a JSON array of qubit ids")
        .map_err(Failure::Input)?;
    let lat = domain(build_lattice(args.d))?;
    if let Some(&q) = support.iter().find(|&&q| q as usize >= lat.num_qubits()) {
        return Err(Failure::Input(anyhow!(
            "qubit id {q} out of range for d={} ({} qubits)",
            args.d,
            lat.num_qubits()
        )));
    }
    let kind = parse_kind(&args.variant, args.upsilon)?;
    let uni = build_unified(&lat);
    let e = PauliXError::new(support);
    let syn = lat.syndrome(&e);
    let result = match &kind {
        DecoderKind::Moebius => decode_moebius(&uni, &syn),
        DecoderKind::Comparative(cfg) => domain(decode_comparative(&uni, &syn, cfg, args.d))?,
    };
    let success =
        result.predicted_parity == lat.logical_parity(&e, mobius_core::lattice::Color::G);
    let report = serde_json::json!({
        "d": args.d,
        "defects": syn
            .defects()
            .iter()
            .map(|&(f, c)| serde_json::json!({"face": f, "color": c.label()}))
            .collect::<Vec<_>>(),
        "ell_or": result.ell_or,
        "ell_alt": result.ell_alt,
        "predicted_parity": result.predicted_parity,
        "variant": match result.variant {
            Variant::Original => "original",
            Variant::Alternative => "alternative",
        },
        "success": success,
    });
    let json = serde_json::to_string_pretty(&report).expect("serializable report");
    write_output(args.out.as_deref(), &json, None)?;
    Ok(format!(
        "decode d={} |e|={} ell_or={} success={}",
        args.d,
        e.weight(),
        result.ell_or,
        success
    ))
}

fn install_pool(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("initializing worker pool")
            .map_err(Failure::Domain)?;
    }
    Ok(())
}

fn run_mc_cmd(args: McArgs) -> Result<String, Failure> {
    if args.d.is_empty() || args.p.is_empty() {
        return Err(Failure::Input(anyhow!("need at least one --d and one --p value")));
    }
    let kind = parse_kind(&args.variant, args.upsilon)?;
    install_pool(args.jobs)?;
    let mut rows = vec![MCResult::CSV_HEADER.to_string()];
    for &d in &args.d {
        for &p in &args.p {
            let r = domain(run_mc(d, p, args.trials, args.seed, &kind))?;
            rows.push(r.csv_row());
        }
    }
    let body = rows.join("\n") + "\n";
    write_output(args.out.as_deref(), &body, Some(timestamp_header()))?;
    Ok(format!(
        "mc {} points, {} trials each, variant={}",
        args.d.len() * args.p.len(),
        args.trials,
        args.variant
    ))
}

fn run_exhaust_cmd(args: ExhaustArgs) -> Result<String, Failure> {
    let kind = parse_kind(&args.variant, args.upsilon)?;
    let w_max = args.w_max.unwrap_or((args.d.saturating_sub(1)) / 2);
    let chunk = match &args.chunk {
        None => None,
        Some(spec) => {
            let (i, n) = spec
                .split_once('/')
                .ok_or_else(|| Failure::Input(anyhow!("--chunk must look like INDEX/OF")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .with_context(|| format!("bad chunk component '{s}'"))
                    .map_err(Failure::Input)
            };
            Some((parse(i)?, parse(n)?))
        }
    };
    install_pool(args.jobs)?;
    let result = domain(run_exhaustive(args.d, w_max, &kind, chunk))?;
    if let Some(path) = &args.failures_out {
        let mut log = String::new();
        for support in &result.failures {
            log.push_str(&serde_json::json!({ "support": support }).to_string());
            log.push('\n');
        }
        write_output(Some(path), &log, None)?;
    }
    let summary = serde_json::json!({
        "d": result.d,
        "w_max": result.w_max,
        "configs_tested": result.configs_tested,
        "failures": result.failures.len(),
        "failing_supports": result.failures,
    });
    let json = serde_json::to_string_pretty(&summary).expect("serializable summary");
    write_output(args.out.as_deref(), &json, None)?;
    Ok(format!(
        "exhaust d={} w_max={} configs={} failures={}",
        result.d,
        result.w_max,
        result.configs_tested,
        result.failures.len()
    ))
}

fn read_csv(path: &Path) -> Result<Vec<MCResult>, Failure> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)?;
    let mut rows = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("d,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Failure::Input(anyhow!(
                "line {}: expected 8 comma-separated fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let parse_err = |what: &str| {
            Failure::Input(anyhow!("line {}: cannot parse {what}", idx + 1))
        };
        rows.push(MCResult {
            d: fields[0].parse().map_err(|_| parse_err("d"))?,
            p: fields[1].parse().map_err(|_| parse_err("p"))?,
            trials: fields[2].parse().map_err(|_| parse_err("trials"))?,
            failures: fields[3].parse().map_err(|_| parse_err("failures"))?,
            p_fail: fields[4].parse().map_err(|_| parse_err("p_fail"))?,
            stderr: fields[5].parse().map_err(|_| parse_err("stderr"))?,
            seed: fields[6].parse().map_err(|_| parse_err("seed"))?,
            variant: fields[7].to_string(),
        });
    }
    if rows.is_empty() {
        return Err(Failure::Input(anyhow!("no data rows in {}", path.display())));
    }
    Ok(rows)
}

fn timestamp_header() -> String {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("# generated_at={now}")
}

/// Resolves relative paths against MOBIUS_OUT_DIR and writes atomically via a
/// temporary file in the target directory. The timestamp header, when given,
/// is the only non-reproducible line and only appears in file output.
fn write_output(
    out: Option<&Path>,
    contents: &str,
    header: Option<String>,
) -> Result<(), Failure> {
    match out {
        None => {
            println!("{contents}");
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("MOBIUS_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            if let Some(dir) = dir {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))
                    .map_err(Failure::Output)?;
            }
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .context("creating temporary file")
                .map_err(Failure::Output)?;
            use std::io::Write;
            let payload = match header {
                Some(h) => format!("{h}\n{contents}"),
                None => contents.to_string(),
            };
            tmp.write_all(payload.as_bytes())
                .context("writing output")
                .map_err(Failure::Output)?;
            tmp.persist(&path)
                .with_context(|| format!("moving output into {}", path.display()))
                .map_err(Failure::Output)?;
            Ok(())
        }
    }
}
