use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use xdipole::analysis::analyze;
use xdipole::config::{DesignConfig, DesignDocument, GaFile};
use xdipole::geometry::{build_model, min_enclosing_sphere};
use xdipole::metrics::{common_band, extract_band, harrington_limit, sweep, BandKey, BandReport, SweepRecord};
use xdipole::optimizer::{run_ga, GaConfig, GaRun, SearchSpace};
use xdipole::Error;

const S11_THRESHOLD_DB: f64 = -10.0;
const AR_THRESHOLD_DB: f64 = 3.0;

#[derive(Parser)]
#[command(name = "xdipole", version, about = "Crossed-dipole end-fire array analysis and optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one design and write its report and pattern.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Analysis frequency in Hz, replacing the configured one.
        #[arg(long)]
        freq: Option<f64>,
        #[arg(long)]
        segments: Option<usize>,
        /// Exchange driven and parasitic element dimensions.
        #[arg(long)]
        swap_elements: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Frequency sweep with impedance and axial-ratio bands.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        f_start: f64,
        #[arg(long)]
        f_stop: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Genetic search for boresight LHCP realized gain.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ga: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enclosing sphere and the normal-gain bound.
    Limits {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Inputs already validated; anything failing now comes from the solve.
fn solve_err(e: Error) -> CliError {
    match e {
        Error::Config(_) | Error::Mesh(_) => CliError::Config(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config_path: String,
    config_sha256: String,
    ga_config_sha256: Option<String>,
    seed: Option<u64>,
    segments_per_dipole: usize,
    reference_impedance_ohm: f64,
    frequency_hz: f64,
    overrides: serde_json::Value,
}

fn sha256_hex(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<DesignConfig, CliError> {
    DesignConfig::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn manifest<'a>(command: &'a str, config_path: &Path, cfg: &DesignConfig) -> Result<Manifest<'a>, CliError> {
    Ok(Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config_path: config_path.display().to_string(),
        config_sha256: sha256_hex(config_path)?,
        ga_config_sha256: None,
        seed: None,
        segments_per_dipole: cfg.segments_per_dipole,
        reference_impedance_ohm: cfg.reference_impedance,
        frequency_hz: cfg.design.frequency,
        overrides: serde_json::Value::Null,
    })
}

fn cmd_analyze(
    config: &Path,
    freq: Option<f64>,
    segments: Option<usize>,
    swap: bool,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg = load_config(config)?;
    if let Some(f) = freq {
        cfg.design.frequency = f;
    }
    if let Some(n) = segments {
        cfg.segments_per_dipole = n;
    }
    if swap {
        cfg.design = cfg.design.swapped_elements();
    }
    cfg.validate()?;
    prepare_out(out)?;

    let (report, point) = analyze(&cfg.design, cfg.segments_per_dipole, cfg.reference_impedance).map_err(solve_err)?;
    write_json(out, "report.json", &report)?;
    let path = out.join("pattern.csv");
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    point.pattern.write_csv(BufWriter::new(file)).map_err(io_err(&path))?;

    let mut m = manifest("analyze", config, &cfg)?;
    m.overrides = serde_json::json!({ "freq_hz": freq, "segments": segments, "swap_elements": swap });
    write_json(out, "manifest.json", &m)
}

#[derive(Serialize)]
struct BandsDocument {
    s11: BandReport,
    ar: BandReport,
    common: BandReport,
}

fn cmd_sweep(config: &Path, f_start: f64, f_stop: f64, points: usize, out: &Path) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    if points < 2 {
        return Err(CliError::Config(format!("--points must be at least 2, got {points}")));
    }
    if !(f_start > 0.0 && f_stop > f_start && f_stop.is_finite()) {
        return Err(CliError::Config(format!("need 0 < --f-start < --f-stop, got {f_start} .. {f_stop}")));
    }
    prepare_out(out)?;

    let records = sweep(&cfg.design, f_start, f_stop, points, cfg.segments_per_dipole, cfg.reference_impedance)
        .map_err(solve_err)?;
    let mut csv = String::from(SweepRecord::CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let path = out.join("sweep.csv");
    fs::write(&path, csv).map_err(io_err(&path))?;

    let s11 = extract_band(&records, BandKey::S11, S11_THRESHOLD_DB).map_err(solve_err)?;
    let ar = extract_band(&records, BandKey::Ar, AR_THRESHOLD_DB).map_err(solve_err)?;
    let common = common_band(&s11, &ar);
    let doc = BandsDocument {
        s11: BandReport { key: "s11".into(), threshold_db: Some(S11_THRESHOLD_DB), bands: s11 },
        ar: BandReport { key: "ar".into(), threshold_db: Some(AR_THRESHOLD_DB), bands: ar },
        common: BandReport { key: "common".into(), threshold_db: None, bands: common },
    };
    write_json(out, "bands.json", &doc)?;

    let failed = records.iter().filter(|r| !r.ok).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {points} sweep points failed to solve");
    }
    let mut m = manifest("sweep", config, &cfg)?;
    m.overrides = serde_json::json!({ "f_start_hz": f_start, "f_stop_hz": f_stop, "points": points });
    write_json(out, "manifest.json", &m)
}

#[derive(Serialize)]
struct RunDocument<'a> {
    f0_hz: f64,
    search_spacing: bool,
    config: &'a GaConfig,
    run: &'a GaRun,
    /// `run.final_design` in the design-file schema.
    final_design_config: DesignDocument,
}

fn cmd_optimize(config: &Path, ga: &Path, out: &Path) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let file = GaFile::from_path(ga).map_err(|e| CliError::Config(format!("{}: {e}", ga.display())))?;
    let defaults = GaConfig::default();
    let ga_cfg = GaConfig {
        population: file.population.unwrap_or(defaults.population),
        generations: file.generations.unwrap_or(defaults.generations),
        rng_seed: file.seed.unwrap_or(defaults.rng_seed),
        segments_per_dipole: cfg.segments_per_dipole,
        reference_impedance: cfg.reference_impedance,
        ..defaults
    };
    ga_cfg.validate()?;
    let f0 = file.f0_hz.unwrap_or(cfg.design.frequency);
    let mut space = SearchSpace::new(f0)?;
    let search_spacing = file.search_spacing.unwrap_or(false);
    if search_spacing {
        space = space.with_spacing_search();
    }
    prepare_out(out)?;

    let run = run_ga(&space, &ga_cfg).map_err(solve_err)?;
    let best = DesignConfig { design: run.final_design, ..cfg }.to_document();
    let doc = RunDocument { f0_hz: f0, search_spacing, config: &ga_cfg, run: &run, final_design_config: best };
    write_json(out, "ga_run.json", &doc)?;
    write_json(out, "best_design.json", &best)?;

    let mut m = manifest("optimize", config, &cfg)?;
    m.ga_config_sha256 = Some(sha256_hex(ga)?);
    m.seed = Some(ga_cfg.rng_seed);
    m.frequency_hz = f0;
    m.overrides = serde_json::json!({ "ga_config_path": ga.display().to_string() });
    write_json(out, "manifest.json", &m)?;
    println!("best G_LHCP {:.3} dB after {} evaluations", run.final_best.fitness, run.evaluations);
    Ok(())
}

#[derive(Serialize)]
struct Limits {
    a_m: f64,
    ka: f64,
    d_max_dbi: f64,
}

fn cmd_limits(config: &Path, out: &Path) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    prepare_out(out)?;
    let model = build_model(&cfg.design, cfg.segments_per_dipole)?;
    let sphere = min_enclosing_sphere(&model);
    let limits = Limits { a_m: sphere.radius_a, ka: sphere.ka, d_max_dbi: harrington_limit(sphere.ka)? };
    write_json(out, "limits.json", &limits)?;
    write_json(out, "manifest.json", &manifest("limits", config, &cfg)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { config, freq, segments, swap_elements, out } => {
            cmd_analyze(&config, freq, segments, swap_elements, &out)
        }
        Command::Sweep { config, f_start, f_stop, points, out } => cmd_sweep(&config, f_start, f_stop, points, &out),
        Command::Optimize { config, ga, out } => cmd_optimize(&config, &ga, &out),
        Command::Limits { config, out } => cmd_limits(&config, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
