//! `resonet`: synthesize, sweep, extract, optimize and inspect coupled-resonator
//! filters from the command line.
//!
//! Exit codes: 0 ok, 2 parse, 3 invalid spec or arguments, 4 IO,
//! 5 extraction, 6 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use resonet::extraction::{extract_k, extract_qe, find_peaks, peak_pair};
use resonet::io::config::{FilterConfig, OptimizeConfig};
use resonet::io::design::{DesignFile, Provenance};
use resonet::io::{csv, touchstone, write_atomic};
use resonet::optimizer::{optimize_with, perturb_couplings, OptimizationProblem};
use resonet::polynomials::extract_polynomials;
use resonet::response::{analyze_response, sweep};
use resonet::synthesis::{report, synthesize};
use resonet::waveguide::{band_preset, cutoff_frequency, guided_wavelength, preset_names};
use resonet::{reference, CouplingTargets, Error, FrequencyResponse};

const SEED_VAR: &str = "RESONET_SEED";

#[derive(Parser)]
#[command(name = "resonet", version, about = "Coupled-resonator bandpass filter toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a filter config into a design file and print a report.
    Synthesize {
        /// Config file, or the name of a bundled design (xband-4pole, ...).
        #[arg(long)]
        config: String,
        /// Design file to write [default: <config name>.design.toml].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a design's S-parameters and write Touchstone or CSV.
    Sweep {
        #[arg(long)]
        design: PathBuf,
        /// Start frequency in GHz [default: f0 - 2 bandwidths].
        #[arg(long)]
        f_start: Option<f64>,
        /// Stop frequency in GHz [default: f0 + 2 bandwidths].
        #[arg(long)]
        f_stop: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Output format [default: csv for *.csv outputs, else touchstone].
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a coupling coefficient or external Q from a sampled response.
    Extract {
        /// Touchstone or CSV file.
        #[arg(long)]
        response: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Resonant frequency for `qe` mode, GHz [default: |S21| peak].
        #[arg(long)]
        f0_ghz: Option<f64>,
    },
    /// Refine a design's coupling matrix and write the updated design.
    Optimize {
        #[arg(long)]
        design: PathBuf,
        /// Optimizer config (TOML) [default: built-in settings].
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rectangular waveguide TE10 cutoff and guided wavelength.
    Waveguide {
        /// Preset name (WG16, WR90, WR3, ...).
        name: Option<String>,
        /// Broad-wall width in mm instead of a preset.
        #[arg(long, conflicts_with = "name")]
        a_mm: Option<f64>,
        /// Frequency in GHz at which to report the guided wavelength.
        #[arg(long)]
        at_ghz: Option<f64>,
    },
    /// Passband metrics of a sampled response.
    Analyze {
        #[arg(long)]
        response: PathBuf,
        /// |S11| level defining the passband, dB.
        #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
        level_db: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Touchstone,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    K,
    Qe,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Parse { .. } => 2,
            Error::InvalidSpecification(_)
            | Error::UnknownPreset { .. }
            | Error::BelowCutoff { .. } => 3,
            Error::Io(_) => 4,
            Error::InsufficientPeaks { .. }
            | Error::InsufficientSpan(_)
            | Error::NoPassband { .. } => 5,
            Error::NumericalFailure(_) | Error::SingularFrequency { .. } => 6,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

fn io_failure(path: &Path, err: impl std::fmt::Display) -> Failure {
    Failure {
        code: 4,
        message: format!("{}: {err}", path.display()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Synthesize { config, out } => cmd_synthesize(&config, out),
        Command::Sweep {
            design,
            f_start,
            f_stop,
            points,
            format,
            out,
        } => cmd_sweep(&design, f_start, f_stop, points, format, out),
        Command::Extract {
            response,
            mode,
            f0_ghz,
        } => cmd_extract(&response, mode, f0_ghz),
        Command::Optimize {
            design,
            config,
            out,
        } => cmd_optimize(&design, config.as_deref(), &out),
        Command::Waveguide { name, a_mm, at_ghz } => cmd_waveguide(name, a_mm, at_ghz),
        Command::Analyze { response, level_db } => cmd_analyze(&response, level_db),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    write_atomic(path, contents.as_bytes()).map_err(|e| io_failure(path, e))
}

fn with_path(path: &Path, err: Error) -> Failure {
    let mut f = Failure::from(err);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn load_design(path: &Path) -> Result<DesignFile, Failure> {
    DesignFile::parse(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_response(path: &Path) -> Result<FrequencyResponse<f64>, Failure> {
    let text = read(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        || text.trim_start().starts_with("freq_hz");
    let parsed = if is_csv {
        csv::parse(&text)
    } else {
        touchstone::parse(&text)
    };
    parsed.map_err(|e| with_path(path, e))
}

fn cmd_synthesize(config: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let path = Path::new(config);
    let (text, stem) = if path.exists() {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "design".into());
        (read(path)?, stem)
    } else if let Some(text) = reference::bundled_config_text(config) {
        (text.to_string(), config.to_string())
    } else {
        return Err(io_failure(
            path,
            format!(
                "no such file, and not a bundled design ({})",
                reference::bundled_names().join(", ")
            ),
        ));
    };
    let cfg = FilterConfig::parse(&text).map_err(|e| with_path(path, e))?;
    let spec = cfg.to_spec()?;
    let design = synthesize(&spec)?.into_design();
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{stem}.design.toml")));
    write(&out, &design.to_toml())?;
    print!("{}", report(&design));
    println!("\nDesign written to {}", out.display());
    Ok(())
}

fn cmd_sweep(
    design: &Path,
    f_start: Option<f64>,
    f_stop: Option<f64>,
    points: usize,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if points < 2 {
        return Err(usage(format!("--points must be at least 2, got {points}")));
    }
    let d = load_design(design)?;
    let spec = d.spec;
    let start = f_start.map_or(spec.f0 - 2.0 * spec.bandwidth, |g| g * 1e9);
    let stop = f_stop.map_or(spec.f0 + 2.0 * spec.bandwidth, |g| g * 1e9);
    let resp = sweep(&d.matrix, &spec, start, stop, points)?;
    let format = format.unwrap_or_else(|| {
        let csv_out = out
            .as_deref()
            .and_then(Path::extension)
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if csv_out {
            Format::Csv
        } else {
            Format::Touchstone
        }
    });
    let text = match format {
        Format::Touchstone => touchstone::to_string(&resp),
        Format::Csv => csv::to_string(&resp),
    };
    match out {
        Some(path) => {
            write(&path, &text)?;
            eprintln!("{points} points written to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_extract(response: &Path, mode: Mode, f0_ghz: Option<f64>) -> Result<(), Failure> {
    let resp = load_response(response)?;
    match mode {
        Mode::K => {
            let pair = peak_pair(&resp)?;
            let k = extract_k(&pair);
            println!("f_p1 = {:.9} GHz", pair.f_p1() / 1e9);
            println!("f_p2 = {:.9} GHz", pair.f_p2() / 1e9);
            println!("k = {k:.6}");
        }
        Mode::Qe => {
            let f0 = match f0_ghz {
                Some(g) if g > 0.0 => g * 1e9,
                Some(g) => return Err(usage(format!("--f0-ghz must be positive, got {g}"))),
                None => strongest_peak(&resp)?,
            };
            let qe = extract_qe(&resp, f0)?;
            println!("f0 = {:.9} GHz", f0 / 1e9);
            println!("Q_e = {qe:.4}");
        }
    }
    Ok(())
}

fn strongest_peak(resp: &FrequencyResponse<f64>) -> Result<f64, Failure> {
    let peaks = find_peaks(resp)?;
    let level = |f: f64| {
        let i = resp.grid.partition_point(|&g| g < f).min(resp.len() - 1);
        resp.s21[i].norm()
    };
    peaks
        .into_iter()
        .max_by(|a, b| level(*a).total_cmp(&level(*b)))
        .ok_or_else(|| {
            Error::InsufficientPeaks {
                found: 0,
                required: 1,
            }
            .into()
        })
}

fn seed(config: &OptimizeConfig) -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_VAR} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(config.seed.unwrap_or(0)),
    }
}

fn cmd_optimize(design: &Path, config: Option<&Path>, out: &Path) -> Result<(), Failure> {
    let d = load_design(design)?;
    let cfg = match config {
        Some(p) => OptimizeConfig::parse(&read(p)?).map_err(|e| with_path(p, e))?,
        None => OptimizeConfig::default(),
    };
    let options = cfg.options()?;
    let n = d.spec.order;
    let mut start = d.matrix.clone();
    if let Some(fraction) = cfg.perturb {
        if !(0.0..1.0).contains(&fraction) {
            return Err(usage(format!("perturb must lie in [0, 1), got {fraction}")));
        }
        let seed = seed(&cfg)?;
        start = perturb_couplings(&start, fraction, seed);
        println!("perturbed couplings by ±{fraction} (seed {seed})");
    }
    let problem = OptimizationProblem::new(start, d.spec)?
        .with_free_parameters(cfg.free_parameters(n))?;
    let mut stdout = std::io::stdout().lock();
    let result = optimize_with(&problem, &options, |rec| {
        let _ = writeln!(
            stdout,
            "iter {:>5}  cost {:.6e}  step {:.3e}",
            rec.iteration, rec.cost, rec.max_step
        );
    })?;
    drop(stdout);
    if !result.final_cost.is_finite() {
        return Err(Error::NumericalFailure("final cost is not finite".into()).into());
    }

    let fbw = d.spec.fbw();
    let cm = result.final_matrix;
    let polynomials = extract_polynomials(&cm)?;
    let updated = DesignFile {
        targets: CouplingTargets {
            q_ea: cm.qe1() / fbw,
            q_eb: cm.qen() / fbw,
            k: cm.mainline().iter().map(|m| m * fbw).collect(),
        },
        matrix: cm,
        polynomials: Some(polynomials),
        provenance: Provenance::now(),
        ..d
    };
    write(out, &updated.to_toml())?;

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "{} after {} iterations: cost {:.6e} -> {:.6e}",
        if result.converged { "converged" } else { "stopped" },
        result.iterations,
        result.initial_cost,
        result.final_cost
    );
    print!("{summary}");
    print!("{}", report(&updated));
    println!("\nDesign written to {}", out.display());
    Ok(())
}

fn cmd_waveguide(name: Option<String>, a_mm: Option<f64>, at_ghz: Option<f64>) -> Result<(), Failure> {
    let a = match (&name, a_mm) {
        (Some(name), _) => {
            let wg = band_preset::<f64>(name)?;
            println!("{}: a = {} mm, b = {} mm", wg.name, wg.a * 1e3, wg.b * 1e3);
            println!(
                "recommended band {:.3} - {:.3} GHz",
                wg.band_start / 1e9,
                wg.band_stop / 1e9
            );
            wg.a
        }
        (None, Some(a_mm)) => {
            println!("a = {a_mm} mm");
            a_mm * 1e-3
        }
        (None, None) => {
            return Err(usage(format!(
                "give a preset name or --a-mm (presets: {})",
                preset_names().join(", ")
            )))
        }
    };
    let fc = cutoff_frequency(a)?;
    println!("TE10 cutoff = {:.4} GHz", fc / 1e9);
    if let Some(g) = at_ghz {
        let lg = guided_wavelength(a, g * 1e9)?;
        println!("guided wavelength at {g} GHz = {:.4} mm", lg * 1e3);
    }
    Ok(())
}

fn cmd_analyze(response: &Path, level_db: f64) -> Result<(), Failure> {
    let resp = load_response(response)?;
    let m = analyze_response(&resp, level_db)?;
    println!("center frequency = {:.6} GHz", m.f_center / 1e9);
    println!("bandwidth at {level_db} dB = {:.3} MHz", m.bandwidth_at_level / 1e6);
    println!("max in-band |S11| = {:.3} dB", m.max_inband_s11_db);
    println!("reflection zeros = {}", m.reflection_zero_count);
    Ok(())
}
