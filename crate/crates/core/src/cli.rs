//! `gspcd` command line. Each subcommand maps to one processing stage;
//! `pipeline` chains them.
//!
//! Exit status: 0 on success, 2 for usage errors, 1 for I/O or data errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cda::{compute_threshold, detect_on_difference, difference};
use crate::error::Error;
use crate::eval::{self, Case, CaseLabel, CaseOutcome, DEFAULT_C_VALUES, DEFAULT_MATCH_RADIUS_PX};
use crate::gsp::{predict_scene, EstimatorOptions, EstimatorRegistry, DEFAULT_TRIM_ALPHA};
use crate::image::{CdaParams, Connectivity, Image, ImageStack, Target};
use crate::io;
use crate::stats::{self, DEFAULT_EXCLUSION_HALF_WINDOW};
use crate::synth::{self, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "gspcd", version, about = "Ground scene prediction and change detection for SAR image stacks")]
pub struct Cli {
    /// Worker threads for image-sized stages (0 = one per core). Never changes results.
    #[arg(long, global = true, env = "GSPCD_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict the ground scene from a stack of rasters.
    Gsp(GspArgs),
    /// Descriptive statistics and prediction quality measures.
    Stats(StatsArgs),
    /// Detect changes between a surveillance image and a reference.
    Detect(DetectArgs),
    /// Score detection CSVs against ground-truth targets.
    Evaluate(EvaluateArgs),
    /// Sweep the threshold constant and write a ROC table.
    Roc(RocArgs),
    /// Generate a synthetic stack with ground truth.
    Synth(SynthArgs),
    /// Run synth (or ingest), gsp, detect, evaluate and roc end to end.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    /// Estimator name: ar, trimmed, median, mean or intensity.
    #[arg(long = "est", default_value = "median")]
    pub estimator: String,
    /// Trim proportion for `trimmed`, in [0, 0.5).
    #[arg(long, default_value_t = DEFAULT_TRIM_ALPHA)]
    pub alpha: f64,
    /// Remove the sample mean before the AR fit.
    #[arg(long)]
    pub centered: bool,
}

#[derive(Debug, Args)]
pub struct GspArgs {
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Output raster (`.f32`; the `.hdr` sidecar is written next to it).
    #[arg(long)]
    pub out: PathBuf,
    /// Stack rasters (at least two).
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Interest image compared against every predicted image.
    #[arg(long)]
    pub interest: PathBuf,
    /// Targets whose surroundings are excluded from the quality measures.
    #[arg(long)]
    pub targets: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_HALF_WINDOW)]
    pub half_window: usize,
    /// Write the descriptive statistics table here as well as to stdout.
    #[arg(long)]
    pub descriptive_out: Option<PathBuf>,
    /// Write the quality table here as well as to stdout.
    #[arg(long)]
    pub quality_out: Option<PathBuf>,
    /// Predicted images.
    pub predicted: Vec<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct MorphologyArgs {
    /// Opening structuring element side (odd).
    #[arg(long, default_value_t = 3)]
    pub opening: usize,
    /// Dilation structuring element side (odd).
    #[arg(long, default_value_t = 7)]
    pub dilation: usize,
    /// Pixel connectivity for grouping detections: 4 or 8.
    #[arg(long, default_value_t = 8)]
    pub connectivity: u8,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub surveillance: PathBuf,
    /// Threshold constant C in lambda = mean + C * std.
    #[arg(long = "c", default_value_t = 5.0)]
    pub c_constant: f64,
    #[command(flatten)]
    pub morphology: MorphologyArgs,
    /// Detections CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// `DETECTIONS.csv,TARGETS.csv[,MISSION,PASS]`, repeatable.
    #[arg(long = "case")]
    pub cases: Vec<String>,
    /// Match radius in pixels.
    #[arg(long, default_value_t = DEFAULT_MATCH_RADIUS_PX)]
    pub radius: f64,
    /// Imaged area per case in km².
    #[arg(long)]
    pub area_km2: f64,
    /// Per-case table CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    /// Reference (ground scene prediction) raster.
    #[arg(long)]
    pub reference: PathBuf,
    /// `SURVEILLANCE.f32,TARGETS.csv[,MISSION,PASS]`, repeatable.
    #[arg(long = "case")]
    pub cases: Vec<String>,
    /// Threshold constants to sweep.
    #[arg(long = "c", value_delimiter = ',', default_values_t = DEFAULT_C_VALUES.to_vec())]
    pub c_values: Vec<f64>,
    #[command(flatten)]
    pub morphology: MorphologyArgs,
    /// Match radius in pixels.
    #[arg(long, default_value_t = DEFAULT_MATCH_RADIUS_PX)]
    pub radius: f64,
    /// Area per image in km²; defaults to rows * cols * spacing².
    #[arg(long)]
    pub area_km2: Option<f64>,
    /// ROC table CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-case table CSV at `--table-c`.
    #[arg(long)]
    pub cases_out: Option<PathBuf>,
    /// Constant for the per-case table.
    #[arg(long, default_value_t = 5.0)]
    pub table_c: f64,
}

#[derive(Debug, Args, Clone)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    /// RNG seed (20 for the scenario, 1 with --no-targets).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Start from an empty scene instead of the default 25-target scenario.
    #[arg(long)]
    pub no_targets: bool,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub n_images: Option<usize>,
    #[arg(long)]
    pub jitter: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Generate the default synthetic scenario as input.
    #[arg(long, conflicts_with_all = ["stack", "surveillance"])]
    pub synth_default: bool,
    #[arg(long, default_value_t = 20)]
    pub seed: u64,
    /// Stack rasters (instead of --synth-default).
    #[arg(long, num_args = 2..)]
    pub stack: Vec<PathBuf>,
    /// Image of interest for the ingest path.
    #[arg(long, requires = "targets")]
    pub surveillance: Option<PathBuf>,
    #[arg(long)]
    pub targets: Option<PathBuf>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Constant used for the detections CSV and per-case table.
    #[arg(long = "c", default_value_t = 5.0)]
    pub c_constant: f64,
    #[arg(long = "c-values", value_delimiter = ',', default_values_t = DEFAULT_C_VALUES.to_vec())]
    pub c_values: Vec<f64>,
    #[command(flatten)]
    pub morphology: MorphologyArgs,
    /// Match radius in pixels.
    #[arg(long, default_value_t = DEFAULT_MATCH_RADIUS_PX)]
    pub radius: f64,
    /// Defaults to rows * cols * spacing².
    #[arg(long)]
    pub area_km2: Option<f64>,
}

/// CLI failure: usage problems exit 2, everything else exits 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    let outcome = crate::with_threads(threads, move || execute(cli.command));
    match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(CliError::Usage(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Ok(Err(CliError::Run(e))) | Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

fn execute(command: Command) -> CliResult {
    match command {
        Command::Gsp(a) => cmd_gsp(&a),
        Command::Stats(a) => cmd_stats(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Roc(a) => cmd_roc(&a),
        Command::Synth(a) => cmd_synth(&a).map(|_| ()),
        Command::Pipeline(a) => cmd_pipeline(&a),
    }
}

fn build_estimator(args: &EstimatorArgs) -> CliResult<Box<dyn crate::gsp::Estimator>> {
    let options = EstimatorOptions {
        alpha: args.alpha,
        centered: args.centered,
    };
    EstimatorRegistry::default()
        .build(&args.estimator, &options)
        .or_else(|e| usage(e.to_string()))
}

fn cda_params(c_constant: f64, m: &MorphologyArgs) -> CliResult<CdaParams> {
    let connectivity = Connectivity::try_from(m.connectivity).or_else(|e| usage(e.to_string()))?;
    let params = CdaParams {
        c_constant,
        opening_kernel: m.opening,
        dilation_kernel: m.dilation,
        connectivity,
    };
    params.validate().or_else(|e| usage(e.to_string()))?;
    Ok(params)
}

fn check_radius(radius: f64) -> CliResult {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        usage(format!("--radius must be positive, got {radius}"))
    }
}

fn check_area(area: Option<f64>) -> CliResult {
    match area {
        Some(a) if !(a.is_finite() && a > 0.0) => usage(format!("--area-km2 must be positive, got {a}")),
        _ => Ok(()),
    }
}

fn read_stack(paths: &[PathBuf]) -> CliResult<ImageStack> {
    let images = paths.iter().map(|p| io::read_raster_auto(p)).collect::<crate::Result<Vec<_>>>()?;
    Ok(ImageStack::new(images)?)
}

fn describe_row(name: &str, img: &Image) -> String {
    match stats::describe(img) {
        Ok(s) => format!("{name},{:.6},{:.6},{:.6},{:.6}", s.average, s.std_dev, s.skewness, s.kurtosis),
        Err(_) => {
            let mean = img.pixels().iter().map(|&v| f64::from(v)).sum::<f64>() / img.len() as f64;
            format!("{name},{mean:.6},0.000000,nan,nan")
        }
    }
}

const DESCRIBE_HEADER: &str = "image,average,std_dev,skewness,kurtosis";
const QUALITY_HEADER: &str = "image,mse,mape,mdae,pixels_used";

pub fn cmd_gsp(args: &GspArgs) -> CliResult {
    let estimator = build_estimator(&args.estimator)?;
    let stack = read_stack(&args.inputs)?;
    let gsp = predict_scene(&stack, estimator.as_ref())?;
    io::write_raster_auto(&gsp, &args.out)?;
    println!("{DESCRIBE_HEADER}");
    println!("{}", describe_row(estimator.name(), &gsp));
    Ok(())
}

pub fn cmd_stats(args: &StatsArgs) -> CliResult {
    let interest = io::read_raster_auto(&args.interest)?;
    let targets = match &args.targets {
        Some(p) => io::read_targets(p)?,
        None => Vec::new(),
    };
    let excluded = stats::exclusion_mask(&targets, interest.rows(), interest.cols(), args.half_window);
    let mut descriptive = format!("{DESCRIBE_HEADER}\n{}\n", describe_row("interest", &interest));
    let mut quality = format!("{QUALITY_HEADER}\n");
    for path in &args.predicted {
        let img = io::read_raster_auto(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("predicted");
        let _ = writeln!(descriptive, "{}", describe_row(name, &img));
        let q = stats::quality(&interest, &img, &excluded)?;
        let _ = writeln!(quality, "{name},{:.6},{:.6},{:.6},{}", q.mse, q.mape, q.mdae, q.pixels_used);
    }
    print!("{descriptive}");
    if !args.predicted.is_empty() {
        println!();
        print!("{quality}");
    }
    if let Some(p) = &args.descriptive_out {
        io::write_text(p, &descriptive)?;
    }
    if let Some(p) = &args.quality_out {
        io::write_text(p, &quality)?;
    }
    Ok(())
}

pub fn cmd_detect(args: &DetectArgs) -> CliResult {
    let params = cda_params(args.c_constant, &args.morphology)?;
    let reference = io::read_raster_auto(&args.reference)?;
    let surveillance = io::read_raster_auto(&args.surveillance)?;
    let run = crate::cda::detect_run(&surveillance, &reference, &params)?;
    io::write_detections(&run.detections, &args.out)?;
    println!(
        "{} detections (C={}, lambda={:.6})",
        run.detections.len(),
        params.c_constant,
        run.threshold.lambda
    );
    Ok(())
}

/// Splits a `--case` value into its two paths and a label.
fn parse_case(spec: &str, index: usize) -> CliResult<(PathBuf, PathBuf, CaseLabel)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.into(), b.into(), CaseLabel::new("1", (index + 1).to_string()))),
        [a, b, m, p] => Ok((a.into(), b.into(), CaseLabel::new(*m, *p))),
        _ => usage(format!("--case expects `A,B` or `A,B,MISSION,PASS`, got `{spec}`")),
    }
}

fn total_row(outcomes: &[CaseOutcome]) -> String {
    let known: usize = outcomes.iter().map(|o| o.known).sum();
    let detected: usize = outcomes.iter().map(|o| o.detected).sum();
    let fa: usize = outcomes.iter().map(|o| o.false_alarms).sum();
    let pd = if known == 0 { 0.0 } else { detected as f64 / known as f64 };
    format!("total,,{known},{detected},{pd:.6},{fa}\n")
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult {
    if args.cases.is_empty() {
        return usage("at least one --case is required");
    }
    check_radius(args.radius)?;
    check_area(Some(args.area_km2))?;
    let mut outcomes = Vec::new();
    let (mut matched, mut known, mut false_alarms) = (0, 0, 0);
    for (i, spec) in args.cases.iter().enumerate() {
        let (det_path, tgt_path, label) = parse_case(spec, i)?;
        let detections = io::read_detections(&det_path)?;
        let targets = io::read_targets(&tgt_path)?;
        let m = eval::match_detections(&detections, &targets, args.radius)?;
        matched += m.matched();
        known += targets.len();
        false_alarms += m.false_alarms.len();
        outcomes.push(CaseOutcome {
            label,
            c_constant: f64::NAN,
            lambda: f64::NAN,
            known: targets.len(),
            detected: m.matched(),
            false_alarms: m.false_alarms.len(),
            detections,
        });
    }
    let mut table = eval::render_case_table(&outcomes);
    table.push_str(&total_row(&outcomes));
    print!("{table}");
    if known > 0 {
        let area = args.area_km2 * args.cases.len() as f64;
        println!(
            "Pd={:.6} FAR={:.6}/km2 ({matched}/{known} detected, {false_alarms} false alarms over {area} km2)",
            matched as f64 / known as f64,
            false_alarms as f64 / area
        );
    }
    if let Some(p) = &args.out {
        io::write_text(p, &table)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep_and_write(
    cases: &[Case<'_>],
    c_values: &[f64],
    params: &CdaParams,
    radius: f64,
    area_km2: f64,
    roc_out: &Path,
    table_c: f64,
    cases_out: Option<&Path>,
) -> CliResult<Vec<Vec<CaseOutcome>>> {
    let outcomes = eval::evaluate_cases(cases, c_values, params, radius)?;
    let table = eval::roc_table(&outcomes, area_km2)?;
    io::write_roc(&table, roc_out)?;
    for r in &table.rows {
        println!(
            "C={} Pd={:.6} FAR={:.6}/km2 ({} of {} detected, {} false alarms)",
            r.c_constant, r.pd, r.far, r.detected, r.known, r.false_alarms
        );
    }
    if let Some(p) = cases_out {
        let ci = c_values.iter().position(|&c| c == table_c).unwrap_or(0);
        let mut text = eval::render_case_table(&outcomes[ci]);
        text.push_str(&total_row(&outcomes[ci]));
        io::write_text(p, &text)?;
    }
    Ok(outcomes)
}

fn check_c_values(c_values: &[f64]) -> CliResult {
    if c_values.is_empty() {
        return usage("no threshold constants given");
    }
    if let Some(c) = c_values.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return usage(format!("threshold constants must be positive, got {c}"));
    }
    Ok(())
}

pub fn cmd_roc(args: &RocArgs) -> CliResult {
    if args.cases.is_empty() {
        return usage("at least one --case is required");
    }
    check_c_values(&args.c_values)?;
    check_radius(args.radius)?;
    check_area(args.area_km2)?;
    let params = cda_params(args.c_values[0], &args.morphology)?;
    let reference = io::read_raster_auto(&args.reference)?;
    let mut loaded: Vec<(Image, Vec<Target>, CaseLabel)> = Vec::new();
    for (i, spec) in args.cases.iter().enumerate() {
        let (img_path, tgt_path, label) = parse_case(spec, i)?;
        loaded.push((io::read_raster_auto(&img_path)?, io::read_targets(&tgt_path)?, label));
    }
    let cases: Vec<Case<'_>> = loaded
        .iter()
        .map(|(img, targets, label)| Case {
            label,
            surveillance: img,
            reference: &reference,
            targets,
        })
        .collect();
    let area = args.area_km2.unwrap_or_else(|| reference.area_km2());
    sweep_and_write(
        &cases,
        &args.c_values,
        &params,
        args.radius,
        area,
        &args.out,
        args.table_c,
        args.cases_out.as_deref(),
    )?;
    Ok(())
}

fn synth_config(args: &SynthArgs) -> SynthConfig {
    let mut cfg = if args.no_targets {
        SynthConfig::default()
    } else {
        SynthConfig::default_scenario()
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.rows {
        cfg.rows = r;
    }
    if let Some(c) = args.cols {
        cfg.cols = c;
    }
    if let Some(n) = args.n_images {
        cfg.n_images = n;
    }
    if let Some(j) = args.jitter {
        cfg.temporal_jitter_std = j;
    }
    cfg
}

/// Paths written by the synth stage.
struct SynthOutput {
    images: Vec<PathBuf>,
    targets: Vec<PathBuf>,
}

fn create_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError::Run(Error::Io { path: dir.to_path_buf(), source: e }))
}

fn cmd_synth(args: &SynthArgs) -> CliResult<SynthOutput> {
    let cfg = synth_config(args);
    let scene = synth::generate(&cfg).or_else(|e| usage(e.to_string()))?;
    create_dir(&args.out_dir)?;
    let mut out = SynthOutput {
        images: Vec::new(),
        targets: Vec::new(),
    };
    for (i, (img, targets)) in scene.stack.images().iter().zip(&scene.targets).enumerate() {
        let img_path = args.out_dir.join(format!("image_{i:02}.f32"));
        let tgt_path = args.out_dir.join(format!("targets_{i:02}.csv"));
        io::write_raster_auto(img, &img_path)?;
        io::write_targets(targets, &tgt_path)?;
        out.images.push(img_path);
        out.targets.push(tgt_path);
    }
    io::write_raster_auto(&scene.background, &args.out_dir.join("background.f32"))?;
    println!(
        "wrote {} images ({}x{}, seed {}) to {}",
        cfg.n_images,
        cfg.rows,
        cfg.cols,
        cfg.seed,
        args.out_dir.display()
    );
    Ok(out)
}

pub fn cmd_pipeline(args: &PipelineArgs) -> CliResult {
    check_c_values(&args.c_values)?;
    check_radius(args.radius)?;
    check_area(args.area_km2)?;
    let params = cda_params(args.c_constant, &args.morphology)?;
    let estimator = build_estimator(&args.estimator)?;

    let (stack_paths, surveillance_path, targets_path) = if args.synth_default {
        let synth_args = SynthArgs {
            out_dir: args.out_dir.join("synth"),
            seed: Some(args.seed),
            no_targets: false,
            rows: None,
            cols: None,
            n_images: None,
            jitter: None,
        };
        let written = cmd_synth(&synth_args)?;
        let surveillance = written.images[0].clone();
        let targets = written.targets[0].clone();
        (written.images, surveillance, targets)
    } else {
        match (&args.surveillance, &args.targets) {
            (Some(s), Some(t)) if args.stack.len() >= 2 => (args.stack.clone(), s.clone(), t.clone()),
            _ => return usage("give --synth-default or --stack (>= 2 rasters) with --surveillance and --targets"),
        }
    };
    create_dir(&args.out_dir)?;

    let stack = read_stack(&stack_paths)?;
    let reference = predict_scene(&stack, estimator.as_ref())?;
    io::write_raster_auto(&reference, &args.out_dir.join("gsp.f32"))?;

    let surveillance = io::read_raster_auto(&surveillance_path)?;
    let targets = io::read_targets(&targets_path)?;

    let excluded = stats::exclusion_mask(&targets, surveillance.rows(), surveillance.cols(), DEFAULT_EXCLUSION_HALF_WINDOW);
    let q = stats::quality(&surveillance, &reference, &excluded)?;
    let stats_text = format!(
        "{DESCRIBE_HEADER}\n{}\n{}\n\n{QUALITY_HEADER}\n{},{:.6},{:.6},{:.6},{}\n",
        describe_row("interest", &surveillance),
        describe_row(estimator.name(), &reference),
        estimator.name(),
        q.mse,
        q.mape,
        q.mdae,
        q.pixels_used
    );
    io::write_text(&args.out_dir.join("stats.csv"), &stats_text)?;

    let diff = difference(&surveillance, &reference)?;
    let spec = compute_threshold(&diff, params.c_constant);
    let run = detect_on_difference(&diff, &spec, &params)?;
    io::write_detections(&run.detections, &args.out_dir.join("detections.csv"))?;

    let label = CaseLabel::new("1", "1");
    let case = Case {
        label: &label,
        surveillance: &surveillance,
        reference: &reference,
        targets: &targets,
    };
    let mut c_values = args.c_values.clone();
    if !c_values.contains(&args.c_constant) {
        c_values.push(args.c_constant);
    }
    let area = args.area_km2.unwrap_or_else(|| surveillance.area_km2());
    let outcomes = eval::evaluate_cases(&[case], &c_values, &params, args.radius)?;
    let roc = eval::roc_table(&outcomes[..args.c_values.len()], area)?;
    io::write_roc(&roc, &args.out_dir.join("roc.csv"))?;
    let at_c = &outcomes[c_values.iter().position(|&c| c == args.c_constant).unwrap_or(0)];
    let mut table = eval::render_case_table(at_c);
    table.push_str(&total_row(at_c));
    io::write_text(&args.out_dir.join("cases.csv"), &table)?;

    println!("{} detections at C={}", run.detections.len(), params.c_constant);
    for r in &roc.rows {
        println!(
            "C={} Pd={:.6} FAR={:.6}/km2 ({} of {} detected, {} false alarms)",
            r.c_constant, r.pd, r.far, r.detected, r.known, r.false_alarms
        );
    }
    println!("outputs in {}", args.out_dir.display());
    Ok(())
}

