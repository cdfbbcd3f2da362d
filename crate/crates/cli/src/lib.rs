//! `treehue` command line: generate, evaluate, render, compare, serve.

pub mod config_file;
pub mod error;

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use treehue::error::{MetricsError, PaletteError, RenderError};
use treehue::hierarchy::{parse_nested_json, parse_path_csv, DistanceVariant};
use treehue::metrics::{self, default_background_l, MetricReport, ReportOptions, Scope};
use treehue::render::{self, Layout, RenderSpec};
use treehue::treecolors::Permutation;
use treehue::{assign_colors, Hierarchy, PaletteAssignment, PaletteConfig, Preset};

pub use config_file::ConfigFile;
pub use error::CliError;

pub const SEED_ENV: &str = "TREEHUE_SEED";

#[derive(Debug, Parser)]
#[command(name = "treehue", version, about = "Hierarchical color palettes for tree visualizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign colors to a hierarchy and write the palette JSON.
    Generate(GenerateArgs),
    /// Score a palette against its hierarchy.
    Evaluate(EvaluateArgs),
    /// Draw a palette as SVG.
    Render(RenderArgs),
    /// Generate and evaluate several configs, one CSV row per score.
    Compare(CompareArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Print the preset table as JSON.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Distance {
    Max,
    Sum,
}

impl From<Distance> for DistanceVariant {
    fn from(d: Distance) -> Self {
        match d {
            Distance::Max => DistanceVariant::Max,
            Distance::Sum => DistanceVariant::Sum,
        }
    }
}

#[derive(Debug, Args)]
pub struct HierarchyInput {
    /// Hierarchy file: nested JSON or one slash-separated path per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub input: HierarchyInput,
    /// JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Preset as theme,size,focus, e.g. light,larger,bottom_up.
    #[arg(long)]
    pub preset: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub palette: PathBuf,
    #[arg(long)]
    pub hierarchy: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    /// Background luminance; 100 for light palettes and 0 for dark ones by default.
    #[arg(long)]
    pub background: Option<f64>,
    /// Comma-separated scopes: all, leaves, level:N, within_siblings, between_subtrees.
    #[arg(long)]
    pub scopes: Option<String>,
    #[arg(long, value_enum, default_value = "max")]
    pub distance: Distance,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub palette: PathBuf,
    #[arg(long)]
    pub hierarchy: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    #[arg(long, default_value = "sunburst")]
    pub layout: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    pub size: u32,
    #[arg(long, default_value = "#ffffff")]
    pub background: String,
    #[arg(long)]
    pub labels: bool,
    #[arg(long)]
    pub show_gaps: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: HierarchyInput,
    /// Directory of JSON config files, compared in file-name order.
    #[arg(long, conflicts_with = "presets")]
    pub configs: Option<PathBuf>,
    /// Compare the eight presets (the default without --configs).
    #[arg(long)]
    pub presets: bool,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Background luminance for every config; otherwise per config.
    #[arg(long)]
    pub background: Option<f64>,
    #[arg(long)]
    pub scopes: Option<String>,
    #[arg(long, value_enum, default_value = "max")]
    pub distance: Distance,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Disable the permissive CORS headers.
    #[arg(long)]
    pub no_cors: bool,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Evaluate(a) => evaluate(&a),
        Command::Render(a) => render_cmd(&a),
        Command::Compare(a) => compare(&a),
        Command::Serve(a) => serve(&a),
        Command::Presets => {
            let json = serde_json::to_string_pretty(&treehue_service::presets()).context("serializing presets")?;
            emit(None, format!("{json}\n").as_bytes())
        }
    }
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {what} {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(bytes).context("writing stdout")?,
    }
    Ok(())
}

pub fn load_hierarchy(path: &Path, format: Option<InputFormat>) -> Result<Hierarchy, CliError> {
    let text = read(path, "hierarchy")?;
    let format = format.unwrap_or_else(|| {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv" | "txt") => InputFormat::Csv,
            _ => InputFormat::Json,
        }
    });
    let parsed = match format {
        InputFormat::Json => parse_nested_json(&text),
        InputFormat::Csv => parse_path_csv(&text),
    };
    parsed.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_palette(path: &Path) -> Result<PaletteAssignment, CliError> {
    PaletteAssignment::from_json(&read(path, "palette")?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_config_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    ConfigFile::parse(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn parse_preset(label: &str) -> Result<Preset, CliError> {
    label.parse().map_err(|e: treehue::ConfigError| CliError::Config(e.to_string()))
}

/// Replaces the seed of a seeded permutation with `TREEHUE_SEED` when set.
pub fn apply_seed_override(cfg: &mut PaletteConfig, env: Option<&str>) -> Result<(), CliError> {
    let Some(raw) = env else { return Ok(()) };
    let seed: u64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{SEED_ENV}={raw:?} is not an unsigned integer")))?;
    if let Permutation::Seeded(s) = &mut cfg.permute {
        *s = seed;
    }
    Ok(())
}

fn seed_env() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}

fn palette_error(e: PaletteError) -> CliError {
    match e {
        PaletteError::Hierarchy(h) => CliError::Parse(h.to_string()),
        PaletteError::Config(c) => CliError::Config(c.to_string()),
    }
}

fn metrics_error(e: MetricsError) -> CliError {
    match e {
        MetricsError::Coverage(m) => CliError::Coverage(m),
        other => CliError::Config(other.to_string()),
    }
}

fn parse_scopes(list: Option<&str>) -> Result<Option<Vec<Scope>>, CliError> {
    list.map(|s| Scope::parse_list(s).map_err(|e| CliError::Config(e.to_string())))
        .transpose()
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let file = match (&args.config, &args.preset) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --config or --preset, not both".into())),
        (None, None) => return Err(CliError::Config("one of --config or --preset is required".into())),
        (Some(path), None) => load_config_file(path)?,
        (None, Some(label)) => ConfigFile {
            palette: parse_preset(label)?.config(),
            ..ConfigFile::default()
        },
    };
    let mut cfg = file.palette;
    apply_seed_override(&mut cfg, seed_env().as_deref())?;
    let input = args
        .input
        .input
        .clone()
        .or(file.input)
        .ok_or_else(|| CliError::Parse("no input hierarchy given".into()))?;
    let h = load_hierarchy(&input, args.input.format)?;
    let palette = assign_colors(&h, &cfg).map_err(palette_error)?;
    let out = args.output.clone().or(file.output);
    emit(out.as_deref(), format!("{}\n", palette.to_json()).as_bytes())
}

fn report_for(
    h: &Hierarchy,
    p: &PaletteAssignment,
    background: Option<f64>,
    scopes: Option<Vec<Scope>>,
    distance: DistanceVariant,
) -> Result<MetricReport, CliError> {
    let opts = ReportOptions {
        background_l: background.unwrap_or_else(|| default_background_l(&p.config)),
        scopes: scopes.unwrap_or_else(Scope::defaults),
        distance_variant: distance,
    };
    metrics::evaluate(h, p, &opts).map_err(metrics_error)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let scopes = parse_scopes(args.scopes.as_deref())?;
    let palette = load_palette(&args.palette)?;
    let h = load_hierarchy(&args.hierarchy, args.format)?;
    let report = report_for(&h, &palette, args.background, scopes, args.distance.into())?;
    let json = serde_json::to_string_pretty(&report).context("serializing report")?;
    emit(None, format!("{json}\n").as_bytes())
}

fn render_error(e: RenderError) -> CliError {
    match e {
        RenderError::Mismatch(m) => CliError::Coverage(m),
        other => CliError::Config(other.to_string()),
    }
}

pub fn render_cmd(args: &RenderArgs) -> Result<(), CliError> {
    let layout: Layout = args.layout.parse().map_err(render_error)?;
    let spec = RenderSpec {
        layout,
        size: args.size,
        background: args.background.clone(),
        label: args.labels,
        show_gaps: args.show_gaps,
    };
    spec.validate().map_err(render_error)?;
    let palette = load_palette(&args.palette)?;
    let h = load_hierarchy(&args.hierarchy, args.format)?;
    let svg = render::render(&h, &palette, &spec).map_err(render_error)?;
    emit(args.out.as_deref(), svg.as_bytes())
}

struct CompareEntry {
    label: String,
    file: ConfigFile,
}

fn compare_entries(args: &CompareArgs) -> Result<Vec<CompareEntry>, CliError> {
    let Some(dir) = &args.configs else {
        return Ok(Preset::all()
            .into_iter()
            .map(|p| CompareEntry {
                label: p.label(),
                file: ConfigFile {
                    palette: p.config(),
                    ..ConfigFile::default()
                },
            })
            .collect());
    };
    let listing = fs::read_dir(dir).map_err(|e| CliError::Config(format!("cannot list {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Config(format!("no .json configs in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            Ok(CompareEntry {
                label: p.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
                file: load_config_file(p)?,
            })
        })
        .collect()
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let scopes = parse_scopes(args.scopes.as_deref())?;
    let entries = compare_entries(args)?;
    let input = args
        .input
        .input
        .clone()
        .or_else(|| entries.iter().find_map(|e| e.file.input.clone()))
        .ok_or_else(|| CliError::Parse("no input hierarchy given".into()))?;
    let h = load_hierarchy(&input, args.input.format)?;
    let seed = seed_env();

    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["config", "metric", "scope", "value"])
        .context("writing csv")?;
    for entry in entries {
        let mut cfg = entry.file.palette;
        apply_seed_override(&mut cfg, seed.as_deref())?;
        let palette = assign_colors(&h, &cfg).map_err(palette_error)?;
        let report = report_for(
            &h,
            &palette,
            args.background.or(entry.file.background_l),
            scopes.clone().or(entry.file.scopes),
            entry.file.distance_variant.unwrap_or(args.distance.into()),
        )?;
        for (metric, scope, value) in report.rows() {
            let value = value.map(|v| v.to_string()).unwrap_or_default();
            out.write_record([entry.label.as_str(), &metric, &scope, &value])
                .context("writing csv")?;
        }
    }
    let bytes = out.into_inner().map_err(|e| anyhow::anyhow!("flushing csv: {e}"))?;
    emit(args.out.as_deref(), &bytes)
}

pub fn serve(args: &ServeArgs) -> Result<(), CliError> {
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .map_err(|e| CliError::Config(format!("bad address {}:{}: {e}", args.host, args.port)))?;
    let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
    let opts = treehue_service::ServiceOptions { cors: !args.no_cors };
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::bind(addr)
                .await
                .with_context(|| format!("cannot bind {addr}"))?;
            eprintln!("listening on http://{addr}");
            treehue_service::serve_on(listener, opts).await.context("serving")
        })
        .map_err(CliError::Other)
}
