//! `polyassembly` command line driver.

mod config;

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyassembly::assembly::{simulate, StepRule, StructureFile, DEFAULT_STRIDE};
use polyassembly::behaviour::{
    build_catalogue, catalogue_jobs, classify_pair, classify_single, csv_row, label_counts, CatalogueRecord,
    PairParams, SingleParams, CSV_HEADER,
};
use polyassembly::metrics::{
    assembly_dimension, box_dimension, density_curve, f_grid, refine_fc, scan_slopes, slope_at, DensityParams,
    FcParams, FcResult, FractalFit, SlopeEstimate, SlopeParams, MIN_EXTENT,
};
use polyassembly::predictor::{predict, Weighting};
use polyassembly::render::{render_svg, RenderSpec};
use polyassembly::rng::{derive_seed, run_rng, seed_for_f};
use polyassembly::sweep::{default_workers, par_map, with_workers, Progress, WORKERS_ENV};
use polyassembly::tiles::{
    canonical_pair, enumerate_pairs, enumerate_singles, parse_tiles, Interaction, Tile, TileSystem,
};

use config::RunConfig;

type CliResult<T = ()> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Parser, Debug)]
#[command(name = "polyassembly", version, about = "Non-deterministic self-assembly of one- and two-tile sets")]
struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 7)]
    master_seed: u64,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Write the run configuration as JSON to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the distinct single tiles or two-tile sets.
    Enumerate(EnumerateArgs),
    /// Grow one structure and report its final state.
    Run(RunArgs),
    /// Mean density across a concentration grid.
    Density(DensityArgs),
    /// Critical concentration, or the slope at a single `--f`.
    Fc(FcArgs),
    /// Box-counting dimension of grown or saved structures.
    Fractal(FractalArgs),
    /// Analytical mean change in free sides and its root.
    Predict(PredictArgs),
    /// Behaviour class of a single tile or a two-tile set.
    Classify(ClassifyArgs),
    /// Classify every two-tile set; resumable.
    Catalogue(CatalogueArgs),
    /// Render a structure file as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Single,
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Conditioned,
    Attempt,
}

impl From<RuleArg> for StepRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Conditioned => StepRule::Conditioned,
            RuleArg::Attempt => StepRule::Attempt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    Unnormalized,
    Conditioned,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// One or two tiles, faces N,E,S,W, joined by `;`, e.g. "1,2,0,0;1,2,1,0".
    #[arg(long)]
    tiles: String,
    /// Interaction: sym, asym, or matrix:<path to JSON binding list>.
    #[arg(long, default_value = "sym")]
    mode: String,
}

impl SystemArgs {
    fn parse(&self) -> CliResult<(Vec<Tile>, Interaction)> {
        Ok((parse_tiles(&self.tiles)?, Interaction::parse(&self.mode)?))
    }

    fn system(&self, f: f64) -> CliResult<TileSystem> {
        let (tiles, mode) = self.parse()?;
        Ok(TileSystem::new(tiles, mode, f)?)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Pair)]
    kind: Kind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Probability of drawing the second tile (ignored for a single tile).
    #[arg(long, default_value_t = 0.5)]
    f: f64,
    /// Maximum number of attachments.
    #[arg(long, default_value_t = 10_000)]
    nmax: u64,
    /// Attachments between trace samples.
    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: u64,
    /// Run index; each index is an independent stream of the master seed.
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(long, value_enum, default_value_t = RuleArg::Conditioned)]
    rule: RuleArg,
    /// Structure file (JSON) output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Free-side trace as CSV (`N,a`).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// SVG render output.
    #[arg(long)]
    render: Option<PathBuf>,
    /// Overlay the density measurement circle on the render.
    #[arg(long)]
    circle: bool,
}

#[derive(Args, Debug)]
struct GridArg {
    /// Concentration grid as lo:hi:step.
    #[arg(long, default_value = "0:1:0.05", value_parser = parse_grid)]
    f_grid: (f64, f64, f64),
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    grid: GridArg,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 10_000)]
    nmax: u64,
    #[arg(long, value_enum, default_value_t = RuleArg::Conditioned)]
    rule: RuleArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FcArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Report only the slope at this concentration.
    #[arg(long)]
    f: Option<f64>,
    /// Bisection tolerance.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Coarse scan spacing.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    /// Attachments per run; the slope is fitted over the final window.
    #[arg(long, default_value_t = 50_000)]
    neval: u64,
    /// Fraction of `--neval` used for the slope fit.
    #[arg(long, default_value_t = 0.2)]
    window: f64,
    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: u64,
    #[arg(long, value_enum, default_value_t = RuleArg::Conditioned)]
    rule: RuleArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FractalArgs {
    /// Structure file to measure instead of growing new runs.
    #[arg(long, conflicts_with_all = ["tiles", "f"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "f")]
    tiles: Option<String>,
    #[arg(long, default_value = "sym")]
    mode: String,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long, default_value_t = 50_000)]
    nmax: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Structures with a smaller bounding extent are skipped.
    #[arg(long, default_value_t = MIN_EXTENT)]
    min_extent: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, value_enum, default_value_t = WeightingArg::Unnormalized)]
    weighting: WeightingArg,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Runs per grid point (default 100 for a single tile, 50 for a pair).
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    nmax: u64,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Runs grown at f_c for the fractal dimension (pairs only).
    #[arg(long, default_value_t = 0)]
    fractal_runs: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CatalogueArgs {
    /// Interaction modes to cover, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "sym,asym")]
    modes: Vec<String>,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 10_000)]
    nmax: u64,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Only the first `limit` jobs.
    #[arg(long)]
    limit: Option<usize>,
    /// Discard any partial results from an earlier run.
    #[arg(long)]
    fresh: bool,
    /// Final output (JSON lines or CSV). Partial results and the manifest
    /// are kept beside it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Structure file.
    #[arg(long)]
    input: PathBuf,
    /// SVG output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cell size in SVG units.
    #[arg(long, default_value_t = 10.0)]
    cell: f64,
    /// Overlay the density measurement circle.
    #[arg(long)]
    circle: bool,
    /// Mark nonzero faces with their colour.
    #[arg(long)]
    ticks: bool,
}

fn parse_grid(text: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("expected lo:hi:step, got `{text}`"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let g = (num(lo)?, num(hi)?, num(step)?);
    f_grid(g.0, g.1, g.2).map_err(|e| e.to_string())?;
    Ok(g)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn check_f(f: f64) -> CliResult {
    if !(0.0..=1.0).contains(&f) {
        return Err(polyassembly::Error::Concentration(f).into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.filter(|&w| w > 0).unwrap_or_else(default_workers);
    match with_workers(workers, || dispatch(&cli, workers)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli, workers: usize) -> CliResult {
    let config = run_config(cli, workers);
    if let Some(path) = &cli.manifest {
        fs::write(path, to_json(&config)?)?;
    }
    let master = cli.master_seed;
    match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Run(a) => run(a, master),
        Command::Density(a) => density(a, master),
        Command::Fc(a) => fc(a, master),
        Command::Fractal(a) => fractal(a, master),
        Command::Predict(a) => predict_cmd(a),
        Command::Classify(a) => classify(a, master),
        Command::Catalogue(a) => catalogue(a, &config, cli.quiet),
        Command::Render(a) => render(a),
    }
}

fn run_config(cli: &Cli, workers: usize) -> RunConfig {
    let name = match &cli.command {
        Command::Enumerate(_) => "enumerate",
        Command::Run(_) => "run",
        Command::Density(_) => "density",
        Command::Fc(_) => "fc",
        Command::Fractal(_) => "fractal",
        Command::Predict(_) => "predict",
        Command::Classify(_) => "classify",
        Command::Catalogue(_) => "catalogue",
        Command::Render(_) => "render",
    };
    let mut c = RunConfig::new(name, cli.master_seed, workers);
    let fmt = |f: Format| if f == Format::Csv { "csv" } else { "json" }.to_string();
    match &cli.command {
        Command::Enumerate(a) => {
            c.out = a.output.out.clone();
            c.format = fmt(a.output.format);
        }
        Command::Run(a) => {
            c.tiles = Some(a.system.tiles.clone());
            c.mode = Some(a.system.mode.clone());
            c.f = Some(a.f);
            c.n_max = Some(a.nmax);
            c.stride = Some(a.stride);
            c.out = a.out.clone();
        }
        Command::Density(a) => {
            c.tiles = Some(a.system.tiles.clone());
            c.mode = Some(a.system.mode.clone());
            c.f_grid = Some(a.grid.f_grid);
            c.n_max = Some(a.nmax);
            c.reps = Some(a.reps);
            c.out = a.output.out.clone();
            c.format = fmt(a.output.format);
        }
        Command::Fc(a) => {
            c.tiles = Some(a.system.tiles.clone());
            c.mode = Some(a.system.mode.clone());
            c.f = a.f;
            c.n_max = Some(a.neval);
            c.reps = Some(a.reps);
            c.stride = Some(a.stride);
            c.tol = Some(a.tol);
            c.out = a.output.out.clone();
            c.format = fmt(a.output.format);
        }
        Command::Fractal(a) => {
            c.tiles = a.tiles.clone();
            c.mode = Some(a.mode.clone());
            c.f = a.f;
            c.n_max = Some(a.nmax);
            c.reps = Some(a.reps);
            c.out = a.output.out.clone();
            c.format = fmt(a.output.format);
        }
        Command::Predict(a) => {
            c.tiles = Some(a.system.tiles.clone());
            c.mode = Some(a.system.mode.clone());
            c.out = a.out.clone();
        }
        Command::Classify(a) => {
            c.tiles = Some(a.system.tiles.clone());
            c.mode = Some(a.system.mode.clone());
            c.n_max = Some(a.nmax);
            c.reps = a.reps;
            c.tol = Some(a.tol);
            c.f_grid = Some((0.0, 1.0, a.grid_step));
            c.out = a.output.out.clone();
            c.format = fmt(a.output.format);
        }
        Command::Catalogue(a) => {
            c.mode = Some(a.modes.join(","));
            c.n_max = Some(a.nmax);
            c.reps = Some(a.reps);
            c.tol = Some(a.tol);
            c.f_grid = Some((0.0, 1.0, a.grid_step));
            c.out = Some(a.out.clone());
            c.format = fmt(a.format);
        }
        Command::Render(a) => {
            c.out = a.out.clone();
            c.format = "svg".into();
        }
    }
    c
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

fn enumerate(a: &EnumerateArgs) -> CliResult {
    let text = match (a.kind, a.output.format) {
        (Kind::Single, Format::Json) => to_json(&enumerate_singles())?,
        (Kind::Pair, Format::Json) => to_json(&enumerate_pairs())?,
        (Kind::Single, Format::Csv) => {
            let mut s = String::from("tile\n");
            for t in enumerate_singles() {
                s.push_str(&quote(&t.to_string()));
                s.push('\n');
            }
            s
        }
        (Kind::Pair, Format::Csv) => {
            let mut s = String::from("tile_a,tile_b\n");
            for p in enumerate_pairs() {
                s.push_str(&format!("{},{}\n", quote(&p.a.to_string()), quote(&p.b.to_string())));
            }
            s
        }
    };
    write_output(a.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct RunReport {
    system: Vec<Tile>,
    mode: Interaction,
    f: f64,
    rng_seed: u64,
    terminated: bool,
    #[serde(rename = "N_final")]
    n_final: u64,
    free_sides: usize,
    density: f64,
}

fn run(a: &RunArgs, master: u64) -> CliResult {
    check_f(a.f)?;
    if a.stride == 0 {
        return Err("--stride must be positive".into());
    }
    let sys = a.system.system(a.f)?;
    let rng_seed = if a.index == 0 { master } else { derive_seed(master, a.index) };
    let out = simulate(&sys, rng_seed, 0, a.nmax, a.stride, a.rule.into());
    let asm = &out.assembly;
    let file = StructureFile::from_assembly(asm, rng_seed);
    if let Some(p) = &a.out {
        fs::write(p, to_json(&file)?)?;
    }
    if let Some(p) = &a.trace {
        fs::write(p, out.trace.to_csv())?;
    }
    if let Some(p) = &a.render {
        let spec = RenderSpec { circle: a.circle, ..RenderSpec::default() };
        fs::write(p, render_svg(&file, &spec))?;
    }
    let report = RunReport {
        system: file.system.clone(),
        mode: file.mode.clone(),
        f: file.f,
        rng_seed,
        terminated: file.terminated,
        n_final: file.n_final,
        free_sides: asm.free_count(),
        density: polyassembly::metrics::density(asm),
    };
    write_output(None, &to_json(&report)?)
}

fn density(a: &DensityArgs, master: u64) -> CliResult {
    let (lo, hi, step) = a.grid.f_grid;
    let grid = f_grid(lo, hi, step)?;
    let template = a.system.system(0.0)?;
    let params = DensityParams { reps: a.reps, n_max: a.nmax, rule: a.rule.into() };
    let curve = density_curve(&template, &grid, &params, master)?;
    let text = match a.output.format {
        Format::Json => to_json(&curve)?,
        Format::Csv => {
            let mut s = String::from("f,mean_density,std,reps\n");
            for p in &curve {
                s.push_str(&format!("{},{},{},{}\n", p.f, p.mean_density, p.std, p.reps));
            }
            s
        }
    };
    write_output(a.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct FcReport {
    system: Vec<Tile>,
    mode: Interaction,
    master_seed: u64,
    f_c: Option<f64>,
    result: Option<FcResult>,
    scan: Vec<SlopeEstimate>,
}

fn slope_csv(points: &[SlopeEstimate]) -> String {
    let mut s = String::from("f,slope,stderr\n");
    for e in points {
        s.push_str(&format!("{},{},{}\n", e.f, e.slope, e.stderr));
    }
    s
}

fn fc(a: &FcArgs, master: u64) -> CliResult {
    let template = a.system.system(0.0)?;
    let slope =
        SlopeParams { n_eval: a.neval, window_frac: a.window, reps: a.reps, stride: a.stride, rule: a.rule.into() };
    slope.validate()?;
    if let Some(f) = a.f {
        check_f(f)?;
        let est = slope_at(&template, f, &slope, master)?;
        let text = match a.output.format {
            Format::Json => to_json(&est)?,
            Format::Csv => slope_csv(std::slice::from_ref(&est)),
        };
        return write_output(a.output.out.as_deref(), &text);
    }
    let params = FcParams { slope, tol: a.tol, grid_step: a.grid_step };
    let grid = f_grid(0.0, 1.0, a.grid_step)?;
    let scan = scan_slopes(&template, &grid, &slope, master)?;
    let result = refine_fc(&template, &scan, &params, master)?;
    let text = match a.output.format {
        Format::Json => to_json(&FcReport {
            system: template.tiles.clone(),
            mode: template.mode.clone(),
            master_seed: master,
            f_c: result.as_ref().map(|r| r.f_c),
            result,
            scan,
        })?,
        Format::Csv => slope_csv(&scan),
    };
    write_output(a.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct FractalReport {
    fits: Vec<FractalFit>,
    /// Runs whose structure was too small to measure.
    skipped: usize,
    mean_dimension: Option<f64>,
    mean_r_squared: Option<f64>,
}

fn fractal(a: &FractalArgs, master: u64) -> CliResult {
    let results: Vec<polyassembly::Result<FractalFit>> = if let Some(path) = &a.input {
        let file: StructureFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        let cells: Vec<_> = file.placements.iter().map(|p| p.pos).collect();
        vec![box_dimension(&cells, a.min_extent)]
    } else {
        let tiles = a.tiles.as_deref().ok_or("either --input or --tiles with --f is required")?;
        let f = a.f.ok_or("--f is required with --tiles")?;
        check_f(f)?;
        let sys = TileSystem::new(parse_tiles(tiles)?, Interaction::parse(&a.mode)?, f)?;
        let seed = seed_for_f(master, f);
        par_map(a.reps, |i| {
            let mut rng = run_rng(seed, i as u64);
            let mut asm = polyassembly::assembly::Assembly::new(&sys, None, &mut rng);
            asm.run_to(a.nmax, a.nmax, StepRule::Conditioned, &mut rng);
            assembly_dimension(&asm, a.min_extent)
        })
    };
    let total = results.len();
    let mut fits = Vec::new();
    for r in results {
        match r {
            Ok(fit) => fits.push(fit),
            Err(polyassembly::Error::StructureTooSmall { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let text = match a.output.format {
        Format::Csv => {
            let [fit] = fits.as_slice() else {
                return Err(format!("CSV output needs exactly one measurable structure, found {}", fits.len()).into());
            };
            let mut s = String::from("eps,box_count\n");
            for (e, n) in fit.box_sizes.iter().zip(&fit.box_counts) {
                s.push_str(&format!("{e},{n}\n"));
            }
            s.push_str(&format!("# D={},r2={}\n", fit.dimension, fit.r_squared));
            s
        }
        Format::Json => {
            let k = fits.len() as f64;
            let mean = |g: fn(&FractalFit) -> f64| (!fits.is_empty()).then(|| fits.iter().map(g).sum::<f64>() / k);
            to_json(&FractalReport {
                mean_dimension: mean(|f| f.dimension),
                mean_r_squared: mean(|f| f.r_squared),
                skipped: total - fits.len(),
                fits,
            })?
        }
    };
    write_output(a.output.out.as_deref(), &text)
}

fn predict_cmd(a: &PredictArgs) -> CliResult {
    let (tiles, mode) = a.system.parse()?;
    let w = match a.weighting {
        WeightingArg::Unnormalized => Weighting::Unnormalized,
        WeightingArg::Conditioned => Weighting::Conditioned,
    };
    write_output(a.out.as_deref(), &to_json(&predict(&tiles, &mode, w))?)
}

fn classify(a: &ClassifyArgs, master: u64) -> CliResult {
    let (tiles, mode) = a.system.parse()?;
    for t in &tiles {
        for &c in &t.faces {
            mode.check_colour(c)?;
        }
    }
    let text = match tiles.as_slice() {
        [t] => {
            let params = SingleParams { reps: a.reps.unwrap_or(100), n_max: a.nmax, ..SingleParams::default() };
            let report = classify_single(*t, &mode, &params, master);
            match a.output.format {
                Format::Json => to_json(&report)?,
                Format::Csv => format!(
                    "tile,mode,class,terminated_frac,slope,distinct_outcomes\n{},{},{},{},{},{}\n",
                    quote(&report.tile.to_string()),
                    report.mode.label(),
                    report.class.map_or("inconclusive", |c| c.label()),
                    report.terminated_frac,
                    report.slope,
                    report.distinct_outcomes
                ),
            }
        }
        [x, y] => {
            let params = PairParams {
                reps: a.reps.unwrap_or(50),
                n_max: a.nmax,
                tol: a.tol,
                grid_step: a.grid_step,
                fractal_runs: a.fractal_runs,
                ..PairParams::default()
            };
            let record = classify_pair(&canonical_pair(x, y), &mode, &params, master)?;
            match a.output.format {
                Format::Json => to_json(&record)?,
                Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(&record)),
            }
        }
        _ => unreachable!("parse_tiles returns one or two tiles"),
    };
    write_output(a.output.out.as_deref(), &text)
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

fn load_partial(path: &Path) -> CliResult<BTreeMap<String, CatalogueRecord>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        // A torn final line from an interrupted write is dropped.
        if let Ok(r) = serde_json::from_str::<CatalogueRecord>(&line) {
            done.insert(r.key(), r);
        }
    }
    Ok(done)
}

fn catalogue(a: &CatalogueArgs, config: &RunConfig, quiet: bool) -> CliResult {
    let modes = a.modes.iter().map(|m| Interaction::parse(m)).collect::<Result<Vec<_>, _>>()?;
    let params =
        PairParams { reps: a.reps, n_max: a.nmax, tol: a.tol, grid_step: a.grid_step, ..PairParams::default() };
    f_grid(0.0, 1.0, a.grid_step)?;
    let mut jobs = catalogue_jobs(&modes);
    if let Some(l) = a.limit {
        jobs.truncate(l);
    }
    let manifest_path = sidecar(&a.out, ".manifest.json");
    let partial_path = sidecar(&a.out, ".partial.jsonl");
    if a.fresh && partial_path.exists() {
        fs::remove_file(&partial_path)?;
    }
    if manifest_path.exists() && partial_path.exists() {
        let old: RunConfig = serde_json::from_str(&fs::read_to_string(&manifest_path)?)?;
        if !old.compatible(config) {
            return Err(format!(
                "{} was written with different settings; rerun with --fresh to discard it",
                partial_path.display()
            )
            .into());
        }
    }
    fs::write(&manifest_path, to_json(config)?)?;
    let done = load_partial(&partial_path)?;
    let master = config.master_seed;
    let progress = Progress::new("catalogue", jobs.len(), !quiet);
    for _ in jobs.iter().filter(|(p, m)| done.contains_key(&polyassembly::behaviour::job_key(p, m))) {
        progress.tick("resumed");
    }
    let sink = Mutex::new(OpenOptions::new().create(true).append(true).open(&partial_path)?);
    let write_err: Mutex<Option<io::Error>> = Mutex::new(None);
    let records = build_catalogue(&jobs, &params, master, &done, &|r| {
        let line = serde_json::to_string(r).expect("records serialize");
        let mut f = sink.lock().unwrap();
        if let Err(e) = writeln!(f, "{line}").and_then(|_| f.flush()) {
            write_err.lock().unwrap().get_or_insert(e);
        }
        progress.tick(&r.key());
    })?;
    if let Some(e) = write_err.into_inner().unwrap() {
        return Err(e.into());
    }
    let mut text = String::new();
    match a.format {
        Format::Json => {
            for r in &records {
                text.push_str(&serde_json::to_string(r)?);
                text.push('\n');
            }
        }
        Format::Csv => {
            text.push_str(CSV_HEADER);
            text.push('\n');
            for r in &records {
                text.push_str(&csv_row(r));
                text.push('\n');
            }
        }
    }
    fs::write(&a.out, text)?;
    fs::remove_file(&partial_path)?;
    if !quiet {
        for mode in &modes {
            let rs: Vec<CatalogueRecord> = records.iter().filter(|r| &r.mode == mode).cloned().collect();
            let crit = rs.iter().filter(|r| r.critical).count();
            let dim = rs.iter().filter(|r| r.dimensional_transition).count();
            let incon = rs.iter().filter(|r| !r.inconclusive.is_empty()).count();
            eprintln!(
                "{}: {} sets, {crit} critical, {dim} dimensional, {incon} with inconclusive flags",
                mode.label(),
                rs.len()
            );
            for (label, n) in label_counts(&rs) {
                if n > 0 {
                    eprintln!("  {}: {n}", label.name());
                }
            }
        }
    }
    Ok(())
}

fn render(a: &RenderArgs) -> CliResult {
    let file: StructureFile = serde_json::from_str(&fs::read_to_string(&a.input)?)?;
    file.system()?;
    if !a.cell.is_finite() || a.cell <= 0.0 {
        return Err("--cell must be positive".into());
    }
    let spec = RenderSpec { cell: a.cell, circle: a.circle, face_ticks: a.ticks, ..RenderSpec::default() };
    write_output(a.out.as_deref(), &render_svg(&file, &spec))
}
