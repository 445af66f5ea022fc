//! The `ice` command line: six subcommands over the library, a shared
//! run configuration, and the end-to-end report pipeline.
//!
//! All randomness flows from `--seed`; outputs carry no timestamps, so
//! identical invocations write byte-identical files. `ICE_THREADS` caps
//! the worker pool, which changes speed but never output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bootstrap::{icer, resample, BootstrapError, BootstrapScatter};
use crate::data_model::{ingest_csv, summarize, DataError, SummaryStats, Variable};
use crate::frontier::{analyze, FrontierError, TreatmentOption};
use crate::preference::{
    square_grid, PreferenceError, PreferenceMap, DEFAULT_GRID_POINTS, DEFAULT_GRID_RANGE,
};
use crate::report::{
    preference_histogram, render_histogram_svg, render_scatter_svg, study_report, StudyReport,
    DEFAULT_BINS,
};
use crate::scale::{
    ice_scale, IceOutcome, IceScaleResult, LambdaSource, Perspective, ScaleError, ScaleRule,
    ShadowPrice,
};
use crate::wedge::{compute_wedge, quadrant_counts, TailRule, WedgeError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
    #[error(transparent)]
    Bootstrap(#[from] BootstrapError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Frontier(#[from] FrontierError),
    #[error("{path}: row {row}: {message}")]
    Malformed {
        path: PathBuf,
        row: usize,
        message: String,
    },
}

impl CliError {
    /// Stable machine-parseable error code, printed as
    /// `error: <code>: <message>`.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Data(e) => match e {
                DataError::MissingColumn(_) => "MissingColumn",
                DataError::NonNumericCell { .. } => "NonNumericCell",
                DataError::UnknownArmCode { .. } => "UnknownArmCode",
                DataError::ArmTooSmall { .. } => "ArmTooSmall",
                DataError::NonFiniteValue { .. } => "NonFiniteValue",
                DataError::EmptyFile => "EmptyFile",
                DataError::MixedArms { .. } => "MixedArms",
                DataError::Io(_) => "IoError",
            },
            CliError::Scale(e) => match e {
                ScaleError::InvalidLambda(_) => "InvalidLambda",
                ScaleError::ZeroEffeVariance => "ZeroEffeVariance",
                ScaleError::ZeroCostVariance => "ZeroCostVariance",
            },
            CliError::Preference(_) => "InvalidMap",
            CliError::Bootstrap(e) => match e {
                BootstrapError::BadReplicationCount(_) => "BadReplicationCount",
                _ => "BadScatter",
            },
            CliError::Wedge(e) => match e {
                WedgeError::OriginPoint => "OriginPoint",
                WedgeError::OriginObserved => "OriginObserved",
                WedgeError::InvalidConfidence(_) => "InvalidConfidence",
                WedgeError::WedgeDegenerate(_) => "WedgeDegenerate",
            },
            CliError::Frontier(e) => match e {
                FrontierError::OutsideBracket => "OutsideBracket",
                _ => "BadOptions",
            },
            CliError::Malformed { .. } => "ParseError",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ice",
    version,
    about = "Nonparametric incremental cost-effectiveness inference",
    long_about = "Bootstrap wedge-shaped confidence regions on the cost-effectiveness plane, \
ICE preference maps with executable coherence axioms, shadow-price selection, \
cost-effectiveness frontiers, and report/plot emission. Patient CSVs use the header \
trtm,effe,cost with arm codes 0 = Std and 1 = New."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PerspectiveArg {
    Alias,
    Alibi,
}

impl From<PerspectiveArg> for Perspective {
    fn from(p: PerspectiveArg) -> Perspective {
        match p {
            PerspectiveArg::Alias => Perspective::Alias,
            PerspectiveArg::Alibi => Perspective::Alibi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScaleRuleArg {
    Se,
    Pooled,
}

impl From<ScaleRuleArg> for ScaleRule {
    fn from(r: ScaleRuleArg) -> ScaleRule {
        match r {
            ScaleRuleArg::Se => ScaleRule::StandardError,
            ScaleRuleArg::Pooled => ScaleRule::Pooled,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TailsArg {
    Symmetric,
    Equal,
}

impl From<TailsArg> for TailRule {
    fn from(t: TailsArg) -> TailRule {
        match t {
            TailsArg::Symmetric => TailRule::Symmetric,
            TailsArg::Equal => TailRule::EqualTails,
        }
    }
}

/// `--lambda` accepts a positive number or `auto` (pick the nearest
/// power of 10 to the statistical scale ratio).
#[derive(Debug, Clone, Copy)]
pub enum LambdaArg {
    Auto,
    Fixed(f64),
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("value must be strictly positive and finite, got {v}"))
    }
}

fn parse_lambda(s: &str) -> Result<LambdaArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(LambdaArg::Auto);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is neither a number nor `auto`"))?;
    if v > 0.0 && v.is_finite() {
        Ok(LambdaArg::Fixed(v))
    } else {
        Err(format!(
            "lambda must be strictly positive and finite, got {v}"
        ))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the cost/effe scale ratio, the recommended power-of-10
    /// shadow price, and both arm summaries
    Scale {
        /// Patient CSV (trtm,effe,cost)
        #[arg(long)]
        input: PathBuf,
        /// Spread statistic behind the ratio
        #[arg(long = "scale-rule", value_enum, default_value = "se")]
        scale_rule: ScaleRuleArg,
    },
    /// Resample both arms and write the replicated ICE outcomes
    Bootstrap {
        /// Patient CSV (trtm,effe,cost)
        #[arg(long)]
        input: PathBuf,
        /// Number of bootstrap replicates (>= 100)
        #[arg(long)]
        reps: usize,
        /// Master RNG seed
        #[arg(long)]
        seed: u64,
        /// Shadow price: a positive number or `auto`
        #[arg(long, value_parser = parse_lambda)]
        lambda: LambdaArg,
        /// Unit perspective for the standardized points
        #[arg(long, value_enum, default_value = "alias")]
        perspective: PerspectiveArg,
        /// Output scatter CSV (columns rep,x,y; rep 0 is the observed point)
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the angular confidence wedge of a scatter
    Wedge {
        /// Scatter CSV written by `ice bootstrap`
        #[arg(long)]
        scatter: PathBuf,
        /// Confidence level in [0.5, 1)
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Tail-handling rule
        #[arg(long, value_enum, default_value = "symmetric")]
        tails: TailsArg,
    },
    /// Inspect a preference map: validity, returns to scale, axioms
    Prefmap {
        /// Radius power (returns to scale)
        #[arg(long)]
        beta: f64,
        /// Signed-power exponent (nonlinearity)
        #[arg(long)]
        gamma: f64,
        /// Run the four-axiom suite on a grid
        #[arg(long = "check-axioms")]
        check_axioms: bool,
        /// Grid points per side
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        /// Grid half-range (the grid covers [-range, range] squared)
        #[arg(long, default_value_t = DEFAULT_GRID_RANGE, value_parser = parse_positive)]
        range: f64,
    },
    /// Classify treatment options into frontier, dominated, and
    /// extendedly dominated
    Frontier {
        /// Options CSV (columns name,effe,cost)
        #[arg(long)]
        options: PathBuf,
    },
    /// Run the full pipeline and write report.txt, plots, and the scatter
    Report {
        /// Patient CSV (trtm,effe,cost)
        #[arg(long)]
        input: PathBuf,
        /// Number of bootstrap replicates (>= 100)
        #[arg(long)]
        reps: usize,
        /// Master RNG seed
        #[arg(long)]
        seed: u64,
        /// Shadow price: a positive number or `auto` (default)
        #[arg(long, value_parser = parse_lambda, default_value = "auto")]
        lambda: LambdaArg,
        /// Nonlinear map radius power (default 1, the Omega map)
        #[arg(long)]
        beta: Option<f64>,
        /// Nonlinear map signed-power exponent (default Omega)
        #[arg(long)]
        gamma: Option<f64>,
        /// Unit perspective
        #[arg(long, value_enum, default_value = "alias")]
        perspective: PerspectiveArg,
        /// Wedge confidence level
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Wedge tail rule
        #[arg(long, value_enum, default_value = "symmetric")]
        tails: TailsArg,
        /// Output directory (created if missing)
        #[arg(long)]
        outdir: PathBuf,
    },
}

/// Validated configuration of the report pipeline.
#[derive(Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub reps: usize,
    pub seed: u64,
    pub lambda: LambdaArg,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub perspective: Perspective,
    pub confidence: f64,
    pub tails: TailRule,
    pub outdir: PathBuf,
}

/// Entry point behind `main`: configures the worker pool and dispatches.
/// Returns the text to print on stdout.
pub fn run(cli: Cli) -> Result<String, CliError> {
    configure_threads();
    match cli.command {
        Command::Scale { input, scale_rule } => run_scale(&input, scale_rule.into()),
        Command::Bootstrap {
            input,
            reps,
            seed,
            lambda,
            perspective,
            out,
        } => run_bootstrap(&input, reps, seed, lambda, perspective.into(), &out),
        Command::Wedge {
            scatter,
            confidence,
            tails,
        } => run_wedge(&scatter, confidence, tails.into()),
        Command::Prefmap {
            beta,
            gamma,
            check_axioms,
            grid,
            range,
        } => run_prefmap(beta, gamma, check_axioms, grid, range),
        Command::Frontier { options } => run_frontier(&options),
        Command::Report {
            input,
            reps,
            seed,
            lambda,
            beta,
            gamma,
            perspective,
            confidence,
            tails,
            outdir,
        } => run_report(RunConfig {
            input,
            reps,
            seed,
            lambda,
            beta,
            gamma,
            perspective: perspective.into(),
            confidence,
            tails: tails.into(),
            outdir,
        }),
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("ICE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // Ignore failure: the global pool can only be set once.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn summary_line(s: &SummaryStats) -> String {
    format!(
        "min={:.4} q1={:.4} median={:.4} mean={:.4} q3={:.4} max={:.4} sd={:.4}",
        s.min, s.q1, s.median, s.mean, s.q3, s.max, s.sd
    )
}

fn run_scale(input: &Path, rule: ScaleRule) -> Result<String, CliError> {
    let (std, new) = ingest_csv(input)?;
    let result = ice_scale(&std, &new, rule)?;
    let mut out = String::new();
    let _ = writeln!(out, "scale rule: {}", result.rule.name());
    let _ = writeln!(out, "S_cost = {:.6}", result.s_cost);
    let _ = writeln!(out, "S_effe = {:.6}", result.s_effe);
    let _ = writeln!(out, "ratio = {:.6}", result.ratio);
    let _ = writeln!(
        out,
        "recommended lambda = {} (nearest power of 10)",
        result.recommended.value()
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "Std arm, n={}", std.n());
    let _ = writeln!(
        out,
        "  effe: {}",
        summary_line(&summarize(&std, Variable::Effe))
    );
    let _ = writeln!(
        out,
        "  cost: {}",
        summary_line(&summarize(&std, Variable::Cost))
    );
    let _ = writeln!(out, "New arm, n={}", new.n());
    let _ = writeln!(
        out,
        "  effe: {}",
        summary_line(&summarize(&new, Variable::Effe))
    );
    let _ = writeln!(
        out,
        "  cost: {}",
        summary_line(&summarize(&new, Variable::Cost))
    );
    Ok(out)
}

fn resolve_lambda(
    lambda: LambdaArg,
    std: &crate::data_model::ArmSample,
    new: &crate::data_model::ArmSample,
) -> Result<(ShadowPrice, Option<IceScaleResult>), CliError> {
    match lambda {
        LambdaArg::Fixed(v) => Ok((ShadowPrice::new(v, LambdaSource::UserSupplied)?, None)),
        LambdaArg::Auto => {
            let result = ice_scale(std, new, ScaleRule::StandardError)?;
            Ok((result.recommended, Some(result)))
        }
    }
}

fn run_bootstrap(
    input: &Path,
    reps: usize,
    seed: u64,
    lambda: LambdaArg,
    perspective: Perspective,
    out: &Path,
) -> Result<String, CliError> {
    let (std, new) = ingest_csv(input)?;
    let (lambda, scale) = resolve_lambda(lambda, &std, &new)?;
    let scatter = resample(&std, &new, reps, seed, lambda, perspective)?;
    write_scatter_csv(&scatter, out)?;
    let mut text = String::new();
    if let Some(s) = scale {
        let _ = writeln!(
            text,
            "auto lambda: statistical ratio = {:.6}, chosen power of 10 = {}",
            s.ratio,
            lambda.value()
        );
    }
    let observed = scatter.observed();
    let _ = writeln!(
        text,
        "wrote {}: R = {} replicates + observed, seed = {}, lambda = {}, perspective = {}",
        out.display(),
        scatter.r(),
        seed,
        lambda.value(),
        perspective.name()
    );
    let _ = writeln!(
        text,
        "observed (x, y) = ({:.6}, {:.6}), ICER = {}",
        observed.x,
        observed.y,
        icer(&observed).map_or("undefined".to_string(), |r| format!("{r:.6}")),
    );
    Ok(text)
}

/// Scatter CSV layout: header `rep,x,y`; rep 0 is the observed outcome,
/// reps 1..=R the replicates in index order.
fn write_scatter_csv(scatter: &BootstrapScatter, path: &Path) -> Result<(), CliError> {
    let mut text = String::from("rep,x,y\n");
    let observed = scatter.observed();
    let _ = writeln!(text, "0,{},{}", observed.x, observed.y);
    for (i, p) in scatter.replicates().iter().enumerate() {
        let _ = writeln!(text, "{},{},{}", i + 1, p.x, p.y);
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a scatter CSV back. Geometry only: the file does not carry
/// lambda or the perspective, which a wedge does not need.
fn read_scatter_csv(path: &Path) -> Result<BootstrapScatter, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |row: usize, message: &str| CliError::Malformed {
        path: path.to_path_buf(),
        row,
        message: message.to_string(),
    };
    let mut observed: Option<IceOutcome> = None;
    let mut replicates = Vec::new();
    let lambda = ShadowPrice::unit();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if i == 0 {
            if line.trim() != "rep,x,y" {
                return Err(malformed(1, "expected header rep,x,y"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            return Err(malformed(i + 1, "expected 3 columns"));
        }
        let rep: usize = cells[0]
            .parse()
            .map_err(|_| malformed(i + 1, "bad rep index"))?;
        let x: f64 = cells[1].parse().map_err(|_| malformed(i + 1, "bad x"))?;
        let y: f64 = cells[2].parse().map_err(|_| malformed(i + 1, "bad y"))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(malformed(i + 1, "non-finite coordinate"));
        }
        let outcome = IceOutcome {
            x,
            y,
            lambda,
            perspective: Perspective::Alias,
        };
        if rep == 0 {
            observed = Some(outcome);
        } else {
            replicates.push(outcome);
        }
    }
    let observed = observed.ok_or_else(|| malformed(0, "missing observed row (rep 0)"))?;
    BootstrapScatter::from_parts(observed, replicates, 0).map_err(CliError::from)
}

fn run_wedge(scatter_path: &Path, confidence: f64, tails: TailRule) -> Result<String, CliError> {
    let scatter = read_scatter_csv(scatter_path)?;
    let w = compute_wedge(&scatter, confidence, tails)?;
    let q = quadrant_counts(&scatter);
    let mut out = String::new();
    let _ = writeln!(out, "replicates = {}, tails rule = {}", w.r, tails.name());
    let _ = writeln!(
        out,
        "center = {:.4} deg, half-angle = {:.4} deg",
        w.center.degrees(),
        w.half_angle.to_degrees()
    );
    let _ = writeln!(
        out,
        "limits = [{:.4}, {:.4}] deg",
        w.lower.degrees(),
        w.upper.degrees()
    );
    let _ = writeln!(
        out,
        "counts: below = {}, inside = {}, above = {} (origin {}), confidence = {}",
        w.count_below, w.count_inside, w.count_above, w.count_origin, w.confidence
    );
    let _ = writeln!(
        out,
        "quadrants: SE = {}, NE = {}, NW = {}, SW = {}, axes = {}",
        q.se, q.ne, q.nw, q.sw, q.boundary
    );
    Ok(out)
}

fn run_prefmap(
    beta: f64,
    gamma: f64,
    check_axioms: bool,
    grid: usize,
    range: f64,
) -> Result<String, CliError> {
    let map = PreferenceMap::with_unit_lambda(beta, gamma)?;
    let (lo, hi) = crate::preference::omega_bounds();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "beta = {beta}, gamma = {gamma}, gamma/beta = {}",
        gamma / beta
    );
    let _ = writeln!(
        out,
        "monotone-valid: {} (requires {:.7} <= gamma/beta <= {:.6})",
        if map.is_monotone_valid() { "yes" } else { "no" },
        lo,
        hi
    );
    let _ = writeln!(out, "returns-to-scale: {}", map.returns_to_scale().name());
    if check_axioms {
        let points = square_grid(grid.max(2), range);
        let report = map.check_axioms(&points);
        let _ = writeln!(
            out,
            "axioms on a {grid}x{grid} grid over [-{range}, {range}]^2:"
        );
        for (name, check) in [
            ("indifference/direction", &report.indifference_direction),
            ("monotonicity", &report.monotonicity),
            ("re-labeling", &report.relabeling),
            ("symmetry/anti-symmetry", &report.symmetry),
        ] {
            let _ = writeln!(
                out,
                "  {name}: {}{}",
                if check.passed { "PASS" } else { "FAIL" },
                check
                    .detail
                    .as_deref()
                    .map(|d| format!(" ({d})"))
                    .unwrap_or_default()
            );
        }
    }
    Ok(out)
}

fn read_options_csv(path: &Path) -> Result<Vec<TreatmentOption>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |row: usize, message: &str| CliError::Malformed {
        path: path.to_path_buf(),
        row,
        message: message.to_string(),
    };
    let mut options = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if i == 0 {
            if line.trim() != "name,effe,cost" {
                return Err(malformed(1, "expected header name,effe,cost"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            return Err(malformed(i + 1, "expected 3 columns"));
        }
        let effe: f64 = cells[1].parse().map_err(|_| malformed(i + 1, "bad effe"))?;
        let cost: f64 = cells[2].parse().map_err(|_| malformed(i + 1, "bad cost"))?;
        options.push(TreatmentOption::new(cells[0], effe, cost));
    }
    Ok(options)
}

fn run_frontier(options_path: &Path) -> Result<String, CliError> {
    let options = read_options_csv(options_path)?;
    let result = analyze(&options)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "frontier ({} of {} options):",
        result.frontier.len(),
        options.len()
    );
    for p in &result.frontier {
        let _ = writeln!(out, "  {} (effe = {}, cost = {})", p.name, p.effe, p.cost);
    }
    if result.frontier.len() >= 2 {
        let _ = writeln!(
            out,
            "incremental slopes (cost per effe) along the frontier:"
        );
        for (from, to, slope) in result.incremental_slopes() {
            let _ = writeln!(out, "  {from} -> {to}: {slope:.6}");
        }
    }
    for (p, dominator) in &result.dominated {
        let _ = writeln!(out, "strictly dominated: {} by {}", p.name, dominator);
    }
    for (p, (left, right)) in &result.extendedly_dominated {
        let _ = writeln!(
            out,
            "extendedly dominated: {} by mixtures of {} and {}",
            p.name, left, right
        );
    }
    for (p, twin) in &result.duplicates {
        let _ = writeln!(out, "duplicate coordinates: {} matches {}", p.name, twin);
    }
    Ok(out)
}

/// The seven files the report pipeline writes.
pub const REPORT_FILES: [&str; 7] = [
    "report.txt",
    "scatter.svg",
    "wedge_nb.svg",
    "wedge_omega.svg",
    "hist_nb.svg",
    "hist_omega.svg",
    "scatter.csv",
];

fn run_report(config: RunConfig) -> Result<String, CliError> {
    let (std, new) = ingest_csv(&config.input)?;
    let (lambda, scale) = resolve_lambda(config.lambda, &std, &new)?;

    let scatter = resample(
        &std,
        &new,
        config.reps,
        config.seed,
        lambda,
        config.perspective,
    )?;
    let wedge = compute_wedge(&scatter, config.confidence, config.tails)?;
    let quadrants = quadrant_counts(&scatter);

    let nb = PreferenceMap::net_benefit();
    let nonlinear = match (config.beta, config.gamma) {
        (None, None) => PreferenceMap::omega_map(),
        (beta, gamma) => PreferenceMap::with_unit_lambda(
            beta.unwrap_or(1.0),
            gamma.unwrap_or_else(|| crate::preference::omega_bounds().1),
        )?,
    };
    let nb_hist = preference_histogram(&scatter, &nb, DEFAULT_BINS);
    let nonlinear_hist = preference_histogram(&scatter, &nonlinear, DEFAULT_BINS);

    fs::create_dir_all(&config.outdir).map_err(|source| CliError::Io {
        path: config.outdir.clone(),
        source,
    })?;
    let file = |name: &str| config.outdir.join(name);
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source: std::io::Error| CliError::Io { path, source }
    };

    let text = study_report(&StudyReport {
        n_std: std.n(),
        n_new: new.n(),
        std_effe: summarize(&std, Variable::Effe),
        std_cost: summarize(&std, Variable::Cost),
        new_effe: summarize(&new, Variable::Effe),
        new_cost: summarize(&new, Variable::Cost),
        scale: scale.as_ref(),
        lambda,
        perspective: config.perspective,
        reps: scatter.r(),
        seed: config.seed,
        wedge: &wedge,
        quadrants: &quadrants,
        nb_hist: &nb_hist,
        nonlinear_map: &nonlinear,
        nonlinear_hist: &nonlinear_hist,
    });
    fs::write(file("report.txt"), &text).map_err(io_err(&file("report.txt")))?;

    render_scatter_svg(&scatter, None, None, &file("scatter.svg"))
        .map_err(io_err(&file("scatter.svg")))?;
    render_scatter_svg(&scatter, Some(&wedge), Some(&nb), &file("wedge_nb.svg"))
        .map_err(io_err(&file("wedge_nb.svg")))?;
    render_scatter_svg(
        &scatter,
        Some(&wedge),
        Some(&nonlinear),
        &file("wedge_omega.svg"),
    )
    .map_err(io_err(&file("wedge_omega.svg")))?;
    render_histogram_svg(&nb_hist, &file("hist_nb.svg")).map_err(io_err(&file("hist_nb.svg")))?;
    render_histogram_svg(&nonlinear_hist, &file("hist_omega.svg"))
        .map_err(io_err(&file("hist_omega.svg")))?;
    write_scatter_csv(&scatter, &file("scatter.csv"))?;

    let mut out = String::new();
    if let Some(s) = &scale {
        let _ = writeln!(
            out,
            "auto lambda: statistical ratio = {:.6}, chosen power of 10 = {}",
            s.ratio,
            lambda.value()
        );
    }
    let _ = writeln!(
        out,
        "wrote {} files to {}:",
        REPORT_FILES.len(),
        config.outdir.display()
    );
    for name in REPORT_FILES {
        let _ = writeln!(out, "  {name}");
    }
    let _ = writeln!(out);
    out.push_str(&text);
    Ok(out)
}
