//! Command-line surface for the `zipcurve` binary.
//!
//! Verbs: `validate`, `curve`, `attract`, `param eval`, `param holder`,
//! `catalog list`, `catalog show`, `dendrite verify`, and `graph`. The
//! global flags `--tol`, `--budget`, and `--seed` apply to every verb.
//!
//! Exit codes: 0 on success or a passing check, 1 on a failing check, 2 on
//! usage or configuration errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::attractor::{chaos_game, iterate_addresses, PointCloud, DEFAULT_BUDGET};
use crate::catalog;
use crate::config::{emit_config, load_config, SystemConfig};
use crate::dendrite;
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::parametrize::Parametrization;
use crate::render::{render_svg, Drawing};

/// Dot radius (output pixels) used when an attractor sample is rendered as
/// SVG; small enough that a 10^5-point cloud reads as a shape, not a blob.
const ATTRACTOR_DOT_RADIUS: f64 = 0.75;

/// Top-level argument structure.
#[derive(Debug, Parser)]
#[command(
    name = "zipcurve",
    version,
    about = "Self-similar zippers in the plane: attractors, space-filling parametrizations, and cell-graph checks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Geometric tolerance for validation checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Largest number of points any single enumeration may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Seed for all pseudo-random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a config file: structure, contraction ratios, and (for the
    /// zipper form) the vertex-matching identities.
    Validate {
        /// Path to a system config file.
        config: PathBuf,
    },
    /// Sample the space-filling curve at a refinement level and write the
    /// polyline as SVG or CSV.
    Curve {
        /// Path to a system config file (zipper form).
        config: PathBuf,
        /// Refinement level; the polyline has m^(level+1) + 1 vertices.
        #[arg(long, default_value_t = 4)]
        level: usize,
        /// Output file; the extension (.svg or .csv) picks the format.
        /// Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the attractor, by exhaustive depth-n words or by the chaos
    /// game, and write the points as CSV or SVG dots.
    Attract {
        /// Path to a system config file.
        config: PathBuf,
        /// Sampling mode.
        #[arg(long, value_enum, default_value_t = Mode::Iterate)]
        mode: Mode,
        /// Word depth for iterate mode.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Sample count for chaos mode.
        #[arg(short = 'n', long = "samples", default_value_t = 100_000)]
        samples: usize,
        /// Leading iterations discarded in chaos mode.
        #[arg(long, default_value_t = 40)]
        burn_in: usize,
        /// Output file; the extension (.svg or .csv) picks the format.
        /// Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate or probe the linear parametrization of the attractor.
    #[command(subcommand)]
    Param(ParamCommand),
    /// List the built-in example systems or print one as a config file.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Run checks specific to the built-in dendrite system.
    #[command(subcommand)]
    Dendrite(DendriteCommand),
    /// Build the depth-n cell adjacency graph of a config's attractor and
    /// print its counts; optionally remove a disk and report components.
    Graph {
        /// Path to a system config file.
        config: PathBuf,
        /// Subdivision depth (m^depth cells).
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Disk to remove, as `x,y,r`.
        #[arg(long, value_name = "X,Y,R")]
        remove: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum ParamCommand {
    /// Print gamma(t) to full precision as `x y`.
    Eval {
        /// Path to a system config file (zipper form).
        config: PathBuf,
        /// Curve parameter in [0, 1].
        #[arg(short, value_name = "T")]
        t: f64,
        /// Digit-expansion depth used for the evaluation.
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Fit the curve's Hoelder exponent from random parameter pairs.
    Holder {
        /// Path to a system config file (zipper form).
        config: PathBuf,
        /// Number of random pairs entering the log-log fit.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Digit-expansion depth used for the evaluations.
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// One line per entry: name, summary.
    List,
    /// Print a built-in system as an importable config file.
    Show {
        /// Entry name, as printed by `catalog list`.
        name: String,
    },
}

#[derive(Debug, Subcommand)]
enum DendriteCommand {
    /// Run the dendrite verification suite; one tab-separated record per
    /// check: name, expected, observed, pass|fail.
    Verify {
        /// Deepest subdivision level the suite inspects.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// How `attract` picks its sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Every depth-n word applied to a fixed point (deterministic cover).
    Iterate,
    /// Random orbit of the map semigroup (density follows measure).
    Chaos,
}

/// Output format selected by a file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutFormat {
    Svg,
    Csv,
}

fn out_format(path: &Path) -> Result<OutFormat> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("svg") => Ok(OutFormat::Svg),
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Ok(OutFormat::Csv),
        _ => Err(Error::Config(format!(
            "output path '{}' must end in .svg or .csv",
            path.display()
        ))),
    }
}

fn parse_disk(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "--remove wants three comma-separated numbers 'x,y,r' (got '{text}')"
        )));
    }
    let mut vals = [0.0f64; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| {
            Error::Config(format!("--remove component '{part}' is not a number"))
        })?;
    }
    if !vals.iter().all(|v| v.is_finite()) {
        return Err(Error::Config(format!(
            "--remove components must be finite (got '{text}')"
        )));
    }
    if vals[2] <= 0.0 {
        return Err(Error::Config(format!(
            "--remove radius must be positive (got {})",
            vals[2]
        )));
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn build_parametrization(cfg: &SystemConfig) -> Result<Parametrization> {
    let zipper = cfg.build_zipper()?;
    let partition = cfg.build_partition(zipper.m())?;
    Parametrization::new(zipper, partition)
}

fn write_cloud(cloud: &PointCloud, out: Option<&Path>, style: crate::config::StyleConfig) -> Result<()> {
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut w = std::io::BufWriter::new(stdout.lock());
            cloud.write_csv(&mut w)?;
            w.flush()?;
        }
        Some(path) => match out_format(path)? {
            OutFormat::Csv => {
                let file = std::fs::File::create(path)?;
                let mut w = std::io::BufWriter::new(file);
                cloud.write_csv(&mut w)?;
                w.flush()?;
            }
            OutFormat::Svg => {
                let mut drawing = Drawing::new(style);
                drawing.add_dots(cloud.points().to_vec(), ATTRACTOR_DOT_RADIUS);
                render_svg(&drawing, path)?;
            }
        },
    }
    Ok(())
}

fn cmd_validate(path: &Path, tol: f64) -> Result<i32> {
    let cfg = load_config(path)?;
    if cfg.is_zipper_form() {
        let report = cfg.build_zipper()?.validate(tol);
        print!("{report}");
        Ok(if report.pass { 0 } else { 1 })
    } else {
        // Raw map lists carry no vertex identities; contraction and the
        // similarity condition were already enforced while building.
        let ifs = cfg.build_ifs()?;
        for (i, map) in ifs.maps().iter().enumerate() {
            println!(
                "map {}: ratio {:.6}{}",
                i + 1,
                map.ratio(),
                if map.orientation_reversing() {
                    ", orientation-reversing"
                } else {
                    ""
                }
            );
        }
        println!(
            "pass ({} contracting maps; raw form has no junctions to check)",
            ifs.len()
        );
        Ok(0)
    }
}

fn cmd_curve(path: &Path, level: usize, out: Option<&Path>, budget: u64) -> Result<i32> {
    let cfg = load_config(path)?;
    let param = build_parametrization(&cfg)?;
    let poly = param.curve_polyline(level, budget)?;
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut w = std::io::BufWriter::new(stdout.lock());
            poly.write_csv(&mut w)?;
            w.flush()?;
        }
        Some(path) => match out_format(path)? {
            OutFormat::Csv => {
                let file = std::fs::File::create(path)?;
                let mut w = std::io::BufWriter::new(file);
                poly.write_csv(&mut w)?;
                w.flush()?;
            }
            OutFormat::Svg => {
                let mut drawing = Drawing::new(cfg.style());
                drawing.add_polyline(poly.vertices().to_vec());
                render_svg(&drawing, path)?;
            }
        },
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_attract(
    path: &Path,
    mode: Mode,
    depth: usize,
    samples: usize,
    burn_in: usize,
    out: Option<&Path>,
    budget: u64,
    seed: u64,
) -> Result<i32> {
    let cfg = load_config(path)?;
    let ifs = cfg.build_ifs()?;
    let cloud = match mode {
        Mode::Iterate => {
            let start = ifs.map(1).fixed_point()?;
            iterate_addresses(&ifs, depth, start, budget)?
        }
        Mode::Chaos => chaos_game(&ifs, samples, seed, burn_in),
    };
    write_cloud(&cloud, out, cfg.style())?;
    Ok(0)
}

fn cmd_param_eval(path: &Path, t: f64, depth: usize) -> Result<i32> {
    let cfg = load_config(path)?;
    let param = build_parametrization(&cfg)?;
    let p = param.gamma(t, depth)?;
    println!("{:.16e} {:.16e}", p.x, p.y);
    Ok(0)
}

fn cmd_param_holder(path: &Path, samples: usize, depth: usize, seed: u64) -> Result<i32> {
    let cfg = load_config(path)?;
    let param = build_parametrization(&cfg)?;
    let est = param.estimate_holder(samples, depth, seed)?;
    println!("exponent\t{:.6}", est.exponent);
    println!("prefactor\t{:.6}", est.prefactor);
    println!("pairs_used\t{}", est.pairs_used);
    println!(
        "separation_range\t{:.3e}\t{:.3e}",
        est.min_separation, est.max_separation
    );
    Ok(0)
}

fn cmd_catalog_list() -> Result<i32> {
    for entry in catalog::all_entries() {
        println!(
            "{}\t{}{}",
            entry.name,
            entry.summary,
            if entry.experimental {
                " (experimental)"
            } else {
                ""
            }
        );
    }
    Ok(0)
}

fn cmd_catalog_show(name: &str) -> Result<i32> {
    let entry = catalog::get_example(name)?;
    let cfg = SystemConfig::from_catalog(&entry);
    print!("{}", emit_config(&cfg)?);
    Ok(0)
}

fn cmd_dendrite_verify(depth: usize, budget: u64) -> Result<i32> {
    let records = dendrite::verify(depth, budget)?;
    let mut all_pass = true;
    for r in &records {
        all_pass &= r.pass;
        println!(
            "{}\t{}\t{}\t{}",
            r.name,
            r.expected,
            r.observed,
            if r.pass { "pass" } else { "fail" }
        );
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_graph(path: &Path, depth: usize, remove: Option<&str>, budget: u64) -> Result<i32> {
    let cfg = load_config(path)?;
    let ifs = cfg.build_ifs()?;
    let graph = dendrite::cell_graph_for(&ifs, depth, budget)?;
    println!("depth\t{}", graph.depth());
    println!("nodes\t{}", graph.node_count());
    println!("edges\t{}", graph.edge_count());
    println!("components\t{}", graph.component_count());
    println!("tree\t{}", if graph.is_tree() { "yes" } else { "no" });
    println!("touch_tol\t{:.3e}", graph.touch_tol());
    if let Some(text) = remove {
        let (x, y, r) = parse_disk(text)?;
        let report = graph.components_after_removal(Point2::new(x, y), r)?;
        println!("removed_cells\t{}", report.removed_cells);
        println!("remaining_cells\t{}", report.remaining_cells);
        println!("components_after_removal\t{}", report.components);
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32> {
    let (tol, budget, seed) = (cli.tol, cli.budget, cli.seed);
    match cli.command {
        Command::Validate { config } => cmd_validate(&config, tol),
        Command::Curve { config, level, out } => {
            cmd_curve(&config, level, out.as_deref(), budget)
        }
        Command::Attract {
            config,
            mode,
            depth,
            samples,
            burn_in,
            out,
        } => cmd_attract(
            &config,
            mode,
            depth,
            samples,
            burn_in,
            out.as_deref(),
            budget,
            seed,
        ),
        Command::Param(cmd) => match cmd {
            ParamCommand::Eval { config, t, depth } => cmd_param_eval(&config, t, depth),
            ParamCommand::Holder {
                config,
                samples,
                depth,
            } => cmd_param_holder(&config, samples, depth, seed),
        },
        Command::Catalog(cmd) => match cmd {
            CatalogCommand::List => cmd_catalog_list(),
            CatalogCommand::Show { name } => cmd_catalog_show(&name),
        },
        Command::Dendrite(cmd) => match cmd {
            DendriteCommand::Verify { depth } => cmd_dendrite_verify(depth, budget),
        },
        Command::Graph {
            config,
            depth,
            remove,
        } => cmd_graph(&config, depth, remove.as_deref(), budget),
    }
}

/// Parses process arguments, runs the selected verb, and returns the exit
/// code for `std::process::exit`.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        // A downstream pipe closing early (e.g. `| head`) is not a failure
        // of ours; finish quietly like any other line-oriented tool.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}
