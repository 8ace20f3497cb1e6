use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use cubeknot::knot_id::{canonical_kmax_grid, canonical_kmin_grid, jones, kmax_cube};
use cubeknot::legendrian::{front_invariants, Hand};
use cubeknot::lifting::{
    detect_type_configurations, find_heights, lift_search_count, lift_with_stabilizations,
    build_lift,
};
use cubeknot::render::{cube_ascii, cube_svg, grid_ascii, grid_svg};
use cubeknot::search::{run_experiment, ExperimentOptions};
use cubeknot::{parse_cube, parse_grid, CubeDiagram, GridDiagram, LegendrianClassSpec};

/// Grid diagrams, cube diagrams and Legendrian cube numbers.
#[derive(Parser)]
#[command(name = "cubeknot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a .grid or .cube file (`-` reads stdin)
    Validate { file: String },
    /// Writhe, corner census and front invariants of a grid
    Invariants {
        grid: String,
        #[arg(long, default_value = "left")]
        hand: Hand,
        #[arg(long)]
        json: bool,
    },
    /// Search for a cube diagram lifting a grid
    Lift {
        grid: String,
        /// print the number of valid height assignments instead
        #[arg(long)]
        count: bool,
        /// stabilize the grid as needed so that a lift always exists
        #[arg(long, conflicts_with = "count")]
        stabilize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report Type 1 and Type 2 obstructions
    Detect {
        grid: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a canonical grid or cube for the left-hand (p,2) torus knot
    Construct {
        what: Construct,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jones polynomial in q = t^(1/2)
    Jones { grid: String },
    /// Enumerate every grid of a Legendrian class and try to lift each
    Experiment {
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        rot: i64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
        /// checkpoint file; an existing one is resumed
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// X permutations per checkpointed batch
        #[arg(long, default_value_t = 64)]
        batch: u64,
    },
    /// Export ASCII art or SVG
    Render {
        file: String,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construct {
    KmaxGrid,
    KminGrid,
    KmaxCube,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

/// Exit statuses: 0 success, 1 validation failure or negative result,
/// 2 usage or i/o error.
enum Status {
    Ok,
    Negative,
}

enum Diagram {
    Grid(GridDiagram),
    Cube(CubeDiagram),
}

struct Input {
    name: String,
    text: String,
}

fn read_input(path: &str) -> anyhow::Result<Input> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    Ok(Input { name: path.to_string(), text })
}

fn is_cube(input: &Input) -> bool {
    match Path::new(&input.name).extension().and_then(|e| e.to_str()) {
        Some("cube") => true,
        Some("grid") => false,
        _ => input
            .text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.starts_with("cube")),
    }
}

/// Parse failures are reported as validation failures, not usage errors.
fn load_grid(path: &str) -> anyhow::Result<Result<GridDiagram, String>> {
    let input = read_input(path)?;
    Ok(parse_grid(&input.text).map_err(|e| format!("{}: {e}", input.name)))
}

fn load(path: &str) -> anyhow::Result<Result<Diagram, String>> {
    let input = read_input(path)?;
    Ok(if is_cube(&input) {
        parse_cube(&input.text).map(Diagram::Cube).map_err(|e| format!("{}: {e}", input.name))
    } else {
        parse_grid(&input.text).map(Diagram::Grid).map_err(|e| format!("{}: {e}", input.name))
    })
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

macro_rules! or_negative {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(msg) => {
                eprintln!("{msg}");
                return Ok(Status::Negative);
            }
        }
    };
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Validate { file } => match or_negative!(load(&file)?) {
            Diagram::Grid(g) => {
                if g.is_knot() {
                    println!("ok: grid of size {}", g.size());
                } else {
                    println!("ok: grid of size {} ({} components)", g.size(), g.component_count());
                }
                Ok(Status::Ok)
            }
            Diagram::Cube(c) => {
                let report = c.validate();
                if report.is_ok() {
                    println!("ok: cube of size {}", c.size());
                    Ok(Status::Ok)
                } else {
                    for v in &report.violations {
                        println!("{v}");
                    }
                    Ok(Status::Negative)
                }
            }
        },
        Command::Invariants { grid, hand, json } => {
            let g = or_negative!(load_grid(&grid)?);
            let f = or_negative!(front_invariants(&g, hand).map_err(|e| e.to_string()));
            let census = g.corner_census();
            if json {
                let value = serde_json::json!({
                    "writhe": g.writhe()?,
                    "census": census,
                    "front": f,
                });
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                println!("hand={hand}");
                println!("writhe={}", g.writhe()?);
                println!(
                    "census X: NE={} NW={} SE={} SW={}  O: NE={} NW={} SE={} SW={}",
                    census.x_ne, census.x_nw, census.x_se, census.x_sw,
                    census.o_ne, census.o_nw, census.o_se, census.o_sw
                );
                println!("D={} U={}", f.down_cusps, f.up_cusps);
                println!("tb={} rot={}", f.tb, f.rot);
                println!("maxima={} minima={}", f.maxima, f.minima);
            }
            Ok(Status::Ok)
        }
        Command::Lift { grid, count, stabilize, out } => {
            let g = or_negative!(load_grid(&grid)?);
            if !g.is_knot() {
                eprintln!("{grid}: grid has {} components", g.component_count());
                return Ok(Status::Negative);
            }
            if count {
                let k = lift_search_count(&g);
                println!("{k}");
                return Ok(if k > 0 { Status::Ok } else { Status::Negative });
            }
            let cube = if stabilize {
                lift_with_stabilizations(&g)?
            } else {
                match find_heights(&g) {
                    Some(a) => build_lift(&g, a.heights()),
                    None => {
                        println!("no lift");
                        return Ok(Status::Negative);
                    }
                }
            };
            emit(&cube.to_text(), out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Detect { grid, json } => {
            let g = or_negative!(load_grid(&grid)?);
            let matches = detect_type_configurations(&g);
            if json {
                println!("{}", serde_json::to_string_pretty(&matches)?);
            } else if matches.is_empty() {
                println!("no configurations");
            } else {
                for m in &matches {
                    println!(
                        "type {} bend {} between bends {} (above) and {} (below), O corner ({}, {}), region cols {}..={} rows {}..={}",
                        m.config, m.bend, m.upper, m.lower, m.o_corner.0, m.o_corner.1,
                        m.region.cols.0, m.region.cols.1, m.region.rows.0, m.region.rows.1
                    );
                }
            }
            Ok(if matches.is_empty() { Status::Ok } else { Status::Negative })
        }
        Command::Construct { what, p, out } => {
            let text = match what {
                Construct::KmaxGrid => canonical_kmax_grid(p)?.to_text(),
                Construct::KminGrid => canonical_kmin_grid(p)?.to_text(),
                Construct::KmaxCube => kmax_cube(p)?.to_text(),
            };
            emit(&text, out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Jones { grid } => {
            let g = or_negative!(load_grid(&grid)?);
            let j = or_negative!(jones(&g).map_err(|e| e.to_string()));
            println!("{j}");
            Ok(Status::Ok)
        }
        Command::Experiment { p, rot, size, out, resume, jobs, batch } => {
            let spec = LegendrianClassSpec::new(p, rot)
                .with_context(|| format!("no Legendrian class with p={p}, rot={rot}"))?;
            let opts = ExperimentOptions {
                jobs,
                resume: resume.is_some(),
                checkpoint: resume,
                batch,
                stop_after: None,
            };
            let report = run_experiment(&spec, size, &out, &opts)?;
            println!("{}", serde_json::to_string(&report)?);
            println!("{}", report.bound_conclusion);
            Ok(Status::Ok)
        }
        Command::Render { file, format, out } => {
            let text = match (or_negative!(load(&file)?), format) {
                (Diagram::Grid(g), Format::Ascii) => grid_ascii(&g),
                (Diagram::Grid(g), Format::Svg) => grid_svg(&g),
                (Diagram::Cube(c), Format::Ascii) => cube_ascii(&c),
                (Diagram::Cube(c), Format::Svg) => cube_svg(&c),
            };
            emit(&text, Some(&out))?;
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
