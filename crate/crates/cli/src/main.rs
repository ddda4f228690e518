use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jball_core::ballgeom::{
    convexity_check, extract_region, render_svg, starlikeness_check, topology_check, trace_boundary, Mode,
};
use jball_core::gallery::{self, SCHEMA};
use jball_core::metric::qh::{default_spacing, qh_distance};
use jball_core::{j_distance, AnnulusBounds, Domain, Error, JBall, Point, Radius};

#[derive(Parser)]
#[command(name = "jball", version, about = "Distance-ratio metric balls: distances, pictures and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two points.
    Dist {
        /// Domain spec: a JSON file or inline JSON.
        #[arg(long)]
        domain: String,
        #[arg(long, value_enum, default_value_t = Metric::J)]
        metric: Metric,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Lattice spacing for the quasihyperbolic metric.
        #[arg(long)]
        grid: Option<f64>,
    },
    /// Trace the boundary of a ball and write it as SVG.
    Render {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "M", visible_alias = "m")]
        m: f64,
        #[arg(long)]
        out: PathBuf,
        /// Raster cells across the outer annulus diameter.
        #[arg(long, default_value_t = 1024)]
        res: usize,
    },
    /// Test a ball for convexity, starlikeness or connectivity.
    Check {
        #[arg(value_enum)]
        property: Property,
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "M", visible_alias = "m")]
        m: f64,
        /// Star centre, defaults to x.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        /// Chords for convexity, rays for starlikeness.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a named scenario.
    Gallery {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Suite {
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    J,
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Convex,
    StrictConvex,
    Starlike,
    StrictStarlike,
    Topology,
}

/// Failure before any property was evaluated.
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Dist { domain, metric, x, y, grid } => {
            let g = load_domain(&domain)?;
            let (x, y) = (parse_point(&x)?, parse_point(&y)?);
            let d = match metric {
                Metric::J => j_distance(&g, &x, &y)?,
                Metric::K => {
                    let h = match grid {
                        Some(h) if h > 0.0 && h.is_finite() => h,
                        Some(h) => return Err(InputError(format!("bad grid spacing {h}"))),
                        None => default_spacing(&g, &x, &y)?,
                    };
                    qh_distance(&g, &x, &y, h)?
                }
            };
            println!("{}", significant(d, 12));
            Ok(true)
        }
        Command::Render { domain, x, m, out, res } => {
            let g = load_domain(&domain)?;
            let x = parse_point(&x)?;
            let m = parse_radius(m)?;
            let outer = outer_radius(&g, &x, m)?;
            let grid = extract_region(&g, &x, m, Some(2.0 * outer / res as f64))?;
            let loops = trace_boundary(&grid)?;
            write_output(&out, &render_svg(&grid, &loops, &[x.to_vec2()]))?;
            Ok(true)
        }
        Command::Check { property, domain, x, m, center, trials, seed, tol } => {
            let g = load_domain(&domain)?;
            let x = parse_point(&x)?;
            let m = parse_radius(m)?;
            let seed = seed_override(seed)?;
            let center = match center {
                Some(c) => parse_point(&c)?,
                None => x.clone(),
            };
            let report = match property {
                Property::Convex | Property::StrictConvex => {
                    let mode = if matches!(property, Property::Convex) { Mode::Nonstrict } else { Mode::Strict };
                    serde_json::to_value(convexity_check(&g, &x, m, mode, trials.unwrap_or(10_000), tol, seed)?)
                }
                Property::Starlike | Property::StrictStarlike => {
                    let mode = if matches!(property, Property::Starlike) { Mode::Nonstrict } else { Mode::Strict };
                    serde_json::to_value(starlikeness_check(&g, &x, m, &center, mode, trials.unwrap_or(4096), tol)?)
                }
                Property::Topology => {
                    let t = topology_check(&extract_region(&g, &x, m, None)?)?;
                    let mut v = serde_json::to_value(t).unwrap();
                    v["passed"] = json!(t.components == 1 && t.simply_connected);
                    Ok(v)
                }
            }
            .expect("reports serialize");
            let passed = report["passed"].as_bool().unwrap_or(false);
            println!("{}", with_schema(report));
            Ok(passed)
        }
        Command::Gallery { name, out } => {
            let scenario = gallery::by_name(&name).map_err(|_| {
                InputError(format!("unknown scenario {name}; expected one of {}", gallery::NAMES.join(", ")))
            })?;
            let report = scenario.run();
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match out {
                Some(path) => write_output(&path, &(text + "\n"))?,
                None => println!("{text}"),
            }
            Ok(report.passed)
        }
        Command::Suite { report } => {
            let mut results = Vec::new();
            for id in 1..=13 {
                let r = jball_core::suite::run_criterion(id);
                println!("{r}");
                results.push(r);
            }
            let passed = results.iter().all(|r| r.passed || !r.gated);
            if let Some(path) = report {
                let v = json!({ "schema": SCHEMA, "passed": passed, "criteria": results });
                write_output(&path, &(serde_json::to_string_pretty(&v).unwrap() + "\n"))?;
            }
            Ok(passed)
        }
    }
}

fn with_schema(report: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    if let Value::Object(fields) = report {
        out.extend(fields);
    }
    Value::Object(out)
}

fn load_domain(arg: &str) -> Result<Domain, InputError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| InputError(format!("cannot read {arg}: {e}")))?
    };
    Ok(Domain::from_json(&text)?)
}

fn parse_point(s: &str) -> Result<Point, InputError> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| InputError(format!("bad point {s:?}: {e}")))?;
    Ok(Point::new(coords)?)
}

fn parse_radius(m: f64) -> Result<Radius, InputError> {
    Ok(Radius::new(m)?)
}

fn seed_override(seed: u64) -> Result<u64, InputError> {
    match std::env::var("JBALL_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| InputError(format!("JBALL_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(seed),
    }
}

fn outer_radius(g: &Domain, x: &Point, m: Radius) -> Result<f64, InputError> {
    let AnnulusBounds { outer_radius, .. } = JBall::new(g, x, m)?.bounds();
    Ok(outer_radius)
}

fn write_output(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))
}

/// `v` to `digits` significant digits in fixed notation where practical.
fn significant(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let magnitude = v.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // Rounding can carry into a new leading digit.
        let carried = s.trim_start_matches('-').split('.').next().unwrap().trim_start_matches('0').len();
        if decimals > 0 && carried as i32 > magnitude + 1 {
            return format!("{v:.*}", decimals - 1);
        }
        s
    } else {
        format!("{v:.*e}", digits - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn twelve_digits() {
        assert_eq!(significant(3f64.ln(), 12), "1.09861228867");
        assert_eq!(significant(0.0, 12), "0.00000000000");
        assert_eq!(significant(123.456, 12), "123.456000000");
        assert_eq!(significant(9.9999999999999, 12), "10.0000000000");
        assert_eq!(significant(f64::INFINITY, 12), "inf");
    }
}
