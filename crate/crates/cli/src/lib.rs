//! Command-line surface of the carpet analyzer.
//!
//! All numeric output is exact (`P/Q` fractions, never decimals except in
//! SVG coordinates), and every command prints in a stable order so outputs
//! can be golden-tested byte for byte.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Signed;
use num::Zero;

use carpetcut_core::decider::{self, DeciderConfig};
use carpetcut_core::fragility;
use carpetcut_core::gsc::{parse_rational, GscSpec, RationalPoint};
use carpetcut_core::hata;
use carpetcut_core::presets::{self, PresetId};

/// Environment variable overriding the decider's hard depth stop.
pub const MAX_DEPTH_ENV: &str = "CARPETCUT_MAX_DEPTH";

#[derive(Parser)]
#[command(
    name = "carpetcut",
    version,
    about = "Exact cut-point analysis of generalized Sierpinski carpets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a specification and print its canonical summary.
    Validate { spec: String },
    /// Connectivity, fragility, and the cut-point verdict in one report.
    Analyze {
        spec: String,
        /// Cap on explicit graph vertices used by fallbacks.
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// Build the level-n graph and print its statistics.
    Hata {
        spec: String,
        #[arg(long)]
        level: u32,
        /// Write the graph as DOT text to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the graph as `u v` edge lines to this path.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// The tail statistic of the level-n graph.
    Chi {
        spec: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// Cut vertices of the level-n graph with their essential flags.
    Essential {
        spec: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// Decide whether the carpet has cut points.
    Decide {
        spec: String,
        #[arg(long)]
        max_vertices: Option<u64>,
        /// Also print the certificate behind a positive verdict.
        #[arg(long)]
        evidence: bool,
    },
    /// Test one rational point for being a cut point.
    IsCutPoint {
        spec: String,
        /// x coordinate as P/Q.
        #[arg(long)]
        x: String,
        /// y coordinate as P/Q.
        #[arg(long)]
        y: String,
    },
    /// Render the level-n squares as SVG.
    Render {
        spec: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: PathBuf,
        /// Mark a point, given as `x,y` with rational coordinates. May repeat.
        #[arg(long = "mark")]
        marks: Vec<String>,
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// List the built-in presets.
    Presets {
        #[arg(long)]
        list: bool,
    },
}

/// Runs the CLI against the given arguments, writing normal output to
/// `out`; errors go to stderr. Returns the process exit code: 0 on
/// success, 1 on domain errors, 2 on usage errors.
pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn load_spec(arg: &str) -> Result<GscSpec, String> {
    if let Some(name) = arg.strip_prefix("preset:") {
        let id: PresetId = name.parse().map_err(|e: presets::PresetError| e.to_string())?;
        presets::resolve(&id).map_err(|e| e.to_string())
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
        GscSpec::from_json_str(&text).map_err(|e| e.to_string())
    }
}

fn decider_config(max_vertices: Option<u64>) -> DeciderConfig {
    let mut config = DeciderConfig::default();
    if let Some(cap) = max_vertices {
        config.max_graph_vertices = cap;
    }
    if let Ok(depth) = std::env::var(MAX_DEPTH_ENV) {
        if let Ok(depth) = depth.parse::<usize>() {
            config.max_depth = depth;
        }
    }
    config
}

fn graph_cap(max_vertices: Option<u64>) -> u64 {
    max_vertices.unwrap_or(hata::DEFAULT_VERTEX_CAP)
}

fn dispatch<W: Write>(command: Command, out: &mut W) -> Result<(), String> {
    let write_err = |e: std::io::Error| e.to_string();
    match command {
        Command::Validate { spec } => {
            let spec = load_spec(&spec)?;
            writeln!(out, "ok n={} digits={}", spec.n_base(), spec.digit_count())
                .map_err(write_err)?;
        }
        Command::Analyze { spec, max_vertices } => {
            let spec = load_spec(&spec)?;
            writeln!(out, "n={} digits={}", spec.n_base(), spec.digit_count())
                .map_err(write_err)?;
            let connected = fragility::is_connected_gsc(&spec);
            writeln!(out, "connected={connected}").map_err(write_err)?;
            if connected {
                let witness = fragility::fragility_witness(&spec).map_err(|e| e.to_string())?;
                writeln!(out, "fragile={}", witness.is_some()).map_err(write_err)?;
            }
            let config = decider_config(max_vertices);
            let verdict =
                decider::decide_cut_points_with(&spec, &config).map_err(|e| e.to_string())?;
            writeln!(out, "verdict={verdict}").map_err(write_err)?;
        }
        Command::Hata {
            spec,
            level,
            dot,
            edges,
            max_vertices,
        } => {
            let spec = load_spec(&spec)?;
            let graph = hata::build_hata_capped(&spec, level, graph_cap(max_vertices))
                .map_err(|e| e.to_string())?;
            let analysis = graph.cut_vertex_analysis();
            writeln!(
                out,
                "vertices={} edges={} connected={} cut_vertices={}",
                graph.vertex_count(),
                graph.edge_count(),
                graph.is_connected(),
                analysis.cut_vertices().len()
            )
            .map_err(write_err)?;
            if let Some(path) = dot {
                std::fs::write(&path, graph.to_dot())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if let Some(path) = edges {
                std::fs::write(&path, graph.to_edge_list())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
        }
        Command::Chi {
            spec,
            level,
            max_vertices,
        } => {
            let spec = load_spec(&spec)?;
            let graph = hata::build_hata_capped(&spec, level, graph_cap(max_vertices))
                .map_err(|e| e.to_string())?;
            let chi = hata::chi(&graph).map_err(|e| e.to_string())?;
            writeln!(out, "chi={chi}").map_err(write_err)?;
        }
        Command::Essential {
            spec,
            level,
            max_vertices,
        } => {
            let spec = load_spec(&spec)?;
            let graph = hata::build_hata_capped(&spec, level, graph_cap(max_vertices))
                .map_err(|e| e.to_string())?;
            let reports =
                hata::essential_cut_vertices_of(&spec, &graph).map_err(|e| e.to_string())?;
            for report in reports {
                let sizes = report
                    .component_sizes
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                writeln!(
                    out,
                    "cut_vertex={} components={} essential={}",
                    report.vertex, sizes, report.essential
                )
                .map_err(write_err)?;
            }
        }
        Command::Decide {
            spec,
            max_vertices,
            evidence,
        } => {
            let spec = load_spec(&spec)?;
            let config = decider_config(max_vertices);
            let verdict =
                decider::decide_cut_points_with(&spec, &config).map_err(|e| e.to_string())?;
            writeln!(out, "{verdict}").map_err(write_err)?;
            if evidence {
                if let decider::Verdict::HasCutPoints { certificate, .. } = &verdict {
                    let join = |words: &[carpetcut_core::CellWord]| {
                        words
                            .iter()
                            .map(|w| w.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    writeln!(out, "certificate word={}", certificate.word).map_err(write_err)?;
                    writeln!(out, "lambda={}", join(&certificate.lambda)).map_err(write_err)?;
                    writeln!(out, "lambda_prime={}", join(&certificate.lambda_prime))
                        .map_err(write_err)?;
                }
            }
        }
        Command::IsCutPoint { spec, x, y } => {
            let spec = load_spec(&spec)?;
            let x = parse_rational(&x).ok_or_else(|| format!("bad rational {x:?}"))?;
            let y = parse_rational(&y).ok_or_else(|| format!("bad rational {y:?}"))?;
            let point = RationalPoint::new(x, y)
                .ok_or_else(|| "point must lie in the unit square".to_string())?;
            let answer = decider::is_cut_point(&spec, &point).map_err(|e| e.to_string())?;
            writeln!(out, "{answer}").map_err(write_err)?;
        }
        Command::Render {
            spec,
            level,
            out: path,
            marks,
            max_vertices,
        } => {
            let spec = load_spec(&spec)?;
            let mut points = Vec::new();
            for mark in &marks {
                let (x, y) = mark
                    .split_once(',')
                    .ok_or_else(|| format!("bad mark {mark:?}, expected x,y"))?;
                let x = parse_rational(x).ok_or_else(|| format!("bad rational {x:?}"))?;
                let y = parse_rational(y).ok_or_else(|| format!("bad rational {y:?}"))?;
                points.push(
                    RationalPoint::new(x, y)
                        .ok_or_else(|| "mark must lie in the unit square".to_string())?,
                );
            }
            let svg = render_svg_capped(&spec, level, &points, graph_cap(max_vertices))
                .map_err(|e| e.to_string())?;
            std::fs::write(&path, svg)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        Command::Presets { list: _ } => {
            for line in presets::listing() {
                writeln!(out, "{line}").map_err(write_err)?;
            }
        }
    }
    Ok(())
}

/// Deterministic SVG text: one unit square per level-n cell in canonical
/// order, plus one circle per mark.
pub fn render_svg(
    spec: &GscSpec,
    level: u32,
    marks: &[RationalPoint],
) -> Result<String, hata::HataError> {
    render_svg_capped(spec, level, marks, hata::DEFAULT_VERTEX_CAP)
}

/// As [`render_svg`] under an explicit cell cap.
pub fn render_svg_capped(
    spec: &GscSpec,
    level: u32,
    marks: &[RationalPoint],
    cap: u64,
) -> Result<String, hata::HataError> {
    let cells = spec.cell_count(level).unwrap_or(u128::MAX);
    let side_fits = (spec.n_base() as u128)
        .checked_pow(level)
        .is_some_and(|side| side <= u64::MAX as u128);
    if cells > cap as u128 || !side_fits {
        return Err(hata::HataError::LevelTooLarge {
            level,
            cells,
            cap,
        });
    }
    let side = (spec.n_base() as u64).pow(level);
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {side} {side}\" \
         shape-rendering=\"crispEdges\">"
    )
    .unwrap();
    writeln!(svg, "<rect width=\"{side}\" height=\"{side}\" fill=\"#ffffff\"/>").unwrap();
    // canonical order: iterate words with the first letter most significant
    let digit_count = spec.digit_count();
    let total = cells as usize;
    for code in 0..total {
        let mut x: u64 = 0;
        let mut y: u64 = 0;
        let mut c = code;
        let mut stack = [0usize; 64];
        for slot in stack.iter_mut().take(level as usize) {
            *slot = c % digit_count;
            c /= digit_count;
        }
        for k in (0..level as usize).rev() {
            let d = spec.digits()[stack[k]];
            x = x * spec.n_base() as u64 + d.x as u64;
            y = y * spec.n_base() as u64 + d.y as u64;
        }
        let sy = side - 1 - y;
        writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{sy}\" width=\"1\" height=\"1\" fill=\"#1f4e79\"/>"
        )
        .unwrap();
    }
    let scale = BigRational::from_integer(BigInt::from(side));
    let radius = &scale / BigRational::from_integer(BigInt::from(40));
    for mark in marks {
        let cx = mark.x() * &scale;
        let cy = &scale - mark.y() * &scale;
        writeln!(
            svg,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#d0342c\"/>",
            decimal_string(&cx, 6),
            decimal_string(&cy, 6),
            decimal_string(&radius, 6)
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Truncated decimal rendering of a rational through exact integer
/// division; never goes through floating point.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    if frac.is_zero() {
        return format!("{sign}{whole}");
    }
    let frac_str = format!("{:0width$}", frac, width = digits as usize);
    let trimmed = frac_str.trim_end_matches('0');
    format!("{sign}{whole}.{trimmed}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let argv: Vec<String> = std::iter::once("carpetcut".to_string())
            .chain(args.iter().map(|s| s.to_string()))
            .collect();
        let mut buf = Vec::new();
        let code = run(&argv, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn decimal_strings() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(decimal_string(&r, 6), "0.5");
        let t = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(decimal_string(&t, 6), "0.333333");
        assert_eq!(decimal_string(&BigRational::zero(), 6), "0");
    }

    #[test]
    fn validate_preset() {
        let (code, out) = run_capture(&["validate", "preset:sierpinski"]);
        assert_eq!(code, 0);
        assert_eq!(out, "ok n=3 digits=8\n");
    }

    #[test]
    fn unknown_preset_is_a_domain_error() {
        let (code, _) = run_capture(&["validate", "preset:nosuch"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_error_exit_code() {
        let (code, _) = run_capture(&["decide"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn decide_examples() {
        let (code, out) = run_capture(&["decide", "preset:sierpinski"]);
        assert_eq!(code, 0);
        assert_eq!(out, "NoCutPoints level=2\n");

        let (code, out) = run_capture(&["decide", "preset:goodcp"]);
        assert_eq!(code, 0);
        assert_eq!(out, "HasCutPoints omega=(1,0) point=1/2,0\n");
    }

    #[test]
    fn is_cut_point_example() {
        let (code, out) = run_capture(&[
            "is-cut-point",
            "preset:oddcuts:3",
            "--x",
            "1/3",
            "--y",
            "1/2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "true\n");
    }

    #[test]
    fn render_is_deterministic() {
        let spec = presets::resolve(&PresetId::Sierpinski).unwrap();
        let mark = RationalPoint::from_ints(1, 2, 0, 1).unwrap();
        let a = render_svg(&spec, 1, std::slice::from_ref(&mark)).unwrap();
        let b = render_svg(&spec, 1, &[mark]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<rect").count(), 9); // 8 cells + background
        assert_eq!(a.matches("<circle").count(), 1);
    }

    #[test]
    fn render_respects_the_cap() {
        let spec = presets::resolve(&PresetId::Sierpinski).unwrap();
        assert!(matches!(
            render_svg_capped(&spec, 4, &[], 100),
            Err(hata::HataError::LevelTooLarge { .. })
        ));
    }

    #[test]
    fn oddcuts_render_counts() {
        let spec = presets::resolve(&PresetId::OddCuts(3)).unwrap();
        let marks = [
            RationalPoint::from_ints(1, 3, 1, 2).unwrap(),
            RationalPoint::from_ints(1, 2, 1, 2).unwrap(),
            RationalPoint::from_ints(2, 3, 1, 2).unwrap(),
        ];
        let svg = render_svg(&spec, 2, &marks).unwrap();
        assert_eq!(svg.matches("<rect").count(), 24 * 24 + 1);
        assert_eq!(svg.matches("<circle").count(), 3);
    }
}
