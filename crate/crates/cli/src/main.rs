//! Command-line front end: build the polyhedra, check and export meshes, run
//! the self-intersection test, sample the flex and report dihedral rates.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a check ran and failed.

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flexipoly::constructions::{
    build_modified_steffen, build_p, build_steffen, build_tetrahedron_t, steffen_stages_default, STEFFEN_HINGE,
};
use flexipoly::exactnum::MAX_BITS_ENV;
use flexipoly::flex::{all_edges_rate_report, flex_time, lengths_preserved, parse_parameter, FlexConfig, FlexTarget};
use flexipoly::geometry::squared_distance;
use flexipoly::intersect::{brute_force_contact, determinant_signs, self_intersection_report, Outcome};
use flexipoly::mesh::{from_json, to_json, to_obj, Mesh, DEFAULT_OBJ_DIGITS};
use num_rational::BigRational;
use serde_json::json;

#[derive(Parser)]
#[command(name = "flexipoly", version, about = "Exact constructions and checks for flexible polyhedra")]
struct Cli {
    /// Decimal digits for displayed numbers (truncated toward zero).
    #[arg(long, global = true, default_value_t = 4)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    /// The tetrahedron with |T1T4| = 17.
    #[value(name = "T")]
    T,
    /// The Bricard octahedron from Steffen's construction.
    #[value(name = "bricard")]
    Bricard,
    /// Steffen's polyhedron.
    #[value(name = "S")]
    S,
    /// The modified polyhedron with |T1T4|^2 = 334.
    #[value(name = "M")]
    M,
    /// The four-fold assembly of M.
    #[value(name = "P")]
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    #[value(name = "M")]
    M,
    #[value(name = "P")]
    P,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polyhedron and print or export it.
    Build {
        shape: Shape,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
        /// Print exact coordinate expressions.
        #[arg(long)]
        exact: bool,
    },
    /// Validate the combinatorics of a mesh file.
    Check { file: PathBuf },
    /// Test every face against every edge.
    Selfintersect {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Re-examine pairs needing study with the direct contact test.
        #[arg(long)]
        study_detail: bool,
    },
    /// Sample the flex at a rational parameter.
    Flex {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Number of frames from `u` to `umax`, both included.
        #[arg(long, requires = "umax")]
        frames: Option<usize>,
        #[arg(long, allow_hyphen_values = true, requires = "frames")]
        umax: Option<String>,
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// First-order dihedral rates at every edge of the assembly.
    Rates {
        #[arg(long)]
        json: bool,
    },
    /// Recompute every published checkpoint.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
}

/// Failure of a command: usage/I/O (exit 1) or a check that ran (exit 2).
enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    // clap exits 2 on usage errors; here 2 is reserved for failed checks
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var(MAX_BITS_ENV) {
        if v.trim().parse::<u32>().is_err() {
            eprintln!("error: {MAX_BITS_ENV} must be a positive integer, got {v:?}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let digits = cli.digits;
    match cli.command {
        Command::Build { shape, out, obj, exact } => build(shape, out, obj, exact, digits),
        Command::Check { file } => check(&file),
        Command::Selfintersect { file, json, study_detail } => selfintersect(&file, json, study_detail),
        Command::Flex { target, u, frames, umax, obj } => flex(target, &u, frames, umax.as_deref(), obj, digits),
        Command::Rates { json } => rates(json, digits),
        Command::VerifyPaper { json } => verify::run(json),
    }
}

fn shape_name(shape: Shape) -> &'static str {
    match shape {
        Shape::T => "T",
        Shape::Bricard => "bricard",
        Shape::S => "S",
        Shape::M => "M",
        Shape::P => "P",
    }
}

fn build_shape(shape: Shape) -> Result<Mesh, Failure> {
    Ok(match shape {
        Shape::T => build_tetrahedron_t(STEFFEN_HINGE)?,
        Shape::Bricard => steffen_stages_default()?.bricard,
        Shape::S => build_steffen()?,
        Shape::M => build_modified_steffen()?,
        Shape::P => build_p()?,
    })
}

fn write_obj(dir: &Path, stem: &str, m: &Mesh) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.obj"));
    fs::write(&path, to_obj(m, DEFAULT_OBJ_DIGITS))?;
    Ok(path)
}

fn print_mesh(m: &Mesh, exact: bool, digits: usize) {
    let r = m.validate();
    out!(
        "{} vertices, {} edges, {} faces, euler characteristic {}",
        r.vertices,
        r.edges,
        r.faces,
        r.euler_characteristic
    );
    for v in m.vertices() {
        if exact {
            out!("{}: ({}, {}, {})", v.name, v.position.x, v.position.y, v.position.z);
        } else {
            let [x, y, z] = v.position.to_decimal(digits);
            out!("{}: ({x}, {y}, {z})", v.name);
        }
    }
}

fn build(shape: Shape, out: Option<PathBuf>, obj: Option<PathBuf>, exact: bool, digits: usize) -> CmdResult {
    let m = build_shape(shape)?;
    let mut written = Vec::new();
    if let Some(path) = out {
        fs::write(&path, to_json(&m)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    if let Some(dir) = obj {
        written.push(write_obj(&dir, shape_name(shape), &m)?);
    }
    print_mesh(&m, exact, digits);
    for p in written {
        out!("wrote {}", p.display());
    }
    Ok(())
}

fn load(file: &Path) -> Result<Mesh, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    Ok(from_json(&text)?)
}

fn check(file: &Path) -> CmdResult {
    let m = load(file)?;
    let r = m.validate();
    out!("{}", serde_json::to_string_pretty(&r)?);
    if r.closed && r.bad_links.is_empty() && r.flagged_edges.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check("not a closed 2-manifold".into()))
    }
}

fn selfintersect(file: &Path, as_json: bool, study_detail: bool) -> CmdResult {
    let m = load(file)?;
    let r = self_intersection_report(&m);
    let studies: Vec<_> = r.findings.iter().filter(|v| matches!(v.outcome, Outcome::NeedsStudy(_))).collect();
    let detail: Vec<serde_json::Value> = if study_detail {
        studies
            .iter()
            .map(|v| {
                let f = m.faces()[v.face];
                let e = m.edges()[v.edge];
                let tri = [m.position(f[0]), m.position(f[1]), m.position(f[2])];
                let seg = [m.position(e[0]), m.position(e[1])];
                json!({
                    "face": m.face_names(&f),
                    "edge": m.edge_names(&e),
                    "outcome": format!("{:?}", v.outcome),
                    "determinant_signs": determinant_signs(tri, seg),
                    "contact": brute_force_contact(tri, seg),
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    if as_json {
        let mut doc = r.to_json(&m);
        if study_detail {
            doc["study_detail"] = json!(detail);
        }
        out!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        out!("{} intersections, {} study cases, {} pairs", r.counts.intersects, r.counts.needs_study, r.total_pairs);
        for v in &r.findings {
            if v.outcome == Outcome::SkippedIncidentSide {
                continue;
            }
            let f = m.face_names(&m.faces()[v.face]);
            let e = m.edge_names(&m.edges()[v.edge]);
            out!("  face {} edge {}: {:?}", f.join(" "), e.join(" "), v.outcome);
        }
        for d in &detail {
            out!("  study {} / {}: signs {} contact {}", d["face"], d["edge"], d["determinant_signs"], d["contact"]);
        }
    }
    if r.is_free() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} intersections and {} pairs needing study",
            r.counts.intersects, r.counts.needs_study
        )))
    }
}

fn parameter(text: &str) -> Result<BigRational, Failure> {
    parse_parameter(text).ok_or_else(|| Failure::Usage(format!("bad rational parameter {text:?}, expected a/b")))
}

/// `n` evenly spaced parameters from `from` to `to`, both included.
fn frame_parameters(from: &BigRational, to: &BigRational, n: usize) -> Option<Vec<BigRational>> {
    if n < 2 {
        return None;
    }
    let steps = BigRational::from_integer((n as i64 - 1).into());
    Some((0..n).map(|i| from + (to - from) * BigRational::from_integer((i as i64).into()) / &steps).collect())
}

fn flex(
    target: Target,
    u: &str,
    frames: Option<usize>,
    umax: Option<&str>,
    obj: Option<PathBuf>,
    digits: usize,
) -> CmdResult {
    let u0 = parameter(u)?;
    let us: Vec<BigRational> = match (frames, umax) {
        (Some(n), Some(umax)) => {
            let umax = parameter(umax)?;
            frame_parameters(&u0, &umax, n).ok_or_else(|| Failure::Usage("--frames must be at least 2".into()))?
        }
        _ => vec![u0],
    };
    let t = match target {
        Target::M => FlexTarget::M,
        Target::P => FlexTarget::P,
    };
    let cfg = FlexConfig::new(t)?;
    let t1 = cfg.base.position_of("T1").expect("T1 is pinned").clone();
    let mut failures = Vec::new();
    for (i, u) in us.iter().enumerate() {
        let m = match cfg.flex_mesh(u) {
            Ok(m) => m,
            Err(e) => {
                out!("u = {u}: {e}");
                failures.push(format!("u = {u}: {e}"));
                continue;
            }
        };
        let bad = lengths_preserved(&cfg.base, &m);
        let c2 = m.position_of("C2").expect("driver");
        let [x, y, z] = c2.to_decimal(digits);
        out!(
            "u = {u} (t ~ {:.6}): C2 = ({x}, {y}, {z}), |C2 T1|^2 = {}, edge lengths {}",
            flex_time(u),
            squared_distance(c2, &t1).to_decimal(digits),
            if bad.is_empty() { "preserved".to_string() } else { format!("changed on {bad:?}") }
        );
        if !bad.is_empty() {
            failures.push(format!("u = {u}: lengths change"));
        }
        if let Some(dir) = &obj {
            let p = write_obj(dir, &format!("frame_{i:03}"), &m)?;
            out!("wrote {}", p.display());
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join("; ")))
    }
}

fn rates(as_json: bool, digits: usize) -> CmdResult {
    let cfg = FlexConfig::new(FlexTarget::P)?;
    let report = all_edges_rate_report(&cfg)?;
    let zero = report.iter().filter(|r| !r.is_nonzero()).count();
    if as_json {
        let rows: Vec<serde_json::Value> = report
            .iter()
            .map(|r| {
                json!({
                    "edge": r.edge,
                    "opposite": r.opposite,
                    "sign": r.sign,
                    "value": r.indicator.to_decimal(digits),
                    "status": if r.is_nonzero() { "NonzeroIndicator" } else { "ZeroIndicator" },
                })
            })
            .collect();
        out!("{}", serde_json::to_string_pretty(&json!({ "edges": rows, "zero_indicators": zero }))?);
    } else {
        out!("edge,opposite,sign,value");
        for r in &report {
            out!(
                "{}-{},{}-{},{},{}",
                r.edge[0],
                r.edge[1],
                r.opposite[0],
                r.opposite[1],
                r.sign,
                r.indicator.to_decimal(digits)
            );
        }
    }
    if zero == 0 {
        Ok(())
    } else {
        // a zero is inconclusive at first order rather than a refutation
        Err(Failure::Check(format!("{zero} edges have a zero first-order indicator")))
    }
}
