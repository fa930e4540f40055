//! Command-line front end for the epsb boundary engine.
//!
//! Subcommands:
//! - `gen`        emit a built-in set specification as JSON,
//! - `boundary`   extract the eps-neighbourhood boundary arcs (CSV/SVG),
//! - `analyze`    dump per-point analysis records (JSON),
//! - `classify`   run the full classification pipeline (JSON/CSV/SVG),
//! - `components` rasterize complement components (PGM + JSON summary),
//! - `verify`     run the invariant suite; exit 0 iff everything passes.
//!
//! Exit codes: 0 pass, 1 invariant failure, 2 usage/input error.
//! Outputs are deterministic: identical configuration gives byte-identical
//! JSON/CSV (no timestamps are emitted).

use clap::{Args, Parser, Subcommand, ValueEnum};
use epsb::analysis::{
    contributors, extremal_pairs, local_rep, mark_extremal, max_slope, outward_arc,
    tangent_estimate,
};
use epsb::arrangement::{disk_union_boundary, sample_boundary, BoundaryArcSet, total_turning};
use epsb::classify::{classify_boundary, verify_partition, Inventory, Label};
use epsb::geometry::Point2;
use epsb::setmodel::{
    finite_approximating_set, gen_fat_cantor, gen_jump_integral, gen_rectangle_example,
    SetSpec,
};
use epsb::topology::{complement_components_spec, padded_bbox, ComponentMap, SetOracle};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
enum CliError {
    /// Bad flags, bad input files, violated preconditions → exit 2.
    Usage(String),
    /// A verified invariant failed → exit 1.
    Invariant(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser)]
#[command(name = "epsb", about = "eps-neighbourhood boundary engine", version)]
struct Cli {
    /// Worker threads (overridden by the EPSB_THREADS env var).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a built-in set specification as JSON.
    Gen(GenArgs),
    /// Extract boundary arcs of the eps-neighbourhood.
    Boundary(RunArgs),
    /// Dump per-point analysis records.
    Analyze(RunArgs),
    /// Classify boundary points and report the label inventory.
    Classify(RunArgs),
    /// Rasterize complement components.
    Components(RunArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenName {
    /// Single point at the origin.
    Point,
    /// Points (-1, 0) and (1, 0).
    PointPair,
    /// The two horizontal edges of [2,3] x [0,1].
    Rectangle,
    /// Fat-Cantor cross-section (rows at y = 0 and y = 1).
    FatCantor,
    /// Jump-integral graph generator.
    JumpIntegral,
}

#[derive(Args)]
struct InputArgs {
    /// Path to a set-specification JSON file.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Built-in generator name.
    #[arg(long, value_enum)]
    gen: Option<GenName>,
    /// Recursion depth for --gen fat-cantor.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Number of terms for --gen jump-integral.
    #[arg(long, default_value_t = 12)]
    terms: usize,
}

impl InputArgs {
    fn load(&self, eps: f64) -> Result<SetSpec, CliError> {
        match (&self.input, self.gen) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                let spec: SetSpec = serde_json::from_str(&text)
                    .map_err(|e| usage(format!("invalid spec {}: {e}", path.display())))?;
                spec.validate().map_err(|e| usage(format!("invalid spec: {e}")))?;
                Ok(spec)
            }
            (None, Some(name)) => match name {
                GenName::Point => SetSpec::from_points("point", &[pt(0.0, 0.0)]),
                GenName::PointPair => {
                    SetSpec::from_points("point-pair", &[pt(-1.0, 0.0), pt(1.0, 0.0)])
                }
                GenName::Rectangle => Ok(gen_rectangle_example()),
                GenName::FatCantor => gen_fat_cantor(self.depth),
                GenName::JumpIntegral => gen_jump_integral(self.terms, eps),
            }
            .map_err(|e| usage(format!("generator failed: {e}"))),
            _ => Err(usage("exactly one of --input or --gen is required")),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Neighbourhood radius.
    #[arg(long)]
    eps: f64,
    /// Dyadic approximation level n (cell side 2^-n).
    #[arg(long)]
    level: u32,
    /// Arclength spacing of boundary samples.
    #[arg(long, default_value_t = 0.05)]
    spacing: f64,
    /// Raster cell size for component analysis (default eps/64).
    #[arg(long)]
    raster_h: Option<f64>,
    /// Output directory for artifact files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Artifact kinds to emit (default: json,csv,svg).
    #[arg(long, value_delimiter = ',')]
    emit: Vec<Emit>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Svg,
    Pgm,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Verify a previously written inventory JSON instead of running the
    /// pipeline.
    #[arg(long)]
    replay: Option<PathBuf>,
}

fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y).expect("finite coordinates")
}

impl RunArgs {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.eps > 0.0) {
            return Err(usage(format!("--eps must be positive, got {}", self.eps)));
        }
        if !(self.spacing > 0.0) {
            return Err(usage(format!("--spacing must be positive, got {}", self.spacing)));
        }
        Ok(())
    }

    fn wants(&self, e: Emit) -> bool {
        if self.emit.is_empty() {
            return matches!(e, Emit::Json | Emit::Csv | Emit::Svg);
        }
        self.emit.contains(&e)
    }

    fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn raster_h(&self) -> f64 {
        self.raster_h.unwrap_or(self.eps / 64.0)
    }
}

/// 17 significant digits: round-trip safe for f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn json_pretty<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value)
        .map_err(|e| usage(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

/// Minimal SVG writer. Geometry is emitted in mathematical coordinates
/// (y up); the single group transform `scale(1,-1)` flips into SVG screen
/// space, so the viewBox uses negated y.
struct Svg {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Svg {
    fn new() -> Self {
        Svg {
            body: String::new(),
            min: (f64::INFINITY, f64::INFINITY),
            max: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn grow(&mut self, x: f64, y: f64) {
        self.min.0 = self.min.0.min(x);
        self.min.1 = self.min.1.min(y);
        self.max.0 = self.max.0.max(x);
        self.max.1 = self.max.1.max(y);
    }

    fn polyline(&mut self, points: &[(f64, f64)], color: &str, width: f64) {
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            self.grow(x, y);
            let _ = write!(d, "{}{:.6},{:.6}", if i == 0 { "M" } else { " L" }, x, y);
        }
        let _ = writeln!(
            self.body,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"/>"
        );
    }

    fn dot(&mut self, x: f64, y: f64, r: f64, color: &str) {
        self.grow(x, y);
        let _ = writeln!(
            self.body,
            "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"{r}\" fill=\"{color}\"/>"
        );
    }

    fn finish(self) -> Vec<u8> {
        let pad = 0.05 * ((self.max.0 - self.min.0) + (self.max.1 - self.min.1)).max(1.0);
        let (x0, y0) = (self.min.0 - pad, self.min.1 - pad);
        let (w, h) = (
            self.max.0 - self.min.0 + 2.0 * pad,
            self.max.1 - self.min.1 + 2.0 * pad,
        );
        // y-up geometry flipped once here; viewBox y = -(top edge).
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <!-- geometry in y-up coordinates; single scale(1,-1) flip below -->\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n\
             <g transform=\"scale(1,-1)\">\n{}</g>\n</svg>\n",
            x0,
            -(y0 + h),
            w,
            h,
            self.body
        )
        .into_bytes()
    }
}

fn arc_points(arc: &epsb::geometry::CircularArc) -> Vec<(f64, f64)> {
    let span = arc.theta_end - arc.theta_start;
    let steps = ((span.abs() / 0.02).ceil() as usize).clamp(2, 720);
    (0..=steps)
        .map(|i| {
            let t = arc.theta_start + span * i as f64 / steps as f64;
            (
                arc.center.x + arc.radius * t.cos(),
                arc.center.y + arc.radius * t.sin(),
            )
        })
        .collect()
}

fn label_color(label: Label) -> &'static str {
    match label {
        Label::S0 => "#888888",
        Label::S1 => "#d62728",
        Label::S2 => "#1f77b4",
        Label::S3 => "#9467bd",
        Label::S4 => "#2ca02c",
        Label::S5 => "#17becf",
        Label::S6 => "#bcbd22",
        Label::S7 => "#e377c2",
        Label::S8 => "#ff7f0e",
        Label::Unresolved => "#000000",
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn build_boundary(spec: &SetSpec, args: &RunArgs) -> Result<BoundaryArcSet, CliError> {
    let approx = finite_approximating_set(spec, args.level, args.eps)
        .map_err(|e| usage(format!("{e}")))?;
    let mut bas = disk_union_boundary(&approx.points, args.eps)
        .map_err(|e| usage(format!("{e}")))?;
    bas.level = args.level;
    Ok(bas)
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let input = InputArgs {
        input: None,
        gen: Some(args.which),
        depth: args.depth,
        terms: args.terms,
    };
    let spec = input.load(args.eps)?;
    let bytes = json_pretty(&spec)?;
    match &args.out {
        Some(path) => write_file(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(())
}

#[derive(Args)]
struct GenArgs {
    /// Generator name.
    #[arg(long = "gen", value_enum)]
    which: GenName,
    /// Neighbourhood radius (used by eps-dependent generators).
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Recursion depth for fat-cantor.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Number of terms for jump-integral.
    #[arg(long, default_value_t = 12)]
    terms: usize,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_boundary(args: &RunArgs) -> Result<(), CliError> {
    args.validate()?;
    let spec = args.input.load(args.eps)?;
    let bas = build_boundary(&spec, args)?;

    if args.wants(Emit::Csv) {
        let mut csv = String::from("arc_id,center_x,center_y,radius,theta_start,theta_end\n");
        for (i, a) in bas.arcs.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{i},{},{},{},{},{}",
                fmt17(a.center.x),
                fmt17(a.center.y),
                fmt17(a.radius),
                fmt17(a.theta_start),
                fmt17(a.theta_end)
            );
        }
        write_file(&args.out("arcs.csv"), csv.as_bytes())?;
        let mut vcsv = String::from("vertex_id,x,y\n");
        for (i, v) in bas.vertices.iter().enumerate() {
            let _ = writeln!(vcsv, "{i},{},{}", fmt17(v.x), fmt17(v.y));
        }
        write_file(&args.out("vertices.csv"), vcsv.as_bytes())?;
    }
    if args.wants(Emit::Json) {
        write_file(&args.out("boundary.json"), &json_pretty(&bas)?)?;
    }
    if args.wants(Emit::Svg) {
        let mut svg = Svg::new();
        for a in &bas.arcs {
            svg.polyline(&arc_points(a), "#1f77b4", 0.01);
        }
        for v in &bas.vertices {
            svg.dot(v.x, v.y, 0.02, "#d62728");
        }
        write_file(&args.out("boundary.svg"), &svg.finish())?;
    }
    println!("arcs: {}", bas.arcs.len());
    println!("vertices: {}", bas.vertices.len());
    Ok(())
}

#[derive(serde::Serialize)]
struct AnalysisRecord {
    point: Point2,
    distance_multiplicity: usize,
    contributors: Vec<Point2>,
    arc_kind: String,
    arc_endpoints: (f64, f64),
    extremal_pairs: Vec<(Point2, Point2)>,
    f_samples: Vec<Vec<(f64, Option<f64>)>>,
}

fn cmd_analyze(args: &RunArgs) -> Result<(), CliError> {
    args.validate()?;
    let spec = args.input.load(args.eps)?;
    let bas = build_boundary(&spec, args)?;
    let samples = sample_boundary(&bas, args.spacing).map_err(|e| usage(format!("{e}")))?;
    let cell = 2f64.powi(-(args.level as i32));
    let tol_d = cell * std::f64::consts::SQRT_2;

    let mut records = Vec::new();
    for s in &samples {
        let Ok(mut cs) = contributors(&spec, &s.position, args.eps, tol_d) else {
            continue;
        };
        let Ok(oa) = outward_arc(&s.position, &cs) else { continue };
        mark_extremal(&mut cs, &oa);
        let pairs = extremal_pairs(&s.position, &cs, &oa);
        let f_samples = pairs
            .iter()
            .map(|pair| {
                local_rep(&spec, &s.position, pair, args.eps, args.level, 129)
                    .map(|rep| rep.samples)
                    .unwrap_or_default()
            })
            .collect();
        records.push(AnalysisRecord {
            point: s.position,
            distance_multiplicity: cs.members.len(),
            contributors: cs.members.clone(),
            arc_kind: format!("{:?}", oa.arc.kind),
            arc_endpoints: (oa.arc.a.angle(), oa.arc.b.angle()),
            extremal_pairs: pairs.iter().map(|p| {
                let xi_tip = pt(
                    s.position.x + p.xi.ux * args.eps,
                    s.position.y + p.xi.uy * args.eps,
                );
                (xi_tip, p.y)
            }).collect(),
            f_samples,
        });
    }
    write_file(&args.out("analysis.json"), &json_pretty(&records)?)?;
    println!("records: {}", records.len());
    Ok(())
}

fn cmd_classify(args: &RunArgs) -> Result<(), CliError> {
    args.validate()?;
    let spec = args.input.load(args.eps)?;
    let inv = classify_boundary(&spec, args.eps, args.level, args.spacing)
        .map_err(|e| usage(format!("{e}")))?;

    if args.wants(Emit::Json) {
        write_file(&args.out("inventory.json"), &json_pretty(&inv)?)?;
    }
    if args.wants(Emit::Csv) {
        let mut csv = String::from("label,count\n");
        for label in Label::ALL {
            let _ = writeln!(csv, "{label},{}", inv.count(label));
        }
        write_file(&args.out("counts.csv"), csv.as_bytes())?;
    }
    if args.wants(Emit::Svg) {
        let bas = build_boundary(&spec, args)?;
        let mut svg = Svg::new();
        for a in &bas.arcs {
            svg.polyline(&arc_points(a), "#cccccc", 0.005);
        }
        for r in &inv.records {
            let radius = if r.label == Label::S0 { 0.008 } else { 0.02 };
            svg.dot(r.point.x, r.point.y, radius, label_color(r.label));
        }
        write_file(&args.out("classified.svg"), &svg.finish())?;
    }
    for label in Label::ALL {
        println!("{label}: {}", inv.count(label));
    }
    let report = verify_partition(&inv);
    if !report.ok {
        return Err(CliError::Invariant(format!(
            "partition violated: {}",
            report.violations.join("; ")
        )));
    }
    Ok(())
}

fn component_map(spec: &SetSpec, args: &RunArgs) -> Result<ComponentMap, CliError> {
    let bbox = padded_bbox(&SetOracle::Spec(spec), args.eps)
        .map_err(|e| usage(format!("{e}")))?;
    complement_components_spec(spec, args.eps, bbox, args.raster_h())
        .map_err(|e| usage(format!("{e}")))
}

fn cmd_components(args: &RunArgs) -> Result<(), CliError> {
    args.validate()?;
    let spec = args.input.load(args.eps)?;
    let map = component_map(&spec, args)?;
    if args.wants(Emit::Pgm) || args.wants(Emit::Svg) {
        write_file(&args.out("components.pgm"), &map.to_pgm())?;
    }
    if args.wants(Emit::Json) {
        write_file(&args.out("components.json"), &json_pretty(&map.summaries())?)?;
    }
    let bounded = map.components.iter().filter(|c| c.bounded).count();
    println!("components: {}", map.components.len());
    println!("bounded: {bounded}");
    println!("unbounded: {}", map.components.len() - bounded);
    Ok(())
}

#[derive(serde::Serialize)]
struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn run_checks(spec: &SetSpec, args: &RunArgs) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let eps = args.eps;
    let bas = build_boundary(spec, args)?;
    let samples = sample_boundary(&bas, args.spacing).map_err(|e| usage(format!("{e}")))?;
    let cell = 2f64.powi(-(args.level as i32));
    let tol_d = cell * std::f64::consts::SQRT_2;

    // Lipschitz bound on local graph representations.
    let bound = 1.0 / (3f64.sqrt() * eps) + 1e-3;
    let mut worst: f64 = 0.0;
    for s in samples.iter().step_by(4) {
        let Ok(mut cs) = contributors(spec, &s.position, eps, tol_d) else { continue };
        let Ok(oa) = outward_arc(&s.position, &cs) else { continue };
        mark_extremal(&mut cs, &oa);
        for pair in extremal_pairs(&s.position, &cs, &oa) {
            if let Ok(rep) = local_rep(spec, &s.position, &pair, eps, args.level, 129) {
                worst = worst.max(max_slope(&rep));
            }
        }
    }
    checks.push(Check {
        name: "lipschitz",
        ok: worst <= bound,
        detail: format!("max |df/ds| {} vs bound {}", fmt17(worst), fmt17(bound)),
    });

    // Orientation: every boundary loop turns by +-2pi.
    let loops = total_turning(&bas);
    let bad_turn = loops
        .iter()
        .filter(|t| (t.abs() - std::f64::consts::TAU).abs() > 1e-6)
        .count();
    checks.push(Check {
        name: "orientation",
        ok: bad_turn == 0,
        detail: format!("{} loops, {} with |turning| != 2pi", loops.len(), bad_turn),
    });

    // Tangent agreement: finite-difference tangents match extremal
    // directions on smooth stretches.
    let mut worst_ang: f64 = 0.0;
    let mut tested = 0usize;
    for (i, s) in samples.iter().enumerate().step_by(4) {
        let Ok(cs) = contributors(spec, &s.position, eps, tol_d) else { continue };
        if cs.members.len() != 1 {
            continue;
        }
        let Ok(oa) = outward_arc(&s.position, &cs) else { continue };
        let Ok((t1, _t2)) = tangent_estimate(&samples, i, 2) else { continue };
        let pairs = extremal_pairs(&s.position, &cs, &oa);
        // extremal directions are tangent directions; compare up to sign
        let best = pairs
            .iter()
            .map(|p| (t1.ux * p.xi.ux + t1.uy * p.xi.uy).abs().clamp(0.0, 1.0).acos())
            .fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            worst_ang = worst_ang.max(best);
            tested += 1;
        }
    }
    checks.push(Check {
        name: "tangent-agreement",
        ok: tested == 0 || worst_ang <= 0.05,
        detail: format!("{} samples, max angular error {}", tested, fmt17(worst_ang)),
    });

    // Partition: one label per point, kind-consistent.
    let inv = classify_boundary(spec, eps, args.level, args.spacing)
        .map_err(|e| usage(format!("{e}")))?;
    let report = verify_partition(&inv);
    checks.push(Check {
        name: "partition",
        ok: report.ok,
        detail: if report.ok {
            format!("{} records", inv.records.len())
        } else {
            report.violations.join("; ")
        },
    });

    // Raster stability: component counts identical at h and h/2.
    let h = args.raster_h();
    let bbox = padded_bbox(&SetOracle::Spec(spec), eps).map_err(|e| usage(format!("{e}")))?;
    let count = |h: f64| -> Result<usize, CliError> {
        Ok(complement_components_spec(spec, eps, bbox, h)
            .map_err(|e| usage(format!("{e}")))?
            .components
            .len())
    };
    let (c1, c2) = (count(h)?, count(h / 2.0)?);
    checks.push(Check {
        name: "raster-stability",
        ok: c1 == c2,
        detail: format!("{c1} components at h, {c2} at h/2"),
    });

    Ok(checks)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let inv: Inventory = serde_json::from_str(&text)
            .map_err(|e| usage(format!("invalid inventory {}: {e}", path.display())))?;
        let report = verify_partition(&inv);
        println!("{}", String::from_utf8_lossy(&json_pretty(&report)?));
        if !report.ok {
            return Err(CliError::Invariant("replayed inventory fails the partition".into()));
        }
        return Ok(());
    }
    args.run.validate()?;
    let spec = args.run.input.load(args.run.eps)?;
    let checks = run_checks(&spec, &args.run)?;
    let all_ok = checks.iter().all(|c| c.ok);
    let report = json_pretty(&checks)?;
    print!("{}", String::from_utf8_lossy(&report));
    if args.run.wants(Emit::Json) {
        write_file(&args.run.out("verify.json"), &report)?;
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Invariant(
            checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| c.name)
                .collect::<Vec<_>>()
                .join(", "),
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("EPSB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.threads);
    if let Some(t) = threads {
        // Ignore failure when a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Boundary(a) => cmd_boundary(a),
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Components(a) => cmd_components(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Invariant(_) => ExitCode::from(1),
            }
        }
    }
}
