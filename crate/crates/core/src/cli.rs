//! The `qset` command line.
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 usage or I/O
//! failure. Output depends only on the flags and input files.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::eprb::{build_eprb, validate_diameter, Ball, EprbSpace, RegionV};
use crate::formula::{check_wff, parse, Diagnostic, SortContext};
use crate::metric::{audit_axioms_with, AuditReport, DEFAULT_EPSILON};
use crate::model::{ErrorKind, Model, ModelError, SpaceRef};
use crate::spinlab::{correlation, joint_distribution, sample_outcomes, Axis, OUTCOMES};
use crate::universe::{Handle, Species, Universe};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qset", version, about = "Quasi-set kernel tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a model file.
    Check { path: PathBuf },
    /// Audit the quasi-metric axioms of a space declared in a model file.
    Audit(AuditArgs),
    /// Build an EPRB space from ball specifications and print it as a model.
    Eprb(EprbArgs),
    /// Check formulas for well-formedness under a sort context.
    Wff(WffArgs),
    /// Singlet joint distribution and correlation for two measurement axes.
    Correlate(CorrelateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args, Debug)]
struct AuditArgs {
    path: PathBuf,
    #[arg(long)]
    space: String,
    /// Tolerance for the axiom checks.
    #[arg(long, env = "QSET_EPSILON")]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct EprbArgs {
    /// `c1,...,cn,r`; repeat the flag or separate balls with `;`.
    #[arg(long, required = true)]
    balls: Vec<String>,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "electron")]
    species: String,
    /// Write sample points and their owning balls as CSV.
    #[arg(long)]
    emit_figure: Option<PathBuf>,
    #[arg(long, env = "QSET_EPSILON")]
    epsilon: Option<f64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "input")]
struct WffInput {
    #[arg(long)]
    expr: Option<String>,
    /// One formula per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WffArgs {
    #[command(flatten)]
    input: WffInput,
    /// `name:MICRO|MACRO|QSET,...`
    #[arg(long, default_value = "")]
    sorts: String,
}

#[derive(Args, Debug)]
struct CorrelateArgs {
    /// `x,y,z`, normalized internally.
    #[arg(long, allow_hyphen_values = true)]
    axis_a: String,
    #[arg(long, allow_hyphen_values = true)]
    axis_b: String,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Check { path } => cmd_check(&path, out, err),
        Command::Audit(a) => cmd_audit(&a, out, err),
        Command::Eprb(a) => cmd_eprb(&a, out, err),
        Command::Wff(a) => cmd_wff(&a, out, err),
        Command::Correlate(a) => cmd_correlate(&a, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}

type CmdResult = std::io::Result<i32>;

fn read(path: &PathBuf, err: &mut dyn Write) -> std::io::Result<Option<String>> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(Some(text)),
        Err(e) => {
            writeln!(err, "error: cannot read {}: {e}", path.display())?;
            Ok(None)
        }
    }
}

fn load(path: &PathBuf, err: &mut dyn Write) -> std::io::Result<Result<Model, i32>> {
    let Some(text) = read(path, err)? else {
        return Ok(Err(EXIT_USAGE));
    };
    match Model::parse(&text) {
        Ok(m) => Ok(Ok(m)),
        Err(e) => {
            writeln!(err, "{}", located(path, &e))?;
            Ok(Err(exit_for(&e)))
        }
    }
}

fn located(path: &std::path::Path, e: &ModelError) -> String {
    let kind = match e.kind {
        ErrorKind::Syntax => "syntax error",
        ErrorKind::Validation => "error",
    };
    format!("{}:{}: {kind}: {}", path.display(), e.line, e.message)
}

fn exit_for(e: &ModelError) -> i32 {
    match e.kind {
        ErrorKind::Syntax => EXIT_USAGE,
        ErrorKind::Validation => EXIT_FAILURE,
    }
}

fn cmd_check(path: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let model = match load(path, err)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    let report = model.check();
    for note in &report.notes {
        writeln!(out, "note: {note}")?;
    }
    for e in &report.errors {
        writeln!(err, "{}", located(path, e))?;
    }
    if !report.errors.is_empty() {
        return Ok(EXIT_FAILURE);
    }
    writeln!(
        out,
        "OK: {} entities, {} relations, {} spaces, {} formulas",
        model.universe().len(),
        model.relations().count(),
        model.space_names().len(),
        model.formulas().len()
    )?;
    Ok(EXIT_OK)
}

fn epsilon(flag: Option<f64>, err: &mut dyn Write) -> std::io::Result<Option<f64>> {
    let eps = flag.unwrap_or(DEFAULT_EPSILON);
    if !(eps >= 0.0 && eps.is_finite()) {
        writeln!(err, "error: epsilon must be a finite nonnegative number, got {eps}")?;
        return Ok(None);
    }
    Ok(Some(eps))
}

/// Names for the entities of an EPRB space: `x1`, `x2` for the atoms and
/// `v0`, `v1`, ... for sample points.
fn eprb_name(space: &EprbSpace, h: Handle) -> String {
    let [a, b] = space.atoms();
    if h.index() == a.index() {
        return "x1".into();
    }
    if h.index() == b.index() {
        return "x2".into();
    }
    match space.point_handles().iter().position(|p| p.index() == h.index()) {
        Some(i) => format!("v{i}"),
        None => h.to_string(),
    }
}

fn cmd_audit(a: &AuditArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let Some(eps) = epsilon(a.epsilon, err)? else {
        return Ok(EXIT_USAGE);
    };
    let model = match load(&a.path, err)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    let Some(space) = model.space(&a.space) else {
        writeln!(
            err,
            "error: unknown space `{}` (declared: {})",
            a.space,
            model.space_names().join(", ")
        )?;
        return Ok(EXIT_FAILURE);
    };
    let (report, name): (AuditReport, Box<dyn Fn(Handle) -> String + '_>) = match space {
        SpaceRef::Eprb(decl) => {
            let qm = decl.space.to_quasi_metric_space();
            let report = audit_axioms_with(&qm, eps).expect("carrier is valid");
            (report, Box::new(move |h| eprb_name(&decl.space, h)))
        }
        SpaceRef::Finite(decl) => {
            let qm = match model.finite_space(decl) {
                Ok(qm) => qm,
                Err(e) => {
                    writeln!(err, "{}", located(&a.path, &e))?;
                    return Ok(EXIT_FAILURE);
                }
            };
            let report = audit_axioms_with(&qm, eps).expect("carrier is valid");
            let model = &model;
            (
                report,
                Box::new(move |h| model.entity_name(h).map_or_else(|| h.to_string(), str::to_string)),
            )
        }
    };
    match a.format {
        Format::Text => write_audit_text(&a.space, &report, &*name, out)?,
        Format::JsonLines => write_audit_json(&a.space, &report, &*name, out)?,
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
}

fn write_audit_text(
    space: &str,
    report: &AuditReport,
    name: &dyn Fn(Handle) -> String,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(
        out,
        "space {space}: {} members, epsilon {:e}",
        report.carrier_size, report.epsilon
    )?;
    for v in &report.violations {
        let w: Vec<String> = v.witnesses.iter().map(|&h| name(h)).collect();
        let vals: Vec<String> = v.values.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "violation: {}: witnesses {}; values {}",
            v.axiom,
            w.join(", "),
            vals.join(", ")
        )?;
    }
    for f in &report.congruence_flags {
        writeln!(
            out,
            "congruence: {x} ~ {xp} but d({x}, {y}) = {} and d({xp}, {y}) = {}",
            f.values[0],
            f.values[1],
            x = name(f.x),
            xp = name(f.x_prime),
            y = name(f.y),
        )?;
    }
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}: {}", report.summary())
}

fn write_audit_json(
    space: &str,
    report: &AuditReport,
    name: &dyn Fn(Handle) -> String,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    for v in &report.violations {
        let w: Vec<String> = v.witnesses.iter().map(|&h| name(h)).collect();
        let rec = json!({
            "record": "violation",
            "axiom": v.axiom.id(),
            "name": format!("{:?}", v.axiom),
            "witnesses": w,
            "values": v.values,
        });
        writeln!(out, "{rec}")?;
    }
    for f in &report.congruence_flags {
        let rec = json!({
            "record": "congruence",
            "witnesses": [name(f.x), name(f.x_prime), name(f.y)],
            "values": f.values,
        });
        writeln!(out, "{rec}")?;
    }
    let rec = json!({
        "record": "summary",
        "space": space,
        "passed": report.passed,
        "axioms_verified": report.axioms_verified(),
        "carrier_size": report.carrier_size,
        "pairs": report.pairs_checked,
        "triples": report.triples_checked,
        "epsilon": report.epsilon,
    });
    writeln!(out, "{rec}")
}

fn parse_numbers(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{p}` is not a finite number"))
        })
        .collect()
}

fn parse_balls(specs: &[String], dim: usize) -> Result<Vec<Ball>, String> {
    let mut balls = Vec::new();
    for spec in specs.iter().flat_map(|s| s.split(';')) {
        let spec = spec.trim();
        if spec.is_empty() {
            continue;
        }
        let nums = parse_numbers(spec).map_err(|e| format!("ball `{spec}`: {e}"))?;
        if nums.len() != dim + 1 {
            return Err(format!(
                "ball `{spec}`: expected {} coordinates and a radius",
                dim
            ));
        }
        let (center, r) = nums.split_at(dim);
        balls.push(Ball::new(center.to_vec(), r[0]).map_err(|e| format!("ball `{spec}`: {e}"))?);
    }
    if balls.is_empty() {
        return Err("no balls given".into());
    }
    Ok(balls)
}

fn join_coords(p: &[f64]) -> String {
    p.iter().map(|x| (x + 0.0).to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_eprb(a: &EprbArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let Some(eps) = epsilon(a.epsilon, err)? else {
        return Ok(EXIT_USAGE);
    };
    if a.dim == 0 {
        writeln!(err, "error: --dim must be at least 1")?;
        return Ok(EXIT_USAGE);
    }
    let balls = match parse_balls(&a.balls, a.dim) {
        Ok(b) => b,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    if !(a.c > 0.0 && a.c.is_finite()) {
        writeln!(err, "error: c must be positive, got {}", a.c)?;
        return Ok(EXIT_FAILURE);
    }
    let region = RegionV::sampled(a.dim, balls, a.samples, a.seed).expect("balls validated");
    let check = validate_diameter(&region, a.c);
    if !check.admissible {
        writeln!(
            err,
            "error: A2 violated: sup-diameter D = {} exceeds 2c = {} (balls {} and {})",
            check.sup_diameter,
            2.0 * a.c,
            check.witness.0,
            check.witness.1
        )?;
        writeln!(err, "minimal c = D/2 = {}", check.minimal_c())?;
        return Ok(EXIT_FAILURE);
    }
    let universe = Universe::new([Species::new(a.species.clone(), "")]).expect("one species");
    let space = build_eprb(universe, region, a.c, &a.species).expect("A2 checked");
    let report = audit_axioms_with(&space.to_quasi_metric_space(), eps).expect("carrier is valid");
    let region = space.region();

    writeln!(
        out,
        "# EPRB space: dim {}, {} balls, {} sample points, seed {}",
        a.dim,
        region.balls().len(),
        region.sample_points().len(),
        a.seed
    )?;
    writeln!(out, "# sup-diameter {}, 2c = {}", check.sup_diameter, 2.0 * a.c)?;
    writeln!(out, "# audit: {}", report.summary())?;
    writeln!(out, "species {}", a.species)?;
    writeln!(out, "region V dim {}", a.dim)?;
    for b in region.balls() {
        writeln!(out, "ball V {} {}", join_coords(b.center()), b.radius())?;
    }
    for p in region.sample_points() {
        writeln!(out, "point V {}", join_coords(p))?;
    }
    writeln!(out, "eprb S region V c {} species {}", a.c, a.species)?;

    if let Some(path) = &a.emit_figure {
        let mut text = String::new();
        text.push_str(&format!("# c={}\n# sup_diameter={}\n", a.c, check.sup_diameter));
        for (i, b) in region.balls().iter().enumerate() {
            text.push_str(&format!(
                "# ball {i}: center={} radius={}\n",
                join_coords(b.center()),
                b.radius()
            ));
        }
        let header: Vec<String> = (0..a.dim).map(|i| format!("x{i}")).collect();
        text.push_str(&format!("{},ball\n", header.join(",")));
        for p in region.sample_points() {
            let owner = region.owner(p).expect("points validated");
            text.push_str(&format!("{},{owner}\n", join_coords(p)));
        }
        if let Err(e) = std::fs::write(path, text) {
            writeln!(err, "error: cannot write {}: {e}", path.display())?;
            return Ok(EXIT_USAGE);
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
}

fn write_diagnostic(source: &str, d: &Diagnostic, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{d}")?;
    if let Some(line) = source.lines().nth(d.line.saturating_sub(1)) {
        writeln!(out, "  {line}")?;
        writeln!(out, "  {}^", " ".repeat(d.column.saturating_sub(1)))?;
    }
    Ok(())
}

fn verdict(source: &str, ctx: &SortContext) -> Result<(), Diagnostic> {
    let f = parse(source)?;
    check_wff(&f, ctx)
}

fn cmd_wff(a: &WffArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ctx = match SortContext::parse(&a.sorts) {
        Ok(ctx) => ctx,
        Err(e) => {
            writeln!(err, "error: --sorts: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    if let Some(expr) = &a.input.expr {
        return Ok(match verdict(expr, &ctx) {
            Ok(()) => {
                writeln!(out, "WELL-FORMED")?;
                EXIT_OK
            }
            Err(d) => {
                write_diagnostic(expr, &d, out)?;
                EXIT_FAILURE
            }
        });
    }
    let path = a.input.file.as_ref().expect("clap requires one input");
    let Some(text) = read(path, err)? else {
        return Ok(EXIT_USAGE);
    };
    let mut failures = 0;
    for (i, line) in text.lines().enumerate() {
        let src = line.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        match verdict(src, &ctx) {
            Ok(()) => writeln!(out, "line {}: WELL-FORMED", i + 1)?,
            Err(d) => {
                failures += 1;
                write!(out, "line {}: ", i + 1)?;
                write_diagnostic(src, &d, out)?;
            }
        }
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILURE })
}

/// Rounds away floating-point residue for display.
fn display(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    (r + 0.0).to_string()
}

fn parse_axis(flag: &str, spec: &str) -> Result<Axis, String> {
    let v = parse_numbers(spec).map_err(|e| format!("{flag}: {e}"))?;
    let [x, y, z] = v[..] else {
        return Err(format!("{flag}: expected three components, got {}", v.len()));
    };
    Axis::normalized([x, y, z]).map_err(|e| format!("{flag}: {e}"))
}

fn cmd_correlate(a: &CorrelateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let axes = parse_axis("--axis-a", &a.axis_a).and_then(|x| Ok((x, parse_axis("--axis-b", &a.axis_b)?)));
    let (axis_a, axis_b) = match axes {
        Ok(v) => v,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let fmt_axis = |x: &Axis| {
        let d = x.direction();
        format!("({}, {}, {})", display(d[0]), display(d[1]), display(d[2]))
    };
    writeln!(out, "a = {}", fmt_axis(&axis_a))?;
    writeln!(out, "b = {}", fmt_axis(&axis_b))?;
    let p = joint_distribution(&axis_a, &axis_b);
    writeln!(out, "outcome,probability")?;
    for (s1, s2) in OUTCOMES {
        writeln!(out, "{}{},{}", s1.symbol(), s2.symbol(), display(p.get(s1, s2)))?;
    }
    writeln!(out, "E(a,b) = {}", display(correlation(&axis_a, &axis_b)))?;
    if let Some(n) = a.samples {
        match sample_outcomes(&axis_a, &axis_b, n, a.seed) {
            Ok(tally) => {
                writeln!(out, "sampled (seed {}): {tally}", a.seed)?;
                writeln!(out, "E_sampled(a,b) = {}", display(tally.correlation()))?;
            }
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_USAGE);
            }
        }
    }
    Ok(EXIT_OK)
}
