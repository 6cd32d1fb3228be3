//! `tripow`: existence, stability and profiles of standing waves from the
//! command line.
//!
//! Exit codes: 0 success, 1 bad arguments, 2 parameter point on the
//! non-existence curve, 3 no wave at the parameter point, 4 numerical
//! failure (partial results are still written, tagged with a status).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tripow::boundary::{dd_t_min, ff_t_max, gamma_no_curve, CurveLabel, ParamCurve};
use tripow::closedform::{double_power_profile, example35_coeffs, phi_single, qp, DoublePowerFamily};
use tripow::io::{self as tio, fmt_f64, ProfileMeta};
use tripow::potential::{classify_existence, interior_zero_count, DEFAULT_ZERO_TOL};
use tripow::profiles::{default_horizon, solve_profile, uniform_grid, ProfileMethod, DEFAULT_DT};
use tripow::regions::{
    extract_level_curves, figure_windows, find_min_point, reduced_schedule, refine_root, sweep, table1_schedule, trace_gamma_cr,
    RefineOptions, Window,
};
use tripow::stability::{j_with, Formula, QuadOptions};
use tripow::{CaseSigns, Error, ExistenceClass, ModelParams};

const EXIT_BAD_ARGS: u8 = 1;
const EXIT_BOUNDARY: u8 = 2;
const EXIT_NO_WAVE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "tripow", version, about = "Standing waves of the NLS with a triple-power nonlinearity")]
struct Cli {
    /// Worker threads for parallel sweeps; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Existence test at one parameter point.
    #[command(allow_negative_numbers = true)]
    Classify(PointArgs),
    /// Stability functional J at one parameter point.
    #[command(allow_negative_numbers = true)]
    J {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = FormulaArg::Gauge)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Existence class and J on a grid.
    #[command(allow_negative_numbers = true)]
    Sweep {
        case: CaseSigns,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Level curves of J from a grid file written by `sweep`.
    #[command(allow_negative_numbers = true)]
    Contour {
        /// Grid JSON file.
        grid: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        levels: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The non-existence curve, sampled uniformly in the double-zero location t.
    CurveNo {
        case: CaseSigns,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long)]
        t_lo: Option<f64>,
        #[arg(long)]
        t_hi: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The critical curve J = 0 by mesh bracketing, optionally refined.
    #[command(allow_negative_numbers = true)]
    CurveCr {
        case: CaseSigns,
        #[command(flatten)]
        window: WindowArgs,
        /// Refine every bracket to a root of J.
        #[arg(long)]
        refine: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lowest point of the critical curve by zooming windows.
    Minpoint {
        #[arg(default_value = "ff")]
        case: CaseSigns,
        /// Use meshes four times coarser in each direction.
        #[arg(long)]
        reduced: bool,
        /// JSON file for the full window trace.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Profile of the standing wave on [0, T].
    #[command(allow_negative_numbers = true)]
    Profile {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Bvp)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Horizon; 50 by default, 20 when dt <= 1e-3.
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grids, level curves and the non-existence curve over every figure
    /// patch of a case, written into a directory.
    #[command(allow_negative_numbers = true)]
    FigureData {
        case: CaseSigns,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "-1,-0.5,-0.1,0,0.1,0.5,1")]
        levels: Vec<f64>,
    },
    /// Closed-form solutions used as references.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand, Debug)]
enum Oracle {
    /// Q_p(x).
    Qp { p: f64, x: f64 },
    /// Single-power profile omega^(1/(p-1)) Q_p(sqrt(omega) x) on a grid.
    Single {
        p: f64,
        omega: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Double-power profile of the ell-family on a grid.
    #[command(allow_negative_numbers = true)]
    Double {
        beta: f64,
        ell: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Parameters whose field is -x (x - a)(x - b)(x - x3).
    Example35 { a: f64, b: f64 },
}

#[derive(Args, Debug)]
struct PointArgs {
    case: CaseSigns,
    omega: f64,
    gamma: f64,
}

impl PointArgs {
    fn params(&self) -> anyhow::Result<ModelParams> {
        Ok(ModelParams::new(self.case, self.omega, self.gamma)?)
    }
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
    omega: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
    gamma: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    n_omega: usize,
    #[arg(long, default_value_t = 50)]
    n_gamma: usize,
    /// Geometric spacing in omega.
    #[arg(long)]
    log_omega: bool,
}

impl WindowArgs {
    fn window(&self) -> anyhow::Result<Window> {
        let w = Window::new((self.omega[0], self.omega[1]), (self.gamma[0], self.gamma[1]), self.n_omega, self.n_gamma)?;
        Ok(if self.log_omega { w.log_omega()? } else { w })
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
    #[arg(long, default_value_t = 50.0)]
    t_end: f64,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; taken from the file extension when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutArgs {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or_else(|| {
            match self.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
                Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                _ => default,
            }
        })
    }

    fn writer(&self) -> anyhow::Result<Box<dyn Write>> {
        open(self.out.as_deref())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormulaArg {
    Unit,
    X,
    Gauge,
    GaugeAlt,
}

impl From<FormulaArg> for Formula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Unit => Formula::UnitInterval,
            FormulaArg::X => Formula::XForm,
            FormulaArg::Gauge => Formula::GaugeForm,
            FormulaArg::GaugeAlt => Formula::GaugeFormAlt,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Shoot,
    Picard,
    Bvp,
    Quadrature,
}

impl From<MethodArg> for ProfileMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Shoot => ProfileMethod::Shoot,
            MethodArg::Picard => ProfileMethod::Picard,
            MethodArg::Bvp => ProfileMethod::Bvp,
            MethodArg::Quadrature => ProfileMethod::Quadrature,
        }
    }
}

fn open(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn class_name(c: &ExistenceClass) -> &'static str {
    match c {
        ExistenceClass::Exists { .. } => "exists",
        ExistenceClass::BoundaryDoubleZero { .. } => "boundary",
        ExistenceClass::NoPositiveZero => "none",
    }
}

fn class_exit(c: &ExistenceClass) -> u8 {
    match c {
        ExistenceClass::Exists { .. } => 0,
        ExistenceClass::BoundaryDoubleZero { .. } => EXIT_BOUNDARY,
        ExistenceClass::NoPositiveZero => EXIT_NO_WAVE,
    }
}

/// Exit code for a library error at an otherwise valid point.
fn error_exit(e: &Error) -> u8 {
    match e {
        Error::NotExists(c) => class_exit(c),
        Error::InvalidArgument(_) | Error::Inadmissible { .. } | Error::EmptyCurve(_) => EXIT_BAD_ARGS,
        _ => EXIT_NUMERICAL,
    }
}

fn cmd_classify(point: &PointArgs) -> anyhow::Result<u8> {
    let p = point.params()?;
    let class = classify_existence(&p, DEFAULT_ZERO_TOL);
    let mut line = format!("{} {} omega={} gamma={} class={}", p.case.short(), p.case, p.omega, p.gamma, class_name(&class));
    match class {
        ExistenceClass::Exists { phi0, g_at_phi0 } => {
            let (n, _) = interior_zero_count(&p)?;
            line += &format!(" phi0={} g(phi0)={} interior_zeros={n}", fmt_f64(phi0), fmt_f64(g_at_phi0));
        }
        ExistenceClass::BoundaryDoubleZero { t } => line += &format!(" t={}", fmt_f64(t)),
        ExistenceClass::NoPositiveZero => {}
    }
    println!("{line}");
    Ok(class_exit(&class))
}

fn cmd_j(point: &PointArgs, formula: FormulaArg, rel_tol: f64, out: &OutArgs) -> anyhow::Result<u8> {
    let p = point.params()?;
    let opts = QuadOptions { rel_tol, ..QuadOptions::with_formula(formula.into()) };
    let (value, est, status, code) = match j_with(&p.coeffs(), &opts) {
        Ok(v) => (v.j, v.est_error, "ok".to_string(), 0),
        Err(Error::QuadratureNonConvergent { partial, est_error }) => {
            (partial, est_error, "quadrature_nonconvergent".to_string(), EXIT_NUMERICAL)
        }
        Err(e) => {
            eprintln!("{e}");
            return Ok(error_exit(&e));
        }
    };
    let mut w = out.writer()?;
    match out.format(Format::Csv) {
        Format::Json => {
            let doc = json!({"case": p.case, "omega": p.omega, "gamma": p.gamma, "j": value,
                "est_error": est, "formula": Formula::from(formula), "status": status});
            tio::to_json_writer(&mut w, &doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            if out.out.is_some() {
                writeln!(w, "case,omega,gamma,j,est_error,status")?;
                writeln!(w, "{},{},{},{},{},{status}", p.case.short(), fmt_f64(p.omega), fmt_f64(p.gamma), fmt_f64(value), fmt_f64(est))?;
            } else {
                writeln!(w, "{}", fmt_f64(value))?;
            }
        }
    }
    w.flush()?;
    Ok(code)
}

fn cmd_sweep(case: CaseSigns, window: &WindowArgs, out: &OutArgs) -> anyhow::Result<u8> {
    let field = sweep(case, &window.window()?);
    let w = out.writer()?;
    match out.format(Format::Json) {
        Format::Json => tio::write_grid_json(w, &field)?,
        Format::Csv => tio::write_grid_csv(w, &field)?,
    }
    Ok(0)
}

fn write_curves(out: &OutArgs, curves: &[ParamCurve]) -> anyhow::Result<()> {
    let w = out.writer()?;
    match out.format(Format::Csv) {
        Format::Json => tio::write_curves_json(w, curves)?,
        Format::Csv => tio::write_curves_csv(w, curves)?,
    }
    Ok(())
}

fn cmd_contour(grid: &Path, levels: &[f64], out: &OutArgs) -> anyhow::Result<u8> {
    let file = File::open(grid).with_context(|| format!("opening {}", grid.display()))?;
    let field = tio::read_grid_json(io::BufReader::new(file))?;
    write_curves(out, &extract_level_curves(&field, levels))?;
    Ok(0)
}

fn cmd_figure_data(case: CaseSigns, dir: &Path, levels: &[f64]) -> anyhow::Result<u8> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tag = case.short();
    let mut curves = Vec::new();
    for (k, window) in figure_windows(case).iter().enumerate() {
        let field = sweep(case, window);
        let path = dir.join(format!("{tag}_patch{k}.json"));
        tio::write_grid_json(BufWriter::new(File::create(&path)?), &field)?;
        curves.extend(extract_level_curves(&field, levels));
        eprintln!("{} patch {k}: {} x {} nodes", case.label(), window.n_omega, window.n_gamma);
    }
    tio::write_curves_json(BufWriter::new(File::create(dir.join(format!("{tag}_levels.json")))?), &curves)?;
    if case != CaseSigns::DF {
        let out = OutArgs { out: Some(dir.join(format!("{tag}_gamma_no.json"))), format: None };
        cmd_curve_no(case, 400, None, None, &out)?;
    }
    Ok(0)
}

fn cmd_curve_no(case: CaseSigns, n: usize, t_lo: Option<f64>, t_hi: Option<f64>, out: &OutArgs) -> anyhow::Result<u8> {
    let (lo, hi) = match case {
        CaseSigns::FF => (0.01, ff_t_max()),
        CaseSigns::FD => (0.01, 5.0),
        CaseSigns::DD => (dd_t_min() * (1.0 + 1e-9), 5.0),
        CaseSigns::DF => bail!(Error::EmptyCurve(case.label())),
    };
    let curve = gamma_no_curve(case, t_lo.unwrap_or(lo), t_hi.unwrap_or(hi), n)?;
    write_curves(out, &[curve])?;
    Ok(0)
}

fn cmd_curve_cr(case: CaseSigns, window: &WindowArgs, refine: bool, out: &OutArgs) -> anyhow::Result<u8> {
    let w = window.window()?;
    let (curve, columns) = trace_gamma_cr(case, &w.omega_nodes(), &w.gamma_nodes());
    let skipped = columns.iter().filter(|c| c.lower.is_empty()).count();
    let multiple = columns.iter().filter(|c| c.lower.len() > 1).count();
    eprintln!("{} columns bracketed, {skipped} without a sign change, {multiple} with several", curve.points.len());
    let mut failures = 0;
    let points: Vec<(f64, f64)> = if refine {
        let opts = RefineOptions::default();
        curve
            .points
            .iter()
            .filter_map(|p| match refine_root(case, (p.omega, p.gamma), &opts) {
                Ok(r) => Some((r.omega, r.gamma)),
                Err(_) => {
                    failures += 1;
                    None
                }
            })
            .collect()
    } else {
        curve.points.iter().map(|p| (p.omega, p.gamma)).collect()
    };
    write_curves(out, &[ParamCurve { label: CurveLabel::GammaCr, points, t: None }])?;
    if failures > 0 {
        eprintln!("{failures} refinements did not converge");
        return Ok(EXIT_NUMERICAL);
    }
    Ok(0)
}

fn cmd_minpoint(case: CaseSigns, reduced: bool, out: Option<&Path>) -> anyhow::Result<u8> {
    let schedule = if reduced { reduced_schedule() } else { table1_schedule() };
    let result = match find_min_point(case, &schedule) {
        Ok(r) => r,
        Err(e) => {
            if let Some(path) = out {
                let mut w = open(Some(path))?;
                tio::to_json_writer(&mut w, &json!({"status": e.to_string()}))?;
                w.flush()?;
            }
            eprintln!("{e}");
            return Ok(error_exit(&e));
        }
    };
    for (k, step) in result.window_trace.iter().enumerate() {
        let delta = match step.delta {
            Some((dw, dg)) => format!(" delta=({}, {})", fmt_f64(dw), fmt_f64(dg)),
            None => String::new(),
        };
        println!(
            "W{} gamma*={} omega*=[{}, {}] omega**={} gamma**={}{delta}",
            k + 1,
            fmt_f64(step.gamma_star),
            fmt_f64(step.omega_star.0),
            fmt_f64(step.omega_star.1),
            fmt_f64(step.omega_2star),
            fmt_f64(step.gamma_2star),
        );
    }
    println!("omega2={} gamma2={}", fmt_f64(result.omega2_point), fmt_f64(result.gamma2));
    if let Some(path) = out {
        let mut w = open(Some(path))?;
        tio::to_json_writer(&mut w, &json!({"status": "ok", "result": result}))?;
        w.flush()?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    point: &PointArgs,
    method: MethodArg,
    dt: f64,
    t_end: Option<f64>,
    tol: f64,
    max_iters: usize,
    out: &OutArgs,
) -> anyhow::Result<u8> {
    let p = point.params()?;
    let t_end = t_end.unwrap_or_else(|| default_horizon(dt));
    let solved = solve_profile(&p, method.into(), t_end, dt, tol, max_iters);
    let profile = match solved {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            let code = error_exit(&e);
            if code == EXIT_NUMERICAL {
                write_profile_failure(out, &p, method, &e)?;
            }
            return Ok(code);
        }
    };
    let meta = ProfileMeta::new(&p, &profile, "ok");
    match out.format(Format::Csv) {
        Format::Csv => {
            tio::write_profile_csv(out.writer()?, &profile)?;
            if let Some(path) = &out.out {
                let mut w = open(Some(&path.with_extension("json")))?;
                tio::to_json_writer(&mut w, &meta)?;
                w.flush()?;
            }
        }
        Format::Json => {
            let mut w = out.writer()?;
            tio::to_json_writer(&mut w, &json!({"meta": meta, "t": profile.t, "phi": profile.phi}))?;
            w.flush()?;
        }
    }
    Ok(0)
}

fn write_profile_failure(out: &OutArgs, p: &ModelParams, method: MethodArg, e: &Error) -> anyhow::Result<()> {
    let Some(path) = &out.out else { return Ok(()) };
    let mut doc = json!({"params": p, "method": ProfileMethod::from(method), "status": e.to_string()});
    if let Error::NonConvergence { trace, best, .. } = e {
        doc["residual_trace"] = json!(trace);
        doc["best"] = json!(best);
    }
    let target = if out.format(Format::Csv) == Format::Json { path.clone() } else { path.with_extension("json") };
    let mut w = open(Some(&target))?;
    tio::to_json_writer(&mut w, &doc)?;
    w.flush()?;
    Ok(())
}

fn write_samples(out: &OutArgs, grid: &GridArgs, f: impl Fn(f64) -> f64) -> anyhow::Result<()> {
    let t = uniform_grid(grid.t_end, grid.dt);
    let phi: Vec<f64> = t.iter().map(|&x| f(x)).collect();
    let mut w = out.writer()?;
    match out.format(Format::Csv) {
        Format::Csv => {
            writeln!(w, "t,phi")?;
            for (x, v) in t.iter().zip(&phi) {
                writeln!(w, "{},{}", fmt_f64(*x), fmt_f64(*v))?;
            }
        }
        Format::Json => tio::to_json_writer(&mut w, &json!({"t": t, "phi": phi}))?,
    }
    w.flush()?;
    Ok(())
}

fn cmd_oracle(o: &Oracle) -> anyhow::Result<u8> {
    match o {
        Oracle::Qp { p, x } => {
            if !(*p > 1.0) {
                bail!(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
            }
            println!("{}", fmt_f64(qp(*p, *x)));
        }
        Oracle::Single { p, omega, grid, out } => {
            if !(*p > 1.0 && *omega > 0.0) {
                bail!(Error::InvalidArgument(format!("need p > 1 and omega > 0, got ({p}, {omega})")));
            }
            write_samples(out, grid, |x| phi_single(*p, *omega, x))?;
        }
        Oracle::Double { beta, ell, grid, out } => {
            let fam = DoublePowerFamily::new(*beta, *ell)?;
            eprintln!("omega={} a1={} a2={}", fmt_f64(fam.omega), fam.a1, fam.a2);
            write_samples(out, grid, |x| double_power_profile(&fam, x))?;
        }
        Oracle::Example35 { a, b } => {
            let e = example35_coeffs(*a, *b)?;
            println!(
                "omega={} gamma={} zeros={},{},{}",
                fmt_f64(e.omega),
                fmt_f64(e.gamma),
                fmt_f64(e.zeros.0),
                fmt_f64(e.zeros.1),
                fmt_f64(e.zeros.2)
            );
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()?;
    }
    match &cli.command {
        Command::Classify(point) => cmd_classify(point),
        Command::J { point, formula, rel_tol, out } => cmd_j(point, *formula, *rel_tol, out),
        Command::Sweep { case, window, out } => cmd_sweep(*case, window, out),
        Command::Contour { grid, levels, out } => cmd_contour(grid, levels, out),
        Command::CurveNo { case, n, t_lo, t_hi, out } => cmd_curve_no(*case, *n, *t_lo, *t_hi, out),
        Command::CurveCr { case, window, refine, out } => cmd_curve_cr(*case, window, *refine, out),
        Command::Minpoint { case, reduced, out } => cmd_minpoint(*case, *reduced, out.as_deref()),
        Command::Profile { point, method, dt, t_end, tol, max_iters, out } => {
            cmd_profile(point, *method, *dt, *t_end, *tol, *max_iters, out)
        }
        Command::FigureData { case, dir, levels } => cmd_figure_data(*case, dir, levels),
        Command::Oracle(o) => cmd_oracle(o),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(err) => error_exit(err),
                None => EXIT_BAD_ARGS,
            };
            ExitCode::from(code)
        }
    }
}
