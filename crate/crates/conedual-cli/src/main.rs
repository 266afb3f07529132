//! Command-line front end: JSON in, JSON out, with certificates always
//! included and byte-identical output for identical invocations.
//!
//! Exit codes: 0 success, 2 infeasible / non-member / predicate false (a
//! witness or violation is emitted), 3 invalid input, 4 solver failure.

use clap::{Parser, Subcommand, ValueEnum};
use conedual::circle::{self, CircleMeasure};
use conedual::cones;
use conedual::decomp::{self, DecompError, DecompOutcome};
use conedual::extremal::{self, ExtremalError, ExtremalResult};
use conedual::group::GroupSpec;
use conedual::group::Window;
use conedual::lp;
use conedual::spectral::{self, GFunc};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NON_MEMBER: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_SOLVER: u8 = 4;

#[derive(Parser)]
#[command(
    name = "conedual",
    about = "Cone membership, extremal window constants, and atomic mass recovery on finite abelian groups and the circle",
    version
)]
struct Cli {
    /// Numerical tolerance for predicates and solver feasibility.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    /// Positive definite (spectrum real and nonnegative).
    Pd,
    /// Positive type (same test, measure side).
    Postype,
    /// Positive type in the real sense (Re of the transform nonnegative).
    PostypeReal,
    /// Nonnegative and positive definite simultaneously.
    DoublyPositive,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cone membership predicates for a function given as JSON.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        file: PathBuf,
    },
    /// Split rho into omega + tau + odd or produce a separating witness.
    Decompose { file: PathBuf },
    /// Does c*mu - nu lie in the dual cone?
    Inequality {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long)]
        c: f64,
    },
    /// Endpoints of the admissible set { c : c*mu - nu in the dual cone }.
    Interval { mu: PathBuf, nu: PathBuf },
    /// Extremal window constants and their duality.
    Extremal {
        #[command(subcommand)]
        which: ExtremalCmd,
    },
    /// Closed-form bound for the line concentration problem.
    Logan {
        #[arg(long)]
        t: f64,
    },
    /// Compare the closed-form line bound against a discretized LP value.
    LoganCompare {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: usize,
        #[arg(long = "half-width", default_value_t = 16.0)]
        half_width: f64,
    },
    /// Atomic mass and energy recovery for a measure on the circle.
    Atomic {
        #[command(subcommand)]
        which: AtomicCmd,
    },
    /// Spectral square root: g with g * converse(g) = f.
    BoasKac { file: PathBuf },
    /// Randomized self-test: solve and re-verify random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum ExtremalCmd {
    /// S(U, V): extremal V-mass per unit of U-mass.
    S {
        #[command(flatten)]
        windows: WindowArgs,
    },
    /// Q(U, k) = S(U, U + ... + U) with k summands.
    Q {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long)]
        k: usize,
    },
    /// T(U, g) = S(U, U + g).
    T {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Least C with C*chi_U - chi_V - chi_{-V} majorizing a positive
    /// definite weight; sigma = C/2.
    Sigma {
        #[command(flatten)]
        windows: WindowArgs,
    },
    /// Solve both sides independently and report the gap.
    Duality {
        #[command(flatten)]
        windows: WindowArgs,
    },
}

#[derive(clap::Args)]
struct WindowArgs {
    /// Group factors, comma-separated (e.g. "8" or "2,4").
    #[arg(long)]
    group: String,
    /// U members: comma-separated elements; signed integers for cyclic
    /// groups, colon-joined tuples (e.g. "1:3") for multi-factor groups.
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// V members, same syntax as --u. May be empty for sigma.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    v: String,
}

#[derive(Subcommand)]
enum AtomicCmd {
    /// Estimate the mass at x0 from coefficients |n| <= N.
    Mass {
        file: PathBuf,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
    },
    /// Mean value of |coefficients|^2 and its distance to the atomic
    /// energy.
    Energy {
        file: PathBuf,
        #[arg(long)]
        n: i64,
    },
    /// Verify the atomic part inherits positive type over |n| <= N.
    Check {
        file: PathBuf,
        #[arg(long)]
        n: i64,
    },
}

/// Failures routed to exit codes: input problems (3) vs solver problems
/// (4). Non-member answers are not failures.
enum CliError {
    Input(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_BAD_INPUT,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Solver(m) => m,
        }
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

impl From<DecompError> for CliError {
    fn from(e: DecompError) -> CliError {
        match e {
            DecompError::ComplexInput { .. } => CliError::Input(e.to_string()),
            DecompError::Solver(_) | DecompError::CertificateFailed(_) => {
                CliError::Solver(e.to_string())
            }
        }
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> CliError {
        match e {
            ExtremalError::BadWindow(_)
            | ExtremalError::GroupMismatch
            | ExtremalError::BadParameter(_) => CliError::Input(e.to_string()),
            ExtremalError::Solver(_) | ExtremalError::DualityGap { .. } => {
                CliError::Solver(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are invalid input (exit 3), never confusable with the
    // non-member answer (exit 2) that clap would emit by default.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok((value, code)) => {
            print_value(&value);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Serialize with every float at 12 significant digits so that identical
/// invocations are byte-identical across platforms.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.11e}")
    }
}

fn print_value(value: &Value) {
    if let Value::String(s) = value {
        // Bare scalar outputs (logan) print unquoted.
        println!("{s}");
        return;
    }
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    std::io::stdout().write_all(&buf).expect("stdout");
}

fn dispatch(cli: &Cli) -> Result<(Value, u8), CliError> {
    let tol = cli.tol;
    match &cli.cmd {
        Cmd::Check { kind, file } => run_check(*kind, file, tol),
        Cmd::Decompose { file } => {
            let rho = load_gfunc(file)?;
            let outcome = decomp::decompose(&rho, tol)?;
            Ok(render_outcome(outcome))
        }
        Cmd::Inequality { mu, nu, c } => {
            let mu = load_gfunc(mu)?;
            let nu = load_gfunc(nu)?;
            let outcome = decomp::check_inequality(&mu, &nu, *c, tol)?;
            let (mut value, code) = render_outcome(outcome);
            value["c"] = json!(c);
            Ok((value, code))
        }
        Cmd::Interval { mu, nu } => {
            let mu = load_gfunc(mu)?;
            let nu = load_gfunc(nu)?;
            let iv = decomp::admissible_interval(&mu, &nu, tol)?;
            Ok((
                json!({"empty": iv.empty, "lo": iv.lo, "hi": iv.hi}),
                EXIT_OK,
            ))
        }
        Cmd::Extremal { which } => run_extremal(which, tol),
        Cmd::Logan { t } => {
            let bound = extremal::logan_bound(*t)?;
            Ok((Value::String(format!("{bound}")), EXIT_OK))
        }
        Cmd::LoganCompare { t, n, half_width } => {
            let bound = extremal::logan_bound(*t)?;
            let (_, u, v) = extremal::discretize_line(*t, *half_width, *n)?;
            let r = extremal::s_value(&u, &v, tol)?;
            Ok((
                json!({
                    "t": t,
                    "n": n,
                    "half_width": half_width,
                    "logan_bound": bound,
                    "lp_value": r.value,
                    "ratio": r.value / bound,
                    "gap": r.gap,
                }),
                EXIT_OK,
            ))
        }
        Cmd::Atomic { which } => run_atomic(which, tol),
        Cmd::BoasKac { file } => {
            let f = load_gfunc(file)?;
            match cones::boas_kac_root(&f, tol) {
                Ok(root) => {
                    let square = cones::convolution_square(&root);
                    let residual = square.sup_distance(&f).expect("same group");
                    Ok((
                        json!({"root": gfunc_json(&root), "residual": residual}),
                        EXIT_OK,
                    ))
                }
                Err(cones::ConeError::NotPositiveDefinite { min }) => Ok((
                    json!({"error": "not positive definite", "min_transform_re": min}),
                    EXIT_NON_MEMBER,
                )),
                Err(e) => Err(input_err(e)),
            }
        }
        Cmd::Selftest { seed, cases } => run_selftest(*seed, *cases, tol),
    }
}

fn load_gfunc(path: &Path) -> Result<GFunc, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<CircleMeasure, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn gfunc_json(f: &GFunc) -> Value {
    serde_json::to_value(f).expect("gfunc serialization")
}

fn run_check(kind: CheckKind, file: &Path, tol: f64) -> Result<(Value, u8), CliError> {
    let f = load_gfunc(file)?;
    let spectrum = spectral::dft(&f);
    let (min_re, min_re_at) = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.re, i))
        .fold((f64::INFINITY, 0), |acc, (re, i)| {
            if re < acc.0 {
                (re, i)
            } else {
                acc
            }
        });
    let max_im = spectrum
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0f64, f64::max);
    let (holds, mut evidence) = match kind {
        CheckKind::Pd | CheckKind::Postype => (
            cones::is_pd_fourier(&f, tol),
            json!({"min_transform_re": min_re, "min_at": min_re_at, "max_transform_im": max_im}),
        ),
        CheckKind::PostypeReal => (
            cones::is_postype_real_sense(&f, tol),
            json!({"min_transform_re": min_re, "min_at": min_re_at}),
        ),
        CheckKind::DoublyPositive => {
            let min_value = f
                .values()
                .iter()
                .map(|v| v.re)
                .fold(f64::INFINITY, f64::min);
            (
                cones::is_doubly_positive(&f, tol),
                json!({
                    "min_value_re": min_value,
                    "min_transform_re": min_re,
                    "min_at": min_re_at,
                    "max_imag": f.max_imag(),
                }),
            )
        }
    };
    evidence["holds"] = json!(holds);
    evidence["tol"] = json!(tol);
    Ok((
        evidence,
        if holds { EXIT_OK } else { EXIT_NON_MEMBER },
    ))
}

fn render_outcome(outcome: DecompOutcome) -> (Value, u8) {
    match outcome {
        DecompOutcome::Member(d) => (
            json!({
                "status": "member",
                "omega": gfunc_json(&d.omega),
                "tau": gfunc_json(&d.tau),
                "odd": gfunc_json(&d.odd),
                "residual": d.residual,
            }),
            EXIT_OK,
        ),
        DecompOutcome::NonMember(w) => (
            json!({
                "status": "non_member",
                "witness": gfunc_json(&w.f),
                "pairing": w.pairing,
            }),
            EXIT_NON_MEMBER,
        ),
    }
}

fn parse_group(text: &str) -> Result<GroupSpec, CliError> {
    let orders: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(input_err))
        .collect::<Result<_, _>>()?;
    GroupSpec::new(orders).map_err(input_err)
}

/// One window member: a signed integer for cyclic groups, or a colon-joined
/// signed tuple for multi-factor groups; components reduce modulo their
/// factor order.
fn parse_member(group: &GroupSpec, token: &str) -> Result<usize, CliError> {
    let legs: Vec<i64> = token
        .split(':')
        .map(|t| t.trim().parse::<i64>().map_err(input_err))
        .collect::<Result<_, _>>()?;
    if legs.len() != group.num_factors() {
        return Err(CliError::Input(format!(
            "member '{token}' has {} components, group has {} factors",
            legs.len(),
            group.num_factors()
        )));
    }
    let elem: Vec<usize> = legs
        .iter()
        .zip(group.factor_orders())
        .map(|(&v, &n)| v.rem_euclid(n as i64) as usize)
        .collect();
    group.elem_to_index(&elem).map_err(input_err)
}

fn parse_window(group: &GroupSpec, text: &str) -> Result<Window, CliError> {
    let members: Vec<usize> = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_member(group, t))
        .collect::<Result<_, _>>()?;
    Window::new(group.clone(), members).map_err(input_err)
}

fn extremal_json(r: &ExtremalResult) -> Value {
    json!({
        "value": r.value,
        "optimizer": gfunc_json(&r.optimizer),
        "dual_C": r.dual_c,
        "dual_g": gfunc_json(&r.dual_g),
        "gap": r.gap,
    })
}

fn run_extremal(which: &ExtremalCmd, tol: f64) -> Result<(Value, u8), CliError> {
    match which {
        ExtremalCmd::S { windows } => {
            let group = parse_group(&windows.group)?;
            let u = parse_window(&group, &windows.u)?;
            let v = parse_window(&group, &windows.v)?;
            let r = extremal::s_value(&u, &v, tol)?;
            Ok((extremal_json(&r), EXIT_OK))
        }
        ExtremalCmd::Q { group, u, k } => {
            let group = parse_group(group)?;
            let u = parse_window(&group, u)?;
            let r = extremal::q_value(&u, *k, tol)?;
            Ok((extremal_json(&r), EXIT_OK))
        }
        ExtremalCmd::T { group, u, g } => {
            let group = parse_group(group)?;
            let u = parse_window(&group, u)?;
            let shift_index = parse_member(&group, g)?;
            let shift = group.index_to_elem(shift_index).map_err(input_err)?;
            let r = extremal::t_value(&u, &shift, tol)?;
            Ok((extremal_json(&r), EXIT_OK))
        }
        ExtremalCmd::Sigma { windows } => {
            let group = parse_group(&windows.group)?;
            let u = parse_window(&group, &windows.u)?;
            let v = parse_window(&group, &windows.v)?;
            let (c, g) = extremal::sigma_value(&u, &v, tol)?;
            Ok((
                json!({"C": c, "sigma": c / 2.0, "g": gfunc_json(&g)}),
                EXIT_OK,
            ))
        }
        ExtremalCmd::Duality { windows } => {
            let group = parse_group(&windows.group)?;
            let u = parse_window(&group, &windows.u)?;
            let v = parse_window(&group, &windows.v)?;
            let report = extremal::duality_check(&u, &v, tol)?;
            Ok((
                json!({
                    "s": extremal_json(&report.s),
                    "sigma": report.sigma,
                    "sigma_C": report.sigma_c,
                    "sigma_g": gfunc_json(&report.sigma_g),
                    "gap": report.gap,
                }),
                EXIT_OK,
            ))
        }
    }
}

fn complex_json(v: Complex64) -> Value {
    json!([v.re, v.im])
}

fn run_atomic(which: &AtomicCmd, tol: f64) -> Result<(Value, u8), CliError> {
    match which {
        AtomicCmd::Mass { file, n, x0 } => {
            let m = load_measure(file)?;
            let estimate = circle::atomic_mass(&m, *x0, *n);
            let bound = circle::atomic_mass_bound(&m, *x0, *n);
            let stored = circle::stored_mass(&m, *x0);
            Ok((
                json!({
                    "x0": x0,
                    "n": n,
                    "estimate": complex_json(estimate),
                    "stored": complex_json(stored),
                    "error": (estimate - stored).norm(),
                    "bound": bound,
                }),
                EXIT_OK,
            ))
        }
        AtomicCmd::Energy { file, n } => {
            let m = load_measure(file)?;
            let estimate = circle::energy(&m, *n);
            let exact = circle::atomic_energy(&m);
            Ok((
                json!({
                    "n": n,
                    "estimate": estimate,
                    "atomic_energy": exact,
                    "error": (estimate - exact).abs(),
                    "bound": circle::energy_bound(&m, *n),
                }),
                EXIT_OK,
            ))
        }
        AtomicCmd::Check { file, n } => {
            let m = load_measure(file)?;
            let report = circle::atomic_part_postype_check(&m, *n, tol);
            let code = if report.holds {
                EXIT_OK
            } else {
                EXIT_NON_MEMBER
            };
            Ok((serde_json::to_value(&report).expect("report"), code))
        }
    }
}

/// Random instances solved and re-verified end to end: LP strong duality,
/// decomposition certificates in both directions, and window duality.
fn run_selftest(seed: u64, cases: usize, tol: f64) -> Result<(Value, u8), CliError> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: Vec<String> = Vec::new();
    for case in 0..cases {
        let n = rng.random_range(2..=12);
        let group = GroupSpec::cyclic(n).map_err(input_err)?;
        // decompose a random signed function and re-verify whichever
        // certificate comes back
        let rho = GFunc::from_fn(group.clone(), |_| {
            Complex64::new(rng.random_range(-1.0..1.0), 0.0)
        });
        match decomp::decompose(&rho, tol) {
            Ok(DecompOutcome::Member(d)) => {
                if d.residual > 1e-8 {
                    failures.push(format!("case {case}: residual {}", d.residual));
                }
            }
            Ok(DecompOutcome::NonMember(w)) => {
                if decomp::verify_witness(&rho, &w.f, tol).is_err() {
                    failures.push(format!("case {case}: witness failed"));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
        // window duality on a random symmetric U and arbitrary V
        let mut u: Vec<usize> = vec![0];
        for x in 1..n {
            if rng.random_bool(0.4) {
                u.push(x);
                u.push((n - x) % n);
            }
        }
        let v: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.4)).collect();
        if !v.is_empty() {
            let u = Window::new(group.clone(), u).map_err(input_err)?;
            let v = Window::new(group, v).map_err(input_err)?;
            match extremal::duality_check(&u, &v, tol) {
                Ok(report) => {
                    if report.gap > extremal::DUALITY_GAP_TOL {
                        failures.push(format!("case {case}: gap {}", report.gap));
                    }
                }
                Err(e) => failures.push(format!("case {case}: {e}")),
            }
        }
    }
    let ok = failures.is_empty();
    let value = json!({
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "ok": ok,
        "lp_feas_tol": lp::FEAS_TOL,
    });
    Ok((value, if ok { EXIT_OK } else { EXIT_SOLVER }))
}
