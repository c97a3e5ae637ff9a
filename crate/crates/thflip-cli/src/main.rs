//! Command line front end: symbol file IO, analysis and factorization
//! commands, verification against the numerical oracle, and the identity
//! suite.
//!
//! Exit codes: 0 success, 1 operator not Fredholm, 2 factorization or
//! verification failed, 3 input error, 4 oracle inconclusive or window
//! exhausted.

mod symbol_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use symbol_file::SymbolFile;
use thflip::antisym::{
    antisym_factor, asym_factor_left, asym_factor_right, check_signatures, signature_counts,
    CharPair,
};
use thflip::ops::{self, OperatorExpr};
use thflip::oracle;
use thflip::rational::{InvolutionMatrix, RationalMatrixFunction};
use thflip::solver::{self, FredholmReport, Route};
use thflip::wiener_hopf::{factor_matrix, verify_wh};
use thflip::{tol, Error};

#[derive(Parser)]
#[command(
    name = "thflip",
    version,
    about = "Wiener-Hopf and antisymmetric factorization of rational matrix symbols; \
             Fredholm analysis of Toeplitz + Hankel operators and singular integral \
             operators with flip"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// T(a) + H(b); inputs: a, b
    Th,
    /// M_W(A) = T(A) + H(AW); inputs: A, W
    Mw,
    /// N_W(A) = T(A) + H(WA~); inputs: A, W
    Nw,
    /// Φ(A) on (L²)^N; input: A (even size)
    Phi,
    /// Ψ(A) on (L²)^N; input: A (even size)
    Psi,
    /// General flip operator 𝒯(A) + ℋ(BW); inputs: A, B (even sizes)
    Sio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Wiener-Hopf factorization A = A₋ Λ A₊; input: F
    Wh,
    /// Antisymmetric factorization F = F₋ D F̃₋⁻¹; input: F
    Antisym,
    /// Asymmetric factorization A = A₋ R A₀; inputs: A, W
    AsymLeft,
    /// Asymmetric factorization A = A₀ R A₊; inputs: A, W
    AsymRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    /// Check X X† X = X and X† X X† = X† for the analyzed operator.
    Pseudoinverse,
    /// Compare Θ-formula dimensions with the singular value splitting count.
    Splitting,
    /// Check the sign counts of an antisymmetric factorization against
    /// the eigenvalue signatures of F(±1).
    Signatures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Fredholm report for an operator assembled from symbol files.
    ///
    /// `--input` binds positionally per kind: th → a, b; mw/nw → A, W;
    /// phi/psi → A; sio → A, B.
    Analyze {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        /// Reduction route for `th` (other kinds fix their route).
        #[arg(long, value_enum, default_value = "left")]
        route: RouteArg,
        /// Reject inputs whose denominator has roots within this distance
        /// of the unit circle (the library itself uses 1e-8).
        #[arg(long)]
        tol_circle: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Factorization dump with its verification report.
    ///
    /// `--input` binds per mode: wh/antisym → F; asym-left/right → A, W.
    Factor {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        tol_circle: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Oracle verification of analysis results.
    Verify {
        #[arg(long, value_enum)]
        what: What,
        /// Operator kind for pseudoinverse/splitting checks.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        /// Finite section sizes for the splitting test.
        #[arg(long, default_value = "40,80")]
        sizes: String,
        /// Relative singular value threshold for the splitting count.
        #[arg(long)]
        tol_rank: Option<f64>,
        /// Expansion window for rational symbols in apply-based checks.
        #[arg(long, default_value_t = 96)]
        window: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol_circle: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Seeded random run of the operator identity suite.
    Identities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotInvertibleOnCircle(_) => 1,
            Error::FactorizationFailed(_) | Error::SignatureMismatch(_) => 2,
            Error::Inconclusive(_) | Error::WindowTooSmall(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            kind,
            inputs,
            route,
            tol_circle,
            json,
        } => cmd_analyze(kind, &inputs, route, tol_circle, json),
        Command::Factor {
            mode,
            inputs,
            tol_circle,
            json,
        } => cmd_factor(mode, &inputs, tol_circle, json),
        Command::Verify {
            what,
            kind,
            inputs,
            sizes,
            tol_rank,
            window,
            seed,
            tol_circle,
            json,
        } => cmd_verify(
            what, kind, &inputs, &sizes, tol_rank, window, seed, tol_circle, json,
        ),
        Command::Identities { seed, cases, json } => cmd_identities(seed, cases, json),
    }
}

fn load_symbol(path: &PathBuf, tol_circle: Option<f64>) -> Result<RationalMatrixFunction, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let file = SymbolFile::parse(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let f = file
        .to_rational()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if !f.is_valid_on_circle() {
        return Err(Failure::input(format!(
            "{}: denominator has a root on the unit circle; not a symbol",
            path.display()
        )));
    }
    if let Some(margin) = tol_circle {
        let (_, roots) = f.denominator().roots();
        if roots.iter().any(|r| (r.norm() - 1.0).abs() <= margin) {
            return Err(Failure::input(format!(
                "{}: denominator root within {margin:.1e} of the circle",
                path.display()
            )));
        }
    }
    Ok(f)
}

fn load_involution(path: &PathBuf) -> Result<InvolutionMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    SymbolFile::parse(&text)
        .and_then(|file| file.to_involution())
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn expect_inputs(inputs: &[PathBuf], n: usize, what: &str) -> Result<(), Failure> {
    if inputs.len() != n {
        return Err(Failure::input(format!(
            "{what} expects {n} --input file(s), got {}",
            inputs.len()
        )));
    }
    Ok(())
}

fn analyze_by_kind(
    kind: Kind,
    inputs: &[PathBuf],
    route: RouteArg,
    tol_circle: Option<f64>,
) -> Result<FredholmReport, Failure> {
    let route = match route {
        RouteArg::Left => Route::Left,
        RouteArg::Right => Route::Right,
    };
    Ok(match kind {
        Kind::Th => {
            expect_inputs(inputs, 2, "analyze --kind th")?;
            let a = load_symbol(&inputs[0], tol_circle)?;
            let b = load_symbol(&inputs[1], tol_circle)?;
            solver::analyze_toeplitz_hankel(&a, &b, route)?
        }
        Kind::Mw | Kind::Nw => {
            expect_inputs(inputs, 2, "analyze --kind mw/nw")?;
            let a = load_symbol(&inputs[0], tol_circle)?;
            let w = load_involution(&inputs[1])?;
            if kind == Kind::Mw {
                solver::analyze_mw(&a, &w)?
            } else {
                solver::analyze_nw(&a, &w)?
            }
        }
        Kind::Phi | Kind::Psi => {
            expect_inputs(inputs, 1, "analyze --kind phi/psi")?;
            let a = load_symbol(&inputs[0], tol_circle)?;
            if kind == Kind::Phi {
                solver::analyze_phi(&a)?
            } else {
                solver::analyze_psi(&a)?
            }
        }
        Kind::Sio => {
            expect_inputs(inputs, 2, "analyze --kind sio")?;
            let a = load_symbol(&inputs[0], tol_circle)?;
            let b = load_symbol(&inputs[1], tol_circle)?;
            solver::analyze_general_sio(&a, &b)?
        }
    })
}

fn pairs_json(pairs: &[CharPair]) -> serde_json::Value {
    json!(pairs
        .iter()
        .map(|p| json!({ "rho": p.rho, "kappa": p.kappa }))
        .collect::<Vec<_>>())
}

fn report_json(kind: Kind, report: &FredholmReport) -> serde_json::Value {
    json!({
        "algebra": "rational",
        "kind": format!("{kind:?}").to_lowercase(),
        "route": match report.route { Route::Left => "left", Route::Right => "right" },
        "fredholm": report.fredholm,
        "index": report.index,
        "dim_ker": report.dim_ker,
        "dim_coker": report.dim_coker,
        "pairs": report.pairs.as_deref().map(pairs_json),
        "invertible": report.invertible,
        "pseudoinverse": report.pseudoinverse.as_ref().map(|p| p.to_string()),
        "window": report.window,
    })
}

fn print_report(kind: Kind, report: &FredholmReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report_json(kind, report)).unwrap()
        );
        return;
    }
    println!("kind: {kind:?}");
    println!("algebra: rational matrix functions without poles on |t| = 1");
    println!(
        "route: {}",
        match report.route {
            Route::Left => "left",
            Route::Right => "right",
        }
    );
    println!("fredholm: {}", report.fredholm);
    if !report.fredholm {
        println!("(no further data: the symbol determinant vanishes on the circle)");
        return;
    }
    println!("index: {}", report.index.unwrap());
    println!("dim ker: {}", report.dim_ker.unwrap());
    println!("dim coker: {}", report.dim_coker.unwrap());
    if let Some(pairs) = &report.pairs {
        let list: Vec<String> = pairs
            .iter()
            .map(|p| format!("({:+}, {})", p.rho, p.kappa))
            .collect();
        println!("pairs: {}", list.join(" "));
    }
    println!("invertible: {}", report.invertible.unwrap());
    if let Some(p) = &report.pseudoinverse {
        println!("pseudoinverse: {p}");
    }
    if let Some(w) = report.window {
        println!("window: {w}");
    }
}

fn cmd_analyze(
    kind: Kind,
    inputs: &[PathBuf],
    route: RouteArg,
    tol_circle: Option<f64>,
    json: bool,
) -> Result<u8, Failure> {
    let report = analyze_by_kind(kind, inputs, route, tol_circle)?;
    print_report(kind, &report, json);
    Ok(if report.fredholm { 0 } else { 1 })
}

fn cmd_factor(
    mode: Mode,
    inputs: &[PathBuf],
    tol_circle: Option<f64>,
    json: bool,
) -> Result<u8, Failure> {
    match mode {
        Mode::Wh => {
            expect_inputs(inputs, 1, "factor --mode wh")?;
            let f = load_symbol(&inputs[0], tol_circle)?;
            let fact = factor_matrix(&f)?;
            let rep = verify_wh(&fact, &f, tol::TAU_RESID)?;
            let out = json!({
                "mode": "wh",
                "partial_indices": fact.partial_indices,
                "minus": SymbolFile::from_rational(&fact.minus_factor, Some("A-")),
                "plus": SymbolFile::from_rational(&fact.plus_factor, Some("A+")),
                "verification": {
                    "residual": rep.residual,
                    "index_sum": rep.index_sum,
                    "winding": rep.winding,
                    "minus_membership": rep.minus_audit.pass(),
                    "plus_membership": rep.plus_audit.pass(),
                    "pass": rep.pass,
                },
            });
            emit(out, json);
            Ok(if rep.pass { 0 } else { 2 })
        }
        Mode::Antisym => {
            expect_inputs(inputs, 1, "factor --mode antisym")?;
            let f = load_symbol(&inputs[0], tol_circle)?;
            let fact = antisym_factor(&f)?;
            let residual =
                fact.compose()?.grid_distance(&f, tol::RESIDUAL_GRID)? / f.coeff_scale().max(1.0);
            let counts = signature_counts(&fact.pairs);
            let sig_ok = check_signatures(&f, &counts)?;
            let out = json!({
                "mode": "antisym",
                "pairs": pairs_json(&fact.pairs),
                "minus": SymbolFile::from_rational(&fact.minus_factor, Some("F-")),
                "signature_counts": {
                    "alpha": counts.alpha, "beta": counts.beta,
                    "gamma": counts.gamma, "delta": counts.delta,
                },
                "verification": { "residual": residual, "signatures": sig_ok, "pass": sig_ok },
            });
            emit(out, json);
            Ok(if sig_ok { 0 } else { 2 })
        }
        Mode::AsymLeft | Mode::AsymRight => {
            expect_inputs(inputs, 2, "factor --mode asym-left/right")?;
            let a = load_symbol(&inputs[0], tol_circle)?;
            let w = load_involution(&inputs[1])?;
            let fact = if mode == Mode::AsymLeft {
                asym_factor_left(&a, &w)?
            } else {
                asym_factor_right(&a, &w)?
            };
            let product = if mode == Mode::AsymLeft {
                fact.outer.mul(&fact.r)?.mul(&fact.zero)?
            } else {
                fact.zero.mul(&fact.r)?.mul(&fact.outer)?
            };
            let residual =
                product.grid_distance(&a, tol::RESIDUAL_GRID)? / a.coeff_scale().max(1.0);
            let out = json!({
                "mode": if mode == Mode::AsymLeft { "asym-left" } else { "asym-right" },
                "pairs": pairs_json(&fact.pairs),
                "outer": SymbolFile::from_rational(
                    &fact.outer,
                    Some(if mode == Mode::AsymLeft { "A-" } else { "A+" }),
                ),
                "middle": SymbolFile::from_rational(&fact.r, Some("R")),
                "zero": SymbolFile::from_rational(&fact.zero, Some("A0")),
                "verification": { "residual": residual, "pass": true },
            });
            emit(out, json);
            Ok(0)
        }
    }
}

fn emit(value: serde_json::Value, _json: bool) {
    // factor and verify outputs are structured data either way; pretty JSON
    // is also the readable form
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
}

/// Builds the Hardy-side operator expression for a kind (flip operators are
/// transported through Ξ).
fn operator_by_kind(kind: Kind, inputs: &[PathBuf]) -> Result<OperatorExpr, Failure> {
    Ok(match kind {
        Kind::Th => {
            let a = load_symbol(&inputs[0], None)?;
            let b = load_symbol(&inputs[1], None)?;
            solver::toeplitz_hankel_expr(&a, &b)?
        }
        Kind::Mw | Kind::Nw => {
            let a = load_symbol(&inputs[0], None)?;
            let w = load_involution(&inputs[1])?;
            if kind == Kind::Mw {
                ops::build_mw(&a, &w)?
            } else {
                ops::build_nw(&a, &w)?
            }
        }
        Kind::Phi | Kind::Psi => {
            let a = load_symbol(&inputs[0], None)?;
            let expr = if kind == Kind::Phi {
                ops::build_phi(&a)?
            } else {
                ops::build_psi(&a)?
            };
            ops::xi_transport(&expr)?
        }
        Kind::Sio => {
            let a = load_symbol(&inputs[0], None)?;
            let b = load_symbol(&inputs[1], None)?;
            ops::xi_transport(&ops::build_general_sio(&a, &b)?)?
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    what: What,
    kind: Option<Kind>,
    inputs: &[PathBuf],
    sizes: &str,
    tol_rank: Option<f64>,
    window: usize,
    seed: u64,
    tol_circle: Option<f64>,
    json: bool,
) -> Result<u8, Failure> {
    match what {
        What::Pseudoinverse => {
            let kind = kind.ok_or_else(|| Failure::input("--kind is required"))?;
            let report = analyze_by_kind(kind, inputs, RouteArg::Left, tol_circle)?;
            if !report.fredholm {
                println!("not fredholm: no pseudoinverse to verify");
                return Ok(1);
            }
            let x = operator_by_kind(kind, inputs)?;
            let xd_raw = report.pseudoinverse.clone().expect("fredholm report");
            // Flip-side operators were transported to the Hardy side; take
            // their pseudoinverses along.
            let xd = match kind {
                Kind::Phi | Kind::Psi | Kind::Sio => ops::xi_transport(&xd_raw)?,
                _ => xd_raw,
            };
            let check = oracle::verify_pseudoinverse(&x, &xd, 6, window, 1e-8, seed)?;
            let out = json!({
                "what": "pseudoinverse",
                "residual_xdx": check.residual_xdx,
                "residual_dxd": check.residual_dxd,
                "tail_bound": check.tail_bound,
                "pass": check.pass,
            });
            emit(out, json);
            Ok(if check.pass { 0 } else { 2 })
        }
        What::Splitting => {
            let kind = kind.ok_or_else(|| Failure::input("--kind is required"))?;
            let report = analyze_by_kind(kind, inputs, RouteArg::Left, tol_circle)?;
            if !report.fredholm {
                println!("not fredholm: sections do not split");
                return Ok(1);
            }
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::input(format!("bad --sizes list '{sizes}'")))?;
            let expr = operator_by_kind(kind, inputs)?;
            let est = oracle::sv_splitting(&expr, &sizes, tol_rank.unwrap_or(tol::TAU_SPLIT))?
                .ensure_confident()?;
            let formula = report.dim_ker.unwrap() + report.dim_coker.unwrap();
            let agree = est.total_defect == formula;
            let out = json!({
                "what": "splitting",
                "sizes": est.sizes_used,
                "total_defect": est.total_defect,
                "formula_defect": formula,
                "smallest_singular_values": est.smallest_singular_values
                    .iter().map(|(n, sv)| json!({"size": n, "values": sv})).collect::<Vec<_>>(),
                "confident": est.confident,
                "pass": agree,
            });
            emit(out, json);
            Ok(if agree { 0 } else { 2 })
        }
        What::Signatures => {
            expect_inputs(inputs, 1, "verify --what signatures")?;
            let f = load_symbol(&inputs[0], tol_circle)?;
            let fact = antisym_factor(&f)?;
            let counts = signature_counts(&fact.pairs);
            let ok = check_signatures(&f, &counts)?;
            let out = json!({
                "what": "signatures",
                "pairs": pairs_json(&fact.pairs),
                "counts": {
                    "alpha": counts.alpha, "beta": counts.beta,
                    "gamma": counts.gamma, "delta": counts.delta,
                },
                "pass": ok,
            });
            emit(out, json);
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn cmd_identities(seed: u64, cases: usize, json: bool) -> Result<u8, Failure> {
    let report = oracle::identity_suite(seed, cases)?;
    if json {
        let out = json!({
            "seed": seed,
            "cases": report.cases,
            "threshold": report.threshold,
            "results": report.results.iter().map(|r| json!({
                "name": r.name, "max_residual": r.max_residual, "pass": r.pass,
            })).collect::<Vec<_>>(),
            "pass": report.all_pass(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "identity suite: {} cases, threshold {:.1e}",
            report.cases, report.threshold
        );
        for r in &report.results {
            println!(
                "  {:<42} {:>10.3e}  {}",
                r.name,
                r.max_residual,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        println!(
            "overall: {} (worst {:.3e})",
            if report.all_pass() { "pass" } else { "FAIL" },
            report.worst()
        );
    }
    Ok(if report.all_pass() { 0 } else { 2 })
}
