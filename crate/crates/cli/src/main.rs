use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use qldp::exponents::{
    advantage_crossover, advantage_threshold, advantage_threshold_asym, advantage_threshold_sym, ratio_sweep, Mode,
};
use qldp::frames::{build_eitff, verify_eitff, FusionFrame};
use qldp::mechanisms::{binary_mechanism, sigma_star, Mechanism};
use qldp::metrics::{chernoff_information, classical_mutual_information, holevo_information, petz_metric, MetricKind};
use qldp::optimal::{asymptotic_prediction, kairouz_lp, kairouz_lp_symmetric, SublinearUtility, MAX_LP_INPUTS};
use qldp::reproduce::{self, sweep_table, Cell, Table, Target};
use qldp::taylor::{run_verification, Suite, DEFAULT_INSTANCES};
use qldp::{DensityMatrix, Hermitian};

#[derive(Parser, Debug)]
#[command(name = "qldp", version, about = "Quantum and classical LDP mechanisms, exponents and optima")]
struct Cli {
    /// Seed for randomized inputs.
    #[arg(long, global = true, env = "QLOCAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and verify equi-isoclinic tight fusion frames.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Construct and audit mechanisms.
    #[command(subcommand)]
    Mech(MechCmd),
    /// Information measures on states and mechanisms.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Error exponents, sweeps and advantage thresholds.
    #[command(subcommand)]
    Exp(ExpCmd),
    /// Classical optimum of sum-of-sublinear utilities.
    #[command(subcommand)]
    Opt(OptCmd),
    /// Taylor-expansion and property verification suites.
    Verify(VerifyArgs),
    /// Emit the tables behind the figures and thresholds.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand, Debug)]
enum FrameCmd {
    /// Write the frame for n inputs as JSON
    Build {
        #[arg(long)]
        n: usize,
        /// Clifford level; frame dimension is 2^(a+1)
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a frame file
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum MechCmd {
    /// Optimal isoclinic mechanism sigma*
    SigmaStar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binary-input mechanism b*
    Binary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the privacy level of a mechanism file
    Audit {
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MetricCmd {
    /// Quantum Chernoff information of two states
    Chernoff {
        a: PathBuf,
        b: PathBuf,
    },
    /// Holevo information of a mechanism under uniform prior
    Holevo {
        mech: PathBuf,
    },
    /// Petz metric J^f_rho(X, Y)
    Petz {
        #[arg(long, default_value = "bkm")]
        kind: String,
        rho: PathBuf,
        x: PathBuf,
        y: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ExpCmd {
    /// CSV of exponents and ratios over (n, eps)
    Sweep {
        /// Comma list or inclusive range `a..b`.
        #[arg(long)]
        n: String,
        /// `start:stop:step` or a comma list.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Also evaluate the isoclinic mechanism with this `u = r/d`.
        #[arg(long)]
        alt_u: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Advantage thresholds per n
    Thresholds {
        #[arg(long, default_value = "3..12")]
        n: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical advantage crossover for one n
    Crossover {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "sym")]
        mode: String,
    },
}

#[derive(Subcommand, Debug)]
enum OptCmd {
    /// Solve the vertex LP for the classical optimum
    Lp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "mi")]
        utility: String,
        #[arg(long, conflicts_with = "symmetric")]
        full: bool,
        #[arg(long)]
        symmetric: bool,
    },
    /// Small-eps classical vs quantum prediction
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "mi")]
        utility: String,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// taylor | properties | scalar | all
    #[arg(default_value = "all")]
    scope: String,
    /// Overrides the positional scope.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = DEFAULT_INSTANCES)]
    instances: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// fig1 | fig2 | thresholds | ratios
    target: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed check that is not an input error.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> anyhow::Result<()> {
    emit(&serde_json::to_string_pretty(value)?, out)
}

fn parse_list(spec: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
        if a > b {
            bail!("empty range {spec}");
        }
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|s| Ok(s.trim().parse()?)).collect()
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let (lo, hi, step): (f64, f64, f64) = (parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
        if !(step > 0.0 && hi >= lo) {
            bail!("bad grid {spec}");
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| lo + i as f64 * step).collect());
    }
    spec.split(',').map(|s| Ok(s.trim().parse()?)).collect()
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn run_frame(cmd: FrameCmd) -> anyhow::Result<()> {
    match cmd {
        FrameCmd::Build { n, a, out } => emit_json(&build_eitff(n, a)?, out.as_deref()),
        FrameCmd::Verify { file, tol } => {
            let frame: FusionFrame = read_json(&file)?;
            let cert = verify_eitff(&frame.projections, tol)?;
            emit_json(&cert, None)?;
            if !cert.is_eitff {
                return Err(qldp::Error::InvalidArgument("frame is not an EITFF".into()).into());
            }
            Ok(())
        }
    }
}

fn run_mech(cmd: MechCmd) -> anyhow::Result<()> {
    match cmd {
        MechCmd::SigmaStar { n, eps, out } => emit_json(&Mechanism::Qldp(sigma_star(n, eps)?), out.as_deref()),
        MechCmd::Binary { n, eps, out } => {
            emit_json(&Mechanism::Ldp(binary_mechanism(n, eps, None)?), out.as_deref())
        }
        MechCmd::Audit { file } => {
            let mech: Mechanism = read_json(&file)?;
            let (kind, n) = match &mech {
                Mechanism::Qldp(m) => ("qldp", m.n()),
                Mechanism::Ldp(m) => ("ldp", m.n_inputs()),
            };
            emit_json(
                &json!({
                    "kind": kind,
                    "n": n,
                    "declared_epsilon": mech.epsilon(),
                    "measured_level": mech.measured_level()?,
                    "valid": true,
                }),
                None,
            )
        }
    }
}

fn run_metric(cmd: MetricCmd) -> anyhow::Result<()> {
    match cmd {
        MetricCmd::Chernoff { a, b } => {
            let a: DensityMatrix = read_json(&a)?;
            let b: DensityMatrix = read_json(&b)?;
            emit_json(&json!({"chernoff": chernoff_information(&a, &b)?}), None)
        }
        MetricCmd::Holevo { mech } => {
            let value = match read_json::<Mechanism>(&mech)? {
                Mechanism::Qldp(m) => holevo_information(&vec![1.0 / m.n() as f64; m.n()], m.states())?,
                Mechanism::Ldp(m) => {
                    classical_mutual_information(&vec![1.0 / m.n_inputs() as f64; m.n_inputs()], m.columns())?
                }
            };
            emit_json(&json!({"holevo": value}), None)
        }
        MetricCmd::Petz { kind, rho, x, y } => {
            let kind: MetricKind = kind.parse()?;
            let rho: DensityMatrix = read_json(&rho)?;
            let x: Hermitian = read_json(&x)?;
            let y: Hermitian = match y {
                Some(p) => read_json(&p)?,
                None => x.clone(),
            };
            emit_json(&json!({"kind": kind.to_string(), "value": petz_metric(&rho, &x, &y, kind)?}), None)
        }
    }
}

fn run_exp(cmd: ExpCmd) -> anyhow::Result<()> {
    match cmd {
        ExpCmd::Sweep {
            n,
            eps,
            eta,
            alt_u,
            out,
        } => {
            let grid = parse_grid(&eps)?;
            let mut records = Vec::new();
            for n in parse_list(&n)? {
                records.extend(ratio_sweep(n, &grid, eta, alt_u)?);
            }
            emit(&sweep_table(&records).to_csv(), out.as_deref())
        }
        ExpCmd::Thresholds { n, out } => {
            let mut t = Table::new(&["n", "sym_bound", "asym_bound"]);
            for n in parse_list(&n)? {
                if n < 3 {
                    return Err(qldp::Error::InvalidArgument("thresholds need n >= 3".into()).into());
                }
                t.rows.push(vec![
                    Cell::Int(n),
                    advantage_threshold_sym(n).into(),
                    advantage_threshold_asym(n).into(),
                ]);
            }
            emit(&t.to_csv(), out.as_deref())
        }
        ExpCmd::Crossover { n, mode } => {
            let mode: Mode = mode.parse()?;
            let crossover = advantage_crossover(n, mode)?;
            emit_json(
                &json!({
                    "n": n,
                    "mode": format!("{mode:?}").to_lowercase(),
                    "threshold": advantage_threshold(n, mode),
                    "crossover": crossover.is_finite().then_some(crossover),
                }),
                None,
            )
        }
    }
}

fn run_opt(cmd: OptCmd) -> anyhow::Result<()> {
    match cmd {
        OptCmd::Lp {
            n,
            eps,
            utility,
            full,
            symmetric,
        } => {
            let phi = SublinearUtility::builtin(&utility, n)?;
            let use_full = full || (!symmetric && n <= MAX_LP_INPUTS);
            if use_full {
                let sol = kairouz_lp(n, eps, &phi)?;
                emit_json(
                    &json!({"n": n, "epsilon": eps, "utility": utility, "method": "full", "value": sol.value,
                            "status": sol.status, "weights": sol.weights}),
                    None,
                )
            } else {
                let value = kairouz_lp_symmetric(n, eps, &phi)?;
                emit_json(
                    &json!({"n": n, "epsilon": eps, "utility": utility, "method": "symmetric", "value": value}),
                    None,
                )
            }
        }
        OptCmd::Predict { n, utility } => {
            let phi = SublinearUtility::builtin(&utility, n)?;
            let p = asymptotic_prediction(n, phi.value_at_ones, phi.beta0)?;
            emit_json(&json!({"n": n, "utility": utility, "beta0": phi.beta0, "prediction": p}), None)
        }
    }
}

fn run_verify(args: VerifyArgs, seed: u64) -> anyhow::Result<()> {
    let suite: Suite = args.suite.as_deref().unwrap_or(&args.scope).parse()?;
    let report = run_verification(suite, seed, args.instances)?;
    let summary = json!({
        "suite": report.suite,
        "seed": seed,
        "passed": report.passed,
        "expansions": report.expansions.iter().map(|r| json!({
            "name": r.name, "t_grid": r.t_grid, "ratio_errors": r.ratio_errors,
            "fitted_order": r.fitted_order, "passed": r.passed,
        })).collect::<Vec<_>>(),
        "properties": report.properties,
    });
    emit_json(&summary, args.out.as_deref())?;
    if !report.passed {
        return Err(CheckFailed("verification suite reported failures".into()).into());
    }
    Ok(())
}

fn run_reproduce(args: ReproduceArgs, seed: u64) -> anyhow::Result<()> {
    let target: Target = args.target.parse()?;
    let csv = reproduce::table(target)?.to_csv();
    let out = args.out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", target.name())));
    fs::write(&out, &csv).with_context(|| format!("writing {}", out.display()))?;
    let sidecar = out.with_extension("json");
    let meta = json!({
        "target": target,
        "seed": seed,
        "parameters": reproduce::parameters(target),
        "files": [{
            "path": out.file_name().map(|s| s.to_string_lossy().into_owned()),
            "sha256": sha256_hex(csv.as_bytes()),
            "bytes": csv.len(),
        }],
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&meta)?)
        .with_context(|| format!("writing {}", sidecar.display()))?;
    println!("{}", out.display());
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global()?;
    }
    match cli.command {
        Command::Frame(c) => run_frame(c),
        Command::Mech(c) => run_mech(c),
        Command::Metric(c) => run_metric(c),
        Command::Exp(c) => run_exp(c),
        Command::Opt(c) => run_opt(c),
        Command::Verify(a) => run_verify(a, cli.seed),
        Command::Reproduce(a) => run_reproduce(a, cli.seed),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return 2;
    }
    match err.downcast_ref::<qldp::Error>() {
        Some(e) if e.is_internal() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
