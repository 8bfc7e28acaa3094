//! `qgame`: command-line front end for qgame-core.

mod emit;
mod schema;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use qgame_core::correlation::{
    axis_a, axis_b, solve, sweep, CorrelationGameSpec, CorrelationModel, SolveOptions, AXIS_Z,
};
use qgame_core::epr::{arbiter_report, reward, run_protocol_with, simulate_report, write_csv, ProtocolConfig};
use qgame_core::game::{is_pareto_optimal, mixed_nash, pure_nash, BimatrixGame};
use qgame_core::gfun::{GFunction, GParams};
use qgame_core::lhv::{
    chsh_from_measure, correlated_payoffs, lhv_to_stats, pd_ne_analysis, perfect_corr_reduce, scan_m13, GameEntries,
    LhvMeasure,
};
use qgame_core::par::Execution;
use qgame_core::quantum::{self, chsh_quantum, ChshSettings, EisertMove, PureState};

use emit::{Emitter, Format, Payload, Table};

pub enum CliError {
    Usage(String),
    Core(qgame_core::Error),
    Io(String),
}

impl From<qgame_core::Error> for CliError {
    fn from(e: qgame_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "qgame", version, about = "Two-player EPR-type quantum games")]
struct Cli {
    /// Write the output to this file instead of stdout. A bare `json` or
    /// `csv` selects the format instead.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output format; defaults to csv for tabular commands, json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Read angle arguments in degrees.
    #[arg(long, global = true)]
    deg: bool,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    /// Print a description of the command's output fields and exit.
    #[arg(long, global = true)]
    schema: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical 2x2 games.
    #[command(subcommand)]
    Game(GameCmd),
    /// g-functions mapping directions to probabilities.
    #[command(subcommand)]
    Gfun(GfunCmd),
    /// Correlation games built from a classical game and a g-function.
    #[command(subcommand, name = "corr-game")]
    CorrGame(CorrGameCmd),
    /// Monte Carlo simulation of the EPR protocol.
    #[command(subcommand)]
    Epr(EprCmd),
    /// Local hidden-variable four-coin model.
    #[command(subcommand)]
    Lhv(LhvCmd),
    /// Quantum references: CHSH, Eisert, Meyer, separability.
    #[command(subcommand)]
    Quantum(QuantumCmd),
}

#[derive(Subcommand)]
enum GameCmd {
    /// Pure and mixed equilibria, coefficients and Pareto optimality.
    Analyze(GameArgs),
}

#[derive(Subcommand)]
enum GfunCmd {
    /// Sample g on a uniform grid over [0, pi].
    Plot(GPlotArgs),
    /// Evaluate g at one angle.
    Eval(GEvalArgs),
    /// All angles where g attains a probability.
    Inverse(GProbArgs),
    /// The induced probability map Q_g or its inverse.
    Q(GQArgs),
}

#[derive(Subcommand)]
enum CorrGameCmd {
    /// Classical and quantum equilibria.
    Solve(SolveArgs),
    /// Payoffs over a grid of directions.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum EprCmd {
    /// Run the protocol and report the arbiter's statistics.
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum LhvCmd {
    /// Statistics, CHSH value and equilibrium test for a measure.
    Analyze(LhvAnalyzeArgs),
    /// Equilibrium existence along the m13 family.
    #[command(name = "scan-m13")]
    ScanM13(ScanArgs),
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// CHSH value for c00|00> + c11|11>.
    Chsh(ChshArgs),
    /// Eisert-Wilkens-Lewenstein quantum Prisoner's Dilemma.
    Eisert(EisertArgs),
    /// Meyer's penny flip.
    Meyer(MeyerArgs),
    /// Whether a real two-qubit state is a product state.
    Separable(SeparableArgs),
}

#[derive(Args, Serialize)]
struct GameArgs {
    /// Built-in game: pd1, pd2, matching-pennies, bos, model-of-entry.
    #[arg(long, default_value = "pd1", conflicts_with = "game_file")]
    game: String,
    /// JSON file with a `cells` array.
    #[arg(long)]
    game_file: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GArgs {
    /// Built-in g-function g1..g8.
    #[arg(long, default_value = "g3", conflicts_with = "g_file")]
    g: String,
    #[arg(long)]
    delta: Option<f64>,
    /// Angle parameter (radians unless --deg).
    #[arg(long)]
    eps: Option<f64>,
    /// JSON file with a `pieces` array.
    #[arg(long)]
    g_file: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GPlotArgs {
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[arg(long, default_value_t = 200)]
    steps: usize,
}

#[derive(Args, Serialize)]
struct GEvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Args, Serialize)]
struct GProbArgs {
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
}

#[derive(Args, Serialize)]
struct GQArgs {
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    /// Apply Q_g^-1 instead of Q_g.
    #[arg(long)]
    inverse: bool,
}

#[derive(Args, Serialize)]
struct ModelArgs {
    /// classical, singlet or mixture.
    #[arg(long, default_value = "singlet")]
    model: String,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    game: GameArgs,
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Points per axis of the confirming grid.
    #[arg(long, default_value_t = 1001)]
    grid_n: usize,
    #[arg(long, default_value_t = 1e-9)]
    grid_tol: f64,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    game: GameArgs,
    #[command(flatten)]
    #[serde(flatten)]
    g: GArgs,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Intervals per axis; emits (steps + 1)^2 rows.
    #[arg(long, default_value_t = 50)]
    steps: usize,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[arg(long)]
    theta_a: f64,
    #[arg(long)]
    theta_b: f64,
    /// Alice's probability of measuring along z; defaults to g(theta_A).
    #[arg(long)]
    pa: Option<f64>,
    /// Bob's probability of measuring along z; defaults to g(theta_B).
    #[arg(long)]
    pb: Option<f64>,
    /// g-function for default probabilities and the reward.
    #[arg(long, default_value = "g1")]
    g: String,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Game for the reward.
    #[arg(long, default_value = "pd1")]
    game: String,
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    /// Also write every run as CSV `run,axisA,axisB,a,b`.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LhvAnalyzeArgs {
    /// JSON array of 16 weights.
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, default_value = "pd1")]
    game: String,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 400)]
    steps: usize,
    #[arg(long, default_value = "pd2")]
    game: String,
}

#[derive(Args, Serialize)]
struct ChshArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    c00: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    c11: f64,
    /// x component of Bob's axis b; b' mirrors it.
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    xb: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    zb: f64,
}

#[derive(Args, Serialize)]
struct EisertArgs {
    /// Symmetric game supplying (r, s, t, u).
    #[arg(long, default_value = "pd1")]
    game: String,
    /// Entanglement, in [0, pi/2].
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    gamma: f64,
    /// Both players use Q = U(0, pi/2).
    #[arg(long, conflicts_with_all = ["a_theta", "a_phi", "b_theta", "b_phi"])]
    qq: bool,
    #[arg(long, default_value_t = 0.0)]
    a_theta: f64,
    #[arg(long, default_value_t = 0.0)]
    a_phi: f64,
    #[arg(long, default_value_t = 0.0)]
    b_theta: f64,
    #[arg(long, default_value_t = 0.0)]
    b_phi: f64,
}

#[derive(Args, Serialize)]
struct MeyerArgs {
    /// Probability that Picard flips.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
}

#[derive(Args, Serialize)]
struct SeparableArgs {
    /// Four real amplitudes of |00>, |01>, |10>, |11>, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    amps: Vec<f64>,
}

struct Ctx {
    seed: u64,
    deg: bool,
    exec: Execution,
}

impl Ctx {
    fn angle(&self, x: f64) -> f64 {
        if self.deg {
            x.to_radians()
        } else {
            x
        }
    }

    fn config<A: Serialize>(&self, command: &str, args: &A) -> Value {
        json!({
            "command": command,
            "args": serde_json::to_value(args).expect("arguments serialize"),
            "seed": self.seed,
            "deg": self.deg,
        })
    }
}

fn read(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_game(args: &GameArgs) -> CliResult<(BimatrixGame, String)> {
    match &args.game_file {
        Some(path) => Ok((BimatrixGame::from_json(&read(path)?)?, path.display().to_string())),
        None => Ok((BimatrixGame::named(&args.game)?, args.game.clone())),
    }
}

fn build_g(ctx: &Ctx, name: &str, delta: Option<f64>, eps: Option<f64>) -> CliResult<GFunction> {
    let defaults = GParams::default();
    let params = GParams {
        delta: delta.unwrap_or(defaults.delta),
        eps: eps.map(|e| ctx.angle(e)).unwrap_or(defaults.eps),
    };
    Ok(GFunction::builtin(name, params)?)
}

fn load_g(ctx: &Ctx, args: &GArgs) -> CliResult<GFunction> {
    match &args.g_file {
        Some(path) => Ok(GFunction::from_json(&read(path)?)?),
        None => build_g(ctx, &args.g, args.delta, args.eps),
    }
}

/// Records the g-function actually used, defaults filled in.
fn with_g(mut config: Value, g: &GFunction) -> Value {
    config["g"] = json!({"name": g.name(), "params": g.params()});
    config
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Ctx {
        seed: cli.seed,
        deg: cli.deg,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let (format, out) = match cli.out.as_deref() {
        Some("json") => (Some(Format::Json), None),
        Some("csv") => (Some(Format::Csv), None),
        Some(path) => (cli.format, Some(PathBuf::from(path))),
        None => (cli.format, None),
    };
    if cli.format.is_some() && format != cli.format {
        return Err(CliError::Usage("--format conflicts with --out".into()));
    }
    let emitter = Emitter {
        format,
        out,
        quiet: cli.quiet,
    };

    let (config, payload) = match cli.command {
        Command::Game(GameCmd::Analyze(a)) => {
            let (game, _) = load_game(&a)?;
            let pareto: Vec<String> = (0..4)
                .map(|i| (i / 2, i % 2))
                .filter(|&(r, c)| is_pareto_optimal(&game, r, c))
                .map(|(r, c)| game.cell_label(r, c))
                .collect();
            let body = json!({
                "cells": game.cells(),
                "coeffs_a": game.coeffs_a(),
                "coeffs_b": game.coeffs_b(),
                "symmetric": game.is_symmetric(),
                "pure_ne": pure_nash(&game),
                "mixed_ne": mixed_nash(&game),
                "pareto_optimal": pareto,
            });
            (ctx.config("game analyze", &a), Payload::Object(body))
        }
        Command::Gfun(cmd) => gfun(&ctx, cmd)?,
        Command::CorrGame(CorrGameCmd::Solve(a)) => {
            let (game, name) = load_game(&a.game)?;
            let spec = CorrelationGameSpec::new(game, load_g(&ctx, &a.g)?, CorrelationModel::parse(&a.model.model)?);
            let opts = SolveOptions {
                grid_n: a.grid_n,
                grid_tol: a.grid_tol,
                exec: ctx.exec,
            };
            let report = solve(&spec, &name, opts)?;
            (
                with_g(ctx.config("corr-game solve", &a), &spec.g),
                Payload::Object(to_value(&report)),
            )
        }
        Command::CorrGame(CorrGameCmd::Sweep(a)) => {
            let (game, _) = load_game(&a.game)?;
            let spec = CorrelationGameSpec::new(game, load_g(&ctx, &a.g)?, CorrelationModel::parse(&a.model.model)?);
            let rows = sweep(&spec, a.steps, ctx.exec)
                .into_iter()
                .map(|r| r.iter().map(|&x| json!(x)).collect())
                .collect();
            let table = Table {
                header: vec!["theta_a", "theta_b", "payoff_a", "payoff_b"],
                rows,
            };
            (
                with_g(ctx.config("corr-game sweep", &a), &spec.g),
                Payload::Table(table),
            )
        }
        Command::Epr(EprCmd::Simulate(a)) => simulate(&ctx, a)?,
        Command::Lhv(LhvCmd::Analyze(a)) => {
            let measure = LhvMeasure::from_json(&read(&a.measure)?)?;
            let entries = GameEntries::named(&a.game)?;
            let stats = lhv_to_stats(&measure);
            let (ne, split, reduction_error) = match perfect_corr_reduce(&measure) {
                Ok(pc) => (
                    to_value(&pd_ne_analysis(&entries, &measure)?),
                    to_value(&correlated_payoffs(&entries, &pc)),
                    Value::Null,
                ),
                Err(e) => (Value::Null, Value::Null, Value::from(e.to_string())),
            };
            let body = json!({
                "measure": measure.m,
                "negative_indices": measure.negative_indices(),
                "stats": stats,
                "stats_check": stats.validate(),
                "chsh": chsh_from_measure(&measure),
                "ne_analysis": ne,
                "split_payoffs": split,
                "reduction_error": reduction_error,
            });
            (ctx.config("lhv analyze", &a), Payload::Object(body))
        }
        Command::Lhv(LhvCmd::ScanM13(a)) => {
            let entries = GameEntries::named(&a.game)?;
            let rows = scan_m13(&entries, a.from, a.to, a.steps)?
                .into_iter()
                .map(|r| {
                    vec![
                        json!(r.m13),
                        json!(r.s2),
                        json!(r.s2_p),
                        json!(r.sum),
                        json!(r.ne_exists),
                        json!(r.summed_condition),
                        json!(r.payoff_a),
                        json!(r.payoff_b),
                    ]
                })
                .collect();
            let header = vec![
                "m13",
                "s2",
                "s2_p",
                "sum",
                "ne_exists",
                "summed_condition",
                "payoff_a",
                "payoff_b",
            ];
            (ctx.config("lhv scan-m13", &a), Payload::Table(Table { header, rows }))
        }
        Command::Quantum(cmd) => quantum_cmd(&ctx, cmd)?,
    };
    emitter.emit(&config, payload)
}

fn gfun(ctx: &Ctx, cmd: GfunCmd) -> CliResult<(Value, Payload)> {
    Ok(match cmd {
        GfunCmd::Plot(a) => {
            let g = load_g(ctx, &a.g)?;
            let rows = g
                .sample(a.steps)
                .into_iter()
                .map(|(t, v)| vec![json!(t), json!(v)])
                .collect();
            (
                with_g(ctx.config("gfun plot", &a), &g),
                Payload::Table(Table {
                    header: vec!["theta", "g"],
                    rows,
                }),
            )
        }
        GfunCmd::Eval(a) => {
            let g = load_g(ctx, &a.g)?;
            let theta = ctx.angle(a.theta);
            let body = json!({"theta": theta, "value": g.eval(theta)?});
            (with_g(ctx.config("gfun eval", &a), &g), Payload::Object(body))
        }
        GfunCmd::Inverse(a) => {
            let g = load_g(ctx, &a.g)?;
            if !(0.0..=1.0).contains(&a.p) {
                return Err(qgame_core::Error::Domain {
                    what: "p",
                    value: a.p,
                    range: "[0, 1]",
                }
                .into());
            }
            let mut body = to_value(&g.inverse_set(a.p));
            body["p"] = json!(a.p);
            (with_g(ctx.config("gfun inverse", &a), &g), Payload::Object(body))
        }
        GfunCmd::Q(a) => {
            let g = load_g(ctx, &a.g)?;
            let (direction, values) = if a.inverse {
                ("inverse", g.q_inverse(a.p)?)
            } else {
                ("forward", g.q_transform(a.p)?)
            };
            let body = json!({"p": a.p, "direction": direction, "values": values});
            (with_g(ctx.config("gfun q", &a), &g), Payload::Object(body))
        }
    })
}

fn simulate(ctx: &Ctx, a: SimulateArgs) -> CliResult<(Value, Payload)> {
    let model = CorrelationModel::parse(&a.model.model)?;
    let g = build_g(ctx, &a.g, a.delta, a.eps)?;
    let game = BimatrixGame::named(&a.game)?;
    let (theta_a, theta_b) = (ctx.angle(a.theta_a), ctx.angle(a.theta_b));
    let p_a = match a.pa {
        Some(p) => p,
        None => g.eval(theta_a)?,
    };
    let p_b = match a.pb {
        Some(p) => p,
        None => g.eval(theta_b)?,
    };
    let config = ProtocolConfig {
        theta_a,
        theta_b,
        p_a,
        p_b,
        model: model.clone(),
        runs: a.runs,
        seed: ctx.seed,
    };
    let report = match &a.records {
        Some(path) => {
            let records = run_protocol_with(&config, ctx.exec)?;
            let file = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_csv(&records, std::io::BufWriter::new(file))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            arbiter_report(&records)?
        }
        None => simulate_report(&config, ctx.exec)?,
    };
    let (ea, eb) = (axis_a(theta_a), axis_b(theta_b));
    let body = json!({
        "report": report,
        "expected": {
            "ac": model.corr_pair(ea, AXIS_Z),
            "cb": model.corr_pair(AXIS_Z, eb),
            "ab": model.corr_pair(ea, eb),
        },
        "reward": reward(&report, &game, &g).ok(),
        "records": a.records.as_ref().map(|p| p.display().to_string()),
    });
    let mut echo = with_g(ctx.config("epr simulate", &a), &g);
    echo["resolved"] = to_value(&config);
    Ok((echo, Payload::Object(body)))
}

fn quantum_cmd(ctx: &Ctx, cmd: QuantumCmd) -> CliResult<(Value, Payload)> {
    Ok(match cmd {
        QuantumCmd::Chsh(a) => {
            let settings = ChshSettings::family(a.xb, a.zb)?;
            let mut body = to_value(&chsh_quantum(a.c00, a.c11, &settings)?);
            body["settings"] = to_value(&settings);
            (ctx.config("quantum chsh", &a), Payload::Object(body))
        }
        QuantumCmd::Eisert(a) => {
            let game = BimatrixGame::named(&a.game)?;
            if !game.is_symmetric() {
                return Err(qgame_core::Error::InvalidGame(format!("'{}' is not symmetric", a.game)).into());
            }
            let cells = [
                game.cell(0, 0).0,
                game.cell(0, 1).0,
                game.cell(1, 0).0,
                game.cell(1, 1).0,
            ];
            let (ma, mb) = if a.qq {
                (EisertMove::Q, EisertMove::Q)
            } else {
                (
                    EisertMove {
                        theta: ctx.angle(a.a_theta),
                        phi: ctx.angle(a.a_phi),
                    },
                    EisertMove {
                        theta: ctx.angle(a.b_theta),
                        phi: ctx.angle(a.b_phi),
                    },
                )
            };
            let gamma = ctx.angle(a.gamma);
            let probs: Vec<f64> = quantum::eisert_final_state(ma, mb, gamma)?
                .iter()
                .map(|c| c.norm_sqr())
                .collect();
            let payoffs = quantum::eisert_pd(cells, ma, mb, gamma)?;
            let body = json!({"move_a": ma, "move_b": mb, "probabilities": probs, "payoffs": payoffs});
            (ctx.config("quantum eisert", &a), Payload::Object(body))
        }
        QuantumCmd::Meyer(a) => {
            let body = json!({
                "win_probability": quantum::meyer_penny_flip(a.p)?,
                "classical_win_probability": quantum::meyer_classical_q(a.p)?,
            });
            (ctx.config("quantum meyer", &a), Payload::Object(body))
        }
        QuantumCmd::Separable(a) => {
            let state = PureState::from_real(&a.amps)?;
            let body = json!({"separable": quantum::is_separable(&state)?});
            (ctx.config("quantum separable", &a), Payload::Object(body))
        }
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    if argv.iter().any(|a| a == "--schema") {
        let path = schema::command_path(&argv);
        return match schema::schema(&path) {
            Some(s) => {
                println!("{}", serde_json::to_string_pretty(&s).expect("schema serializes"));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: no schema for '{}'", path.join(" "));
                ExitCode::from(2)
            }
        };
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(err) => {
            let (kind, message) = match err {
                CliError::Core(e) => (e.kind(), e.to_string()),
                CliError::Io(m) => ("io", m),
                CliError::Usage(_) => unreachable!(),
            };
            eprintln!("{}", json!({"error": kind, "message": message}));
            ExitCode::from(1)
        }
    }
}
