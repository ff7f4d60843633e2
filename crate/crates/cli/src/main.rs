use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use summgame::learn::{LearnDiagnostics, ResolvedParameters, Termination, Trajectory};
use summgame::{
    brute_min_epsilon, parse_game, run_summ_learn, summ_nash, validate_certificate, AlphaGrid,
    EquilibriumCertificate, LearnConfig, MixedProfile, PureProfile, RegretMode, SummGame, VTable,
};

const TOOL: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "summgame",
    version,
    about = "Approximate equilibria of bounded-influence summarization games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a pure approximate equilibrium with the grid solver.
    Solve {
        game: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Write the table of (k alpha, V(I_k)) pairs as CSV.
        #[arg(long, value_name = "PATH")]
        emit_vtable: Option<PathBuf>,
    },
    /// Run the learning dynamics and certify the final mixed profile.
    Learn {
        game: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Learning rate; defaults to alpha / 2.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte-Carlo samples for the regret certificate of large games.
        #[arg(long, default_value_t = summgame::learn::DEFAULT_REGRET_SAMPLES)]
        regret_samples: u64,
        /// Common starting probability of action 1.
        #[arg(long, conflicts_with = "initial_file")]
        initial: Option<f64>,
        /// JSON array with one starting probability per player.
        #[arg(long, value_name = "PATH")]
        initial_file: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        trajectory: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        snapshot_every: u64,
        /// Include every player's probability in the trajectory.
        #[arg(long)]
        with_profiles: bool,
    },
    /// Recompute a certificate's regrets. Exit status 1 if it does not hold.
    Verify {
        game: PathBuf,
        /// A result document from `solve` or `learn`, or a bare certificate.
        certificate: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = summgame::learn::DEFAULT_REGRET_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search all pure profiles of a small game for the smallest max-regret.
    Brute { game: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

enum Failure {
    Invalid,
    Input(String),
    Capability(String),
}

impl From<summgame::Error> for Failure {
    fn from(e: summgame::Error) -> Self {
        match e {
            summgame::Error::Capability(_) => Failure::Capability(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    game_file: String,
    game_digest: String,
    players: usize,
    summarization: &'static str,
    tau: f64,
    rho: f64,
}

#[derive(Serialize)]
struct Document<B: Serialize> {
    #[serde(flatten)]
    header: Header,
    #[serde(flatten)]
    body: B,
    wall_clock_ms: f64,
}

#[derive(Serialize)]
struct GridSummary {
    alpha: f64,
    intervals: usize,
}

impl From<AlphaGrid> for GridSummary {
    fn from(g: AlphaGrid) -> Self {
        GridSummary {
            alpha: g.alpha(),
            intervals: g.len(),
        }
    }
}

#[derive(Serialize)]
struct SolveBody {
    epsilon: f64,
    grid: GridSummary,
    certificate: EquilibriumCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    vtable_path: Option<String>,
}

#[derive(Serialize)]
struct LearnParameters {
    epsilon: f64,
    #[serde(flatten)]
    resolved: ResolvedParameters,
    regret_samples: u64,
    snapshot_every: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_file: Option<String>,
}

#[derive(Serialize)]
struct DiagnosticsSummary {
    psi_scale: f64,
    psi_expression: f64,
    explicit_bound: f64,
    visits: usize,
    longest_visit: u64,
}

impl From<&LearnDiagnostics> for DiagnosticsSummary {
    fn from(d: &LearnDiagnostics) -> Self {
        DiagnosticsSummary {
            psi_scale: d.psi_scale,
            psi_expression: d.psi_expression,
            explicit_bound: d.explicit_bound,
            visits: d.visits.len(),
            longest_visit: d.longest_visit(),
        }
    }
}

#[derive(Serialize)]
struct LearnBody {
    parameters: LearnParameters,
    termination: Termination,
    final_mu: f64,
    diagnostics: DiagnosticsSummary,
    certificate: EquilibriumCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory_path: Option<String>,
}

#[derive(Serialize)]
struct VerifyBody {
    certificate_file: String,
    mode: &'static str,
    valid: bool,
    epsilon_claimed: f64,
    recomputed_max: f64,
    recomputed_regrets: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_errors: Option<Vec<f64>>,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct BruteBody {
    epsilon_star: f64,
    best_profile: PureProfile,
    profiles_examined: u64,
}

struct LoadedGame {
    game: SummGame,
    header: Header,
}

fn read(path: &Path) -> Outcome<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &Path, command: &'static str) -> Outcome<LoadedGame> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))?;
    let game = parse_game(&text).map_err(|e| match Failure::from(e) {
        Failure::Capability(m) => Failure::Capability(format!("{}: {m}", path.display())),
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        Failure::Invalid => Failure::Invalid,
    })?;
    let header = Header {
        tool: TOOL,
        version: VERSION,
        command,
        game_file: path.display().to_string(),
        game_digest: hex::encode(Sha256::digest(&bytes)),
        players: game.players(),
        summarization: game.summarization().kind(),
        tau: game.tau(),
        rho: game.rho(),
    };
    Ok(LoadedGame { game, header })
}

fn emit<B: Serialize>(header: Header, body: B, started: Instant) -> Outcome<()> {
    let doc = Document {
        header,
        body,
        wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let text = serde_json::to_string_pretty(&doc).expect("result documents always serialize");
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("cannot write {}: {e}", path.display()))
}

fn write_vtable(path: &Path, vt: &VTable) -> Outcome<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(["k_alpha", "v"])
        .map_err(|e| io_error(path, e))?;
    for (z, v) in vt.rows() {
        w.write_record([z.to_string(), v.to_string()])
            .map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

fn write_trajectory(
    path: &Path,
    params: &ResolvedParameters,
    trajectory: &Trajectory,
    n: usize,
) -> Outcome<()> {
    let mut file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    writeln!(
        file,
        "# alpha={} beta={} delta={} seed={}",
        params.alpha, params.beta, params.delta, params.seed
    )
    .map_err(|e| io_error(path, e))?;
    let with_profiles = trajectory.records.iter().any(|r| r.profile.is_some());
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec![
        "t".to_string(),
        "mu".into(),
        "interval".into(),
        "max_delta".into(),
    ];
    if with_profiles {
        header.extend((0..n).map(|i| format!("p_{i}")));
    }
    w.write_record(&header).map_err(|e| io_error(path, e))?;
    for r in &trajectory.records {
        let mut row = vec![
            r.t.to_string(),
            r.mu.to_string(),
            r.interval.to_string(),
            r.max_delta.to_string(),
        ];
        if let Some(p) = &r.profile {
            row.extend(p.probs().iter().map(f64::to_string));
        }
        w.write_record(&row).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

fn solve(game: &Path, epsilon: f64, emit_vtable: Option<PathBuf>) -> Outcome<()> {
    let started = Instant::now();
    let loaded = load_game(game, "solve")?;
    let solution = summ_nash(&loaded.game, epsilon)?;
    if let Some(path) = &emit_vtable {
        write_vtable(path, &solution.v_table)?;
    }
    let body = SolveBody {
        epsilon,
        grid: solution.grid.into(),
        certificate: solution.certificate,
        vtable_path: emit_vtable.map(|p| p.display().to_string()),
    };
    emit(loaded.header, body, started)
}

#[allow(clippy::too_many_arguments)]
fn learn(
    game: &Path,
    epsilon: f64,
    beta: Option<f64>,
    delta: f64,
    max_steps: Option<u64>,
    seed: u64,
    regret_samples: u64,
    initial: Option<f64>,
    initial_file: Option<PathBuf>,
    trajectory: Option<PathBuf>,
    snapshot_every: u64,
    with_profiles: bool,
) -> Outcome<()> {
    let started = Instant::now();
    let loaded = load_game(game, "learn")?;
    let n = loaded.game.players();
    let start = match (initial, &initial_file) {
        (Some(p), _) => Some(MixedProfile::uniform(n, p)?),
        (None, Some(path)) => {
            let probs: Vec<f64> = serde_json::from_slice(&read(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if probs.len() != n {
                return Err(Failure::Input(format!(
                    "{}: expected {n} probabilities, found {}",
                    path.display(),
                    probs.len()
                )));
            }
            Some(MixedProfile::new(probs)?)
        }
        (None, None) => None,
    };
    let mut config = LearnConfig::new(epsilon, delta);
    config.beta = beta;
    config.max_steps = max_steps;
    config.seed = seed;
    config.regret_samples = regret_samples;
    config.initial = start;
    config.snapshot_every = snapshot_every;
    config.store_profiles = with_profiles;
    let outcome = run_summ_learn(&loaded.game, &config)?;
    if let Some(path) = &trajectory {
        write_trajectory(path, &outcome.parameters, &outcome.trajectory, n)?;
    }
    let body = LearnBody {
        parameters: LearnParameters {
            epsilon,
            resolved: outcome.parameters,
            regret_samples,
            snapshot_every,
            initial,
            initial_file: initial_file.map(|p| p.display().to_string()),
        },
        termination: outcome.trajectory.termination,
        final_mu: outcome.trajectory.final_mu,
        diagnostics: (&outcome.diagnostics).into(),
        certificate: outcome.certificate,
        trajectory_path: trajectory.map(|p| p.display().to_string()),
    };
    emit(loaded.header, body, started)
}

fn read_certificate(path: &Path) -> Outcome<EquilibriumCertificate> {
    let bad = |e: serde_json::Error| Failure::Input(format!("{}: {e}", path.display()));
    let mut value: serde_json::Value = serde_json::from_slice(&read(path)?).map_err(bad)?;
    if let Some(inner) = value.get_mut("certificate") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(bad)
}

fn verify(
    game: &Path,
    certificate: &Path,
    mode: Option<Mode>,
    samples: u64,
    seed: u64,
) -> Outcome<()> {
    let started = Instant::now();
    let loaded = load_game(game, "verify")?;
    let cert = read_certificate(certificate)?;
    let (mode_name, mode) = match mode {
        None => ("certificate", None),
        Some(Mode::Exact) => ("exact", Some(RegretMode::Exact)),
        Some(Mode::Mc) => ("mc", Some(RegretMode::MonteCarlo { samples, seed })),
    };
    let report = validate_certificate(&loaded.game, &cert, mode)?;
    let valid = report.valid;
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    let body = VerifyBody {
        certificate_file: certificate.display().to_string(),
        mode: mode_name,
        valid,
        epsilon_claimed: cert.epsilon_claimed,
        recomputed_max: report.recomputed_max,
        recomputed_regrets: report.recomputed_regrets,
        std_errors: report.std_errors,
        violations: report.violations,
    };
    emit(loaded.header, body, started)?;
    if valid {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn brute(game: &Path) -> Outcome<()> {
    let started = Instant::now();
    let loaded = load_game(game, "brute")?;
    let report = brute_min_epsilon(&loaded.game)?;
    let body = BruteBody {
        epsilon_star: report.epsilon_star,
        best_profile: report.best_profile,
        profiles_examined: report.profiles_examined,
    };
    emit(loaded.header, body, started)
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::Solve {
            game,
            epsilon,
            emit_vtable,
        } => solve(&game, epsilon, emit_vtable),
        Command::Learn {
            game,
            epsilon,
            beta,
            delta,
            max_steps,
            seed,
            regret_samples,
            initial,
            initial_file,
            trajectory,
            snapshot_every,
            with_profiles,
        } => learn(
            &game,
            epsilon,
            beta,
            delta,
            max_steps,
            seed,
            regret_samples,
            initial,
            initial_file,
            trajectory,
            snapshot_every,
            with_profiles,
        ),
        Command::Verify {
            game,
            certificate,
            mode,
            samples,
            seed,
        } => verify(&game, &certificate, mode, samples, seed),
        Command::Brute { game } => brute(&game),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capability(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
